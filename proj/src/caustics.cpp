#include "whitcaus/caustics.hpp"

#include <cmath>
#include <stdexcept>

namespace whitcaus {

std::string to_string(Zone z) {
    switch (z) {
        case Zone::Shadow: return "Shadow";
        case Zone::Light1: return "Light1";
        case Zone::Light2: return "Light2";
        case Zone::Caustic1: return "Caustic1";
        case Zone::Caustic2: return "Caustic2";
        case Zone::CuspPoint: return "CuspPoint";
    }
    return "?";
}

std::string to_string(Degeneracy d) {
    switch (d) {
        case Degeneracy::NonDegenerate: return "NonDegenerate";
        case Degeneracy::FoldA2: return "FoldA2";
        case Degeneracy::CuspA3: return "CuspA3";
    }
    return "?";
}

ChamberPoint ChamberPoint::from_double(double y1, double y2) {
    ChamberPoint p;
    p.y1 = y1;
    p.y2 = y2;
    Rational r1(y1), r2(y2);
    p.a = r1 * r1;
    p.b = r2 * r2;
    return p;
}

ChamberPoint ChamberPoint::from_squares(const Rational& y1sq, const Rational& y2sq) {
    ChamberPoint p;
    p.a = y1sq;
    p.b = y2sq;
    p.a.canonicalize();
    p.b.canonicalize();
    p.y1 = std::sqrt(p.a.get_d());
    p.y2 = std::sqrt(p.b.get_d());
    return p;
}

Rational outer_defect(const ChamberPoint& p) { return p.a + p.b - 1; }

Rational inner_defect(const ChamberPoint& p) {
    const Rational& a = p.a;
    const Rational& b = p.b;
    return 27 * a * a * b * b - 18 * a * b + 4 * a + 4 * b - 1;
}

Zone zone(const ChamberPoint& p, double tol) {
    if (tol < 0) throw std::invalid_argument("zone: negative tolerance");
    const Rational d1 = outer_defect(p), d2 = inner_defect(p);
    if (tol == 0.0) {
        if (p.a == Rational(1, 3) && p.b == Rational(1, 3)) return Zone::CuspPoint;
        if (d1 == 0) return Zone::Caustic1;
        if (d1 > 0) return Zone::Shadow;
        if (d2 == 0) return Zone::Caustic2;
        return d2 < 0 ? Zone::Light1 : Zone::Light2;
    }
    const double c = 1.0 / std::sqrt(3.0);
    if (std::abs(p.y1 - c) <= tol && std::abs(p.y2 - c) <= tol) return Zone::CuspPoint;
    if (std::abs(d1.get_d()) <= tol) return Zone::Caustic1;
    if (d1 > 0) return Zone::Shadow;
    if (std::abs(d2.get_d()) <= tol) return Zone::Caustic2;
    return d2 < 0 ? Zone::Light1 : Zone::Light2;
}

double BiPoly::eval(double x1, double x2) const {
    double s = 0;
    for (const auto& [ij, c] : terms) s += c.get_d() * std::pow(x1, ij.first) * std::pow(x2, ij.second);
    return s;
}

BiPoly build_C_x(const ChamberPoint& p) {
    BiPoly c;
    c.terms[{2, 0}] = 1;
    c.terms[{1, 1}] = 1;
    c.terms[{0, 2}] = 1;
    c.terms[{0, 0}] = -3 * (1 - p.a - p.b);
    return c;
}

BiPoly build_E_x(const ChamberPoint& p) {
    BiPoly e;
    e.terms[{3, 0}] = 2;
    e.terms[{2, 1}] = 3;
    e.terms[{1, 2}] = -3;
    e.terms[{0, 3}] = -2;
    e.terms[{1, 0}] = 9 * p.a - 18 * p.b;
    e.terms[{0, 1}] = 18 * p.a - 9 * p.b;
    return e;
}

BiPoly build_D_x(const ChamberPoint& p) {
    BiPoly d;
    d.terms[{1, 0}] = p.a;
    d.terms[{0, 1}] = p.b;
    d.terms[{2, 1}] = -1;
    d.terms[{1, 2}] = -1;
    return d;
}

namespace {

// Substitutes x = R·(p1, p2)/q into a polynomial whose monomials have total
// degree 1 or 3 and multiplies by q^3/R, leaving only R^2 = 3(1-a-b).
RatPoly substitute(const BiPoly& f, const ChamberPoint& pt) {
    const RatPoly p1({1, 0, -1}), p2({0, 2, 1}), q({1, 1, 1});
    const Rational R2 = 3 * (1 - pt.a - pt.b);
    const int top = 3, low = 1;
    RatPoly out;
    for (const auto& [ij, c] : f.terms) {
        const int d = ij.first + ij.second;
        RatPoly term = RatPoly::constant(c);
        for (int k = 0; k < ij.first; ++k) term *= p1;
        for (int k = 0; k < ij.second; ++k) term *= p2;
        for (int k = d; k < top; ++k) term *= q;
        for (int k = low; k < d; k += 2) term *= R2;
        out += term;
    }
    return out;
}

Rational primitive_scale(const RatPoly& e) {
    mpz_class l = 1, g = 0;
    for (const auto& c : e.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& c : e.coeffs()) {
        mpz_class v = mpq_class(c * l).get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    Rational s(l, g);
    if (e.lead() < 0) s = -s;
    return s;
}

void require_inside(const ChamberPoint& p) {
    if (p.a + p.b >= 1) throw std::domain_error("t-form requires y1^2 + y2^2 < 1");
}

}  // namespace

RatPoly build_E(const ChamberPoint& p) {
    require_inside(p);
    RatPoly e = substitute(build_E_x(p), p);
    return e * primitive_scale(e);
}

RatPoly build_D(const ChamberPoint& p) {
    require_inside(p);
    RatPoly e = substitute(build_E_x(p), p);
    // the substituted E is 3x the normalized t-form relation partner of D
    return substitute(build_D_x(p), p) * (3 * primitive_scale(e));
}

RatPoly build_E_form(const ChamberPoint& p) {
    require_inside(p);
    return substitute(build_E_x(p), p) * Rational(1, 3);
}

RatPoly build_D_form(const ChamberPoint& p) {
    require_inside(p);
    return substitute(build_D_x(p), p);
}

RatPoly build_C(const ChamberPoint& p) {
    require_inside(p);
    // C(R p/q) q^2 / R^2 with R^2 = 3(1 - a - b)
    const RatPoly p1({1, 0, -1}), p2({0, 2, 1}), q({1, 1, 1});
    const BiPoly c = build_C_x(p);
    RatPoly quad = c.terms.at({2, 0}) * p1 * p1 + c.terms.at({1, 1}) * p1 * p2 + c.terms.at({0, 2}) * p2 * p2;
    return quad + (c.terms.at({0, 0}) / (3 * (1 - p.a - p.b))) * q * q;
}

std::pair<double, double> ellipse_point(const ChamberPoint& p, double t, bool at_infinity) {
    const double R = std::sqrt(std::max(0.0, 3.0 * (1.0 - p.a.get_d() - p.b.get_d())));
    if (at_infinity) return {-R, R};
    const double q = 1 + t + t * t;
    return {(1 - t * t) / q * R, t * (t + 2) / q * R};
}

Degeneracy degeneracy_from_multiplicity(int m) {
    if (m <= 1) return Degeneracy::NonDegenerate;
    if (m == 2) return Degeneracy::FoldA2;
    return Degeneracy::CuspA3;
}

Fiber fiber(const ChamberPoint& p) {
    Fiber f;
    f.base = p;
    f.zone = zone(p, 0.0);
    const Rational d1 = outer_defect(p);
    if (d1 > 0) return f;
    if (d1 == 0) {
        FiberPoint fp;
        fp.jacobi = {0.0, 0.0, p.y1, p.y2};
        fp.c1_degenerate = true;
        fp.multiplicity = 2;
        fp.degeneracy = Degeneracy::FoldA2;
        f.points.push_back(fp);
        return f;
    }
    const RatPoly E = build_E(p);
    for (const auto& r : real_roots(E)) {
        FiberPoint fp;
        auto [x1, x2] = ellipse_point(p, r.value);
        fp.jacobi = {x1, x2, p.y1, p.y2};
        fp.t_param = r.value;
        fp.multiplicity = r.multiplicity;
        fp.degeneracy = degeneracy_from_multiplicity(r.multiplicity);
        f.points.push_back(fp);
    }
    if (E.degree() < 6) {
        // roots at t = infinity of the projective parametrization
        FiberPoint fp;
        auto [x1, x2] = ellipse_point(p, 0.0, true);
        fp.jacobi = {x1, x2, p.y1, p.y2};
        fp.t_infinite = true;
        fp.multiplicity = 6 - E.degree();
        fp.degeneracy = degeneracy_from_multiplicity(fp.multiplicity);
        f.points.push_back(fp);
    }
    return f;
}

ChamberPoint snap_to_inner_caustic(const ChamberPoint& p) {
    const bool swap = p.a > p.b;
    const double A = (swap ? p.b : p.a).get_d();
    const double B = (swap ? p.a : p.b).get_d();
    const double sd = std::sqrt(std::max(0.0, 1.0 - 3.0 * A));
    const double scale = 16777216.0;
    Rational s(static_cast<long>(std::llround(sd * scale)), static_cast<long>(scale));
    if (s >= 1) s = Rational(16777215, 16777216);
    const Rational a = (1 - s * s) / 3;
    const Rational bp = (18 * a - 4 + 4 * s * s * s) / (54 * a * a);
    const Rational bm = (18 * a - 4 - 4 * s * s * s) / (54 * a * a);
    const Rational b = std::abs(bp.get_d() - B) <= std::abs(bm.get_d() - B) ? bp : bm;
    return swap ? ChamberPoint::from_squares(b, a) : ChamberPoint::from_squares(a, b);
}

Fiber fiber(const ChamberPoint& p, double tol) {
    const Zone z = zone(p, tol);
    switch (z) {
        case Zone::CuspPoint: return fiber(ChamberPoint::from_squares(Rational(1, 3), Rational(1, 3)));
        case Zone::Caustic1: {
            // keep y1^2 (rounded to a 2^-30 grid), put y2^2 = 1 - y1^2
            Rational a(static_cast<long>(std::llround(p.a.get_d() * 1073741824.0)), 1073741824L);
            return fiber(ChamberPoint::from_squares(a, 1 - a));
        }
        case Zone::Caustic2: return fiber(snap_to_inner_caustic(p));
        default: return fiber(p);
    }
}

FiberPoint involution(const FiberPoint& fp) {
    if (fp.c1_degenerate) throw std::domain_error("involution: fixed point x = 0");
    FiberPoint out = fp;
    out.jacobi.x1 = -fp.jacobi.x1;
    out.jacobi.x2 = -fp.jacobi.x2;
    if (fp.t_infinite) {
        out.t_infinite = false;
        out.t_param = -0.5;
    } else if (2 * fp.t_param + 1 == 0.0) {
        out.t_infinite = true;
        out.t_param = 0.0;
    } else {
        out.t_param = (fp.t_param + 2) / (-2 * fp.t_param - 1);
    }
    return out;
}

}  // namespace whitcaus
