#include "whitcaus/whittaker.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "whitcaus/parallel.hpp"

namespace whitcaus {

using std::numbers::pi;

// stade_check(1) fits 2.0001 at t = 1 and t = 3 (the excess is the y_min truncation)
const double kGL3Norm = 2.0;
const double kGL2Norm = std::numbers::sqrt2;

// ----- SpectralParam --------------------------------------------------------

SpectralParam SpectralParam::self_dual(double t) {
    SpectralParam p;
    p.n = 3;
    p.t = t;
    p.direction = {1.0, 0.0, -1.0};
    p.validate();
    return p;
}

SpectralParam SpectralParam::gl2(double tau) {
    SpectralParam p;
    p.n = 2;
    p.t = tau / (2 * pi);
    p.direction = {1.0, -1.0, 0.0};
    p.validate();
    return p;
}

double SpectralParam::scale() const { return 2 * pi * t; }
double SpectralParam::tau() const { return scale() * direction[0]; }

std::array<double, 3> SpectralParam::h_nu() const {
    return {scale() * direction[0], scale() * direction[1], n == 3 ? scale() * direction[2] : 0.0};
}

std::array<cplx, 3> SpectralParam::mu() const {
    auto h = h_nu();
    return {cplx(0, h[0]), cplx(0, h[1]), cplx(0, h[2])};
}

double SpectralParam::laplace_eigenvalue() const {
    auto h = h_nu();
    if (n == 2) return 0.25 + h[0] * h[0];
    return 1.0 + 0.5 * (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
}

double SpectralParam::c_exponent(int n) { return n * (n - 1) * (n - 2) / 24.0; }

void SpectralParam::validate() const {
    if (n != 2 && n != 3) throw std::invalid_argument("SpectralParam: n must be 2 or 3");
    if (!(t > 0)) throw std::invalid_argument("SpectralParam: t must be positive");
    const double s = direction[0] + direction[1] + (n == 3 ? direction[2] : 0.0);
    if (std::abs(s) > 1e-12) throw std::invalid_argument("SpectralParam: direction must be traceless");
}

// ----- phase ----------------------------------------------------------------

namespace {

Mat3 h_matrix(const SpectralParam& nu) {
    auto h = nu.h_nu();
    return Eigen::Vector3d(h[0], h[1], h[2]).asDiagonal();
}

Mat3 wu(const UnipotentPoint& u) { return long_weyl() * unipotent(u.u12, u.u13, u.u23); }

double trace_h_log_a(const Mat3& g, const SpectralParam& nu) {
    IwasawaParts p = iwasawa(g);
    auto h = nu.h_nu();
    return h[0] * std::log(p.a(0, 0)) + h[1] * std::log(p.a(1, 1)) + h[2] * std::log(p.a(2, 2));
}

// Directional derivatives G_X = Tr(k^T H k X') along right translations, converted
// to coordinate partials; X' = g^{-1} X g.
Vec3 iwasawa_gradient(const UnipotentPoint& u, const Mat3& g, const SpectralParam& nu) {
    const Mat3 k = iwasawa(wu(u) * g).k;
    const Mat3 M = k.transpose() * h_matrix(nu) * k;
    const Mat3 gi = g.inverse();
    auto G = [&](int i, int j) {
        Mat3 X = Mat3::Zero();
        X(i, j) = 1.0;
        return (M * gi * X * g).trace();
    };
    const double g12 = G(0, 1), g13 = G(0, 2), g23 = G(1, 2);
    return {g12, g13, g23 - u.u12 * g13};
}

void require_n3(const SpectralParam& nu, const char* what) {
    if (nu.n != 3) throw std::invalid_argument(std::string(what) + ": requires n = 3");
}

}  // namespace

double phase_F(const UnipotentPoint& u, const ChamberPoint& p, const SpectralParam& nu) {
    require_n3(nu, "phase_F");
    return trace_h_log_a(wu(u), nu) - 2 * pi * nu.t * (p.y1 * u.u12 + p.y2 * u.u23);
}

double phase_F_unscaled(const UnipotentPoint& u, const Mat3& g, const SpectralParam& nu) {
    require_n3(nu, "phase_F_unscaled");
    return trace_h_log_a(wu(u) * g, nu) - 2 * pi * (u.u12 + u.u23);
}

double phase_phi_closed(const UnipotentPoint& u, double y1, double y2) {
    const double d1 = 1 + u.u12 * u.u12 + u.u13 * u.u13;
    const double m = u.u13 - u.u12 * u.u23;
    const double d2 = 1 + u.u23 * u.u23 + m * m;
    return -0.5 * std::log(d1 * d2) - (y1 * u.u12 + y2 * u.u23);
}

double phase_gl2(double x, double y, double tau) { return -tau * std::log1p(x * x) - 2 * pi * x * y; }

Vec3 grad_F(const UnipotentPoint& u, const ChamberPoint& p, const SpectralParam& nu) {
    require_n3(nu, "grad_F");
    Vec3 g = iwasawa_gradient(u, Mat3::Identity(), nu);
    g(0) -= 2 * pi * nu.t * p.y1;
    g(2) -= 2 * pi * nu.t * p.y2;
    return g;
}

Vec3 grad_F_unscaled(const UnipotentPoint& u, const Mat3& g, const SpectralParam& nu) {
    require_n3(nu, "grad_F_unscaled");
    Vec3 r = iwasawa_gradient(u, g, nu);
    r(0) -= 2 * pi;
    r(2) -= 2 * pi;
    return r;
}

Mat3 hessian_F(const UnipotentPoint& u, const ChamberPoint& p, const SpectralParam& nu, double step) {
    Mat3 H;
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e(j) = step;
        H.col(j) = (grad_F(UnipotentPoint::from_vec(u.vec() + e), p, nu) -
                    grad_F(UnipotentPoint::from_vec(u.vec() - e), p, nu)) /
                   (2 * step);
    }
    return 0.5 * (H + H.transpose());
}

// ----- critical points ------------------------------------------------------

namespace {

// gradient and Hessian of phi = F / (2 pi t) for the self-dual ray
SpectralParam unit_param() { return SpectralParam::self_dual(1.0 / (2 * pi)); }

Vec3 grad_phi(const Vec3& u, const ChamberPoint& p) { return grad_F(UnipotentPoint::from_vec(u), p, unit_param()); }

Mat3 hess_phi(const Vec3& u, const ChamberPoint& p, double step) {
    return hessian_F(UnipotentPoint::from_vec(u), p, unit_param(), step);
}

std::optional<Vec3> newton(Vec3 u, const ChamberPoint& p, double tol, double limit) {
    for (int it = 0; it < 80; ++it) {
        const Vec3 g = grad_phi(u, p);
        if (g.norm() <= tol) return u;
        const Mat3 H = hess_phi(u, p, 1e-5);
        Eigen::JacobiSVD<Mat3> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vec3 sv = svd.singularValues();
        Vec3 inv;
        for (int i = 0; i < 3; ++i) inv(i) = sv(i) > 1e-12 * sv(0) ? 1.0 / sv(i) : 0.0;
        Vec3 step = -svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * g;
        const double sn = step.norm();
        if (!std::isfinite(sn)) return std::nullopt;
        const double maxstep = 1.0 + 0.5 * u.norm();
        if (sn > maxstep) step *= maxstep / sn;
        u += step;
        if (u.norm() > limit) return std::nullopt;
    }
    if (grad_phi(u, p).norm() <= tol) return u;
    return std::nullopt;
}

void doolittle(const Mat3& A, Mat3& L, Mat3& U) {
    L = Mat3::Identity();
    U = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int k = i; k < 3; ++k) {
            double s = A(i, k);
            for (int j = 0; j < i; ++j) s -= L(i, j) * U(j, k);
            U(i, k) = s;
        }
        if (std::abs(U(i, i)) < 1e-14) throw std::runtime_error("unipotent_from_moment: not in the big cell");
        for (int k = i + 1; k < 3; ++k) {
            double s = A(k, i);
            for (int j = 0; j < i; ++j) s -= L(k, j) * U(j, i);
            L(k, i) = s / U(i, i);
        }
    }
}

Sym3 moment_of(const Vec3& u) {
    const Mat3 k = iwasawa(wu(UnipotentPoint::from_vec(u))).k;
    return Sym3::from_matrix(k.transpose() * Sym3::diag(1, 0, -1).matrix() * k);
}

void attach_hessian_data(CriticalPoint& c, const ChamberPoint& p) {
    const Vec3 u = c.u.vec();
    c.hessian = hess_phi(u, p, 1e-4);
    Eigen::SelfAdjointEigenSolver<Mat3> es(c.hessian);
    c.eigenvalues = es.eigenvalues();
    const double scale = c.eigenvalues.cwiseAbs().maxCoeff();
    c.corank = 0;
    c.signature_transverse = 0;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(c.eigenvalues(i)) <= 1e-6 * scale)
            ++c.corank;
        else
            c.signature_transverse += c.eigenvalues(i) > 0 ? 1 : -1;
    }
    c.phase = phase_phi_closed(c.u, p.y1, p.y2);
    c.delta_half = delta_half(wu(c.u));
    c.grad_norm = grad_phi(u, p).norm();
    c.moment = moment_of(u);
}

}  // namespace

UnipotentPoint unipotent_from_moment(const Sym3& s) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(s.matrix());
    // eigenvalues ascending (-1, 0, 1): Q = [v(1) v(0) v(-1)]
    Mat3 Q;
    Q.col(0) = es.eigenvectors().col(2);
    Q.col(1) = es.eigenvectors().col(1);
    Q.col(2) = es.eigenvectors().col(0);
    if (Q.determinant() < 0) Q.col(2) = -Q.col(2);
    const Mat3 k0 = Q.transpose();
    const Mat3 w = long_weyl();
    // k0 = b (w u w^{-1}) w, so (k0 w^{-1})^{-1} = w k0^T is (unit lower)·(upper)
    Mat3 Ld, Ud;
    doolittle(w * k0.transpose(), Ld, Ud);
    const Mat3 L = Ld.inverse();
    const Mat3 u = w.inverse() * L * w;
    return {u(0, 1), u(0, 2), u(1, 2)};
}

std::vector<CriticalPoint> critical_points(const ChamberPoint& p, const SpectralParam& nu, const CriticalOptions& opt) {
    require_n3(nu, "critical_points");
    if (std::abs(nu.direction[0] - 1) > 1e-12 || std::abs(nu.direction[1]) > 1e-12)
        throw std::invalid_argument("critical_points: self-dual direction required");
    const Fiber fib = fiber(p, 1e-9);
    const size_t expected = fib.points.size();
    std::vector<CriticalPoint> found;
    const double box = std::max(4.0, 2.0 / std::min(p.y1, p.y2));

    auto add = [&](const Vec3& u) {
        for (auto& c : found)
            if ((c.u.vec() - u).norm() <= 1e-5 * (1 + u.norm())) return;
        CriticalPoint c;
        c.u = UnipotentPoint::from_vec(u);
        found.push_back(c);
    };

    for (const auto& fp : fib.points) {
        try {
            Vec3 u0 = unipotent_from_moment(fp.jacobi.to_sym()).vec();
            if (auto r = newton(u0, p, opt.grad_tol, 100 * box)) add(*r);
        } catch (const std::runtime_error&) {
        }
    }
    int grid = opt.grid;
    for (int round = 0; round <= opt.max_refinements && found.size() < expected; ++round, grid *= 2) {
        std::vector<std::optional<Vec3>> res(static_cast<size_t>(grid * grid * grid));
        parallel_for(res.size(), [&](size_t idx) {
            const int i = static_cast<int>(idx) / (grid * grid), j = (static_cast<int>(idx) / grid) % grid,
                      k = static_cast<int>(idx) % grid;
            auto c = [&](int m) { return -box + 2 * box * (m + 0.5) / grid; };
            res[idx] = newton(Vec3(c(i), c(j), c(k)), p, opt.grad_tol, 10 * box);
        });
        for (auto& r : res)
            if (r) add(*r);
    }
    if (found.size() != expected) throw std::runtime_error("incomplete critical set");

    for (auto& c : found) {
        attach_hessian_data(c, p);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& fp : fib.points) {
            const double d = (fp.jacobi.to_sym().matrix() - c.moment.matrix()).norm();
            if (d < best) {
                best = d;
                c.degeneracy = fp.degeneracy;
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return std::tie(a.u.u12, a.u.u13, a.u.u23) < std::tie(b.u.u12, b.u.u13, b.u.u23);
    });
    return found;
}

// ----- reduction along the kernel at a cusp critical point --------------------

namespace {

const double kR3 = std::sqrt(3.0);

ChamberPoint cusp_point() { return ChamberPoint::from_squares(Rational(1, 3), Rational(1, 3)); }

UnipotentPoint cusp_u(int sign) {
    const double c = -sign - kR3;
    return {c, 2 + sign * kR3, c};
}

struct KernelFrame {
    Vec3 base, v, e1, e2;
    Eigen::Matrix2d q0;  // transverse Hessian in (e1, e2)
    double det_q0 = 0;
    int signature = 0;
    double delta = 0;
};

KernelFrame kernel_frame(int sign) {
    KernelFrame f;
    f.base = cusp_u(sign).vec();
    const ChamberPoint a = cusp_point();
    const Mat3 H = hess_phi(f.base, a, 1e-4);
    Eigen::SelfAdjointEigenSolver<Mat3> es(H);
    int ker = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(ker))) ker = i;
    f.v = es.eigenvectors().col(ker);
    std::vector<int> rest;
    for (int i = 0; i < 3; ++i)
        if (i != ker) rest.push_back(i);
    f.e1 = es.eigenvectors().col(rest[0]);
    f.e2 = es.eigenvectors().col(rest[1]);
    f.q0 << es.eigenvalues()(rest[0]), 0, 0, es.eigenvalues()(rest[1]);
    f.det_q0 = std::abs(es.eigenvalues()(rest[0]) * es.eigenvalues()(rest[1]));
    f.signature = (es.eigenvalues()(rest[0]) > 0 ? 1 : -1) + (es.eigenvalues()(rest[1]) > 0 ? 1 : -1);
    f.delta = delta_half(wu(cusp_u(sign)));
    return f;
}

// psi(w) = phi(base + w v + z*(w)) where z* solves the transverse critical equations
double reduced_phase(const KernelFrame& f, const ChamberPoint& p, double w, Eigen::Vector2d& z) {
    for (int it = 0;; ++it) {
        const Vec3 u = f.base + w * f.v + z(0) * f.e1 + z(1) * f.e2;
        const Vec3 g = grad_phi(u, p);
        Eigen::Vector2d r(g.dot(f.e1), g.dot(f.e2));
        if (r.norm() < 1e-13) break;
        if (it == 60) throw std::runtime_error("kernel reduction: transverse solve did not converge");
        const Mat3 H = hess_phi(u, p, 1e-5);
        Eigen::Matrix2d J;
        J << f.e1.dot(H * f.e1), f.e1.dot(H * f.e2), f.e2.dot(H * f.e1), f.e2.dot(H * f.e2);
        z -= J.fullPivLu().solve(r);
    }
    const Vec3 u = f.base + w * f.v + z(0) * f.e1 + z(1) * f.e2;
    return phase_phi_closed(UnipotentPoint::from_vec(u), p.y1, p.y2);
}

// Taylor coefficients c0..c4 of psi at w = 0 from a least-squares fit of degree 8
std::array<double, 5> quartic_fit(const KernelFrame& f, const ChamberPoint& p, double W) {
    const int N = 41, deg = 8;
    std::vector<double> ws(N), vals(N);
    for (int i = 0; i < N; ++i) ws[static_cast<size_t>(i)] = -W + 2 * W * i / (N - 1);
    // march outward from 0 so each transverse solve starts near its answer
    Eigen::Vector2d z0 = Eigen::Vector2d::Zero();
    const int mid = N / 2;
    vals[mid] = reduced_phase(f, p, 0.0, z0);
    for (int dir : {1, -1}) {
        Eigen::Vector2d z = z0;
        for (int i = mid + dir; i >= 0 && i < N; i += dir)
            vals[static_cast<size_t>(i)] = reduced_phase(f, p, ws[static_cast<size_t>(i)], z);
    }
    Eigen::MatrixXd A(N, deg + 1);
    Eigen::VectorXd b(N);
    for (int i = 0; i < N; ++i) {
        const double x = ws[static_cast<size_t>(i)] / W;
        double pw = 1;
        for (int j = 0; j <= deg; ++j, pw *= x) A(i, j) = pw;
        b(i) = vals[static_cast<size_t>(i)];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    std::array<double, 5> out{};
    for (int j = 0; j <= 4; ++j) out[static_cast<size_t>(j)] = c(j) / std::pow(W, j);
    return out;
}

}  // namespace

CuspReport hessian_invariants_at_cusp() {
    CuspReport r;
    const ChamberPoint a = cusp_point();
    for (int sign : {1, -1}) {
        CuspSide& s = sign > 0 ? r.plus : r.minus;
        s.u = cusp_u(sign);
        CriticalPoint c;
        c.u = s.u;
        attach_hessian_data(c, a);
        s.grad_norm = c.grad_norm;
        s.eigenvalues = c.eigenvalues;
        s.corank = c.corank;
        s.signature = c.signature_transverse;
        KernelFrame f = kernel_frame(sign);
        s.det_q0 = f.det_q0;
        s.det_q0_expected = (13 - sign * 4 * kR3) / 288;
        s.delta_half = c.delta_half;
        s.delta_half_expected = 1 / (12 + sign * 6 * kR3);
        s.quartic = quartic_fit(f, a, 0.3)[4];
    }
    r.ratio = std::sqrt(r.minus.det_q0 / r.plus.det_q0) * r.plus.delta_half / r.minus.delta_half;
    r.ratio_expected = 121 / (2767 + 1596 * kR3);
    r.ratio_with_quartic = r.ratio * std::pow(std::abs(r.minus.quartic / r.plus.quartic), 0.25);
    r.corank_ok = r.plus.corank == 1 && r.minus.corank == 1;
    r.signature_ok = std::abs(r.plus.signature) == 2 && r.plus.signature == -r.minus.signature;
    r.delta_ok = std::abs(r.plus.delta_half - r.plus.delta_half_expected) <= 1e-10 * r.plus.delta_half_expected &&
                 std::abs(r.minus.delta_half - r.minus.delta_half_expected) <= 1e-10 * r.minus.delta_half_expected;
    r.det_ok = std::abs(r.plus.det_q0 - r.plus.det_q0_expected) <= 1e-6 * r.plus.det_q0_expected &&
               std::abs(r.minus.det_q0 - r.minus.det_q0_expected) <= 1e-6 * r.minus.det_q0_expected;
    r.ratio_ok = std::abs(r.ratio - r.ratio_expected) <= 1e-6 * r.ratio_expected;
    return r;
}

// ----- Whittaker values -----------------------------------------------------

namespace {

// Gauss-Legendre panels of width <= h over [a, b]
template <class F>
cplx panel_sum(F&& f, double a, double b, double h) {
    using G = boost::math::quadrature::gauss<double, 20>;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    const double w = (b - a) / n;
    cplx total = 0;
    for (int i = 0; i < n; ++i) total += G::integrate(f, a + i * w, a + (i + 1) * w);
    return total;
}

}  // namespace

GL3Evaluator::GL3Evaluator(double t, double ymin_actual, double log_step) : t_(t), ymin_(ymin_actual) {
    if (!(t > 0) || !(ymin_actual > 0)) throw std::invalid_argument("GL3Evaluator: bad arguments");
    const double tau = 2 * pi * t;
    table_ = std::make_shared<BesselKitTable>(tau, 2 * pi * ymin_actual * 0.999, bessel_kit_cutoff(tau),
                                              log_step / std::max(1.0, tau));
    coarse_ = std::make_shared<BesselKitTable>(table_->coarsened());
    const cplx c(0.5, pi * t);
    log_prefactor_ = std::log(4 * std::pow(pi, 1.5)) - 2.0 * log_gamma(c) - log_gamma(2.0 * c - 0.5) - pi * tau;
}

cplx GL3Evaluator::integral(double Y1, double Y2) const { return integrate(*table_, Y1, Y2); }
cplx GL3Evaluator::integral_coarse(double Y1, double Y2) const { return integrate(*coarse_, Y1, Y2); }

cplx GL3Evaluator::integrate(const BesselKitTable& K, double Y1, double Y2) const {
    if (!(Y1 > 0) || !(Y2 > 0)) throw std::invalid_argument("GL3Evaluator: coordinates must be positive");
    if (std::min(Y1, Y2) < ymin_ * 0.999) throw std::invalid_argument("GL3Evaluator: point below table range");
    const double tau = 2 * pi * t_;
    const double xc = K.xmax();
    const double r1 = xc / (2 * pi * Y1), r2 = xc / (2 * pi * Y2);
    if (r1 <= 1 || r2 <= 1) return 0.0;
    const double s_lo = -std::log(r1 * r1 - 1), s_hi = std::log(r2 * r2 - 1);
    if (s_hi <= s_lo) return 0.0;
    auto f = [&](double s) {
        return K(2 * pi * Y1 * std::sqrt(1 + std::exp(-s))) * K(2 * pi * Y2 * std::sqrt(1 + std::exp(s)));
    };
    const cplx F = panel_sum([&](double s) { return cplx(f(s), 0); }, s_lo, s_hi, std::min(0.5, 6.0 / tau));
    return std::exp(log_prefactor_ + cplx(0, tau * std::log(pi * pi * Y1 * Y2))) * F;
}

cplx jacquet_integral_gl2_bessel(double y, double tau) {
    return 2 * std::sqrt(pi) *
           std::exp(-log_gamma(cplx(0.5, tau)) + cplx(0, tau * std::log(pi * y)) - pi * tau / 2) *
           bessel_kit_scaled(tau, 2 * pi * y);
}

OscResult jacquet_integral_gl2(double y, double tau, const QuadConfig& cfg) {
    if (!(y > 0)) throw std::invalid_argument("jacquet_integral_gl2: y must be positive");
    // horizontal contour Im x = -eta through the complex saddle when 2 pi y > tau
    const double b = 2 * pi * y;
    const double eta = b > tau ? std::sqrt(b * b - tau * tau) / b : 0.0;
    const double center = b > tau ? -tau / b : -1.0;
    auto g = [&](double xi) {
        const cplx x(xi, -eta);
        const cplx L = std::log(1.0 + x * x);
        return cplx(0, 1) * (-tau * L - b * x) - 0.5 * L;
    };
    const double ref = g(center).real();
    Osc1DOptions opt;
    opt.center = center;
    opt.scale = 1.0;
    OscResult r = oscillatory_1d([&](double xi) { return g(xi).imag(); },
                                 [&](double xi) { return cplx(std::exp(g(xi).real() - ref), 0); }, cfg, opt);
    const double m = std::exp(ref);
    return {r.value * m, r.err_estimate * m};
}

OscResult jacquet_integral_gl3_direct(double Y1, double Y2, double t, const QuadConfig& cfg) {
    const double lam = 2 * pi * t;
    auto d12 = [](const double* u) {
        const double m = u[1] - u[0] * u[2];
        return (1 + u[0] * u[0] + u[1] * u[1]) * (1 + u[2] * u[2] + m * m);
    };
    return oscillatory_3d(
        [&](const double* u) { return -0.5 * lam * std::log(d12(u)) - 2 * pi * (Y1 * u[0] + Y2 * u[2]); },
        [&](const double* u) { return cplx(1.0 / std::sqrt(d12(u)), 0); }, cfg);
}

OscResult jacquet_whittaker(const ChamberPoint& p, const SpectralParam& nu, const WhittakerConfig& cfg) {
    nu.validate();
    if (nu.n == 2) {
        OscResult r = jacquet_integral_gl2(p.y1, nu.tau(), cfg.quad);
        const double f = kGL2Norm * std::sqrt(p.y1);
        return {r.value * f, r.err_estimate * f};
    }
    if (std::abs(nu.direction[0] - 1) > 1e-12 || std::abs(nu.direction[1]) > 1e-12)
        throw std::invalid_argument("jacquet_whittaker: n = 3 is implemented for the self-dual direction");
    const double norm = cfg.gl3_norm > 0 ? cfg.gl3_norm : kGL3Norm;
    const double Y1 = nu.t * p.y1, Y2 = nu.t * p.y2;
    const double pref = norm * Y1 * Y2;
    if (cfg.method == GL3Method::Direct3D) {
        OscResult r = jacquet_integral_gl3_direct(Y1, Y2, nu.t, cfg.quad);
        return {r.value * pref, r.err_estimate * pref};
    }
    GL3Evaluator ev(nu.t, std::min(Y1, Y2));
    const cplx I = ev.integral(Y1, Y2);
    // the coarse-table difference overestimates the spline error by about 16x
    return {I * pref, std::abs(I - ev.integral_coarse(Y1, Y2)) * pref};
}

// ----- stationary phase -----------------------------------------------------

cplx predict_morse(const ChamberPoint& p, const SpectralParam& nu, double gl3_norm) {
    require_n3(nu, "predict_morse");
    const double lam = nu.scale();
    const double norm = gl3_norm > 0 ? gl3_norm : kGL3Norm;
    cplx sum = 0;
    for (const auto& c : critical_points(p, nu)) {
        if (c.corank != 0) throw std::runtime_error("predict_morse: degenerate critical point present");
        const double det = std::abs(c.eigenvalues.prod());
        sum += std::pow(2 * pi / lam, 1.5) * c.delta_half / std::sqrt(det) *
               std::exp(cplx(0, lam * c.phase + pi * c.signature_transverse / 4.0));
    }
    return norm * nu.t * nu.t * p.y1 * p.y2 * sum;
}

bool in_pearcey_window(const ChamberPoint& p, double t, const PearceyWindow& w) {
    return std::abs(p.y1 + p.y2 - 2 / kR3) <= w.c_sum * std::pow(t, -0.75) + 1e-15 &&
           std::abs(p.y1 - p.y2) <= w.c_diff * std::pow(t, -0.5) + 1e-15;
}

PearceyPrediction predict_pearcey(const ChamberPoint& p, const SpectralParam& nu, const PearceyWindow& win,
                                  double gl3_norm) {
    require_n3(nu, "predict_pearcey");
    if (!in_pearcey_window(p, nu.t, win)) throw std::invalid_argument("predict_pearcey: point outside the window");
    const double lam = nu.scale();
    const double norm = gl3_norm > 0 ? gl3_norm : kGL3Norm;
    PearceyPrediction out;
    for (int sign : {1, -1}) {
        PearceyTerm& term = sign > 0 ? out.plus : out.minus;
        const KernelFrame f = kernel_frame(sign);
        const auto c = quartic_fit(f, p, 0.3);
        // remove the cubic term by a shift, then rescale to the normal form x^4/4
        const int s = c[4] > 0 ? 1 : -1;
        std::array<double, 5> q{};
        for (int j = 0; j <= 4; ++j) q[static_cast<size_t>(j)] = s * c[static_cast<size_t>(j)];
        const double w0 = -q[3] / (4 * q[4]);
        const double d0 = q[0] + q[1] * w0 + q[2] * w0 * w0 + q[3] * w0 * w0 * w0 + q[4] * std::pow(w0, 4);
        const double d1 = q[1] + 2 * q[2] * w0 + 3 * q[3] * w0 * w0 + 4 * q[4] * w0 * w0 * w0;
        const double d2 = q[2] + 3 * q[3] * w0 + 6 * q[4] * w0 * w0;
        const double alpha = std::pow(4 * lam * q[4], -0.25);
        term.pe_y1 = 2 * lam * d2 * alpha * alpha;
        term.pe_y2 = lam * d1 * alpha;
        term.pe = pearcey(term.pe_y1, term.pe_y2).value;
        cplx J = alpha * std::exp(cplx(0, lam * d0)) * term.pe;
        if (s < 0) J = std::conj(J);
        term.quartic = c[4];
        term.amplitude = f.delta / std::sqrt(2 * pi * f.det_q0);
        const cplx I = (2 * pi / lam) * std::exp(cplx(0, pi * f.signature / 4.0)) * f.delta / std::sqrt(f.det_q0) * J;
        term.value = norm * nu.t * nu.t * p.y1 * p.y2 * I;
    }
    out.value = out.plus.value + out.minus.value;
    return out;
}

// ----- Stade ----------------------------------------------------------------

double stade_rhs(double sigma, const SpectralParam& nu) {
    auto mu = nu.mu();
    cplx s = 0;
    for (int i = 0; i < nu.n; ++i)
        for (int j = 0; j < nu.n; ++j) {
            const cplx d = mu[static_cast<size_t>(i)] - mu[static_cast<size_t>(j)];
            s += log_gamma_R(sigma + d) - log_gamma_R(1.0 + d);
        }
    return std::exp(s.real());
}

StadeResult stade_check(double sigma, const SpectralParam& nu, const StadeOptions& opt) {
    nu.validate();
    StadeResult r;
    r.rhs = stade_rhs(sigma, nu);
    const double tau = nu.scale();
    if (nu.n == 2) {
        const double ylo = opt.y_min * 1e-4, yhi = bessel_kit_cutoff(tau) / (2 * pi);
        const double ppu = opt.points_per_unit > 0 ? opt.points_per_unit : std::max(60.0, 4 * tau);
        const int N = static_cast<int>(std::ceil(std::log(yhi / ylo) * ppu));
        const double h = std::log(yhi / ylo) / N;
        std::vector<double> v(static_cast<size_t>(N + 1));
        parallel_for(v.size(), [&](size_t i) {
            const double y = ylo * std::exp(h * static_cast<double>(i));
            const double W = kGL2Norm * std::sqrt(y) * std::abs(jacquet_integral_gl2_bessel(y, tau));
            v[i] = W * W * std::pow(y, sigma - 1);
        });
        double sum = 0;
        for (size_t i = 0; i < v.size(); ++i) sum += (i == 0 || i + 1 == v.size() ? 0.5 : 1.0) * v[i];
        r.lhs = std::exp(log_gamma_R(2 * sigma).real()) * sum * h;
        r.fitted_norm = kGL2Norm * std::sqrt(r.rhs / r.lhs);
        r.grid_points = N + 1;
        return r;
    }
    const double t = nu.t;
    const double ylo = opt.y_min * t, yhi = opt.y_max_factor * t;
    const double ppu = opt.points_per_unit > 0 ? opt.points_per_unit : std::max(25.0, 1.5 * tau);
    const int N = static_cast<int>(std::ceil(std::log(yhi / ylo) * ppu));
    const double h = std::log(yhi / ylo) / N;
    GL3Evaluator ev(t, ylo);
    std::vector<double> row(static_cast<size_t>(N + 1));
    parallel_for(row.size(), [&](size_t i) {
        const double Y1 = ylo * std::exp(h * static_cast<double>(i));
        double acc = 0;
        for (int j = 0; j <= N; ++j) {
            const double Y2 = ylo * std::exp(h * j);
            const double taper = 1.0 - smooth_step(std::max(Y1, Y2) / (0.5 * yhi));
            if (taper == 0.0) continue;
            const double W = kGL3Norm * Y1 * Y2 * std::abs(ev.integral(Y1, Y2));
            const double wj = (j == 0 || j == N) ? 0.5 : 1.0;
            acc += wj * taper * W * W * std::pow(Y1, sigma - 2) * std::pow(Y2, 2 * sigma - 2);
        }
        row[i] = acc * ((i == 0 || static_cast<int>(i) == N) ? 0.5 : 1.0);
    });
    double sum = 0;
    for (double x : row) sum += x;
    r.lhs = std::exp(log_gamma_R(3 * sigma).real()) * sum * h * h;
    r.fitted_norm = kGL3Norm * std::sqrt(r.rhs / r.lhs);
    r.grid_points = (N + 1) * (N + 1);
    return r;
}

// ----- sup-norm scan --------------------------------------------------------

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_slope: need >= 2 points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

SupnormReport supnorm_scan(const std::vector<double>& t_list, int n, int grid, const PearceyWindow& w) {
    if (t_list.size() < 3) throw std::invalid_argument("supnorm_scan: need at least 3 values");
    SupnormReport rep;
    rep.n = n;
    std::vector<double> lx, ly;
    if (n == 2) {
        rep.expected = 1.0 / 6.0;
        for (double tau : t_list) {
            auto absW = [&](double y) { return kGL2Norm * std::sqrt(y) * std::abs(jacquet_integral_gl2_bessel(y, tau)); };
            const int N = std::max(grid, 200);
            const double a = 0.6 * tau / (2 * pi), b = 1.1 * tau / (2 * pi);
            std::vector<double> vals(static_cast<size_t>(N));
            parallel_for(vals.size(), [&](size_t i) { vals[i] = absW(a + (b - a) * static_cast<double>(i) / (N - 1)); });
            const size_t im = static_cast<size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
            const double hstep = (b - a) / (N - 1);
            const double y0 = a + hstep * static_cast<double>(im);
            auto best = boost::math::tools::brent_find_minima([&](double y) { return -absW(y); }, y0 - hstep, y0 + hstep, 40);
            const double ym = best.first;
            // the maximum is reported from the Jacquet integral itself
            OscResult jr = jacquet_integral_gl2(ym, tau);
            const double m = kGL2Norm * std::sqrt(ym) * std::abs(jr.value);
            rep.points.push_back({tau, ym, 0.0, m, kGL2Norm * std::sqrt(ym) * jr.err_estimate});
            rep.maxima.emplace_back(tau, m);
            lx.push_back(std::log(tau));
            ly.push_back(std::log(m));
        }
    } else if (n == 3) {
        rep.expected = 0.75;
        for (double t : t_list) {
            const double hs = w.c_sum * std::pow(t, -0.75), hd = w.c_diff * std::pow(t, -0.5);
            // the two cusp contributions interfere with about 2 sqrt(t) fringes across the window
            const int g = std::max(grid, static_cast<int>(9 * std::sqrt(t)) | 1);
            std::vector<std::pair<double, double>> pts;
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    const double s = 2 / kR3 + hs * (-1 + 2.0 * i / (g - 1));
                    const double d = hd * (-1 + 2.0 * j / (g - 1));
                    pts.emplace_back(0.5 * (s + d), 0.5 * (s - d));
                }
            double ymin = 1e300;
            for (auto& q : pts) ymin = std::min({ymin, q.first, q.second});
            GL3Evaluator ev(t, t * ymin);
            std::vector<ScanPoint> sp(pts.size());
            parallel_for(pts.size(), [&](size_t i) {
                const double Y1 = t * pts[i].first, Y2 = t * pts[i].second;
                const double pref = kGL3Norm * Y1 * Y2;
                const cplx a = ev.integral(Y1, Y2), b = ev.integral_coarse(Y1, Y2);
                sp[i] = {t, pts[i].first, pts[i].second, pref * std::abs(a), pref * std::abs(a - b)};
            });
            double m = 0;
            for (auto& q : sp) {
                m = std::max(m, q.absW);
                rep.points.push_back(q);
            }
            rep.maxima.emplace_back(t, m);
            lx.push_back(std::log(t));
            ly.push_back(std::log(m));
        }
    } else {
        throw std::invalid_argument("supnorm_scan: n must be 2 or 3");
    }
    rep.slope = least_squares_slope(lx, ly);
    return rep;
}

}  // namespace whitcaus
