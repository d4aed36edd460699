#include "whitcaus/oscint.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "whitcaus/parallel.hpp"

namespace whitcaus {

using std::numbers::pi;

double smooth_step(double s) {
    if (s <= 1.0) return 0.0;
    if (s >= 2.0) return 1.0;
    auto g = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
    const double a = g(s - 1.0), b = g(2.0 - s);
    return a / (a + b);
}

OscResult integrate_gk(const std::function<cplx(double)>& f, double a, double b, const QuadConfig& cfg) {
    double err = 0.0, l1 = 0.0;
    const unsigned depth = static_cast<unsigned>(std::max(cfg.max_levels, 1));
    cplx v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, depth, cfg.rel_tol, &err, &l1);
    OscResult r{v, err};
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw QuadratureError("quadrature produced a non-finite value", r);
    if (err > 10.0 * cfg.rel_tol * l1 + cfg.abs_tol && err > 10.0 * cfg.rel_tol * std::abs(v) + cfg.abs_tol)
        throw QuadratureError("quadrature did not converge within max_levels", r);
    return r;
}

namespace {

// \int w(x) exp(i P(x)) dx with P(x) = sum_j y_j x^{k-j}/(k-j) + x^{k+1}/(k+1),
// w(x) = wc * x^m.  The real segment [-X0, X0] is integrated directly and the
// two tails along rays on which x^{k+1} decays.
OscResult generalized_airy(int k, const std::vector<double>& y, int m, cplx wc, const QuadConfig& cfg) {
    if (k < 2 || k > 4) throw std::invalid_argument("airy_k: k must be 2, 3 or 4");
    if (static_cast<int>(y.size()) != k - 1) throw std::invalid_argument("airy_k: y must have length k-1");
    auto P = [&](cplx x) {
        cplx s = std::pow(x, k + 1) / double(k + 1);
        for (int j = 1; j <= k - 1; ++j) s += y[static_cast<size_t>(j - 1)] * std::pow(x, k - j) / double(k - j);
        return s;
    };
    auto f = [&](cplx x) { return wc * std::pow(x, m) * std::exp(cplx(0, 1) * P(x)); };

    double X0 = 1.0;
    for (int j = 1; j <= k - 1; ++j) X0 = std::max(X0, 1.0 + 2.0 * std::pow(std::abs(y[static_cast<size_t>(j - 1)]), 1.0 / (j + 1)));

    const double thR = pi / (2.0 * (k + 1));
    const double thL = (pi / 2 + 2 * pi * ((k + 1) / 2)) / (k + 1);
    const cplx eR = std::polar(1.0, thR), eL = std::polar(1.0, thL);

    auto ray_length = [&](cplx start, cplx dir) {
        double L = 1.0;
        while (L < 1e4) {
            bool small = true;
            for (double s : {1.0, 1.5, 2.0})
                if (std::abs(f(start + s * L * dir)) > 1e-18) small = false;
            if (small) break;
            L *= 2.0;
        }
        return 2.0 * L;
    };

    OscResult seg = integrate_gk([&](double x) { return f(cplx(x, 0)); }, -X0, X0, cfg);
    const double LR = ray_length(cplx(X0, 0), eR), LL = ray_length(cplx(-X0, 0), eL);
    OscResult right = integrate_gk([&](double r) { return f(cplx(X0, 0) + r * eR) * eR; }, 0.0, LR, cfg);
    OscResult left = integrate_gk([&](double r) { return f(cplx(-X0, 0) + r * eL) * eL; }, 0.0, LL, cfg);
    return {seg.value + right.value - left.value, seg.err_estimate + right.err_estimate + left.err_estimate};
}

}  // namespace

OscResult airy_k(int k, const std::vector<double>& y, const QuadConfig& cfg) {
    return generalized_airy(k, y, 0, 1.0, cfg);
}

OscResult pearcey(double y1, double y2, const QuadConfig& cfg) { return generalized_airy(3, {y1, y2}, 0, 1.0, cfg); }

OscResult pearcey_d1(double y1, double y2, const QuadConfig& cfg) {
    return generalized_airy(3, {y1, y2}, 2, cplx(0, 0.5), cfg);
}

OscResult pearcey_d2(double y1, double y2, const QuadConfig& cfg) {
    return generalized_airy(3, {y1, y2}, 1, cplx(0, 1), cfg);
}

namespace {

bool has_stationary_point(const std::function<double(double)>& phase, double a, double b) {
    const int n = 64;
    const double h = (b - a) / n;
    int last = 0;
    for (int i = 0; i < n; ++i) {
        const double d = phase(a + (i + 1) * h) - phase(a + i * h);
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0) return true;
        if (last != 0 && s != last) return true;
        last = s;
    }
    return false;
}

}  // namespace

OscResult oscillatory_1d(const std::function<double(double)>& phase, const std::function<cplx(double)>& amplitude,
                         const QuadConfig& cfg, const Osc1DOptions& opt) {
    const double c = opt.center, s = opt.scale;
    auto integrand = [&](double x, double w) -> cplx {
        if (w == 0.0) return 0.0;
        return w * amplitude(x) * std::exp(cplx(0, phase(x)));
    };
    QuadConfig shell_cfg = cfg;
    shell_cfg.abs_tol = 0.0;

    OscResult total = integrate_gk(
        [&](double x) { return integrand(x, 1.0 - smooth_step(std::abs(x - c) / s)); }, c - 2 * s, c + 2 * s, shell_cfg);
    double prev_mag = std::abs(total.value);
    for (int n = 1; n <= opt.max_shells; ++n) {
        const double lo = std::ldexp(s, n - 1), hi = std::ldexp(s, n + 1);
        auto w = [&](double x) {
            const double r = std::abs(x - c);
            return smooth_step(r / std::ldexp(s, n - 1)) - smooth_step(r / std::ldexp(s, n));
        };
        OscResult rp = integrate_gk([&](double x) { return integrand(x, w(x)); }, c + lo, c + hi, shell_cfg);
        OscResult rn = integrate_gk([&](double x) { return integrand(x, w(x)); }, c - hi, c - lo, shell_cfg);
        const cplx contrib = rp.value + rn.value;
        total.value += contrib;
        total.err_estimate += rp.err_estimate + rn.err_estimate;
        const double mag = std::abs(contrib);
        const double tol = cfg.rel_tol * std::abs(total.value) + cfg.abs_tol;
        const bool stationary = has_stationary_point(phase, c + lo, c + hi) || has_stationary_point(phase, c - hi, c - lo);
        if (n >= 2 && mag <= tol && prev_mag <= tol && !stationary) {
            total.err_estimate += mag;
            return total;
        }
        if (n == opt.max_shells) {
            if (stationary) throw QuadratureError("tail not nonstationary", total);
            throw QuadratureError("oscillatory_1d: shells did not decay", total);
        }
        prev_mag = mag;
    }
    return total;
}

namespace {

cplx grid_sum_3d(const Phase3& phase, const Amp3& amplitude, double R, int nbox) {
    using G = boost::math::quadrature::gauss<double, 8>;
    // full symmetric node set on [-1, 1]
    std::vector<double> xs, ws;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (size_t i = 0; i < ab.size(); ++i) {
        xs.push_back(ab[i]);
        ws.push_back(wt[i]);
        if (ab[i] != 0.0) {
            xs.push_back(-ab[i]);
            ws.push_back(wt[i]);
        }
    }
    const double L = 2.0 * R;
    const double h = 2.0 * L / nbox;
    std::vector<cplx> slab(static_cast<size_t>(nbox));
    parallel_for(static_cast<size_t>(nbox), [&](size_t ix) {
        cplx acc = 0.0;
        double u[3];
        for (int iy = 0; iy < nbox; ++iy)
            for (int iz = 0; iz < nbox; ++iz) {
                const double c0 = -L + (static_cast<double>(ix) + 0.5) * h, c1 = -L + (iy + 0.5) * h,
                             c2 = -L + (iz + 0.5) * h;
                // skip boxes entirely outside the cutoff support
                auto gap = [&](double c) { return std::max(0.0, std::abs(c) - 0.5 * h); };
                if (std::hypot(gap(c0), gap(c1), gap(c2)) >= L) continue;
                cplx box = 0.0;
                for (size_t a = 0; a < xs.size(); ++a)
                    for (size_t b = 0; b < xs.size(); ++b)
                        for (size_t d = 0; d < xs.size(); ++d) {
                            u[0] = c0 + 0.5 * h * xs[a];
                            u[1] = c1 + 0.5 * h * xs[b];
                            u[2] = c2 + 0.5 * h * xs[d];
                            const double r = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
                            const double chi = 1.0 - smooth_step(r / R);
                            if (chi == 0.0) continue;
                            box += ws[a] * ws[b] * ws[d] * chi * amplitude(u) * std::exp(cplx(0, phase(u)));
                        }
                acc += box * (0.125 * h * h * h);
            }
        slab[ix] = acc;
    });
    cplx total = 0.0;
    for (const auto& v : slab) total += v;
    return total;
}

OscResult refine_3d(const Phase3& phase, const Amp3& amplitude, double R, const QuadConfig& cfg) {
    int nbox = std::max(2, static_cast<int>(std::ceil(4.0 * R / cfg.box_size)));
    cplx prev = grid_sum_3d(phase, amplitude, R, nbox);
    for (int level = 1; level <= cfg.max_levels; ++level) {
        nbox *= 2;
        cplx cur = grid_sum_3d(phase, amplitude, R, nbox);
        const double diff = std::abs(cur - prev);
        if (diff <= cfg.rel_tol * std::abs(cur) + cfg.abs_tol) return {cur, diff};
        prev = cur;
    }
    throw QuadratureError("oscillatory_3d: box refinement did not converge", {prev, 0.0});
}

}  // namespace

OscResult oscillatory_3d(const Phase3& phase, const Amp3& amplitude, const QuadConfig& cfg) {
    double R = cfg.initial_radius;
    OscResult prev = refine_3d(phase, amplitude, R, cfg);
    for (int d = 1; d <= cfg.max_doublings; ++d) {
        R *= 2.0;
        OscResult cur = refine_3d(phase, amplitude, R, cfg);
        const double diff = std::abs(cur.value - prev.value);
        if (diff <= cfg.rel_tol * std::abs(cur.value) + cfg.abs_tol)
            return {cur.value, diff + cur.err_estimate};
        prev = cur;
    }
    throw QuadratureError("oscillatory_3d: no stabilization across radius doublings", prev);
}

}  // namespace whitcaus
