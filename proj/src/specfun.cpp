#include "whitcaus/specfun.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "whitcaus/parallel.hpp"

namespace whitcaus {

using std::numbers::pi;

namespace {

// Stirling series for log Gamma, valid for Re z >= 15.
cplx stirling(cplx z) {
    static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi);
    cplx zp = z;
    const cplx z2 = z * z;
    for (int k = 1; k <= 8; ++k) {
        s += B[k - 1] / (2.0 * k * (2.0 * k - 1) * zp);
        zp *= z2;
    }
    return s;
}

cplx log_gamma_upper(cplx z) {
    // z with Im z >= 0 and Re z >= 0.5
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (z.imag() < 0) return std::conj(log_gamma(std::conj(z)));
    if (z.real() >= 0.5) return log_gamma_upper(z);
    if (z.imag() == 0.0 && z.real() == std::floor(z.real())) throw std::domain_error("log_gamma: pole");
    // reflection; log sin(pi z) written so that it cannot overflow for Im z >= 0
    const cplx i(0, 1);
    cplx log_sin = -i * pi * z + std::log(i / 2.0) + std::log(1.0 - std::exp(2.0 * i * pi * z));
    return std::log(pi) - log_sin - log_gamma_upper(1.0 - z);
}

cplx log_gamma_R(cplx z) { return -0.5 * z * std::log(pi) + log_gamma(0.5 * z); }

double bessel_kit_direct(double tau, double x) {
    auto f = [&](double s) { return std::exp(-x * std::cosh(s)) * std::cos(tau * s); };
    double smax = std::acosh(std::max(1.0, 60.0 / x + 1.0));
    double err = 0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, smax, 20, 1e-14, &err);
}

double bessel_kit_scaled(double tau, double x) {
    if (!(x > 0)) throw std::domain_error("bessel_kit_scaled: x must be positive");
    if (tau < 0) tau = -tau;
    // Contour theta(r) = r + i beta(r), with beta following the ridge
    // x cosh r sin beta = tau, capped below pi/2.
    const double eps = tau > 1.0 ? std::min(0.5, 1.0 / tau) : 0.5;
    const double cap = 0.5 * pi - eps;
    auto beta = [&](double r) {
        const double s = tau / (x * std::cosh(r));
        return s >= 1.0 ? cap : std::min(cap, std::asin(s));
    };
    auto dbeta = [&](double r) {
        const double c = x * std::cosh(r);
        const double s = tau / c;
        if (s >= 1.0 || std::asin(s) >= cap) return 0.0;
        return -s * std::tanh(r) / std::sqrt(1.0 - s * s);
    };
    auto expo = [&](double r) {
        const cplx th(r, beta(r));
        return -x * std::cosh(th) + cplx(0, tau) * th;
    };
    const double M = expo(0.0).real();
    // end of the flat part of the contour
    const double rk = (tau / (x * std::sin(cap)) > 1.0) ? std::acosh(tau / (x * std::sin(cap))) : 0.0;
    double rmax = std::max(rk, 0.0) + 0.5;
    while (expo(rmax).real() - M > -60.0) rmax += 0.5 + 0.25 * rmax;
    auto f = [&](double r) { return std::exp(expo(r) - M) * cplx(1.0, dbeta(r)); };
    // |d/dr exponent|, used to keep every Gauss-Legendre panel within a few radians
    auto speed = [&](double r) {
        const cplx th(r, beta(r));
        return std::abs((-x * std::sinh(th) + cplx(0, tau)) * cplx(1.0, dbeta(r)));
    };
    using GL = boost::math::quadrature::gauss<double, 20>;
    cplx v = 0.0;
    // the normalised integrand is bounded by ~1, so an absolute tolerance is appropriate
    std::function<cplx(double, double, cplx, int)> panel = [&](double a, double b, cplx whole, int depth) -> cplx {
        const double m = 0.5 * (a + b);
        const cplx l = GL::integrate(f, a, m), r = GL::integrate(f, m, b);
        if (depth >= 40 || std::abs(l + r - whole) <= 1e-15 * std::max(1.0, (b - a))) return l + r;
        return panel(a, m, l, depth + 1) + panel(m, b, r, depth + 1);
    };
    auto march = [&](double a, double b) {
        double r = a;
        while (r < b) {
            double h = std::min({0.5, b - r, 6.0 / std::max(1e-300, speed(r))});
            h = std::min(h, 6.0 / std::max(1e-300, speed(r + h)));
            h = std::min(h, b - r);
            v += panel(r, r + h, GL::integrate(f, r, r + h), 0);
            r += h;
        }
    };
    march(0.0, rk);
    march(rk, rmax);
    const double scale = 0.5 * pi * tau + M;
    return std::exp(scale) * v.real();
}

double bessel_kit_cutoff(double tau) {
    // e^{tau acos(tau/x) - sqrt(x^2 - tau^2)} < e^{-200}
    auto g = [&](double x) { return tau * std::acos(std::min(1.0, tau / x)) - std::sqrt(std::max(0.0, x * x - tau * tau)); };
    double lo = std::max(tau, 1e-3), hi = std::max(2.0 * tau, 10.0);
    while (g(hi) > -200.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > -200.0 ? lo : hi) = mid;
    }
    return hi;
}

struct BesselKitTable::Impl {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
    std::vector<double> values;
    double l0, h;
};

BesselKitTable::BesselKitTable(double tau, double xmin, double xmax, double log_step) : tau_(tau), xmin_(xmin), xmax_(xmax) {
    if (!(xmin > 0) || !(xmax > xmin)) throw std::invalid_argument("BesselKitTable: bad range");
    xmax_ = std::min(xmax, bessel_kit_cutoff(tau));
    if (xmax_ <= xmin_) xmax_ = xmin_ * 1.01;
    if (log_step <= 0.0) log_step = 0.04 / std::max(1.0, tau);
    const double l0 = std::log(xmin_), l1 = std::log(xmax_);
    const size_t n = static_cast<size_t>(std::ceil((l1 - l0) / log_step)) + 1;
    const double h = (l1 - l0) / static_cast<double>(n - 1);
    std::vector<double> vals(n);
    parallel_for(n, [&](size_t i) { vals[i] = bessel_kit_scaled(tau, std::exp(l0 + h * static_cast<double>(i))); });
    auto spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(vals.begin(), vals.end(), l0, h);
    impl_ = std::make_unique<Impl>(Impl{std::move(spline), std::move(vals), l0, h});
}

BesselKitTable BesselKitTable::coarsened() const {
    std::vector<double> v;
    for (size_t i = 0; i < impl_->values.size(); i += 2) v.push_back(impl_->values[i]);
    if (v.size() < 4) throw std::invalid_argument("BesselKitTable: too few nodes to coarsen");
    BesselKitTable t(*this, 0);
    const double h = 2 * impl_->h;
    t.xmax_ = std::min(xmax_, std::exp(impl_->l0 + h * static_cast<double>(v.size() - 1)));
    auto spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(v.begin(), v.end(), impl_->l0, h);
    t.impl_ = std::make_unique<Impl>(Impl{std::move(spline), std::move(v), impl_->l0, h});
    return t;
}

BesselKitTable::BesselKitTable(const BesselKitTable& o, int) : tau_(o.tau_), xmin_(o.xmin_), xmax_(o.xmax_) {}

BesselKitTable::~BesselKitTable() = default;
BesselKitTable::BesselKitTable(BesselKitTable&&) noexcept = default;
BesselKitTable& BesselKitTable::operator=(BesselKitTable&&) noexcept = default;

double BesselKitTable::operator()(double x) const {
    if (x >= xmax_) return 0.0;
    if (x < xmin_) return bessel_kit_scaled(tau_, x);
    return impl_->spline(std::log(x));
}

}  // namespace whitcaus
