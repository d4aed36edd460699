#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "whitcaus/oscint.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <numbers>

using namespace whitcaus;
using std::numbers::pi;

namespace {

// Maclaurin series of Ai, summed in long double
double airy_series(double y) {
    const long double c1 = 0.355028053887817239260L, c2 = 0.258819403792806798405L;
    long double f = 0, g = 0, tf = 1, tg = y;
    for (int k = 0; k < 200; ++k) {
        f += tf;
        g += tg;
        const long double y3 = static_cast<long double>(y) * y * y;
        tf *= y3 / ((3.0L * k + 2) * (3.0L * k + 3));
        tg *= y3 / ((3.0L * k + 3) * (3.0L * k + 4));
        if (std::abs(tf) < 1e-30L && std::abs(tg) < 1e-30L) break;
    }
    return static_cast<double>(c1 * f - c2 * g);
}

// smooth cutoff brute-force Pearcey integral on [-2R, 2R]
cplx pearcey_brute(double y1, double y2, double R) {
    auto f = [&](double x) {
        const double w = 1.0 - smooth_step(std::abs(x) / R);
        return w * std::exp(cplx(0, y2 * x + y1 * x * x / 2 + x * x * x * x / 4));
    };
    cplx total = 0;
    const int pieces = static_cast<int>(40 * R * R);
    for (int i = 0; i < pieces; ++i) {
        const double a = -2 * R + 4 * R * i / pieces, b = a + 4 * R / pieces;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 4, 1e-13);
    }
    return total;
}

}  // namespace

TEST_CASE("Ai_2 is 2 pi Ai") {
    CHECK(airy_series(0.0) == doctest::Approx(std::pow(3.0, -2.0 / 3) / std::tgamma(2.0 / 3)).epsilon(1e-15));
    for (double y = -5.0; y <= 2.0; y += 0.5) {
        OscResult r = airy_k(2, {y});
        const double ref = 2 * pi * airy_series(y);
        CHECK(std::abs(r.value.real() - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
        CHECK(std::abs(r.value.imag()) < 1e-8);
        CHECK(std::abs(ref - 2 * pi * boost::math::airy_ai(y)) < 1e-10);
    }
    CHECK_THROWS_AS(airy_k(5, {0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(airy_k(3, {0}), std::invalid_argument);
}

TEST_CASE("contour rotation agrees with the real-axis partition of unity") {
    for (double y = -5.0; y <= 2.0; y += 1.0) {
        OscResult rot = airy_k(2, {y});
        OscResult real = oscillatory_1d([&](double x) { return y * x + x * x * x / 3; }, [](double) { return cplx(1, 0); });
        CHECK(std::abs(rot.value - real.value) < 1e-7);
    }
}

TEST_CASE("Pearcey function") {
    const cplx pe00 = std::pow(2.0, 1.5) * std::tgamma(1.25) * std::polar(1.0, pi / 8);
    OscResult r = pearcey(0, 0);
    CHECK(std::abs(r.value - pe00) < 1e-8);
    CHECK(std::abs(airy_k(3, {0, 0}).value - pe00) < 1e-8);
    CHECK(std::abs(pearcey_brute(0, 0, 6.0) - pe00) < 1e-8);

    for (double y1 : {-4.0, -1.0, 0.5, 3.0})
        for (double y2 : {0.3, 1.7, 5.0}) CHECK(std::abs(pearcey(y1, y2).value - pearcey(y1, -y2).value) < 1e-9);

    const cplx p6 = pearcey(-6, 0).value;
    CHECK(std::abs(p6) > 0.1);
    CHECK(std::abs(p6 - pearcey_brute(-6, 0, 6.0)) < 1e-6);
    CHECK(std::abs(p6 - pearcey_brute(-6, 0, 8.0)) < 1e-6);

    const double h = 1e-4;
    for (auto [y1, y2] : {std::pair{-2.0, 1.0}, std::pair{1.0, -0.5}, std::pair{0.0, 2.0}}) {
        cplx d1 = (pearcey(y1 + h, y2).value - pearcey(y1 - h, y2).value) / (2 * h);
        cplx d2 = (pearcey(y1, y2 + h).value - pearcey(y1, y2 - h).value) / (2 * h);
        CHECK(std::abs(pearcey_d1(y1, y2).value - d1) < 1e-6);
        CHECK(std::abs(pearcey_d2(y1, y2).value - d2) < 1e-6);
    }
}

TEST_CASE("oscillatory_1d") {
    for (double lam : {1.0, 10.0, 100.0}) {
        OscResult r = oscillatory_1d([&](double x) { return lam * x; }, [](double x) { return cplx(std::exp(-x * x / 2), 0); });
        CHECK(std::abs(r.value - std::sqrt(2 * pi) * std::exp(-lam * lam / 2)) < 1e-10);
        CHECK(r.err_estimate >= 0);
    }
    OscResult fr = oscillatory_1d([](double x) { return x * x; }, [](double) { return cplx(1, 0); });
    CHECK(std::abs(fr.value - std::sqrt(pi) * std::polar(1.0, pi / 4)) < 1e-8);
    OscResult z = oscillatory_1d([](double x) { return x * x; }, [](double) { return cplx(0, 0); });
    CHECK(std::abs(z.value) == 0);

    // conjugation symmetry and linearity
    auto amp = [](double x) { return cplx(1.0, 0.5 * x) / (1 + x * x); };
    auto ph = [](double x) { return 3 * x + 0.2 * x * x * x; };
    OscResult a = oscillatory_1d(ph, amp);
    OscResult c = oscillatory_1d([&](double x) { return -ph(x); }, [&](double x) { return std::conj(amp(x)); });
    CHECK(std::abs(std::conj(a.value) - c.value) < 1e-8 * std::abs(a.value));
    OscResult two = oscillatory_1d(ph, [&](double x) { return 2.0 * amp(x); });
    CHECK(std::abs(two.value - 2.0 * a.value) < 1e-8 * std::abs(a.value));

    // a stationary point escaping to the tail is reported
    Osc1DOptions opt;
    opt.max_shells = 6;
    CHECK_THROWS_WITH(oscillatory_1d([](double x) { return std::cos(x); }, [](double) { return cplx(1, 0); }, QuadConfig{}, opt),
                      doctest::Contains("tail not nonstationary"));
}

TEST_CASE("oscillatory_3d on a separable integrand") {
    const double k[3] = {1.0, 2.0, -1.0};
    auto phase = [&](const double* u) { return k[0] * u[0] + k[1] * u[1] + k[2] * u[2]; };
    auto amp = [](const double* u) { return cplx(std::exp(-(u[0] * u[0] + u[1] * u[1] + u[2] * u[2])), 0); };
    QuadConfig cfg = QuadConfig::three_d();
    cfg.box_size = 2;
    OscResult r = oscillatory_3d(phase, amp, cfg);
    cplx expected = 1.0;
    for (double kk : k) expected *= std::sqrt(pi) * std::exp(-kk * kk / 4);
    CHECK(std::abs(r.value - expected) < 1e-4 * std::abs(expected));

    // compactly supported amplitude: independent of the cutoff once R exceeds the support
    auto bump = [](const double* u) {
        const double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
        return cplx(r2 < 1 ? std::exp(-1 / (1 - r2)) : 0.0, 0);
    };
    cfg.initial_radius = 2;
    OscResult b1 = oscillatory_3d(phase, bump, cfg);
    cfg.initial_radius = 4;
    OscResult b2 = oscillatory_3d(phase, bump, cfg);
    CHECK(std::abs(b1.value - b2.value) < 1e-4 * std::abs(b1.value));
}
