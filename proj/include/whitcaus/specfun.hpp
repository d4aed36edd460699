#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace whitcaus {

using cplx = std::complex<double>;

// log Gamma(z) for complex z (a branch of the logarithm; exp() is exact Gamma).
cplx log_gamma(cplx z);
// log Gamma_R(z) = -(z/2) log(pi) + log Gamma(z/2)
cplx log_gamma_R(cplx z);

// e^{pi tau/2} K_{i tau}(x) for real tau >= 0, x > 0, evaluated on a complex
// contour so that no exponential cancellation occurs.
double bessel_kit_scaled(double tau, double x);

// Real-axis integral \int_0^inf e^{-x cosh s} cos(tau s) ds (unscaled K_{i tau}(x));
// only accurate while e^{pi tau/2} stays moderate.  Used as an oracle.
double bessel_kit_direct(double tau, double x);

// Cubic B-spline table of bessel_kit_scaled(tau, .) on [xmin, xmax] in log x;
// returns 0 above the cutoff where the scaled function is below e^{-200}.
class BesselKitTable {
public:
    BesselKitTable(double tau, double xmin, double xmax, double log_step = 0.0);
    ~BesselKitTable();
    BesselKitTable(BesselKitTable&&) noexcept;
    BesselKitTable& operator=(BesselKitTable&&) noexcept;
    double operator()(double x) const;
    // Same range from every second node (no new evaluations); used for error estimates.
    BesselKitTable coarsened() const;
    double tau() const { return tau_; }
    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }

private:
    BesselKitTable(const BesselKitTable& o, int);  // copies the range only
    struct Impl;
    double tau_, xmin_, xmax_;
    std::unique_ptr<Impl> impl_;
};

// x beyond which e^{pi tau/2} K_{i tau}(x) < e^{-200}.
double bessel_kit_cutoff(double tau);

}  // namespace whitcaus
