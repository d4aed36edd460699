#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace whitcaus {

using cplx = std::complex<double>;

struct OscResult {
    cplx value{0.0, 0.0};
    double err_estimate = 0.0;
};

struct QuadConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_levels = 15;          // bisection depth (1-D) or grid refinements (3-D)
    double initial_radius = 4.0;  // first cutoff radius for oscillatory_3d, doubled
    int max_doublings = 4;
    double box_size = 1.0;        // coarsest box edge for oscillatory_3d

    static QuadConfig one_d() { return {}; }
    static QuadConfig three_d() {
        QuadConfig c;
        c.rel_tol = 1e-4;
        c.max_levels = 3;
        return c;
    }
};

// Thrown when a quadrature fails to reach its tolerance; carries the best
// value found so far.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, OscResult partial) : std::runtime_error(what), partial_(partial) {}
    const OscResult& partial() const { return partial_; }

private:
    OscResult partial_;
};

// Adaptive Gauss-Kronrod (7/15) on a finite interval.
OscResult integrate_gk(const std::function<cplx(double)>& f, double a, double b, const QuadConfig& cfg);

// Generalized Airy integral
//   Ai_k(y) = \int exp(i (y_{k-1} x + y_{k-2} x^2/2 + ... + y_1 x^{k-1}/(k-1) + x^{k+1}/(k+1))) dx
// for k in {2, 3, 4}; y has length k-1.  Ai_2(y) = 2*pi*Ai(y), Ai_3 = Pearcey.
OscResult airy_k(int k, const std::vector<double>& y, const QuadConfig& cfg = {});

// Pe(y1, y2) = \int exp(i (y2 x + y1 x^2/2 + x^4/4)) dx and its partials.
OscResult pearcey(double y1, double y2, const QuadConfig& cfg = {});
OscResult pearcey_d1(double y1, double y2, const QuadConfig& cfg = {});
OscResult pearcey_d2(double y1, double y2, const QuadConfig& cfg = {});

struct Osc1DOptions {
    double center = 0.0;
    double scale = 1.0;  // width of the innermost shell
    int max_shells = 48;
};

// \int amplitude(x) e^{i phase(x)} dx over R via a smooth dyadic partition of
// unity around `center`; each shell is integrated adaptively.  Stops once two
// consecutive shells are negligible and non-stationary.
OscResult oscillatory_1d(const std::function<double(double)>& phase, const std::function<cplx(double)>& amplitude,
                         const QuadConfig& cfg = {}, const Osc1DOptions& opt = {});

using Phase3 = std::function<double(const double*)>;
using Amp3 = std::function<cplx(const double*)>;

// \int_{R^3} amplitude(u) e^{i phase(u)} chi(|u|/R) du with a smooth radial
// cutoff chi (1 on [0,1], 0 beyond 2), R doubled until stable.
OscResult oscillatory_3d(const Phase3& phase, const Amp3& amplitude, const QuadConfig& cfg = QuadConfig::three_d());

// Smooth step: 0 for s <= 1, 1 for s >= 2, C-infinity in between.
double smooth_step(double s);

}  // namespace whitcaus
