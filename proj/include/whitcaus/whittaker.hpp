#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "whitcaus/caustics.hpp"
#include "whitcaus/oscint.hpp"
#include "whitcaus/specfun.hpp"
#include "whitcaus/sym3.hpp"

namespace whitcaus {

// Spectral parameter t·nu.  H_nu = 2 pi t · direction (traceless, diagonal);
// Langlands parameters mu_j = i·(H_nu)_jj.  For n = 2 the direction is
// (1, -1) and tau = 2 pi t, so H_nu = diag(tau, -tau) and lambda = 1/4 + tau^2.
struct SpectralParam {
    int n = 3;
    double t = 1.0;
    std::array<double, 3> direction{1.0, 0.0, -1.0};

    static SpectralParam self_dual(double t);
    static SpectralParam gl2(double tau);

    double scale() const;                  // 2 pi t
    double tau() const;                    // n = 2: (H_nu)_11
    std::array<double, 3> h_nu() const;    // diagonal of H_nu
    std::array<cplx, 3> mu() const;        // i·diag(H_nu)
    double laplace_eigenvalue() const;     // n = 2: 1/4 + tau^2; n = 3: 1 + |H_nu|^2 / 2
    static double c_exponent(int n);       // n(n-1)(n-2)/24
    void validate() const;
};

struct UnipotentPoint {
    double u12 = 0, u13 = 0, u23 = 0;
    Vec3 vec() const { return {u12, u13, u23}; }
    static UnipotentPoint from_vec(const Vec3& v) { return {v(0), v(1), v(2)}; }
};

struct CriticalPoint {
    UnipotentPoint u;
    Mat3 hessian = Mat3::Zero();  // of the normalized phase (lambda = 1)
    Vec3 eigenvalues = Vec3::Zero();
    int corank = 0;
    int signature_transverse = 0;
    Degeneracy degeneracy = Degeneracy::NonDegenerate;
    double phase = 0.0;       // normalized phase value phi(u)
    double delta_half = 0.0;  // delta(w u)^{1/2}
    double grad_norm = 0.0;
    Sym3 moment;  // k^T diag(1,0,-1) k with k = kappa(w u): the matching fiber point
};

// ----- phase function -----------------------------------------------------

// Scaled variant: Tr(H_nu log a(w u)) - 2 pi (Y1 u12 + Y2 u23) with Y = t·(y1, y2).
double phase_F(const UnipotentPoint& u, const ChamberPoint& p, const SpectralParam& nu);
// Unscaled variant: Tr(H_nu log a(w u g)) - 2 pi (u12 + u23).
double phase_F_unscaled(const UnipotentPoint& u, const Mat3& g, const SpectralParam& nu);
// Closed form of the normalized GL3 phase phi(u; y) = -log(Delta1 Delta2)/2 - (y1 u12 + y2 u23)
// for the self-dual direction, so that phase_F = 2 pi t · phi.
double phase_phi_closed(const UnipotentPoint& u, double y1, double y2);
// GL2: -tau log(1 + x^2) - 2 pi x y
double phase_gl2(double x, double y, double tau);

// Analytic gradient of phase_F with respect to (u12, u13, u23).
Vec3 grad_F(const UnipotentPoint& u, const ChamberPoint& p, const SpectralParam& nu);
// Same for the unscaled variant.
Vec3 grad_F_unscaled(const UnipotentPoint& u, const Mat3& g, const SpectralParam& nu);
// Central finite-difference Hessian of the analytic gradient.
Mat3 hessian_F(const UnipotentPoint& u, const ChamberPoint& p, const SpectralParam& nu, double step = 1e-4);

// ----- critical points ----------------------------------------------------

struct CriticalOptions {
    int grid = 7;          // multistart points per axis
    int max_refinements = 2;
    double grad_tol = 1e-9;
};

// Critical points of phi(.; y) for the self-dual direction (they do not depend on t).
std::vector<CriticalPoint> critical_points(const ChamberPoint& p, const SpectralParam& nu,
                                           const CriticalOptions& opt = {});

// The unipotent element whose kappa(w u) conjugates diag(1,0,-1) to the given
// Jacobi matrix (inverse of the moment map on the big Bruhat cell).
UnipotentPoint unipotent_from_moment(const Sym3& s);

struct CuspSide {
    UnipotentPoint u;
    double grad_norm = 0;
    Vec3 eigenvalues = Vec3::Zero();
    int corank = 0;
    int signature = 0;
    double det_q0 = 0, det_q0_expected = 0;
    double delta_half = 0, delta_half_expected = 0;
    double quartic = 0;  // fourth-order coefficient of the phase along the kernel
};

struct CuspReport {
    CuspSide plus, minus;
    double ratio = 0, ratio_expected = 0;      // |det|^{-1/2} delta ratio
    double ratio_with_quartic = 0;          // including the kernel quartic factor
    bool corank_ok = false, signature_ok = false, delta_ok = false, det_ok = false, ratio_ok = false;
    bool all_ok() const { return corank_ok && signature_ok && delta_ok && det_ok && ratio_ok; }
};

CuspReport hessian_invariants_at_cusp();

// ----- Whittaker values ---------------------------------------------------

// |W_{t nu0}(t a)| = kGL3Norm · t^2 y1 y2 |I|, fitted with stade_check at sigma = 1.
extern const double kGL3Norm;
// |W_tau(y)| = sqrt(2) sqrt(y) |I| for GL2 (exact: the Stade integral at sigma = 1 is 1).
extern const double kGL2Norm;

enum class GL3Method { BesselProduct, Direct3D };

struct WhittakerConfig {
    QuadConfig quad{};
    GL3Method method = GL3Method::BesselProduct;
    double gl3_norm = 0.0;  // 0: use kGL3Norm
};

// Evaluates the GL3 Jacquet integral I(Y) = \int delta(wu)^{1/2} e^{i F} du through the
// Bessel-product representation; caches a table of e^{pi tau/2} K_{i tau} for one t.
class GL3Evaluator {
public:
    GL3Evaluator(double t, double ymin_actual, double log_step = 0.1);
    cplx integral(double Y1, double Y2) const;  // actual coordinates
    // Same integral from the table coarsened by 2 (error estimate).
    cplx integral_coarse(double Y1, double Y2) const;
    double t() const { return t_; }
    double ymin() const { return ymin_; }

private:
    double t_, ymin_;
    std::shared_ptr<BesselKitTable> table_, coarse_;
    cplx integrate(const BesselKitTable& K, double Y1, double Y2) const;
    cplx log_prefactor_;
};

// n = 3: W_{t nu0}(t·a) with a given by the simple-root coordinates p (value includes
// the t^2 y1 y2 factor and the normalization constant).  n = 2: W(y) at y = p.y1.
OscResult jacquet_whittaker(const ChamberPoint& p, const SpectralParam& nu, const WhittakerConfig& cfg = {});
// Raw Jacquet integral I for GL2, evaluated as an oscillatory integral on a shifted contour.
OscResult jacquet_integral_gl2(double y, double tau, const QuadConfig& cfg = {});
// Same via the Bessel representation (2 sqrt(pi)/Gamma(1/2 + i tau)) (pi y)^{i tau} K_{i tau}(2 pi y).
cplx jacquet_integral_gl2_bessel(double y, double tau);
// Direct three-dimensional evaluation of I.  The amplitude decays only like |u|^{-2}, so convergence
// comes from oscillation alone; impractically slow except at loose tolerances and tiny t.
OscResult jacquet_integral_gl3_direct(double Y1, double Y2, double t, const QuadConfig& cfg = QuadConfig::three_d());

// ----- stationary phase ---------------------------------------------------

// Morse sum over the (nondegenerate) critical points, in the same normalization as
// jacquet_whittaker.  Throws if a degenerate critical point is present.
cplx predict_morse(const ChamberPoint& p, const SpectralParam& nu, double gl3_norm = 0.0);

struct PearceyWindow {
    double c_sum = 1.0;   // |y1 + y2 - 2/sqrt3| <= c_sum t^{-3/4}
    double c_diff = 1.0;  // |y1 - y2| <= c_diff t^{-1/2}
};

struct PearceyTerm {
    cplx value;          // contribution in jacquet_whittaker normalization
    double pe_y1 = 0, pe_y2 = 0;
    cplx pe;
    double amplitude = 0;  // (2 pi)^{-1/2} |det Q0|^{-1/2} delta^{1/2}
    double quartic = 0;
};

struct PearceyPrediction {
    cplx value;
    PearceyTerm plus, minus;
};

bool in_pearcey_window(const ChamberPoint& p, double t, const PearceyWindow& w = {});
PearceyPrediction predict_pearcey(const ChamberPoint& p, const SpectralParam& nu, const PearceyWindow& w = {},
                                  double gl3_norm = 0.0);

// ----- Stade check and sup-norm scan ---------------------------------------

struct StadeResult {
    double lhs = 0, rhs = 0;
    double fitted_norm = 0;  // constant c with c^2·lhs_raw = rhs (lhs already uses the default constant)
    int grid_points = 0;
};

struct StadeOptions {
    double y_min = 1e-4;        // lower cutoff in units of t (n = 3); n = 2 uses y_min·1e-4
    double points_per_unit = 0; // per unit of log y; 0 = automatic
    double y_max_factor = 3.0;  // truncation at max(Y_i) <= 3 t (smooth taper)
};

StadeResult stade_check(double sigma, const SpectralParam& nu, const StadeOptions& opt = {});
// Right-hand side prod Gamma_R(sigma + mu_i - mu_j) / prod Gamma_R(1 + mu_i - mu_j).
double stade_rhs(double sigma, const SpectralParam& nu);

struct ScanPoint {
    double t = 0, y1 = 0, y2 = 0, absW = 0, err = 0;
};

struct SupnormReport {
    std::vector<ScanPoint> points;            // every evaluated grid point
    std::vector<std::pair<double, double>> maxima;  // (t, max |W|)
    double slope = 0, expected = 0;
    int n = 2;
};

// n = 2: t_list holds tau values; for each, the max over y near the turning point 2 pi y = tau,
// slope of log max|W| against log tau.  n = 3: t_list holds t; for each, the max over a
// g x g box in the Pearcey window around t·a_cusp, g = max(grid, 9 sqrt(t)) (odd).
SupnormReport supnorm_scan(const std::vector<double>& t_list, int n, int grid = 9, const PearceyWindow& w = {});

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace whitcaus
