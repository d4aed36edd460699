#pragma once

#include <Eigen/Dense>

#include <array>

#include "whitcaus/realpoly.hpp"

namespace whitcaus {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Symmetric 3x3 matrix; symmetric by construction.
class Sym3 {
public:
    Sym3() = default;
    Sym3(double s11, double s22, double s33, double s12, double s13, double s23);
    static Sym3 from_matrix(const Mat3& m);  // symmetrizes (m + m^T)/2
    static Sym3 diag(double a, double b, double c) { return Sym3(a, b, c, 0, 0, 0); }

    double operator()(int i, int j) const { return m_(i, j); }
    const Mat3& matrix() const { return m_; }

private:
    Mat3 m_ = Mat3::Zero();
};

// Traceless symmetric tridiagonal matrix in the coordinates
//   [[ (2x1+x2)/3, y1, 0 ], [ y1, (x2-x1)/3, y2 ], [ 0, y2, -(x1+2x2)/3 ]].
struct Jacobi3 {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    Sym3 to_sym() const;
    // Inverse of to_sym for a traceless tridiagonal input.
    static Jacobi3 from_sym(const Sym3& s);
};

struct IwasawaParts {
    Mat3 u, a, k;  // g = u·a·k (a exactly as computed, not normalized)
    // a normalized so that a33 = 1 (PGL3 convention used in reports)
    Mat3 a_normalized() const { return a / a(2, 2); }
};

// Coefficients (c0, c1, c2) of the monic cubic x^3 + c2 x^2 + c1 x + c0.
std::array<double, 3> char_poly(const Sym3& s);
// Exact version for rational entries (s11, s22, s33, s12, s13, s23).
RatPoly char_poly_exact(const std::array<Rational, 6>& entries);

// Eigenvalues, descending.
std::array<double, 3> spectrum(const Sym3& s);

IwasawaParts iwasawa(const Mat3& g);

// e^{<rho, H(g)>} = a11/a33 of the Iwasawa a-part.
double delta_half(const Mat3& g);

// k·s·k^T; throws std::invalid_argument if k is not orthogonal (tol 1e-10).
Sym3 ad_k(const Mat3& k, const Sym3& s);

// The fixed long Weyl representative antidiag(1,-1,1).
Mat3 long_weyl();

// Upper unitriangular matrix with the given entries.
Mat3 unipotent(double u12, double u13, double u23);

// Rotation in SO(3) from a (not necessarily normalized) quaternion.
Mat3 rotation_from_quaternion(double w, double x, double y, double z);

}  // namespace whitcaus
