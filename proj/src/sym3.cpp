#include "whitcaus/sym3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whitcaus {

Sym3::Sym3(double s11, double s22, double s33, double s12, double s13, double s23) {
    m_ << s11, s12, s13, s12, s22, s23, s13, s23, s33;
}

Sym3 Sym3::from_matrix(const Mat3& m) {
    Mat3 s = 0.5 * (m + m.transpose());
    return Sym3(s(0, 0), s(1, 1), s(2, 2), s(0, 1), s(0, 2), s(1, 2));
}

Sym3 Jacobi3::to_sym() const {
    return Sym3((2 * x1 + x2) / 3, (x2 - x1) / 3, -(x1 + 2 * x2) / 3, y1, 0.0, y2);
}

Jacobi3 Jacobi3::from_sym(const Sym3& s) {
    Jacobi3 j;
    // s11 = (2x1+x2)/3, s33 = -(x1+2x2)/3  =>  x1 = 2 s11 + s33,  x2 = -(s11 + 2 s33)
    j.x1 = 2 * s(0, 0) + s(2, 2);
    j.x2 = -(s(0, 0) + 2 * s(2, 2));
    j.y1 = s(0, 1);
    j.y2 = s(1, 2);
    return j;
}

std::array<double, 3> char_poly(const Sym3& s) {
    const Mat3& m = s.matrix();
    const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                          m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    return {-m.determinant(), minors, -m.trace()};
}

RatPoly char_poly_exact(const std::array<Rational, 6>& e) {
    const Rational &a = e[0], &b = e[1], &c = e[2], &d = e[3], &f = e[4], &g = e[5];
    // [[a,d,f],[d,b,g],[f,g,c]]
    Rational tr = a + b + c;
    Rational minors = a * b - d * d + a * c - f * f + b * c - g * g;
    Rational det = a * (b * c - g * g) - d * (d * c - g * f) + f * (d * g - b * f);
    return RatPoly({-det, minors, -tr, Rational(1)});
}

std::array<double, 3> spectrum(const Sym3& s) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(s.matrix(), Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues();
    std::array<double, 3> out{ev(0), ev(1), ev(2)};
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

IwasawaParts iwasawa(const Mat3& g) {
    const double det = g.determinant();
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) throw std::invalid_argument("iwasawa: singular matrix");
    const Mat3 M = g * g.transpose();
    // Reverse Cholesky: M = U D U^T with U unit upper triangular.
    Mat3 U = Mat3::Identity();
    Vec3 D;
    D(2) = M(2, 2);
    U(1, 2) = M(1, 2) / D(2);
    U(0, 2) = M(0, 2) / D(2);
    D(1) = M(1, 1) - U(1, 2) * U(1, 2) * D(2);
    U(0, 1) = (M(0, 1) - U(0, 2) * U(1, 2) * D(2)) / D(1);
    D(0) = M(0, 0) - U(0, 1) * U(0, 1) * D(1) - U(0, 2) * U(0, 2) * D(2);
    if (!(D.minCoeff() > 0.0)) throw std::invalid_argument("iwasawa: numerically singular matrix");
    IwasawaParts p;
    p.u = U;
    p.a = Mat3::Zero();
    for (int i = 0; i < 3; ++i) p.a(i, i) = std::sqrt(D(i));
    // k = a^{-1} u^{-1} g
    Mat3 Uinv = Mat3::Identity();
    Uinv(0, 1) = -U(0, 1);
    Uinv(1, 2) = -U(1, 2);
    Uinv(0, 2) = U(0, 1) * U(1, 2) - U(0, 2);
    Mat3 k = Uinv * g;
    for (int i = 0; i < 3; ++i) k.row(i) /= p.a(i, i);
    p.k = k;
    return p;
}

double delta_half(const Mat3& g) {
    IwasawaParts p = iwasawa(g);
    return p.a(0, 0) / p.a(2, 2);
}

Sym3 ad_k(const Mat3& k, const Sym3& s) {
    if ((k * k.transpose() - Mat3::Identity()).norm() > 1e-10) throw std::invalid_argument("ad_k: k is not orthogonal");
    return Sym3::from_matrix(k * s.matrix() * k.transpose());
}

Mat3 long_weyl() {
    Mat3 w;
    w << 0, 0, 1, 0, -1, 0, 1, 0, 0;
    return w;
}

Mat3 unipotent(double u12, double u13, double u23) {
    Mat3 u;
    u << 1, u12, u13, 0, 1, u23, 0, 0, 1;
    return u;
}

Mat3 rotation_from_quaternion(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w), 2 * (x * y + z * w),
        1 - 2 * (x * x + z * z), 2 * (y * z - x * w), 2 * (x * z - y * w), 2 * (y * z + x * w),
        1 - 2 * (x * x + y * y);
    return r;
}

}  // namespace whitcaus
