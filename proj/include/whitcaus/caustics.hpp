#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "whitcaus/realpoly.hpp"
#include "whitcaus/sym3.hpp"

namespace whitcaus {

enum class Zone { Shadow, Light1, Light2, Caustic1, Caustic2, CuspPoint };
enum class Degeneracy { NonDegenerate, FoldA2, CuspA3 };

std::string to_string(Zone z);
std::string to_string(Degeneracy d);

// A point of the positive chamber in simple-root coordinates.  The squares
// y1^2, y2^2 are kept exactly; for float input they are the exact squares of
// the binary doubles.
struct ChamberPoint {
    double y1 = 0, y2 = 0;
    Rational a, b;  // y1^2, y2^2

    static ChamberPoint from_double(double y1, double y2);
    static ChamberPoint from_squares(const Rational& y1sq, const Rational& y2sq);
};

// y1^2 + y2^2 - 1
Rational outer_defect(const ChamberPoint& p);
// 27 y1^4 y2^4 - 18 y1^2 y2^2 + 4 y1^2 + 4 y2^2 - 1
Rational inner_defect(const ChamberPoint& p);

Zone zone(const ChamberPoint& p, double tol = 0.0);

// Bivariate polynomial in (x1, x2) with rational coefficients: (i, j) -> coeff of x1^i x2^j.
struct BiPoly {
    std::map<std::pair<int, int>, Rational> terms;
    double eval(double x1, double x2) const;
};

BiPoly build_C_x(const ChamberPoint& p);
BiPoly build_E_x(const ChamberPoint& p);
BiPoly build_D_x(const ChamberPoint& p);

// t-forms after the rational parametrization of the ellipse C = 0; E is
// scaled to a primitive integer polynomial with positive leading coefficient,
// and D is scaled by the same factor.  Throws if y1^2 + y2^2 >= 1.
RatPoly build_E(const ChamberPoint& p);
RatPoly build_D(const ChamberPoint& p);
// The same t-forms without the per-point rescaling (coefficients polynomial in
// y1^2, y2^2); these are the binary sextics used for the resultant identity.
RatPoly build_E_form(const ChamberPoint& p);
RatPoly build_D_form(const ChamberPoint& p);
// C restricted to the parametrization, divided by the common factor; it is
// identically zero (kept for symmetry and tested as such).
RatPoly build_C(const ChamberPoint& p);

// (x1, x2) on the ellipse for parameter t; t = +-inf handled by the caller flag.
std::pair<double, double> ellipse_point(const ChamberPoint& p, double t, bool at_infinity = false);

struct FiberPoint {
    Jacobi3 jacobi;
    double t_param = 0.0;
    bool t_infinite = false;
    bool c1_degenerate = false;
    int multiplicity = 1;
    Degeneracy degeneracy = Degeneracy::NonDegenerate;
};

struct Fiber {
    Zone zone = Zone::Shadow;
    ChamberPoint base;  // the exact point the fiber was computed at
    std::vector<FiberPoint> points;
};

// Exact fiber over the (exact value of the) given point.
Fiber fiber(const ChamberPoint& p);
// Tolerance variant: if zone(p, tol) is a caustic label, the fiber over an
// exact nearby point of that caustic is returned.
Fiber fiber(const ChamberPoint& p, double tol);

// x -> -x, t -> (t+2)/(-2t-1).
FiberPoint involution(const FiberPoint& fp);

// Nearest exact rational point on the inner caustic (branch closest to p).
ChamberPoint snap_to_inner_caustic(const ChamberPoint& p);

Degeneracy degeneracy_from_multiplicity(int m);

}  // namespace whitcaus
