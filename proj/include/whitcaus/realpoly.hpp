#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace whitcaus {

using Rational = mpq_class;

// Univariate polynomial with exact rational coefficients, stored in
// ascending order.  The coefficient vector never has trailing zeros, so the
// zero polynomial is the empty vector.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coeffs);
    RatPoly(std::initializer_list<Rational> coeffs);

    static RatPoly constant(const Rational& c);
    static RatPoly monomial(const Rational& c, int deg);
    // The polynomial x - r.
    static RatPoly linear_root(const Rational& r);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const;
    const Rational& lead() const;

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    int sign_at(const Rational& x) const;

    RatPoly derivative() const;
    RatPoly monic() const;
    RatPoly operator-() const;
    RatPoly& operator+=(const RatPoly& o);
    RatPoly& operator-=(const RatPoly& o);
    RatPoly& operator*=(const RatPoly& o);
    RatPoly& operator*=(const Rational& s);

    friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
    friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
    friend RatPoly operator*(RatPoly a, const RatPoly& b) { return a *= b; }
    friend RatPoly operator*(RatPoly a, const Rational& s) { return a *= s; }
    friend RatPoly operator*(const Rational& s, RatPoly a) { return a *= s; }
    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

    // Euclidean division; throws on division by zero.
    void divmod(const RatPoly& d, RatPoly& q, RatPoly& r) const;
    RatPoly operator/(const RatPoly& d) const;
    RatPoly operator%(const RatPoly& d) const;

    std::string to_string(const std::string& var = "t") const;

private:
    void trim();
    std::vector<Rational> c_;
};

// Monic gcd (zero if both inputs are zero).
RatPoly gcd(RatPoly a, RatPoly b);

// Yun's squarefree decomposition: returns pairs (f_i, i) with p = c·∏ f_i^i,
// each f_i monic squarefree of positive degree and pairwise coprime.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p);

RatPoly squarefree_part(const RatPoly& p);

struct RealRoot {
    double value = 0.0;
    Rational lo, hi;  // the root lies in (lo, hi]
    int multiplicity = 1;
};

// Number of distinct real roots in (lo, hi]; an empty bound means ±infinity.
int sturm_count(const RatPoly& p, const std::optional<Rational>& lo = std::nullopt,
                const std::optional<Rational>& hi = std::nullopt);

// All distinct real roots, ascending, with multiplicities.
std::vector<RealRoot> real_roots(const RatPoly& p);

Rational resultant(const RatPoly& p, const RatPoly& q);
// Resultant of binary forms of formal degrees (m, n) >= actual degrees, i.e. the
// determinant of the m+n Sylvester matrix; zero if both degrees drop.
Rational resultant(const RatPoly& p, const RatPoly& q, int m, int n);

// l-th principal subresultant coefficient, 0 <= l <= min(deg p, deg q).
Rational subresultant_pspc(const RatPoly& p, const RatPoly& q, int l);

// Parses "3/4", "-2", "0.125" into an exact rational.
Rational parse_rational(const std::string& s);

}  // namespace whitcaus
