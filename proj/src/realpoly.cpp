#include "whitcaus/realpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace whitcaus {

namespace {


// Sturm chain of a squarefree polynomial; each member is scaled by a positive
// constant to keep coefficients small (signs are unaffected).
std::vector<RatPoly> sturm_chain(const RatPoly& s) {
    std::vector<RatPoly> chain;
    chain.push_back(s);
    if (s.degree() >= 1) chain.push_back(s.derivative());
    while (chain.back().degree() >= 1) {
        RatPoly r = -(chain[chain.size() - 2] % chain.back());
        if (r.is_zero()) break;
        Rational lc = abs(r.lead());
        r *= Rational(1) / lc;
        chain.push_back(std::move(r));
    }
    return chain;
}

int variations(const std::vector<int>& signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

int variations_at(const std::vector<RatPoly>& chain, const std::optional<Rational>& x,
                  bool neg_inf) {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& p : chain) {
        if (x) {
            signs.push_back(p.sign_at(*x));
        } else {
            int s = sgn(p.lead());
            if (neg_inf && (p.degree() % 2 == 1)) s = -s;
            signs.push_back(s);
        }
    }
    return variations(signs);
}

int count_in(const std::vector<RatPoly>& chain, const std::optional<Rational>& lo,
             const std::optional<Rational>& hi) {
    return variations_at(chain, lo, true) - variations_at(chain, hi, false);
}

Rational cauchy_bound(const RatPoly& p) {
    Rational m = 0;
    const Rational lc = abs(p.lead());
    for (int i = 0; i < p.degree(); ++i) {
        Rational q = abs(p.coeff(i)) / lc;
        if (q > m) m = q;
    }
    return m + 1;
}

mpz_class lcm_denominators(const RatPoly& p) {
    mpz_class l = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    return l;
}

using ZPoly = std::vector<mpz_class>;  // ascending, trimmed

int zdeg(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

void ztrim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

ZPoly to_integer(const RatPoly& p, mpz_class& scale) {
    scale = lcm_denominators(p);
    ZPoly out;
    for (const auto& c : p.coeffs()) {
        mpq_class v = c * scale;
        out.push_back(v.get_num());
    }
    return out;
}

mpz_class content(const ZPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

// lc(b)^(deg a - deg b + 1) * a  mod  b
ZPoly pseudo_rem(ZPoly a, const ZPoly& b) {
    const int db = zdeg(b);
    const mpz_class& lb = b.back();
    int e = zdeg(a) - db + 1;
    while (!a.empty() && zdeg(a) >= db) {
        mpz_class la = a.back();
        const int shift = zdeg(a) - db;
        for (auto& c : a) c *= lb;
        for (int i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
        ztrim(a);
        --e;
    }
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(std::max(e, 0)));
    for (auto& c : a) c *= f;
    return a;
}

mpz_class zpow(const mpz_class& b, int e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

// Resultant of integer polynomials by the subresultant PRS.
mpz_class zresultant(ZPoly A, ZPoly B) {
    if (A.empty() || B.empty()) return 0;
    if (zdeg(A) == 0) return zpow(A[0], zdeg(B));
    if (zdeg(B) == 0) return zpow(B[0], zdeg(A));

    int s = 1;
    if (zdeg(A) < zdeg(B)) {
        std::swap(A, B);
        if (zdeg(A) % 2 == 1 && zdeg(B) % 2 == 1) s = -s;
    }
    mpz_class a = content(A), b = content(B);
    for (auto& c : A) c /= a;
    for (auto& c : B) c /= b;
    mpz_class t = zpow(a, zdeg(B)) * zpow(b, zdeg(A));
    mpz_class g = 1, h = 1;
    for (;;) {
        const int delta = zdeg(A) - zdeg(B);
        if (zdeg(A) % 2 == 1 && zdeg(B) % 2 == 1) s = -s;
        ZPoly R = pseudo_rem(A, B);
        A = std::move(B);
        mpz_class div = g * zpow(h, delta);
        for (auto& c : R) c /= div;
        B = std::move(R);
        g = A.back();
        if (delta == 0) {
            // h unchanged
        } else {
            h = zpow(g, delta) / zpow(h, delta - 1);
        }
        if (B.empty()) return 0;
        if (zdeg(B) > 0) continue;
        const int da = zdeg(A);
        h = zpow(B[0], da) / zpow(h, da - 1);
        return s * t * h;
    }
}

Rational det_exact(std::vector<std::vector<Rational>> m) {
    const int n = static_cast<int>(m.size());
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

}  // namespace

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    trim();
}

RatPoly::RatPoly(std::initializer_list<Rational> coeffs) : RatPoly(std::vector<Rational>(coeffs)) {}

RatPoly RatPoly::constant(const Rational& c) { return RatPoly({c}); }

RatPoly RatPoly::monomial(const Rational& c, int deg) {
    std::vector<Rational> v(static_cast<size_t>(deg) + 1, Rational(0));
    v[static_cast<size_t>(deg)] = c;
    return RatPoly(std::move(v));
}

RatPoly RatPoly::linear_root(const Rational& r) { return RatPoly({-r, Rational(1)}); }

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RatPoly::coeff(int i) const {
    if (i < 0 || i > degree()) return 0;
    return c_[static_cast<size_t>(i)];
}

const Rational& RatPoly::lead() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return c_.back();
}

Rational RatPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double RatPoly::eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

int RatPoly::sign_at(const Rational& x) const { return sgn(eval(x)); }

RatPoly RatPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return RatPoly(std::move(d));
}

RatPoly RatPoly::monic() const {
    if (is_zero()) return {};
    RatPoly r = *this;
    r *= Rational(1) / lead();
    return r;
}

RatPoly RatPoly::operator-() const {
    RatPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

RatPoly& RatPoly::operator*=(const RatPoly& o) {
    if (is_zero() || o.is_zero()) {
        c_.clear();
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    trim();
    return *this;
}

RatPoly& RatPoly::operator*=(const Rational& s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
}

void RatPoly::divmod(const RatPoly& d, RatPoly& q, RatPoly& r) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    r = *this;
    std::vector<Rational> qc(static_cast<size_t>(std::max(degree() - d.degree() + 1, 0)), Rational(0));
    const Rational& ld = d.lead();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        const int shift = r.degree() - d.degree();
        Rational f = r.lead() / ld;
        qc[static_cast<size_t>(shift)] = f;
        for (int i = 0; i <= d.degree(); ++i) r.c_[static_cast<size_t>(i + shift)] -= f * d.c_[static_cast<size_t>(i)];
        r.trim();
    }
    q = RatPoly(std::move(qc));
}

RatPoly RatPoly::operator/(const RatPoly& d) const {
    RatPoly q, r;
    divmod(d, q, r);
    return q;
}

RatPoly RatPoly::operator%(const RatPoly& d) const {
    RatPoly q, r;
    divmod(d, q, r);
    return r;
}

std::string RatPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = c_[static_cast<size_t>(i)];
        if (c == 0) continue;
        Rational a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        const bool unit = (a == 1);
        if (!unit || i == 0) os << a.get_str();
        if (i >= 1) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

RatPoly gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p) {
    if (p.is_zero()) throw std::domain_error("indeterminate: zero polynomial");
    std::vector<std::pair<RatPoly, int>> out;
    if (p.degree() == 0) return out;
    RatPoly f = p.monic();
    RatPoly fp = f.derivative();
    RatPoly a = gcd(f, fp);
    RatPoly b = f / a;
    RatPoly c = fp / a;
    RatPoly d = c - b.derivative();
    int i = 1;
    while (b.degree() >= 1) {
        RatPoly g = gcd(b, d);
        if (g.degree() >= 1) out.emplace_back(g, i);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

RatPoly squarefree_part(const RatPoly& p) {
    if (p.is_zero()) throw std::domain_error("indeterminate: zero polynomial");
    if (p.degree() == 0) return RatPoly::constant(1);
    return (p / gcd(p, p.derivative())).monic();
}

int sturm_count(const RatPoly& p, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    if (p.is_zero()) throw std::domain_error("indeterminate: zero polynomial");
    if (p.degree() == 0) return 0;
    if (lo && hi && *lo >= *hi) return 0;
    return count_in(sturm_chain(squarefree_part(p)), lo, hi);
}

namespace {

void isolate(const std::vector<RatPoly>& chain, const Rational& lo, const Rational& hi, int count,
             std::vector<std::pair<Rational, Rational>>& out) {
    if (count == 0) return;
    if (count == 1) {
        out.emplace_back(lo, hi);
        return;
    }
    Rational mid = (lo + hi) / 2;
    const int left = count_in(chain, lo, mid);
    isolate(chain, lo, mid, left, out);
    isolate(chain, mid, hi, count - left, out);
}

}  // namespace

std::vector<RealRoot> real_roots(const RatPoly& p) {
    if (p.is_zero()) throw std::domain_error("indeterminate: zero polynomial");
    std::vector<RealRoot> roots;
    for (const auto& [f, mult] : squarefree_decomposition(p)) {
        auto chain = sturm_chain(f);
        const Rational B = cauchy_bound(f);
        const int total = count_in(chain, -B, B);
        std::vector<std::pair<Rational, Rational>> ivs;
        isolate(chain, -B, B, total, ivs);
        const RatPoly df = f.derivative();
        for (auto [lo, hi] : ivs) {
            RealRoot r;
            r.multiplicity = mult;
            const int s_hi = f.sign_at(hi);
            int s_lo = f.sign_at(lo);
            if (s_hi != 0 && s_lo == 0) {
                // lo is the neighbouring interval's root; move it inside without losing ours
                Rational step = (hi - lo) / 2;
                while (count_in(chain, lo + step, hi) != 1) step /= 2;
                lo += step;
                s_lo = f.sign_at(lo);
            }
            r.lo = lo;
            r.hi = hi;
            if (s_hi == 0) {
                r.value = hi.get_d();
            } else {
                // the exact signs at the ends differ, so plain bisection in double precision
                // converges to the root up to the rounding noise of the evaluation
                double l = lo.get_d(), h = hi.get_d();
                for (int it = 0; it < 200; ++it) {
                    const double m = 0.5 * (l + h);
                    if (m <= l || m >= h) break;
                    const double v = f.eval(m);
                    if (v == 0.0) {
                        l = h = m;
                        break;
                    }
                    ((v > 0) == (s_lo > 0) ? l : h) = m;
                }
                double x = 0.5 * (l + h);
                const double d = df.eval(x);
                if (d != 0.0) {
                    const double nx = x - f.eval(x) / d;
                    if (std::abs(nx - x) <= 4 * std::abs(h - l) + 1e-300) x = nx;
                }
                r.value = x;
            }
            roots.push_back(std::move(r));
        }
    }
    std::sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
    return roots;
}

Rational resultant(const RatPoly& p, const RatPoly& q) {
    if (p.is_zero() || q.is_zero()) throw std::domain_error("resultant of the zero polynomial");
    mpz_class sp, sq;
    ZPoly P = to_integer(p, sp), Q = to_integer(q, sq);
    // Res(sp·p, sq·q) = sp^deg q · sq^deg p · Res(p, q)
    Rational r(zresultant(P, Q));
    r /= Rational(zpow(sp, q.degree()) * zpow(sq, p.degree()));
    return r;
}

Rational resultant(const RatPoly& p, const RatPoly& q, int m, int n) {
    const int dp = p.degree(), dq = q.degree();
    if (dp > m || dq > n) throw std::invalid_argument("resultant: formal degree below actual degree");
    if (dp < m && dq < n) return 0;
    if (dq < n) {
        // expand the Sylvester determinant along its leading columns
        Rational r = resultant(p, q);
        for (int i = 0; i < n - dq; ++i) r *= p.lead();
        return r;
    }
    if (dp < m) {
        Rational r = resultant(p, q);
        for (int i = 0; i < m - dp; ++i) r *= q.lead();
        if (((m - dp) * n) % 2 != 0) r = -r;
        return r;
    }
    return resultant(p, q);
}

Rational subresultant_pspc(const RatPoly& p, const RatPoly& q, int l) {
    if (p.is_zero() || q.is_zero()) throw std::domain_error("subresultant of the zero polynomial");
    const int m = p.degree(), n = q.degree();
    if (l < 0 || l > std::min(m, n)) throw std::out_of_range("subresultant index out of range");
    const int size = m + n - 2 * l;
    if (size == 0) return 1;
    std::vector<std::vector<Rational>> M(static_cast<size_t>(size), std::vector<Rational>(static_cast<size_t>(size), Rational(0)));
    // column c holds the coefficient of x^(m+n-l-1-c)
    const int top = m + n - l - 1;
    int row = 0;
    for (int j = n - l - 1; j >= 0; --j, ++row)
        for (int i = 0; i <= m; ++i) {
            const int col = top - (i + j);
            if (col >= 0 && col < size) M[static_cast<size_t>(row)][static_cast<size_t>(col)] = p.coeff(i);
        }
    for (int j = m - l - 1; j >= 0; --j, ++row)
        for (int i = 0; i <= n; ++i) {
            const int col = top - (i + j);
            if (col >= 0 && col < size) M[static_cast<size_t>(row)][static_cast<size_t>(col)] = q.coeff(i);
        }
    return det_exact(std::move(M));
}

Rational parse_rational(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t.empty()) throw std::invalid_argument("empty rational");
    const auto dot = t.find('.');
    if (dot == std::string::npos) {
        Rational r;
        if (r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational: " + s);
        r.canonicalize();
        return r;
    }
    bool neg = false;
    std::string body = t;
    if (body[0] == '-' || body[0] == '+') {
        neg = body[0] == '-';
        body = body.substr(1);
    }
    const auto d = body.find('.');
    std::string ip = body.substr(0, d), fp = body.substr(d + 1);
    if (ip.empty()) ip = "0";
    for (char ch : ip + fp)
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw std::invalid_argument("bad rational: " + s);
    mpz_class num(ip + fp, 10);
    mpz_class den = zpow(mpz_class(10), static_cast<int>(fp.size()));
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

}  // namespace whitcaus
