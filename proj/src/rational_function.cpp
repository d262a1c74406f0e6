#include "qjf/rational_function.hpp"
#include <algorithm>
#include <sstream>

namespace qjf {

std::vector<Rat> bernoulli_list(int nmax) {
    std::vector<Rat> b(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        if (n == 0) { b[0] = 1; continue; }
        // sum_{k=0}^{n} binom(n+1,k) B_k = 0
        Rat acc = 0;
        for (int k = 0; k < n; ++k)
            acc += Rat(binomial(n + 1, k)) * b[k];
        b[n] = -acc / Rat(binomial(n + 1, n));
    }
    return b;
}

Int sigma_divisor(int k, int n) {
    Int s = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        Int p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(k));
        s += p;
    }
    return s;
}

ZPoly ZPoly::monomial(int deg, Int coeff) {
    ZPoly r;
    if (coeff == 0) return r;
    r.c.assign(deg + 1, Int(0));
    r.c[deg] = std::move(coeff);
    return r;
}

void ZPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

ZPoly operator+(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] += a.c[i];
        if (i < b.c.size()) r.c[i] += b.c[i];
    }
    r.trim();
    return r;
}

ZPoly operator-(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] += a.c[i];
        if (i < b.c.size()) r.c[i] -= b.c[i];
    }
    r.trim();
    return r;
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            if (b.c[j] == 0) continue;
            r.c[i + j] += a.c[i] * b.c[j];
        }
    }
    r.trim();
    return r;
}

ZPoly ZPoly::operator-() const {
    ZPoly r = *this;
    for (auto& x : r.c) x = -x;
    return r;
}

ZPoly ZPoly::mul_int(const Int& k) const {
    if (k == 0) return ZPoly();
    ZPoly r = *this;
    for (auto& x : r.c) x *= k;
    return r;
}

ZPoly ZPoly::div_exact(const ZPoly& d) const {
    if (d.is_zero()) throw std::invalid_argument("polynomial division by zero");
    if (is_zero()) return ZPoly();
    ZPoly rem = *this, q;
    int dq = degree() - d.degree();
    if (dq < 0) throw std::invalid_argument("inexact polynomial division");
    q.c.assign(dq + 1, Int(0));
    for (int k = dq; k >= 0; --k) {
        if (rem.degree() != k + d.degree()) continue;
        Int t;
        mpz_divexact(t.get_mpz_t(), rem.leading().get_mpz_t(), d.leading().get_mpz_t());
        if (t * d.leading() != rem.leading())
            throw std::invalid_argument("inexact polynomial division");
        q.c[k] = t;
        rem = rem - d.mul_int(t) * ZPoly::monomial(k);
    }
    if (!rem.is_zero()) throw std::invalid_argument("inexact polynomial division");
    q.trim();
    return q;
}

Int ZPoly::content() const {
    Int g = 0;
    for (const auto& x : c) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

ZPoly ZPoly::primitive_part() const {
    if (is_zero()) return ZPoly();
    Int g = content();
    ZPoly r = *this;
    for (auto& x : r.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return r;
}

ZPoly ZPoly::derivative() const {
    ZPoly r;
    if (c.size() <= 1) return r;
    r.c.resize(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * Int(static_cast<long>(i));
    r.trim();
    return r;
}

namespace {
// pseudo-remainder of a by b, deg a >= deg b >= 0
ZPoly pseudo_rem(ZPoly a, const ZPoly& b) {
    int e = a.degree() - b.degree() + 1;
    const Int& lb = b.leading();
    for (int i = 0; i < e; ++i) {
        if (a.is_zero() || a.degree() < b.degree()) {
            a = a.mul_int(lb);  // keep the classic normalization
            continue;
        }
        int k = a.degree() - b.degree();
        ZPoly t = b.mul_int(a.leading()) * ZPoly::monomial(k);
        a = a.mul_int(lb) - t;
    }
    return a;
}
}  // namespace

ZPoly poly_gcd(ZPoly a, ZPoly b) {
    if (a.is_zero()) {
        if (b.is_zero()) return ZPoly();
        ZPoly r = b.primitive_part();
        if (r.leading() < 0) r = -r;
        return r;
    }
    if (b.is_zero()) return poly_gcd(b, a);
    a = a.primitive_part();
    b = b.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        ZPoly r = pseudo_rem(a, b);
        a = std::move(b);
        b = r.primitive_part();
    }
    if (a.leading() < 0) a = -a;
    return a;
}

RationalFunction::RationalFunction(ZPoly n, ZPoly d, const Rat& sc) {
    if (d.is_zero()) throw std::invalid_argument("zero denominator");
    if (n.is_zero() || qjf::is_zero(sc)) { *this = RationalFunction(); return; }
    Int cn = n.content(), cd = d.content();
    n = n.primitive_part();
    d = d.primitive_part();
    ZPoly g = poly_gcd(n, d);
    if (g.degree() > 0 || g.leading() != 1) {
        n = n.div_exact(g);
        d = d.div_exact(g);
    }
    scale = sc * Rat(cn) / Rat(cd);
    if (d.leading() < 0) { d = -d; scale = -scale; }
    if (n.leading() < 0) { n = -n; scale = -scale; }
    scale.canonicalize();
    num = std::move(n);
    den = std::move(d);
}

RationalFunction RationalFunction::s_power(int k) {
    RationalFunction r;
    r.scale = 1;
    if (k >= 0) r.num = ZPoly::monomial(k);
    else r.den = ZPoly::monomial(-k);
    return r;
}

Rat RationalFunction::constant_value() const {
    if (!is_constant()) throw std::invalid_argument("rational function is not constant");
    if (is_zero()) return Rat(0);
    return scale * Rat(num.c[0]) / Rat(den.c[0]);
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    ZPoly g = poly_gcd(a.den, b.den);
    ZPoly da = a.den, db = b.den;
    if (g.degree() > 0 || g.leading() != 1) {
        da = a.den.div_exact(g);
        db = b.den.div_exact(g);
    }
    // a.scale * a.num * db + b.scale * b.num * da, over a.den * db
    Rat sa = a.scale, sb = b.scale;
    Int la = sa.get_den(), lb = sb.get_den(), l;
    mpz_lcm(l.get_mpz_t(), la.get_mpz_t(), lb.get_mpz_t());
    Int ma, mb;
    mpz_divexact(ma.get_mpz_t(), l.get_mpz_t(), la.get_mpz_t());
    mpz_divexact(mb.get_mpz_t(), l.get_mpz_t(), lb.get_mpz_t());
    ZPoly n = (a.num * db).mul_int(sa.get_num() * ma) + (b.num * da).mul_int(sb.get_num() * mb);
    return RationalFunction(std::move(n), a.den * db, Rat(1) / Rat(l));
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + (-b);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.scale = -r.scale;
    return r;
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction();
    ZPoly g1 = poly_gcd(a.num, b.den);
    ZPoly g2 = poly_gcd(b.num, a.den);
    ZPoly n1 = a.num, d2 = b.den, n2 = b.num, d1 = a.den;
    if (g1.degree() > 0) { n1 = n1.div_exact(g1); d2 = d2.div_exact(g1); }
    if (g2.degree() > 0) { n2 = n2.div_exact(g2); d1 = d1.div_exact(g2); }
    RationalFunction r;
    r.scale = a.scale * b.scale;
    r.num = n1 * n2;
    r.den = d1 * d2;
    normalize_sign(r.num, r.den, r.scale);
    return r;
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw std::invalid_argument("inverse of zero");
    RationalFunction r;
    r.scale = 1 / scale;
    r.num = den;
    r.den = num;
    normalize_sign(r.num, r.den, r.scale);
    return r;
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    return a * b.inverse();
}

void normalize_sign(ZPoly& num, ZPoly& den, Rat& scale) {
    if (den.leading() < 0) { den = -den; scale = -scale; }
    if (!num.is_zero() && num.leading() < 0) { num = -num; scale = -scale; }
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.scale == b.scale && a.num == b.num && a.den == b.den;
}

RationalFunction RationalFunction::derive_p() const {
    if (is_zero()) return RationalFunction();
    // (s/2) (num' den - num den') / den^2
    ZPoly n = (num.derivative() * den - num * den.derivative()) * ZPoly::monomial(1);
    return RationalFunction(std::move(n), den * den, scale / 2);
}

Rat RationalFunction::eval_at(const Rat& s) const {
    if (is_zero()) return Rat(0);
    Rat n = 0, d = 0, p = 1;
    for (const auto& x : num.c) { n += Rat(x) * p; p *= s; }
    p = 1;
    for (const auto& x : den.c) { d += Rat(x) * p; p *= s; }
    if (qjf::is_zero(d)) throw std::invalid_argument("pole at evaluation point");
    return scale * n / d;
}

namespace {
// multiplicity of the root s = 1
int root_one_multiplicity(ZPoly p) {
    int v = 0;
    ZPoly s_minus_1({Int(-1), Int(1)});
    for (;;) {
        Int val = 0;
        for (const auto& x : p.c) val += x;
        if (val != 0 || p.is_zero()) return v;
        p = p.div_exact(s_minus_1);
        ++v;
    }
}
}  // namespace

std::vector<Rat> RationalFunction::exp_jet(int zorder, int& lo_out) const {
    // this(e^{z/2}) as a Laurent series in z, exact through z^zorder
    if (is_zero()) { lo_out = 0; return {}; }
    int v = root_one_multiplicity(den);
    int zext = zorder + 2 * v;
    auto poly_jet = [&](const ZPoly& p) {
        // p(e^{z/2}) = sum_k p_k e^{kz/2}, a power series in z
        std::vector<Rat> out(zext + 1, Rat(0));
        for (size_t k = 0; k < p.c.size(); ++k) {
            if (p.c[k] == 0) continue;
            Rat term(p.c[k]);
            Rat half_k = Rat(static_cast<long>(k)) / 2;
            Rat pw = 1, fact = 1;
            for (int j = 0; j <= zext; ++j) {
                if (j > 0) { pw *= half_k; fact *= j; }
                out[j] += term * pw / fact;
            }
        }
        return out;
    };
    std::vector<Rat> nj = poly_jet(num), dj = poly_jet(den);
    // dj has valuation exactly v; the quotient is exact through z^zorder
    int terms = zorder + v + 1;
    std::vector<Rat> q(terms, Rat(0));
    for (int i = 0; i < terms; ++i) {
        Rat acc = nj[i];
        for (int j = 0; j < i; ++j) acc -= q[j] * dj[v + i - j];
        q[i] = acc / dj[v];
    }
    lo_out = -v;
    for (auto& x : q) x *= scale;
    return q;
}

std::string RationalFunction::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    auto poly_str = [](const ZPoly& p) {
        std::ostringstream ps;
        bool first = true;
        for (int k = p.degree(); k >= 0; --k) {
            if (p.c[k] == 0) continue;
            if (!first) ps << (p.c[k] > 0 ? " + " : " - ");
            else if (p.c[k] < 0) ps << "-";
            Int a = abs(p.c[k]);
            if (a != 1 || k == 0) ps << a.get_str();
            if (k > 0) ps << "s";
            if (k > 1) ps << "^" << k;
            first = false;
        }
        return ps.str();
    };
    os << scale.get_str();
    if (num.degree() > 0 || num.c[0] != 1) os << "*(" << poly_str(num) << ")";
    if (den.degree() > 0 || den.c[0] != 1) os << "/(" << poly_str(den) << ")";
    return os.str();
}

}  // namespace qjf
