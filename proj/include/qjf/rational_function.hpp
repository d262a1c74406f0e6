#pragma once
#include <vector>
#include <string>
#include "qjf/rational.hpp"

namespace qjf {

// Dense integer polynomial in one variable, coefficients ascending.
// The zero polynomial is the empty vector.
struct ZPoly {
    std::vector<Int> c;

    ZPoly() = default;
    explicit ZPoly(std::vector<Int> v) : c(std::move(v)) { trim(); }
    static ZPoly one() { return ZPoly({Int(1)}); }
    static ZPoly monomial(int deg, Int coeff = Int(1));

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const Int& leading() const { return c.back(); }
    void trim();

    friend ZPoly operator+(const ZPoly& a, const ZPoly& b);
    friend ZPoly operator-(const ZPoly& a, const ZPoly& b);
    friend ZPoly operator*(const ZPoly& a, const ZPoly& b);
    friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.c == b.c; }

    ZPoly operator-() const;
    ZPoly mul_int(const Int& k) const;
    // exact division, throws if not divisible
    ZPoly div_exact(const ZPoly& d) const;
    // gcd of all coefficients, positive; 0 for the zero polynomial
    Int content() const;
    ZPoly primitive_part() const;
    // d/ds
    ZPoly derivative() const;
};

// gcd via primitive pseudo-remainder sequence; result primitive, leading > 0
ZPoly poly_gcd(ZPoly a, ZPoly b);

// scale * num/den in the variable s, with num, den primitive and coprime,
// den nonzero with positive leading coefficient, num with positive leading
// coefficient and the sign carried by scale.  Zero is scale == 0 with
// num == den == 1.
struct RationalFunction {
    Rat scale = 0;
    ZPoly num = ZPoly::one();
    ZPoly den = ZPoly::one();

    RationalFunction() = default;
    RationalFunction(const Rat& r) : scale(r) {}
    RationalFunction(long n) : scale(n) {}
    // num/den with arbitrary integer polynomials, canonicalized
    RationalFunction(ZPoly n, ZPoly d, const Rat& sc = Rat(1));

    // s^k, also for negative k
    static RationalFunction s_power(int k);

    bool is_zero() const { return qjf::is_zero(scale); }
    bool is_constant() const { return num.degree() <= 0 && den.degree() <= 0; }
    // value as a rational, throws unless constant
    Rat constant_value() const;

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b);
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    RationalFunction operator-() const;
    RationalFunction inverse() const;
    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }

    // (s/2) d/ds, the derivative p d/dp under p = s^2
    RationalFunction derive_p() const;

    // substitute a rational value for s; throws on a vanishing denominator
    Rat eval_at(const Rat& s) const;

    // coefficients of the Laurent expansion of this(e^{z/2}) around z = 0,
    // from z^lo_out up to z^zorder inclusive
    std::vector<Rat> exp_jet(int zorder, int& lo_out) const;

    std::string str() const;
};

void normalize_sign(ZPoly& num, ZPoly& den, Rat& scale);

inline bool is_zero(const RationalFunction& r) { return r.is_zero(); }

}  // namespace qjf
