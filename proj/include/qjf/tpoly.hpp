#pragma once
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include "qjf/series.hpp"

namespace qjf {

// Laurent polynomial in two equivariant parameters t1, t2 with rational
// coefficients.  Division is supported for monomials only.
struct TPoly {
    std::map<std::pair<int, int>, Rat> t;

    TPoly() = default;
    TPoly(const Rat& r) {
        if (!qjf::is_zero(r)) t[{0, 0}] = r;
    }
    TPoly(long n) : TPoly(Rat(n)) {}
    static TPoly monomial(int i, int j, const Rat& c = Rat(1)) {
        TPoly r;
        if (!qjf::is_zero(c)) r.t[{i, j}] = c;
        return r;
    }

    bool is_zero_p() const { return t.empty(); }
    void prune() {
        for (auto it = t.begin(); it != t.end();)
            it = qjf::is_zero(it->second) ? t.erase(it) : std::next(it);
    }

    friend TPoly operator+(const TPoly& a, const TPoly& b) {
        TPoly r = a;
        for (const auto& [k, v] : b.t) r.t[k] += v;
        r.prune();
        return r;
    }
    friend TPoly operator-(const TPoly& a, const TPoly& b) {
        TPoly r = a;
        for (const auto& [k, v] : b.t) r.t[k] -= v;
        r.prune();
        return r;
    }
    TPoly operator-() const { return TPoly() - *this; }
    friend TPoly operator*(const TPoly& a, const TPoly& b) {
        TPoly r;
        for (const auto& [ka, va] : a.t)
            for (const auto& [kb, vb] : b.t)
                r.t[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
        r.prune();
        return r;
    }
    friend bool operator==(const TPoly& a, const TPoly& b) { return a.t == b.t; }

    bool is_monomial() const { return t.size() == 1; }
    bool is_constant() const {
        return t.empty() || (t.size() == 1 && t.begin()->first == std::make_pair(0, 0));
    }
    // the scalar value; throws when a term carries t1 or t2
    Rat constant_value() const {
        if (t.empty()) return Rat(0);
        if (!is_constant())
            throw std::invalid_argument("coefficient carries torus weights: " + str());
        return t.begin()->second;
    }
    TPoly scaled(const Rat& k) const {
        TPoly r;
        if (qjf::is_zero(k)) return r;
        for (const auto& [e, c] : t) {
            Rat v = c * k;
            r.t[e] = v;
        }
        return r;
    }
    // negative exponents are monomial-only
    TPoly pow(int e) const {
        if (e == 0) return TPoly(Rat(1));
        if (e < 0) return inverse().pow(-e);
        TPoly r = *this;
        for (int i = 1; i < e; ++i) r = r * (*this);
        return r;
    }
    std::string str() const {
        if (t.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t) {
            if (!first) os << " + ";
            first = false;
            os << c;
            if (e.first) os << "*t1^" << e.first;
            if (e.second) os << "*t2^" << e.second;
        }
        return os.str();
    }
    TPoly inverse() const {
        if (!is_monomial())
            throw std::invalid_argument("only monomials are invertible in the t ring");
        const auto& [k, v] = *t.begin();
        return monomial(-k.first, -k.second, 1 / v);
    }

    // substitute t2 = -t1
    TPoly anti_diagonal() const {
        TPoly r;
        for (const auto& [k, v] : t) {
            Rat c = (k.second % 2) ? -v : v;
            r.t[{k.first + k.second, 0}] += c;
        }
        r.prune();
        return r;
    }
};

inline bool is_zero(const TPoly& a) { return a.t.empty(); }
template <> inline TPoly unit_coeff<TPoly>() { return TPoly(Rat(1)); }
template <> inline TPoly scalar_coeff<TPoly>(long n) { return TPoly(Rat(n)); }
inline TPoly invert_coeff(const TPoly& a) { return a.inverse(); }

}  // namespace qjf
