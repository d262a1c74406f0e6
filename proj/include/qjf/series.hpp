#pragma once
#include <algorithm>
#include <stdexcept>
#include <vector>
#include "qjf/rational_function.hpp"

namespace qjf {

// coefficient-ring hooks
template <class R> R unit_coeff();
template <class R> R scalar_coeff(long n);
template <> inline Rat unit_coeff<Rat>() { return Rat(1); }
template <> inline Rat scalar_coeff<Rat>(long n) { return Rat(n); }
template <> inline RationalFunction unit_coeff<RationalFunction>() { return RationalFunction(Rat(1)); }
template <> inline RationalFunction scalar_coeff<RationalFunction>(long n) { return RationalFunction(Rat(n)); }

inline RationalFunction invert_coeff(const RationalFunction& x) { return x.inverse(); }
inline Rat invert_coeff(const Rat& x) {
    if (is_zero(x)) throw std::invalid_argument("inverse of zero");
    return 1 / x;
}

// Truncated Laurent series in q with coefficients in R.  c[i] is the
// coefficient of q^(qshift+i); all exponents through trunc are exact and
// nothing is stored or known beyond it.  R needs default construction to
// zero, +, -, *, ==, and a free is_zero.
template <class R>
struct QSeries {
    int qshift = 0;
    int trunc = -1;  // inclusive; trunc < qshift means no known coefficients
    std::vector<R> c;

    QSeries() = default;
    QSeries(int shift, int tr) : qshift(shift), trunc(tr) {
        if (tr >= shift) c.assign(tr - shift + 1, R());
    }

    static QSeries zero_to(int tr) { return QSeries(0, tr); }
    static QSeries constant(const R& v, int tr) {
        QSeries r(0, tr);
        if (tr >= 0) r.c[0] = v;
        return r;
    }

    const R& coeff(int n) const {
        static const R zr{};
        if (n > trunc)
            throw std::out_of_range("coefficient beyond truncation order");
        if (n < qshift) return zr;
        return c[n - qshift];
    }
    R& at(int n) {
        if (n < qshift || n > trunc) throw std::out_of_range("q exponent out of range");
        return c[n - qshift];
    }

    bool all_zero() const {
        for (const auto& x : c)
            if (!is_zero(x)) return false;
        return true;
    }

    // exponent of the first nonzero stored coefficient, trunc+1 if all zero
    int valuation() const {
        for (size_t i = 0; i < c.size(); ++i)
            if (!is_zero(c[i])) return qshift + static_cast<int>(i);
        return trunc + 1;
    }

    // drop known-zero leading coefficients
    QSeries normalized() const {
        QSeries r = *this;
        while (!r.c.empty() && is_zero(r.c.front())) {
            r.c.erase(r.c.begin());
            ++r.qshift;
        }
        return r;
    }

    QSeries shifted(int k) const {
        QSeries r = *this;
        r.qshift += k;
        r.trunc += k;
        return r;
    }

    QSeries truncated(int tr) const {
        if (tr > trunc) throw std::out_of_range("cannot extend truncation");
        QSeries r;
        r.qshift = qshift;
        r.trunc = tr;
        if (tr >= qshift) r.c.assign(c.begin(), c.begin() + (tr - qshift + 1));
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.qshift, b.qshift), std::min(a.trunc, b.trunc));
        for (int n = r.qshift; n <= r.trunc; ++n) {
            R v{};
            if (n >= a.qshift && n <= a.trunc) v = v + a.c[n - a.qshift];
            if (n >= b.qshift && n <= b.trunc) v = v + b.c[n - b.qshift];
            r.c[n - r.qshift] = v;
        }
        return r;
    }
    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }
    QSeries operator-() const {
        QSeries r = *this;
        for (auto& x : r.c) x = R() - x;
        return r;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        QSeries r(a.qshift + b.qshift,
                  std::min(a.trunc + b.qshift, b.trunc + a.qshift));
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (is_zero(a.c[i])) continue;
            int na = a.qshift + static_cast<int>(i);
            for (size_t j = 0; j < b.c.size(); ++j) {
                int n = na + b.qshift + static_cast<int>(j);
                if (n > r.trunc) break;
                if (is_zero(b.c[j])) continue;
                r.c[n - r.qshift] = r.c[n - r.qshift] + a.c[i] * b.c[j];
            }
        }
        return r;
    }

    QSeries scaled(const R& k) const {
        QSeries r = *this;
        for (auto& x : r.c) x = x * k;
        return r;
    }

    // multiplicative inverse; the leading coefficient must be invertible in R
    QSeries inverse() const {
        QSeries a = normalized();
        if (a.c.empty() || is_zero(a.c.front()))
            throw std::invalid_argument("inverse of a series with no visible leading term");
        int n0 = a.qshift;
        int len = a.trunc - n0 + 1;
        QSeries r;
        r.qshift = -n0;
        r.trunc = a.trunc - 2 * n0;
        r.c.assign(len, R());
        R lead_inv = invert_coeff(a.c[0]);
        for (int i = 0; i < len; ++i) {
            R acc = (i == 0) ? unit_coeff<R>() : R();
            for (int j = 0; j < i; ++j) acc = acc - r.c[j] * a.c[i - j];
            r.c[i] = acc * lead_inv;
        }
        return r;
    }

    QSeries pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        if (e == 0) return QSeries::constant(unit_coeff<R>(), trunc - qshift);
        QSeries res = *this;
        for (int i = 1; i < e; ++i) res = res * (*this);
        return res;
    }

    // q d/dq
    QSeries derive_q() const {
        QSeries r = *this;
        for (int n = r.qshift; n <= r.trunc; ++n)
            r.c[n - r.qshift] = r.c[n - r.qshift] * scalar_coeff<R>(n);
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        int hi = std::min(a.trunc, b.trunc);
        int lo = std::min(a.qshift, b.qshift);
        for (int n = lo; n <= hi; ++n) {
            R va{}, vb{};
            if (n >= a.qshift) va = a.c[n - a.qshift];
            if (n >= b.qshift) vb = b.c[n - b.qshift];
            if (!(va == vb)) return false;
        }
        return true;
    }
};

using FourierSeries = QSeries<RationalFunction>;

// p d/dp applied coefficientwise
inline FourierSeries derive_p(const FourierSeries& a) {
    FourierSeries r = a;
    for (auto& x : r.c) x = x.derive_p();
    return r;
}

}  // namespace qjf
