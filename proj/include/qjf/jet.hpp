#pragma once
#include <array>
#include <functional>
#include "qjf/series.hpp"

namespace qjf {

// sentinel for "exact at every order in this variable"
constexpr int jet_inf = 1 << 28;
inline int jet_add(int a, int b) {
    return (a >= jet_inf || b >= jet_inf) ? jet_inf : a + b;
}

// Truncated Laurent expansion in up to three formal variables, each cell a
// q-series over R.  lo/hi is the logical window: exponents below lo[v]
// vanish identically, exponents above hi[v] are unknown (hi[v] == jet_inf
// means exact at all orders).  Cells are stored densely for exponents
// lo[v]..shi[v]; stored-above-window cells, i.e. exponents in (shi[v], hi[v]],
// are exactly zero.
template <class R>
struct Jet {
    int nv = 0;
    std::array<int, 3> lo{{0, 0, 0}};
    std::array<int, 3> hi{{-1, -1, -1}};
    std::array<int, 3> shi{{-1, -1, -1}};
    std::vector<QSeries<R>> cells;

    Jet() = default;
    Jet(int nvars, std::array<int, 3> l, std::array<int, 3> h, int qshift, int qtrunc)
        : nv(nvars), lo(l), hi(h) {
        for (int v = nv; v < 3; ++v) lo[v] = 0, hi[v] = 0;
        for (int v = 0; v < 3; ++v) shi[v] = (v < nv && hi[v] >= jet_inf) ? lo[v] - 1 : hi[v];
        for (int v = nv; v < 3; ++v) shi[v] = 0;
        cells.assign(cell_count(), QSeries<R>(qshift, qtrunc));
    }

    // a jet constant in all variables
    static Jet from_qseries(int nvars, const QSeries<R>& s) {
        Jet r;
        r.nv = nvars;
        for (int v = 0; v < 3; ++v) {
            r.lo[v] = 0;
            r.hi[v] = (v < nvars) ? jet_inf : 0;
            r.shi[v] = 0;
        }
        r.cells.assign(1, s);
        return r;
    }

    // s * prod_v x_v^{expnt[v]}, exact at every order in every variable
    static Jet exact_monomial(int nvars, std::array<int, 3> expnt, const QSeries<R>& s) {
        Jet r;
        r.nv = nvars;
        for (int v = 0; v < 3; ++v) {
            r.lo[v] = (v < nvars) ? expnt[v] : 0;
            r.hi[v] = (v < nvars) ? jet_inf : 0;
            r.shi[v] = (v < nvars) ? expnt[v] : 0;
        }
        r.cells.assign(1, s);
        return r;
    }

    size_t span(int v) const { return static_cast<size_t>(shi[v] - lo[v] + 1); }
    size_t cell_count() const {
        size_t n = 1;
        for (int v = 0; v < nv; ++v) {
            if (shi[v] < lo[v]) return 0;
            n *= span(v);
        }
        if (nv == 0) return 1;
        return n;
    }
    size_t index(std::array<int, 3> e) const {
        size_t idx = 0;
        for (int v = 0; v < nv; ++v) idx = idx * span(v) + static_cast<size_t>(e[v] - lo[v]);
        return idx;
    }
    bool in_storage(std::array<int, 3> e) const {
        for (int v = 0; v < nv; ++v)
            if (e[v] < lo[v] || e[v] > shi[v]) return false;
        return true;
    }
    const QSeries<R>& cell(std::array<int, 3> e) const { return cells[index(e)]; }
    QSeries<R>& cell(std::array<int, 3> e) { return cells[index(e)]; }

    void for_each(const std::function<void(std::array<int, 3>, const QSeries<R>&)>& f) const {
        if (cells.empty()) return;
        std::array<int, 3> e = lo;
        for (int v = nv; v < 3; ++v) e[v] = 0;
        for (size_t i = 0; i < cells.size(); ++i) {
            f(e, cells[i]);
            for (int v = nv - 1; v >= 0; --v) {
                if (++e[v] <= shi[v]) break;
                e[v] = lo[v];
            }
        }
    }

    int qshift_common() const {
        int s = cells.empty() ? 0 : cells[0].qshift;
        for (const auto& cl : cells) s = std::min(s, cl.qshift);
        return s;
    }
    int qtrunc_common() const {
        if (cells.empty()) return -1;
        int t = cells[0].trunc;
        for (const auto& cl : cells) t = std::min(t, cl.trunc);
        return t;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        if (a.nv != b.nv) throw std::invalid_argument("jet variable count mismatch");
        Jet r;
        r.nv = a.nv;
        for (int v = 0; v < 3; ++v) {
            r.lo[v] = std::min(a.lo[v], b.lo[v]);
            r.hi[v] = std::min(a.hi[v], b.hi[v]);
            r.shi[v] = std::min(std::max(a.shi[v], b.shi[v]), r.hi[v]);
        }
        for (int v = a.nv; v < 3; ++v) r.lo[v] = 0, r.hi[v] = 0, r.shi[v] = 0;
        int qs = std::min(a.qshift_common(), b.qshift_common());
        int qt = std::min(a.qtrunc_common(), b.qtrunc_common());
        r.cells.assign(r.cell_count(), QSeries<R>(qs, qt));
        auto acc = [&](const Jet& src) {
            src.for_each([&](std::array<int, 3> e, const QSeries<R>& cell) {
                if (r.in_storage(e)) r.cell(e) = r.cell(e) + cell;
            });
        };
        acc(a);
        acc(b);
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
    Jet operator-() const {
        Jet r = *this;
        for (auto& cl : r.cells) cl = -cl;
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        if (a.nv != b.nv) throw std::invalid_argument("jet variable count mismatch");
        Jet r;
        r.nv = a.nv;
        for (int v = 0; v < 3; ++v) {
            r.lo[v] = a.lo[v] + b.lo[v];
            r.hi[v] = std::min(jet_add(a.hi[v], b.lo[v]), jet_add(b.hi[v], a.lo[v]));
            r.shi[v] = std::min(a.shi[v] + b.shi[v], r.hi[v] >= jet_inf ? a.shi[v] + b.shi[v] : r.hi[v]);
        }
        for (int v = a.nv; v < 3; ++v) r.lo[v] = 0, r.hi[v] = 0, r.shi[v] = 0;
        int qs = a.qshift_common() + b.qshift_common();
        int qt = std::min(jet_add(a.qtrunc_common(), b.qshift_common()),
                          jet_add(b.qtrunc_common(), a.qshift_common()));
        r.cells.assign(r.cell_count(), QSeries<R>(qs, qt));
        a.for_each([&](std::array<int, 3> ea, const QSeries<R>& ca) {
            if (ca.all_zero()) return;
            b.for_each([&](std::array<int, 3> eb, const QSeries<R>& cb) {
                if (cb.all_zero()) return;
                std::array<int, 3> e{{0, 0, 0}};
                for (int v = 0; v < a.nv; ++v) e[v] = ea[v] + eb[v];
                if (!r.in_storage(e)) return;
                QSeries<R> prod = ca * cb;
                QSeries<R>& tgt = r.cell(e);
                tgt = (tgt + prod).truncated(tgt.trunc);
            });
        });
        return r;
    }

    Jet scaled(const R& k) const {
        Jet r = *this;
        for (auto& cl : r.cells) cl = cl.scaled(k);
        return r;
    }
    Jet scaled_q(const QSeries<R>& s) const {
        Jet r = *this;
        for (auto& cl : r.cells) cl = cl * s;
        return r;
    }

    // slice at exponent e of variable v, dropping that variable
    Jet plane(int v, int e) const {
        if (e > hi[v]) throw std::out_of_range("jet exponent beyond exact window");
        Jet r;
        r.nv = nv - 1;
        int w = 0;
        for (int u = 0; u < nv; ++u) {
            if (u == v) continue;
            r.lo[w] = lo[u];
            r.hi[w] = hi[u];
            r.shi[w] = shi[u];
            ++w;
        }
        for (int u = r.nv; u < 3; ++u) r.lo[u] = 0, r.hi[u] = 0, r.shi[u] = 0;
        r.cells.assign(r.cell_count(), QSeries<R>(qshift_common(), qtrunc_common()));
        if (e < lo[v] || e > shi[v]) return r;  // exactly zero slice
        for_each([&](std::array<int, 3> ex, const QSeries<R>& cell) {
            if (ex[v] != e) return;
            std::array<int, 3> ey{{0, 0, 0}};
            int m = 0;
            for (int u = 0; u < nv; ++u) {
                if (u == v) continue;
                ey[m++] = ex[u];
            }
            r.cell(ey) = cell;
        });
        return r;
    }

    Jet residue(int v) const { return plane(v, -1); }

    // d/dx_v
    Jet derive(int v) const {
        Jet r = *this;
        r.lo[v] = lo[v] - 1;
        r.hi[v] = jet_add(hi[v], -1);
        r.shi[v] = shi[v] - 1;
        r.cells.assign(r.cell_count(), QSeries<R>(qshift_common(), qtrunc_common()));
        for_each([&](std::array<int, 3> e, const QSeries<R>& cell) {
            if (e[v] == 0) return;
            std::array<int, 3> ed = e;
            ed[v] -= 1;
            r.cell(ed) = cell.scaled(scalar_coeff<R>(e[v]));
        });
        return r;
    }

    // place this jet's variables at positions varpos[0..nv-1] of a jet in
    // newnv variables; the new variables are exact constants
    Jet embedded(int newnv, std::array<int, 3> varpos) const {
        Jet r;
        r.nv = newnv;
        for (int v = 0; v < 3; ++v) {
            r.lo[v] = 0;
            r.hi[v] = (v < newnv) ? jet_inf : 0;
            r.shi[v] = 0;
        }
        for (int i = 0; i < nv; ++i) {
            r.lo[varpos[i]] = lo[i];
            r.hi[varpos[i]] = hi[i];
            r.shi[varpos[i]] = shi[i];
        }
        r.cells.assign(r.cell_count(), QSeries<R>(qshift_common(), qtrunc_common()));
        for_each([&](std::array<int, 3> e, const QSeries<R>& cell) {
            std::array<int, 3> ey{{0, 0, 0}};
            for (int i = 0; i < nv; ++i) ey[varpos[i]] = e[i];
            r.cell(ey) = cell;
        });
        return r;
    }

    Jet pow(int n) const {
        if (n < 0) throw std::invalid_argument("negative jet power");
        if (n == 0) {
            Jet r = from_qseries(nv, QSeries<R>::constant(unit_coeff<R>(), qtrunc_common()));
            return r;
        }
        Jet r = *this;
        for (int i = 1; i < n; ++i) r = r * (*this);
        return r;
    }

    friend bool operator==(const Jet& a, const Jet& b) {
        if (a.nv != b.nv) return false;
        std::array<int, 3> l{{0, 0, 0}}, h{{0, 0, 0}};
        for (int v = 0; v < a.nv; ++v) {
            l[v] = std::min(a.lo[v], b.lo[v]);
            h[v] = std::min(std::min(a.hi[v], b.hi[v]),
                            std::max(a.shi[v], b.shi[v]));
            if (l[v] > h[v]) return true;  // no comparable window
        }
        QSeries<R> za(0, a.qtrunc_common()), zb(0, b.qtrunc_common());
        bool ok = true;
        std::array<int, 3> e = l;
        for (;;) {
            const QSeries<R>& va = a.in_storage(e) ? a.cell(e) : za;
            const QSeries<R>& vb = b.in_storage(e) ? b.cell(e) : zb;
            if (!(va == vb)) { ok = false; break; }
            int v = a.nv - 1;
            for (; v >= 0; --v) {
                if (++e[v] <= h[v]) break;
                e[v] = l[v];
            }
            if (v < 0) break;
        }
        return ok;
    }
};

using JetSeries = Jet<Rat>;

}  // namespace qjf
