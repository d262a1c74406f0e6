#include "qjf/k3.hpp"
#include <stdexcept>
#include "qjf/linalg.hpp"

namespace qjf {

static const QJacPoly& zero_poly() {
    static const QJacPoly z;
    return z;
}

const QJacPoly& SeriesTable::a(int k) const {
    if (k < 0) return zero_poly();
    if (k >= static_cast<int>(A.size())) throw std::out_of_range("A entry not built");
    return A[static_cast<size_t>(k)];
}

const QJacPoly& SeriesTable::b(int k) const {
    if (k < 0) return zero_poly();
    if (k >= static_cast<int>(B.size())) throw std::out_of_range("B entry not built");
    return B[static_cast<size_t>(k)];
}

QJacPoly SeriesTable::c(int k, int l) const {
    if (k <= 0 || l <= 0) return QJacPoly();
    auto it = C.find({k, l});
    if (it != C.end()) return it->second;
    it = C.find({l, k});
    if (it != C.end()) return it->second;
    throw std::out_of_range("C entry not built");
}

int entry_weight(Family f, int k, int l) {
    switch (f) {
        case Family::A: return k;
        case Family::B: return k;
        case Family::C: return k + l + 2;
    }
    throw std::logic_error("bad family");
}

static Rat fact_rat(int n) { return Rat(factorial(n)); }

QJacPoly rhs_dA(Family f, int k, int l, const SeriesTable& t) {
    switch (f) {
        case Family::A:
            return t.a(k - 1);
        case Family::B:
            return t.b(k - 1) + t.a(k - 1);
        case Family::C:
            return t.c(k - 1, l) + t.c(k, l - 1);
    }
    throw std::logic_error("bad family");
}

QJacPoly rhs_dG2(Family f, int k, int l, const SeriesTable& t) {
    QJacPoly r;
    switch (f) {
        case Family::A: {
            for (int m1 = 0; m1 <= k - 2; ++m1) {
                int m2 = k - 2 - m1;
                Rat coef = -fact_rat(m1) * fact_rat(m2) / fact_rat(k - 1);
                r = r + (t.a(m1) * t.a(m2)).scaled(coef);
            }
            return r;
        }
        case Family::B: {
            for (int m1 = 2; m1 <= k; ++m1) {
                int m2 = k - m1;
                Rat coef = Rat(-2) * fact_rat(m1 - 2) * fact_rat(m2) / fact_rat(k - 1);
                r = r + (t.a(m1 - 2) * t.b(m2)).scaled(coef);
            }
            return r;
        }
        case Family::C: {
            for (int m1 = 1; m1 <= k; ++m1) {
                int m2 = k - m1;
                if (m2 < 1) continue;
                Rat coef = Rat(-2) * fact_rat(m1 - 1) * fact_rat(m2) / fact_rat(k);
                r = r + (t.a(m1 - 1) * t.c(m2 - 1, l)).scaled(coef);
            }
            for (int m1 = 1; m1 <= l; ++m1) {
                int m2 = l - m1;
                if (m2 < 1) continue;
                Rat coef = Rat(-2) * fact_rat(m1 - 1) * fact_rat(m2) / fact_rat(l);
                r = r + (t.a(m1 - 1) * t.c(k, m2 - 1)).scaled(coef);
            }
            Rat multinom = fact_rat(k + l) / (fact_rat(k) * fact_rat(l));
            r = r + t.a(k + l).scaled(2 * multinom);
            r = r - (t.a(k) * t.a(l)).scaled(2);
            return r;
        }
    }
    throw std::logic_error("bad family");
}

RationalFunction leading_A(int k) {
    ZPoly num = ZPoly::one() - ZPoly::monomial(2 * (k + 1));
    ZPoly den = ZPoly::one();
    ZPoly fac = ZPoly::one() - ZPoly::monomial(2);
    for (int i = 0; i <= k; ++i) den = den * fac;
    Rat sc = Rat(1) / Rat(factorial(k + 1));
    if (k % 2) sc = -sc;
    return RationalFunction(num, den, sc);
}

Rat leading_brute(int n, int k) {
    Rat total = 0;
    for (int l = 0; l <= k; ++l) {
        Rat term = Rat(binomial(n, l + 1)) / (fact_rat(k + 1 - l) * fact_rat(l));
        if ((n - 1 + k) % 2) term = -term;
        total += term;
    }
    return total;
}

std::vector<Rat> s_expansion(const RationalFunction& f, int maxdeg) {
    std::vector<Rat> out(static_cast<size_t>(maxdeg) + 1, Rat(0));
    if (f.is_zero()) return out;
    if (f.den.c.empty() || qjf::is_zero(Rat(f.den.c[0])))
        throw std::domain_error("rational function has a pole at s = 0");
    Rat d0 = Rat(f.den.c[0]);
    for (int i = 0; i <= maxdeg; ++i) {
        Rat acc = (i <= f.num.degree()) ? Rat(f.num.c[static_cast<size_t>(i)]) : Rat(0);
        for (int j = 0; j < i; ++j) {
            int di = i - j;
            if (di <= f.den.degree()) acc -= out[static_cast<size_t>(j)] * Rat(f.den.c[static_cast<size_t>(di)]);
        }
        out[static_cast<size_t>(i)] = acc / d0;
    }
    for (auto& v : out) v *= f.scale;
    return out;
}

RationalFunction boundary_value(Family f, int k) {
    switch (f) {
        case Family::A: return leading_A(k);
        case Family::B: return k == 0 ? RationalFunction(Rat(-1)) : RationalFunction();
        case Family::C: return RationalFunction();
    }
    throw std::logic_error("bad family");
}

// append rows equating sum_j x_j cols[j] == target as rational functions of s
static void append_rf_rows(std::vector<std::vector<Rat>>& rows, std::vector<Rat>& rhs,
                           const std::vector<RationalFunction>& cols,
                           const RationalFunction& target) {
    ZPoly lcm = ZPoly::one();
    auto fold = [&](const ZPoly& d) {
        ZPoly g = poly_gcd(lcm, d);
        lcm = (lcm * d).div_exact(g);
    };
    for (const auto& v : cols)
        if (!v.is_zero()) fold(v.den);
    if (!target.is_zero()) fold(target.den);

    std::vector<ZPoly> cleared(cols.size());
    int maxdeg = 0;
    for (size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].is_zero()) continue;
        cleared[j] = cols[j].num * lcm.div_exact(cols[j].den);
        maxdeg = std::max(maxdeg, cleared[j].degree());
    }
    ZPoly tgt;
    if (!target.is_zero()) {
        tgt = target.num * lcm.div_exact(target.den);
        maxdeg = std::max(maxdeg, tgt.degree());
    }
    for (int d = 0; d <= maxdeg; ++d) {
        std::vector<Rat> row(cols.size(), Rat(0));
        bool any = false;
        for (size_t j = 0; j < cols.size(); ++j) {
            if (d <= cleared[j].degree() && !cleared[j].is_zero()) {
                row[j] = cols[j].scale * Rat(cleared[j].c[static_cast<size_t>(d)]);
                if (!qjf::is_zero(row[j])) any = true;
            }
        }
        Rat rv(0);
        if (d <= tgt.degree() && !tgt.is_zero()) rv = target.scale * Rat(tgt.c[static_cast<size_t>(d)]);
        if (any || !qjf::is_zero(rv)) {
            rows.push_back(std::move(row));
            rhs.push_back(rv);
        }
    }
}

// rows equating a formal partial derivative of the unknown to a given polynomial
static void append_partial_rows(std::vector<std::vector<Rat>>& rows, std::vector<Rat>& rhs,
                                const std::vector<Mono>& unknowns,
                                const std::vector<QJacPoly>& images, const QJacPoly& target) {
    std::map<Mono, size_t> slot;
    auto slot_of = [&](const Mono& m) -> size_t {
        auto it = slot.find(m);
        if (it != slot.end()) return it->second;
        size_t s = slot.size();
        slot[m] = s;
        return s;
    };
    for (const auto& im : images)
        for (const auto& [m, c] : im.terms) slot_of(m);
    for (const auto& [m, c] : target.terms) slot_of(m);

    size_t base = rows.size();
    for (size_t i = 0; i < slot.size(); ++i) {
        rows.emplace_back(unknowns.size(), Rat(0));
        rhs.push_back(Rat(0));
    }
    for (size_t j = 0; j < images.size(); ++j)
        for (const auto& [m, c] : images[j].terms) rows[base + slot_of(m)][j] = c;
    for (const auto& [m, c] : target.terms) rhs[base + slot_of(m)] = c;
}

static RationalFunction q0_of_mono(const Mono& m) {
    static const std::array<RationalFunction, 6> q0 = [] {
        std::array<RationalFunction, 6> t;
        for (int h = 0; h < num_gens; ++h)
            t[static_cast<size_t>(h)] = generator_expansion(static_cast<Gen>(h), 0).coeff(0);
        return t;
    }();
    RationalFunction r(Rat(1));
    for (int g = 0; g < num_gens; ++g)
        for (int e = 0; e < m[static_cast<size_t>(g)]; ++e) r *= q0[static_cast<size_t>(g)];
    return r;
}

QJacPoly solve_series(Family f, int k, int l, const SeriesTable& t,
                      const std::vector<std::pair<int, RationalFunction>>& extra) {
    int w = entry_weight(f, k, l);
    std::vector<Mono> unknowns = graded_monomials(w, 0);
    if (unknowns.empty()) throw std::logic_error("empty coefficient slice");

    QJacPoly target_da = rhs_dA(f, k, l, t);
    QJacPoly target_dg2 = rhs_dG2(f, k, l, t);

    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;

    std::vector<QJacPoly> im_da, im_dg2;
    im_da.reserve(unknowns.size());
    im_dg2.reserve(unknowns.size());
    for (const auto& m : unknowns) {
        QJacPoly pm;
        pm.terms[m] = 1;
        im_da.push_back(partial_a(pm));
        im_dg2.push_back(partial_g2(pm));
    }
    append_partial_rows(rows, rhs, unknowns, im_da, target_da);
    append_partial_rows(rows, rhs, unknowns, im_dg2, target_dg2);

    std::vector<RationalFunction> q0cols;
    q0cols.reserve(unknowns.size());
    for (const auto& m : unknowns) q0cols.push_back(q0_of_mono(m));
    append_rf_rows(rows, rhs, q0cols, boundary_value(f, k));

    for (const auto& [n, value] : extra) {
        std::vector<RationalFunction> cols;
        cols.reserve(unknowns.size());
        for (const auto& m : unknowns) {
            QJacPoly pm;
            pm.terms[m] = 1;
            cols.push_back(evaluate(pm, n).coeff(n));
        }
        append_rf_rows(rows, rhs, cols, value);
    }

    SolveResult sol = solve_exact(rows, rhs, true);
    if (sol.status == SolveStatus::inconsistent)
        throw FitError(FitError::Kind::no_solution, "anomaly system is inconsistent");
    if (sol.status == SolveStatus::underdetermined)
        throw FitError(FitError::Kind::underdetermined,
                       "anomaly system leaves " + std::to_string(sol.kernel.size()) +
                           " kernel directions; supply extra coefficient rows");
    QJacPoly out;
    for (size_t j = 0; j < unknowns.size(); ++j)
        if (!qjf::is_zero(sol.x[j])) out.terms[unknowns[j]] = sol.x[j];
    out.prune();

    if (!(partial_a(out) == target_da) || !(partial_g2(out) == target_dg2))
        throw std::logic_error("solved entry fails its defining recursion");
    if (!(evaluate(out, 0).coeff(0) == boundary_value(f, k)))
        throw std::logic_error("solved entry fails its boundary value");
    return out;
}

SeriesTable build_table(int ka, int kb, int kc) {
    SeriesTable t;
    for (int k = 0; k <= ka; ++k) t.A.push_back(solve_series(Family::A, k, 0, t));
    for (int k = 0; k <= kb; ++k) t.B.push_back(solve_series(Family::B, k, 0, t));
    for (int total = 2; total <= kc; ++total)
        for (int k = 1; k < total; ++k) {
            int l = total - k;
            t.C[{k, l}] = solve_series(Family::C, k, l, t);
        }
    return t;
}

SeriesTable reference_table() {
    const QJacPoly av = QJacPoly::gen(Gen::A);
    const QJacPoly g2 = QJacPoly::gen(Gen::G2);
    const QJacPoly wp = QJacPoly::gen(Gen::P);
    const QJacPoly wpp = QJacPoly::gen(Gen::Pp);
    const QJacPoly g4 = QJacPoly::gen(Gen::G4);
    const QJacPoly g6 = g6_polynomial();
    const QJacPoly dg2 = generator_image(Gen::G2, DOp::Dtau);
    auto frac = [](long n, long d) -> Rat { return Rat(n) / Rat(d); };

    SeriesTable t;
    t.A.push_back(QJacPoly(Rat(1)));
    t.A.push_back(av);
    t.A.push_back(av.pow(2).scaled(frac(1, 2)) - g2);
    t.A.push_back(av.pow(3).scaled(frac(1, 6)) - g2 * av);
    t.A.push_back(av.pow(4).scaled(frac(1, 24)) - (av.pow(2) * g2).scaled(frac(1, 2)) +
                  g2.pow(2).scaled(frac(1, 3)) - g4.scaled(frac(1, 72)));
    t.A.push_back(av.pow(5).scaled(frac(1, 120)) - (av.pow(3) * g2).scaled(frac(1, 6)) +
                  (av * g2.pow(2)).scaled(frac(1, 3)) - (av * g4).scaled(frac(1, 72)));

    t.B.push_back(QJacPoly(Rat(-1)));
    t.B.push_back(QJacPoly());
    t.B.push_back(av.pow(2).scaled(frac(1, 2)) - wp.scaled(frac(1, 2)) + g2.scaled(2));
    t.B.push_back(av.pow(3).scaled(frac(1, 3)) + av * g2 - (av * wp).scaled(frac(1, 2)) -
                  wpp.scaled(frac(1, 12)));
    t.B.push_back(av.pow(4).scaled(frac(1, 8)) - (av.pow(2) * wp).scaled(frac(1, 4)) - g2.pow(2) +
                  (g2 * wp).scaled(frac(1, 3)) - wp.pow(2).scaled(frac(1, 24)) -
                  (av * wpp).scaled(frac(1, 12)) + g4.scaled(frac(5, 36)));

    t.C[{1, 1}] = dg2;
    t.C[{2, 1}] = dg2 * av;
    QJacPoly c31_tail =
        g2.pow(3).scaled(frac(4, 3)) - (g2 * g4).scaled(frac(2, 3)) + g6.scaled(frac(7, 720));
    t.C[{3, 1}] = (dg2 * av.pow(2)).scaled(frac(1, 2)) + c31_tail;
    t.C[{4, 1}] = (dg2 * av.pow(3)).scaled(frac(1, 6)) + c31_tail * av;
    t.C[{2, 2}] = dg2 * av.pow(2) + g2.pow(3).scaled(frac(2, 3)) -
                  (g2 * g4).scaled(frac(1, 6)) - g6.scaled(frac(7, 720));
    t.C[{3, 2}] = (dg2 * av.pow(3)).scaled(frac(1, 2)) +
                  (g2.pow(3).scaled(2) - (g2 * g4).scaled(frac(5, 6))) * av;
    return t;
}

// A(y) = 1/y - 2 sum_{k even} G_k y^{k-1}/(k-1)! as a one-variable jet
static QSeries<Rat> rat_series(const FourierSeries& f) {
    QSeries<Rat> r(f.qshift, f.trunc);
    for (int n = f.qshift; n <= f.trunc; ++n) r.at(n) = f.coeff(n).constant_value();
    return r;
}

static Jet<Rat> jet_A_axis(int hi, int qorder) {
    Jet<Rat> r(1, {{-1, 0, 0}}, {{hi, 0, 0}}, 0, qorder);
    r.cell({{-1, 0, 0}}) = QSeries<Rat>::constant(Rat(1), qorder);
    for (int k = 2; k - 1 <= hi; k += 2) {
        Rat sc = Rat(-2) / Rat(factorial(k - 1));
        r.cell({{k - 1, 0, 0}}) = rat_series(eisenstein(k, qorder)).scaled(sc);
    }
    return r;
}

// mark cells of variable v above H as unknown
static Jet<Rat> clamp_hi(const Jet<Rat>& a, int v, int H) {
    if (H >= a.shi[static_cast<size_t>(v)] && H >= a.hi[static_cast<size_t>(v)]) return a;
    std::array<int, 3> h = a.hi, sh = a.shi;
    h[static_cast<size_t>(v)] = std::min(h[static_cast<size_t>(v)], H);
    sh[static_cast<size_t>(v)] = std::min(sh[static_cast<size_t>(v)], H);
    Jet<Rat> r(a.nv, a.lo, h, a.qshift_common(), a.qtrunc_common());
    for (int u = 0; u < 3; ++u) r.shi[u] = std::min(sh[u], r.shi[u]);
    r.cells.assign(r.cell_count(), QSeries<Rat>(a.qshift_common(), a.qtrunc_common()));
    a.for_each([&](std::array<int, 3> e, const QSeries<Rat>& cell) {
        if (r.in_storage(e)) r.cell(e) = cell;
    });
    return r;
}

// base^e, clamping intermediate exponents that cannot reach the target window
static Jet<Rat> pow_clamped(const Jet<Rat>& base, int e, std::array<int, 3> target) {
    if (e == 0) return base.pow(0);
    Jet<Rat> r = base;
    for (int i = 2; i <= e; ++i) r = r * base;
    for (int v = 0; v < base.nv; ++v) r = clamp_hi(r, v, target[static_cast<size_t>(v)]);
    return r;
}

Jet<Rat> residue_eval(Family f, int k, int l, int zorder, int qorder) {
    constexpr int VZ = 0, VX = 1;
    auto embed_z = [&](const Jet<Rat>& j) { return j.embedded(2, {{VZ, 0, 0}}); };
    auto embed_x = [&](const Jet<Rat>& j) { return j.embedded(2, {{VX, 0, 0}}); };

    switch (f) {
        case Family::A: {
            int hx = k, hz = zorder + k;
            Jet<Rat> s = embed_z(jet_A_axis(hz, qorder)) + embed_x(jet_A_axis(hx, qorder));
            Jet<Rat> w = pow_clamped(s, k + 1, {{zorder, -1, 0}});
            return w.scaled(Rat(1) / fact_rat(k + 1)).residue(VX);
        }
        case Family::B: {
            int j_top = std::max(k - 1, 0);
            int hx = k + 1, hz = zorder + 2 * std::max(k, 1);
            Jet<Rat> az = jet_A_axis(hz, qorder);
            // A(x + z) as a polynomial in x with z-jet coefficients
            Jet<Rat> shifted(2, {{-1 - j_top, 0, 0}}, {{hz - j_top, j_top, 0}}, 0, qorder);
            Jet<Rat> deriv = az;
            for (int j = 0; j <= j_top; ++j) {
                Jet<Rat> term = Jet<Rat>::exact_monomial(2, {{0, j, 0}},
                                                         QSeries<Rat>::constant(Rat(1), qorder)) *
                                embed_z(deriv.scaled(Rat(1) / fact_rat(j)));
                shifted = (j == 0) ? term : shifted + term;
                shifted = clamp_hi(shifted, VX, j_top);
                deriv = deriv.derive(0);
            }
            Jet<Rat> diff = shifted - embed_x(jet_A_axis(hx, qorder));
            Jet<Rat> s = embed_z(jet_A_axis(hz, qorder)) + embed_x(jet_A_axis(hx, qorder));
            Jet<Rat> w = pow_clamped(s, k, {{zorder + 1 + j_top, 0, 0}});
            Jet<Rat> prod = w.scaled(Rat(1) / fact_rat(k)) * diff;
            return prod.residue(VX);
        }
        case Family::C: {
            int hx2 = l, hx1 = k + l + 1, hz = zorder + k + l + 1;
            Jet<Rat> az = jet_A_axis(hz, qorder);
            Jet<Rat> s2 = embed_z(az) + embed_x(jet_A_axis(hx2, qorder));
            Jet<Rat> p = pow_clamped(s2, l + 1, {{zorder + k + 1, -1, 0}})
                             .scaled(Rat(1) / fact_rat(l + 1));
            Jet<Rat> a1 = jet_A_axis(hx1, qorder);
            Jet<Rat> inner;
            Jet<Rat> deriv = a1.derive(0);
            for (int j = 0; j <= l; ++j) {
                Rat sc = Rat(1) / fact_rat(j);
                if (j % 2) sc = -sc;
                Jet<Rat> term = embed_z(p.plane(VX, -1 - j)) * embed_x(deriv.scaled(sc));
                inner = (j == 0) ? term : inner + term;
                deriv = deriv.derive(0);
            }
            Jet<Rat> s1 = embed_z(az) + embed_x(a1);
            Jet<Rat> w = pow_clamped(s1, k + 1, {{zorder + l + 1, l + 1, 0}})
                             .scaled(Rat(1) / fact_rat(k + 1));
            return (w * inner).residue(VX);
        }
    }
    throw std::logic_error("bad family");
}

FourierSeries stationary_Z(const std::vector<StatIns>& ins,
                           const std::vector<std::vector<Rat>>& dot,
                           const SeriesTable& t, int qorder) {
    size_t n = ins.size();
    const MeroQJac kkv(QJacPoly(Rat(-1)), 2, 1);
    FourierSeries total(-1, qorder);

    std::vector<bool> used(n, false);
    std::function<void(QJacPoly, Rat, int)> walk = [&](QJacPoly prod, Rat sc, int m) {
        size_t i = 0;
        while (i < n && used[i]) ++i;
        if (i == n) {
            MeroQJac v = kkv * MeroQJac(prod);
            for (int d = 0; d < m; ++d) v = derived_derivative(v, DOp::Dtau);
            total = total + evaluate(v, qorder).scaled(RationalFunction(sc));
            return;
        }
        used[i] = true;
        if (!qjf::is_zero(ins[i].with_w)) walk(prod * t.a(ins[i].k), sc * ins[i].with_w, m);
        if (!qjf::is_zero(ins[i].with_one)) walk(prod * t.b(ins[i].k), sc * ins[i].with_one, m);
        if (!qjf::is_zero(ins[i].with_f)) walk(prod * t.a(ins[i].k), sc * ins[i].with_f, m + 1);
        for (size_t j = i + 1; j < n; ++j) {
            if (used[j] || qjf::is_zero(dot[i][j])) continue;
            used[j] = true;
            walk(prod * t.c(ins[i].k, ins[j].k), sc * dot[i][j], m);
            used[j] = false;
        }
        used[i] = false;
    };
    walk(QJacPoly(Rat(1)), Rat(1), 0);
    return total;
}

}  // namespace qjf
