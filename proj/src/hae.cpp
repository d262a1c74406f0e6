#include "qjf/hae.hpp"
#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace qjf {

namespace {

// one plain character factor after class expansion
struct PlainItem {
    int k;
    int idx;
    bool operator<(const PlainItem& o) const {
        return std::tie(k, idx) < std::tie(o.k, o.idx);
    }
    bool operator==(const PlainItem& o) const { return k == o.k && idx == o.idx; }
};

// expand one insertion into basis components, tilde correction included
std::vector<std::pair<Rat, PlainItem>> expand_insertion(const Geometry& g, const Insertion& ins) {
    std::vector<std::pair<Rat, PlainItem>> out;
    if (ins.k < 0) return out;
    for (int idx = 0; idx < Geometry::dim; ++idx) {
        const Rat& c = ins.cls.c[static_cast<size_t>(idx)];
        if (c != 0) out.push_back({c, PlainItem{ins.k, idx}});
    }
    if (ins.tilde && ins.k >= 2) {
        CohClass cc = g.mul(ins.cls, g.c2TX_over_24);
        for (int idx = 0; idx < Geometry::dim; ++idx) {
            const Rat& c = cc.c[static_cast<size_t>(idx)];
            if (c != 0) out.push_back({c, PlainItem{ins.k - 2, idx}});
        }
    }
    return out;
}

void normalize(Reduced& r) {
    std::map<std::tuple<int, int, CorrKey>, QJacPoly> acc;
    for (RTerm& t : r.terms) {
        QJacPoly& slot = acc[std::make_tuple(t.ntau, t.np, t.key)];
        slot = slot + t.coeff;
    }
    r.terms.clear();
    for (auto& [k, coeff] : acc) {
        coeff.prune();
        if (coeff.is_zero_p()) continue;
        r.terms.push_back(RTerm{coeff, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
    }
}

Reduced dop_applied(const Reduced& r, DOp op) {
    Reduced out;
    for (const RTerm& t : r.terms) {
        QJacPoly dc = derived_derivative(t.coeff, op);
        if (!dc.is_zero_p()) out.terms.push_back(RTerm{dc, t.ntau, t.np, t.key});
        RTerm s = t;
        if (op == DOp::Dtau) s.ntau += 1;
        else s.np += 1;
        out.terms.push_back(s);
    }
    normalize(out);
    return out;
}

Reduced poly_scaled(const Reduced& r, const QJacPoly& f) {
    Reduced out;
    for (const RTerm& t : r.terms) out.terms.push_back(RTerm{t.coeff * f, t.ntau, t.np, t.key});
    normalize(out);
    return out;
}

Reduced reduce_items(const Geometry& g, int beta, Rat coeff, std::vector<PlainItem> items) {
    if (coeff == 0) return Reduced{};
    // scalar rules to a fixed point; every removable class here is even
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < items.size(); ++i) {
            int k = items[i].k;
            int idx = items[i].idx;
            if (2 * k + g.degree[static_cast<size_t>(idx)] - 6 < 0) return Reduced{};
            if (k == 0) {
                Rat v = g.integral(g.basis(idx));
                coeff *= -v;
                if (coeff == 0) return Reduced{};
                items.erase(items.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
            if (k == 1) return Reduced{};
            if (k == 2 && idx == 4) {
                // level-2 base divisor pairs with the curve degree
                coeff *= beta;
                if (coeff == 0) return Reduced{};
                items.erase(items.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
    // operator rules; order of extraction does not matter
    for (size_t i = 0; i < items.size(); ++i) {
        int k = items[i].k;
        int idx = items[i].idx;
        if (k == 2 && idx == 3) {
            std::vector<PlainItem> rest = items;
            rest.erase(rest.begin() + static_cast<long>(i));
            Reduced sub = reduce_items(g, beta, coeff, std::move(rest));
            QJacPoly extra = QJacPoly::gen(Gen::G2).scaled(Rat(3)) + QJacPoly(Rat(1, 8));
            return dop_applied(sub, DOp::Dtau) + poly_scaled(sub, extra);
        }
        if (k == 3 && idx == 0) {
            std::vector<PlainItem> rest = items;
            rest.erase(rest.begin() + static_cast<long>(i));
            Reduced sub = reduce_items(g, beta, coeff, std::move(rest));
            return dop_applied(sub, DOp::Dp);
        }
    }
    // canonical order, tracking signs for odd classes
    int sgn = 1;
    for (size_t i = 1; i < items.size(); ++i)
        for (size_t j = i; j > 0 && items[j] < items[j - 1]; --j) {
            if (g.parity[static_cast<size_t>(items[j].idx)] &&
                g.parity[static_cast<size_t>(items[j - 1].idx)])
                sgn = -sgn;
            std::swap(items[j], items[j - 1]);
        }
    for (size_t i = 1; i < items.size(); ++i)
        if (items[i] == items[i - 1] && g.parity[static_cast<size_t>(items[i].idx)])
            return Reduced{};  // an odd insertion squares to zero
    CorrKey key;
    key.beta = beta;
    for (const PlainItem& it : items) key.ins.push_back({it.k, it.idx});
    Reduced out;
    out.terms.push_back(RTerm{QJacPoly(coeff * sgn), 0, 0, std::move(key)});
    return out;
}

std::string mero_wrapped(const MeroQJac& m) {
    std::string s = m.str();
    if (s.find(' ') != std::string::npos) return "(" + s + ")";
    return s;
}

}  // namespace

std::string CorrKey::str(const Geometry& g) const {
    std::ostringstream os;
    os << "Z_" << beta << "(";
    bool first = true;
    for (const auto& [k, idx] : ins) {
        if (!first) os << " ";
        first = false;
        os << "ch_" << k << "(" << g.basis_name[static_cast<size_t>(idx)] << ")";
    }
    os << ")";
    return os.str();
}

std::string IVal::str() const {
    if (is_zero_v()) return "0";
    if (im.is_zero_m()) return re.str();
    std::string imag = "i*" + mero_wrapped(im);
    if (re.is_zero_m()) return imag;
    return re.str() + " + " + imag;
}

bool Reduced::operator==(const Reduced& o) const {
    Reduced a = *this, b = o;
    normalize(a);
    normalize(b);
    if (a.terms.size() != b.terms.size()) return false;
    for (size_t i = 0; i < a.terms.size(); ++i) {
        const RTerm& x = a.terms[i];
        const RTerm& y = b.terms[i];
        if (!(x.coeff == y.coeff) || x.ntau != y.ntau || x.np != y.np || !(x.key == y.key))
            return false;
    }
    return true;
}

std::string Reduced::str(const Geometry& g) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const RTerm& t : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t.coeff.str() << ")";
        if (t.ntau) os << "*Dtau^" << t.ntau;
        if (t.np) os << "*Dp^" << t.np;
        os << "*" << t.key.str(g);
    }
    return os.str();
}

Reduced operator+(const Reduced& a, const Reduced& b) {
    Reduced out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    normalize(out);
    return out;
}

Reduced scaled(const Reduced& r, const Rat& k) {
    Reduced out;
    if (k == 0) return out;
    for (const RTerm& t : r.terms) out.terms.push_back(RTerm{t.coeff.scaled(k), t.ntau, t.np, t.key});
    return out;
}

Reduced reduce(const Geometry& g, const std::vector<Insertion>& ins, int beta) {
    struct WorkItem {
        Rat coeff;
        std::vector<PlainItem> items;
    };
    std::vector<WorkItem> work{WorkItem{Rat(1), {}}};
    for (const Insertion& one : ins) {
        std::vector<std::pair<Rat, PlainItem>> comps = expand_insertion(g, one);
        std::vector<WorkItem> next;
        for (const WorkItem& w : work)
            for (const auto& [c, it] : comps) {
                WorkItem nw = w;
                nw.coeff *= c;
                nw.items.push_back(it);
                next.push_back(std::move(nw));
            }
        work = std::move(next);
    }
    Reduced out;
    for (WorkItem& w : work) {
        Reduced part = reduce_items(g, beta, w.coeff, std::move(w.items));
        out.terms.insert(out.terms.end(), part.terms.begin(), part.terms.end());
    }
    normalize(out);
    return out;
}

namespace {

std::string insertion_list_str(const Geometry& g, const std::vector<Insertion>& ins) {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const Insertion& one : ins) {
        if (!first) os << " ";
        first = false;
        os << (one.tilde ? "ch~_" : "ch_") << one.k << "(" << g.str(one.cls) << ")";
    }
    os << "]";
    return os.str();
}

}  // namespace

Equation hae_instance(const Geometry& g, Anomaly op, const std::vector<Insertion>& ins, int beta) {
    const int n = static_cast<int>(ins.size());
    std::vector<int> par(static_cast<size_t>(n)), wt(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int d = 0, w = 0;
        if (!g.homogeneous(ins[static_cast<size_t>(i)].cls, &d, &w))
            throw std::invalid_argument("insertion classes must be homogeneous");
        par[static_cast<size_t>(i)] = d & 1;
        wt[static_cast<size_t>(i)] = w;
    }
    auto rest_of = [&](int i, int j = -1) {
        std::vector<Insertion> rest;
        for (int l = 0; l < n; ++l)
            if (l != i && l != j) rest.push_back(ins[static_cast<size_t>(l)]);
        return rest;
    };
    auto sigma_one = [&](int i) -> Rat {
        int s = 1;
        for (int l = 0; l < i; ++l)
            s *= Geometry::sign_pow(par[static_cast<size_t>(i)], par[static_cast<size_t>(l)]);
        return Rat(s);
    };
    auto sigma_two = [&](int i, int j) -> Rat {
        Rat s = sigma_one(i);
        for (int l = 0; l < j; ++l)
            if (l != i)
                s *= Geometry::sign_pow(par[static_cast<size_t>(j)], par[static_cast<size_t>(l)]);
        return s;
    };
    auto with_front = [&](Insertion a, std::vector<Insertion> rest) {
        std::vector<Insertion> list{std::move(a)};
        list.insert(list.end(), rest.begin(), rest.end());
        return list;
    };
    auto with_front2 = [&](Insertion a, Insertion b, std::vector<Insertion> rest) {
        std::vector<Insertion> list{std::move(a), std::move(b)};
        list.insert(list.end(), rest.begin(), rest.end());
        return list;
    };

    Equation eq;
    eq.op = op;
    eq.lhs = reduce(g, ins, beta);
    {
        std::ostringstream os;
        os << (op == Anomaly::dA ? "dA " : "dG2 ") << "beta=" << beta << " "
           << insertion_list_str(g, ins);
        eq.label = os.str();
    }
    Reduced rhs;
    if (op == Anomaly::dA) {
        for (int i = 0; i < n; ++i) {
            const Insertion& gi = ins[static_cast<size_t>(i)];
            Rat si = sigma_one(i);
            if (gi.k - 1 >= 0)
                for (const auto& [dl, dr] : g.deltaB) {
                    CohClass cl = g.mul(gi.cls, g.pull(dl));
                    if (cl.is_zero_c()) continue;
                    auto list = with_front2(Insertion{true, gi.k - 1, cl},
                                            Insertion{true, 2, g.pull(dr)}, rest_of(i));
                    rhs = rhs + scaled(reduce(g, list, beta), si);
                }
            CohClass pp = g.pushpull(gi.cls);
            if (!pp.is_zero_c()) {
                auto list = with_front(Insertion{true, gi.k + 1, pp}, rest_of(i));
                rhs = rhs + scaled(reduce(g, list, beta), si);
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const Insertion& gi = ins[static_cast<size_t>(i)];
            Rat si = sigma_one(i);
            // second character class of the base
            if (gi.k - 2 >= 0) {
                CohClass c2 = g.mul(gi.cls, g.pull(g.c2B));
                if (!c2.is_zero_c()) {
                    auto list = with_front(Insertion{true, gi.k - 2, c2}, rest_of(i));
                    rhs = rhs + scaled(reduce(g, list, beta), -si);
                }
            }
            // vertical correspondence of one insertion against the canonical class
            long denom = gi.k - 2 + wt[static_cast<size_t>(i)];
            if (denom >= 0) {
                KTensor2 E = e_corr(g, g.mul(g.KX, gi.cls));
                Rat dfac(factorial(denom));
                for (int a = 0; a < Geometry::dim; ++a)
                    for (int b = 0; b < Geometry::dim; ++b) {
                        const Rat& ce = E.m[static_cast<size_t>(a)][static_cast<size_t>(b)];
                        if (ce == 0) continue;
                        int wl = g.wt[static_cast<size_t>(a)];
                        int wr = g.wt[static_cast<size_t>(b)];
                        int sgn = (((1 + wl) * (1 + wr)) % 2) ? -1 : 1;
                        for (int m1 = 0; m1 <= gi.k; ++m1) {
                            int m2 = gi.k - m1;
                            long f1 = m1 - 1 + wl;
                            long f2 = m2 - 1 + wr;
                            if (f1 < 0 || f2 < 0) continue;
                            Int fnum = factorial(f1) * factorial(f2);
                            Rat wfac = Rat(fnum) / dfac;
                            auto list = with_front2(Insertion{true, m1, g.basis(a)},
                                                    Insertion{true, m2, g.basis(b)}, rest_of(i));
                            rhs = rhs + scaled(reduce(g, list, beta), si * Rat(sgn) * wfac * ce);
                        }
                    }
            }
            for (int j = i + 1; j < n; ++j) {
                const Insertion& gj = ins[static_cast<size_t>(j)];
                Rat sij = sigma_two(i, j);
                // base diagonal splitting across the pair
                if (gi.k - 1 >= 0 && gj.k - 1 >= 0)
                    for (const auto& [dl, dr] : g.deltaB) {
                        CohClass cl = g.mul(gi.cls, g.pull(dl));
                        CohClass cr = g.mul(gj.cls, g.pull(dr));
                        if (cl.is_zero_c() || cr.is_zero_c()) continue;
                        auto list = with_front2(Insertion{true, gi.k - 1, cl},
                                                Insertion{true, gj.k - 1, cr}, rest_of(i, j));
                        rhs = rhs + scaled(reduce(g, list, beta), Rat(-2) * sij);
                    }
                // joint correspondence of the pair
                long aa = gi.k - 2 + wt[static_cast<size_t>(i)];
                long bb = gj.k - 2 + wt[static_cast<size_t>(j)];
                if (aa >= 0 && bb >= 0) {
                    CohClass eij = e_corr(g, gi.cls, gj.cls);
                    if (!eij.is_zero_c()) {
                        int sgn = (((1 + wt[static_cast<size_t>(i)]) *
                                    (1 + wt[static_cast<size_t>(j)])) % 2)
                                      ? -1
                                      : 1;
                        Int bi = binomial(aa + bb, aa);
                        if (bi != 0) {
                            auto list =
                                with_front(Insertion{true, gi.k + gj.k - 2, eij}, rest_of(i, j));
                            rhs = rhs +
                                  scaled(reduce(g, list, beta), Rat(-2) * sij * Rat(sgn) * Rat(bi));
                        }
                    }
                }
            }
        }
    }
    eq.rhs = rhs;
    return eq;
}

CorrDB p2e_reference_db() {
    QJacPoly T = QJacPoly::gen(Gen::Theta);
    QJacPoly Ap = QJacPoly::gen(Gen::A);
    QJacPoly DtT = derived_derivative(T, DOp::Dtau);
    QJacPoly DpT = derived_derivative(T, DOp::Dp);
    QJacPoly DpDtT = derived_derivative(DtT, DOp::Dp);
    QJacPoly DttT = derived_derivative(DtT, DOp::Dtau);
    QJacPoly DppT = derived_derivative(DpT, DOp::Dp);
    QJacPoly DppDtT = derived_derivative(DpDtT, DOp::Dp);
    auto key = [](int beta, std::vector<std::pair<int, int>> v) {
        CorrKey k;
        k.beta = beta;
        k.ins = std::move(v);
        return k;
    };
    CorrDB db;
    db[key(1, {{2, 8}, {2, 11}})] = IVal::imag(MeroQJac(T));
    db[key(1, {{2, 7}, {2, 11}})] = IVal::imag(MeroQJac(DtT.scaled(Rat(3))));
    db[key(1, {{2, 7}, {2, 7}, {2, 8}})] = IVal::imag(MeroQJac(DtT.scaled(Rat(4))));
    db[key(1, {{2, 7}, {2, 7}, {2, 7}})] =
        IVal::imag(MeroQJac((DttT * T).scaled(Rat(3)) + (DtT * DtT).scaled(Rat(9)), 1, 0));
    db[key(1, {{3, 11}})] = IVal::imag(MeroQJac(T * Ap));
    db[key(1, {{2, 5}, {2, 6}, {2, 11}})] = IVal::imag(MeroQJac(DtT));
    db[key(2, {{2, 8}, {2, 8}, {2, 8}, {2, 8}, {2, 11}})] =
        IVal::real(MeroQJac(QJacPoly::gen(Gen::Theta, 4)));
    db[key(2, {{2, 11}, {2, 11}, {2, 11}})] =
        IVal::real(MeroQJac((T * T * T * DppDtT).scaled(Rat(3)) + (T * T * DppT * DtT).scaled(Rat(3)) -
                            (T * T * DpDtT * DpT).scaled(Rat(6)) + (T * T * DtT * DtT).scaled(Rat(3))));
    db[key(2, {{2, 11}, {2, 11}, {3, 8}})] = IVal::real(MeroQJac((T * T * T * DpDtT).scaled(Rat(2))));
    return db;
}

std::vector<Equation> p2e_standard_instances(const Geometry& g) {
    auto I = [&](int k, int idx) { return Insertion{true, k, g.basis(idx)}; };
    std::vector<Equation> v;
    // determined or directly checkable members, ordered so solved values feed later ones
    v.push_back(hae_instance(g, Anomaly::dA, {I(3, 11)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(3, 11)}, 1));
    v.push_back(hae_instance(g, Anomaly::dA, {I(2, 11), I(2, 8)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 11), I(2, 8)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 11), I(2, 7)}, 1));
    v.push_back(hae_instance(g, Anomaly::dA, {I(2, 11), I(2, 5), I(2, 6)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 11), I(2, 5), I(2, 6)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 7), I(2, 7), I(2, 7)}, 1));
    v.push_back(hae_instance(g, Anomaly::dA, {I(2, 7), I(2, 7), I(2, 7)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 7), I(2, 7), I(2, 8)}, 1));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 7), I(2, 8), I(2, 8)}, 1));
    v.push_back(hae_instance(g, Anomaly::dA, {I(2, 11), I(2, 8), I(2, 8), I(2, 8), I(2, 8)}, 2));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 11), I(2, 8), I(2, 8), I(2, 8), I(2, 8)}, 2));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 11), I(2, 11), I(2, 11)}, 2));
    v.push_back(hae_instance(g, Anomaly::dA, {I(2, 11), I(2, 11), I(2, 11)}, 2));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 11), I(2, 11), I(3, 8)}, 2));
    // members whose left side carries derivative words from reducible insertions
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 3), I(2, 11), I(2, 8)}, 1));
    v.push_back(hae_instance(g, Anomaly::dA, {I(2, 3), I(2, 11), I(2, 8)}, 1));
    v.push_back(hae_instance(g, Anomaly::dA, {I(3, 0), I(2, 11), I(2, 11), I(2, 11)}, 2));
    v.push_back(hae_instance(g, Anomaly::dG2, {I(2, 3), I(2, 11), I(2, 11), I(2, 11)}, 2));
    return v;
}

namespace {

struct UnkTerm {
    QJacPoly coeff;
    int ntau = 0;
    int np = 0;
    CorrKey key;
};

IVal apply_ops(IVal v, int ntau, int np) {
    for (int s = 0; s < ntau; ++s)
        v = IVal(derived_derivative(v.re, DOp::Dtau), derived_derivative(v.im, DOp::Dtau));
    for (int s = 0; s < np; ++s)
        v = IVal(derived_derivative(v.re, DOp::Dp), derived_derivative(v.im, DOp::Dp));
    return v;
}

std::pair<IVal, std::vector<UnkTerm>> eval_side(const Reduced& r, const CorrDB& db) {
    IVal acc;
    std::map<std::tuple<int, int, CorrKey>, QJacPoly> unk;
    for (const RTerm& t : r.terms) {
        auto it = db.find(t.key);
        if (it == db.end()) {
            QJacPoly& slot = unk[std::make_tuple(t.ntau, t.np, t.key)];
            slot = slot + t.coeff;
            continue;
        }
        IVal v = apply_ops(it->second, t.ntau, t.np);
        MeroQJac cf(t.coeff);
        acc = acc + IVal(cf * v.re, cf * v.im);
    }
    std::vector<UnkTerm> out;
    for (auto& [k, coeff] : unk) {
        coeff.prune();
        if (coeff.is_zero_p()) continue;
        out.push_back(UnkTerm{coeff, std::get<0>(k), std::get<1>(k), std::get<2>(k)});
    }
    return {acc, out};
}

IVal apply_anomaly(Anomaly op, const IVal& v) {
    auto part = [&](const MeroQJac& m) {
        // the denominator powers carry no G2 or A dependence
        QJacPoly p = (op == Anomaly::dA) ? partial_a(m.num) : partial_g2(m.num);
        return MeroQJac(std::move(p), m.theta_pow, m.delta_pow);
    };
    return IVal(part(v.re), part(v.im));
}

bool constant_coeff(const QJacPoly& f, Rat* out) {
    if (f.terms.empty()) {
        *out = Rat(0);
        return true;
    }
    if (f.terms.size() != 1) return false;
    const auto& [m, c] = *f.terms.begin();
    for (int i = 0; i < 6; ++i)
        if (m[static_cast<size_t>(i)]) return false;
    *out = c;
    return true;
}

}  // namespace

CheckReport check_system(const Geometry& g, const CorrDB& db, const std::vector<Equation>& eqs) {
    CheckReport rep;
    CorrDB work = db;
    for (const Equation& eq : eqs) {
        auto [lv, lunk] = eval_side(eq.lhs, work);
        if (!lunk.empty()) {
            rep.unresolved.push_back(eq.label + ": left side not in the table");
            rep.log.push_back("unresolved  " + eq.label);
            continue;
        }
        IVal lhs = apply_anomaly(eq.op, lv);
        auto [rv, runk] = eval_side(eq.rhs, work);
        IVal resid = lhs - rv;
        if (runk.empty()) {
            if (resid.is_zero_v()) {
                rep.verified += 1;
                rep.log.push_back("verified    " + eq.label);
            } else {
                rep.inconsistencies.push_back(eq.label + ": residual " + resid.str());
                rep.log.push_back("INCONSISTENT " + eq.label + ": residual " + resid.str());
            }
            continue;
        }
        Rat c;
        if (runk.size() == 1 && runk[0].ntau == 0 && runk[0].np == 0 &&
            constant_coeff(runk[0].coeff, &c) && c != 0) {
            IVal pred = resid.scaled(Rat(1) / c);
            work[runk[0].key] = pred;
            rep.predictions.push_back({runk[0].key, pred});
            rep.log.push_back("prediction  " + eq.label + ": " + runk[0].key.str(g) + " = " +
                              pred.str());
            continue;
        }
        std::ostringstream os;
        os << eq.label << ": " << runk.size() << " unknown term(s) on the right side";
        rep.unresolved.push_back(os.str());
        rep.log.push_back("unresolved  " + eq.label);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// trivial elliptic product over the solved one-curve series table

K3Class K3Class::basis(int i) {
    K3Class r;
    r.c[static_cast<size_t>(i)] = 1;
    return r;
}

bool K3Class::is_zero_k() const {
    for (const Rat& v : c)
        if (v != 0) return false;
    return true;
}

K3Class K3Class::scaled(const Rat& k) const {
    K3Class r;
    for (size_t i = 0; i < 6; ++i) r.c[i] = c[i] * k;
    return r;
}

K3Class operator+(const K3Class& a, const K3Class& b) {
    K3Class r;
    for (size_t i = 0; i < 6; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

K3Class operator-(const K3Class& a, const K3Class& b) {
    K3Class r;
    for (size_t i = 0; i < 6; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

bool operator==(const K3Class& a, const K3Class& b) { return a.c == b.c; }

namespace {

// intersection numbers of the degree-2 symbols
Rat k3_div_gram(int a, int b) {
    if ((a == k3_fiber && b == k3_wdiv) || (a == k3_wdiv && b == k3_fiber)) return Rat(1);
    if ((a == k3_perp1 && b == k3_perp2) || (a == k3_perp2 && b == k3_perp1)) return Rat(1);
    return Rat(0);
}

bool k3_is_divisor(int s) { return s != k3_unit && s != k3_point; }

}  // namespace

K3Class k3_mul(const K3Class& a, const K3Class& b) {
    K3Class r;
    for (int s = 0; s < 6; ++s) {
        const Rat& ca = a.c[static_cast<size_t>(s)];
        if (ca == 0) continue;
        for (int t = 0; t < 6; ++t) {
            Rat cc = ca * b.c[static_cast<size_t>(t)];
            if (cc == 0) continue;
            if (s == k3_unit) {
                r.c[static_cast<size_t>(t)] += cc;
            } else if (t == k3_unit) {
                r.c[static_cast<size_t>(s)] += cc;
            } else if (k3_is_divisor(s) && k3_is_divisor(t)) {
                r.c[k3_point] += cc * k3_div_gram(s, t);
            }
            // a point against anything but the identity overflows the degree
        }
    }
    return r;
}

Rat k3_integral(const K3Class& a) { return a.c[k3_point]; }

Rat k3_pair(const K3Class& a, const K3Class& b) { return k3_integral(k3_mul(a, b)); }

K3Class k3_pushpull(const K3Class& a) {
    K3Class r;
    r.c[k3_unit] = a.c[k3_wdiv];
    r.c[k3_fiber] = a.c[k3_point];
    return r;
}

K3Class k3_proj_perp(const K3Class& a) {
    K3Class r;
    r.c[k3_perp1] = a.c[k3_perp1];
    r.c[k3_perp2] = a.c[k3_perp2];
    return r;
}

int k3_weight(int idx) {
    static const int w[6] = {-1, -1, 1, 1, 0, 0};
    return w[idx];
}

K3Tensor k3_corr(const K3Class& gamma) {
    K3Tensor T{};
    static const std::pair<int, int> dX[] = {
        {k3_unit, k3_point}, {k3_point, k3_unit}, {k3_wdiv, k3_fiber}, {k3_fiber, k3_wdiv}};
    static const std::pair<int, int> dB[] = {{k3_unit, k3_fiber}, {k3_fiber, k3_unit}};
    const K3Class W = K3Class::basis(k3_wdiv);
    // gamma against one diagonal factor and one base factor, both mirror orders
    for (const auto& [d1, d2] : dX)
        for (const auto& [f1, f2] : dB) {
            Rat c = k3_integral(k3_mul(k3_mul(gamma, K3Class::basis(d1)), K3Class::basis(f1)));
            if (c == 0) continue;
            T.m[static_cast<size_t>(d2)][static_cast<size_t>(f2)] += c;
            T.m[static_cast<size_t>(f2)][static_cast<size_t>(d2)] += c;
        }
    for (const auto& [f1, f2] : dB) {
        if (f1 == k3_unit) {
            // the untracked directions contract gamma to its projection
            K3Class pr = k3_proj_perp(gamma);
            for (int s = k3_perp1; s <= k3_perp2; ++s) {
                const Rat& c = pr.c[static_cast<size_t>(s)];
                if (c == 0) continue;
                T.m[static_cast<size_t>(s)][static_cast<size_t>(f2)] += c;
                T.m[static_cast<size_t>(f2)][static_cast<size_t>(s)] += c;
            }
        }
        // gamma paired with the base factor alone
        Rat c0 = k3_integral(k3_mul(gamma, K3Class::basis(f1)));
        if (c0 != 0) {
            for (const auto& [d1, d2] : dX) {
                K3Class pc = k3_mul(K3Class::basis(d1), K3Class::basis(f2));
                for (int t = 0; t < 6; ++t) {
                    Rat cc = c0 * pc.c[static_cast<size_t>(t)];
                    if (cc != 0) T.m[static_cast<size_t>(t)][static_cast<size_t>(d2)] += cc;
                }
            }
            if (f2 == k3_unit) T.perp += c0;
        }
    }
    // small-diagonal correction
    static const std::array<int, 3> db3[] = {{k3_unit, k3_fiber, k3_fiber},
                                             {k3_fiber, k3_fiber, k3_unit},
                                             {k3_fiber, k3_unit, k3_fiber}};
    for (const auto& [u, v, w] : db3) {
        Rat c1 = k3_integral(k3_mul(k3_mul(gamma, K3Class::basis(u)), W));
        if (c1 != 0) T.m[static_cast<size_t>(v)][static_cast<size_t>(w)] -= c1;
        Rat c2 = k3_integral(k3_mul(gamma, K3Class::basis(u)));
        if (c2 == 0) continue;
        K3Class vw = k3_mul(K3Class::basis(v), W);
        for (int t = 0; t < 6; ++t) {
            Rat cc = c2 * vw.c[static_cast<size_t>(t)];
            if (cc != 0) T.m[static_cast<size_t>(t)][static_cast<size_t>(w)] -= cc;
        }
        K3Class ww = k3_mul(K3Class::basis(w), W);
        for (int t = 0; t < 6; ++t) {
            Rat cc = c2 * ww.c[static_cast<size_t>(t)];
            if (cc != 0) T.m[static_cast<size_t>(v)][static_cast<size_t>(t)] -= cc;
        }
    }
    return T;
}

K3Class k3_corr_pair(const K3Class& x, const K3Class& y) {
    const K3Class W = K3Class::basis(k3_wdiv);
    auto bpush = [](const K3Class& v) { return std::pair<Rat, Rat>{v.c[k3_wdiv], v.c[k3_point]}; };
    auto bmul = [](const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) {
        Rat u = a.first * b.first;
        Rat p = a.first * b.second + a.second * b.first;
        return std::pair<Rat, Rat>{u, p};
    };
    auto bpull = [](const std::pair<Rat, Rat>& a) {
        K3Class r;
        r.c[k3_unit] = a.first;
        r.c[k3_fiber] = a.second;
        return r;
    };
    K3Class r = k3_pushpull(k3_mul(x, y)) + k3_mul(x, k3_pushpull(y)) + k3_mul(k3_pushpull(x), y);
    r = r - bpull(bmul(bpush(k3_mul(W, x)), bpush(y)));
    r = r - bpull(bmul(bpush(x), bpush(k3_mul(y, W))));
    r = r - k3_mul(bpull(bmul(bpush(x), bpush(y))), W);
    return r;
}

namespace {

// one matching atom: a basis symbol, or a slot of the untracked-lattice diagonal
struct KAtom {
    int k;
    int sym;  // 0..5, or -1 for a lattice slot
};

MeroQJac kkv_multiple(const QJacPoly& f) { return MeroQJac(-f, 2, 1); }

MeroQJac match_atoms(const std::vector<KAtom>& items, const QJacPoly& pref, int ntau,
                     const SeriesTable& t) {
    if (pref.is_zero_p()) return MeroQJac();
    if (items.empty()) {
        MeroQJac v = kkv_multiple(pref);
        for (int s = 0; s < ntau; ++s) v = derived_derivative(v, DOp::Dtau);
        return v;
    }
    const KAtom x = items[0];
    std::vector<KAtom> rest0(items.begin() + 1, items.end());
    if (x.sym == k3_unit)
        throw std::invalid_argument("identity insertions are outside the fiber-model correlator");
    MeroQJac total;
    // unmatched: the divisor series, the fiber-coupled series with a deferred
    // q d/dq, and the identity series
    if (x.k >= 2) {
        Rat cw = k3_div_gram(x.sym, k3_wdiv);
        if (cw != 0) total = total + match_atoms(rest0, pref * t.a(x.k - 2).scaled(cw), ntau, t);
        Rat cf = k3_div_gram(x.sym, k3_fiber);
        if (cf != 0)
            total = total + match_atoms(rest0, pref * t.a(x.k - 2).scaled(cf), ntau + 1, t);
    }
    if (x.sym == k3_point) total = total + match_atoms(rest0, pref * t.b(x.k), ntau, t);
    // matched with a later insertion
    for (size_t j = 0; j < rest0.size(); ++j) {
        if (rest0[j].sym < 0) continue;
        Rat gp = k3_div_gram(x.sym, rest0[j].sym);
        if (gp == 0) continue;
        QJacPoly cp = t.c(x.k - 2, rest0[j].k - 2);
        if (cp.is_zero_p()) continue;
        std::vector<KAtom> rest1 = rest0;
        rest1.erase(rest1.begin() + static_cast<long>(j));
        total = total + match_atoms(rest1, pref * cp.scaled(gp), ntau, t);
    }
    return total;
}

// rank of the untracked complement of the section-fiber block
const Rat k3_perp_rank(20);

Rat k3_perp_pair(int a, int b) {
    if ((a == k3_perp1 && b == k3_perp2) || (a == k3_perp2 && b == k3_perp1)) return Rat(1);
    return Rat(0);
}

MeroQJac eval_atoms(const std::vector<KAtom>& atoms, const SeriesTable& t) {
    for (const KAtom& a : atoms)
        if (a.k < 0) return MeroQJac();
    std::vector<size_t> slots;
    for (size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].sym < 0) slots.push_back(i);
    if (slots.empty()) return match_atoms(atoms, QJacPoly(Rat(1)), 0, t);
    if (slots.size() != 2) throw std::logic_error("lattice slots must come in one pair");
    const int k1 = atoms[slots[0]].k;
    const int k2 = atoms[slots[1]].k;
    std::vector<KAtom> rest;
    for (size_t i = 0; i < atoms.size(); ++i)
        if (i != slots[0] && i != slots[1]) rest.push_back(atoms[i]);
    MeroQJac total;
    // both slots contract with each other across the full rank
    {
        QJacPoly cp = t.c(k1 - 2, k2 - 2);
        if (!cp.is_zero_p())
            total = total + match_atoms(rest, cp.scaled(k3_perp_rank), 0, t);
    }
    // each slot pairs one tracked insertion
    for (size_t i = 0; i < rest.size(); ++i)
        for (size_t j = 0; j < rest.size(); ++j) {
            if (i == j) continue;
            Rat pp = k3_perp_pair(rest[i].sym, rest[j].sym);
            if (pp == 0) continue;
            QJacPoly cp = t.c(k1 - 2, rest[i].k - 2) * t.c(k2 - 2, rest[j].k - 2);
            if (cp.is_zero_p()) continue;
            std::vector<KAtom> rest2;
            for (size_t l = 0; l < rest.size(); ++l)
                if (l != i && l != j) rest2.push_back(rest[l]);
            total = total + match_atoms(rest2, cp.scaled(pp), 0, t);
        }
    return total;
}

std::vector<std::pair<Rat, std::vector<KAtom>>> expand_kins(const std::vector<KIns>& ins) {
    std::vector<std::pair<Rat, std::vector<KAtom>>> work{{Rat(1), {}}};
    for (const KIns& one : ins) {
        std::vector<std::pair<Rat, std::vector<KAtom>>> next;
        for (const auto& [c0, atoms] : work)
            for (int s = 0; s < 6; ++s) {
                const Rat& cs = one.cls.c[static_cast<size_t>(s)];
                if (cs == 0) continue;
                std::vector<KAtom> a2 = atoms;
                a2.push_back(KAtom{one.k, s});
                Rat c = c0 * cs;
                next.push_back({std::move(c), std::move(a2)});
            }
        work = std::move(next);
    }
    return work;
}

MeroQJac eval_kins(const std::vector<KIns>& ins, const std::vector<int>& slot_levels,
                   const SeriesTable& t) {
    MeroQJac total;
    for (auto& [c, atoms] : expand_kins(ins)) {
        std::vector<KAtom> full;
        for (int k : slot_levels) full.push_back(KAtom{k, -1});
        full.insert(full.end(), atoms.begin(), atoms.end());
        total = total + eval_atoms(full, t).scaled(c);
    }
    return total;
}

int k3_wt_of(const K3Class& a) {
    int w = 0;
    bool seen = false;
    for (int s = 0; s < 6; ++s) {
        if (a.c[static_cast<size_t>(s)] == 0) continue;
        if (!seen) {
            w = k3_weight(s);
            seen = true;
        } else if (w != k3_weight(s)) {
            throw std::invalid_argument("insertion classes must have a pure weight");
        }
    }
    return w;
}

std::string k3_cls_str(const K3Class& a) {
    static const char* names[6] = {"1", "F", "W", "pt", "a1", "a2"};
    std::ostringstream os;
    bool first = true;
    for (int s = 0; s < 6; ++s) {
        const Rat& c = a.c[static_cast<size_t>(s)];
        if (c == 0) continue;
        if (!first) os << "+";
        first = false;
        if (c != 1) os << c.get_str() << "*";
        os << names[s];
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace

MeroQJac k3_correlator(const std::vector<KIns>& ins, const SeriesTable& t) {
    return eval_kins(ins, {}, t);
}

MeroQJac k3_sigma(const std::vector<KIns>& ins, const SeriesTable& t) {
    const K3Class F = K3Class::basis(k3_fiber);
    const int n = static_cast<int>(ins.size());
    MeroQJac total;
    // one insertion varied twice
    for (int i = 0; i < n; ++i) {
        Rat cf = k3_pair(ins[static_cast<size_t>(i)].cls, F);
        if (cf == 0) continue;
        std::vector<KIns> list = ins;
        list[static_cast<size_t>(i)].cls = F.scaled(Rat(-20) * cf);
        total = total + k3_correlator(list, t);
    }
    // ordered pairs varied once each
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const KIns& gi = ins[static_cast<size_t>(i)];
            const KIns& gj = ins[static_cast<size_t>(j)];
            Rat cfi = k3_pair(gi.cls, F);
            Rat cfj = k3_pair(gj.cls, F);
            K3Class pi = k3_proj_perp(gi.cls);
            K3Class pj = k3_proj_perp(gj.cls);
            if (cfi != 0 && cfj != 0) {
                std::vector<KIns> rest;
                for (int l = 0; l < n; ++l)
                    if (l != i && l != j) rest.push_back(ins[static_cast<size_t>(l)]);
                total = total + eval_kins(rest, {gi.k, gj.k}, t).scaled(cfi * cfj);
            }
            if (cfi != 0 && !pj.is_zero_k()) {
                std::vector<KIns> list = ins;
                list[static_cast<size_t>(i)].cls = pj.scaled(-cfi);
                list[static_cast<size_t>(j)].cls = F;
                total = total + k3_correlator(list, t);
            }
            if (cfj != 0 && !pi.is_zero_k()) {
                std::vector<KIns> list = ins;
                list[static_cast<size_t>(i)].cls = F;
                list[static_cast<size_t>(j)].cls = pi.scaled(-cfj);
                total = total + k3_correlator(list, t);
            }
            Rat pp = k3_pair(pi, gj.cls);
            if (pp != 0) {
                std::vector<KIns> list = ins;
                list[static_cast<size_t>(i)].cls = F.scaled(pp);
                list[static_cast<size_t>(j)].cls = F;
                total = total + k3_correlator(list, t);
            }
        }
    return total;
}

K3Instance k3_instance(Anomaly op, const std::vector<KIns>& ins, const SeriesTable& t) {
    const int n = static_cast<int>(ins.size());
    std::vector<int> wt(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) wt[static_cast<size_t>(i)] = k3_wt_of(ins[static_cast<size_t>(i)].cls);
    auto rest_of = [&](int i, int j = -1) {
        std::vector<KIns> rest;
        for (int l = 0; l < n; ++l)
            if (l != i && l != j) rest.push_back(ins[static_cast<size_t>(l)]);
        return rest;
    };
    auto with_front = [&](KIns a, std::vector<KIns> rest) {
        std::vector<KIns> list{std::move(a)};
        list.insert(list.end(), rest.begin(), rest.end());
        return list;
    };
    auto with_front2 = [&](KIns a, KIns b, std::vector<KIns> rest) {
        std::vector<KIns> list{std::move(a), std::move(b)};
        list.insert(list.end(), rest.begin(), rest.end());
        return list;
    };
    K3Instance out;
    {
        std::ostringstream os;
        os << (op == Anomaly::dA ? "dA " : "dG2 ") << "[";
        bool first = true;
        for (const KIns& one : ins) {
            if (!first) os << " ";
            first = false;
            os << "ch_" << one.k << "(" << k3_cls_str(one.cls) << ")";
        }
        os << "]";
        out.label = os.str();
    }
    {
        MeroQJac corr = k3_correlator(ins, t);
        QJacPoly p = (op == Anomaly::dA) ? partial_a(corr.num) : partial_g2(corr.num);
        out.lhs = MeroQJac(std::move(p), corr.theta_pow, corr.delta_pow);
    }
    static const std::pair<int, int> dB[] = {{k3_unit, k3_fiber}, {k3_fiber, k3_unit}};
    MeroQJac rhs;
    if (op == Anomaly::dA) {
        for (int i = 0; i < n; ++i) {
            const KIns& gi = ins[static_cast<size_t>(i)];
            if (gi.k - 1 >= 0)
                for (const auto& [bl, br] : dB) {
                    K3Class cl = k3_mul(gi.cls, K3Class::basis(bl));
                    if (cl.is_zero_k()) continue;
                    auto list = with_front2(KIns{gi.k - 1, cl}, KIns{2, K3Class::basis(br)},
                                            rest_of(i));
                    rhs = rhs + k3_correlator(list, t);
                }
            K3Class pp = k3_pushpull(gi.cls);
            if (!pp.is_zero_k())
                rhs = rhs + k3_correlator(with_front(KIns{gi.k + 1, pp}, rest_of(i)), t);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const KIns& gi = ins[static_cast<size_t>(i)];
            // second character class of the base
            if (gi.k - 2 >= 0) {
                K3Class c2 = k3_mul(gi.cls, K3Class::basis(k3_fiber).scaled(Rat(2)));
                if (!c2.is_zero_k())
                    rhs = rhs - k3_correlator(with_front(KIns{gi.k - 2, c2}, rest_of(i)), t);
            }
            // vertical correspondence; the canonical class acts by -1 here
            long denom = gi.k - 2 + wt[static_cast<size_t>(i)];
            if (denom >= 0) {
                K3Tensor E = k3_corr(gi.cls);
                Rat dfac(factorial(denom));
                for (int a = 0; a < 6; ++a)
                    for (int b = 0; b < 6; ++b) {
                        const Rat& ce = E.m[static_cast<size_t>(a)][static_cast<size_t>(b)];
                        if (ce == 0) continue;
                        int wl = k3_weight(a);
                        int wr = k3_weight(b);
                        int sgn = (((1 + wl) * (1 + wr)) % 2) ? -1 : 1;
                        for (int m1 = 0; m1 <= gi.k; ++m1) {
                            int m2 = gi.k - m1;
                            long f1 = m1 - 1 + wl;
                            long f2 = m2 - 1 + wr;
                            if (f1 < 0 || f2 < 0) continue;
                            Int fnum = factorial(f1) * factorial(f2);
                            Rat coef = Rat(-1) * Rat(sgn) * (Rat(fnum) / dfac) * ce;
                            auto list = with_front2(KIns{m1, K3Class::basis(a)},
                                                    KIns{m2, K3Class::basis(b)}, rest_of(i));
                            rhs = rhs + k3_correlator(list, t).scaled(coef);
                        }
                    }
                if (E.perp != 0) {
                    // both factors land in the untracked directions
                    int sgn = -1;  // two weight-0 factors
                    for (int m1 = 0; m1 <= gi.k; ++m1) {
                        int m2 = gi.k - m1;
                        long f1 = m1 - 1;
                        long f2 = m2 - 1;
                        if (f1 < 0 || f2 < 0) continue;
                        Int fnum = factorial(f1) * factorial(f2);
                        Rat coef = Rat(-1) * Rat(sgn) * (Rat(fnum) / dfac) * E.perp;
                        rhs = rhs + eval_kins(rest_of(i), {m1, m2}, t).scaled(coef);
                    }
                }
            }
            for (int j = i + 1; j < n; ++j) {
                const KIns& gj = ins[static_cast<size_t>(j)];
                // base diagonal splitting across the pair
                if (gi.k - 1 >= 0 && gj.k - 1 >= 0)
                    for (const auto& [bl, br] : dB) {
                        K3Class cl = k3_mul(gi.cls, K3Class::basis(bl));
                        K3Class cr = k3_mul(gj.cls, K3Class::basis(br));
                        if (cl.is_zero_k() || cr.is_zero_k()) continue;
                        auto list =
                            with_front2(KIns{gi.k - 1, cl}, KIns{gj.k - 1, cr}, rest_of(i, j));
                        rhs = rhs + k3_correlator(list, t).scaled(Rat(-2));
                    }
                // joint correspondence of the pair
                long aa = gi.k - 2 + wt[static_cast<size_t>(i)];
                long bb = gj.k - 2 + wt[static_cast<size_t>(j)];
                if (aa >= 0 && bb >= 0) {
                    K3Class eij = k3_corr_pair(gi.cls, gj.cls);
                    if (!eij.is_zero_k()) {
                        int sgn = (((1 + wt[static_cast<size_t>(i)]) *
                                    (1 + wt[static_cast<size_t>(j)])) % 2)
                                      ? -1
                                      : 1;
                        Int bi = binomial(aa + bb, aa);
                        if (bi != 0) {
                            auto list = with_front(KIns{gi.k + gj.k - 2, eij}, rest_of(i, j));
                            rhs = rhs +
                                  k3_correlator(list, t).scaled(Rat(-2) * Rat(sgn) * Rat(bi));
                        }
                    }
                }
            }
        }
        rhs = rhs - k3_sigma(ins, t);
    }
    out.rhs = rhs;
    return out;
}

std::vector<K3Instance> k3_standard_instances(const SeriesTable& t, int ka, int kb, int kc) {
    std::vector<K3Instance> v;
    const K3Class F = K3Class::basis(k3_fiber);
    const K3Class P = K3Class::basis(k3_point);
    const K3Class L1 = K3Class::basis(k3_perp1);
    const K3Class L2 = K3Class::basis(k3_perp2);
    for (Anomaly op : {Anomaly::dA, Anomaly::dG2}) {
        for (int k = 0; k <= ka; ++k) v.push_back(k3_instance(op, {KIns{k + 2, F}}, t));
        for (int k = 0; k <= kb; ++k) v.push_back(k3_instance(op, {KIns{k, P}}, t));
        for (int k = 1; k < kc; ++k)
            for (int l = 1; k + l <= kc; ++l)
                v.push_back(k3_instance(op, {KIns{k + 2, L1}, KIns{l + 2, L2}}, t));
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; a + b <= 3; ++b)
                v.push_back(k3_instance(op, {KIns{a + 2, F}, KIns{b + 2, F}}, t));
    }
    return v;
}

}  // namespace qjf
