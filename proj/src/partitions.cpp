#include "qjf/partitions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qjf {

namespace {

void extend_partitions(int rem, int maxpart, Partition& cur, std::vector<Partition>& out) {
    if (rem == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
        cur.push_back(p);
        extend_partitions(rem - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_of(int n) {
    if (n < 0) throw std::invalid_argument("partitions of a negative integer");
    std::vector<Partition> out;
    Partition cur;
    extend_partitions(n, n, cur, out);
    return out;
}

namespace {

TJet one_jet(int nv, int qorder) {
    return TJet::from_qseries(nv, TSeries::constant(TPoly(Rat(1)), qorder));
}

TSeries qpow_series(int m, int qorder) {
    TSeries r(m, qorder);
    r.at(m) = TPoly(Rat(1));
    return r;
}

// inverse of lead*(1 + u) where u is nilpotent within the stored window
// (vanishing q-valuation or x-valuation); steps bounds the geometric sum
TJet jet_geometric_inverse(const TJet& a, const TPoly& lead, int steps) {
    TPoly linv = invert_coeff(lead);
    int qorder = a.qtrunc_common();
    TJet neg = one_jet(a.nv, qorder) - a.scaled(linv);
    TJet acc = one_jet(a.nv, qorder);
    TJet term = acc;
    for (int k = 0; k < steps; ++k) {
        term = term * neg;
        acc = acc + term;
    }
    return acc.scaled(linv);
}

std::string mono_label(const std::vector<int>& m) {
    std::ostringstream os;
    os << "x^(";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) os << ",";
        os << m[i];
    }
    os << ")";
    return os.str();
}

// first mismatching q-coefficient, or empty when equal through the common order
std::string series_diff(const TSeries& a, const TSeries& b) {
    int hi = std::min(a.trunc, b.trunc);
    int lo = std::min(a.qshift, b.qshift);
    for (int n = lo; n <= hi; ++n) {
        const TPoly& va = a.coeff(n);
        const TPoly& vb = b.coeff(n);
        if (!(va == vb)) {
            std::ostringstream os;
            os << "q^" << n << ": " << va.str() << " vs " << vb.str();
            return os.str();
        }
    }
    return {};
}

std::vector<Rat> twisted_coeffs(int k, const Rat& s, int qorder) {
    std::vector<Rat> v(static_cast<size_t>(qorder) + 1, Rat(0));
    std::vector<Rat> bern = bernoulli_list(k);
    Rat c = s * bern[static_cast<size_t>(k)];
    Rat ck = c / Rat(k);
    v[0] = -ck;
    for (int n = 1; n <= qorder; ++n) {
        Int sd = sigma_divisor(k - 1, n);
        v[static_cast<size_t>(n)] = Rat(sd);
    }
    return v;
}

}  // namespace

TJet exp_jet(const TPoly& c, int xorder, int qorder) {
    TJet r(1, {{0, 0, 0}}, {{xorder, 0, 0}}, 0, qorder);
    TPoly p(Rat(1));
    Rat f(1);
    for (int k = 0; k <= xorder; ++k) {
        if (k) {
            p = p * c;
            f = f * Rat(k);
        }
        Rat inv = Rat(1) / f;
        r.cell({{k, 0, 0}}) = TSeries::constant(p.scaled(inv), qorder);
    }
    return r;
}

TJet geom_tail_jet(const TPoly& c, int xorder, int qorder) {
    std::vector<Rat> bern = bernoulli_list(std::max(xorder + 1, 0));
    TJet r(1, {{-1, 0, 0}}, {{xorder, 0, 0}}, 0, qorder);
    r.cell({{-1, 0, 0}}) = TSeries::constant(invert_coeff(c), qorder);
    if (xorder >= 0)
        r.cell({{0, 0, 0}}) = TSeries::constant(TPoly(Rat(1, 2)), qorder);
    for (int k = 2; k <= xorder + 1; k += 2) {
        Int fk = factorial(k);
        Rat f = bern[static_cast<size_t>(k)] / Rat(fk);
        r.cell({{k - 1, 0, 0}}) = TSeries::constant(c.pow(k - 1).scaled(f), qorder);
    }
    return r;
}

TJet sinh_quot_jet(int xorder, int qorder) {
    TJet r(1, {{0, 0, 0}}, {{xorder, 0, 0}}, 0, qorder);
    for (int k = 0; k <= xorder; k += 2) {
        int h = k / 2;
        Int denom = factorial(k + 1) * (Int(1) << (2 * h));
        Rat c = Rat((h % 2) ? -1 : 1) / Rat(denom);
        r.cell({{k, 0, 0}}) = TSeries::constant(TPoly::monomial(h, h, c), qorder);
    }
    return r;
}

TJet qpochhammer_jet(const TPoly& c, int qorder, int xorder) {
    TJet acc = one_jet(1, qorder);
    TJet e = exp_jet(c, xorder, qorder);
    for (int m = 1; m <= qorder; ++m)
        acc = acc * (one_jet(1, qorder) - e.scaled_q(qpow_series(m, qorder)));
    return acc;
}

TSeries qpochhammer_series(int qorder) {
    TSeries r = TSeries::constant(TPoly(Rat(1)), qorder);
    for (int m = 1; m <= qorder; ++m) {
        TSeries f(0, qorder);
        f.at(0) = TPoly(Rat(1));
        f.at(m) = TPoly(Rat(-1));
        r = r * f;
    }
    return r;
}

TJet shifted_part_sum(const Partition& lam, int xorder, int qorder) {
    int len = static_cast<int>(lam.size());
    TJet r = exp_jet(TPoly(Rat(-2 * len - 1, 2)), xorder + 1, qorder) *
             geom_tail_jet(TPoly(Rat(1)), xorder + 1, qorder);
    for (int i = 1; i <= len; ++i) {
        Rat c = Rat(2 * (lam[static_cast<size_t>(i) - 1] - i) + 1, 2);
        r = r + exp_jet(TPoly(c), xorder, qorder);
    }
    return r;
}

TJet weighted_part_sum(const Partition& lam, int xorder, int qorder) {
    int len = static_cast<int>(lam.size());
    TJet r = exp_jet(TPoly::monomial(1, 0, Rat(-(len + 1))), xorder + 1, qorder) *
             geom_tail_jet(TPoly::monomial(1, 0), xorder + 1, qorder);
    for (int i = 1; i <= len; ++i) {
        TPoly c = TPoly::monomial(0, 1, Rat(-lam[static_cast<size_t>(i) - 1])) +
                  TPoly::monomial(1, 0, Rat(-i));
        r = r + exp_jet(c, xorder, qorder);
    }
    return r;
}

TJet bloch_okounkov(int n, int qorder, const std::vector<int>& xorders) {
    if (n < 0 || n > 3)
        throw std::invalid_argument("variable count must be between 0 and 3");
    if (static_cast<int>(xorders.size()) != n)
        throw std::invalid_argument("one x-order per variable");
    std::array<int, 3> lo{{0, 0, 0}}, hi{{0, 0, 0}};
    for (int v = 0; v < n; ++v) {
        lo[v] = -1;
        hi[v] = xorders[static_cast<size_t>(v)];
    }
    TJet acc(n, lo, hi, 0, qorder);
    for (int m = 0; m <= qorder; ++m)
        for (const auto& lam : partitions_of(m)) {
            TJet prod = one_jet(n, qorder);
            for (int v = 0; v < n; ++v) {
                TJet f = shifted_part_sum(lam, xorders[static_cast<size_t>(v)], qorder);
                prod = prod * f.embedded(n, {{v, 0, 0}});
            }
            if (m) prod = prod.scaled_q(qpow_series(m, qorder));
            acc = acc + prod;
        }
    return acc.scaled_q(qpochhammer_series(qorder));
}

std::vector<Rat> jet_qcoeffs(const TJet& f, const std::vector<int>& mono) {
    if (static_cast<int>(mono.size()) != f.nv)
        throw std::invalid_argument("one exponent per variable");
    std::array<int, 3> e{{0, 0, 0}};
    for (int v = 0; v < f.nv; ++v) e[v] = mono[static_cast<size_t>(v)];
    int qt = f.qtrunc_common();
    std::vector<Rat> out(static_cast<size_t>(qt) + 1, Rat(0));
    for (int v = 0; v < f.nv; ++v) {
        if (e[v] > f.hi[v])
            throw std::out_of_range("x exponent beyond the exact window");
        if (e[v] < f.lo[v]) return out;
    }
    if (!f.in_storage(e)) return out;
    const TSeries& cell = f.cell(e);
    int top = std::min(qt, cell.trunc);
    for (int n = std::max(0, cell.qshift); n <= top; ++n)
        out[static_cast<size_t>(n)] = cell.coeff(n).constant_value();
    return out;
}

FourierSeries rational_qseries(const std::vector<Rat>& coeffs) {
    FourierSeries r(0, static_cast<int>(coeffs.size()) - 1);
    for (size_t n = 0; n < coeffs.size(); ++n)
        r.at(static_cast<int>(n)) = RationalFunction(coeffs[n]);
    return r;
}

MeroQJac coefficient_fit(const TJet& f, const std::vector<int>& mono, int margin) {
    int w = f.nv;
    for (int v : mono) w += v;
    return fit(rational_qseries(jet_qcoeffs(f, mono)), w, 0, 0, 0, margin);
}

void JetReport::add(const std::string& label, bool ok, const std::string& detail) {
    checks.push_back({label, ok, ok ? std::string() : detail});
    if (!ok) pass = false;
}

int JetReport::failures() const {
    int k = 0;
    for (const auto& c : checks)
        if (!c.pass) ++k;
    return k;
}

std::string JetReport::str() const {
    std::ostringstream os;
    os << title << ": " << (pass ? "ok" : "FAIL") << " ("
       << (checks.size() - static_cast<size_t>(failures())) << "/" << checks.size()
       << " coefficients)";
    for (const auto& c : checks)
        if (!c.pass) os << "\n  " << c.label << ": " << c.detail;
    return os.str();
}

JetReport pixton_check(int n, int qorder, int xorder) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("variable count must be 1, 2, or 3");
    TJet fn = bloch_okounkov(n, qorder, std::vector<int>(static_cast<size_t>(n), xorder));
    TJet fm;
    if (n > 1)
        fm = bloch_okounkov(n - 1, qorder, std::vector<int>(static_cast<size_t>(n) - 1, xorder));
    JetReport rep;
    rep.title = "factorwise anomaly identity in " + std::to_string(n) +
                (n > 1 ? " variables" : " variable");
    std::map<std::vector<int>, QJacPoly> cache;
    std::vector<int> m(static_cast<size_t>(n), -1);
    for (;;) {
        int tot = std::accumulate(m.begin(), m.end(), 0);
        if (tot <= xorder) {
            std::string label = mono_label(m);
            std::vector<int> key = m;
            std::sort(key.begin(), key.end(), std::greater<int>());
            auto it = cache.find(key);
            if (it == cache.end()) {
                try {
                    it = cache.emplace(key, coefficient_fit(fn, key).num).first;
                } catch (const FitError& e) {
                    throw std::runtime_error("quasimodular fit failed for the coefficient " +
                                             label + ": " + e.what());
                }
            }
            FourierSeries lhs = evaluate(partial_g2(it->second), qorder);
            std::vector<Rat> rhs(static_cast<size_t>(qorder) + 1, Rat(0));
            auto addv = [&](const std::vector<Rat>& v, const Rat& sc) {
                for (size_t i = 0; i < rhs.size() && i < v.size(); ++i) rhs[i] += v[i] * sc;
            };
            for (int i = 0; i < n; ++i) {
                std::vector<int> mi = m;
                mi[static_cast<size_t>(i)] -= 2;
                addv(jet_qcoeffs(fn, mi), Rat(1));
                for (int j = i + 1; j < n; ++j) {
                    std::vector<int> mij = m;
                    mij[static_cast<size_t>(i)] -= 1;
                    mij[static_cast<size_t>(j)] -= 1;
                    addv(jet_qcoeffs(fn, mij), Rat(2));
                }
            }
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    int a = m[static_cast<size_t>(i)], b = m[static_cast<size_t>(j)];
                    Int bn = binomial(a + b, a);
                    if (bn == 0) continue;
                    std::vector<int> pair_key;
                    pair_key.push_back(a + b - 1);
                    for (int l = 0; l < n; ++l)
                        if (l != i && l != j) pair_key.push_back(m[static_cast<size_t>(l)]);
                    Rat sc = Rat(-2) * Rat(bn);
                    addv(jet_qcoeffs(fm, pair_key), sc);
                }
            FourierSeries rhss = rational_qseries(rhs);
            bool ok = (lhs == rhss);
            std::string detail;
            if (!ok) {
                for (int nq = 0; nq <= qorder; ++nq)
                    if (!(lhs.coeff(nq) == rhss.coeff(nq))) {
                        detail = "the fitted partial differs from the jet combination at q^" +
                                 std::to_string(nq);
                        break;
                    }
            }
            rep.add(label, ok, detail);
        }
        int v = n - 1;
        for (; v >= 0; --v) {
            if (++m[static_cast<size_t>(v)] <= xorder) break;
            m[static_cast<size_t>(v)] = -1;
        }
        if (v < 0) break;
    }
    return rep;
}

JetReport c2e_pt_stationary(int n, int qorder, const std::vector<int>& xorders) {
    if (n < 0 || n > 3)
        throw std::invalid_argument("variable count must be between 0 and 3");
    if (static_cast<int>(xorders.size()) != n)
        throw std::invalid_argument("one x-order per variable");
    std::array<int, 3> lo{{0, 0, 0}}, hi{{0, 0, 0}};
    for (int v = 0; v < n; ++v) {
        lo[v] = -1;
        hi[v] = xorders[static_cast<size_t>(v)] + 1;
    }
    TJet acc(n, lo, hi, 0, qorder);
    for (int mq = 0; mq <= qorder; ++mq)
        for (const auto& lam : partitions_of(mq)) {
            TJet prod = one_jet(n, qorder);
            for (int v = 0; v < n; ++v) {
                TJet f = weighted_part_sum(lam, xorders[static_cast<size_t>(v)] + 1, qorder);
                prod = prod * f.embedded(n, {{v, 0, 0}});
            }
            if (mq) prod = prod.scaled_q(qpow_series(mq, qorder));
            acc = acc + prod;
        }
    TPoly t1 = TPoly::monomial(1, 0), tt = TPoly::monomial(1, 1);
    TJet full = acc;
    for (int v = 0; v < n; ++v) {
        int xb = xorders[static_cast<size_t>(v)] + 2;
        TJet omv = one_jet(1, qorder) - exp_jet(t1, xb, qorder);
        TJet tts = sinh_quot_jet(xb, qorder).scaled(tt);
        TJet pref = omv * jet_geometric_inverse(tts, tt, xb / 2 + 1);
        full = full * pref.embedded(n, {{v, 0, 0}});
    }
    full = full.scaled_q(qpochhammer_series(qorder));
    for (auto& cl : full.cells)
        for (auto& co : cl.c) co = co.anti_diagonal();

    TJet f = bloch_okounkov(n, qorder, xorders);
    std::array<int, 3> tlo{{0, 0, 0}}, thi{{0, 0, 0}};
    for (int v = 0; v < n; ++v) thi[v] = xorders[static_cast<size_t>(v)] + 1;
    TJet target(n, tlo, thi, 0, qorder);
    f.for_each([&](std::array<int, 3> e, const TSeries& cell) {
        int tot = 0;
        std::array<int, 3> e2 = e;
        for (int v = 0; v < n; ++v) {
            tot += e[v];
            e2[v] = e[v] + 1;
        }
        target.cell(e2) = cell.scaled(TPoly::monomial(tot - n, 0));
    });

    JetReport rep;
    rep.title = "localization sum against the stationary expansion in " +
                std::to_string(n) + (n == 1 ? " variable" : " variables");
    TSeries zero_s(0, qorder);
    std::vector<int> e(static_cast<size_t>(n), 0);
    for (;;) {
        std::array<int, 3> ea{{0, 0, 0}};
        for (int v = 0; v < n; ++v) ea[v] = e[static_cast<size_t>(v)];
        const TSeries& a = full.in_storage(ea) ? full.cell(ea) : zero_s;
        const TSeries& b = target.cell(ea);
        std::string d = series_diff(a, b);
        rep.add(mono_label(e), d.empty(), d);
        int v = n - 1;
        for (; v >= 0; --v) {
            if (++e[static_cast<size_t>(v)] <= xorders[static_cast<size_t>(v)] + 1) break;
            e[static_cast<size_t>(v)] = 0;
        }
        if (v < 0) break;
    }
    return rep;
}

JetReport c2e_pipt_closed_form(int qorder, int xorder) {
    if (xorder < 2) throw std::invalid_argument("x-order must be at least 2");
    int xb = xorder + 1;
    TSeries qq = qpochhammer_series(qorder);
    TPoly t1 = TPoly::monomial(1, 0), t2 = TPoly::monomial(0, 1);
    TPoly nt1 = t1.scaled(Rat(-1)), nt2 = t2.scaled(Rat(-1));
    TPoly nt12 = nt1 + nt2;

    TJet lhs(1, {{-1, 0, 0}}, {{xb, 0, 0}}, 0, qorder);
    for (int mq = 0; mq <= qorder; ++mq)
        for (const auto& lam : partitions_of(mq)) {
            TJet s = weighted_part_sum(lam, xb, qorder);
            if (mq) s = s.scaled_q(qpow_series(mq, qorder));
            lhs = lhs + s;
        }
    lhs = lhs.scaled_q(qq);

    TJet front = exp_jet(nt1, xb, qorder) * geom_tail_jet(t1, xb, qorder);
    TJet den = qpochhammer_jet(nt2, qorder, xb) * qpochhammer_jet(nt1, qorder, xb);
    TJet den_inv = jet_geometric_inverse(den, TPoly(Rat(1)), qorder);
    TJet num = qpochhammer_jet(nt12, qorder, xb);
    TJet rhs = front.scaled_q(qq) * num * den_inv;

    JetReport rep;
    rep.title = "one-insertion closed forms";
    for (int k = -1; k <= xorder; ++k) {
        const TSeries& a = lhs.cell({{k, 0, 0}});
        const TSeries& b = rhs.cell({{k, 0, 0}});
        std::string d = series_diff(a, b);
        rep.add("pochhammer quotient, x^" + std::to_string(k), d.empty(), d);
    }

    TJet prod_part = (one_jet(1, qorder).scaled_q(qq)) * num * den_inv;
    TJet p = jet_geometric_inverse(sinh_quot_jet(xb, qorder), TPoly(Rat(1)), xb / 2 + 1) *
             prod_part;
    TJet ejet(1, {{2, 0, 0}}, {{xorder, 0, 0}}, 0, qorder);
    for (int i = 1; i < xorder; ++i)
        for (int j = 1; i + j <= xorder; ++j) {
            int k = i + j;
            Rat s(0);
            if (i == j) {
                Int fi = factorial(i);
                Int num2 = fi * fi;
                Int f2 = factorial(2 * i);
                s = Rat(num2) / Rat(f2);
                if (i % 2 == 0) s = -s;
            }
            std::vector<Rat> g = twisted_coeffs(k, s, qorder);
            Int fij = factorial(i) * factorial(j);
            Rat c0 = Rat((k % 2) ? 1 : -1) / Rat(fij);
            TPoly w = TPoly::monomial(i, j, c0);
            TSeries& cell = ejet.cell({{k, 0, 0}});
            for (int nq = 0; nq <= qorder; ++nq) {
                TPoly add = w.scaled(g[static_cast<size_t>(nq)]);
                cell.at(nq) = cell.at(nq) + add;
            }
        }
    TJet ex = one_jet(1, qorder);
    TJet term = one_jet(1, qorder);
    for (int mdeg = 1; 2 * mdeg <= xorder; ++mdeg) {
        Rat inv = Rat(1) / Rat(mdeg);
        term = (term * ejet).scaled(TPoly(inv));
        ex = ex + term;
    }
    TSeries zero_s(0, qorder);
    for (int k = 0; k <= xorder; ++k) {
        std::array<int, 3> ea{{k, 0, 0}};
        const TSeries& a = p.in_storage(ea) ? p.cell(ea) : zero_s;
        const TSeries& b = ex.in_storage(ea) ? ex.cell(ea) : zero_s;
        std::string d = series_diff(a, b);
        rep.add("twisted Eisenstein exponential, x^" + std::to_string(k), d.empty(), d);
    }
    return rep;
}

FourierSeries g_twisted(int k, int s, int qorder) {
    if (k < 1) throw std::invalid_argument("the weight must be at least 1");
    return rational_qseries(twisted_coeffs(k, Rat(s), qorder));
}

}  // namespace qjf
