#include "qjf/qjac.hpp"
#include <algorithm>
#include <sstream>
#include "qjf/linalg.hpp"

namespace qjf {

void QJacPoly::prune() {
    for (auto it = terms.begin(); it != terms.end();)
        it = qjf::is_zero(it->second) ? terms.erase(it) : std::next(it);
}

QJacPoly operator+(const QJacPoly& a, const QJacPoly& b) {
    QJacPoly r = a;
    for (const auto& [m, c] : b.terms) r.terms[m] += c;
    r.prune();
    return r;
}

QJacPoly operator-(const QJacPoly& a, const QJacPoly& b) {
    QJacPoly r = a;
    for (const auto& [m, c] : b.terms) r.terms[m] -= c;
    r.prune();
    return r;
}

QJacPoly operator*(const QJacPoly& a, const QJacPoly& b) {
    QJacPoly r;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Mono m;
            for (int i = 0; i < 6; ++i) m[i] = ma[i] + mb[i];
            r.terms[m] += ca * cb;
        }
    r.prune();
    return r;
}

QJacPoly QJacPoly::operator-() const {
    QJacPoly r = *this;
    for (auto& [m, c] : r.terms) c = -c;
    return r;
}

QJacPoly QJacPoly::scaled(const Rat& k) const {
    if (qjf::is_zero(k)) return QJacPoly();
    QJacPoly r = *this;
    for (auto& [m, c] : r.terms) c *= k;
    return r;
}

QJacPoly QJacPoly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative power of a ring element");
    QJacPoly r(Rat(1));
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
}

std::optional<std::pair<int, int>> QJacPoly::bigrade() const {
    std::optional<std::pair<int, int>> g;
    for (const auto& [m, c] : terms) {
        std::pair<int, int> mg{mono_weight(m), mono_index2(m)};
        if (!g) g = mg;
        else if (*g != mg) return std::nullopt;
    }
    if (!g) g = {0, 0};  // zero is homogeneous of any grade; report (0,0)
    return g;
}

std::string QJacPoly::str() const {
    if (terms.empty()) return "0";
    static const char* names[6] = {"Theta", "A", "G2", "P", "Pp", "G4"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms) {
        Rat a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool has_var = false;
        for (int i = 0; i < 6; ++i) has_var = has_var || m[i];
        if (a != 1 || !has_var) os << a.get_str();
        bool need_star = (a != 1 || !has_var);
        for (int i = 0; i < 6; ++i) {
            if (!m[i]) continue;
            if (need_star) os << "*";
            os << names[i];
            if (m[i] > 1) os << "^" << m[i];
            need_star = true;
        }
    }
    return os.str();
}

std::string MeroQJac::str() const {
    if (num.is_zero_p()) return "0";
    std::string s = num.str();
    if (theta_pow == 0 && delta_pow == 0) return s;
    std::ostringstream os;
    os << "(" << s << ")";
    if (theta_pow) {
        os << "/Theta";
        if (theta_pow > 1) os << "^" << theta_pow;
    }
    if (delta_pow) {
        os << "/Delta";
        if (delta_pow > 1) os << "^" << delta_pow;
    }
    return os.str();
}

QJacPoly partial_g2(const QJacPoly& f) {
    QJacPoly r;
    for (const auto& [m, c] : f.terms) {
        if (!m[2]) continue;
        Mono mm = m;
        mm[2] -= 1;
        r.terms[mm] += c * m[2];
    }
    r.prune();
    return r;
}

QJacPoly partial_a(const QJacPoly& f) {
    QJacPoly r;
    for (const auto& [m, c] : f.terms) {
        if (!m[1]) continue;
        Mono mm = m;
        mm[1] -= 1;
        r.terms[mm] += c * m[1];
    }
    r.prune();
    return r;
}

std::vector<Mono> graded_monomials(int weight, int index2) {
    std::vector<Mono> out;
    if (index2 < 0) return out;
    int wr = weight + index2;
    if (wr < 0) return out;
    for (int e4 = 0; 4 * e4 <= wr; ++e4)
        for (int epp = 0; 4 * e4 + 3 * epp <= wr; ++epp)
            for (int ep = 0; 4 * e4 + 3 * epp + 2 * ep <= wr; ++ep)
                for (int eg2 = 0; 4 * e4 + 3 * epp + 2 * ep + 2 * eg2 <= wr; ++eg2) {
                    int ea = wr - 4 * e4 - 3 * epp - 2 * ep - 2 * eg2;
                    out.push_back(Mono{{index2, ea, eg2, ep, epp, e4}});
                }
    return out;
}

namespace {

struct EvalCache {
    int qorder = -1;
    std::map<std::pair<int, int>, FourierSeries> pows;
};

EvalCache& ecache() {
    static EvalCache c;
    return c;
}

const FourierSeries& gen_pow(int g, int e, int qorder) {
    auto& c = ecache();
    if (c.qorder != qorder) {
        c.pows.clear();
        c.qorder = qorder;
    }
    auto key = std::make_pair(g, e);
    auto it = c.pows.find(key);
    if (it != c.pows.end()) return it->second;
    FourierSeries v = (e == 1)
                          ? generator_expansion(static_cast<Gen>(g), qorder)
                          : gen_pow(g, e - 1, qorder) * generator_expansion(static_cast<Gen>(g), qorder);
    return c.pows.emplace(key, std::move(v)).first->second;
}

}  // namespace

FourierSeries evaluate(const QJacPoly& f, int qorder) {
    FourierSeries r(0, qorder);
    for (const auto& [m, c] : f.terms) {
        FourierSeries t = FourierSeries::constant(RationalFunction(c), qorder);
        for (int g = 0; g < 6; ++g)
            if (m[g]) t = t * gen_pow(g, m[g], qorder);
        r = r + t;
    }
    return r;
}

std::optional<std::pair<Rat, Rat>> MeroQJac::bigrade() const {
    auto g = num.bigrade();
    if (!g) return std::nullopt;
    Rat w = Rat(g->first) + theta_pow - 12 * delta_pow;
    Rat i = Rat(g->second - theta_pow) / 2;
    return std::make_pair(w, i);
}

namespace {

QJacPoly lift_num(const MeroQJac& f, int tp, int dp) {
    QJacPoly n = f.num;
    if (tp > f.theta_pow) n = n * QJacPoly::gen(Gen::Theta, tp - f.theta_pow);
    for (int i = f.delta_pow; i < dp; ++i) n = n * delta_polynomial();
    return n;
}

}  // namespace

MeroQJac operator+(const MeroQJac& a, const MeroQJac& b) {
    int tp = std::max(a.theta_pow, b.theta_pow);
    int dp = std::max(a.delta_pow, b.delta_pow);
    return MeroQJac(lift_num(a, tp, dp) + lift_num(b, tp, dp), tp, dp);
}

MeroQJac operator-(const MeroQJac& a, const MeroQJac& b) { return a + (-b); }

MeroQJac operator*(const MeroQJac& a, const MeroQJac& b) {
    return MeroQJac(a.num * b.num, a.theta_pow + b.theta_pow, a.delta_pow + b.delta_pow);
}

bool operator==(const MeroQJac& a, const MeroQJac& b) {
    int tp = std::max(a.theta_pow, b.theta_pow);
    int dp = std::max(a.delta_pow, b.delta_pow);
    return lift_num(a, tp, dp) == lift_num(b, tp, dp);
}

FourierSeries evaluate(const MeroQJac& f, int qorder) {
    int qi = qorder + 2 * f.delta_pow;
    FourierSeries r = evaluate(f.num, qi);
    if (f.theta_pow)
        r = r * gen_pow(static_cast<int>(Gen::Theta), f.theta_pow, qi).inverse();
    if (f.delta_pow)
        r = r * discriminant_series(qi).pow(f.delta_pow).inverse();
    if (r.trunc > qorder) r = r.truncated(qorder);
    return r;
}

MeroQJac fit(const FourierSeries& target, int weight, int index2, int theta_pow,
             int delta_pow, int margin) {
    int wt_num = weight - theta_pow + 12 * delta_pow;
    int i2_num = index2 + theta_pow;
    std::vector<Mono> mons = graded_monomials(wt_num, i2_num);
    size_t dim = mons.size();

    // multiply the poles back in so both sides are polynomial in the generators
    FourierSeries tp = target;
    if (theta_pow)
        tp = tp * gen_pow(static_cast<int>(Gen::Theta), theta_pow, target.trunc);
    if (delta_pow)
        tp = tp * discriminant_series(target.trunc + 1).pow(delta_pow);

    if (dim == 0) {
        if (tp.all_zero()) return MeroQJac(QJacPoly(), theta_pow, delta_pow);
        throw FitError(FitError::Kind::no_solution,
                       "no monomials exist at the requested weight and index");
    }

    int qmax = tp.trunc;
    std::vector<FourierSeries> ev;
    ev.reserve(dim);
    for (const auto& m : mons) {
        QJacPoly p;
        p.terms[m] = 1;
        ev.push_back(evaluate(p, qmax));
    }

    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    for (int n = 0; n <= qmax; ++n) {
        // common denominator of this q-coefficient across all columns
        ZPoly lden = ZPoly::one();
        auto fold = [&](const RationalFunction& v) {
            if (v.is_zero()) return;
            ZPoly g = poly_gcd(lden, v.den);
            lden = lden * v.den.div_exact(g);
        };
        for (const auto& e : ev) fold(e.coeff(n));
        RationalFunction tv = (n >= tp.qshift) ? tp.coeff(n) : RationalFunction();
        fold(tv);
        auto cleared = [&](const RationalFunction& v) {
            // v * lden as a vector of rational coefficients
            std::vector<Rat> out;
            if (v.is_zero()) return out;
            ZPoly p = v.num * lden.div_exact(v.den);
            out.reserve(p.c.size());
            for (const auto& x : p.c) out.push_back(v.scale * Rat(x));
            return out;
        };
        std::vector<std::vector<Rat>> cols(dim);
        size_t maxdeg = 0;
        for (size_t m = 0; m < dim; ++m) {
            cols[m] = cleared(ev[m].coeff(n));
            maxdeg = std::max(maxdeg, cols[m].size());
        }
        std::vector<Rat> rv = cleared(tv);
        maxdeg = std::max(maxdeg, rv.size());
        for (size_t k = 0; k < maxdeg; ++k) {
            std::vector<Rat> row(dim, Rat(0));
            bool nonzero = false;
            for (size_t m = 0; m < dim; ++m) {
                if (k < cols[m].size()) row[m] = cols[m][k];
                nonzero = nonzero || !qjf::is_zero(row[m]);
            }
            Rat r = (k < rv.size()) ? rv[k] : Rat(0);
            nonzero = nonzero || !qjf::is_zero(r);
            if (!nonzero) continue;
            rows.push_back(std::move(row));
            rhs.push_back(r);
        }
    }

    if (rows.size() < dim + static_cast<size_t>(margin)) {
        std::ostringstream os;
        os << "insufficient truncation: " << rows.size() << " conditions for " << dim
           << " unknowns with margin " << margin
           << "; extend the target to roughly q^" << (qmax + margin) << " or beyond";
        throw FitError(FitError::Kind::insufficient, os.str());
    }

    SolveResult sol = solve_exact(std::move(rows), std::move(rhs));
    if (sol.status == SolveStatus::inconsistent)
        throw FitError(FitError::Kind::no_solution,
                       "no solution: the series is not of the requested shape");
    if (sol.status == SolveStatus::underdetermined)
        throw FitError(FitError::Kind::underdetermined,
                       "underdetermined fit: conditions do not pin every monomial");

    QJacPoly numpoly;
    for (size_t m = 0; m < dim; ++m)
        if (!qjf::is_zero(sol.x[m])) numpoly.terms[mons[m]] = sol.x[m];
    MeroQJac res(std::move(numpoly), theta_pow, delta_pow);

    // paranoid cross-check on the original series
    if (!(evaluate(res, target.trunc) == target))
        throw FitError(FitError::Kind::no_solution,
                       "fit verification failed against the target series");
    return res;
}

const QJacPoly& g6_polynomial() {
    static QJacPoly p = fit(eisenstein(6, 8), 6, 0, 0, 0).num;
    return p;
}

const QJacPoly& delta_polynomial() {
    static QJacPoly p = fit(discriminant_series(14), 12, 0, 0, 0).num;
    return p;
}

namespace {

std::map<int, QJacPoly> build_images() {
    std::map<int, QJacPoly> im;
    auto put = [&](DOp op, Gen g, QJacPoly p) {
        im[static_cast<int>(op) * 8 + static_cast<int>(g)] = std::move(p);
    };
    QJacPoly Th = QJacPoly::gen(Gen::Theta);
    QJacPoly Av = QJacPoly::gen(Gen::A);
    QJacPoly G2v = QJacPoly::gen(Gen::G2);
    QJacPoly Pv = QJacPoly::gen(Gen::P);
    QJacPoly Ppv = QJacPoly::gen(Gen::Pp);
    QJacPoly G4v = QJacPoly::gen(Gen::G4);

    put(DOp::Dp, Gen::Theta, Th * Av);
    put(DOp::Dp, Gen::A, -Pv - G2v.scaled(Rat(2)));
    put(DOp::Dp, Gen::G2, QJacPoly());
    put(DOp::Dp, Gen::P, Ppv);
    put(DOp::Dp, Gen::G4, QJacPoly());
    put(DOp::Dtau, Gen::G2,
        (G2v * G2v).scaled(Rat(-2)) + G4v.scaled(Rat(5) / 6));

    // the remaining images are recognized from the expansions once and reused
    const int bq = 10;
    put(DOp::Dp, Gen::Pp,
        fit(derive_p(generator_expansion(Gen::Pp, bq)), 4, 0, 0, 0).num);
    put(DOp::Dtau, Gen::Theta,
        fit(generator_expansion(Gen::Theta, bq).derive_q(), 1, 1, 0, 0).num);
    put(DOp::Dtau, Gen::A,
        fit(generator_expansion(Gen::A, bq).derive_q(), 3, 0, 0, 0).num);
    put(DOp::Dtau, Gen::P,
        fit(generator_expansion(Gen::P, bq).derive_q(), 4, 0, 0, 0).num);
    put(DOp::Dtau, Gen::Pp,
        fit(generator_expansion(Gen::Pp, bq).derive_q(), 5, 0, 0, 0).num);
    put(DOp::Dtau, Gen::G4,
        fit(generator_expansion(Gen::G4, bq).derive_q(), 6, 0, 0, 0).num);
    return im;
}

std::map<int, QJacPoly>& images() {
    static std::map<int, QJacPoly> im = build_images();
    return im;
}

// D Theta / Theta as a polynomial
QJacPoly theta_log_image(DOp op) {
    QJacPoly out;
    for (const auto& [m, c] : generator_image(Gen::Theta, op).terms) {
        if (m[0] < 1) throw std::logic_error("theta image must be divisible by theta");
        Mono mm = m;
        mm[0] -= 1;
        out.terms[mm] = c;
    }
    return out;
}

}  // namespace

const QJacPoly& generator_image(Gen g, DOp op) {
    return images().at(static_cast<int>(op) * 8 + static_cast<int>(g));
}

QJacPoly derived_derivative(const QJacPoly& f, DOp op) {
    QJacPoly res;
    for (const auto& [m, c] : f.terms)
        for (int g = 0; g < 6; ++g) {
            if (!m[g]) continue;
            Mono mm = m;
            mm[g] -= 1;
            QJacPoly base;
            base.terms[mm] = c * m[g];
            res = res + base * generator_image(static_cast<Gen>(g), op);
        }
    return res;
}

MeroQJac derived_derivative(const MeroQJac& f, DOp op) {
    QJacPoly n = derived_derivative(f.num, op);
    if (f.theta_pow)
        n = n - f.num * theta_log_image(op).scaled(Rat(f.theta_pow));
    if (f.delta_pow && op == DOp::Dtau)
        n = n + f.num * QJacPoly::gen(Gen::G2).scaled(Rat(24) * f.delta_pow);
    return MeroQJac(std::move(n), f.theta_pow, f.delta_pow);
}

bool commutator_check(const QJacPoly& f) {
    auto bg = f.bigrade();
    if (!bg) throw std::invalid_argument("commutator check needs a bigraded polynomial");
    auto [w, i2] = *bg;
    auto dtau = [](const QJacPoly& x) { return derived_derivative(x, DOp::Dtau); };
    auto dp = [](const QJacPoly& x) { return derived_derivative(x, DOp::Dp); };

    QJacPoly r1 = partial_g2(dtau(f)) - dtau(partial_g2(f)) + f.scaled(Rat(2 * w));
    QJacPoly r2 = partial_a(dp(f)) - dp(partial_a(f)) - f.scaled(Rat(i2));
    QJacPoly r3 = partial_g2(dp(f)) - dp(partial_g2(f)) + partial_a(f).scaled(Rat(2));
    QJacPoly r4 = partial_a(dtau(f)) - dtau(partial_a(f)) - dp(f);
    return r1.is_zero_p() && r2.is_zero_p() && r3.is_zero_p() && r4.is_zero_p();
}

}  // namespace qjf
