#include "qjf/cohomology.hpp"
#include <map>
#include <stdexcept>
#include "qjf/generators.hpp"
#include "qjf/linalg.hpp"

namespace qjf {

bool CohClass::is_zero_c() const {
    for (const auto& v : c)
        if (!qjf::is_zero(v)) return false;
    return true;
}

CohClass CohClass::scaled(const Rat& k) const {
    CohClass r = *this;
    for (auto& v : r.c) v *= k;
    return r;
}

CohClass operator+(const CohClass& a, const CohClass& b) {
    CohClass r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

CohClass operator-(const CohClass& a, const CohClass& b) {
    CohClass r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}

bool BCoh::is_zero_c() const {
    for (const auto& v : c)
        if (!qjf::is_zero(v)) return false;
    return true;
}

BCoh operator+(const BCoh& a, const BCoh& b) {
    BCoh r = a;
    for (size_t i = 0; i < 3; ++i) r.c[i] += b.c[i];
    return r;
}

bool KTensor2::is_zero_t() const {
    for (const auto& row : m)
        for (const auto& v : row)
            if (!qjf::is_zero(v)) return false;
    return true;
}

KTensor2 operator+(const KTensor2& a, const KTensor2& b) {
    KTensor2 r = a;
    for (size_t i = 0; i < r.m.size(); ++i)
        for (size_t j = 0; j < r.m[i].size(); ++j) r.m[i][j] += b.m[i][j];
    return r;
}

KTensor2 operator-(const KTensor2& a, const KTensor2& b) {
    KTensor2 r = a;
    for (size_t i = 0; i < r.m.size(); ++i)
        for (size_t j = 0; j < r.m[i].size(); ++j) r.m[i][j] -= b.m[i][j];
    return r;
}

CohClass Geometry::basis(int i) const {
    CohClass r;
    r.c[static_cast<size_t>(i)] = 1;
    return r;
}

CohClass Geometry::mul(const CohClass& a, const CohClass& b) const {
    CohClass r;
    for (int i = 0; i < dim; ++i) {
        if (qjf::is_zero(a.c[static_cast<size_t>(i)])) continue;
        for (int j = 0; j < dim; ++j) {
            if (qjf::is_zero(b.c[static_cast<size_t>(j)])) continue;
            Rat f = a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)];
            const CohClass& p = mult[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (int k = 0; k < dim; ++k)
                if (!qjf::is_zero(p.c[static_cast<size_t>(k)]))
                    r.c[static_cast<size_t>(k)] += f * p.c[static_cast<size_t>(k)];
        }
    }
    return r;
}

Rat Geometry::integral(const CohClass& a) const { return a.c[11]; }

Rat Geometry::integral_b(const BCoh& a) const { return a.c[2]; }

BCoh Geometry::mul_b(const BCoh& a, const BCoh& b) const {
    BCoh r;
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; i + j < 3; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

BCoh Geometry::push(const CohClass& a) const {
    BCoh r;
    for (size_t x = 0; x < 3; ++x) r.c[x] = a.c[4 * x + 3];
    return r;
}

CohClass Geometry::pull(const BCoh& a) const {
    CohClass r;
    for (size_t x = 0; x < 3; ++x) r.c[4 * x] = a.c[x];
    return r;
}

CohClass Geometry::pushpull(const CohClass& a) const { return pull(push(a)); }

bool Geometry::homogeneous(const CohClass& a, int* deg_out, int* wt_out) const {
    int d = -1, w = 2;
    for (int i = 0; i < dim; ++i) {
        if (qjf::is_zero(a.c[static_cast<size_t>(i)])) continue;
        if (d < 0) {
            d = degree[static_cast<size_t>(i)];
            w = wt[static_cast<size_t>(i)];
        } else if (d != degree[static_cast<size_t>(i)] || w != wt[static_cast<size_t>(i)]) {
            return false;
        }
    }
    if (d < 0) d = 0, w = 0;  // zero class
    if (deg_out) *deg_out = d;
    if (wt_out) *wt_out = w;
    return true;
}

std::string Geometry::str(const CohClass& a) const {
    std::string s;
    for (int i = 0; i < dim; ++i) {
        const Rat& v = a.c[static_cast<size_t>(i)];
        if (qjf::is_zero(v)) continue;
        if (!s.empty()) s += " + ";
        s += v.get_str() + "*" + basis_name[static_cast<size_t>(i)];
    }
    return s.empty() ? "0" : s;
}

// sparse class on the triple product
using Cube = std::map<std::array<int, 3>, Rat>;

static Cube cube_tensor(const CohClass& a, const CohClass& b, const CohClass& c) {
    Cube r;
    for (int i = 0; i < Geometry::dim; ++i) {
        if (qjf::is_zero(a.c[static_cast<size_t>(i)])) continue;
        for (int j = 0; j < Geometry::dim; ++j) {
            if (qjf::is_zero(b.c[static_cast<size_t>(j)])) continue;
            for (int k = 0; k < Geometry::dim; ++k) {
                if (qjf::is_zero(c.c[static_cast<size_t>(k)])) continue;
                r[{i, j, k}] += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)] *
                                c.c[static_cast<size_t>(k)];
            }
        }
    }
    return r;
}

static Cube cube_product(const Geometry& g, const Cube& A, const Cube& B) {
    Cube r;
    for (const auto& [ea, va] : A)
        for (const auto& [eb, vb] : B) {
            int sgn = 1;
            sgn *= Geometry::sign_pow(g.parity[static_cast<size_t>(ea[1])],
                                      g.parity[static_cast<size_t>(eb[0])]);
            sgn *= Geometry::sign_pow(g.parity[static_cast<size_t>(ea[2])],
                                      g.parity[static_cast<size_t>(eb[0])]);
            sgn *= Geometry::sign_pow(g.parity[static_cast<size_t>(ea[2])],
                                      g.parity[static_cast<size_t>(eb[1])]);
            const CohClass& p0 = g.mult[static_cast<size_t>(ea[0])][static_cast<size_t>(eb[0])];
            const CohClass& p1 = g.mult[static_cast<size_t>(ea[1])][static_cast<size_t>(eb[1])];
            const CohClass& p2 = g.mult[static_cast<size_t>(ea[2])][static_cast<size_t>(eb[2])];
            Rat f = va * vb * Rat(sgn);
            for (int i = 0; i < Geometry::dim; ++i) {
                if (qjf::is_zero(p0.c[static_cast<size_t>(i)])) continue;
                for (int j = 0; j < Geometry::dim; ++j) {
                    if (qjf::is_zero(p1.c[static_cast<size_t>(j)])) continue;
                    for (int k = 0; k < Geometry::dim; ++k) {
                        if (qjf::is_zero(p2.c[static_cast<size_t>(k)])) continue;
                        Rat w = f * p0.c[static_cast<size_t>(i)] * p1.c[static_cast<size_t>(j)] *
                                p2.c[static_cast<size_t>(k)];
                        if (!qjf::is_zero(w)) r[{i, j, k}] += w;
                    }
                }
            }
        }
    for (auto it = r.begin(); it != r.end();)
        it = qjf::is_zero(it->second) ? r.erase(it) : std::next(it);
    return r;
}

Geometry build_p2xe() {
    Geometry g;
    static const int fdeg[4] = {0, 1, 1, 2};
    static const char* fname[4] = {"", "a", "b", "pt"};
    for (int a = 0; a < 3; ++a)
        for (int e = 0; e < 4; ++e) {
            g.degree.push_back(2 * a + fdeg[e]);
            g.parity.push_back(fdeg[e] & 1);
            std::string base = (a == 0) ? "1" : (a == 1 ? "H" : "H^2");
            std::string nm = fname[e][0] ? ((a == 0 ? "" : base + "*") + fname[e]) : base;
            g.basis_name.push_back(nm);
        }

    // fiber products: alpha*beta = pt = -beta*alpha, everything else by degree
    auto fiber_mul = [](int e, int f, int& sign) -> int {
        sign = 1;
        if (e == 0) return f;
        if (f == 0) return e;
        if (e == 1 && f == 2) return 3;
        if (e == 2 && f == 1) {
            sign = -1;
            return 3;
        }
        return -1;
    };
    g.mult.assign(Geometry::dim, std::vector<CohClass>(Geometry::dim));
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j) {
            int a = i / 4, e = i % 4, b = j / 4, f = j % 4;
            CohClass prod;
            if (a + b <= 2) {
                int sign = 1;
                int ef = fiber_mul(e, f, sign);
                if (ef >= 0) prod.c[static_cast<size_t>(4 * (a + b) + ef)] = sign;
            }
            g.mult[static_cast<size_t>(i)][static_cast<size_t>(j)] = prod;
        }

    g.W = g.basis(3);
    g.KX = g.basis(4).scaled(Rat(-3));
    g.c2TX = g.basis(8).scaled(Rat(3));
    g.c2TX_over_24 = g.c2TX.scaled(Rat(1) / Rat(24));
    g.c2B.c[2] = 3;
    g.pack = NumericPack{3, 0, 0};

    for (int a = 0; a <= 2; ++a) {
        BCoh x, y;
        x.c[static_cast<size_t>(a)] = 1;
        y.c[static_cast<size_t>(2 - a)] = 1;
        g.deltaB.emplace_back(x, y);
    }

    // diagonal of the square from its reproduction property
    for (int j = 0; j < Geometry::dim; ++j) {
        std::vector<std::vector<Rat>> rows(Geometry::dim, std::vector<Rat>(Geometry::dim, Rat(0)));
        std::vector<Rat> rhs(Geometry::dim, Rat(0));
        for (int k = 0; k < Geometry::dim; ++k) {
            for (int i = 0; i < Geometry::dim; ++i) {
                Rat pik = g.integral(g.mult[static_cast<size_t>(i)][static_cast<size_t>(k)]);
                int sgn = Geometry::sign_pow(g.parity[static_cast<size_t>(j)],
                                             g.parity[static_cast<size_t>(k)]);
                rows[static_cast<size_t>(k)][static_cast<size_t>(i)] = pik * Rat(sgn);
            }
            rhs[static_cast<size_t>(k)] = (j == k) ? Rat(1) : Rat(0);
        }
        SolveResult sol = solve_exact(rows, rhs);
        if (sol.status != SolveStatus::unique)
            throw std::logic_error("intersection pairing is degenerate");
        for (int i = 0; i < Geometry::dim; ++i)
            g.deltaX.m[static_cast<size_t>(i)][static_cast<size_t>(j)] = sol.x[static_cast<size_t>(i)];
    }

    // weight eigenvalues of [W cup -, pullback pushforward]
    for (int i = 0; i < Geometry::dim; ++i) {
        CohClass e = g.basis(i);
        CohClass u = g.mul(g.W, g.pushpull(e)) - g.pushpull(g.mul(g.W, e));
        int lambda = 0;
        bool found = false;
        for (int k = 0; k < Geometry::dim && !found; ++k)
            if (!qjf::is_zero(u.c[static_cast<size_t>(k)])) {
                if (k != i) throw std::logic_error("basis class is not a weight eigenvector");
                Rat lam = u.c[static_cast<size_t>(k)];
                if (lam != Rat(1) && lam != Rat(-1))
                    throw std::logic_error("weight eigenvalue outside {-1,0,1}");
                lambda = (lam == Rat(1)) ? 1 : -1;
                found = true;
            }
        if (found && !(u == e.scaled(Rat(lambda))))
            throw std::logic_error("basis class is not a weight eigenvector");
        g.wt.push_back(lambda);
    }

    // correspondence class on the triple product
    CohClass one = g.basis(0);
    Cube corr;
    auto add_cube = [&](const Cube& c, const Rat& f) {
        for (const auto& [e, v] : c) {
            corr[e] += f * v;
            if (qjf::is_zero(corr[e])) corr.erase(e);
        }
    };
    Cube dx12, dx13, dx23;
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j) {
            const Rat& v = g.deltaX.m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (qjf::is_zero(v)) continue;
            dx12[{i, j, 0}] += v;
            dx13[{i, 0, j}] += v;
            dx23[{0, i, j}] += v;
        }
    Cube db12, db13;
    for (const auto& [x, y] : g.deltaB) {
        Cube tx = cube_tensor(g.pull(x), g.pull(y), one);
        for (const auto& [e, v] : tx) db12[e] += v;
        Cube ty = cube_tensor(g.pull(x), one, g.pull(y));
        for (const auto& [e, v] : ty) db13[e] += v;
    }
    add_cube(cube_product(g, dx12, db13), Rat(1));
    add_cube(cube_product(g, dx13, db12), Rat(1));
    add_cube(cube_product(g, dx23, db12), Rat(1));

    Cube db123 = cube_product(g, db12, db13);  // small diagonal of the triple base product
    for (int slot = 0; slot < 3; ++slot) {
        CohClass w1 = (slot == 0) ? g.W : one;
        CohClass w2 = (slot == 1) ? g.W : one;
        CohClass w3 = (slot == 2) ? g.W : one;
        add_cube(cube_product(g, db123, cube_tensor(w1, w2, w3)), Rat(-1));
    }
    for (const auto& [e, v] : corr) g.corr.emplace_back(e, v);
    return g;
}

static Cube corr_cube(const Geometry& g) {
    Cube c;
    for (const auto& [e, v] : g.corr) c[e] = v;
    return c;
}

KTensor2 e_corr(const Geometry& g, const CohClass& gamma) {
    Cube lhs = cube_tensor(gamma, g.basis(0), g.basis(0));
    Cube prod = cube_product(g, lhs, corr_cube(g));
    KTensor2 r;
    for (const auto& [e, v] : prod)
        if (e[0] == 11) r.m[static_cast<size_t>(e[1])][static_cast<size_t>(e[2])] += v;
    return r;
}

CohClass e_corr(const Geometry& g, const CohClass& gamma, const CohClass& gamma2) {
    Cube lhs = cube_tensor(gamma, gamma2, g.basis(0));
    Cube prod = cube_product(g, lhs, corr_cube(g));
    CohClass r;
    for (const auto& [e, v] : prod)
        if (e[0] == 11 && e[1] == 11) r.c[static_cast<size_t>(e[2])] += v;
    return r;
}

CohClass e_corr_expanded(const Geometry& g, const CohClass& gamma, const CohClass& gamma2) {
    CohClass r = g.pushpull(g.mul(gamma, gamma2));
    r = r + g.mul(gamma, g.pushpull(gamma2));
    r = r + g.mul(g.pushpull(gamma), gamma2);
    BCoh pg = g.push(gamma), pg2 = g.push(gamma2);
    r = r - g.pull(g.mul_b(g.push(g.mul(g.W, gamma)), pg2));
    r = r - g.pull(g.mul_b(pg, g.push(g.mul(gamma2, g.W))));
    r = r - g.mul(g.pull(g.mul_b(pg, pg2)), g.W);
    return r;
}

FourierSeries normalization_product(const NumericPack& pack, int qorder, int /*porder*/,
                                    bool pi_pt) {
    long e0 = -(pack.eB + pack.c1N_c1TB + pack.c1N_sq);
    FourierSeries base = product_builder([&](int, int) { return e0; }, qorder, 0);
    long c3 = -60 * pack.c1N_sq;
    if (pi_pt || c3 == 0) return base;

    // log of the p-dependent factor: sum_k (c3/k) p^k/(1-p^k)^2 q^k/(1-q^k)
    FourierSeries lg(0, qorder);
    for (int k = 1; k <= qorder; ++k) {
        ZPoly den = (ZPoly::one() - ZPoly::monomial(2 * k)) * (ZPoly::one() - ZPoly::monomial(2 * k));
        RationalFunction term(ZPoly::monomial(2 * k), den, Rat(c3) / Rat(k));
        for (int n = k; n <= qorder; n += k) lg.at(n) += term;
    }
    // exp by the derivative recurrence n F_n = sum_j j L_j F_{n-j}
    FourierSeries expf(0, qorder);
    expf.at(0) = RationalFunction(Rat(1));
    for (int n = 1; n <= qorder; ++n) {
        RationalFunction acc;
        for (int j = 1; j <= n; ++j)
            acc += lg.coeff(j) * expf.coeff(n - j) * RationalFunction(Rat(j));
        expf.at(n) = acc * RationalFunction(Rat(1) / Rat(n));
    }
    return base * expf;
}

}  // namespace qjf
