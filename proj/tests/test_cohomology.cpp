#include "qjf/cohomology.hpp"
#include "doctest.h"
#include "qjf/generators.hpp"
#include "qjf/k3.hpp"

using namespace qjf;

namespace {

// indices into the basis H^a tensor {1, alpha, beta, pt}
enum { c1 = 0, ca = 1, cb = 2, cp = 3, cH = 4, cHa = 5, cHb = 6, cHp = 7,
       cH2 = 8, cH2a = 9, cH2b = 10, cH2p = 11 };

KTensor2 outer(const Geometry& g, const CohClass& x, const CohClass& y) {
    KTensor2 r;
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j)
            r.m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                x.c[static_cast<size_t>(i)] * y.c[static_cast<size_t>(j)];
    return r;
}

// pr_1^*(x) . T and pr_2^*(x) . T with Koszul signs
KTensor2 mul_left(const Geometry& g, const CohClass& x, const KTensor2& t) {
    KTensor2 r;
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j) {
            const Rat& v = t.m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (qjf::is_zero(v)) continue;
            CohClass xi = g.mul(x, g.basis(i));
            for (int k = 0; k < Geometry::dim; ++k)
                if (!qjf::is_zero(xi.c[static_cast<size_t>(k)]))
                    r.m[static_cast<size_t>(k)][static_cast<size_t>(j)] +=
                        v * xi.c[static_cast<size_t>(k)];
        }
    return r;
}

KTensor2 mul_right(const Geometry& g, const CohClass& x, const KTensor2& t) {
    KTensor2 r;
    int px = 1;
    {
        int d;
        REQUIRE(g.homogeneous(x, &d, nullptr));
        px = d & 1;
    }
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j) {
            const Rat& v = t.m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (qjf::is_zero(v)) continue;
            int sgn = (px && g.parity[static_cast<size_t>(i)]) ? -1 : 1;
            CohClass xj = g.mul(x, g.basis(j));
            for (int k = 0; k < Geometry::dim; ++k)
                if (!qjf::is_zero(xj.c[static_cast<size_t>(k)]))
                    r.m[static_cast<size_t>(i)][static_cast<size_t>(k)] +=
                        v * xj.c[static_cast<size_t>(k)] * Rat(sgn);
        }
    return r;
}

KTensor2 delta_b_pulled(const Geometry& g) {
    KTensor2 r;
    for (const auto& [x, y] : g.deltaB) r = r + outer(g, g.pull(x), g.pull(y));
    return r;
}

}  // namespace

TEST_SUITE("cohomology") {

TEST_CASE("ring structure is graded commutative with the point pairing") {
    Geometry g = build_p2xe();
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j) {
            CohClass xy = g.mul(g.basis(i), g.basis(j));
            CohClass yx = g.mul(g.basis(j), g.basis(i));
            int sgn = Geometry::sign_pow(g.parity[static_cast<size_t>(i)],
                                         g.parity[static_cast<size_t>(j)]);
            CHECK(xy == yx.scaled(Rat(sgn)));
            for (int k = 0; k < Geometry::dim; ++k)
                CHECK(g.mul(xy, g.basis(k)) == g.mul(g.basis(i), g.mul(g.basis(j), g.basis(k))));
        }
    CHECK(g.integral(g.basis(cH2p)) == Rat(1));
    CHECK(g.integral(g.mul(g.basis(cHa), g.basis(cHb))) == Rat(1));
    CHECK(g.integral(g.mul(g.basis(cHb), g.basis(cHa))) == Rat(-1));
    CHECK(g.mul(g.basis(ca), g.basis(ca)).is_zero_c());
}

TEST_CASE("fibration pushforward and the projection formula") {
    Geometry g = build_p2xe();
    for (int a = 0; a < 3; ++a) {
        BCoh ha;
        ha.c[static_cast<size_t>(a)] = 1;
        CHECK(g.push(g.mul(g.pull(ha), g.W)) == ha);
        CHECK(g.push(g.pull(ha)).is_zero_c());
    }
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < Geometry::dim; ++i) {
            BCoh ha;
            ha.c[static_cast<size_t>(a)] = 1;
            BCoh lhs = g.push(g.mul(g.pull(ha), g.basis(i)));
            BCoh rhs = g.mul_b(ha, g.push(g.basis(i)));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("weight eigenvalues split the basis into the three summands") {
    Geometry g = build_p2xe();
    for (int i : {c1, cH, cH2}) CHECK(g.wt[static_cast<size_t>(i)] == -1);
    for (int i : {cp, cHp, cH2p}) CHECK(g.wt[static_cast<size_t>(i)] == 1);
    for (int i : {ca, cb, cHa, cHb, cH2a, cH2b}) CHECK(g.wt[static_cast<size_t>(i)] == 0);
}

TEST_CASE("diagonal of the square has the expected shape") {
    Geometry g = build_p2xe();
    CHECK(g.deltaX.m[c1][cH2p] == Rat(1));
    CHECK(g.deltaX.m[cp][cH2] == Rat(1));
    CHECK(g.deltaX.m[cHp][cH] == Rat(1));
    CHECK(g.deltaX.m[ca][cH2b] + g.deltaX.m[cb][cH2a] == Rat(0));
    CHECK((g.deltaX.m[ca][cH2b] == Rat(1) || g.deltaX.m[ca][cH2b] == Rat(-1)));
    // even off-diagonal entries vanish
    CHECK(g.deltaX.m[c1][cH2] == Rat(0));
    CHECK(g.deltaX.m[cH][cH2] == Rat(0));
}

TEST_CASE("correspondence on units reproduces the diagonals") {
    Geometry g = build_p2xe();
    CHECK(e_corr(g, g.basis(c1)) == delta_b_pulled(g));
    CHECK(e_corr(g, g.W) == g.deltaX);
}

TEST_CASE("correspondence on the orthogonal part inserts the class on either side") {
    Geometry g = build_p2xe();
    for (int i : {ca, cb, cHa, cHb, cH2a, cH2b}) {
        CohClass gamma = g.basis(i);
        KTensor2 expect = mul_left(g, gamma, delta_b_pulled(g)) +
                          mul_right(g, gamma, delta_b_pulled(g));
        CHECK(e_corr(g, gamma) == expect);
    }
}

TEST_CASE("correspondence pair identities") {
    Geometry g = build_p2xe();
    for (int i = 0; i < Geometry::dim; ++i) {
        CohClass gamma = g.basis(i);
        CHECK(e_corr(g, gamma, g.basis(c1)) == g.pushpull(gamma));
        CHECK(e_corr(g, g.W, gamma) == gamma);
        CHECK(e_corr(g, gamma, g.W) == gamma);
    }
}

TEST_CASE("pair action agrees with its pushforward expansion and is graded symmetric") {
    Geometry g = build_p2xe();
    for (int i = 0; i < Geometry::dim; ++i)
        for (int j = 0; j < Geometry::dim; ++j) {
            CohClass direct = e_corr(g, g.basis(i), g.basis(j));
            CHECK(direct == e_corr_expanded(g, g.basis(i), g.basis(j)));
            // swapping the two slots costs the usual sign when both classes are odd
            int sgn = Geometry::sign_pow(g.parity[static_cast<size_t>(i)],
                                         g.parity[static_cast<size_t>(j)]);
            CHECK(direct == e_corr(g, g.basis(j), g.basis(i)).scaled(Rat(sgn)));
        }
}

TEST_CASE("base linearity of the correspondence") {
    Geometry g = build_p2xe();
    CohClass ph = g.basis(cH);
    for (int i = 0; i < Geometry::dim; ++i) {
        CohClass gamma = g.basis(i);
        KTensor2 lhs = e_corr(g, g.mul(ph, gamma));
        KTensor2 rhs = mul_left(g, ph, e_corr(g, gamma));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("hand-checked correspondence values") {
    Geometry g = build_p2xe();
    KTensor2 e = e_corr(g, g.basis(cH2p));
    KTensor2 expect;
    expect.m[cH2p][cH2] = 1;
    expect.m[cH2][cH2p] = 1;
    expect.m[cH2a][cH2b] = -1;
    expect.m[cH2b][cH2a] = 1;
    CHECK(e == expect);

    CHECK(e_corr(g, g.basis(cHp), g.basis(cHp)) == g.basis(cH2p));
    CHECK(e_corr(g, g.basis(cH2p), g.basis(cHp)).is_zero_c());
    CHECK(e_corr(g, g.basis(cH2), g.basis(cH2)).is_zero_c());
}

TEST_CASE("chern data of the product geometry") {
    Geometry g = build_p2xe();
    CHECK(g.KX == g.basis(cH).scaled(Rat(-3)));
    CHECK(g.c2TX == g.basis(cH2).scaled(Rat(3)));
    CHECK(g.integral(g.mul(g.c2TX, g.W)) == Rat(3));
    CHECK(g.pack.eB == 3);
    CHECK(g.pack.c1N_c1TB == 0);
    CHECK(g.pack.c1N_sq == 0);
    int d = 0, w = 0;
    CHECK(g.homogeneous(g.basis(cHa), &d, &w));
    CHECK(d == 3);
    CHECK(w == 0);
    CHECK(!g.homogeneous(g.basis(c1) + g.basis(cH)));
}

TEST_CASE("degree zero series for the product geometry") {
    Geometry g = build_p2xe();
    FourierSeries n = normalization_product(g.pack, 20);
    FourierSeries expect = product_builder([](int, int) { return -3L; }, 20, 0);
    CHECK(n == expect);
    NumericPack trivial;
    CHECK(normalization_product(trivial, 8) == FourierSeries::constant(RationalFunction(Rat(1)), 8));
}

TEST_CASE("log derivative of the degree zero series") {
    for (NumericPack pack : {NumericPack{3, 0, 0}, NumericPack{2, 3, 0}}) {
        FourierSeries n = normalization_product(pack, 16);
        FourierSeries g2p = eisenstein(2, 16) +
                            FourierSeries::constant(RationalFunction(Rat(1) / Rat(24)), 16);
        FourierSeries rhs = (n * g2p).scaled(RationalFunction(Rat(pack.eB + pack.c1N_c1TB)));
        CHECK(n.derive_q() == rhs);
    }
}

TEST_CASE("p-dependent degree zero factor against the truncated product") {
    NumericPack pack{1, -1, 1};  // c3 = -60
    int L = 4, qo = 5;
    FourierSeries closed = normalization_product(pack, qo);
    FourierSeries trunc = product_builder(
        [&](int l, int m) {
            (void)m;
            return l == 0 ? -(pack.eB + pack.c1N_c1TB + pack.c1N_sq) : 60L * l;
        },
        qo, L);
    for (int n = 0; n <= qo; ++n) {
        std::vector<Rat> a = s_expansion(closed.coeff(n), 2 * L);
        std::vector<Rat> b = s_expansion(trunc.coeff(n), 2 * L);
        CHECK(a == b);
    }
    CHECK(normalization_product(pack, qo, 0, true) ==
          product_builder([&](int, int) { return -(pack.eB + pack.c1N_c1TB + pack.c1N_sq); }, qo, 0));
}

}  // TEST_SUITE
