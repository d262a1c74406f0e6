#include "qjf/hae.hpp"

#include <stdexcept>

#include "doctest.h"
#include "qjf/generators.hpp"

using namespace qjf;

namespace {

CorrKey make_key(int beta, std::vector<std::pair<int, int>> v) {
    CorrKey k;
    k.beta = beta;
    k.ins = std::move(v);
    return k;
}

K3Tensor make_tensor(const std::vector<std::array<int, 2>>& entries, const Rat& perp) {
    K3Tensor T{};
    for (const auto& e : entries)
        T.m[static_cast<size_t>(e[0])][static_cast<size_t>(e[1])] += 1;
    T.perp = perp;
    return T;
}

const SeriesTable& table555() {
    static const SeriesTable t = build_table(5, 5, 5);
    return t;
}

}  // namespace

TEST_SUITE("hae") {
    TEST_CASE("low characters reduce to scalars and degree multiples") {
        Geometry g = build_p2xe();
        Insertion top{true, 2, g.basis(11)};

        Reduced base = reduce(g, {top}, 1);
        REQUIRE(base.terms.size() == 1);
        CHECK(base.terms[0].ntau == 0);
        CHECK(base.terms[0].np == 0);
        CHECK(base.terms[0].key == make_key(1, {{2, 11}}));

        // a level-0 character contributes minus its integral
        CHECK(reduce(g, {Insertion{true, 0, g.basis(11)}, top}, 1) == scaled(base, Rat(-1)));
        // level-1 characters vanish
        CHECK(reduce(g, {Insertion{true, 1, g.basis(8)}, top}, 1).terms.empty());
        // terms below the degree bound drop
        CHECK(reduce(g, {Insertion{true, 2, g.basis(0)}}, 1).terms.empty());
        // the level-2 base divisor counts the curve degree
        Reduced base2 = reduce(g, {top}, 2);
        CHECK(reduce(g, {Insertion{true, 2, g.basis(4)}, top}, 2) == scaled(base2, Rat(2)));
    }

    TEST_CASE("the fiber point divisor and the identity string become derivative words") {
        Geometry g = build_p2xe();
        Insertion top{true, 2, g.basis(11)};
        CorrKey key = make_key(1, {{2, 11}});

        Reduced rw = reduce(g, {Insertion{true, 2, g.basis(3)}, top}, 1);
        REQUIRE(rw.terms.size() == 2);
        CHECK(rw.terms[0].ntau == 0);
        CHECK(rw.terms[0].coeff == QJacPoly::gen(Gen::G2).scaled(Rat(3)));
        CHECK(rw.terms[0].key == key);
        CHECK(rw.terms[1].ntau == 1);
        CHECK(rw.terms[1].np == 0);
        CHECK(rw.terms[1].coeff == QJacPoly(Rat(1)));
        CHECK(rw.terms[1].key == key);

        Reduced rwp = reduce(g, {Insertion{false, 2, g.basis(3)}, top}, 1);
        REQUIRE(rwp.terms.size() == 2);
        CHECK(rwp.terms[0].coeff ==
              QJacPoly::gen(Gen::G2).scaled(Rat(3)) + QJacPoly(Rat(1, 8)));
        CHECK(rwp.terms[1].ntau == 1);

        Reduced rs = reduce(g, {Insertion{true, 3, g.basis(0)}, top}, 1);
        REQUIRE(rs.terms.size() == 1);
        CHECK(rs.terms[0].np == 1);
        CHECK(rs.terms[0].ntau == 0);
        CHECK(rs.terms[0].coeff == QJacPoly(Rat(1)));
        CHECK(rs.terms[0].key == key);
    }

    TEST_CASE("the level correction expands through the tangent class") {
        Geometry g = build_p2xe();
        Reduced tilde = reduce(g, {Insertion{true, 4, g.basis(0)}}, 1);
        Reduced plain = reduce(g, {Insertion{false, 4, g.basis(0)}}, 1);
        Reduced corr = scaled(reduce(g, {Insertion{false, 2, g.basis(8)}}, 1), Rat(1, 8));
        CHECK(tilde == plain + corr);
    }

    TEST_CASE("insertion order matters only through signs of odd swaps") {
        Geometry g = build_p2xe();
        Insertion a{true, 2, g.basis(5)};
        Insertion b{true, 2, g.basis(6)};
        Insertion c{true, 2, g.basis(11)};
        Reduced r1 = reduce(g, {a, b, c}, 1);
        REQUIRE(!r1.terms.empty());
        CHECK(r1 == reduce(g, {c, a, b}, 1));
        CHECK(r1 == scaled(reduce(g, {b, a, c}, 1), Rat(-1)));
        CHECK(reduce(g, {a, a, c}, 1).terms.empty());
        // even classes commute freely
        Insertion d{true, 3, g.basis(8)};
        CHECK(reduce(g, {c, d}, 1) == reduce(g, {d, c}, 1));
    }

    TEST_CASE("reference series carry the expected weight and index") {
        Geometry g = build_p2xe();
        CorrDB db = p2e_reference_db();
        CHECK(db.size() == 9);
        for (const auto& [key, val] : db) {
            int w = -3 * key.beta;
            for (const auto& [k, idx] : key.ins) w += k - 1 + g.wt[static_cast<size_t>(idx)];
            const MeroQJac& m = val.im.is_zero_m() ? val.re : val.im;
            auto bg = m.bigrade();
            REQUIRE(bg.has_value());
            CHECK(bg->first == Rat(w));
            CHECK(bg->second == Rat(key.beta * key.beta) / Rat(2));
        }
    }

    TEST_CASE("the equation system closes over the reference table") {
        Geometry g = build_p2xe();
        CorrDB db = p2e_reference_db();
        std::vector<Equation> eqs = p2e_standard_instances(g);
        CHECK(eqs.size() == 20);
        CheckReport rep = check_system(g, db, eqs);
        for (const std::string& line : rep.inconsistencies) INFO(line);
        CHECK(rep.verified == 13);
        CHECK(rep.predictions.size() == 7);
        CHECK(rep.inconsistencies.empty());
        CHECK(rep.unresolved.empty());

        auto pred = [&](const CorrKey& k) -> const IVal* {
            for (const auto& [pk, pv] : rep.predictions)
                if (pk == k) return &pv;
            return nullptr;
        };
        const IVal* p1 = pred(make_key(1, {{4, 8}}));
        REQUIRE(p1 != nullptr);
        CHECK(p1->is_zero_v());
        const IVal* p2 = pred(make_key(1, {{2, 8}, {3, 8}}));
        REQUIRE(p2 != nullptr);
        CHECK(p2->is_zero_v());
        const IVal* p6 = pred(make_key(1, {{2, 8}, {2, 8}, {2, 8}}));
        REQUIRE(p6 != nullptr);
        CHECK(p6->is_zero_v());
        const IVal* p7 = pred(make_key(2, {{2, 8}, {2, 8}, {2, 8}, {2, 8}, {3, 8}}));
        REQUIRE(p7 != nullptr);
        CHECK(p7->is_zero_v());

        QJacPoly T = QJacPoly::gen(Gen::Theta);
        const IVal* p3 = pred(make_key(1, {{2, 5}, {2, 6}, {3, 8}}));
        REQUIRE(p3 != nullptr);
        CHECK(*p3 == IVal::imag(MeroQJac(derived_derivative(T, DOp::Dp))));
        const IVal* p5 = pred(make_key(1, {{2, 7}, {2, 8}, {2, 8}}));
        REQUIRE(p5 != nullptr);
        CHECK(*p5 == IVal::imag(MeroQJac(T)));

        // the remaining member follows from the formal partial of a known one
        const IVal* p4 = pred(make_key(1, {{2, 7}, {2, 7}, {3, 4}}));
        REQUIRE(p4 != nullptr);
        const IVal& e4 = db.at(make_key(1, {{2, 7}, {2, 7}, {2, 7}}));
        IVal expect4(MeroQJac(partial_a(e4.re.num), e4.re.theta_pow, e4.re.delta_pow),
                     MeroQJac(partial_a(e4.im.num), e4.im.theta_pow, e4.im.delta_pow));
        CHECK(*p4 == expect4.scaled(Rat(1, 3)));
    }

    TEST_CASE("a corrupted table is flagged with a residual") {
        Geometry g = build_p2xe();
        CorrDB db = p2e_reference_db();
        db[make_key(1, {{2, 8}, {2, 11}})] =
            IVal::imag(MeroQJac(QJacPoly::gen(Gen::Theta).scaled(Rat(2))));
        CheckReport rep = check_system(g, db, p2e_standard_instances(g));
        CHECK(!rep.inconsistencies.empty());
    }

    TEST_CASE("missing table entries leave equations unresolved") {
        Geometry g = build_p2xe();
        std::vector<Equation> eqs = p2e_standard_instances(g);
        CheckReport rep = check_system(g, CorrDB{}, eqs);
        CHECK(rep.verified == 0);
        CHECK(rep.predictions.empty());
        CHECK(rep.inconsistencies.empty());
        CHECK(rep.unresolved.size() == eqs.size());
    }

    TEST_CASE("equation members require homogeneous classes") {
        Geometry g = build_p2xe();
        CohClass mixed = g.basis(0) + g.basis(8);
        CHECK_THROWS_AS(hae_instance(g, Anomaly::dA, {Insertion{true, 2, mixed}}, 1),
                        std::invalid_argument);
    }

    TEST_CASE("tracked class products and pairings") {
        K3Class U = K3Class::basis(k3_unit);
        K3Class F = K3Class::basis(k3_fiber);
        K3Class W = K3Class::basis(k3_wdiv);
        K3Class P = K3Class::basis(k3_point);
        K3Class L1 = K3Class::basis(k3_perp1);
        K3Class L2 = K3Class::basis(k3_perp2);
        CHECK(k3_mul(F, W) == P);
        CHECK(k3_mul(W, F) == P);
        CHECK(k3_mul(L1, L2) == P);
        CHECK(k3_mul(W, W).is_zero_k());
        CHECK(k3_mul(F, F).is_zero_k());
        CHECK(k3_mul(L1, L1).is_zero_k());
        CHECK(k3_mul(U, W) == W);
        CHECK(k3_mul(P, F).is_zero_k());
        CHECK(k3_mul(P, P).is_zero_k());
        CHECK(k3_pair(U, P) == 1);
        CHECK(k3_pair(F, W) == 1);
        CHECK(k3_pair(L1, L2) == 1);
        CHECK(k3_pair(F, F) == 0);
        CHECK(k3_pair(W, P) == 0);
        CHECK(k3_integral(P) == 1);
        CHECK(k3_integral(W) == 0);
        CHECK(k3_pushpull(W) == U);
        CHECK(k3_pushpull(P) == F);
        CHECK(k3_pushpull(F).is_zero_k());
        CHECK(k3_pushpull(L1).is_zero_k());
        CHECK(k3_proj_perp(W + L1.scaled(Rat(2))) == L1.scaled(Rat(2)));
        CHECK(k3_weight(k3_unit) == -1);
        CHECK(k3_weight(k3_fiber) == -1);
        CHECK(k3_weight(k3_wdiv) == 1);
        CHECK(k3_weight(k3_point) == 1);
        CHECK(k3_weight(k3_perp1) == 0);
        CHECK(k3_weight(k3_perp2) == 0);
    }

    TEST_CASE("correspondence tensors of the tracked classes") {
        K3Class F = K3Class::basis(k3_fiber);
        K3Class W = K3Class::basis(k3_wdiv);
        K3Class P = K3Class::basis(k3_point);
        K3Class L1 = K3Class::basis(k3_perp1);
        CHECK(k3_corr(F) == make_tensor({{k3_fiber, k3_fiber}}, Rat(0)));
        CHECK(k3_corr(P) ==
              make_tensor({{k3_point, k3_fiber}, {k3_fiber, k3_point}}, Rat(0)));
        CHECK(k3_corr(L1) ==
              make_tensor({{k3_perp1, k3_fiber}, {k3_fiber, k3_perp1}}, Rat(0)));
        CHECK(k3_corr(W) == make_tensor({{k3_unit, k3_point},
                                         {k3_point, k3_unit},
                                         {k3_wdiv, k3_fiber},
                                         {k3_fiber, k3_wdiv}},
                                        Rat(1)));
    }

    TEST_CASE("the pair correspondence fixes the marked divisor as identity") {
        K3Class W = K3Class::basis(k3_wdiv);
        for (int s = 0; s < 6; ++s) {
            K3Class e = K3Class::basis(s);
            CHECK(k3_corr_pair(W, e) == e);
        }
        K3Class U = K3Class::basis(k3_unit);
        K3Class F = K3Class::basis(k3_fiber);
        K3Class P = K3Class::basis(k3_point);
        K3Class L1 = K3Class::basis(k3_perp1);
        K3Class L2 = K3Class::basis(k3_perp2);
        CHECK(k3_corr_pair(L1, L2) == F);
        CHECK(k3_corr_pair(P, U) == F);
        CHECK(k3_corr_pair(P, W) == P);
        CHECK(k3_corr_pair(F, F).is_zero_k());
        CHECK(k3_corr_pair(F, P).is_zero_k());
        CHECK(k3_corr_pair(P, P).is_zero_k());
    }

    TEST_CASE("single couplings reproduce the solved series") {
        const SeriesTable& t = table555();
        K3Class F = K3Class::basis(k3_fiber);
        K3Class W = K3Class::basis(k3_wdiv);
        K3Class P = K3Class::basis(k3_point);
        K3Class L1 = K3Class::basis(k3_perp1);
        K3Class L2 = K3Class::basis(k3_perp2);
        CHECK(k3_correlator({KIns{0, P}}, t) == MeroQJac(QJacPoly(Rat(1)), 2, 1));
        for (int k = 0; k <= 5; ++k) {
            CHECK(k3_correlator({KIns{k + 2, F}}, t) == MeroQJac(-t.a(k), 2, 1));
            CHECK(k3_correlator({KIns{k, P}}, t) == MeroQJac(-t.b(k), 2, 1));
        }
        CHECK(k3_correlator({KIns{3, L1}, KIns{4, L2}}, t) == MeroQJac(-t.c(1, 2), 2, 1));
        CHECK(k3_correlator({KIns{4, L1}, KIns{4, L2}}, t) == MeroQJac(-t.c(2, 2), 2, 1));
        CHECK(k3_correlator({KIns{2, L1}, KIns{3, L2}}, t).is_zero_m());
        CHECK(k3_correlator({KIns{3, L1}}, t).is_zero_m());
        CHECK(k3_correlator({KIns{3, F}, KIns{5, F}}, t) ==
              MeroQJac(-(t.a(1) * t.a(3)), 2, 1));
        CHECK(k3_correlator({KIns{4, W}}, t) ==
              derived_derivative(MeroQJac(-t.a(2), 2, 1), DOp::Dtau));
        CHECK(k3_correlator({KIns{2, P}, KIns{3, W}}, t) ==
              derived_derivative(MeroQJac(-(t.b(2) * t.a(1)), 2, 1), DOp::Dtau));
        CHECK_THROWS_AS(k3_correlator({KIns{2, K3Class::basis(k3_unit)}}, t),
                        std::invalid_argument);
    }

    TEST_CASE("lattice variation of the correlator") {
        const SeriesTable& t = table555();
        K3Class F = K3Class::basis(k3_fiber);
        K3Class W = K3Class::basis(k3_wdiv);
        K3Class P = K3Class::basis(k3_point);
        K3Class L1 = K3Class::basis(k3_perp1);
        K3Class L2 = K3Class::basis(k3_perp2);
        CHECK(k3_sigma({KIns{4, F}}, t).is_zero_m());
        CHECK(k3_sigma({KIns{3, P}}, t).is_zero_m());
        CHECK(k3_sigma({KIns{4, W}}, t) == MeroQJac(t.a(2).scaled(Rat(20)), 2, 1));
        CHECK(k3_sigma({KIns{3, L1}, KIns{4, L2}}, t) ==
              MeroQJac((t.a(1) * t.a(2)).scaled(Rat(-2)), 2, 1));
        CHECK(k3_sigma({KIns{4, W}, KIns{3, L1}}, t).is_zero_m());
        MeroQJac expect = MeroQJac(t.c(1, 2).scaled(Rat(-40)), 2, 1) +
                          k3_correlator({KIns{3, F}, KIns{4, W}}, t).scaled(Rat(-20)) +
                          k3_correlator({KIns{3, W}, KIns{4, F}}, t).scaled(Rat(-20));
        CHECK(k3_sigma({KIns{3, W}, KIns{4, W}}, t) == expect);
    }

    TEST_CASE("anomaly instances close over the table") {
        const SeriesTable& t = table555();
        std::vector<K3Instance> v = k3_standard_instances(t, 5, 5, 5);
        CHECK(v.size() == 64);
        for (const K3Instance& inst : v) {
            INFO(inst.label);
            CHECK(inst.lhs == inst.rhs);
        }
    }

    TEST_CASE("family instances match the recursion data") {
        const SeriesTable& t = table555();
        K3Class F = K3Class::basis(k3_fiber);
        K3Class P = K3Class::basis(k3_point);
        K3Class L1 = K3Class::basis(k3_perp1);
        K3Class L2 = K3Class::basis(k3_perp2);
        for (int k = 1; k <= 5; ++k) {
            CHECK(k3_instance(Anomaly::dA, {KIns{k + 2, F}}, t).rhs ==
                  MeroQJac(-rhs_dA(Family::A, k, 0, t), 2, 1));
            CHECK(k3_instance(Anomaly::dA, {KIns{k, P}}, t).rhs ==
                  MeroQJac(-rhs_dA(Family::B, k, 0, t), 2, 1));
        }
        for (int k = 0; k <= 5; ++k) {
            CHECK(k3_instance(Anomaly::dG2, {KIns{k + 2, F}}, t).rhs ==
                  MeroQJac(-rhs_dG2(Family::A, k, 0, t), 2, 1));
            CHECK(k3_instance(Anomaly::dG2, {KIns{k, P}}, t).rhs ==
                  MeroQJac(-rhs_dG2(Family::B, k, 0, t), 2, 1));
        }
        for (int k = 1; k <= 4; ++k)
            for (int l = 1; k + l <= 5; ++l) {
                CHECK(k3_instance(Anomaly::dA, {KIns{k + 2, L1}, KIns{l + 2, L2}}, t).rhs ==
                      MeroQJac(-rhs_dA(Family::C, k, l, t), 2, 1));
                CHECK(k3_instance(Anomaly::dG2, {KIns{k + 2, L1}, KIns{l + 2, L2}}, t).rhs ==
                      MeroQJac(-rhs_dG2(Family::C, k, l, t), 2, 1));
            }
        K3Class mixed = F + K3Class::basis(k3_wdiv);
        CHECK_THROWS_AS(k3_instance(Anomaly::dA, {KIns{3, mixed}}, t), std::invalid_argument);
    }
}
