#pragma once
#include <array>
#include <string>
#include <vector>
#include "qjf/series.hpp"

namespace qjf {

// class on the total space, coordinates over a fixed 12-element basis
struct CohClass {
    std::vector<Rat> c;

    CohClass() : c(12, Rat(0)) {}
    explicit CohClass(std::vector<Rat> v) : c(std::move(v)) {}

    bool is_zero_c() const;
    CohClass scaled(const Rat& k) const;
    friend CohClass operator+(const CohClass& a, const CohClass& b);
    friend CohClass operator-(const CohClass& a, const CohClass& b);
    friend bool operator==(const CohClass& a, const CohClass& b) { return a.c == b.c; }
};

// class on the base, coordinates over 1, H, H^2
struct BCoh {
    std::array<Rat, 3> c{{Rat(0), Rat(0), Rat(0)}};

    BCoh() = default;
    explicit BCoh(std::array<Rat, 3> v) : c(v) {}

    bool is_zero_c() const;
    friend BCoh operator+(const BCoh& a, const BCoh& b);
    friend bool operator==(const BCoh& a, const BCoh& b) { return a.c == b.c; }
};

// sum of tensors a_i (x) b_i on the square of the total space
struct KTensor2 {
    std::vector<std::vector<Rat>> m;  // m[i][j] is the e_i (x) e_j coordinate

    KTensor2() : m(12, std::vector<Rat>(12, Rat(0))) {}
    bool is_zero_t() const;
    friend KTensor2 operator+(const KTensor2& a, const KTensor2& b);
    friend KTensor2 operator-(const KTensor2& a, const KTensor2& b);
    friend bool operator==(const KTensor2& a, const KTensor2& b) { return a.m == b.m; }
};

// topological invariants entering the degree-0 normalization factor
struct NumericPack {
    long eB = 0;        // Euler number of the base surface
    long c1N_c1TB = 0;  // c1(N) . c1(TB)
    long c1N_sq = 0;    // c1(N)^2
};

// Product geometry of the projective plane with an elliptic curve.  The basis
// is H^a tensor {1, alpha, beta, point} with alpha, beta odd; products carry
// Koszul signs.  Everything else (pushforward, diagonals, the correspondence
// class on the triple product, weight eigenvalues) is computed, not assumed.
struct Geometry {
    static constexpr int dim = 12;
    static constexpr int bdim = 3;

    std::vector<int> degree;  // real cohomological degree of each basis class
    std::vector<int> parity;  // degree mod 2
    std::vector<int> wt;      // eigenvalue of [W cup -, pullback pushforward]
    std::vector<std::string> basis_name;

    CohClass W, KX, c2TX, c2TX_over_24;
    BCoh c2B;
    NumericPack pack;

    // structure tables
    std::vector<std::vector<CohClass>> mult;  // product of basis classes
    KTensor2 deltaX;                          // diagonal of the square
    std::vector<std::pair<BCoh, BCoh>> deltaB;
    // correspondence class on the triple product, sparse over basis triples
    std::vector<std::pair<std::array<int, 3>, Rat>> corr;

    CohClass basis(int i) const;
    CohClass mul(const CohClass& a, const CohClass& b) const;
    Rat integral(const CohClass& a) const;
    Rat integral_b(const BCoh& a) const;
    BCoh mul_b(const BCoh& a, const BCoh& b) const;
    BCoh push(const CohClass& a) const;
    CohClass pull(const BCoh& a) const;
    CohClass pushpull(const CohClass& a) const;
    // Koszul sign for moving x past y, on homogeneous coordinates
    static int sign_pow(int par_a, int par_b) { return (par_a & par_b & 1) ? -1 : 1; }

    bool homogeneous(const CohClass& a, int* deg_out = nullptr, int* wt_out = nullptr) const;
    std::string str(const CohClass& a) const;
};

Geometry build_p2xe();

// correspondence acting on one class, a two-factor Künneth tensor
KTensor2 e_corr(const Geometry& g, const CohClass& gamma);
// correspondence acting on a Künneth pair, via the triple-product class
CohClass e_corr(const Geometry& g, const CohClass& gamma, const CohClass& gamma2);
// the same pair action written out by the pushforward identities
CohClass e_corr_expanded(const Geometry& g, const CohClass& gamma, const CohClass& gamma2);

// degree-0 series prod_m (1-q^m)^{-eB - c1N.(c1TB + c1N)} x
// prod_{l,m} (1-p^l q^m)^{-l c3}, with c3 = -60 c1N^2.  The p-dependent part
// is summed in closed form, so the coefficients are exact rational functions
// of p; porder is accepted for interface stability and not needed.  pi_pt
// drops the p-dependent factor.
FourierSeries normalization_product(const NumericPack& pack, int qorder, int porder = 0,
                                    bool pi_pt = false);

}  // namespace qjf
