#pragma once
#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>
#include "qjf/cohomology.hpp"
#include "qjf/k3.hpp"
#include "qjf/qjac.hpp"

namespace qjf {

// which formal partial the anomaly equation takes
enum class Anomaly { dA, dG2 };

// one descendent insertion: character level k of the class; tilde means the
// level is corrected by 1/24 of the level-(k-2) character of class * c2(TX)
struct Insertion {
    bool tilde = true;
    int k = 0;
    CohClass cls;
};

// canonical correlator label: curve degree and the (level, basis index)
// multiset in sorted order
struct CorrKey {
    int beta = 0;
    std::vector<std::pair<int, int>> ins;

    bool operator<(const CorrKey& o) const {
        if (beta != o.beta) return beta < o.beta;
        return ins < o.ins;
    }
    bool operator==(const CorrKey& o) const { return beta == o.beta && ins == o.ins; }
    std::string str(const Geometry& g) const;
};

// series value split as re + i*im, with i the formal imaginary unit carried
// by odd insertion pairs
struct IVal {
    MeroQJac re, im;

    IVal() = default;
    IVal(MeroQJac r, MeroQJac i) : re(std::move(r)), im(std::move(i)) {}
    static IVal real(MeroQJac r) { return IVal(std::move(r), MeroQJac()); }
    static IVal imag(MeroQJac i) { return IVal(MeroQJac(), std::move(i)); }

    bool is_zero_v() const { return re.is_zero_m() && im.is_zero_m(); }
    IVal scaled(const Rat& k) const { return IVal(re.scaled(k), im.scaled(k)); }
    friend IVal operator+(const IVal& a, const IVal& b) { return IVal(a.re + b.re, a.im + b.im); }
    friend IVal operator-(const IVal& a, const IVal& b) { return IVal(a.re - b.re, a.im - b.im); }
    friend bool operator==(const IVal& a, const IVal& b) { return a.re == b.re && a.im == b.im; }
    std::string str() const;
};

// one reduced term: polynomial coefficient and outer derivative word applied
// to the canonical correlator
struct RTerm {
    QJacPoly coeff;
    int ntau = 0;  // outer D_tau count
    int np = 0;    // outer D_p count
    CorrKey key;
};

struct Reduced {
    std::vector<RTerm> terms;

    bool operator==(const Reduced& o) const;
    std::string str(const Geometry& g) const;
};

Reduced operator+(const Reduced& a, const Reduced& b);
Reduced scaled(const Reduced& r, const Rat& k);

// Rewrite a product of insertions into canonical correlators: terms below
// the degree bound drop, level-0 and level-1 characters reduce to scalars,
// level-2 base divisors to degree multiples, the level-2 fiber-point divisor
// to a D_tau word, and the level-3 identity character to a D_p word.
// Remaining insertions are sorted with sign rules for odd classes.
Reduced reduce(const Geometry& g, const std::vector<Insertion>& ins, int beta);

// one anomaly equation: partial of lhs equals rhs
struct Equation {
    Anomaly op = Anomaly::dA;
    Reduced lhs;
    Reduced rhs;
    std::string label;
};

// Build both sides of the anomaly equation for the given insertions.  The
// right-hand side collects the base splitting terms, the correspondence
// terms of each insertion and each pair, and (for dG2) the second character
// of the base and the vertical product corrections.
Equation hae_instance(const Geometry& g, Anomaly op, const std::vector<Insertion>& ins, int beta);

using CorrDB = std::map<CorrKey, IVal>;

// solved degree 1 and 2 series of the plane times elliptic curve geometry
CorrDB p2e_reference_db();

// anomaly equations whose members stay inside the reference table, plus
// chained ones solvable from earlier predictions
std::vector<Equation> p2e_standard_instances(const Geometry& g);

struct CheckReport {
    int verified = 0;
    std::vector<std::pair<CorrKey, IVal>> predictions;
    std::vector<std::string> inconsistencies;
    std::vector<std::string> unresolved;
    std::vector<std::string> log;
};

// Evaluate each equation over the table: fully known ones are checked
// exactly, single unknowns are solved and fed back as predictions, the rest
// are reported unresolved.  Inconsistencies carry the nonzero residual.
CheckReport check_system(const Geometry& g, const CorrDB& db, const std::vector<Equation>& eqs);

// ---------------------------------------------------------------------------
// trivial elliptic product over the solved one-curve series table

// tracked classes: unit, fiber, the section-plus-fiber divisor, the point,
// and a dual basis pair spanning the rest of the middle lattice
enum : int { k3_unit = 0, k3_fiber = 1, k3_wdiv = 2, k3_point = 3, k3_perp1 = 4, k3_perp2 = 5 };

struct K3Class {
    std::array<Rat, 6> c{};

    static K3Class basis(int i);
    bool is_zero_k() const;
    K3Class scaled(const Rat& k) const;
    friend K3Class operator+(const K3Class& a, const K3Class& b);
    friend K3Class operator-(const K3Class& a, const K3Class& b);
    friend bool operator==(const K3Class& a, const K3Class& b);
};

K3Class k3_mul(const K3Class& a, const K3Class& b);
Rat k3_integral(const K3Class& a);
Rat k3_pair(const K3Class& a, const K3Class& b);
// fiberwise pushforward followed by pullback
K3Class k3_pushpull(const K3Class& a);
// component in the span of the dual lattice pair, extended by the formal
// diagonal of the untracked complement
K3Class k3_proj_perp(const K3Class& a);
int k3_weight(int idx);

// Kuenneth tensor on the tracked classes plus a formal multiple of the full
// inverse-pairing diagonal of the rank 20 complement of unit and point
struct K3Tensor {
    std::array<std::array<Rat, 6>, 6> m{};
    Rat perp;

    bool operator==(const K3Tensor& o) const { return m == o.m && perp == o.perp; }
};

// correspondence class of one insertion class, and its contraction against
// a pair of classes
K3Tensor k3_corr(const K3Class& gamma);
K3Class k3_corr_pair(const K3Class& x, const K3Class& y);

struct KIns {
    int k = 0;
    K3Class cls;
};

// Correlator of the insertions over the table: a sum over partial matchings
// where pairs couple through C, unmatched insertions through the divisor or
// identity series, and fiber couplings defer a q d/dq onto the whole term.
// Everything multiplies -1/(Theta^2 Delta).
MeroQJac k3_correlator(const std::vector<KIns>& ins, const SeriesTable& t);

// second variation of the correlator along the untracked lattice directions
MeroQJac k3_sigma(const std::vector<KIns>& ins, const SeriesTable& t);

struct K3Instance {
    MeroQJac lhs, rhs;
    std::string label;
};

// both sides of the anomaly equation, evaluated over the table
K3Instance k3_instance(Anomaly op, const std::vector<KIns>& ins, const SeriesTable& t);

// single-insertion instances of the three defining families and the fiber
// pair instances, through the stated maximal level data of the table
std::vector<K3Instance> k3_standard_instances(const SeriesTable& t, int ka, int kb, int kc);

}  // namespace qjf
