#pragma once
#include <map>
#include <vector>
#include "qjf/jet.hpp"
#include "qjf/qjac.hpp"

namespace qjf {

enum class Family { A, B, C };

// the A_k, B_k, C_{k,l} ring elements, indexed as solved
struct SeriesTable {
    std::vector<QJacPoly> A;                 // A[k]
    std::vector<QJacPoly> B;                 // B[k]
    std::map<std::pair<int, int>, QJacPoly> C;  // C[{k,l}], k,l >= 1; zero otherwise

    const QJacPoly& a(int k) const;
    const QJacPoly& b(int k) const;
    QJacPoly c(int k, int l) const;  // symmetric lookup, zero off-table edges
};

// weight of the table entry
int entry_weight(Family f, int k, int l = 0);

// right-hand sides of the two anomaly recursions for the entry (f, k, l),
// written in lower table entries
QJacPoly rhs_dA(Family f, int k, int l, const SeriesTable& t);
QJacPoly rhs_dG2(Family f, int k, int l, const SeriesTable& t);

// q^0 coefficient of A_k in closed form: ((-1)^k/(k+1)!)(1-p^{k+1})/(1-p)^{k+1}
RationalFunction leading_A(int k);
// p^n coefficient of the same data computed by a direct lattice-point sum
Rat leading_brute(int n, int k);

// power-series coefficients of a rational function around s = 0
std::vector<Rat> s_expansion(const RationalFunction& f, int maxdeg);

// boundary value (q^0 coefficient) prescribed for a table entry
RationalFunction boundary_value(Family f, int k);

// Solve the two formal partial-derivative equations together with the q^0
// boundary row for the entry (f, k, l), given all lower entries.  extra
// supplies additional q-coefficient rows (exponent, value) when the grade
// alone leaves kernel directions.
QJacPoly solve_series(Family f, int k, int l, const SeriesTable& t,
                      const std::vector<std::pair<int, RationalFunction>>& extra = {});

// table with A_0..A_ka, B_0..B_kb and C_{k,l} for k,l >= 1, k+l <= kc
SeriesTable build_table(int ka, int kb, int kc);

// the displayed closed forms of the low table entries
SeriesTable reference_table();

// the same entry computed by formal residues of jets around z = 0
Jet<Rat> residue_eval(Family f, int k, int l, int zorder, int qorder);

// one stationary insertion: descendent level and the three pairing numbers
struct StatIns {
    int k = 0;
    Rat with_w;    // pairing against the fiber-dual divisor
    Rat with_f;    // pairing against the fiber class
    Rat with_one;  // pairing against the identity
};

// Sum over partial matchings of the insertions: matched pairs contribute
// dot[i][j] C_{k_i,k_j}, unmatched ones A_k (divisor part), B_k (identity
// part) or A_k with a deferred q d/dq (fiber part), everything multiplying
// -1/(Theta^2 Delta).
FourierSeries stationary_Z(const std::vector<StatIns>& ins,
                           const std::vector<std::vector<Rat>>& dot,
                           const SeriesTable& t, int qorder);

}  // namespace qjf
