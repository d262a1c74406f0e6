#pragma once
#include <string>
#include <vector>
#include "qjf/jet.hpp"
#include "qjf/qjac.hpp"
#include "qjf/series.hpp"
#include "qjf/tpoly.hpp"

namespace qjf {

// weakly decreasing positive parts
using Partition = std::vector<int>;

// every partition of n, duplicate-free, parts weakly decreasing
std::vector<Partition> partitions_of(int n);

// Laurent jets in up to three formal variables over q, scalars in TPoly
using TJet = Jet<TPoly>;
using TSeries = QSeries<TPoly>;

// single-variable atoms, exact through x^xorder and q^qorder

// e^{c x}
TJet exp_jet(const TPoly& c, int xorder, int qorder);
// 1/(1 - e^{-c x}) as a Laurent jet with principal part 1/(c x); c one term
TJet geom_tail_jet(const TPoly& c, int xorder, int qorder);
// (e^{y/2} - e^{-y/2})/y at y^2 = -t1 t2 x^2; even powers of x only
TJet sinh_quot_jet(int xorder, int qorder);
// prod_{m>=1} (1 - q^m e^{c x})
TJet qpochhammer_jet(const TPoly& c, int qorder, int xorder);
// prod_{m>=1} (1 - q^m)
TSeries qpochhammer_series(int qorder);
// sum_i e^{(lambda_i - i + 1/2) x}: finite part over the nonzero parts plus
// the closed geometric tail
TJet shifted_part_sum(const Partition& lam, int xorder, int qorder);
// sum_i e^{(-lambda_i t2 - i t1) x}, regularized the same way
TJet weighted_part_sum(const Partition& lam, int xorder, int qorder);

// n-point function: prod(1-q^l) sum_lam q^|lam| prod_l shifted_part_sum(lam)
// in variables x_1..x_n, n <= 3; scalars stay rational
TJet bloch_okounkov(int n, int qorder, const std::vector<int>& xorders);

// q-coefficient list of one x-monomial; throws if the monomial lies beyond
// the exact window or a scalar carries t1, t2
std::vector<Rat> jet_qcoeffs(const TJet& f, const std::vector<int>& mono);

// the list as a q-series with constant coefficients
FourierSeries rational_qseries(const std::vector<Rat>& coeffs);

// fit one x-monomial coefficient of f as an index-zero ring element of
// weight (x-degree + variable count); no poles, margin passed through
MeroQJac coefficient_fit(const TJet& f, const std::vector<int>& mono, int margin = 0);

struct MonoCheck {
    std::string label;
    bool pass = false;
    std::string detail;  // empty when the comparison holds
};

struct JetReport {
    std::string title;
    std::vector<MonoCheck> checks;
    bool pass = true;

    void add(const std::string& label, bool ok, const std::string& detail = "");
    int failures() const;
    std::string str() const;
};

// factorwise degree-2 anomaly identity on the n-point functions:
// each x-coefficient is fitted, the formal partial toward the weight-2
// generator is applied, and the result is compared with
// (sum x_i)^2 F_n - 2 sum_{i<j} (x_i+x_j) F_{n-1}(x_i+x_j, rest)
// coefficient by coefficient; fit failure names the offending monomial
JetReport pixton_check(int n, int qorder, int xorder);

// localization sum over partitions with the two torus weights, specialized
// to t2 = -t1, against x_1..x_n t1^{-n} F_n(t1 x_1, ..., t1 x_n)
JetReport c2e_pt_stationary(int n, int qorder, const std::vector<int>& xorders);

// both closed forms of the one-insertion sum with formal t1, t2: the
// q-Pochhammer quotient and the exponential of twisted Eisenstein series
JetReport c2e_pipt_closed_form(int qorder, int xorder);

// -s B_k/k + sum_n sigma_{k-1}(n) q^n, k >= 1
FourierSeries g_twisted(int k, int s, int qorder);

}  // namespace qjf
