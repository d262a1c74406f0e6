#pragma once
#include <array>
#include <map>
#include <optional>
#include <string>
#include "qjf/generators.hpp"
#include "qjf/series.hpp"

namespace qjf {

// exponent vector in the order Theta, A, G2, P, Pp, G4
using Mono = std::array<int, 6>;

inline int mono_weight(const Mono& m) {
    return -m[0] + m[1] + 2 * m[2] + 2 * m[3] + 3 * m[4] + 4 * m[5];
}
// twice the index: Theta carries index 1/2, everything else 0
inline int mono_index2(const Mono& m) { return m[0]; }

// polynomial in the six generators over the rationals
struct QJacPoly {
    std::map<Mono, Rat> terms;

    QJacPoly() = default;
    explicit QJacPoly(const Rat& c) {
        if (!qjf::is_zero(c)) terms[Mono{{0, 0, 0, 0, 0, 0}}] = c;
    }
    static QJacPoly gen(Gen g, int e = 1) {
        QJacPoly r;
        Mono m{{0, 0, 0, 0, 0, 0}};
        m[static_cast<int>(g)] = e;
        r.terms[m] = 1;
        return r;
    }

    bool is_zero_p() const { return terms.empty(); }
    void prune();

    friend QJacPoly operator+(const QJacPoly& a, const QJacPoly& b);
    friend QJacPoly operator-(const QJacPoly& a, const QJacPoly& b);
    friend QJacPoly operator*(const QJacPoly& a, const QJacPoly& b);
    friend bool operator==(const QJacPoly& a, const QJacPoly& b) { return a.terms == b.terms; }
    QJacPoly operator-() const;
    QJacPoly scaled(const Rat& k) const;
    QJacPoly pow(int e) const;

    // (weight, twice the index) when every term agrees, nullopt otherwise
    std::optional<std::pair<int, int>> bigrade() const;

    std::string str() const;
};

inline bool is_zero(const QJacPoly& a) { return a.terms.empty(); }

// formal partial derivatives with respect to G2 and A
QJacPoly partial_g2(const QJacPoly& f);
QJacPoly partial_a(const QJacPoly& f);

// all monomials of the given weight and twice-index, in a fixed order
std::vector<Mono> graded_monomials(int weight, int index2);

FourierSeries evaluate(const QJacPoly& f, int qorder);

// num / (Theta^theta_pow * Delta^delta_pow)
struct MeroQJac {
    QJacPoly num;
    int theta_pow = 0;
    int delta_pow = 0;

    MeroQJac() = default;
    MeroQJac(QJacPoly n, int tp = 0, int dp = 0)
        : num(std::move(n)), theta_pow(tp), delta_pow(dp) {}

    bool is_zero_m() const { return num.is_zero_p(); }
    std::optional<std::pair<Rat, Rat>> bigrade() const;  // weight, index as rationals

    friend MeroQJac operator+(const MeroQJac& a, const MeroQJac& b);
    friend MeroQJac operator-(const MeroQJac& a, const MeroQJac& b);
    friend MeroQJac operator*(const MeroQJac& a, const MeroQJac& b);
    friend bool operator==(const MeroQJac& a, const MeroQJac& b);
    MeroQJac operator-() const { return MeroQJac(-num, theta_pow, delta_pow); }
    MeroQJac scaled(const Rat& k) const { return MeroQJac(num.scaled(k), theta_pow, delta_pow); }
    std::string str() const;
};

FourierSeries evaluate(const MeroQJac& f, int qorder);

struct FitError : std::runtime_error {
    enum class Kind { insufficient, no_solution, underdetermined };
    Kind kind;
    FitError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Recognize a Fourier series as num / (Theta^theta_pow Delta^delta_pow) with
// num homogeneous of the stated weight and twice-index (of the quotient).
// Uses every available coefficient of the target and requires at least
// margin more scalar conditions than unknowns.
MeroQJac fit(const FourierSeries& target, int weight, int index2, int theta_pow,
             int delta_pow, int margin = 10);

// the weight-6 and weight-12 modular forms written in the six generators
const QJacPoly& g6_polynomial();
const QJacPoly& delta_polynomial();

enum class DOp { Dp, Dtau };

// image of a single generator under D_p or D_tau; for Theta the image is
// Theta times a polynomial, returned here as the full product
const QJacPoly& generator_image(Gen g, DOp op);

QJacPoly derived_derivative(const QJacPoly& f, DOp op);
MeroQJac derived_derivative(const MeroQJac& f, DOp op);

// the four commutation relations between formal partials and derivatives,
// checked exactly on a bigraded polynomial
bool commutator_check(const QJacPoly& f);

}  // namespace qjf
