#include "qjf/generators.hpp"
#include <map>

namespace qjf {

const char* gen_name(Gen g) {
    switch (g) {
        case Gen::Theta: return "Theta";
        case Gen::A: return "A";
        case Gen::G2: return "G2";
        case Gen::P: return "P";
        case Gen::Pp: return "Pp";
        case Gen::G4: return "G4";
    }
    return "?";
}

namespace {

FourierSeries theta_series(int qorder) {
    // (p^{1/2} - p^{-1/2}) prod_{m>=1} (1-p q^m)(1-p^{-1} q^m)/(1-q^m)^2
    FourierSeries r = FourierSeries::constant(
        RationalFunction::s_power(1) - RationalFunction::s_power(-1), qorder);
    for (int m = 1; m <= qorder; ++m) {
        auto factor = [&](const RationalFunction& u) {
            // 1 - u q^m
            FourierSeries f = FourierSeries::constant(RationalFunction(Rat(1)), qorder);
            f.at(m) = -u;
            return f;
        };
        r = r * factor(RationalFunction::s_power(2));
        r = r * factor(RationalFunction::s_power(-2));
        FourierSeries d = factor(RationalFunction(Rat(1)));
        r = r * d.inverse() * d.inverse();
    }
    return r;
}

}  // namespace

FourierSeries eisenstein(int k, int qorder) {
    if (k < 1) throw std::invalid_argument("eisenstein weight must be positive");
    if (k % 2) throw std::invalid_argument("odd Eisenstein series vanish; even weight required");
    auto bern = bernoulli_list(k);
    FourierSeries r(0, qorder);
    r.at(0) = RationalFunction(-bern[k] / Rat(2 * k));
    for (int n = 1; n <= qorder; ++n)
        r.at(n) = RationalFunction(Rat(sigma_divisor(k - 1, n)));
    return r;
}

FourierSeries discriminant_series(int qorder) {
    FourierSeries prod = product_builder([](int, int) { return 24L; }, qorder - 1);
    return prod.shifted(1);
}

FourierSeries product_builder(const std::function<long(int, int)>& exponent,
                              int qorder, int max_ell) {
    // assemble log of the product, then exponentiate
    FourierSeries logp(1, qorder);
    for (int ell = 0; ell <= max_ell; ++ell) {
        RationalFunction pl = RationalFunction::s_power(2 * ell);
        for (int m = 1; m <= qorder; ++m) {
            long e = exponent(ell, m);
            if (e == 0) continue;
            // e * log(1 - p^ell q^m) = -e sum_k p^{ell k} q^{mk} / k
            for (int k = 1; m * k <= qorder; ++k) {
                RationalFunction term =
                    RationalFunction::s_power(2 * ell * k) * RationalFunction(Rat(-e) / k);
                logp.at(m * k) = logp.at(m * k) + term;
            }
        }
    }
    // exp of a series with positive valuation
    FourierSeries r(0, qorder);
    r.at(0) = RationalFunction(Rat(1));
    FourierSeries pw = FourierSeries::constant(RationalFunction(Rat(1)), qorder);
    Rat fact = 1;
    for (int k = 1; k <= qorder; ++k) {
        pw = pw * logp;
        fact *= k;
        r = r + pw.scaled(RationalFunction(1 / fact));
    }
    return r;
}

namespace {

struct GenCache {
    std::map<Gen, FourierSeries> series;
    int qorder = -1;
};

GenCache& cache() {
    static GenCache c;
    return c;
}

void fill_cache(int qorder) {
    GenCache& c = cache();
    if (c.qorder >= qorder) return;
    FourierSeries th = theta_series(qorder);
    FourierSeries a = derive_p(th) * th.inverse();
    FourierSeries g2 = eisenstein(2, qorder);
    FourierSeries p = -derive_p(a) - g2 - g2;
    FourierSeries pp = derive_p(p);
    FourierSeries g4 = eisenstein(4, qorder);
    c.series.clear();
    c.series.emplace(Gen::Theta, std::move(th));
    c.series.emplace(Gen::A, std::move(a));
    c.series.emplace(Gen::G2, std::move(g2));
    c.series.emplace(Gen::P, std::move(p));
    c.series.emplace(Gen::Pp, std::move(pp));
    c.series.emplace(Gen::G4, std::move(g4));
    c.qorder = qorder;
}

}  // namespace

FourierSeries generator_expansion(Gen g, int qorder) {
    fill_cache(qorder);
    return cache().series.at(g).truncated(qorder);
}

Jet<Rat> to_jet(const FourierSeries& a, int zorder) {
    int lo = 0;
    std::vector<std::pair<int, std::vector<Rat>>> jets;  // per q coefficient
    for (int n = a.qshift; n <= a.trunc; ++n) {
        int l = 0;
        std::vector<Rat> j = a.coeff(n).exp_jet(zorder, l);
        lo = std::min(lo, l);
        jets.emplace_back(l, std::move(j));
    }
    Jet<Rat> r(1, {lo, 0, 0}, {zorder, 0, 0}, a.qshift, a.trunc);
    for (int n = a.qshift; n <= a.trunc; ++n) {
        const auto& [l, j] = jets[n - a.qshift];
        for (size_t i = 0; i < j.size(); ++i) {
            int ze = l + static_cast<int>(i);
            if (ze > zorder) break;
            r.cell({ze, 0, 0}).at(n) = j[i];
        }
    }
    return r;
}

}  // namespace qjf
