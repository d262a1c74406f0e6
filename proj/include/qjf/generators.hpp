#pragma once
#include <functional>
#include "qjf/jet.hpp"
#include "qjf/series.hpp"

namespace qjf {

enum class Gen { Theta = 0, A = 1, G2 = 2, P = 3, Pp = 4, G4 = 5 };
constexpr int num_gens = 6;
const char* gen_name(Gen g);

// Fourier expansion of a named generator, exact through q^qorder.
// Coefficients are rational functions of s with p = s^2.
FourierSeries generator_expansion(Gen g, int qorder);

// Eisenstein series G_k = -B_k/2k + sum_n sigma_{k-1}(n) q^n for even k >= 2;
// odd k raise an error (those series vanish identically here)
FourierSeries eisenstein(int k, int qorder);

// the weight-12 cusp form q prod (1-q^n)^24
FourierSeries discriminant_series(int qorder);

// prod_{m>=1} (1-q^m)^{e(0,m)} * prod_{l>=1,m>=1} (1-p^l q^m)^{e(l,m)}.
// max_ell bounds the p-exponent range that the exponent function is
// consulted on; pass 0 for a p-free product.
FourierSeries product_builder(const std::function<long(int, int)>& exponent,
                              int qorder, int max_ell = 0);

// one-variable jet of a Fourier series under s = e^{z/2}
Jet<Rat> to_jet(const FourierSeries& a, int zorder);

}  // namespace qjf
