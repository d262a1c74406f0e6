#pragma once
#include "json.hpp"
#include "qjf/cohomology.hpp"
#include "qjf/qjac.hpp"

namespace qjf {

using nlohmann::json;

inline json zpoly_to_json(const ZPoly& p) {
    json a = json::array();
    for (const auto& x : p.c) {
        if (x.fits_slong_p()) a.push_back(x.get_si());
        else a.push_back(x.get_str());
    }
    if (a.empty()) a.push_back(0);
    return a;
}

inline ZPoly zpoly_from_json(const json& a) {
    ZPoly p;
    for (const auto& v : a) {
        if (v.is_string()) p.c.emplace_back(v.get<std::string>());
        else p.c.emplace_back(static_cast<long>(v.get<long long>()));
    }
    p.trim();
    return p;
}

inline json to_json(const RationalFunction& r) {
    return json{{"num", zpoly_to_json(r.num)},
                {"den", zpoly_to_json(r.den)},
                {"scale", r.scale.get_str()}};
}

inline RationalFunction rf_from_json(const json& j) {
    ZPoly num = zpoly_from_json(j.at("num"));
    ZPoly den = zpoly_from_json(j.at("den"));
    Rat sc = rat_from_string(j.at("scale").get<std::string>());
    if (num.is_zero() || qjf::is_zero(sc)) return RationalFunction();
    return RationalFunction(std::move(num), std::move(den), sc);
}

inline json to_json(const FourierSeries& f) {
    json coeffs = json::array();
    for (int n = f.qshift; n <= f.trunc; ++n) coeffs.push_back(to_json(f.coeff(n)));
    return json{{"qshift", f.qshift}, {"trunc", f.trunc}, {"coeffs", coeffs}};
}

inline FourierSeries fourier_from_json(const json& j) {
    FourierSeries f(j.at("qshift").get<int>(), j.at("trunc").get<int>());
    const json& coeffs = j.at("coeffs");
    if (static_cast<int>(coeffs.size()) != std::max(0, f.trunc - f.qshift + 1))
        throw std::invalid_argument("coefficient list length does not match the window");
    for (int n = f.qshift; n <= f.trunc; ++n)
        f.at(n) = rf_from_json(coeffs[n - f.qshift]);
    return f;
}

inline json to_json(const QJacPoly& p) {
    json terms = json::array();
    for (const auto& [m, c] : p.terms) {
        json e = json::array();
        for (int i = 0; i < 6; ++i) e.push_back(m[i]);
        terms.push_back(json{{"exp", e}, {"coef", c.get_str()}});
    }
    return json{{"terms", terms}};
}

inline QJacPoly qjac_from_json(const json& j) {
    QJacPoly p;
    for (const auto& t : j.at("terms")) {
        const json& e = t.at("exp");
        if (e.size() != 6) throw std::invalid_argument("exponent vector must have six entries");
        Mono m;
        for (int i = 0; i < 6; ++i) m[i] = e[i].get<int>();
        p.terms[m] += rat_from_string(t.at("coef").get<std::string>());
    }
    p.prune();
    return p;
}

inline json to_json(const MeroQJac& f) {
    json j = to_json(f.num);
    j["theta_pow"] = f.theta_pow;
    j["delta_pow"] = f.delta_pow;
    return j;
}

inline MeroQJac mero_from_json(const json& j) {
    MeroQJac f(qjac_from_json(j));
    f.theta_pow = j.value("theta_pow", 0);
    f.delta_pow = j.value("delta_pow", 0);
    return f;
}

inline json to_json(const NumericPack& p) {
    return json{{"eB", p.eB}, {"c1N_c1TB", p.c1N_c1TB}, {"c1N_sq", p.c1N_sq}};
}

inline NumericPack pack_from_json(const json& j) {
    NumericPack p;
    p.eB = j.at("eB").get<long>();
    p.c1N_c1TB = j.at("c1N_c1TB").get<long>();
    p.c1N_sq = j.at("c1N_sq").get<long>();
    return p;
}

}  // namespace qjf
