#pragma once

// Split systems  u_t + [u Φ(u,v)]_x = [A(u,v)]_x,  v_t + [v Φ(u,v)]_x = [B(u,v)]_x.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "singshock/errors.hpp"

namespace singshock {

/// A pure bivariate evaluator with a pointwise and an array form.
///
/// The array form is generated from the same callable, so both agree bit for bit;
/// it exists so that stage loops do not pay one type-erased call per cell.
class Flux {
public:
    using Pointwise = std::function<double(double, double)>;
    using Batch = std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>;

    Flux() : Flux([](double, double) { return 0.0; }, true) {}

    template <class F>
    explicit Flux(F f, bool identically_zero = false)
        : point_(f),
          batch_([f](std::span<const double> u, std::span<const double> v, std::span<double> out) {
              for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(u[i], v[i]);
          }),
          zero_(identically_zero) {}

    double operator()(double u, double v) const { return point_(u, v); }

    void evaluate(std::span<const double> u, std::span<const double> v, std::span<double> out) const {
        batch_(u, v, out);
    }

    bool identically_zero() const noexcept { return zero_; }

private:
    Pointwise point_;
    Batch batch_;
    bool zero_ = false;
};

/// c * u^p * v^q
struct PolynomialTerm {
    double c = 0.0;
    int p = 0;
    int q = 0;
    bool operator==(const PolynomialTerm&) const = default;
};

/// Sparse bivariate polynomial evaluated by nested Horner accumulation:
/// outer in u over powers p, inner in v over powers q.
class BivariatePolynomial {
public:
    BivariatePolynomial() = default;

    explicit BivariatePolynomial(std::vector<PolynomialTerm> terms) : terms_(std::move(terms)) {
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            const auto& t = terms_[k];
            if (t.p < 0 || t.q < 0)
                throw ConfigError("polynomial term " + std::to_string(k) + ": negative exponent");
            if (!std::isfinite(t.c))
                throw ConfigError("polynomial term " + std::to_string(k) + ": non-finite coefficient");
            max_p_ = std::max(max_p_, t.p);
            max_q_ = std::max(max_q_, t.q);
        }
        if (!terms_.empty()) {
            dense_.assign(static_cast<std::size_t>((max_p_ + 1) * (max_q_ + 1)), 0.0);
            for (const auto& t : terms_) dense_[index(t.p, t.q)] += t.c;
        }
    }

    double operator()(double u, double v) const {
        if (terms_.empty()) return 0.0;
        double acc = 0.0;
        for (int p = max_p_; p >= 0; --p) {
            double inner = 0.0;
            for (int q = max_q_; q >= 0; --q) inner = inner * v + dense_[index(p, q)];
            acc = acc * u + inner;
        }
        return acc;
    }

    const std::vector<PolynomialTerm>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

private:
    std::size_t index(int p, int q) const {
        return static_cast<std::size_t>(p * (max_q_ + 1) + q);
    }

    std::vector<PolynomialTerm> terms_;
    std::vector<double> dense_;
    int max_p_ = 0;
    int max_q_ = 0;
};

/// The triple (Φ, A, B). Immutable once built.
struct SystemDefinition {
    std::string name;
    Flux phi;
    Flux a_flux;
    Flux b_flux;

    /// Polynomial source tables, present for custom systems only.
    std::shared_ptr<const std::array<BivariatePolynomial, 3>> tables;

    /// Flux of the first equation in conservation form, uΦ - A.
    double flux_u(double u, double v) const { return u * phi(u, v) - a_flux(u, v); }
    /// Flux of the second equation in conservation form, vΦ - B.
    double flux_v(double u, double v) const { return v * phi(u, v) - b_flux(u, v); }
};

/// Riemann data: (u_l, v_l) left of jump_x, (u_r, v_r) right of it.
struct RiemannData {
    double u_l = 0.0;
    double v_l = 0.0;
    double u_r = 0.0;
    double v_r = 0.0;
    double jump_x = 0.0;
};

/// u_t + (u² - v)_x = 0, v_t + (u³/3 - u)_x = 0, split as Φ = u, A = v, B = vu - u³/3 + u.
inline SystemDefinition system_keyfitz_kranzer() {
    return SystemDefinition{
        "kk",
        Flux([](double u, double) { return u; }),
        Flux([](double, double v) { return v; }),
        Flux([](double u, double v) { return v * u - u * u * u / 3.0 + u; }),
        nullptr};
}

/// u_t + (u²)_x = 0, v_t + (uv)_x = 0: pure transport, Φ = u, A = B = 0.
inline SystemDefinition system_korchinski() {
    return SystemDefinition{"korchinski", Flux([](double u, double) { return u; }), Flux(), Flux(),
                            nullptr};
}

inline SystemDefinition system_custom(std::string name, BivariatePolynomial phi, BivariatePolynomial a,
                                      BivariatePolynomial b) {
    auto tables = std::make_shared<const std::array<BivariatePolynomial, 3>>(
        std::array<BivariatePolynomial, 3>{std::move(phi), std::move(a), std::move(b)});
    auto flux_of = [&tables](std::size_t k) {
        const BivariatePolynomial* poly = &(*tables)[k];
        return Flux([tables, poly](double u, double v) { return (*poly)(u, v); }, poly->empty());
    };
    return SystemDefinition{std::move(name), flux_of(0), flux_of(1), flux_of(2), tables};
}

// Custom-system JSON: {"phi": [[c,p,q],...], "a": [...], "b": [...]}; missing keys mean 0.

inline BivariatePolynomial polynomial_from_json(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError("custom system: \"" + key + "\" must be an array of [c,p,q]");
    std::vector<PolynomialTerm> terms;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const auto& e = j[k];
        const std::string where = "custom system: \"" + key + "\" term " + std::to_string(k);
        if (!e.is_array() || e.size() != 3 || !e[0].is_number())
            throw ConfigError(where + ": expected [c, p, q]");
        for (int m = 1; m <= 2; ++m) {
            if (!e[m].is_number_integer() && !(e[m].is_number() && std::floor(e[m].get<double>()) == e[m].get<double>()))
                throw ConfigError(where + ": exponents must be integers");
        }
        const PolynomialTerm t{e[0].get<double>(), static_cast<int>(e[1].get<double>()),
                               static_cast<int>(e[2].get<double>())};
        if (t.p < 0 || t.q < 0) throw ConfigError(where + ": exponents must be >= 0");
        terms.push_back(t);
    }
    return BivariatePolynomial(std::move(terms));
}

inline nlohmann::json polynomial_to_json(const BivariatePolynomial& poly) {
    auto j = nlohmann::json::array();
    for (const auto& t : poly.terms()) j.push_back({t.c, t.p, t.q});
    return j;
}

inline SystemDefinition system_from_json(const nlohmann::json& j, std::string name = "custom") {
    if (!j.is_object()) throw ConfigError("custom system: top level must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "phi" && key != "a" && key != "b" && key != "name")
            throw ConfigError("custom system: unknown key \"" + key + "\"");
    auto get = [&](const char* key) {
        return j.contains(key) ? polynomial_from_json(j.at(key), key) : BivariatePolynomial{};
    };
    if (j.contains("name")) name = j.at("name").get<std::string>();
    return system_custom(std::move(name), get("phi"), get("a"), get("b"));
}

inline nlohmann::json system_to_json(const SystemDefinition& sys) {
    if (!sys.tables) throw ConfigError("system \"" + sys.name + "\" has no polynomial table");
    return {{"name", sys.name},
            {"phi", polynomial_to_json((*sys.tables)[0])},
            {"a", polynomial_to_json((*sys.tables)[1])},
            {"b", polynomial_to_json((*sys.tables)[2])}};
}

inline SystemDefinition load_custom_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open custom system file");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("custom system " + path + ": " + e.what());
    }
    return system_from_json(j, "custom:" + path);
}

/// Resolves "kk", "korchinski" or "custom:<path>".
inline SystemDefinition system_by_name(const std::string& selector) {
    if (selector == "kk" || selector == "keyfitz-kranzer") return system_keyfitz_kranzer();
    if (selector == "korchinski") return system_korchinski();
    if (selector.rfind("custom:", 0) == 0) return load_custom_system(selector.substr(7));
    throw ConfigError("unknown system \"" + selector + "\" (expected kk, korchinski or custom:<path>)");
}

} // namespace singshock
