#ifndef SPACESAMP_JSON_IO_HPP
#define SPACESAMP_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "design.hpp"
#include "discrete_dist.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "simlab.hpp"
#include "spacing_vector_dist.hpp"

namespace spacesamp {

using nlohmann::json;

// ---- DiscreteDist <-> JSON ------------------------------------------------
//
// {"family":"neg_binomial","r":2.0,"p":0.4}
// The jump families also accept "pi" in place of their direct probability
// parameter; the success probability is then solved from the target rate.

inline json to_json(const DiscreteDist& d) {
    switch (d.family()) {
        case DistFamily::bernoulli: return {{"family", "bernoulli"}, {"p", d.p()}};
        case DistFamily::binomial:
            return {{"family", "binomial"}, {"n", d.n_trials()}, {"p", d.p()}};
        case DistFamily::geometric: return {{"family", "geometric"}, {"p", d.p()}};
        case DistFamily::neg_binomial:
            return {{"family", "neg_binomial"}, {"r", d.r()}, {"p", d.p()}};
        case DistFamily::poisson: return {{"family", "poisson"}, {"lambda", d.lambda()}};
        case DistFamily::hypergeometric:
            return {{"family", "hypergeometric"},
                    {"m", d.m_draws()},
                    {"r", static_cast<long long>(d.r_marked())},
                    {"R", static_cast<long long>(d.total_count())}};
        case DistFamily::neg_hypergeometric:
            return {{"family", "neg_hypergeometric"},
                    {"m", d.m_draws()},
                    {"r", d.r_marked()},
                    {"R", d.total_count()}};
        case DistFamily::uniform: return {{"family", "uniform"}, {"a", d.a_max()}};
        case DistFamily::degenerate: return {{"family", "degenerate"}, {"c", d.c_value()}};
        case DistFamily::forward_of: return {{"family", "forward_of"}, {"of", to_json(d.inner())}};
    }
    throw domain_error("to_json: unknown family");
}

inline DiscreteDist dist_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw domain_error("dist_from_json: object with a \"family\" key required");
    const std::string fam = j.at("family").get<std::string>();
    const bool has_pi = j.contains("pi");
    try {
        if (fam == "bernoulli") return DiscreteDist::bernoulli(j.at("p").get<double>());
        if (fam == "binomial") {
            const long long n = j.at("n").get<long long>();
            if (has_pi) return binomial_jump_for_rate(n, j.at("pi").get<double>());
            return DiscreteDist::binomial(n, j.at("p").get<double>());
        }
        if (fam == "geometric") {
            if (has_pi) return geometric_jump_for_rate(j.at("pi").get<double>());
            return DiscreteDist::geometric(j.at("p").get<double>());
        }
        if (fam == "neg_binomial") {
            const double r = j.at("r").get<double>();
            if (has_pi) return nb_jump_for_rate(r, j.at("pi").get<double>());
            return DiscreteDist::neg_binomial(r, j.at("p").get<double>());
        }
        if (fam == "poisson") {
            if (has_pi) return poisson_jump_for_rate(j.at("pi").get<double>());
            return DiscreteDist::poisson(j.at("lambda").get<double>());
        }
        if (fam == "hypergeometric")
            return DiscreteDist::hypergeometric(j.at("m").get<long long>(),
                                                j.at("r").get<long long>(),
                                                j.at("R").get<long long>());
        if (fam == "neg_hypergeometric")
            return DiscreteDist::neg_hypergeometric(j.at("m").get<long long>(),
                                                    j.at("r").get<double>(),
                                                    j.at("R").get<double>());
        if (fam == "uniform") return DiscreteDist::uniform(j.at("a").get<long long>());
        if (fam == "degenerate") return DiscreteDist::degenerate(j.at("c").get<long long>());
        if (fam == "forward_of") return DiscreteDist::forward_of(dist_from_json(j.at("of")));
    } catch (const json::exception& e) {
        throw domain_error(std::string("dist_from_json: ") + e.what());
    }
    throw domain_error("dist_from_json: unknown family \"" + fam + "\"");
}

// ---- Design <-> JSON --------------------------------------------------------
//
// {"kind":"circular","N":200,"n":50,"spacings":{"family":"mnh","r":5.0}}
// {"kind":"equilibrium_renewal","N":300,"jump":{"family":"poisson","pi":0.0333}}
// Spacing family "srs" is shorthand for mnh with r = 1.

inline json to_json(const Design& d) {
    switch (d.kind()) {
        case DesignKind::renewal:
            return {{"kind", "renewal"}, {"N", d.N()}, {"jump", to_json(d.jump())}};
        case DesignKind::equilibrium_renewal:
            return {{"kind", "equilibrium_renewal"}, {"N", d.N()}, {"jump", to_json(d.jump())}};
        case DesignKind::circular: {
            const SpacingVectorDist& sp = d.spacings();
            json spj;
            switch (sp.family()) {
                case SpacingFamily::mnh: spj = {{"family", "mnh"}, {"r", sp.r()}}; break;
                case SpacingFamily::mnom: spj = {{"family", "mnom"}}; break;
                case SpacingFamily::mh:
                    spj = {{"family", "mh"}, {"r", static_cast<long long>(sp.r())}};
                    break;
            }
            return {{"kind", "circular"}, {"N", d.N()}, {"n", d.n()}, {"spacings", spj}};
        }
    }
    throw domain_error("to_json: unknown design kind");
}

inline Design design_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw domain_error("design_from_json: object with a \"kind\" key required");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "renewal" || kind == "equilibrium_renewal") {
            const int N = j.at("N").get<int>();
            const DiscreteDist jump = dist_from_json(j.at("jump"));
            return kind == "renewal" ? Design::renewal(N, jump)
                                     : Design::equilibrium_renewal(N, jump);
        }
        if (kind == "circular") {
            const int N = j.at("N").get<int>();
            const int n = j.at("n").get<int>();
            const json& spj = j.at("spacings");
            const std::string fam = spj.at("family").get<std::string>();
            if (fam == "mnh") return Design::circular(N, n, SpacingFamily::mnh,
                                                      spj.at("r").get<double>());
            if (fam == "srs") return Design::circular(N, n, SpacingFamily::mnh, 1.0);
            if (fam == "mnom" || fam == "mult") return Design::circular(N, n, SpacingFamily::mnom);
            if (fam == "mh")
                return Design::circular(N, n, SpacingFamily::mh,
                                        static_cast<double>(spj.at("r").get<long long>()));
            throw domain_error("design_from_json: unknown spacing family \"" + fam + "\"");
        }
    } catch (const json::exception& e) {
        throw domain_error(std::string("design_from_json: ") + e.what());
    }
    throw domain_error("design_from_json: unknown kind \"" + kind + "\"");
}

// ---- Study config / report -------------------------------------------------

inline StudyConfig study_config_from_json(const json& j) {
    StudyConfig cfg;
    try {
        cfg.N = j.value("N", cfg.N);
        cfg.n = j.value("n", cfg.n);
        cfg.reps = j.value("reps", cfg.reps);
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.ar_coefficient = j.value("ar_coefficient", cfg.ar_coefficient);
        cfg.noise_sd = j.value("noise_sd", cfg.noise_sd);
        cfg.ci_level = j.value("ci_level", cfg.ci_level);
        if (j.contains("designs")) {
            for (const json& dj : j.at("designs")) {
                StudyDesign sd;
                sd.design = design_from_json(dj.contains("design") ? dj.at("design") : dj);
                sd.label = dj.value("label", std::string());
                if (sd.label.empty()) sd.label = to_json(sd.design).dump();
                cfg.designs.push_back(std::move(sd));
            }
        }
    } catch (const json::exception& e) {
        throw domain_error(std::string("study_config_from_json: ") + e.what());
    }
    return cfg;
}

inline json to_json(const StudyConfig& cfg) {
    json j{{"N", cfg.N},
           {"n", cfg.n},
           {"reps", cfg.reps},
           {"seed", cfg.seed},
           {"ar_coefficient", cfg.ar_coefficient},
           {"noise_sd", cfg.noise_sd},
           {"ci_level", cfg.ci_level}};
    if (!cfg.designs.empty()) {
        json arr = json::array();
        for (const auto& sd : cfg.designs)
            arr.push_back({{"label", sd.label}, {"design", to_json(sd.design)}});
        j["designs"] = arr;
    }
    return j;
}

inline json to_json(const DesignMetrics& m) {
    return {{"design", m.design},
            {"BR", m.br},
            {"SE", m.se},
            {"REVAR", m.revar},
            {"CV", m.cv},
            {"coverage", m.coverage},
            {"reps", m.reps},
            {"excluded", m.excluded},
            {"negative_variance", m.negative_variance}};
}

inline json to_json(const StudyReport& r) {
    json rows = json::array();
    for (const auto& m : r.rows) rows.push_back(to_json(m));
    return {{"seed", r.seed}, {"N", r.N},        {"n", r.n},
            {"reps", r.reps}, {"pop_mean", r.pop_mean}, {"designs", rows}};
}

inline json to_json(const EstimateResult& e) {
    json j{{"point", e.point},
           {"variance_ht", e.variance_ht},
           {"level", e.level}};
    if (std::isnan(e.variance_syg)) j["variance_syg"] = nullptr;
    else j["variance_syg"] = e.variance_syg;
    if (e.ci) j["ci"] = {{"low", e.ci->first}, {"high", e.ci->second}};
    else j["ci"] = nullptr;
    return j;
}

} // namespace spacesamp

#endif
