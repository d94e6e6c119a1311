// Command-line front end: sample drawing, inclusion-probability tables,
// estimation, self-verification, and the replication study.
//
// Exit codes: 0 success, 1 usage/domain error, 2 internal consistency failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spacesamp/json_io.hpp"
#include "spacesamp/spacesamp.hpp"

namespace {

using namespace spacesamp;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Inline JSON, or @path to load from a file.
json load_json_arg(const std::string& arg) {
    const std::string text = (!arg.empty() && arg[0] == '@') ? read_file(arg.substr(1)) : arg;
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw domain_error(std::string("invalid JSON: ") + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw domain_error("cannot write file: " + path);
    out << text;
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::string token;
    for (char ch : text) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t' || ch == ';') {
            if (!token.empty()) {
                out.push_back(std::stod(token));
                token.clear();
            }
        } else {
            token += ch;
        }
    }
    if (!token.empty()) out.push_back(std::stod(token));
    return out;
}

struct Options {
    std::string design_arg, dist_arg, config_arg;
    std::string population_path, draw_path, units_arg;
    std::string output, output_json;
    std::string format = "csv";
    std::string what = "joint";
    std::uint64_t seed = 0;
    long long draws = 1;
    long long reps = 0;
    long long max_x = -1;
    int max_gap = 0;
    double level = 0.95;
    bool as_mean = false;
    bool seed_set = false;
};

int cmd_sample(const Options& o) {
    const Design d = design_from_json(load_json_arg(o.design_arg));
    std::ostringstream out;
    json arr = json::array();
    for (long long i = 0; i < o.draws; ++i) {
        RngStream rng = RngStream::derive(o.seed, 0, static_cast<std::uint64_t>(i));
        SampleDraw s = draw_sample(d, rng);
        s.seed = o.seed;
        if (o.format == "json") {
            arr.push_back({{"units", s.units}, {"spacings", s.spacings}, {"seed", s.seed}});
        } else {
            for (std::size_t k = 0; k < s.units.size(); ++k)
                out << (k ? "," : "") << s.units[k];
            out << "\n";
        }
    }
    if (o.format == "json") out << arr.dump(2) << "\n";
    write_text(o.output, out.str());
    return 0;
}

int cmd_inclusion(const Options& o) {
    const Design d = design_from_json(load_json_arg(o.design_arg));
    const JointProbMatrix probs = inclusion_summary(d);
    std::ostringstream out;
    if (o.what == "pi") {
        if (o.format == "json") {
            json arr = json::array();
            for (int k = 1; k <= d.N(); ++k) arr.push_back(probs.pi[k]);
            out << json{{"pi", arr}}.dump(2) << "\n";
        } else {
            out << "k,pi\n";
            for (int k = 1; k <= d.N(); ++k) out << k << "," << fmt(probs.pi[k]) << "\n";
        }
    } else if (o.what == "joint") {
        // Gap curve: joint probability of two units `gap` apart. For the
        // plain renewal kind this is anchored at the first unit.
        const int top = o.max_gap > 0 ? std::min(o.max_gap, d.N() - 1) : d.N() - 1;
        const double rate = d.rate();
        json arr = json::array();
        if (o.format != "json") out << "gap,pi_joint,delta\n";
        for (int g = 1; g <= top; ++g) {
            const double joint = probs.joint(1, 1 + g);
            const double dlt = delta(probs.pi[1], probs.pi[1 + g], joint);
            if (o.format == "json")
                arr.push_back({{"gap", g}, {"pi_joint", joint}, {"delta", dlt}});
            else
                out << g << "," << fmt(joint) << "," << fmt(dlt) << "\n";
        }
        (void)rate;
        if (o.format == "json") out << json{{"joint_by_gap", arr}}.dump(2) << "\n";
    } else {
        throw domain_error("inclusion: --what must be joint or pi");
    }
    write_text(o.output, out.str());
    return 0;
}

int cmd_pmf(const Options& o) {
    const DiscreteDist d = dist_from_json(load_json_arg(o.dist_arg));
    const long long top = o.max_x >= 0 ? o.max_x : d.truncation_point(1e-12);
    std::ostringstream out;
    if (o.format == "json") {
        json arr = json::array();
        for (long long x = 0; x <= top; ++x) arr.push_back(d.pmf(x));
        out << json{{"pmf", arr}}.dump(2) << "\n";
    } else {
        out << "x,pmf\n";
        for (long long x = 0; x <= top; ++x) out << x << "," << fmt(d.pmf(x)) << "\n";
    }
    write_text(o.output, out.str());
    return 0;
}

int cmd_estimate(const Options& o) {
    const Design d = design_from_json(load_json_arg(o.design_arg));
    const PopulationData pop = PopulationData::from_values(parse_numbers(read_file(o.population_path)));
    if (pop.N() != d.N()) throw domain_error("estimate: population size differs from design N");

    std::vector<int> units;
    const std::string draw_text = o.draw_path.empty() ? o.units_arg : read_file(o.draw_path);
    for (double v : parse_numbers(draw_text)) {
        const int u = static_cast<int>(std::llround(v));
        if (u < 1 || u > d.N()) throw domain_error("estimate: unit index out of range");
        units.push_back(u);
    }
    if (units.empty()) throw domain_error("estimate: no sampled units given");
    std::sort(units.begin(), units.end());
    if (std::adjacent_find(units.begin(), units.end()) != units.end())
        throw domain_error("estimate: duplicate unit index");

    const JointProbMatrix probs = inclusion_summary(d);
    EstimateResult r = estimate_sample(units, pop, probs, o.level);
    if (o.as_mean) {
        const double Nd = pop.N();
        r.point /= Nd;
        r.variance_ht /= Nd * Nd;
        if (!std::isnan(r.variance_syg)) r.variance_syg /= Nd * Nd;
        if (r.ci) r.ci = std::make_pair(r.ci->first / Nd, r.ci->second / Nd);
    }
    write_text(o.output, to_json(r).dump(2) + "\n");
    return 0;
}

int cmd_verify(const Options& o) {
    const Design d = design_from_json(load_json_arg(o.design_arg));
    json checks = json::array();
    bool all_pass = true;
    auto record = [&](const std::string& name, double value, double threshold) {
        const bool pass = std::isfinite(value) && value <= threshold;
        checks.push_back(
            {{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
        all_pass = all_pass && pass;
    };

    if (d.kind() == DesignKind::circular) {
        const DesignEnumeration e = enumerate_circular(d);
        record("total_mass_dev", std::abs(e.total_mass - 1.0), 1e-9);

        double dev_pi = 0.0;
        for (int k = 1; k <= d.N(); ++k) dev_pi = std::max(dev_pi, std::abs(e.pi[k] - d.rate()));
        record("pi_uniform_dev", dev_pi, 1e-9);

        double dev_gap = 0.0; // same-gap joints must agree
        double dev_formula = 0.0;
        for (int g = 1; g <= d.N() - 1; ++g) {
            const double formula = pi_joint_fixed(d.spacings(), d.N(), d.n(), g);
            for (int k = 1; k + g <= d.N(); ++k) {
                dev_gap = std::max(dev_gap, std::abs(e.pikl[k][k + g] - e.pikl[1][1 + g]));
                dev_formula = std::max(dev_formula, std::abs(e.pikl[k][k + g] - formula));
            }
        }
        record("joint_gap_dependence_dev", dev_gap, 1e-12);
        record("joint_formula_dev", dev_formula, 1e-9);

        const std::vector<double> rows = matrix_A_rowsums(d.spacings(), d.N(), d.n());
        double dev_rows = 0.0;
        for (int k = 1; k <= d.N(); ++k) dev_rows = std::max(dev_rows, std::abs(rows[k] - d.n()));
        record("matrix_rowsum_dev", dev_rows, 1e-9);
    } else {
        const bool eq = d.kind() == DesignKind::equilibrium_renewal;
        if (eq) {
            try {
                pi_first_equilibrium(d.jump(), d.N());
                record("pi_flatness_dev", 0.0, 1e-9);
            } catch (const consistency_error&) {
                record("pi_flatness_dev", INFINITY, 1e-9);
            }
        }
        double dev_joint = 0.0;
        bool has_closed = true;
        const int top = std::min(d.N() - 1, 200);
        for (int g = 1; g <= top && has_closed; ++g) {
            try {
                const double a = pi_joint_renewal(d.jump(), d.rate(), 1, 1 + g);
                const double b = pi_joint_renewal_generic(d.jump(), d.rate(), 1, 1 + g);
                dev_joint = std::max(dev_joint, std::abs(a - b));
            } catch (const domain_error&) {
                has_closed = false;
            }
        }
        if (has_closed && top >= 1) record("joint_closed_vs_generic_dev", dev_joint, 1e-10);
    }

    if (o.reps > 0) {
        if (!o.seed_set) throw domain_error("verify: --seed required with --reps");
        RngStream rng = RngStream::derive(o.seed, 99, 0);
        const FrequencyReport fr = frequency_check(d, o.reps, rng);
        record("frequency_max_abs_z",
               std::max(fr.max_abs_z_subset, fr.max_abs_z_unit) + (fr.saw_impossible ? 1e9 : 0.0),
               5.0);
    }

    const json report{{"design", to_json(d)}, {"checks", checks}, {"pass", all_pass}};
    write_text(o.output, report.dump(2) + "\n");
    if (!all_pass) throw consistency_error("verify: checks failed");
    return 0;
}

std::string study_csv(const StudyReport& r) {
    std::ostringstream out;
    out << "design,BR,SE,REVAR,CV,coverage,reps,excluded\n";
    for (const auto& m : r.rows) {
        out << m.design << "," << fmt(m.br) << "," << fmt(m.se) << "," << fmt(m.revar) << ","
            << fmt(m.cv) << "," << fmt(m.coverage) << "," << m.reps << "," << m.excluded << "\n";
    }
    return out.str();
}

int cmd_simulate(const Options& o) {
    StudyConfig cfg = study_config_from_json(load_json_arg(o.config_arg));
    if (o.seed_set) cfg.seed = o.seed;
    else if (!load_json_arg(o.config_arg).contains("seed"))
        throw domain_error("simulate: a seed is required (config \"seed\" or --seed)");
    const StudyReport report = run_study(cfg);
    if (!o.output_json.empty()) write_text(o.output_json, to_json(report).dump(2) + "\n");
    write_text(o.output, study_csv(report));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spacing-driven sampling designs: draws, inclusion probabilities, estimation"};
    app.require_subcommand(1);
    Options o;

    auto* sc_sample = app.add_subcommand("sample", "Draw samples from a design");
    sc_sample->add_option("--design", o.design_arg, "Design JSON (inline or @file)")->required();
    sc_sample->add_option("--seed", o.seed, "RNG seed")->required();
    sc_sample->add_option("--draws", o.draws, "Number of samples to draw");
    sc_sample->add_option("--format", o.format, "csv or json");
    sc_sample->add_option("--output", o.output, "Output path (default stdout)");

    auto* sc_incl = app.add_subcommand("inclusion", "Inclusion probability tables");
    sc_incl->add_option("--design", o.design_arg, "Design JSON (inline or @file)")->required();
    sc_incl->add_option("--what", o.what, "joint (gap curve) or pi (per-unit vector)");
    sc_incl->add_option("--max-gap", o.max_gap, "Largest gap for the joint curve");
    sc_incl->add_option("--format", o.format, "csv or json");
    sc_incl->add_option("--output", o.output, "Output path (default stdout)");

    auto* sc_pmf = app.add_subcommand("pmf", "Tabulate a distribution pmf");
    sc_pmf->add_option("--dist", o.dist_arg, "Distribution JSON (inline or @file)")->required();
    sc_pmf->add_option("--max", o.max_x, "Largest x (default: 1e-12 tail cutoff)");
    sc_pmf->add_option("--format", o.format, "csv or json");
    sc_pmf->add_option("--output", o.output, "Output path (default stdout)");

    auto* sc_est = app.add_subcommand("estimate", "Expansion estimate for a drawn sample");
    sc_est->add_option("--design", o.design_arg, "Design JSON (inline or @file)")->required();
    sc_est->add_option("--population", o.population_path, "CSV of y values, one per unit")
        ->required();
    sc_est->add_option("--draw", o.draw_path, "File with sampled unit indexes");
    sc_est->add_option("--units", o.units_arg, "Sampled unit indexes, comma separated");
    sc_est->add_option("--level", o.level, "Confidence level (default 0.95)");
    sc_est->add_flag("--mean", o.as_mean, "Report the mean instead of the total");
    sc_est->add_option("--output", o.output, "Output path (default stdout)");

    auto* sc_verify = app.add_subcommand("verify", "Cross-check a design against its oracle");
    sc_verify->add_option("--design", o.design_arg, "Design JSON (inline or @file)")->required();
    sc_verify->add_option("--reps", o.reps, "Monte Carlo draws for the frequency check");
    sc_verify->add_option("--seed", o.seed, "Seed for the frequency check")
        ->each([&o](const std::string&) { o.seed_set = true; });
    sc_verify->add_option("--output", o.output, "Output path (default stdout)");

    auto* sc_sim = app.add_subcommand("simulate", "Run the replication study");
    sc_sim->add_option("--config", o.config_arg, "Study config JSON (inline or @file)")
        ->required();
    sc_sim->add_option("--seed", o.seed, "Seed override")
        ->each([&o](const std::string&) { o.seed_set = true; });
    sc_sim->add_option("--output", o.output, "CSV output path (default stdout)");
    sc_sim->add_option("--output-json", o.output_json, "Also write a JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_sample->parsed()) return cmd_sample(o);
        if (sc_incl->parsed()) return cmd_inclusion(o);
        if (sc_pmf->parsed()) return cmd_pmf(o);
        if (sc_est->parsed()) return cmd_estimate(o);
        if (sc_verify->parsed()) return cmd_verify(o);
        if (sc_sim->parsed()) return cmd_simulate(o);
    } catch (const spacesamp::consistency_error& e) {
        std::cerr << nlohmann::json{{"error", "consistency"}, {"message", e.what()}}.dump()
                  << std::endl;
        return 2;
    } catch (const spacesamp::domain_error& e) {
        std::cerr << nlohmann::json{{"error", "domain"}, {"message", e.what()}}.dump()
                  << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump()
                  << std::endl;
        return 1;
    }
    return 1;
}
