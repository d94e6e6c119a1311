#ifndef SPACESAMP_SIMLAB_HPP
#define SPACESAMP_SIMLAB_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "design.hpp"
#include "estimation.hpp"
#include "inclusion.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace spacesamp {

struct StudyDesign {
    std::string label;
    Design design;
};

struct StudyConfig {
    int N = 200;
    int n = 50;
    long long reps = 100000;
    std::uint64_t seed = 0;
    double ar_coefficient = 0.6;
    double noise_sd = 0.3;
    double ci_level = 0.95;
    std::vector<StudyDesign> designs; // empty selects standard_study_designs(N, n)
};

// Replication metrics for one design, all on the mean scale:
//   br        100 * (mean of estimate - true mean) / sd of estimate
//   se        sd of the estimate across replicates
//   revar     sqrt(mean of the variance estimates)
//   cv        sd of the variance estimates / variance of the estimate
//   coverage  percent of replicates whose central CI covers the true mean
// Degenerate 0/0 ratios (census designs) are reported as 0.
struct DesignMetrics {
    std::string design;
    double br = 0, se = 0, revar = 0, cv = 0, coverage = 0;
    long long reps = 0;
    long long excluded = 0;          // replicates hitting a zero-joint pair
    long long negative_variance = 0; // variance estimate below zero (CI undefined, counted missed)
};

struct StudyReport {
    std::uint64_t seed = 0;
    int N = 0, n = 0;
    long long reps = 0;
    double pop_mean = 0.0;
    std::vector<DesignMetrics> rows;
};

// Linear trend plus stationary AR(1) noise: y_k = k + z_k with
// z_k = rho z_{k-1} + eps_k, z_0 drawn from the stationary law.
inline PopulationData gen_population(int N, double ar_coefficient, double noise_sd,
                                     RngStream& rng) {
    if (N < 1) throw domain_error("gen_population: N >= 1");
    if (!(std::abs(ar_coefficient) < 1.0))
        throw domain_error("gen_population: |ar coefficient| < 1 required");
    if (!(noise_sd >= 0.0)) throw domain_error("gen_population: noise sd >= 0");
    PopulationData pop;
    pop.y.assign(static_cast<std::size_t>(N) + 1, 0.0);
    double z = noise_sd == 0.0
                   ? 0.0
                   : normal_quantile(rng.uniform01()) * noise_sd /
                         std::sqrt(1.0 - ar_coefficient * ar_coefficient);
    for (int k = 1; k <= N; ++k) {
        const double eps = noise_sd == 0.0 ? 0.0 : normal_quantile(rng.uniform01()) * noise_sd;
        z = ar_coefficient * z + eps;
        pop.y[k] = static_cast<double>(k) + z;
    }
    return pop;
}

namespace detail {

inline std::string fmt_param(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", r);
    return buf;
}

} // namespace detail

// The ten fixed-size designs compared throughout: attraction parameters
// sweeping from strong clustering (mnh r = 0.5) through independence-like
// spacings (mnom) to strong repulsion (mh r = 4), in decreasing order of
// spacing variance.
inline std::vector<StudyDesign> standard_study_designs(int N, int n) {
    std::vector<StudyDesign> out;
    for (double r : {0.5, 1.0, 5.0, 10.0, 50.0}) {
        const std::string label = r == 1.0 ? "SRS" : "MNH_r=" + detail::fmt_param(r);
        out.push_back({label, Design::circular(N, n, SpacingFamily::mnh, r)});
    }
    out.push_back({"MULT", Design::circular(N, n, SpacingFamily::mnom)});
    for (long long r : {50, 10, 6, 4})
        out.push_back({"MH_r=" + std::to_string(r),
                       Design::circular(N, n, SpacingFamily::mh, static_cast<double>(r))});
    return out;
}

namespace detail {

inline double sd_from(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    CompensatedSum s;
    for (double x : v) s.add((x - mean) * (x - mean));
    return std::sqrt(s.value() / (static_cast<double>(v.size()) - 1.0));
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

} // namespace detail

// Runs the replication study. Replicate i of design d uses the stream keyed
// by (seed, d+1, i+1); the population uses (seed, 0, 0). Aggregation is a
// fixed-order reduction over stored per-replicate values, so the report is
// reproducible bit for bit from the seed.
inline StudyReport run_study(const StudyConfig& cfg) {
    if (cfg.reps < 2) throw domain_error("run_study: reps >= 2 required");
    const std::vector<StudyDesign> designs =
        cfg.designs.empty() ? standard_study_designs(cfg.N, cfg.n) : cfg.designs;
    for (const auto& sd : designs)
        if (sd.design.kind() != DesignKind::circular)
            throw domain_error("run_study: fixed-size circular designs only");

    RngStream pop_rng = RngStream::derive(cfg.seed, 0, 0);
    const PopulationData pop = gen_population(cfg.N, cfg.ar_coefficient, cfg.noise_sd, pop_rng);
    const double ybar = pop.total() / cfg.N;

    StudyReport report;
    report.seed = cfg.seed;
    report.N = cfg.N;
    report.n = cfg.n;
    report.reps = cfg.reps;
    report.pop_mean = ybar;

    const double zq = normal_quantile(0.5 * (1.0 + cfg.ci_level));
    const double Nd = static_cast<double>(cfg.N);

    for (std::size_t di = 0; di < designs.size(); ++di) {
        const Design& d = designs[di].design;
        const JointProbMatrix probs = inclusion_summary(d);

        std::vector<double> est;
        est.reserve(cfg.reps);
        std::vector<double> vhat; // mean-scale variance estimates, valid replicates only
        vhat.reserve(cfg.reps);
        long long excluded = 0, negvar = 0, covered = 0, judged = 0;

        for (long long i = 0; i < cfg.reps; ++i) {
            RngStream rng = RngStream::derive(cfg.seed, di + 1, static_cast<std::uint64_t>(i) + 1);
            const SampleDraw s = draw_circular(d, rng);
            const double em = ht_total(s.units, pop, probs.pi) / Nd;
            est.push_back(em);
            try {
                const double v = var_syg(s.units, pop, probs.pi, probs) / (Nd * Nd);
                vhat.push_back(v);
                ++judged;
                if (v < 0.0) {
                    ++negvar; // no interval; cannot cover
                } else {
                    const double half = zq * std::sqrt(v);
                    if (em - half <= ybar && ybar <= em + half) ++covered;
                }
            } catch (const non_estimable_error&) {
                ++excluded;
            }
        }

        DesignMetrics m;
        m.design = designs[di].label;
        m.reps = cfg.reps;
        m.excluded = excluded;
        m.negative_variance = negvar;

        const double est_mean = detail::mean_of(est);
        const double est_sd = detail::sd_from(est, est_mean);
        const double bias = est_mean - ybar;
        // spread at the rounding floor means a deterministic estimate; ratios
        // against it are noise, not signal
        const bool degenerate = est_sd <= 1e-12 * (std::abs(est_mean) + 1.0);
        m.se = est_sd;
        m.br = degenerate ? 0.0 : 100.0 * bias / est_sd;

        const double v_mean = detail::mean_of(vhat);
        const double v_sd = detail::sd_from(vhat, v_mean);
        m.revar = v_mean >= 0.0 ? std::sqrt(v_mean) : -std::sqrt(-v_mean);
        m.cv = degenerate ? 0.0 : v_sd / (est_sd * est_sd);
        if (judged > 0)
            m.coverage = 100.0 * static_cast<double>(covered) / static_cast<double>(judged);
        else
            m.coverage = degenerate ? 100.0 : std::nan("");

        report.rows.push_back(std::move(m));
    }
    return report;
}

} // namespace spacesamp

#endif
