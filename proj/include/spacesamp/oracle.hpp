#ifndef SPACESAMP_ORACLE_HPP
#define SPACESAMP_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "design.hpp"
#include "discrete_dist.hpp"
#include "errors.hpp"
#include "inclusion.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace spacesamp {

// Ground-truth inclusion quantities obtained without any of the analytic
// shortcuts: either full support enumeration (circular designs) or the
// defining marginal series (renewal designs).
struct DesignEnumeration {
    std::vector<std::pair<std::vector<int>, double>> entries; // empty for renewal kinds
    std::vector<double> pi;                                   // 1-based
    std::vector<std::vector<double>> pikl;                    // [k][l], diagonal = pi_k
    double total_mass = 0.0;
};

namespace detail {

inline long long subset_count(int N, int n, long long cap) {
    long long c = 1;
    for (int i = 1; i <= n; ++i) {
        c = c * (N - n + i) / i; // exact: product of i consecutive ints divisible by i!
        if (c > cap) return cap + 1;
    }
    return c;
}

// Advance a sorted combination in colexicographic order; false when done.
inline bool next_combination(std::vector<int>& c, int N) {
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i) {
        const int limit = (i + 1 < n) ? c[i + 1] - 1 : N;
        if (c[i] < limit) {
            ++c[i];
            for (int j = 0; j < i; ++j) c[j] = j + 1;
            return true;
        }
    }
    return false;
}

} // namespace detail

// Walks every n-subset of {1..N}, evaluating the design pmf on each.
// Refuses frames with more than max_subsets subsets.
inline DesignEnumeration enumerate_circular(const Design& d, long long max_subsets = 1000000) {
    if (d.kind() != DesignKind::circular)
        throw domain_error("enumerate_circular: circular designs only");
    const int N = d.N(), n = d.n();
    if (detail::subset_count(N, n, max_subsets) > max_subsets)
        throw domain_error("enumerate_circular: subset space exceeds cap");

    DesignEnumeration out;
    out.pi.assign(static_cast<std::size_t>(N) + 1, 0.0);
    out.pikl.assign(static_cast<std::size_t>(N) + 1,
                    std::vector<double>(static_cast<std::size_t>(N) + 1, 0.0));
    CompensatedSum mass;

    std::vector<int> c(n);
    for (int i = 0; i < n; ++i) c[i] = i + 1;
    do {
        const double p = design_pmf(d, c);
        out.entries.emplace_back(c, p);
        mass.add(p);
        for (int i = 0; i < n; ++i) {
            out.pi[c[i]] += p;
            for (int j = i + 1; j < n; ++j) {
                out.pikl[c[i]][c[j]] += p;
                out.pikl[c[j]][c[i]] += p;
            }
        }
    } while (detail::next_combination(c, N));

    for (int k = 1; k <= N; ++k) out.pikl[k][k] = out.pi[k];
    out.total_mass = mass.value();
    return out;
}

// Exact marginals of a renewal design from the defining series: pi_k is the
// chance the chain visits k, and pi_kl = pi_k * Pr(visit l - k | fresh start)
// since the chain restarts at every visited unit.
inline DesignEnumeration enumerate_renewal(const DiscreteDist& jump_minus_one, int N,
                                           bool equilibrium) {
    if (N < 1) throw domain_error("enumerate_renewal: N >= 1");
    DesignEnumeration out;
    out.pi = equilibrium ? pi_first_equilibrium(jump_minus_one, N)
                         : pi_first_renewal(jump_minus_one, N);
    const ConvolutionTable t = ConvolutionTable::for_jump(jump_minus_one, N, N);
    out.pikl.assign(static_cast<std::size_t>(N) + 1,
                    std::vector<double>(static_cast<std::size_t>(N) + 1, 0.0));
    for (int k = 1; k <= N; ++k) {
        out.pikl[k][k] = out.pi[k];
        for (int l = k + 1; l <= N; ++l) {
            const double v = out.pi[k] * t.hit_probability(l - k);
            out.pikl[k][l] = v;
            out.pikl[l][k] = v;
        }
    }
    out.total_mass = 1.0;
    return out;
}

struct FrequencyReport {
    long long reps = 0;
    int distinct_subsets = 0;     // circular kinds only
    double max_abs_z_subset = 0;  // worst standardized subset-frequency deviation
    double max_abs_z_unit = 0;    // worst standardized unit-frequency deviation
    bool saw_impossible = false;  // a drawn sample had zero design probability
};

// Draws `reps` samples and standardizes observed frequencies against the
// exact probabilities. Deviations are in binomial standard-error units, so
// values beyond ~4 indicate a sampler/pmf mismatch.
inline FrequencyReport frequency_check(const Design& d, long long reps, RngStream& rng) {
    if (reps < 1) throw domain_error("frequency_check: reps >= 1");
    FrequencyReport rep;
    rep.reps = reps;
    const int N = d.N();
    std::vector<long long> unit_count(static_cast<std::size_t>(N) + 1, 0);

    if (d.kind() == DesignKind::circular) {
        const DesignEnumeration e = enumerate_circular(d);
        std::map<std::vector<int>, long long> counts;
        for (long long i = 0; i < reps; ++i) {
            const SampleDraw s = draw_circular(d, rng);
            ++counts[s.units];
            for (int u : s.units) ++unit_count[u];
        }
        rep.distinct_subsets = static_cast<int>(counts.size());
        for (const auto& [subset, p] : e.entries) {
            const auto it = counts.find(subset);
            const long long c = it == counts.end() ? 0 : it->second;
            if (p <= 0.0) {
                if (c > 0) rep.saw_impossible = true;
                continue;
            }
            const double se = std::sqrt(reps * p * (1.0 - p));
            const double z = se > 0.0 ? (c - reps * p) / se : 0.0;
            rep.max_abs_z_subset = std::max(rep.max_abs_z_subset, std::abs(z));
        }
        for (int k = 1; k <= N; ++k) {
            const double p = e.pi[k];
            if (p <= 0.0 || p >= 1.0) continue;
            const double z = (unit_count[k] - reps * p) / std::sqrt(reps * p * (1.0 - p));
            rep.max_abs_z_unit = std::max(rep.max_abs_z_unit, std::abs(z));
        }
        return rep;
    }

    const bool eq = d.kind() == DesignKind::equilibrium_renewal;
    const DesignEnumeration e = enumerate_renewal(d.jump(), N, eq);
    for (long long i = 0; i < reps; ++i) {
        const SampleDraw s = eq ? draw_equilibrium(d, rng) : draw_renewal(d, rng);
        for (int u : s.units) ++unit_count[u];
    }
    for (int k = 1; k <= N; ++k) {
        const double p = e.pi[k];
        if (p <= 0.0 || p >= 1.0) continue;
        const double z = (unit_count[k] - reps * p) / std::sqrt(reps * p * (1.0 - p));
        rep.max_abs_z_unit = std::max(rep.max_abs_z_unit, std::abs(z));
    }
    return rep;
}

} // namespace spacesamp

#endif
