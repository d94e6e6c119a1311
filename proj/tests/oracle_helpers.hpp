#ifndef SPACESAMP_TESTS_ORACLE_HELPERS_HPP
#define SPACESAMP_TESTS_ORACLE_HELPERS_HPP

// Brute-force reference implementations for the test suite. Everything here
// is deliberately naive: plain summation loops and explicit convolutions,
// sharing no code path with the library's analytic evaluations.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spacesamp/discrete_dist.hpp"

namespace testoracle {

// Sum of pmf over {0..cap} by direct evaluation.
inline double pmf_mass(const spacesamp::DiscreteDist& d, long long cap) {
    double s = 0.0;
    for (long long x = 0; x <= cap; ++x) s += d.pmf(x);
    return s;
}

inline double moment_by_summation(const spacesamp::DiscreteDist& d, int order, long long cap) {
    double s = 0.0;
    for (long long x = 0; x <= cap; ++x) s += std::pow(static_cast<double>(x), order) * d.pmf(x);
    return s;
}

struct MeanVar {
    double mean;
    double var;
};

inline MeanVar mean_var_by_summation(const spacesamp::DiscreteDist& d, long long cap) {
    const double m1 = moment_by_summation(d, 1, cap);
    const double m2 = moment_by_summation(d, 2, cap);
    return {m1, m2 - m1 * m1};
}

// Pr(X >= x) by summing the pmf upward.
inline double survival_by_summation(const spacesamp::DiscreteDist& d, long long x, long long cap) {
    double s = 0.0;
    for (long long t = x; t <= cap; ++t) s += d.pmf(t);
    return s;
}

// Discrete convolution of pmf vectors indexed from 0.
inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline std::vector<double> pmf_table(const spacesamp::DiscreteDist& d, long long cap) {
    std::vector<double> out(static_cast<std::size_t>(cap) + 1);
    for (long long x = 0; x <= cap; ++x) out[x] = d.pmf(x);
    return out;
}

// Visit every vector of `n` nonnegative integers summing to `m`.
inline void for_each_composition(long long m, int n,
                                 const std::function<void(const std::vector<long long>&)>& fn) {
    std::vector<long long> x(n, 0);
    std::function<void(int, long long)> rec = [&](int i, long long rem) {
        if (i == n - 1) {
            x[i] = rem;
            fn(x);
            return;
        }
        for (long long v = 0; v <= rem; ++v) {
            x[i] = v;
            rec(i + 1, rem - v);
        }
    };
    if (n == 0) return;
    rec(0, m);
}

// Exact outcome enumeration of a renewal-chain design with a finite-support
// jump: every reachable sample with its probability, including the empty one.
// The jump argument is the law of J - 1 and must have bounded support.
inline std::vector<std::pair<std::vector<int>, double>>
renewal_outcomes(const spacesamp::DiscreteDist& jump_minus_one, int N, bool equilibrium) {
    const long long jmax = 1 + jump_minus_one.support_upper();
    if (jmax < 1) throw std::logic_error("renewal_outcomes: need a bounded jump law");

    std::vector<std::pair<std::vector<int>, double>> out;
    std::vector<int> units;
    std::function<void(long long, double)> rec = [&](long long pos, double prob) {
        for (long long j = 1; j <= jmax; ++j) {
            const double pj = jump_minus_one.pmf(j - 1);
            if (pj == 0.0) continue;
            if (pos + j > N) {
                out.emplace_back(units, prob * pj);
                continue;
            }
            units.push_back(static_cast<int>(pos + j));
            rec(pos + j, prob * pj);
            units.pop_back();
        }
    };

    if (!equilibrium) {
        rec(0, 1.0);
        return out;
    }
    const double mu = jump_minus_one.mean_var().mean + 1.0;
    double overshoot = 0.0;
    for (long long j0 = 1; j0 <= jmax; ++j0) {
        const double pj0 = survival_by_summation(jump_minus_one, j0 - 1, jmax) / mu;
        if (pj0 == 0.0) continue;
        if (j0 > N) {
            overshoot += pj0;
            continue;
        }
        units.push_back(static_cast<int>(j0));
        rec(j0, pj0);
        units.pop_back();
    }
    if (overshoot > 0.0) out.emplace_back(std::vector<int>{}, overshoot);
    return out;
}

// Two-sided standard normal quantiles, frozen from reference tables.
inline constexpr double kZ95 = 1.959963984540054;  // level 0.95
inline constexpr double kZ50 = 0.6744897501960817; // level 0.50

} // namespace testoracle

#endif
