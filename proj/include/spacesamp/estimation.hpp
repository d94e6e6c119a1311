#ifndef SPACESAMP_ESTIMATION_HPP
#define SPACESAMP_ESTIMATION_HPP

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "inclusion.hpp"
#include "special.hpp"

namespace spacesamp {

// Study variable values, 1-based like everything unit-indexed here.
struct PopulationData {
    std::vector<double> y; // y[0] unused

    int N() const { return static_cast<int>(y.size()) - 1; }

    static PopulationData from_values(const std::vector<double>& vals) {
        PopulationData p;
        p.y.assign(vals.size() + 1, 0.0);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!std::isfinite(vals[i])) throw domain_error("population: values must be finite");
            p.y[i + 1] = vals[i];
        }
        return p;
    }

    double total() const {
        CompensatedSum s;
        for (int k = 1; k <= N(); ++k) s.add(y[k]);
        return s.value();
    }
};

// Expansion estimator of the population total: sum of y_k / pi_k over the
// sampled units.
inline double ht_total(const std::vector<int>& units, const PopulationData& pop,
                       const std::vector<double>& pi) {
    CompensatedSum s;
    for (int k : units) {
        if (k < 1 || k > pop.N()) throw domain_error("ht_total: unit out of range");
        if (!(pi[k] > 0.0)) throw domain_error("ht_total: zero inclusion probability at unit " +
                                               std::to_string(k));
        s.add(pop.y[k] / pi[k]);
    }
    return s.value();
}

inline double ht_mean(const std::vector<int>& units, const PopulationData& pop,
                      const std::vector<double>& pi) {
    return ht_total(units, pop, pi) / pop.N();
}

// Variance estimator of the expansion total from the covariance identity:
// sum over sampled pairs of (y_k y_l / (pi_k pi_l)) * Delta_kl / pi_kl,
// with the diagonal contributing (y_k/pi_k)^2 (1 - pi_k).
template <typename PairProb>
double var_ht(const std::vector<int>& units, const PopulationData& pop,
              const std::vector<double>& pi, PairProb&& pikl) {
    CompensatedSum s;
    const int m = static_cast<int>(units.size());
    for (int i = 0; i < m; ++i) {
        const int k = units[i];
        const double ek = pop.y[k] / pi[k];
        s.add(ek * ek * (1.0 - pi[k]));
        for (int j = i + 1; j < m; ++j) {
            const int l = units[j];
            const double pkl = pikl(k, l);
            if (!(pkl > 0.0))
                throw non_estimable_error(k, l, "var_ht: zero joint probability for pair (" +
                                                    std::to_string(k) + "," + std::to_string(l) +
                                                    ")");
            const double el = pop.y[l] / pi[l];
            s.add(2.0 * ek * el * (pkl - pi[k] * pi[l]) / pkl);
        }
    }
    return s.value();
}

// Fixed-size-design variance estimator (contrast form): guaranteed
// nonnegative whenever all pair deltas are nonpositive. Only meaningful for
// designs with a fixed sample size.
template <typename PairProb>
double var_syg(const std::vector<int>& units, const PopulationData& pop,
               const std::vector<double>& pi, PairProb&& pikl) {
    CompensatedSum s;
    const int m = static_cast<int>(units.size());
    for (int i = 0; i < m; ++i) {
        const int k = units[i];
        const double ek = pop.y[k] / pi[k];
        for (int j = i + 1; j < m; ++j) {
            const int l = units[j];
            const double pkl = pikl(k, l);
            if (!(pkl > 0.0))
                throw non_estimable_error(k, l, "var_syg: zero joint probability for pair (" +
                                                    std::to_string(k) + "," + std::to_string(l) +
                                                    ")");
            const double d = ek - pop.y[l] / pi[l];
            s.add(d * d * (pi[k] * pi[l] - pkl) / pkl);
        }
    }
    return s.value();
}

// Central normal interval. Returns nothing when the variance estimate is
// negative (the interval is then undefined, not zero-width).
inline std::optional<std::pair<double, double>> confidence_interval(double point, double variance,
                                                                    double level) {
    if (!(level > 0.0 && level < 1.0)) throw domain_error("confidence_interval: level in (0,1)");
    if (variance < 0.0) return std::nullopt;
    const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(variance);
    return std::make_pair(point - half, point + half);
}

struct EstimateResult {
    double point = 0.0;          // expansion estimate of the total
    double variance_ht = 0.0;    // covariance-identity estimator
    double variance_syg = 0.0;   // contrast estimator (fixed-size designs); NaN otherwise
    double level = 0.95;
    std::optional<std::pair<double, double>> ci; // from variance_syg when available, else var_ht
};

// Full estimate for a drawn sample under a design with known inclusion
// probabilities.
inline EstimateResult estimate_sample(const std::vector<int>& units, const PopulationData& pop,
                                      const JointProbMatrix& probs, double level = 0.95) {
    if (probs.N != pop.N()) throw domain_error("estimate_sample: population/design size mismatch");
    EstimateResult r;
    r.level = level;
    r.point = ht_total(units, pop, probs.pi);
    r.variance_ht = var_ht(units, pop, probs.pi, probs);
    if (probs.circular) {
        r.variance_syg = var_syg(units, pop, probs.pi, probs);
        r.ci = confidence_interval(r.point, r.variance_syg, level);
    } else {
        r.variance_syg = std::nan("");
        r.ci = confidence_interval(r.point, r.variance_ht, level);
    }
    return r;
}

} // namespace spacesamp

#endif
