#ifndef SPACESAMP_INCLUSION_HPP
#define SPACESAMP_INCLUSION_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "design.hpp"
#include "discrete_dist.hpp"
#include "errors.hpp"
#include "spacing_vector_dist.hpp"
#include "special.hpp"

namespace spacesamp {

// j-fold convolutions of a jump law supported on {1, 2, ...}.
// Entries with k <= max_value are exact: truncation only removes mass that
// lives beyond the window, never mass inside it.
class ConvolutionTable {
public:
    // jump_pmf[k] = Pr(J = k) for k = 1..max_value; index 0 is ignored.
    ConvolutionTable(std::vector<double> jump_pmf, int max_terms)
        : jmax_(max_terms), kmax_(static_cast<int>(jump_pmf.size()) - 1) {
        if (kmax_ < 1) throw domain_error("ConvolutionTable: empty jump pmf");
        if (jmax_ < 1) throw domain_error("ConvolutionTable: max_terms >= 1 required");
        double total = 0.0;
        for (int k = 1; k <= kmax_; ++k) {
            if (jump_pmf[k] < -1e-15) throw domain_error("ConvolutionTable: negative pmf value");
            total += jump_pmf[k];
        }
        if (total > 1.0 + 1e-9) throw domain_error("ConvolutionTable: pmf mass exceeds 1");
        jump_pmf[0] = 0.0;

        rows_.assign(jmax_ + 1, std::vector<double>(kmax_ + 1, 0.0));
        rows_[1] = jump_pmf;
        for (int j = 2; j <= jmax_; ++j) {
            for (int k = j; k <= kmax_; ++k) {
                double s = 0.0;
                for (int t = 1; t <= k - (j - 1); ++t) s += rows_[j - 1][k - t] * jump_pmf[t];
                rows_[j][k] = s;
            }
        }
        hit_.assign(kmax_ + 1, 0.0);
        for (int k = 1; k <= kmax_; ++k) {
            double s = 0.0;
            for (int j = 1; j <= std::min(k, jmax_); ++j) s += rows_[j][k];
            hit_[k] = s;
        }
    }

    // Table for a jump J = 1 + X with X ~ jump_minus_one.
    static ConvolutionTable for_jump(const DiscreteDist& jump_minus_one, int max_terms,
                                     int max_value) {
        std::vector<double> f(static_cast<std::size_t>(max_value) + 1, 0.0);
        for (int k = 1; k <= max_value; ++k) f[k] = jump_minus_one.pmf(k - 1);
        return ConvolutionTable(std::move(f), max_terms);
    }

    int max_terms() const { return jmax_; }
    int max_value() const { return kmax_; }

    // f^{j*}(k): probability that j consecutive jumps total exactly k.
    double convolved_pmf(int j, int k) const {
        if (j < 1 || j > jmax_ || k < 0 || k > kmax_)
            throw domain_error("convolved_pmf: index out of range");
        return rows_[j][k];
    }

    // Probability that the chain started at 0 ever visits k (any number of
    // jumps); complete for k <= max_terms.
    double hit_probability(int k) const {
        if (k < 1 || k > kmax_) throw domain_error("hit_probability: index out of range");
        return hit_[k];
    }

private:
    int jmax_;
    int kmax_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> hit_;
};

// First-order inclusion probabilities of the plain renewal design, as a
// 1-based vector (slot 0 unused): pi[k] = sum_j f^{j*}(k).
inline std::vector<double> pi_first_renewal(const DiscreteDist& jump_minus_one, int N) {
    if (N < 1) throw domain_error("pi_first_renewal: N >= 1");
    const ConvolutionTable t = ConvolutionTable::for_jump(jump_minus_one, N, N);
    std::vector<double> pi(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 1; k <= N; ++k) pi[k] = t.hit_probability(k);
    return pi;
}

// Stationary-delay profile pi[k] = Pr(unit k selected) for the equilibrium
// design. The profile must come out flat at 1/E(J); a violation indicates a
// numerical fault and raises consistency_error.
inline std::vector<double> pi_first_equilibrium(const DiscreteDist& jump_minus_one, int N,
                                                double flatness_tol = 1e-9) {
    if (N < 1) throw domain_error("pi_first_equilibrium: N >= 1");
    const double mu = jump_minus_one.mean() + 1.0;
    // delay pmf: Pr(first unit = u) = Pr(J >= u) / mu = Pr(X >= u-1) / mu
    std::vector<double> delay(static_cast<std::size_t>(N) + 1, 0.0);
    for (int u = 1; u <= N; ++u) delay[u] = jump_minus_one.survival(u - 1) / mu;
    const ConvolutionTable t = ConvolutionTable::for_jump(jump_minus_one, N, N);

    std::vector<double> pi(static_cast<std::size_t>(N) + 1, 0.0);
    for (int u = 1; u <= N; ++u) {
        CompensatedSum s;
        s.add(delay[u]);
        for (int v = 1; v < u; ++v) s.add(delay[v] * t.hit_probability(u - v));
        pi[u] = s.value();
        if (std::abs(pi[u] - 1.0 / mu) > flatness_tol)
            throw consistency_error("pi_first_equilibrium: profile not flat at unit " +
                                    std::to_string(u));
    }
    return pi;
}

namespace detail {

// Law of the total displacement after j jumps, when the jump family is
// closed under convolution; unset otherwise.
inline std::optional<DiscreteDist> jump_sum_minus_terms(const DiscreteDist& jump_minus_one,
                                                        int j) {
    switch (jump_minus_one.family()) {
        case DistFamily::geometric:
            return DiscreteDist::neg_binomial(j, jump_minus_one.p());
        case DistFamily::neg_binomial:
            return DiscreteDist::neg_binomial(j * jump_minus_one.r(), jump_minus_one.p());
        case DistFamily::poisson:
            return DiscreteDist::poisson(j * jump_minus_one.lambda());
        case DistFamily::bernoulli:
            return DiscreteDist::binomial(j, jump_minus_one.p());
        case DistFamily::binomial:
            return DiscreteDist::binomial(j * jump_minus_one.n_trials(), jump_minus_one.p());
        case DistFamily::degenerate:
            return DiscreteDist::degenerate(j * jump_minus_one.c_value());
        default:
            return std::nullopt;
    }
}

} // namespace detail

// Hit probability sum_{j=1}^{gap} f^{j*}(gap) evaluated through per-family
// closed forms when available: after j jumps the position is j plus a single
// convolution-stable variate, so each term is one pmf evaluation.
inline double hit_probability_closed(const DiscreteDist& jump_minus_one, int gap) {
    if (gap < 1) throw domain_error("hit_probability_closed: gap >= 1");
    if (jump_minus_one.family() == DistFamily::degenerate) {
        const long long step = jump_minus_one.c_value() + 1;
        return gap % step == 0 ? 1.0 : 0.0;
    }
    CompensatedSum s;
    for (int j = 1; j <= gap; ++j) {
        const auto sum_law = detail::jump_sum_minus_terms(jump_minus_one, j);
        if (!sum_law)
            throw domain_error("hit_probability_closed: family has no closed form");
        s.add(sum_law->pmf(gap - j));
    }
    return s.value();
}

// Joint inclusion probability pi_{k,l} = rate * sum_j f^{j*}(l-k) for a
// constant-rate renewal design (equilibrium delay, or any memoryless /
// systematic case). Uses the closed forms when the family has them and a
// convolution table otherwise.
inline double pi_joint_renewal(const DiscreteDist& jump_minus_one, double rate, int k, int l) {
    if (!(rate > 0.0 && rate <= 1.0)) throw domain_error("pi_joint_renewal: rate in (0,1]");
    if (l <= k) throw domain_error("pi_joint_renewal: need k < l");
    const int gap = l - k;
    if (detail::jump_sum_minus_terms(jump_minus_one, 1) ||
        jump_minus_one.family() == DistFamily::degenerate)
        return rate * hit_probability_closed(jump_minus_one, gap);
    const ConvolutionTable t = ConvolutionTable::for_jump(jump_minus_one, gap, gap);
    return rate * t.hit_probability(gap);
}

// Same value by explicit convolution only; the generic cross-check route.
inline double pi_joint_renewal_generic(const DiscreteDist& jump_minus_one, double rate, int k,
                                       int l) {
    if (l <= k) throw domain_error("pi_joint_renewal_generic: need k < l");
    const int gap = l - k;
    const ConvolutionTable t = ConvolutionTable::for_jump(jump_minus_one, gap, gap);
    return rate * t.hit_probability(gap);
}

// Joint inclusion probability of two units `gap` apart (1 <= gap <= N-1)
// under the fixed-size circular design: (n/N) * sum_j Pr(j counts + j = gap).
inline double pi_joint_fixed(const SpacingVectorDist& sp, int N, int n, int gap) {
    if (sp.n() != n || sp.m() != static_cast<long long>(N) - n)
        throw domain_error("pi_joint_fixed: spacing law inconsistent with N, n");
    if (gap < 1 || gap > N - 1) throw domain_error("pi_joint_fixed: gap in 1..N-1");
    CompensatedSum s;
    const int top = std::min(gap, n);
    for (int j = 1; j <= top; ++j) s.add(sp.sum_distribution(j).pmf(gap - j));
    return (static_cast<double>(n) / N) * s.value();
}

// The same quantity for the attractive (mnh) family through the direct
// Dirichlet-integral form: a binomial coefficient times a ratio of beta
// functions per term. Kept as an independent evaluation path.
inline double pi_joint_fixed_beta_form(double r, int N, int n, int gap) {
    if (!(r > 0.0)) throw domain_error("pi_joint_fixed_beta_form: r > 0");
    if (gap < 1 || gap > N - 1) throw domain_error("pi_joint_fixed_beta_form: gap in 1..N-1");
    const long long m = static_cast<long long>(N) - n;
    CompensatedSum s;
    const int lo = std::max(1, gap - static_cast<int>(m));
    const int hi = std::min(gap, n - 1);
    for (int j = lo; j <= hi; ++j) {
        const double a = gap + j * (r - 1.0);
        const double b = (N - gap) + (n - j) * (r - 1.0);
        s.add(std::exp(log_binomial(static_cast<double>(m), static_cast<double>(gap - j)) +
                       log_beta(a, b) - log_beta(j * r, (n - j) * r)));
    }
    return (static_cast<double>(n) / N) * s.value();
}

inline std::vector<double> fixed_joint_gap_curve(const SpacingVectorDist& sp, int N, int n) {
    std::vector<double> out(static_cast<std::size_t>(N), 0.0); // index gap = 1..N-1
    for (int g = 1; g <= N - 1; ++g) out[g] = pi_joint_fixed(sp, N, n, g);
    return out;
}

// Row sums of the circulant transition-count matrix whose (k,t) entry is
// 1 at t = k plus the probability that the chain launched at t ever visits k
// (wrapping once around the circle). Every row must total n; returned
// 1-based for inspection.
inline std::vector<double> matrix_A_rowsums(const SpacingVectorDist& sp, int N, int n) {
    if (sp.n() != n || sp.m() != static_cast<long long>(N) - n)
        throw domain_error("matrix_A_rowsums: spacing law inconsistent with N, n");
    // g[x] = sum_{j=1}^{min(x,n)} Pr(j counts + j = x), x = 1..N-1
    std::vector<double> g(static_cast<std::size_t>(N) + 1, 0.0);
    for (int x = 1; x <= N - 1; ++x) {
        CompensatedSum s;
        for (int j = 1; j <= std::min(x, n); ++j) s.add(sp.sum_distribution(j).pmf(x - j));
        g[x] = s.value();
    }
    std::vector<double> rowsums(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 1; k <= N; ++k) {
        CompensatedSum row;
        for (int t = 1; t <= N; ++t) {
            if (t == k) row.add(1.0);
            else if (t < k) row.add(g[k - t]);
            else row.add(g[N + k - t]);
        }
        rowsums[k] = row.value();
    }
    return rowsums;
}

inline double delta(double pi_k, double pi_l, double pi_kl) { return pi_kl - pi_k * pi_l; }
inline double delta_diag(double pi_k) { return pi_k * (1.0 - pi_k); }

// Precomputed first- and second-order inclusion probabilities of a design.
// Joint probabilities depend on the units only through their (oriented) gap,
// which keeps the storage linear in N.
struct JointProbMatrix {
    int N = 0;
    bool circular = false;
    std::vector<double> pi;       // 1-based
    std::vector<double> cond_gap; // cond_gap[g] = Pr(other unit g ahead is selected | unit selected)

    double joint(int k, int l) const {
        if (k < 1 || k > N || l < 1 || l > N) throw domain_error("joint: unit out of range");
        if (k == l) return pi[k];
        const int a = std::min(k, l), b = std::max(k, l);
        return pi[a] * cond_gap[b - a];
    }
    double operator()(int k, int l) const { return joint(k, l); }

    double delta_kl(int k, int l) const {
        if (k == l) return delta_diag(pi[k]);
        return delta(pi[std::min(k, l)], pi[std::max(k, l)], joint(k, l));
    }
};

inline JointProbMatrix inclusion_summary(const Design& d) {
    JointProbMatrix out;
    out.N = d.N();
    if (d.kind() == DesignKind::circular) {
        out.circular = true;
        const double rate = d.rate();
        out.pi.assign(static_cast<std::size_t>(d.N()) + 1, rate);
        out.pi[0] = 0.0;
        out.cond_gap.assign(static_cast<std::size_t>(d.N()), 0.0);
        for (int g = 1; g <= d.N() - 1; ++g) {
            CompensatedSum s;
            for (int j = 1; j <= std::min(g, d.n()); ++j)
                s.add(d.spacings().sum_distribution(j).pmf(g - j));
            out.cond_gap[g] = s.value();
        }
        return out;
    }
    out.pi = d.kind() == DesignKind::renewal ? pi_first_renewal(d.jump(), d.N())
                                             : pi_first_equilibrium(d.jump(), d.N());
    const ConvolutionTable t = ConvolutionTable::for_jump(d.jump(), d.N(), d.N());
    out.cond_gap.assign(static_cast<std::size_t>(d.N()), 0.0);
    for (int g = 1; g <= d.N() - 1; ++g) out.cond_gap[g] = t.hit_probability(g);
    return out;
}

} // namespace spacesamp

#endif
