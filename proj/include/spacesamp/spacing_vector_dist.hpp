#ifndef SPACESAMP_SPACING_VECTOR_DIST_HPP
#define SPACESAMP_SPACING_VECTOR_DIST_HPP

#include <cstdint>
#include <vector>

#include "discrete_dist.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace spacesamp {

enum class SpacingFamily {
    mnh,  // Dirichlet-compound multinomial with equal weights r (attractive counts)
    mnom, // multinomial with equal cells (independent-like counts)
    mh,   // multivariate hypergeometric with equal cell caps r (repulsive counts)
};

// Exchangeable law of n nonnegative counts that sum to m. Together with a
// uniform rotation this drives the fixed-size circular designs: spacing i
// between consecutive selected units is count_i + 1.
class SpacingVectorDist {
public:
    static SpacingVectorDist mnh(long long m, int n, double r) {
        validate_common(m, n);
        if (!(r > 0.0)) throw domain_error("mnh: r > 0 required");
        return {SpacingFamily::mnh, m, n, r};
    }
    static SpacingVectorDist mnom(long long m, int n) {
        validate_common(m, n);
        return {SpacingFamily::mnom, m, n, 0.0};
    }
    static SpacingVectorDist mh(long long m, int n, long long r) {
        validate_common(m, n);
        if (r < 1) throw domain_error("mh: r >= 1 required");
        if (static_cast<long long>(n) * r < m)
            throw domain_error("mh: infeasible, need n*r >= m");
        return {SpacingFamily::mh, m, n, static_cast<double>(r)};
    }

    SpacingFamily family() const { return family_; }
    long long m() const { return m_; }
    int n() const { return n_; }
    double r() const { return r_; }

    bool operator==(const SpacingVectorDist& o) const {
        return family_ == o.family_ && m_ == o.m_ && n_ == o.n_ && r_ == o.r_;
    }

    double pmf_vector(const std::vector<long long>& x) const {
        if (static_cast<int>(x.size()) != n_)
            throw domain_error("pmf_vector: wrong vector length");
        long long sum = 0;
        for (long long v : x) {
            if (v < 0) throw domain_error("pmf_vector: negative count");
            sum += v;
        }
        if (sum != m_) throw domain_error("pmf_vector: counts must sum to m");

        const double md = static_cast<double>(m_);
        switch (family_) {
            case SpacingFamily::mnh: {
                const double R = r_ * n_;
                double lp = std::lgamma(md + 1.0) + std::lgamma(R) - std::lgamma(md + R);
                for (long long v : x)
                    lp += std::lgamma(r_ + static_cast<double>(v)) - std::lgamma(r_) -
                          std::lgamma(static_cast<double>(v) + 1.0);
                return std::exp(lp);
            }
            case SpacingFamily::mnom: {
                double lp = std::lgamma(md + 1.0) - md * std::log(static_cast<double>(n_));
                for (long long v : x) lp -= std::lgamma(static_cast<double>(v) + 1.0);
                return std::exp(lp);
            }
            case SpacingFamily::mh: {
                const double R = r_ * n_;
                double lp = -log_binomial(R, md);
                for (long long v : x) {
                    if (static_cast<double>(v) > r_) return 0.0;
                    lp += log_binomial(r_, static_cast<double>(v));
                }
                return std::exp(lp);
            }
        }
        return 0.0;
    }

    // Draws by the chain of conditional one-dimensional laws; each step is the
    // exact conditional of the next count given the remaining total.
    std::vector<long long> sample_vector(RngStream& rng) const {
        std::vector<long long> x(n_);
        long long rem = m_;
        for (int i = 0; i + 1 < n_; ++i) {
            const int left = n_ - i;
            x[i] = conditional_component(rem, left).sample(rng);
            rem -= x[i];
        }
        x[n_ - 1] = rem;
        return x;
    }

    // Law of a single count.
    DiscreteDist marginal() const { return sum_distribution(1); }

    // Law of the sum of j distinct counts, 1 <= j <= n.
    DiscreteDist sum_distribution(int j) const {
        if (j < 1 || j > n_) throw domain_error("sum_distribution: j must be in 1..n");
        if (j == n_) return DiscreteDist::degenerate(m_);
        switch (family_) {
            case SpacingFamily::mnh:
                return DiscreteDist::neg_hypergeometric(m_, j * r_, n_ * r_);
            case SpacingFamily::mnom:
                return DiscreteDist::binomial(m_, static_cast<double>(j) / n_);
            case SpacingFamily::mh:
                return DiscreteDist::hypergeometric(
                    m_, j * static_cast<long long>(r_), n_ * static_cast<long long>(r_));
        }
        throw domain_error("sum_distribution: unknown family");
    }

private:
    SpacingVectorDist(SpacingFamily f, long long m, int n, double r)
        : family_(f), m_(m), n_(n), r_(r) {}

    static void validate_common(long long m, int n) {
        if (m < 0) throw domain_error("spacing vector: m >= 0 required");
        if (n < 1) throw domain_error("spacing vector: n >= 1 required");
    }

    // Law of the next count given `rem` mass spread over `left` counts.
    DiscreteDist conditional_component(long long rem, int left) const {
        switch (family_) {
            case SpacingFamily::mnh:
                return DiscreteDist::neg_hypergeometric(rem, r_, left * r_);
            case SpacingFamily::mnom:
                return DiscreteDist::binomial(rem, 1.0 / left);
            case SpacingFamily::mh:
                return DiscreteDist::hypergeometric(
                    rem, static_cast<long long>(r_),
                    static_cast<long long>(left) * static_cast<long long>(r_));
        }
        throw domain_error("conditional_component: unknown family");
    }

    SpacingFamily family_;
    long long m_;
    int n_;
    double r_;
};

} // namespace spacesamp

#endif
