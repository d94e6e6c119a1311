#ifndef SPACESAMP_DISCRETE_DIST_HPP
#define SPACESAMP_DISCRETE_DIST_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "errors.hpp"
#include "rng.hpp"
#include "special.hpp"

namespace spacesamp {

enum class DistFamily {
    bernoulli,
    binomial,
    geometric,
    neg_binomial,
    poisson,
    hypergeometric,
    neg_hypergeometric,
    uniform,
    degenerate,
    forward_of,
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// A nonnegative-integer-valued distribution. Value type; copies are cheap.
// All pmf/cdf evaluation is composed from log-gamma (or incomplete beta /
// gamma for tails), so parameters may be non-integer where the family
// allows it (neg_binomial r, neg_hypergeometric r and R).
class DiscreteDist {
public:
    static DiscreteDist bernoulli(double p) {
        require(p >= 0.0 && p <= 1.0, "bernoulli: p in [0,1]");
        return {DistFamily::bernoulli, p, 0, 0};
    }
    static DiscreteDist binomial(long long n, double p) {
        require(n >= 0, "binomial: n >= 0");
        require(p >= 0.0 && p <= 1.0, "binomial: p in [0,1]");
        return {DistFamily::binomial, static_cast<double>(n), p, 0};
    }
    static DiscreteDist geometric(double p) {
        require(p > 0.0 && p <= 1.0, "geometric: p in (0,1]");
        return {DistFamily::geometric, p, 0, 0};
    }
    static DiscreteDist neg_binomial(double r, double p) {
        require(r > 0.0, "neg_binomial: r > 0");
        require(p > 0.0 && p <= 1.0, "neg_binomial: p in (0,1]");
        return {DistFamily::neg_binomial, r, p, 0};
    }
    static DiscreteDist poisson(double lambda) {
        require(lambda > 0.0, "poisson: lambda > 0");
        return {DistFamily::poisson, lambda, 0, 0};
    }
    // m draws without replacement from R units of which r are marked.
    static DiscreteDist hypergeometric(long long m, long long r, long long R) {
        require(R >= 1 && r >= 0 && r <= R && m >= 0 && m <= R,
                "hypergeometric: need 0 <= r <= R, 0 <= m <= R");
        return {DistFamily::hypergeometric, static_cast<double>(m),
                static_cast<double>(r), static_cast<double>(R)};
    }
    // Dirichlet-compound count: m balls, focal weight r out of total R.
    static DiscreteDist neg_hypergeometric(long long m, double r, double R) {
        require(m >= 0, "neg_hypergeometric: m >= 0");
        require(r > 0.0 && R > r, "neg_hypergeometric: need 0 < r < R");
        return {DistFamily::neg_hypergeometric, static_cast<double>(m), r, R};
    }
    static DiscreteDist uniform(long long a) {
        require(a >= 0, "uniform: a >= 0");
        return {DistFamily::uniform, static_cast<double>(a), 0, 0};
    }
    static DiscreteDist degenerate(long long c) {
        require(c >= 0, "degenerate: c >= 0");
        return {DistFamily::degenerate, static_cast<double>(c), 0, 0};
    }
    static DiscreteDist forward_of(const DiscreteDist& inner) {
        DiscreteDist d{DistFamily::forward_of, 0, 0, 0};
        d.inner_ = std::make_shared<DiscreteDist>(inner);
        require(std::isfinite(inner.mean()), "forward_of: inner mean must be finite");
        return d;
    }

    DistFamily family() const { return family_; }

    double p() const {
        return (family_ == DistFamily::binomial || family_ == DistFamily::neg_binomial) ? p2_
                                                                                        : p1_;
    }
    double r() const { return p1_; }
    double lambda() const { return p1_; }
    long long n_trials() const { return llround_(p1_); }
    long long m_draws() const { return llround_(p1_); }
    double r_marked() const { return p2_; }
    double total_count() const { return p3_; }
    long long a_max() const { return llround_(p1_); }
    long long c_value() const { return llround_(p1_); }
    const DiscreteDist& inner() const {
        if (!inner_) throw domain_error("inner: not a forward_of distribution");
        return *inner_;
    }

    bool operator==(const DiscreteDist& o) const {
        if (family_ != o.family_ || p1_ != o.p1_ || p2_ != o.p2_ || p3_ != o.p3_) return false;
        if (!inner_ != !o.inner_) return false;
        return !inner_ || *inner_ == *o.inner_;
    }
    bool operator!=(const DiscreteDist& o) const { return !(*this == o); }

    long long support_lower() const {
        if (family_ == DistFamily::hypergeometric) {
            const long long m = m_draws(), r = llround_(p2_), R = llround_(p3_);
            return std::max(0LL, m - (R - r));
        }
        if (family_ == DistFamily::degenerate) return c_value();
        return 0;
    }

    // Largest support point, or -1 when the support is unbounded above.
    long long support_upper() const {
        switch (family_) {
            case DistFamily::bernoulli: return 1;
            case DistFamily::binomial: return n_trials();
            case DistFamily::hypergeometric:
                return std::min(llround_(p2_), m_draws());
            case DistFamily::neg_hypergeometric: return m_draws();
            case DistFamily::uniform: return a_max();
            case DistFamily::degenerate: return c_value();
            case DistFamily::forward_of: {
                const long long hi = inner_->support_upper();
                return hi < 0 ? -1 : hi; // excess of X never exceeds max(X)
            }
            default: return -1;
        }
    }

    double pmf(long long x) const {
        if (x < 0) return 0.0;
        switch (family_) {
            case DistFamily::bernoulli:
                return x == 0 ? 1.0 - p1_ : (x == 1 ? p1_ : 0.0);
            case DistFamily::binomial: {
                const long long n = n_trials();
                if (x > n) return 0.0;
                return std::exp(log_binomial(static_cast<double>(n), static_cast<double>(x)) +
                                xlogy(static_cast<double>(x), p2_) +
                                xlogy(static_cast<double>(n - x), 1.0 - p2_));
            }
            case DistFamily::geometric:
                return std::exp(std::log(p1_) + xlogy(static_cast<double>(x), 1.0 - p1_));
            case DistFamily::neg_binomial:
                return std::exp(std::lgamma(p1_ + static_cast<double>(x)) - std::lgamma(p1_) -
                                std::lgamma(static_cast<double>(x) + 1.0) + p1_ * std::log(p2_) +
                                xlogy(static_cast<double>(x), 1.0 - p2_));
            case DistFamily::poisson:
                return std::exp(-p1_ + xlogy(static_cast<double>(x), p1_) -
                                std::lgamma(static_cast<double>(x) + 1.0));
            case DistFamily::hypergeometric: {
                if (x < support_lower() || x > support_upper()) return 0.0;
                const double m = p1_, r = p2_, R = p3_, xd = static_cast<double>(x);
                return std::exp(log_binomial(r, xd) + log_binomial(R - r, m - xd) -
                                log_binomial(R, m));
            }
            case DistFamily::neg_hypergeometric: {
                const double m = p1_, r = p2_, R = p3_, xd = static_cast<double>(x);
                if (x > m_draws()) return 0.0;
                return std::exp(std::lgamma(r + xd) - std::lgamma(r) - std::lgamma(xd + 1.0) +
                                std::lgamma(R - r + m - xd) - std::lgamma(R - r) -
                                std::lgamma(m - xd + 1.0) + std::lgamma(R) + std::lgamma(m + 1.0) -
                                std::lgamma(R + m));
            }
            case DistFamily::uniform:
                return x <= a_max() ? 1.0 / (p1_ + 1.0) : 0.0;
            case DistFamily::degenerate:
                return x == c_value() ? 1.0 : 0.0;
            case DistFamily::forward_of:
                return inner_->survival(x) / (inner_->mean() + 1.0);
        }
        return 0.0;
    }

    // Pr(X >= x). Closed-form tails where the family has them.
    double survival(long long x) const {
        if (x <= support_lower()) return 1.0;
        switch (family_) {
            case DistFamily::bernoulli:
                return x == 1 ? p1_ : 0.0;
            case DistFamily::binomial: {
                const long long n = n_trials();
                if (x > n) return 0.0;
                return reg_inc_beta(static_cast<double>(x), static_cast<double>(n - x) + 1.0, p2_);
            }
            case DistFamily::geometric:
                return std::exp(xlogy(static_cast<double>(x), 1.0 - p1_));
            case DistFamily::neg_binomial:
                return reg_inc_beta(static_cast<double>(x), p1_, 1.0 - p2_);
            case DistFamily::poisson:
                return reg_lower_gamma(static_cast<double>(x), p1_);
            case DistFamily::uniform: {
                const long long a = a_max();
                if (x > a) return 0.0;
                return (static_cast<double>(a - x) + 1.0) / (p1_ + 1.0);
            }
            case DistFamily::degenerate:
                return x <= c_value() ? 1.0 : 0.0;
            default: { // finite-summation families
                const long long hi = support_upper();
                if (hi >= 0 && x > hi) return 0.0;
                return sum_tail(x);
            }
        }
    }

    double cdf(long long x) const {
        if (x < support_lower()) return 0.0;
        return 1.0 - survival(x + 1);
    }

    double mean() const { return mean_var().mean; }

    Moments mean_var() const {
        const double q = 1.0 - p2_;
        switch (family_) {
            case DistFamily::bernoulli: return {p1_, p1_ * (1.0 - p1_)};
            case DistFamily::binomial: return {p1_ * p2_, p1_ * p2_ * q};
            case DistFamily::geometric: {
                const double qq = 1.0 - p1_;
                return {qq / p1_, qq / (p1_ * p1_)};
            }
            case DistFamily::neg_binomial: return {p1_ * q / p2_, p1_ * q / (p2_ * p2_)};
            case DistFamily::poisson: return {p1_, p1_};
            case DistFamily::hypergeometric: {
                const double m = p1_, r = p2_, R = p3_;
                const double mu = m * r / R;
                const double v = R > 1.0 ? mu * (1.0 - r / R) * (R - m) / (R - 1.0) : 0.0;
                return {mu, v};
            }
            case DistFamily::neg_hypergeometric: {
                const double m = p1_, r = p2_, R = p3_;
                const double mu = m * r / R;
                return {mu, mu * (1.0 - r / R) * (R + m) / (R + 1.0)};
            }
            case DistFamily::uniform: {
                const double a1 = p1_ + 1.0;
                return {p1_ / 2.0, (a1 * a1 - 1.0) / 12.0};
            }
            case DistFamily::degenerate: return {p1_, 0.0};
            case DistFamily::forward_of: {
                const double m1 = inner_->faulhaber_moment(1);
                const double m2 = inner_->faulhaber_moment(2);
                return {m1, m2 - m1 * m1};
            }
        }
        return {};
    }

    // Equilibrium (stationary-excess) transform: Pr(Y = k) proportional to
    // Pr(X >= k). A degenerate point collapses to a uniform block; geometric
    // laws are fixed points of the transform.
    DiscreteDist forward() const {
        if (family_ == DistFamily::degenerate) return uniform(c_value());
        return forward_of(*this);
    }

    // E(Y^order) for Y the equilibrium transform of X, via polynomial-sum
    // moments of X: E(Y) = E[X(X+1)/2] / E(X+1),
    // E(Y^2) = E[X(X+1)(2X+1)/6] / E(X+1). order must be 1 or 2.
    double faulhaber_moment(int order) const {
        const double m1 = raw_moment(1);
        if (!std::isfinite(m1)) throw domain_error("faulhaber_moment: mean not finite");
        if (order == 1) {
            const double m2 = raw_moment(2);
            return (m2 + m1) / (2.0 * (m1 + 1.0));
        }
        if (order == 2) {
            const double m2 = raw_moment(2), m3 = raw_moment(3);
            return (2.0 * m3 + 3.0 * m2 + m1) / (6.0 * (m1 + 1.0));
        }
        throw domain_error("faulhaber_moment: order must be 1 or 2");
    }

    // Raw moment E(X^j), j in {1,2,3}. Closed form via factorial moments for
    // the base families; truncated summation otherwise.
    double raw_moment(int j) const {
        if (j < 1 || j > 3) throw domain_error("raw_moment: j must be in {1,2,3}");
        double f1 = 0, f2 = 0, f3 = 0; // factorial moments E[X], E[X(X-1)], E[X(X-1)(X-2)]
        const double q = 1.0 - p2_;
        switch (family_) {
            case DistFamily::bernoulli: f1 = p1_; break;
            case DistFamily::binomial: {
                const double n = p1_, p = p2_;
                f1 = n * p;
                f2 = n * (n - 1) * p * p;
                f3 = n * (n - 1) * (n - 2) * p * p * p;
                if (n < 2) f2 = 0;
                if (n < 3) f3 = 0;
                break;
            }
            case DistFamily::geometric: {
                const double s = (1.0 - p1_) / p1_;
                f1 = s; f2 = 2 * s * s; f3 = 6 * s * s * s;
                break;
            }
            case DistFamily::neg_binomial: {
                const double s = q / p2_, r = p1_;
                f1 = r * s;
                f2 = r * (r + 1) * s * s;
                f3 = r * (r + 1) * (r + 2) * s * s * s;
                break;
            }
            case DistFamily::poisson:
                f1 = p1_; f2 = p1_ * p1_; f3 = p1_ * p1_ * p1_;
                break;
            case DistFamily::hypergeometric: {
                const double m = p1_, r = p2_, R = p3_;
                f1 = m * r / R;
                f2 = (m >= 2 && r >= 2) ? m * (m - 1) * r * (r - 1) / (R * (R - 1)) : 0.0;
                f3 = (m >= 3 && r >= 3) ? m * (m - 1) * (m - 2) * r * (r - 1) * (r - 2) /
                                              (R * (R - 1) * (R - 2))
                                        : 0.0;
                break;
            }
            case DistFamily::neg_hypergeometric: {
                const double m = p1_, r = p2_, R = p3_;
                f1 = m * r / R;
                f2 = m >= 2 ? m * (m - 1) * r * (r + 1) / (R * (R + 1)) : 0.0;
                f3 = m >= 3 ? m * (m - 1) * (m - 2) * r * (r + 1) * (r + 2) /
                                  (R * (R + 1) * (R + 2))
                            : 0.0;
                break;
            }
            case DistFamily::uniform: {
                const double a = p1_;
                if (j == 1) return a / 2.0;
                if (j == 2) return a * (2 * a + 1) / 6.0;
                return a * a * (a + 1) / 4.0;
            }
            case DistFamily::degenerate: {
                double v = 1;
                for (int i = 0; i < j; ++i) v *= p1_;
                return v;
            }
            case DistFamily::forward_of:
                return summed_raw_moment(j);
        }
        if (j == 1) return f1;
        if (j == 2) return f2 + f1;
        return f3 + 3 * f2 + f1;
    }

    long long sample(RngStream& rng) const;

    // Smallest K with Pr(X > K) < eps; the support maximum when finite.
    long long truncation_point(double eps = 1e-12) const;

private:
    DiscreteDist(DistFamily f, double a, double b, double c)
        : family_(f), p1_(a), p2_(b), p3_(c) {}

    static void require(bool ok, const char* msg) {
        if (!ok) throw domain_error(msg);
    }
    static long long llround_(double v) { return static_cast<long long>(std::llround(v)); }

    double sum_tail(long long from) const;
    double summed_raw_moment(int j) const;

    DistFamily family_;
    double p1_, p2_, p3_;
    std::shared_ptr<const DiscreteDist> inner_;
};

namespace detail {

// Walks the support left to right with O(1) pmf updates (multiplicative
// ratio recurrences). Backbone of inversion sampling and generic summation.
class PmfCursor {
public:
    explicit PmfCursor(const DiscreteDist& d) : d_(&d) {
        const DistFamily f = d.family();
        x_ = d.support_lower();
        hi_ = d.support_upper();
        switch (f) {
            case DistFamily::bernoulli:
                p_ = 1.0 - d.p();
                break;
            case DistFamily::binomial:
                if (d.p() >= 1.0) { x_ = d.n_trials(); p_ = 1.0; }
                else p_ = std::exp(d.n_trials() * std::log1p(-d.p()));
                break;
            case DistFamily::geometric:
            case DistFamily::neg_binomial:
            case DistFamily::poisson:
            case DistFamily::hypergeometric:
            case DistFamily::neg_hypergeometric:
                p_ = d.pmf(x_);
                break;
            case DistFamily::uniform:
                p_ = 1.0 / (static_cast<double>(d.a_max()) + 1.0);
                break;
            case DistFamily::degenerate:
                p_ = 1.0;
                break;
            case DistFamily::forward_of:
                inner_ = std::make_unique<PmfCursor>(d.inner());
                inv_mean1_ = 1.0 / (d.inner().mean() + 1.0);
                tail_ = 1.0;
                p_ = inv_mean1_;
                break;
        }
    }

    long long x() const { return x_; }
    double p() const { return p_; }
    bool at_end() const { return hi_ >= 0 && x_ >= hi_; }

    void advance() {
        const double xd = static_cast<double>(x_);
        switch (d_->family()) {
            case DistFamily::bernoulli:
                p_ = d_->p();
                break;
            case DistFamily::binomial: {
                const double n = static_cast<double>(d_->n_trials()), p = d_->p();
                p_ *= ((n - xd) / (xd + 1.0)) * (p / (1.0 - p));
                break;
            }
            case DistFamily::geometric:
                p_ *= 1.0 - d_->p();
                break;
            case DistFamily::neg_binomial:
                p_ *= (d_->r() + xd) * (1.0 - d_->p()) / (xd + 1.0);
                break;
            case DistFamily::poisson:
                p_ *= d_->lambda() / (xd + 1.0);
                break;
            case DistFamily::hypergeometric: {
                const double m = static_cast<double>(d_->m_draws());
                const double r = d_->r_marked(), R = d_->total_count();
                p_ *= (r - xd) * (m - xd) / ((xd + 1.0) * (R - r - m + xd + 1.0));
                break;
            }
            case DistFamily::neg_hypergeometric: {
                const double m = static_cast<double>(d_->m_draws());
                const double r = d_->r_marked(), R = d_->total_count();
                p_ *= (r + xd) * (m - xd) / ((xd + 1.0) * (R - r + m - xd - 1.0));
                break;
            }
            case DistFamily::uniform:
            case DistFamily::degenerate:
                break; // constant over support
            case DistFamily::forward_of: {
                // tail(x+1) = tail(x) - pmf_inner(x)
                if (inner_->x() <= x_) {
                    tail_ -= inner_->p();
                    if (!inner_->at_end()) inner_->advance();
                    else tail_ = 0.0;
                }
                if (tail_ < 0.0) tail_ = 0.0;
                p_ = tail_ * inv_mean1_;
                break;
            }
        }
        ++x_;
    }

private:
    const DiscreteDist* d_;
    long long x_ = 0;
    long long hi_ = -1;
    double p_ = 0.0;
    std::unique_ptr<PmfCursor> inner_; // forward_of only
    double inv_mean1_ = 0.0;
    double tail_ = 0.0;
};

} // namespace detail

inline double DiscreteDist::sum_tail(long long from) const {
    detail::PmfCursor cur(*this);
    double below = 0.0; // Pr(X < from)
    while (cur.x() < from) {
        below += cur.p();
        if (cur.at_end()) return 0.0;
        cur.advance();
    }
    return std::max(0.0, 1.0 - below);
}

inline double DiscreteDist::summed_raw_moment(int j) const {
    const long long cap = truncation_point(1e-14);
    detail::PmfCursor cur(*this);
    CompensatedSum acc;
    for (;;) {
        const double xd = static_cast<double>(cur.x());
        double w = xd;
        for (int i = 1; i < j; ++i) w *= xd;
        acc.add(w * cur.p());
        if (cur.at_end() || cur.x() >= cap) break;
        cur.advance();
    }
    return acc.value();
}

inline long long DiscreteDist::sample(RngStream& rng) const {
    if (family_ == DistFamily::degenerate) return c_value();
    if (family_ == DistFamily::uniform) return rng.uniform_int(0, static_cast<int>(a_max()));
    if (family_ == DistFamily::bernoulli) return rng.uniform01() < p1_ ? 1 : 0;
    const double u = rng.uniform01();
    detail::PmfCursor cur(*this);
    double cum = cur.p();
    while (cum <= u && !cur.at_end()) {
        cur.advance();
        cum += cur.p();
        if (cur.x() > (1LL << 40))
            throw consistency_error("sample: inversion walk failed to terminate");
    }
    return cur.x();
}

inline long long DiscreteDist::truncation_point(double eps) const {
    const long long hi = support_upper();
    if (hi >= 0) return hi;
    detail::PmfCursor cur(*this);
    double cum = cur.p();
    while (1.0 - cum >= eps) {
        cur.advance();
        cum += cur.p();
        if (cur.x() > (1LL << 40))
            throw consistency_error("truncation_point: tail fails to vanish");
    }
    return cur.x();
}

} // namespace spacesamp

#endif
