#ifndef SPACESAMP_SPECIAL_HPP
#define SPACESAMP_SPECIAL_HPP

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"

namespace spacesamp {

inline double log_gamma(double x) {
    if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

// log C(a, b) for real a > 0, integer-ish b with 0 <= b <= a.
inline double log_binomial(double a, double b) {
    if (b < 0.0 || b > a) throw domain_error("log_binomial: need 0 <= b <= a");
    if (b == 0.0 || b == a) return 0.0;
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// e^x * log(b) with the 0 * log(0) = 0 convention used throughout pmf code.
inline double xlogy(double x, double y) {
    if (x == 0.0) return 0.0;
    return x * std::log(y);
}

// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("reg_inc_beta: shape parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(a, b, x);
}

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
inline double reg_lower_gamma(double s, double x) {
    if (!(s > 0.0)) throw domain_error("reg_lower_gamma: shape must be positive");
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(s, x);
}

// Standard normal quantile.
inline double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("normal_quantile: p must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

// Running sum with Neumaier compensation; keeps long alternating-sign
// accumulations (variance estimators, enumerations) near working precision.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

} // namespace spacesamp

#endif
