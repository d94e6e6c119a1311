#ifndef SPACESAMP_DESIGN_HPP
#define SPACESAMP_DESIGN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "discrete_dist.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "spacing_vector_dist.hpp"

namespace spacesamp {

enum class DesignKind {
    renewal,             // chain started at the origin, no initial delay
    equilibrium_renewal, // stationary initial delay, constant inclusion rate
    circular,            // fixed size n on a circle of N units
};

// One realized sample. Units are 1-based and sorted. `spacings` holds the
// jumps that produced the units, starting with the initial one (the delay
// for equilibrium/circular kinds); same length as `units` for renewal kinds,
// n + 1 entries for circular, and a single entry when an equilibrium draw
// overshoots the frame and selects nothing.
struct SampleDraw {
    std::vector<int> units;
    std::vector<long long> spacings;
    std::uint64_t seed = 0;
};

// A sampling design over units {1, ..., N}. Value type.
class Design {
public:
    // jump_minus_one is the law of J - 1, so any DiscreteDist gives a valid
    // jump law on {1, 2, ...}.
    static Design renewal(int N, const DiscreteDist& jump_minus_one) {
        check_N(N);
        Design d;
        d.kind_ = DesignKind::renewal;
        d.N_ = N;
        d.jump_ = jump_minus_one;
        return d;
    }

    static Design equilibrium_renewal(int N, const DiscreteDist& jump_minus_one) {
        Design d = renewal(N, jump_minus_one);
        d.kind_ = DesignKind::equilibrium_renewal;
        return d;
    }

    static Design circular(int N, int n, const SpacingVectorDist& spacings) {
        check_N(N);
        if (n < 1 || n > N) throw domain_error("design: need 1 <= n <= N");
        if (spacings.n() != n || spacings.m() != static_cast<long long>(N) - n)
            throw domain_error("design: spacing vector must have n counts summing to N - n");
        Design d;
        d.kind_ = DesignKind::circular;
        d.N_ = N;
        d.n_ = n;
        d.spacings_ = spacings;
        return d;
    }

    static Design circular(int N, int n, SpacingFamily family, double r = 1.0) {
        const long long m = static_cast<long long>(N) - n;
        switch (family) {
            case SpacingFamily::mnh: return circular(N, n, SpacingVectorDist::mnh(m, n, r));
            case SpacingFamily::mnom: return circular(N, n, SpacingVectorDist::mnom(m, n));
            case SpacingFamily::mh:
                return circular(N, n, SpacingVectorDist::mh(m, n, static_cast<long long>(r)));
        }
        throw domain_error("design: unknown spacing family");
    }

    DesignKind kind() const { return kind_; }
    int N() const { return N_; }
    int n() const {
        if (kind_ != DesignKind::circular) throw domain_error("n: fixed-size designs only");
        return n_;
    }
    const DiscreteDist& jump() const {
        if (!jump_) throw domain_error("jump: renewal designs only");
        return *jump_;
    }
    const SpacingVectorDist& spacings() const {
        if (!spacings_) throw domain_error("spacings: circular designs only");
        return *spacings_;
    }

    // Marginal inclusion rate: 1/E(J) for renewal kinds, n/N for circular.
    double rate() const {
        if (kind_ == DesignKind::circular)
            return static_cast<double>(n_) / static_cast<double>(N_);
        return 1.0 / (jump_->mean() + 1.0);
    }

    bool operator==(const Design& o) const {
        return kind_ == o.kind_ && N_ == o.N_ && n_ == o.n_ && jump_ == o.jump_ &&
               spacings_ == o.spacings_;
    }

private:
    static void check_N(int N) {
        if (N < 1) throw domain_error("design: N >= 1 required");
    }

    DesignKind kind_ = DesignKind::renewal;
    int N_ = 0;
    int n_ = 0;
    std::optional<DiscreteDist> jump_;
    std::optional<SpacingVectorDist> spacings_;
};

// Jump laws of the standard one-parameter families, parametrized by the
// target inclusion rate pi. Each returns the law of J - 1.

inline DiscreteDist nb_jump_for_rate(double r, double pi) {
    if (!(pi > 0.0 && pi < 1.0)) throw domain_error("nb_jump_for_rate: pi in (0,1)");
    const double p = r * pi / (r * pi + 1.0 - pi);
    return DiscreteDist::neg_binomial(r, p);
}

inline DiscreteDist geometric_jump_for_rate(double pi) {
    if (!(pi > 0.0 && pi < 1.0)) throw domain_error("geometric_jump_for_rate: pi in (0,1)");
    return DiscreteDist::geometric(pi);
}

inline DiscreteDist poisson_jump_for_rate(double pi) {
    if (!(pi > 0.0 && pi < 1.0)) throw domain_error("poisson_jump_for_rate: pi in (0,1)");
    return DiscreteDist::poisson((1.0 - pi) / pi);
}

// Requires r >= (1-pi)/pi; r equal to that bound gives the systematic design.
inline DiscreteDist binomial_jump_for_rate(long long r, double pi) {
    if (!(pi > 0.0 && pi < 1.0)) throw domain_error("binomial_jump_for_rate: pi in (0,1)");
    double p = (1.0 - pi) / (static_cast<double>(r) * pi);
    if (p > 1.0) {
        if (p > 1.0 + 1e-12) throw domain_error("binomial_jump_for_rate: need r >= (1-pi)/pi");
        p = 1.0;
    }
    return DiscreteDist::binomial(r, p);
}

inline DiscreteDist systematic_jump(long long step) {
    if (step < 1) throw domain_error("systematic_jump: step >= 1");
    return DiscreteDist::degenerate(step - 1);
}

inline SampleDraw draw_renewal(const Design& d, RngStream& rng) {
    if (d.kind() != DesignKind::renewal) throw domain_error("draw_renewal: wrong design kind");
    SampleDraw out;
    long long pos = 0;
    for (;;) {
        const long long j = 1 + d.jump().sample(rng);
        pos += j;
        if (pos > d.N()) break;
        out.spacings.push_back(j);
        out.units.push_back(static_cast<int>(pos));
    }
    return out;
}

inline SampleDraw draw_equilibrium(const Design& d, RngStream& rng) {
    if (d.kind() != DesignKind::equilibrium_renewal)
        throw domain_error("draw_equilibrium: wrong design kind");
    SampleDraw out;
    // Initial delay on its full support; the draw selects nothing if the
    // delay already overshoots the frame.
    const long long j0 = 1 + d.jump().forward().sample(rng);
    out.spacings.push_back(j0);
    if (j0 > d.N()) return out;
    long long pos = j0;
    out.units.push_back(static_cast<int>(pos));
    for (;;) {
        const long long j = 1 + d.jump().sample(rng);
        pos += j;
        if (pos > d.N()) break;
        out.spacings.push_back(j);
        out.units.push_back(static_cast<int>(pos));
    }
    return out;
}

inline SampleDraw draw_circular(const Design& d, RngStream& rng) {
    if (d.kind() != DesignKind::circular) throw domain_error("draw_circular: wrong design kind");
    const int N = d.N(), n = d.n();
    SampleDraw out;
    const long long j0 = rng.uniform_int(1, N);
    out.spacings.push_back(j0);
    const std::vector<long long> counts = d.spacings().sample_vector(rng);
    long long pos = j0;
    out.units.reserve(n);
    for (int i = 0; i < n; ++i) {
        const long long j = counts[i] + 1;
        out.spacings.push_back(j);
        pos += j;
        const long long res = pos % N;
        out.units.push_back(static_cast<int>(res == 0 ? N : res));
    }
    std::sort(out.units.begin(), out.units.end());
    return out;
}

inline SampleDraw draw_sample(const Design& d, RngStream& rng) {
    switch (d.kind()) {
        case DesignKind::renewal: return draw_renewal(d, rng);
        case DesignKind::equilibrium_renewal: return draw_equilibrium(d, rng);
        case DesignKind::circular: return draw_circular(d, rng);
    }
    throw domain_error("draw_sample: unknown design kind");
}

// Probability of a given fixed-size sample under a circular design:
// n/N times the spacing-vector pmf of the circular gaps minus one.
inline double design_pmf(const Design& d, const std::vector<int>& units) {
    if (d.kind() != DesignKind::circular) throw domain_error("design_pmf: circular designs only");
    const int N = d.N(), n = d.n();
    if (static_cast<int>(units.size()) != n) throw domain_error("design_pmf: wrong sample size");
    for (int i = 0; i < n; ++i) {
        if (units[i] < 1 || units[i] > N) throw domain_error("design_pmf: unit out of range");
        if (i > 0 && units[i] <= units[i - 1])
            throw domain_error("design_pmf: units must be sorted and distinct");
    }
    std::vector<long long> gaps_minus_one(n);
    for (int i = 0; i + 1 < n; ++i) gaps_minus_one[i] = units[i + 1] - units[i] - 1;
    gaps_minus_one[n - 1] = N + units[0] - units[n - 1] - 1;
    return (static_cast<double>(n) / N) * d.spacings().pmf_vector(gaps_minus_one);
}

} // namespace spacesamp

#endif
