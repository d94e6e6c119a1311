#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracle_helpers.hpp"
#include "spacesamp/estimation.hpp"
#include "spacesamp/oracle.hpp"

using namespace spacesamp;

namespace {

PopulationData demo_population(int N) {
    std::vector<double> y(N);
    for (int k = 0; k < N; ++k) y[k] = 3.0 + 0.5 * k + ((k * 7) % 5) * 0.3;
    return PopulationData::from_values(y);
}

} // namespace

TEST_CASE("population container", "[estimation]") {
    const PopulationData p = PopulationData::from_values({1.0, 2.0, 4.0});
    CHECK(p.N() == 3);
    CHECK(p.y[1] == 1.0);
    CHECK(p.total() == Catch::Approx(7.0));
    CHECK_THROWS_AS(PopulationData::from_values({1.0, std::nan("")}), domain_error);
}

TEST_CASE("census expansion reproduces the total exactly", "[estimation]") {
    const PopulationData pop = demo_population(12);
    std::vector<double> pi(13, 1.0);
    std::vector<int> all(12);
    for (int k = 1; k <= 12; ++k) all[k - 1] = k;
    CHECK(ht_total(all, pop, pi) == Catch::Approx(pop.total()).margin(1e-12));
    CHECK(ht_mean(all, pop, pi) == Catch::Approx(pop.total() / 12).margin(1e-12));
    const auto one = [](int, int) { return 1.0; };
    CHECK(var_ht(all, pop, pi, one) == Catch::Approx(0.0).margin(1e-12));
    CHECK(var_syg(all, pop, pi, one) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("expansion estimator input validation", "[estimation]") {
    const PopulationData pop = demo_population(5);
    std::vector<double> pi(6, 0.5);
    CHECK_THROWS_AS(ht_total({0}, pop, pi), domain_error);
    CHECK_THROWS_AS(ht_total({6}, pop, pi), domain_error);
    pi[2] = 0.0;
    CHECK_THROWS_AS(ht_total({2}, pop, pi), domain_error);
}

TEST_CASE("zero joint probability is a non-estimable pair", "[estimation]") {
    const PopulationData pop = demo_population(5);
    std::vector<double> pi(6, 0.5);
    const auto zero_13 = [](int k, int l) { return (k == 1 && l == 3) ? 0.0 : 0.3; };
    try {
        var_ht({1, 3, 4}, pop, pi, zero_13);
        FAIL("expected non_estimable_error");
    } catch (const non_estimable_error& e) {
        CHECK(e.unit_k() == 1);
        CHECK(e.unit_l() == 3);
    }
    CHECK_THROWS_AS(var_syg({1, 3}, pop, pi, zero_13), non_estimable_error);
}

TEST_CASE("confidence interval from frozen normal quantiles", "[estimation]") {
    const auto ci95 = confidence_interval(10.0, 1.0, 0.95);
    REQUIRE(ci95.has_value());
    CHECK(ci95->first == Catch::Approx(10.0 - testoracle::kZ95).margin(1e-12));
    CHECK(ci95->second == Catch::Approx(10.0 + testoracle::kZ95).margin(1e-12));

    const auto ci50 = confidence_interval(0.0, 4.0, 0.50);
    REQUIRE(ci50.has_value());
    CHECK(ci50->second == Catch::Approx(2.0 * testoracle::kZ50).margin(1e-12));

    CHECK(!confidence_interval(10.0, -0.25, 0.95).has_value());
    CHECK_THROWS_AS(confidence_interval(10.0, 1.0, 0.0), domain_error);
    CHECK_THROWS_AS(confidence_interval(10.0, 1.0, 1.0), domain_error);
}

TEST_CASE("estimators are design-unbiased under fixed-size designs", "[estimation]") {
    // families whose joint probabilities are strictly positive at every gap,
    // so both variance estimators see every pair
    const int N = 8, n = 3;
    const PopulationData pop = demo_population(N);
    const double T = pop.total();

    for (const Design& d :
         {Design::circular(N, n, SpacingFamily::mnh, 1.0), Design::circular(N, n, SpacingFamily::mnh, 2.0),
          Design::circular(N, n, SpacingFamily::mnom)}) {
        const DesignEnumeration e = enumerate_circular(d);
        const JointProbMatrix probs = inclusion_summary(d);
        const bool uniform = d.spacings().family() == SpacingFamily::mnh && d.spacings().r() == 1.0;

        double e_ht = 0.0, e_vht = 0.0, e_vsyg = 0.0, var_true = 0.0;
        for (const auto& [subset, p] : e.entries) {
            if (p == 0.0) continue;
            const double est = ht_total(subset, pop, probs.pi);
            e_ht += p * est;
            var_true += p * (est - T) * (est - T);
            const double v1 = var_ht(subset, pop, probs.pi, probs);
            const double v2 = var_syg(subset, pop, probs.pi, probs);
            if (uniform) CHECK(v2 >= -1e-10); // all deltas nonpositive there
            e_vht += p * v1;
            e_vsyg += p * v2;
        }
        INFO("design family " << static_cast<int>(d.spacings().family()) << " r=" << d.spacings().r());
        CHECK(e_ht == Catch::Approx(T).margin(1e-9));
        CHECK(e_vht == Catch::Approx(var_true).margin(1e-9));
        CHECK(e_vsyg == Catch::Approx(var_true).margin(1e-9));
    }
}

TEST_CASE("variance estimators collect exactly the measurable pairs", "[estimation]") {
    // the capped repulsive family zeroes some joint probabilities; pairs that
    // can never co-occur are invisible to any estimator, and the expected
    // estimate equals the variance formula restricted to the visible pairs
    const int N = 8, n = 3;
    const PopulationData pop = demo_population(N);
    const Design d = Design::circular(N, n, SpacingFamily::mh, 2.0);
    const DesignEnumeration e = enumerate_circular(d);
    const JointProbMatrix probs = inclusion_summary(d);

    double e_ht = 0.0, e_vht = 0.0, e_vsyg = 0.0;
    const double T = pop.total();
    for (const auto& [subset, p] : e.entries) {
        if (p == 0.0) continue;
        e_ht += p * ht_total(subset, pop, probs.pi);
        e_vht += p * var_ht(subset, pop, probs.pi, probs);
        e_vsyg += p * var_syg(subset, pop, probs.pi, probs);
    }
    CHECK(e_ht == Catch::Approx(T).margin(1e-9));

    double vis_syg = 0.0, vis_ht = 0.0;
    for (int k = 1; k <= N; ++k) {
        const double ek = pop.y[k] / probs.pi[k];
        vis_ht += probs.pi[k] * ek * ek * (1.0 - probs.pi[k]);
        for (int l = k + 1; l <= N; ++l) {
            if (probs.joint(k, l) <= 0.0) continue;
            const double el = pop.y[l] / probs.pi[l];
            const double delta = probs.joint(k, l) - probs.pi[k] * probs.pi[l];
            vis_syg += (ek - el) * (ek - el) * (-delta);
            vis_ht += 2.0 * ek * el * delta;
        }
    }
    CHECK(e_vsyg == Catch::Approx(vis_syg).margin(1e-9));
    CHECK(e_vht == Catch::Approx(vis_ht).margin(1e-9));
}

TEST_CASE("estimators are design-unbiased under chain designs", "[estimation]") {
    const int N = 6;
    const PopulationData pop = demo_population(N);
    const double T = pop.total();
    const DiscreteDist jump = DiscreteDist::bernoulli(0.5); // J uniform on {1,2}

    for (bool equilibrium : {false, true}) {
        const auto outcomes = testoracle::renewal_outcomes(jump, N, equilibrium);
        double mass = 0.0;
        for (const auto& [units, p] : outcomes) mass += p;
        REQUIRE(mass == Catch::Approx(1.0).margin(1e-12));

        const DesignEnumeration e = enumerate_renewal(jump, N, equilibrium);
        const auto pikl = [&](int k, int l) { return e.pikl[k][l]; };

        double e_ht = 0.0, e_vht = 0.0, var_true = 0.0;
        for (const auto& [units, p] : outcomes) {
            const double est = ht_total(units, pop, e.pi);
            e_ht += p * est;
            var_true += p * (est - T) * (est - T);
            e_vht += p * var_ht(units, pop, e.pi, pikl);
        }
        INFO("equilibrium=" << equilibrium);
        CHECK(e_ht == Catch::Approx(T).margin(1e-10));
        CHECK(e_vht == Catch::Approx(var_true).margin(1e-10));
    }
}

TEST_CASE("full estimate combines the pieces per design kind", "[estimation]") {
    const int N = 10;
    const PopulationData pop = demo_population(N);

    const Design c = Design::circular(N, 4, SpacingFamily::mnom);
    const JointProbMatrix pc = inclusion_summary(c);
    const EstimateResult rc = estimate_sample({2, 5, 6, 9}, pop, pc, 0.95);
    CHECK(rc.point == Catch::Approx(ht_total({2, 5, 6, 9}, pop, pc.pi)));
    CHECK(std::isfinite(rc.variance_syg));
    REQUIRE(rc.ci.has_value());
    CHECK(rc.ci->second - rc.point ==
          Catch::Approx(testoracle::kZ95 * std::sqrt(rc.variance_syg)).margin(1e-9));

    const Design r = Design::equilibrium_renewal(N, DiscreteDist::bernoulli(0.5));
    const JointProbMatrix pr = inclusion_summary(r);
    const EstimateResult rr = estimate_sample({1, 3, 4}, pop, pr, 0.9);
    CHECK(std::isnan(rr.variance_syg));
    REQUIRE(rr.ci.has_value());
    CHECK(rr.ci->second - rr.point ==
          Catch::Approx(normal_quantile(0.95) * std::sqrt(rr.variance_ht)).margin(1e-9));

    CHECK_THROWS_AS(estimate_sample({1}, demo_population(N + 1), pc, 0.95), domain_error);
}
