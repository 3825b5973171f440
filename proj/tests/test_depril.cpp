#include <catch2/catch_amalgamated.hpp>

#include "bdist/depril.hpp"
#include "bdist/renewal.hpp"

using namespace bdist;

TEST_CASE("convolution table values") {
    const ChainParams chain(0.8, 0.3);
    const ConvolutionTable t2 = depril_convolve(chain, 2, 6);
    REQUIRE(t2.first_s == 2);
    CHECK(t2.values[0] == Catch::Approx(0.49).margin(1e-15));       // P2(2) = 0.7^2
    CHECK(t2.values[1] == Catch::Approx(0.336).margin(1e-14));      // 2 * 0.7 * 0.24

    // r1 = 1: the interval law is concentrated on {1, 2}
    const ConvolutionTable t1 = depril_convolve(ChainParams(1.0, 0.3), 1, 5);
    CHECK(t1.values[0] == Catch::Approx(0.7).margin(1e-15));
    CHECK(t1.values[1] == Catch::Approx(0.3).margin(1e-15));
    CHECK(t1.values[2] == Catch::Approx(0.0).margin(1e-15));
    CHECK(t1.values[3] == Catch::Approx(0.0).margin(1e-15));

    CHECK_THROWS_AS(depril_convolve(chain, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(depril_convolve(chain, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(depril_convolve(ChainParams(0.5, 1.0), 1, 5), std::invalid_argument);
}

TEST_CASE("convolution table matches direct convolution") {
    const ChainParams chain(0.6, 0.4);
    // direct convolution of the ordinary interval law with itself
    const long long s_max = 25;
    std::vector<double> p1(std::size_t(s_max) + 1, 0.0);
    for (long long m = 1; m <= s_max; ++m)
        p1[std::size_t(m)] = interval_pmf(chain, m);
    std::vector<double> direct = p1;
    for (int order = 2; order <= 3; ++order) {
        std::vector<double> next(std::size_t(s_max) + 1, 0.0);
        for (long long s = 0; s <= s_max; ++s)
            for (long long m = 1; m < s; ++m)
                next[std::size_t(s)] += direct[std::size_t(s - m)] * p1[std::size_t(m)];
        direct = next;
        const ConvolutionTable t = depril_convolve(chain, order, s_max);
        for (long long s = order; s <= s_max; ++s)
            CHECK(t.values[std::size_t(s - order)] ==
                  Catch::Approx(direct[std::size_t(s)]).margin(1e-13));
    }
}

TEST_CASE("stability guard boundary") {
    CHECK_FALSE(stability_guard_stop(1e-3));
    CHECK_FALSE(stability_guard_stop(0.0));
    CHECK(stability_guard_stop(-1e-18));
}

TEST_CASE("fast single probabilities") {
    CHECK(fast_prob(BDistSpec(ChainParams(0.8, 0.3), ParentDist::fixed(3)), 2) ==
          Catch::Approx(0.48).margin(1e-12));
    CHECK(fast_prob(BDistSpec(ChainParams(0.5, 0.5), ParentDist::poisson(10.0)), 5) ==
          Catch::Approx(0.1754673697678507).margin(1e-10));
    CHECK(fast_prob(BDistSpec(ChainParams(0.6, 0.2), ParentDist::fixed(4)), 7) == 0.0);
    CHECK_THROWS_AS(fast_prob(BDistSpec(ChainParams(0.5, 0.5), ParentDist::fixed(3)), -1),
                    std::invalid_argument);
}

TEST_CASE("fast path equals the recursion") {
    for (double r1 : {0.2, 0.5, 0.9}) {
        for (double r2 : {0.3, 0.8}) {
            const ChainParams chain(r1, r2);
            for (int n : {1, 6, 15}) {
                const BDistSpec spec(chain, ParentDist::fixed(n));
                const PmfVector v = pmf(spec);
                for (int i = 0; i <= n; ++i)
                    CHECK(fast_prob(spec, i) ==
                          Catch::Approx(v.probs[std::size_t(i)]).margin(1e-11));
            }
            const BDistSpec pois(chain, ParentDist::poisson(8.0));
            const PmfVector v = pmf(pois, 1e-13);
            for (std::size_t i = 0; i < v.probs.size(); ++i)
                CHECK(fast_prob(pois, (long long)i) ==
                      Catch::Approx(v.probs[i]).margin(1e-11));
        }
    }
}

TEST_CASE("edge chains route through the recursion") {
    const BDistSpec a(ChainParams(1.0, 0.4), ParentDist::fixed(5));
    const PmfVector va = pmf(a);
    for (int i = 0; i <= 5; ++i)
        CHECK(fast_prob(a, i) == Catch::Approx(va.probs[std::size_t(i)]).margin(1e-13));

    const BDistSpec b(ChainParams(0.4, 1.0), ParentDist::fixed(5));
    const PmfVector vb = pmf(b);
    for (int i = 0; i <= 5; ++i)
        CHECK(fast_prob(b, i) == Catch::Approx(vb.probs[std::size_t(i)]).margin(1e-13));
}

TEST_CASE("fast probabilities sum to 1") {
    const BDistSpec spec(ChainParams(0.45, 0.35), ParentDist::poisson(12.0));
    double total = 0.0;
    for (long long i = 0; i <= 60; ++i) total += fast_prob(spec, i);
    CHECK(total == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("operation count scales with the distance to the parent bound") {
    const BDistSpec spec(ChainParams(0.55, 0.4), ParentDist::fixed(300));
    FastProbStats near_stats, far_stats;
    fast_prob(spec, 280, 1e-12, &near_stats);
    fast_prob(spec, 40, 1e-12, &far_stats);
    CHECK(near_stats.ops < far_stats.ops);
    CHECK(near_stats.ops <= 25);
}
