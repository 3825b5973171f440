#include <catch2/catch_amalgamated.hpp>

#include "bdist/pmf.hpp"
#include "bdist/sampler.hpp"
#include "helpers.hpp"

using namespace bdist;
using namespace test_helpers;

TEST_CASE("interval inversion") {
    const ChainParams chain(0.5, 0.5);
    CHECK(interval_from_uniform(chain, 0.5, 0.9) == 1);
    CHECK(interval_from_uniform(chain, 0.5, 0.1) == 4);
    CHECK(interval_from_uniform(ChainParams(1.0, 0.5), 0.5, 0.3) == 2);
}

TEST_CASE("degenerate draws") {
    RandomSource rng(5);
    for (int k = 0; k < 50; ++k) {
        CHECK(sample_count(BDistSpec(ChainParams(1.0, 0.0), ParentDist::fixed(5)), rng) == 5);
        CHECK(sample_count(BDistSpec(ChainParams(0.0, 1.0), ParentDist::fixed(5)), rng) == 0);
        CHECK(sample_count(BDistSpec(ChainParams(0.7, 0.2), ParentDist::fixed(0)), rng) == 0);
        CHECK(simulate_chain(BDistSpec(ChainParams(0.6, 0.1), ParentDist::fixed(0)), rng) == 0);
    }
}

TEST_CASE("alternating chain") {
    // r1 = r2 = 1: every goal flips the scorer, so the count is within 1 of n/2
    RandomSource rng(9);
    for (int k = 0; k < 20; ++k)
        CHECK(simulate_chain(BDistSpec(ChainParams(1.0, 1.0), ParentDist::fixed(4)), rng) == 2);
}

TEST_CASE("batch determinism") {
    const BDistSpec spec(ChainParams(0.6, 0.3), ParentDist::poisson(5.0));
    const SampleBatch a = sample_batch(spec, 500, 123);
    const SampleBatch b = sample_batch(spec, 500, 123);
    CHECK(a.counts == b.counts);
    const SampleBatch c = sample_batch(spec, 500, 124);
    CHECK(a.counts != c.counts);
    CHECK_THROWS_AS(sample_batch(spec, 0, 1), std::invalid_argument);
}

TEST_CASE("sample mean matches the exact mean") {
    const BDistSpec spec(ChainParams(0.8, 0.3), ParentDist::fixed(11));
    const std::size_t n = 200000;
    const SampleBatch batch = sample_batch(spec, n, 31);
    double m = 0.0;
    for (long long v : batch.counts) m += double(v);
    m /= double(n);
    const double sd = std::sqrt(pmf(spec).variance() / double(n));
    CHECK(std::abs(m - 8.0) < 4.0 * sd);
}

TEST_CASE("goodness of fit against the exact pmf") {
    const std::size_t n_draws = 200000;
    const std::vector<BDistSpec> specs = {
        BDistSpec(ChainParams(0.8, 0.3), ParentDist::fixed(3)),
        BDistSpec(ChainParams(0.3, 0.5), ParentDist::poisson(6.0)),
        BDistSpec(ChainParams(0.6, 0.7), ParentDist::binomial(0.4, 15)),
    };
    std::uint64_t seed = 1000;
    for (const BDistSpec& spec : specs) {
        const SampleBatch batch = sample_batch(spec, n_draws, seed++);
        const std::vector<long long> h = histogram(batch.counts);
        const PmfVector v = pmf(spec, 1e-13);
        std::size_t df = 0;
        const double stat = chi_square_stat(h, v.probs, double(n_draws), &df);
        CHECK(stat < chi_square_critical(double(df), kZ999));
    }
}

TEST_CASE("the two samplers agree in distribution") {
    const BDistSpec spec(ChainParams(0.5, 0.5), ParentDist::poisson(10.0));
    const std::size_t n_draws = 200000;
    const SampleBatch inverse = sample_batch(spec, n_draws, 77);
    RandomSource rng(78);
    std::vector<long long> direct;
    direct.reserve(n_draws);
    for (std::size_t k = 0; k < n_draws; ++k) direct.push_back(simulate_chain(spec, rng));
    std::size_t df = 0;
    const double stat =
        two_sample_chi_square(histogram(inverse.counts), histogram(direct), &df);
    CHECK(stat < chi_square_critical(double(df), kZ999));
}

TEST_CASE("counts never exceed the parent draw") {
    RandomSource rng(13);
    const BDistSpec spec(ChainParams(0.9, 0.1), ParentDist::fixed(6));
    for (int k = 0; k < 2000; ++k) {
        const long long c = sample_count(spec, rng);
        CHECK(c >= 0);
        CHECK(c <= 6);
    }
}
