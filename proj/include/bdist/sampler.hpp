#ifndef BDIST_SAMPLER_HPP
#define BDIST_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bdist/chain.hpp"

// Variate generation. sample_count draws the interval lengths by inverting
// the geometric interval cdfs; simulate_chain plays the possession chain
// goal by goal and serves as a cross-check oracle.

namespace bdist {

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    // uniform on (0,1)
    double uniform() {
        double u;
        do {
            u = double(engine_() >> 11) * 0x1.0p-53;
        } while (u <= 0.0);
        return u;
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

// Inversion by sequential search with multiplicative pmf updates; keeps the
// draw deterministic across platforms for a given RandomSource stream.
inline long long parent_sample(const ParentDist& parent, RandomSource& rng) {
    if (const auto* f = std::get_if<FixedParent>(&parent.variant())) return f->n;
    const double u = rng.uniform();
    const long long bound = parent.support_bound();
    double p = parent.pmf(0);
    double cum = p;
    long long n = 0;
    while (cum < u && (bound < 0 || n < bound)) {
        ++n;
        if (const auto* po = std::get_if<PoissonParent>(&parent.variant())) {
            p *= po->mu0 / double(n);
        } else if (const auto* bi = std::get_if<BinomialParent>(&parent.variant())) {
            p *= double(bi->trials - n + 1) / double(n) * bi->r3 / (1.0 - bi->r3);
        } else if (const auto* nb = std::get_if<NegBinParent>(&parent.variant())) {
            p *= (double(n) - 1.0 + nb->size) / double(n) * (1.0 - nb->prob);
        } else {
            p = parent.pmf(n);
        }
        cum += p;
        if (n > kDefaultSupportCap)
            throw std::length_error("parent_sample: support cap exceeded");
    }
    return n;
}

}  // namespace detail

// One interval via inverse cdf; c is the geometric-tail mass (r2 for
// ordinary intervals, r2/(r1+r2) for the equilibrium first interval).
inline long long interval_from_uniform(const ChainParams& chain, double c, double u) {
    if (u > c) return 1;
    if (chain.r1 == 1.0) return 2;  // tail collapses to a point at 2
    const long long x =
        (long long)(std::floor(std::log(u / c) / std::log(1.0 - chain.r1))) + 2;
    return x < 2 ? 2 : x;
}

inline long long sample_interval(const ChainParams& chain, double c, RandomSource& rng) {
    return interval_from_uniform(chain, c, rng.uniform());
}

inline long long sample_count(const BDistSpec& spec, RandomSource& rng) {
    const long long n = detail::parent_sample(spec.parent, rng);
    if (spec.chain.r1 == 0.0) return 0;  // team 1 never scores
    double c = stationary_possession(spec.chain);
    long long nsum = 0, count = 0;
    for (;;) {
        nsum += sample_interval(spec.chain, c, rng);
        if (nsum > n) return count;  // the overshooting interval does not count
        ++count;
        c = spec.chain.r2;
    }
}

inline long long simulate_chain(const BDistSpec& spec, RandomSource& rng) {
    const long long n = detail::parent_sample(spec.parent, rng);
    bool team1_poss = rng.uniform() <= stationary_possession(spec.chain);
    long long count = 0;
    for (long long g = 0; g < n; ++g) {
        const double p_score = team1_poss ? spec.chain.r1 : 1.0 - spec.chain.r2;
        const bool team1_scored = rng.uniform() <= p_score;
        if (team1_scored) ++count;
        team1_poss = !team1_scored;  // conceding team gets starting possession
    }
    return count;
}

struct SampleBatch {
    std::vector<long long> counts;
    std::uint64_t seed;
};

inline SampleBatch sample_batch(const BDistSpec& spec, std::size_t n_draws,
                                std::uint64_t seed) {
    if (n_draws < 1) throw std::invalid_argument("sample_batch: n_draws must be >= 1");
    RandomSource rng(seed);
    SampleBatch batch;
    batch.seed = seed;
    batch.counts.reserve(n_draws);
    for (std::size_t k = 0; k < n_draws; ++k) batch.counts.push_back(sample_count(spec, rng));
    return batch;
}

}  // namespace bdist

#endif  // BDIST_SAMPLER_HPP
