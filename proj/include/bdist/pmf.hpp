#ifndef BDIST_PMF_HPP
#define BDIST_PMF_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bdist/chain.hpp"

// Exact pmf of the b-distribution via the two-track possession recursion:
//   q1[i] <- (1-r1) q1[i] + r2 q2[i]
//   q2[i] <- r1 q1[i-1] + (1-r2) q2[i-1]
// where q1/q2 carry the probability that team 1 has scored i of the n goals
// so far and team 1/team 2 has starting possession. p_i accumulates
// (q1[i]+q2[i]) P_n over the parent support.

namespace bdist {

struct PmfVector {
    std::vector<double> probs;
    double truncation_mass = 0.0;  // parent tail mass discarded; 0 for bounded parents

    double mean() const {
        double m = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) m += double(i) * probs[i];
        return m;
    }
    double variance() const {
        double m = mean(), m2 = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) m2 += double(i) * double(i) * probs[i];
        return m2 - m * m;
    }
};

inline constexpr long long kDefaultSupportCap = 100000;

inline PmfVector pmf(const BDistSpec& spec, double tail_tol = 1e-12,
                     long long support_cap = kDefaultSupportCap) {
    if (!(tail_tol > 0.0)) throw std::invalid_argument("pmf: tail_tol must be positive");
    const double r1 = spec.chain.r1, r2 = spec.chain.r2;
    const double s = r2 / (r1 + r2);

    const long long bound = spec.parent.support_bound();
    PmfVector out;

    std::vector<double> q1{s}, q2{1.0 - s};
    std::vector<double> acc;
    double parent_mass = 0.0;

    auto accumulate = [&](long long n) {
        const double pn = spec.parent.pmf(n);
        if (pn > 0.0) {
            if (acc.size() < q1.size()) acc.resize(q1.size(), 0.0);
            for (std::size_t i = 0; i < q1.size(); ++i) acc[i] += pn * (q1[i] + q2[i]);
            parent_mass += pn;
        }
    };

    accumulate(0);
    long long n = 0;
    // accumulated rounding can leave the summed parent mass just below the
    // target; also stop once the parent terms themselves have decayed past
    // the tolerance on the falling flank
    const double parent_mean = spec.parent.mean();
    auto tail_done = [&](long long at) {
        if (parent_mass >= 1.0 - tail_tol) return true;
        return double(at) > parent_mean && spec.parent.pmf(at) < tail_tol * 1e-3;
    };
    while (!tail_done(n) && (bound < 0 || n < bound)) {
        ++n;
        if (n > support_cap)
            throw std::length_error("pmf: parent support exceeds cap");
        q1.push_back(0.0);
        q2.push_back(0.0);
        // one chain step; iterate downwards so q[i-1] is still the old value
        for (long long i = n; i >= 0; --i) {
            const double prev1 = q1[std::size_t(i)], prev2 = q2[std::size_t(i)];
            q2[std::size_t(i)] = i > 0 ? r1 * q1[std::size_t(i - 1)] + (1.0 - r2) * q2[std::size_t(i - 1)]
                                       : 0.0;
            q1[std::size_t(i)] = (1.0 - r1) * prev1 + r2 * prev2;
        }
        accumulate(n);
    }

    out.probs = std::move(acc);
    if (out.probs.empty()) out.probs.push_back(0.0);
    out.truncation_mass = bound >= 0 ? 0.0 : std::max(0.0, 1.0 - parent_mass);
    return out;
}

// Test oracle: enumerate both initial-possession states and all 2^n goal
// sequences of the chain directly. The team that concedes a goal gets the
// next starting possession.
inline PmfVector brute_force_pmf(const ChainParams& chain, int n) {
    if (n < 0 || n > 20)
        throw std::length_error("brute_force_pmf: n must lie in [0,20]");
    const double r1 = chain.r1, r2 = chain.r2;
    PmfVector out;
    out.probs.assign(std::size_t(n) + 1, 0.0);

    // depth-first over goal outcomes; state = (goals left, team-1 possession)
    auto walk = [&](auto&& self, int remaining, bool team1_poss, double weight,
                    int count) -> void {
        if (weight == 0.0) return;
        if (remaining == 0) {
            out.probs[std::size_t(count)] += weight;
            return;
        }
        const double p_score = team1_poss ? r1 : 1.0 - r2;
        self(self, remaining - 1, false, weight * p_score, count + 1);
        self(self, remaining - 1, true, weight * (1.0 - p_score), count);
    };

    const double s = stationary_possession(chain);
    walk(walk, n, true, s, 0);
    walk(walk, n, false, 1.0 - s, 0);
    return out;
}

// Number of local maxima; a maximal run of equal values counts once.
inline int count_modes(const PmfVector& p) {
    if (p.probs.empty()) throw std::invalid_argument("count_modes: empty pmf");
    const auto& v = p.probs;
    int modes = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;  // plateau [i, j]
        const bool rises_left = i == 0 || v[i - 1] < v[i];
        const bool falls_right = j + 1 == v.size() || v[j + 1] < v[i];
        if (rises_left && falls_right) ++modes;
        i = j + 1;
    }
    return modes;
}

}  // namespace bdist

#endif  // BDIST_PMF_HPP
