#ifndef BDIST_RENEWAL_HPP
#define BDIST_RENEWAL_HPP

#include <cmath>
#include <stdexcept>

#include "bdist/chain.hpp"

// Renewal view of the chain: team-1 goals form a discrete renewal process.
// Ordinary intervals: P(1) = 1-r2, P(m>1) = r1 r2 (1-r1)^(m-2).
// Equilibrium first interval: P(1) = r1/(r1+r2), P(m>1) = r1 r2/(r1+r2) (1-r1)^(m-2).

namespace bdist {

enum class IntervalKind { Ordinary, Equilibrium };

inline double interval_pmf(const ChainParams& chain, long long m,
                           IntervalKind kind = IntervalKind::Ordinary) {
    if (m < 1) return 0.0;
    const double r1 = chain.r1, r2 = chain.r2;
    if (kind == IntervalKind::Ordinary) {
        if (m == 1) return 1.0 - r2;
        return r1 * r2 * std::pow(1.0 - r1, double(m - 2));
    }
    const double s = r2 / (r1 + r2);
    if (m == 1) return 1.0 - s;
    return r1 * s * std::pow(1.0 - r1, double(m - 2));
}

inline double interval_cdf(const ChainParams& chain, long long m,
                           IntervalKind kind = IntervalKind::Ordinary) {
    if (m < 1) return 0.0;
    const double r1 = chain.r1, r2 = chain.r2;
    if (kind == IntervalKind::Ordinary)
        return 1.0 - r2 * std::pow(1.0 - r1, double(m - 1));
    return 1.0 - r2 / (r1 + r2) * std::pow(1.0 - r1, double(m - 1));
}

inline double interval_dist(const ChainParams& chain, long long m, bool equilibrium,
                            bool cdf) {
    const IntervalKind kind = equilibrium ? IntervalKind::Equilibrium : IntervalKind::Ordinary;
    return cdf ? interval_cdf(chain, m, kind) : interval_pmf(chain, m, kind);
}

// pgf of the ordinary interval law: G(z) = (1-r2)z + z^2 r1 r2 / (1 - (1-r1)z).
inline double pgf_eval(const ChainParams& chain, double z) {
    const double r1 = chain.r1, r2 = chain.r2;
    if ((1.0 - r1) * z >= 1.0)
        throw std::domain_error("pgf_eval: (1-r1)z >= 1, outside radius of convergence");
    return (1.0 - r2) * z + z * z * r1 * r2 / (1.0 - (1.0 - r1) * z);
}

struct RenewalMoments {
    double m1;   // mean interval
    double v1;   // interval variance
    double et3;  // third raw moment
    double k1;   // third central moment
};

inline RenewalMoments moments(const ChainParams& chain) {
    const double r1 = chain.r1, r2 = chain.r2;
    if (r1 == 0.0) throw std::domain_error("moments: r1 = 0 gives infinite intervals");
    RenewalMoments m;
    m.m1 = 1.0 + r2 / r1;
    m.v1 = (2.0 - r1 - r2) * r2 / (r1 * r1);
    m.et3 = 1.0 + r2 * (r1 * r1 + 6.0) / (r1 * r1 * r1);
    m.k1 = m.et3 - 3.0 * m.m1 * m.v1 - m.m1 * m.m1 * m.m1;
    return m;
}

struct NormalApprox {
    double mu;
    double variance;
};

// Large-mean normal approximation. Variance combines the renewal-count
// variance E(N) v1/m1^3, the parent contribution var(N)/m1^2, and Cox's
// equilibrium-start correction xi1 = 1/6 + v1^2/(2 m1^4) - k1/(3 m1^3).
inline NormalApprox normal_approx(const BDistSpec& spec) {
    const RenewalMoments rm = moments(spec.chain);
    const double m1 = rm.m1;
    const double xi1 = 1.0 / 6.0 + rm.v1 * rm.v1 / (2.0 * m1 * m1 * m1 * m1) -
                       rm.k1 / (3.0 * m1 * m1 * m1);
    NormalApprox a;
    a.mu = mean(spec);
    a.variance = spec.parent.mean() * rm.v1 / (m1 * m1 * m1) +
                 spec.parent.variance() / (m1 * m1) + xi1;
    if (!(a.variance > 0.0))
        throw std::domain_error("normal_approx: non-positive variance, mean too small");
    return a;
}

}  // namespace bdist

#endif  // BDIST_RENEWAL_HPP
