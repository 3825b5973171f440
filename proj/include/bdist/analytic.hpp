#ifndef BDIST_ANALYTIC_HPP
#define BDIST_ANALYTIC_HPP

#include <cmath>
#include <stdexcept>
#include <variant>

#include "bdist/chain.hpp"
#include "bdist/pmf.hpp"

// Closed-form p0 and p1 for fixed-N, binomial-parent and Poisson-parent
// specs, zero modification, and the spike-at-zero test.

namespace bdist {

namespace detail {

// The r1 -> 1 closed forms divide by (1-r1); fall back to the recursion there.
inline constexpr double kR1SingularityTol = 1e-8;

inline double pmf_entry(const BDistSpec& spec, std::size_t i) {
    const PmfVector v = pmf(spec, 1e-14);
    return i < v.probs.size() ? v.probs[i] : 0.0;
}

inline double p0_fixed(double r1, double r2, long long n) {
    if (n == 0) return 1.0;
    return r2 * std::pow(1.0 - r1, double(n - 1)) / (r1 + r2);
}

inline double p1_fixed(double r1, double r2, long long n) {
    if (n == 0) return 0.0;
    if (n == 1) return r1 / (r1 + r2);
    // (n-2) term vanishes at n=2; skip it so (1-r1)^(n-3) is never evaluated
    double t = 2.0 * r1 * r2 * std::pow(1.0 - r1, double(n - 2));
    if (n > 2) t += double(n - 2) * r1 * r2 * r2 * std::pow(1.0 - r1, double(n - 3));
    return t / (r1 + r2);
}

}  // namespace detail

inline double analytic_p0(const BDistSpec& spec) {
    const double r1 = spec.chain.r1, r2 = spec.chain.r2;
    if (const auto* f = std::get_if<FixedParent>(&spec.parent.variant()))
        return detail::p0_fixed(r1, r2, f->n);
    if (std::abs(1.0 - r1) < detail::kR1SingularityTol) return detail::pmf_entry(spec, 0);
    const double mix = r2 / ((r1 + r2) * (1.0 - r1));
    if (const auto* b = std::get_if<BinomialParent>(&spec.parent.variant())) {
        const double N = double(b->trials), r3 = b->r3;
        return mix * (std::pow(1.0 - r1 * r3, N) - std::pow(1.0 - r3, N)) +
               std::pow(1.0 - r3, N);
    }
    if (const auto* p = std::get_if<PoissonParent>(&spec.parent.variant())) {
        return mix * (std::exp(-r1 * p->mu0) - std::exp(-p->mu0)) + std::exp(-p->mu0);
    }
    throw std::invalid_argument("analytic_p0: unsupported parent (use pmf())");
}

inline double analytic_p1(const BDistSpec& spec) {
    const double r1 = spec.chain.r1, r2 = spec.chain.r2;
    if (const auto* f = std::get_if<FixedParent>(&spec.parent.variant()))
        return detail::p1_fixed(r1, r2, f->n);
    if (std::abs(1.0 - r1) < detail::kR1SingularityTol) return detail::pmf_entry(spec, 1);
    const double u = 1.0 - r1;
    const double u2 = u * u, u3 = u2 * u;
    if (const auto* b = std::get_if<BinomialParent>(&spec.parent.variant())) {
        const double N = double(b->trials), r3 = b->r3;
        const double qa = std::pow(1.0 - r1 * r3, N);      // (1-r1 r3)^N
        const double qa1 = std::pow(1.0 - r1 * r3, N - 1);
        const double qb = std::pow(1.0 - r3, N);           // (1-r3)^N
        const double qb1 = std::pow(1.0 - r3, N - 1);
        // Mixture of the fixed-N p1 over Bin(r3,N); derived by binomial sums
        // of 2 r1 r2 (1-r1)^(n-2) + (n-2) r1 r2^2 (1-r1)^(n-3), plus the n=1 mass.
        const double t = 2.0 * r1 * r2 * qa / u2 + N * r1 * r2 * r2 * r3 * qa1 / u2 -
                         2.0 * r1 * r2 * r2 * qa / u3 + N * r1 * r3 * qb1 -
                         2.0 * r1 * r2 * qb / u2 + 2.0 * r1 * r2 * r2 * qb / u3 -
                         2.0 * N * r1 * r2 * r3 * qb1 / u + N * r1 * r2 * r2 * r3 * qb1 / u2;
        return t / (r1 + r2);
    }
    if (const auto* p = std::get_if<PoissonParent>(&spec.parent.variant())) {
        const double mu0 = p->mu0;
        const double ea = std::exp(-r1 * mu0), eb = std::exp(-mu0);
        const double t = 2.0 * r1 * r2 * ea / u2 + r1 * r2 * r2 * mu0 * ea / u2 -
                         2.0 * r1 * r2 * r2 * ea / u3 + r1 * mu0 * eb -
                         2.0 * r1 * r2 * eb / u2 + 2.0 * r1 * r2 * r2 * eb / u3 -
                         2.0 * r1 * r2 * mu0 * eb / u + r1 * r2 * r2 * mu0 * eb / u2;
        return t / (r1 + r2);
    }
    throw std::invalid_argument("analytic_p1: unsupported parent (use pmf())");
}

struct ZeroModification {
    double p0_new;  // zero mass substituted before renormalization

    explicit ZeroModification(double p) : p0_new(p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("ZeroModification: p0_new must lie in [0,1]");
    }
};

struct ZeroModifyResult {
    PmfVector pmf;
    double new_mean;
};

// p0 is replaced by p0_new and every entry (p0_new included) is divided by
// the normalizer 1 + p0_new - p0, so the result is again a distribution and
// the mean scales to mu/(1 + p0_new - p0).
inline ZeroModifyResult zero_modify(const PmfVector& p, const ZeroModification& mod) {
    if (p.probs.empty()) throw std::invalid_argument("zero_modify: empty pmf");
    const double p0 = p.probs[0];
    const double norm = 1.0 + mod.p0_new - p0;
    if (!(norm > 0.0))
        throw std::domain_error("zero_modify: normalizer 1 + p0' - p0 is not positive");
    ZeroModifyResult out;
    out.pmf.probs = p.probs;
    out.pmf.probs[0] = mod.p0_new;
    for (double& q : out.pmf.probs) q /= norm;
    out.pmf.truncation_mass = p.truncation_mass / norm;
    out.new_mean = p.mean() / norm;
    return out;
}

inline bool spike_at_zero(const BDistSpec& spec) {
    const bool closed_form =
        std::holds_alternative<FixedParent>(spec.parent.variant()) ||
        std::holds_alternative<BinomialParent>(spec.parent.variant()) ||
        std::holds_alternative<PoissonParent>(spec.parent.variant());
    if (closed_form) return analytic_p0(spec) > analytic_p1(spec);
    const PmfVector v = pmf(spec, 1e-12);
    const double p1 = v.probs.size() > 1 ? v.probs[1] : 0.0;
    return v.probs[0] > p1;
}

}  // namespace bdist

#endif  // BDIST_ANALYTIC_HPP
