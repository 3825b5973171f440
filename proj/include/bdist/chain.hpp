#ifndef BDIST_CHAIN_HPP
#define BDIST_CHAIN_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Core model types for the b-distribution family: a two-state Markov chain
// (parameters r1, r2) run for N steps, N drawn from a "parent" distribution.

namespace bdist {

struct ChainParams {
    double r1;
    double r2;

    ChainParams(double r1_, double r2_) : r1(r1_), r2(r2_) {
        if (!(r1 >= 0.0 && r1 <= 1.0) || !(r2 >= 0.0 && r2 <= 1.0))
            throw std::invalid_argument("ChainParams: r1, r2 must lie in [0,1]");
        if (r1 + r2 <= 0.0)
            throw std::invalid_argument(
                "ChainParams: r1 + r2 must be positive (stationary probability undefined)");
    }
};

// Equilibrium probability that team 1 has starting possession.
inline double stationary_possession(const ChainParams& chain) {
    return chain.r2 / (chain.r1 + chain.r2);
}

enum class DispersionRegime { SelfExciting, Thinning, SelfDampening };

inline DispersionRegime classify_dispersion(const ChainParams& chain, double tol = 1e-12) {
    const double s = chain.r1 + chain.r2;
    if (std::abs(s - 1.0) <= tol) return DispersionRegime::Thinning;
    return s < 1.0 ? DispersionRegime::SelfExciting : DispersionRegime::SelfDampening;
}

inline const char* to_string(DispersionRegime regime) {
    switch (regime) {
        case DispersionRegime::SelfExciting: return "self-exciting";
        case DispersionRegime::Thinning: return "thinning";
        default: return "self-dampening";
    }
}

// Parent distribution of the total event count N.

struct FixedParent {
    long long n;
};

struct BinomialParent {
    double r3;
    long long trials;
};

struct PoissonParent {
    double mu0;
};

struct NegBinParent {
    double size;  // E(N) = size*(1-prob)/prob
    double prob;
};

struct CustomParent {
    std::vector<double> probs;  // pmf on 0..probs.size()-1, sums to 1
};

class ParentDist {
public:
    using Variant =
        std::variant<FixedParent, BinomialParent, PoissonParent, NegBinParent, CustomParent>;

    ParentDist(Variant v) : v_(std::move(v)) { validate(); }

    static ParentDist fixed(long long n) { return ParentDist(FixedParent{n}); }
    static ParentDist binomial(double r3, long long trials) {
        return ParentDist(BinomialParent{r3, trials});
    }
    static ParentDist poisson(double mu0) { return ParentDist(PoissonParent{mu0}); }
    static ParentDist negbin(double size, double prob) {
        return ParentDist(NegBinParent{size, prob});
    }
    static ParentDist custom(std::vector<double> probs) {
        return ParentDist(CustomParent{std::move(probs)});
    }

    const Variant& variant() const { return v_; }

    double pmf(long long n) const {
        if (n < 0) return 0.0;
        return std::visit([n](const auto& p) { return pmf_impl(p, n); }, v_);
    }

    double mean() const {
        return std::visit([](const auto& p) { return mean_impl(p); }, v_);
    }

    double variance() const {
        return std::visit([](const auto& p) { return variance_impl(p); }, v_);
    }

    // Largest support index, or -1 when the support is unbounded.
    long long support_bound() const {
        if (const auto* f = std::get_if<FixedParent>(&v_)) return f->n;
        if (const auto* b = std::get_if<BinomialParent>(&v_)) return b->trials;
        if (const auto* c = std::get_if<CustomParent>(&v_))
            return static_cast<long long>(c->probs.size()) - 1;
        return -1;
    }

private:
    Variant v_;

    void validate() const {
        std::visit([](const auto& p) { validate_impl(p); }, v_);
    }

    static void validate_impl(const FixedParent& p) {
        if (p.n < 0) throw std::invalid_argument("FixedParent: n must be non-negative");
    }
    static void validate_impl(const BinomialParent& p) {
        if (!(p.r3 >= 0.0 && p.r3 <= 1.0))
            throw std::invalid_argument("BinomialParent: r3 must lie in [0,1]");
        if (p.trials <= 0) throw std::invalid_argument("BinomialParent: trials must be positive");
    }
    static void validate_impl(const PoissonParent& p) {
        if (!(p.mu0 > 0.0) || !std::isfinite(p.mu0))
            throw std::invalid_argument("PoissonParent: mu0 must be positive and finite");
    }
    static void validate_impl(const NegBinParent& p) {
        if (!(p.size > 0.0) || !std::isfinite(p.size))
            throw std::invalid_argument("NegBinParent: size must be positive");
        if (!(p.prob > 0.0 && p.prob <= 1.0))
            throw std::invalid_argument("NegBinParent: prob must lie in (0,1]");
    }
    static void validate_impl(const CustomParent& p) {
        if (p.probs.empty()) throw std::invalid_argument("CustomParent: empty pmf");
        double total = 0.0;
        for (double q : p.probs) {
            if (!(q >= 0.0 && q <= 1.0))
                throw std::invalid_argument("CustomParent: entries must lie in [0,1]");
            total += q;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("CustomParent: pmf must sum to 1 (tol 1e-12)");
    }

    static double pmf_impl(const FixedParent& p, long long n) { return n == p.n ? 1.0 : 0.0; }
    static double pmf_impl(const BinomialParent& p, long long n) {
        if (n > p.trials) return 0.0;
        if (p.r3 == 0.0) return n == 0 ? 1.0 : 0.0;
        if (p.r3 == 1.0) return n == p.trials ? 1.0 : 0.0;
        const double lg = std::lgamma(double(p.trials) + 1.0) - std::lgamma(double(n) + 1.0) -
                          std::lgamma(double(p.trials - n) + 1.0);
        return std::exp(lg + double(n) * std::log(p.r3) +
                        double(p.trials - n) * std::log1p(-p.r3));
    }
    static double pmf_impl(const PoissonParent& p, long long n) {
        return std::exp(double(n) * std::log(p.mu0) - p.mu0 - std::lgamma(double(n) + 1.0));
    }
    static double pmf_impl(const NegBinParent& p, long long n) {
        if (p.prob == 1.0) return n == 0 ? 1.0 : 0.0;
        const double lg = std::lgamma(double(n) + p.size) - std::lgamma(p.size) -
                          std::lgamma(double(n) + 1.0);
        return std::exp(lg + p.size * std::log(p.prob) + double(n) * std::log1p(-p.prob));
    }
    static double pmf_impl(const CustomParent& p, long long n) {
        return n < static_cast<long long>(p.probs.size()) ? p.probs[std::size_t(n)] : 0.0;
    }

    static double mean_impl(const FixedParent& p) { return double(p.n); }
    static double mean_impl(const BinomialParent& p) { return double(p.trials) * p.r3; }
    static double mean_impl(const PoissonParent& p) { return p.mu0; }
    static double mean_impl(const NegBinParent& p) {
        return p.size * (1.0 - p.prob) / p.prob;
    }
    static double mean_impl(const CustomParent& p) {
        double m = 0.0;
        for (std::size_t i = 0; i < p.probs.size(); ++i) m += double(i) * p.probs[i];
        return m;
    }

    static double variance_impl(const FixedParent&) { return 0.0; }
    static double variance_impl(const BinomialParent& p) {
        return double(p.trials) * p.r3 * (1.0 - p.r3);
    }
    static double variance_impl(const PoissonParent& p) { return p.mu0; }
    static double variance_impl(const NegBinParent& p) {
        return p.size * (1.0 - p.prob) / (p.prob * p.prob);
    }
    static double variance_impl(const CustomParent& p) {
        double m = mean_impl(p), m2 = 0.0;
        for (std::size_t i = 0; i < p.probs.size(); ++i) m2 += double(i) * double(i) * p.probs[i];
        return m2 - m * m;
    }
};

inline double parent_pmf(const ParentDist& parent, long long n) { return parent.pmf(n); }

struct BDistSpec {
    ChainParams chain;
    ParentDist parent;

    BDistSpec(ChainParams c, ParentDist p) : chain(c), parent(std::move(p)) {}
};

// Exact mean, Eq. mu = r1 E(N)/(r1+r2); no truncation involved.
inline double mean(const BDistSpec& spec) {
    return spec.chain.r1 * spec.parent.mean() / (spec.chain.r1 + spec.chain.r2);
}

}  // namespace bdist

#endif  // BDIST_CHAIN_HPP
