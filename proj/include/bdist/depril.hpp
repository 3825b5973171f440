#ifndef BDIST_DEPRIL_HPP
#define BDIST_DEPRIL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bdist/chain.hpp"
#include "bdist/pmf.hpp"

// O(m-i) single-probability evaluation. The count equals i iff the sum of
// one equilibrium interval and i-1 (resp. i) ordinary intervals straddles N,
// so p_i needs the i-1 and i fold convolutions of the ordinary interval law.
// De Pril's recursion gives those; the geometric tail of the interval law
// collapses each recursion step to O(1) via the Ta/Tb accumulators.

namespace bdist {

struct FastProbStats {
    long long ops = 0;  // core recursion steps (stream advances + n-loop terms)
};

// Strictly-negative rule: a zero contribution continues the accumulation.
inline bool stability_guard_stop(double contribution) { return contribution < 0.0; }

// The stream recursion cancels catastrophically in its right tail when
// P1(1) is small; once the propagated error bound passes this threshold the
// caller abandons the stream for the stable capped recursion.
inline constexpr double kStreamErrTol = 1e-13;

namespace detail {

// Emits P_i(s), the i-fold convolution of the ordinary interval law, for
// s = i, i+1, ... in O(1) per step. Order 0 is the point mass at 0.
class ConvolutionStream {
public:
    ConvolutionStream(const ChainParams& chain, long long order)
        : order_(order),
          u_(1.0 - chain.r1),
          p11_(1.0 - chain.r2),
          p12_(chain.r1 * chain.r2) {
        if (order < 0) throw std::invalid_argument("ConvolutionStream: negative order");
        if (order > 0 && p11_ == 0.0)
            throw std::invalid_argument("ConvolutionStream: r2 = 1 breaks De Pril's recursion");
        s_ = order_;
        cur_ = order_ == 0 ? 1.0 : std::pow(p11_, double(order_));
    }

    long long s() const { return s_; }
    double value() const { return cur_; }
    double err() const { return err_; }  // running absolute-error bound

    void advance() {
        ++s_;
        if (order_ == 0) {
            cur_ = 0.0;
            return;
        }
        constexpr double eps = 2.2e-16;
        const double ta_prev = ta_, tb_prev = tb_;
        const double ta_err_prev = ta_err_;
        ta_ = u_ * ta_prev + p12_ * cur_;
        tb_ = u_ * (tb_prev + ta_prev) + p12_ * cur_;
        const double scale = double(order_ + 1) / double(s_ - order_);
        cur_ = (scale * tb_ - ta_) / p11_;
        // first-order propagation of the rounding error through the same
        // linear recursion, plus fresh rounding at each assignment
        ta_err_ = u_ * ta_err_prev + p12_ * err_ + eps * std::abs(ta_);
        tb_err_ = u_ * (tb_err_ + ta_err_prev) + p12_ * err_ + eps * std::abs(tb_);
        err_ = (scale * tb_err_ + ta_err_) / p11_ + eps * std::abs(cur_);
    }

private:
    long long order_;
    double u_, p11_, p12_;
    long long s_ = 0;
    double cur_ = 1.0;
    double ta_ = 0.0, tb_ = 0.0;
    double err_ = 0.0, ta_err_ = 0.0, tb_err_ = 0.0;
};

// Highest parent index with non-negligible mass (shared tail rule).
inline long long parent_support_max(const ParentDist& parent, double tail_tol,
                                    long long support_cap) {
    const long long bound = parent.support_bound();
    if (bound >= 0) return bound;
    double mass = 0.0;
    const double parent_mean = parent.mean();
    for (long long n = 0; n <= support_cap; ++n) {
        const double pn = parent.pmf(n);
        mass += pn;
        if (mass >= 1.0 - tail_tol) return n;
        if (double(n) > parent_mean && pn < tail_tol * 1e-3) return n;
    }
    throw std::length_error("fast_prob: parent support exceeds cap");
}

// Stable O(m*i) fallback: the two-track recursion truncated at count i.
// Counts never decrease, so mass that passes i can be dropped without
// affecting p_i; every coefficient is non-negative, so no cancellation.
inline double capped_count_prob(const BDistSpec& spec, long long i, double tail_tol,
                                long long support_cap, FastProbStats* stats) {
    const double r1 = spec.chain.r1, r2 = spec.chain.r2;
    const double c = r2 / (r1 + r2);
    const std::size_t cap = std::size_t(i);

    std::vector<double> q1(cap + 1, 0.0), q2(cap + 1, 0.0);
    q1[0] = c;
    q2[0] = 1.0 - c;

    double total = i == 0 ? spec.parent.pmf(0) : 0.0;
    double parent_mass = spec.parent.pmf(0);
    const long long bound = spec.parent.support_bound();
    const double parent_mean = spec.parent.mean();
    long long n = 0;
    while (bound < 0 || n < bound) {
        if (parent_mass >= 1.0 - tail_tol) break;
        if (double(n) > parent_mean && spec.parent.pmf(n) < tail_tol * 1e-3) break;
        ++n;
        if (n > support_cap)
            throw std::length_error("fast_prob: parent support exceeds cap");
        for (long long k = std::min<long long>(i, n); k >= 0; --k) {
            const double prev1 = q1[std::size_t(k)], prev2 = q2[std::size_t(k)];
            q2[std::size_t(k)] = k > 0 ? r1 * q1[std::size_t(k - 1)] +
                                             (1.0 - r2) * q2[std::size_t(k - 1)]
                                       : 0.0;
            q1[std::size_t(k)] = (1.0 - r1) * prev1 + r2 * prev2;
            if (stats) ++stats->ops;
        }
        const double pn = spec.parent.pmf(n);
        if (pn > 0.0) {
            total += pn * (q1[cap] + q2[cap]);
            parent_mass += pn;
        }
    }
    return total;
}

}  // namespace detail

struct ConvolutionTable {
    long long order;             // i
    long long first_s;           // = order
    std::vector<double> values;  // P_i(s) for s = first_s .. s_max
};

inline ConvolutionTable depril_convolve(const ChainParams& chain, long long order,
                                        long long s_max) {
    if (order < 1) throw std::invalid_argument("depril_convolve: order must be >= 1");
    if (s_max < order) throw std::invalid_argument("depril_convolve: s_max < order");
    detail::ConvolutionStream stream(chain, order);
    ConvolutionTable table{order, order, {}};
    table.values.reserve(std::size_t(s_max - order + 1));
    table.values.push_back(stream.value());
    while (stream.s() < s_max) {
        stream.advance();
        table.values.push_back(stream.value());
    }
    return table;
}

inline double fast_prob(const BDistSpec& spec, long long i, double tail_tol = 1e-12,
                        FastProbStats* stats = nullptr,
                        long long support_cap = kDefaultSupportCap) {
    if (i < 0) throw std::invalid_argument("fast_prob: negative index");
    const double r1 = spec.chain.r1, r2 = spec.chain.r2;

    // De Pril divides by P1(1) = 1-r2 and the survival form assumes r1 < 1
    if (r1 == 1.0 || r2 == 1.0) {
        const PmfVector v = pmf(spec, tail_tol, support_cap);
        return std::size_t(i) < v.probs.size() ? v.probs[std::size_t(i)] : 0.0;
    }

    const double c = r2 / (r1 + r2);
    const long long m = detail::parent_support_max(spec.parent, tail_tol, support_cap);

    if (i == 0) {
        // P(no event by n) = c (1-r1)^(n-1) for n >= 1, 1 for n = 0
        double total = spec.parent.pmf(0);
        double surv = c;
        for (long long n = 1; n <= m; ++n) {
            total += spec.parent.pmf(n) * surv;
            surv *= 1.0 - r1;
            if (stats) ++stats->ops;
        }
        return total;
    }

    detail::ConvolutionStream low(spec.chain, i - 1);   // starts at s = i-1
    detail::ConvolutionStream high(spec.chain, i);      // starts at s = i
    double a = 0.0, b = 0.0, total = 0.0;
    for (long long n = i; n <= m; ++n) {
        // the negative-contribution guard below fires only after the rounding
        // error has already polluted the sum; switch to the stable fallback as
        // soon as the propagated bound says the streams can no longer deliver
        if (low.err() + high.err() > kStreamErrTol)
            return detail::capped_count_prob(spec, i, tail_tol, support_cap, stats);
        // D(n-1) = P_{i-1}(n-1) - P_i(n-1); the high stream is 0 below s = i
        const double d = low.value() - (n - 1 >= i ? high.value() : 0.0);
        low.advance();
        if (n - 1 >= i) high.advance();
        a += d;
        b = (1.0 - r1) * b + d;
        const double contribution = a - c * b;
        if (stability_guard_stop(contribution)) break;
        total += spec.parent.pmf(n) * contribution;
        if (stats) ++stats->ops;
    }
    return total;
}

}  // namespace bdist

#endif  // BDIST_DEPRIL_HPP
