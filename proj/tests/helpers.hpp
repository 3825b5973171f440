#ifndef BDIST_TESTS_HELPERS_HPP
#define BDIST_TESTS_HELPERS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "bdist/pmf.hpp"
#include "bdist/sampler.hpp"

namespace test_helpers {

// Upper chi-square quantile via the Wilson-Hilferty cube approximation.
// z is the standard-normal upper quantile for the same tail.
inline double chi_square_critical(double df, double z) {
    const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    return df * t * t * t;
}

// z for upper tail 0.001
inline constexpr double kZ999 = 3.090232306167814;

// Pearson statistic of observed counts against expected probabilities,
// pooling cells until the expected count reaches 5. Returns the statistic
// and (via df_out) the degrees of freedom = pooled cells - 1.
inline double chi_square_stat(const std::vector<long long>& observed,
                              const std::vector<double>& expected_probs,
                              double n_draws, std::size_t* df_out) {
    double stat = 0.0;
    double o_acc = 0.0, e_acc = 0.0;
    std::size_t cells = 0;
    const std::size_t k = std::max(observed.size(), expected_probs.size());
    for (std::size_t i = 0; i < k; ++i) {
        o_acc += i < observed.size() ? double(observed[i]) : 0.0;
        e_acc += (i < expected_probs.size() ? expected_probs[i] : 0.0) * n_draws;
        if (e_acc >= 5.0) {
            stat += (o_acc - e_acc) * (o_acc - e_acc) / e_acc;
            o_acc = e_acc = 0.0;
            ++cells;
        }
    }
    if (e_acc > 0.0) {
        stat += (o_acc - e_acc) * (o_acc - e_acc) / e_acc;
        ++cells;
    }
    if (df_out) *df_out = cells > 1 ? cells - 1 : 1;
    return stat;
}

inline std::vector<long long> histogram(const std::vector<long long>& draws) {
    long long top = 0;
    for (long long d : draws) top = std::max(top, d);
    std::vector<long long> h(std::size_t(top) + 1, 0);
    for (long long d : draws) ++h[std::size_t(d)];
    return h;
}

// Two-sample Pearson statistic with shared pooling (expected >= 5 per
// pooled cell in each sample).
inline double two_sample_chi_square(const std::vector<long long>& h1,
                                    const std::vector<long long>& h2,
                                    std::size_t* df_out) {
    const std::size_t k = std::max(h1.size(), h2.size());
    double n1 = 0.0, n2 = 0.0;
    for (long long v : h1) n1 += double(v);
    for (long long v : h2) n2 += double(v);
    double a_acc = 0.0, b_acc = 0.0, stat = 0.0;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < k; ++i) {
        a_acc += i < h1.size() ? double(h1[i]) : 0.0;
        b_acc += i < h2.size() ? double(h2[i]) : 0.0;
        const double tot = a_acc + b_acc;
        if (tot * n1 / (n1 + n2) >= 5.0 && tot * n2 / (n1 + n2) >= 5.0) {
            const double e1 = tot * n1 / (n1 + n2), e2 = tot * n2 / (n1 + n2);
            stat += (a_acc - e1) * (a_acc - e1) / e1 + (b_acc - e2) * (b_acc - e2) / e2;
            a_acc = b_acc = 0.0;
            ++cells;
        }
    }
    if (a_acc + b_acc > 0.0) {
        const double tot = a_acc + b_acc;
        const double e1 = tot * n1 / (n1 + n2), e2 = tot * n2 / (n1 + n2);
        if (e1 > 0.0 && e2 > 0.0)
            stat += (a_acc - e1) * (a_acc - e1) / e1 + (b_acc - e2) * (b_acc - e2) / e2;
        ++cells;
    }
    if (df_out) *df_out = cells > 1 ? cells - 1 : 1;
    return stat;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    const std::size_t k = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < k; ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        m = std::max(m, std::abs(x - y));
    }
    return m;
}

}  // namespace test_helpers

#endif  // BDIST_TESTS_HELPERS_HPP
