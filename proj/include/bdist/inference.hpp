#ifndef BDIST_INFERENCE_HPP
#define BDIST_INFERENCE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdist/analytic.hpp"
#include "bdist/chain.hpp"
#include "bdist/depril.hpp"
#include "bdist/optim.hpp"
#include "bdist/pmf.hpp"
#include "bdist/renewal.hpp"

// Likelihood and MLE fitting for b-Poisson count regression: the parent
// Poisson mean for observation j is alpha * exp(beta . x_j). Also the
// dispersion-bound search and a minimal COM-Poisson baseline.

namespace bdist {

struct Dataset {
    std::vector<long long> y;
    std::vector<std::vector<double>> x;  // rows = observations
    std::vector<std::string> covariate_names;

    std::size_t size() const { return y.size(); }
    std::size_t n_covariates() const { return x.empty() ? 0 : x[0].size(); }
};

struct RegressionModel {
    double alpha = 1.0;
    std::vector<double> beta;
    double r1 = 1.0;
    double r2 = 0.5;
    bool r1_fixed = false;
    bool r2_fixed = false;

    std::size_t free_parameters() const {
        return 1 + beta.size() + (r1_fixed ? 0 : 1) + (r2_fixed ? 0 : 1);
    }
};

inline constexpr double kProbFloor = 1e-300;

inline double neg_log_likelihood(const RegressionModel& model, const Dataset& data,
                                 long long* floored = nullptr) {
    if (data.n_covariates() != model.beta.size())
        throw std::invalid_argument("neg_log_likelihood: covariate/coefficient mismatch");
    const ChainParams chain(model.r1, model.r2);
    double nll = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        double eta = 0.0;
        for (std::size_t k = 0; k < model.beta.size(); ++k) eta += model.beta[k] * data.x[j][k];
        const double mu0 = model.alpha * std::exp(eta);
        if (!std::isfinite(mu0) || !(mu0 > 0.0))
            throw std::overflow_error("neg_log_likelihood: parent mean overflow");
        const BDistSpec spec(chain, ParentDist::poisson(mu0));
        double p = fast_prob(spec, data.y[j]);
        if (p < kProbFloor) {
            p = kProbFloor;
            if (floored) ++*floored;
        }
        nll -= std::log(p);
    }
    return nll;
}

struct FitOptions {
    std::optional<double> fix_r1;  // e.g. 1.0
    std::optional<double> fix_r2;
    std::optional<RegressionModel> start;
    int n_starts = 5;
    double grad_tol = 1e-6;
    double ftol = 1e-10;
    std::uint64_t jitter_seed = 17;
};

struct FitResult {
    RegressionModel model;
    double neg_loglik = 0.0;
    double aic = 0.0;
    // natural-scale standard errors, ordered alpha, beta..., r1, r2 (0 when fixed)
    std::vector<double> se;
    std::vector<std::vector<double>> covariance;  // transformed scale, free params only
    bool converged = false;
    bool se_valid = false;
    long long iterations = 0;
    long long floored = 0;
};

namespace detail {

inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Free parameters live on unconstrained scales: log(alpha), beta as-is,
// logit(r1), logit(r2).
struct FitTransform {
    std::size_t n_beta;
    bool r1_free;
    bool r2_free;
    double r1_fixed_value;
    double r2_fixed_value;

    std::size_t dim() const { return 1 + n_beta + (r1_free ? 1 : 0) + (r2_free ? 1 : 0); }

    RegressionModel unpack(const std::vector<double>& theta) const {
        RegressionModel m;
        m.alpha = std::exp(theta[0]);
        m.beta.assign(theta.begin() + 1, theta.begin() + 1 + std::ptrdiff_t(n_beta));
        std::size_t k = 1 + n_beta;
        m.r1 = r1_free ? expit(theta[k++]) : r1_fixed_value;
        m.r2 = r2_free ? expit(theta[k]) : r2_fixed_value;
        m.r1_fixed = !r1_free;
        m.r2_fixed = !r2_free;
        return m;
    }

    std::vector<double> pack(const RegressionModel& m) const {
        std::vector<double> theta;
        theta.push_back(std::log(m.alpha));
        theta.insert(theta.end(), m.beta.begin(), m.beta.end());
        if (r1_free) theta.push_back(logit(m.r1));
        if (r2_free) theta.push_back(logit(m.r2));
        return theta;
    }
};

}  // namespace detail

inline FitResult fit(const Dataset& data, const FitOptions& options = {}) {
    if (data.size() == 0) throw std::invalid_argument("fit: empty dataset");

    detail::FitTransform tf;
    tf.n_beta = data.n_covariates();
    tf.r1_free = !options.fix_r1.has_value();
    tf.r2_free = !options.fix_r2.has_value();
    tf.r1_fixed_value = options.fix_r1.value_or(1.0);
    tf.r2_fixed_value = options.fix_r2.value_or(0.5);

    FitResult res;
    const auto objective = [&](const std::vector<double>& theta) -> double {
        for (double t : theta)
            if (std::abs(t) > 40.0) return std::numeric_limits<double>::max();
        try {
            return neg_log_likelihood(tf.unpack(theta), data);
        } catch (const std::exception&) {
            return std::numeric_limits<double>::max();
        }
    };

    RegressionModel start;
    if (options.start) {
        start = *options.start;
    } else {
        double ybar = 0.0;
        for (long long yi : data.y) ybar += double(yi);
        ybar = std::max(ybar / double(data.size()), 0.05);
        start.alpha = ybar * 1.5;  // parent mean exceeds the count mean
        start.beta.assign(tf.n_beta, 0.0);
        start.r1 = 0.7;
        start.r2 = 0.5;
    }
    const std::vector<double> theta0 = tf.pack(start);

    std::mt19937_64 jitter_rng(options.jitter_seed);
    std::normal_distribution<double> jitter(0.0, 0.4);

    optim::MinimizeResult best;
    for (int s = 0; s < std::max(options.n_starts, 1); ++s) {
        std::vector<double> theta = theta0;
        if (s > 0)
            for (double& t : theta) t += jitter(jitter_rng);
        optim::MinimizeResult r = optim::nelder_mead(objective, theta, 0.25, options.ftol);
        res.iterations += r.evaluations;
        if (r.fx < best.fx) best = r;
    }

    // Newton polish until the finite-difference gradient criterion holds
    bool grad_ok = false;
    for (int attempt = 0; attempt < 12 && !grad_ok; ++attempt) {
        const std::vector<double> g = optim::fd_gradient(objective, best.x);
        double gmax = 0.0;
        for (double gk : g) gmax = std::max(gmax, std::abs(gk));
        grad_ok = gmax < options.grad_tol * (1.0 + std::abs(best.fx));
        if (grad_ok) break;
        bool stepped = false;
        try {
            const auto H = optim::fd_hessian(objective, best.x);
            const auto Hinv = optim::invert(H);
            std::vector<double> step(best.x.size(), 0.0);
            for (std::size_t r2i = 0; r2i < step.size(); ++r2i)
                for (std::size_t c = 0; c < step.size(); ++c)
                    step[r2i] += Hinv[r2i][c] * g[c];
            for (double scale = 1.0; scale > 1e-4; scale *= 0.5) {
                std::vector<double> cand = best.x;
                for (std::size_t k = 0; k < cand.size(); ++k) cand[k] -= scale * step[k];
                const double fc = objective(cand);
                ++res.iterations;
                if (fc < best.fx) {
                    best.x = std::move(cand);
                    best.fx = fc;
                    stepped = true;
                    break;
                }
            }
        } catch (const std::exception&) {
            // singular Hessian; fall back to a restarted simplex below
        }
        if (!stepped) {
            optim::MinimizeResult r =
                optim::nelder_mead(objective, best.x, 0.02 / double(attempt + 1), options.ftol);
            res.iterations += r.evaluations;
            if (r.fx < best.fx) {
                best = r;
            } else {
                break;  // no further progress from this point
            }
        }
    }

    res.model = tf.unpack(best.x);
    res.floored = 0;
    res.neg_loglik = neg_log_likelihood(res.model, data, &res.floored);
    res.aic = 2.0 * double(res.model.free_parameters()) + 2.0 * res.neg_loglik;
    res.converged = grad_ok;

    // standard errors: inverse FD Hessian on the transformed scale, then the
    // delta method back to natural scale
    res.se.assign(2 + tf.n_beta + 1, 0.0);
    try {
        const auto H = optim::fd_hessian(objective, best.x);
        res.covariance = optim::invert(H);
        std::vector<double> se_t(best.x.size());
        bool ok = true;
        for (std::size_t k = 0; k < best.x.size(); ++k) {
            if (res.covariance[k][k] <= 0.0) ok = false;
            se_t[k] = std::sqrt(std::max(res.covariance[k][k], 0.0));
        }
        if (ok) {
            res.se[0] = res.model.alpha * se_t[0];
            for (std::size_t k = 0; k < tf.n_beta; ++k) res.se[1 + k] = se_t[1 + k];
            std::size_t k = 1 + tf.n_beta;
            if (tf.r1_free) {
                res.se[1 + tf.n_beta] = res.model.r1 * (1.0 - res.model.r1) * se_t[k];
                ++k;
            }
            if (tf.r2_free) res.se[2 + tf.n_beta] = res.model.r2 * (1.0 - res.model.r2) * se_t[k];
            res.se_valid = true;
        }
    } catch (const std::exception&) {
        res.se_valid = false;  // singular Hessian; leave se unset
    }
    return res;
}

// Exact count variance for any parent, via the stationary possession
// autocorrelation: with mu1 = r1/(r1+r2), s = r2/(r1+r2), lambda = 1-r1-r2,
//   var(count | N=n) = n mu1 (1-mu1) + 2 mu1 s f(n),
//   f(n) = sum_{d=1..n-1} (n-d) lambda^d,
// so the unconditional variance needs only E(N), E(N(N-1)) and E(lambda^N).
inline double count_variance(const BDistSpec& spec) {
    const double r1 = spec.chain.r1, r2 = spec.chain.r2;
    const double mu1 = r1 / (r1 + r2), s = r2 / (r1 + r2);
    const double lambda = 1.0 - r1 - r2;
    const double en = spec.parent.mean();
    const double vn = spec.parent.variance();
    const double en2fact = vn + en * en - en;  // E(N(N-1))

    double e_pow;  // E(lambda^N)
    if (const auto* f = std::get_if<FixedParent>(&spec.parent.variant())) {
        e_pow = std::pow(lambda, double(f->n));
    } else if (const auto* p = std::get_if<PoissonParent>(&spec.parent.variant())) {
        e_pow = std::exp(p->mu0 * (lambda - 1.0));
    } else if (const auto* b = std::get_if<BinomialParent>(&spec.parent.variant())) {
        e_pow = std::pow(1.0 - b->r3 + b->r3 * lambda, double(b->trials));
    } else if (const auto* nb = std::get_if<NegBinParent>(&spec.parent.variant())) {
        e_pow = std::pow(nb->prob / (1.0 - (1.0 - nb->prob) * lambda), nb->size);
    } else {
        const auto& probs = std::get<CustomParent>(spec.parent.variant()).probs;
        e_pow = 0.0;
        double pw = 1.0;
        for (double q : probs) {
            e_pow += q * pw;
            pw *= lambda;
        }
    }

    double e_f;  // E[f(N)]
    if (lambda == 1.0) {
        e_f = en2fact / 2.0;  // f(n) = n(n-1)/2 when lambda = 1 (r1+r2 = 0 excluded anyway)
    } else {
        const double den = 1.0 - lambda;
        // f(n) = [lambda (n-1)(1-lambda) - lambda^2 (1 - lambda^(n-1))]/(1-lambda)^2
        e_f = (lambda * (en - 1.0) * den - lambda * lambda + lambda * e_pow) / (den * den);
    }

    const double e_cond_var = en * mu1 * (1.0 - mu1) + 2.0 * mu1 * s * e_f;
    return e_cond_var + mu1 * mu1 * vn;
}

// COM-Poisson baseline: pmf proportional to (mu^n/n!)^nu.

struct ComPoissonParams {
    double mu;
    double nu;

    ComPoissonParams(double mu_, double nu_) : mu(mu_), nu(nu_) {
        if (!(mu > 0.0) || !(nu > 0.0))
            throw std::invalid_argument("ComPoissonParams: mu and nu must be positive");
    }
};

inline PmfVector com_poisson_pmf(const ComPoissonParams& params, long long n_max = 20000) {
    std::vector<double> logw;
    logw.reserve(64);
    double lmax = -std::numeric_limits<double>::infinity();
    for (long long n = 0; n <= n_max; ++n) {
        const double lw =
            params.nu * (double(n) * std::log(params.mu) - std::lgamma(double(n) + 1.0));
        logw.push_back(lw);
        lmax = std::max(lmax, lw);
        // terms decay once n > mu; stop when negligible against the peak
        if (double(n) > params.mu && lw < lmax - 60.0) break;
    }
    if (double(logw.size() - 1) <= params.mu || logw.back() >= lmax - 46.0)
        throw std::length_error("com_poisson_pmf: tail mass not negligible within n_max");
    PmfVector out;
    out.probs.resize(logw.size());
    double total = 0.0;
    for (std::size_t n = 0; n < logw.size(); ++n) {
        out.probs[n] = std::exp(logw[n] - lmax);
        total += out.probs[n];
    }
    for (double& p : out.probs) p /= total;
    return out;
}

enum class DispersionFamily { BPoisson, ComPoisson };

struct DispersionBounds {
    double min_cd;
    double max_cd;
};

namespace detail {

// pmf-based variance where the support is modest, closed form beyond that
// (the two routes agree; see count_variance)
inline double bpoisson_cd(double r1, double r2, double target_mean) {
    const double mu0 = target_mean * (r1 + r2) / r1;
    const BDistSpec spec(ChainParams(r1, r2), ParentDist::poisson(mu0));
    const double support_estimate = mu0 + 12.0 * std::sqrt(mu0) + 30.0;
    if (support_estimate <= 4000.0) {
        const PmfVector v = pmf(spec, 1e-10);
        return v.variance() / v.mean();
    }
    return count_variance(spec) / mean(spec);
}

inline double com_poisson_cd(double nu, double target_mean) {
    // mean is increasing in mu at fixed nu; bisect
    auto mean_of = [&](double mu) {
        const PmfVector v = com_poisson_pmf(ComPoissonParams(mu, nu));
        return v.mean();
    };
    double lo = 1e-9, hi = 1.0;
    while (mean_of(hi) < target_mean) {
        hi *= 2.0;
        if (hi > 1e12) throw std::domain_error("com_poisson_cd: mean unreachable");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_of(mid) < target_mean ? lo : hi) = mid;
    }
    const PmfVector v = com_poisson_pmf(ComPoissonParams(0.5 * (lo + hi), nu));
    return v.variance() / v.mean();
}

}  // namespace detail

// Search-domain endpoints for the dispersion sweep. The chain probabilities
// range over a logit-uniform grid on [0.005, 0.995]; nu ranges over the
// log-spaced window used for the COM-Poisson comparison curve.
inline constexpr double kDispersionRMin = 0.005;
inline constexpr double kDispersionRMax = 0.995;
inline constexpr double kDispersionNuMin = 0.05;
inline constexpr double kDispersionNuMax = 30.0;

inline DispersionBounds dispersion_bounds(double target_mean, DispersionFamily family,
                                          int grid_points = 60) {
    if (!(target_mean > 0.0))
        throw std::invalid_argument("dispersion_bounds: mean must be positive");

    double min_cd = std::numeric_limits<double>::infinity();
    double max_cd = -std::numeric_limits<double>::infinity();

    if (family == DispersionFamily::BPoisson) {
        const double t_lo = detail::logit(kDispersionRMin), t_hi = detail::logit(kDispersionRMax);
        std::vector<double> ts(std::size_t(grid_points), 0.0);
        for (int k = 0; k < grid_points; ++k)
            ts[std::size_t(k)] = t_lo + (t_hi - t_lo) * double(k) / double(grid_points - 1);
        double best_min[2] = {0, 0}, best_max[2] = {0, 0};
        for (double t1 : ts) {
            for (double t2 : ts) {
                const double cd =
                    detail::bpoisson_cd(detail::expit(t1), detail::expit(t2), target_mean);
                if (cd < min_cd) { min_cd = cd; best_min[0] = t1; best_min[1] = t2; }
                if (cd > max_cd) { max_cd = cd; best_max[0] = t1; best_max[1] = t2; }
            }
        }
        auto refine = [&](const double* start, double sign) {
            const auto obj = [&](const std::vector<double>& t) {
                if (t[0] < t_lo || t[0] > t_hi || t[1] < t_lo || t[1] > t_hi)
                    return std::numeric_limits<double>::max();
                return sign *
                       detail::bpoisson_cd(detail::expit(t[0]), detail::expit(t[1]), target_mean);
            };
            const optim::MinimizeResult r =
                optim::nelder_mead(obj, {start[0], start[1]}, 0.2, 1e-10, 400);
            return sign * r.fx;
        };
        min_cd = std::min(min_cd, refine(best_min, +1.0));
        max_cd = std::max(max_cd, refine(best_max, -1.0));
    } else {
        const double l_lo = std::log(kDispersionNuMin), l_hi = std::log(kDispersionNuMax);
        double best_min = 0, best_max = 0;
        for (int k = 0; k < grid_points; ++k) {
            const double nu =
                std::exp(l_lo + (l_hi - l_lo) * double(k) / double(grid_points - 1));
            const double cd = detail::com_poisson_cd(nu, target_mean);
            if (cd < min_cd) { min_cd = cd; best_min = std::log(nu); }
            if (cd > max_cd) { max_cd = cd; best_max = std::log(nu); }
        }
        auto refine = [&](double start, double sign) {
            const auto obj = [&](const std::vector<double>& t) {
                if (t[0] < l_lo || t[0] > l_hi) return std::numeric_limits<double>::max();
                return sign * detail::com_poisson_cd(std::exp(t[0]), target_mean);
            };
            const optim::MinimizeResult r = optim::nelder_mead(obj, {start}, 0.2, 1e-10, 200);
            return sign * r.fx;
        };
        min_cd = std::min(min_cd, refine(best_min, +1.0));
        max_cd = std::max(max_cd, refine(best_max, -1.0));
    }
    return DispersionBounds{min_cd, max_cd};
}

}  // namespace bdist

#endif  // BDIST_INFERENCE_HPP
