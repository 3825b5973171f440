#ifndef BDIST_OPTIM_HPP
#define BDIST_OPTIM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

// Small derivative-free optimization toolkit used by the fitting code:
// Nelder-Mead simplex, central-difference gradients/Hessians, and a
// Gauss-Jordan inverse for the (small) Hessian matrices.

namespace bdist::optim {

using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
    std::vector<double> x;
    double fx = std::numeric_limits<double>::infinity();
    long long evaluations = 0;
    bool converged = false;
};

inline MinimizeResult nelder_mead(const Objective& f, std::vector<double> start,
                                  double step = 0.25, double ftol = 1e-12,
                                  long long max_iter = 0) {
    const std::size_t n = start.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (max_iter == 0) max_iter = 4000 * (long long)n;

    MinimizeResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> fv(n + 1);
    for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += step;
    for (std::size_t k = 0; k <= n; ++k) fv[k] = eval(simplex[k]);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    for (long long iter = 0; iter < max_iter; ++iter) {
        // order
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t k = 0; k <= n; ++k) idx[k] = k;
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return fv[x] < fv[y];
        });
        {
            std::vector<std::vector<double>> s2;
            std::vector<double> f2;
            for (std::size_t k = 0; k <= n; ++k) {
                s2.push_back(simplex[idx[k]]);
                f2.push_back(fv[idx[k]]);
            }
            simplex = std::move(s2);
            fv = std::move(f2);
        }
        if (std::abs(fv[n] - fv[0]) <= ftol * (1.0 + std::abs(fv[0]))) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[k][j] / double(n);

        auto blend = [&](const std::vector<double>& towards, double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + t * (towards[j] - centroid[j]);
            return x;
        };

        const std::vector<double> xr = blend(simplex[n], -alpha);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const std::vector<double> xe = blend(simplex[n], -gamma);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const std::vector<double> xc = blend(outside ? xr : simplex[n], rho);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[k][j] = simplex[0][j] + sigma * (simplex[k][j] - simplex[0][j]);
                    fv[k] = eval(simplex[k]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k <= fv.size() - 1; ++k)
        if (fv[k] < fv[best]) best = k;
    res.x = simplex[best];
    res.fx = fv[best];
    return res;
}

inline std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& x,
                                       double rel_step = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double h = rel_step * (1.0 + std::abs(x[k]));
        std::vector<double> xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        g[k] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

inline std::vector<std::vector<double>> fd_hessian(const Objective& f,
                                                   const std::vector<double>& x,
                                                   double rel_step = 1e-4) {
    const std::size_t n = x.size();
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) h[k] = rel_step * (1.0 + std::abs(x[k]));

    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    const double f0 = f(x);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> xp = x, xm = x;
        xp[k] += h[k];
        xm[k] -= h[k];
        H[k][k] = (f(xp) - 2.0 * f0 + f(xm)) / (h[k] * h[k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
            std::vector<double> xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[k] += h[k]; xpp[l] += h[l];
            xpm[k] += h[k]; xpm[l] -= h[l];
            xmp[k] -= h[k]; xmp[l] += h[l];
            xmm[k] -= h[k]; xmm[l] -= h[l];
            H[k][l] = H[l][k] =
                (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[k] * h[l]);
        }
    }
    return H;
}

// Gauss-Jordan with partial pivoting; throws on (near-)singular input.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) inv[k][k] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300)
            throw std::domain_error("invert: singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double m = a[r][col];
            if (m == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= m * a[col][j];
                inv[r][j] -= m * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace bdist::optim

#endif  // BDIST_OPTIM_HPP
