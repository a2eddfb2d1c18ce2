#include "nlab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nlab::opt {

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = opts.adaptive ? 1.0 + 2.0 / dn : 2.0;
    const double gamma = opts.adaptive ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
    const double delta = opts.adaptive ? 1.0 - 1.0 / dn : 0.5;

    NelderMeadResult res;
    struct OutOfBudget {};
    // hard cap: no evaluation past max_evals; vertices only change after a successful eval
    auto eval = [&](const std::vector<double>& x) {
        if (res.evals >= opts.max_evals) throw OutOfBudget{};
        ++res.evals;
        return f(std::span<const double>(x));
    };

    std::vector<std::vector<double>> s(n + 1, x0);
    std::vector<double> fv(n + 1, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += opts.initial_step;

    std::vector<std::size_t> idx(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    auto order = [&] {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    };
    auto affine = [&](std::vector<double>& out, double t, const std::vector<double>& from) {
        // out = centroid + t * (centroid - from)
        for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (centroid[k] - from[k]);
    };

    try {
        for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(s[i]);
        while (true) {
            order();
            const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];

            double xspread = 0.0;
            for (std::size_t i = 0; i <= n; ++i) {
                for (std::size_t k = 0; k < n; ++k) {
                    xspread = std::max(xspread, std::abs(s[i][k] - s[best][k]));
                }
            }
            if (fv[worst] - fv[best] <= opts.f_tol && xspread <= opts.x_tol) {
                res.converged = true;
                break;
            }
            if (res.evals >= opts.max_evals) break;

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < n; ++k) centroid[k] += s[idx[i]][k];
            }
            for (double& c : centroid) c /= dn;

            affine(xr, alpha, s[worst]);
            const double fr = eval(xr);
            if (fr < fv[best]) {
                affine(xe, alpha * beta, s[worst]);
                const double fe = eval(xe);
                if (fe < fr) {
                    s[worst] = xe;
                    fv[worst] = fe;
                } else {
                    s[worst] = xr;
                    fv[worst] = fr;
                }
                continue;
            }
            if (fr < fv[second]) {
                s[worst] = xr;
                fv[worst] = fr;
                continue;
            }
            if (fr < fv[worst]) {
                affine(xc, alpha * gamma, s[worst]);  // outside contraction
                const double fc = eval(xc);
                if (fc <= fr) {
                    s[worst] = xc;
                    fv[worst] = fc;
                    continue;
                }
            } else {
                affine(xc, -gamma, s[worst]);  // inside contraction
                const double fc = eval(xc);
                if (fc < fv[worst]) {
                    s[worst] = xc;
                    fv[worst] = fc;
                    continue;
                }
            }
            // shrink toward the best vertex
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == best) continue;
                for (std::size_t k = 0; k < n; ++k) xc[k] = s[best][k] + delta * (s[i][k] - s[best][k]);
                fv[i] = eval(xc);
                s[i] = xc;
            }
        }
    } catch (const OutOfBudget&) {
        // budget spent mid-iteration; report the best vertex evaluated so far
    }

    order();
    res.x = s[idx.front()];
    res.f = fv[idx.front()];
    return res;
}

}  // namespace nlab::opt
