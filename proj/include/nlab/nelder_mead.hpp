// nelder_mead.hpp — derivative-free simplex minimization.
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nlab::opt {

struct NelderMeadOptions {
    double initial_step = 0.5;  // edge length of the starting simplex
    double f_tol = 1e-10;       // spread of objective values over the simplex
    double x_tol = 1e-9;        // max vertex distance from the best vertex
    long max_evals = 20000;
    /// Dimension-dependent coefficients (Gao & Han); plain NM when false.
    bool adaptive = true;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    long evals = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts);

}  // namespace nlab::opt
