#pragma once
/**
 * solver.hpp - preconditioned nonlinear conjugate gradient.
 *
 * Polak-Ribiere+ with periodic restarts. The line search fits a quadratic
 * through the current value, slope and one probe point and takes its
 * minimizer as the first trial, followed by Armijo backtracking, so the
 * method terminates in finitely many steps on quadratics. Objective values
 * may throw std::domain_error for inadmissible states; the line search
 * treats those as +infinity and backtracks.
 */

#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace acbond {

struct Objective {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> gradient;
};

struct MinimizeOptions {
    double grad_tol = 1e-8;  // sup norm of the raw gradient
    int max_iterations = 20000;
    int restart_interval = 100;
    double armijo_c1 = 1e-4;
    double backtrack = 0.5;
    int max_line_steps = 60;
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double energy = 0.0;
    double grad_sup = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> energy_trace;  // value at x0 and after each accepted step
};

using Preconditioner = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

MinimizeResult minimize(const Objective& obj, Eigen::VectorXd x0, const MinimizeOptions& opts = {},
                        const Preconditioner& precond = {});

// SPD factorization of a scalar Laplacian, applied to each of the two
// interleaved coordinate components of the packed state
Preconditioner laplacian_preconditioner(const Eigen::SparseMatrix<double>& L);

// max absolute mismatch between central differences and the analytic
// gradient over `probes` randomly chosen coordinates
double fd_gradient_check(const Objective& obj, const Eigen::VectorXd& x, int probes = 24,
                         double h = 1e-6, unsigned seed = 0);

}  // namespace acbond
