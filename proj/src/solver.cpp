/**
 * solver.cpp
 */

#include "acbond/solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

namespace acbond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_value(const Objective& obj, const Eigen::VectorXd& x) {
    try {
        double e = obj.value(x);
        return std::isfinite(e) ? e : kInf;
    } catch (const std::domain_error&) {
        return kInf;
    }
}

bool safe_gradient(const Objective& obj, const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    try {
        obj.gradient(x, g);
        return g.allFinite();
    } catch (const std::domain_error&) {
        return false;
    }
}

}  // namespace

MinimizeResult minimize(const Objective& obj, Eigen::VectorXd x0, const MinimizeOptions& opts,
                        const Preconditioner& precond) {
    MinimizeResult res;
    res.x = std::move(x0);

    const auto n = res.x.size();
    Eigen::VectorXd g(n), z(n), d(n), xt(n), g_new(n), z_new(n);

    double e = safe_value(obj, res.x);
    if (e == kInf) throw std::invalid_argument("minimization started at an inadmissible state");
    obj.gradient(res.x, g);
    res.energy_trace.push_back(e);

    auto apply_precond = [&](const Eigen::VectorXd& r, Eigen::VectorXd& out) {
        if (precond)
            precond(r, out);
        else
            out = r;
    };

    apply_precond(g, z);
    d = -z;
    double gz = g.dot(z);
    double step = 1.0;

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        res.grad_sup = g.lpNorm<Eigen::Infinity>();
        if (res.grad_sup <= opts.grad_tol) {
            res.converged = true;
            break;
        }

        double slope = g.dot(d);
        if (!(slope < 0)) {  // safeguard: restart along steepest descent
            d = -z;
            slope = g.dot(d);
            if (!(slope < 0)) break;  // z not a descent direction either; give up
        }

        // Quadratic model along d with the curvature taken from a gradient probe.
        // Energy differences fall below eps*|e| long before the gradient meets
        // grad_tol, so fitting the curvature through energies stalls; gradient
        // differences stay accurate and the fit is exact on quadratics.
        double probe = step > 0 ? step : 1.0;
        double t = probe;
        if (safe_gradient(obj, res.x + probe * d, g_new)) {
            double curv = d.dot(g_new - g) / probe;
            if (std::isfinite(curv) && curv > 0)
                t = std::min(-slope / curv, 1e4 * probe);
            else
                t = 4.0 * probe;  // flat or concave model: push further out
        }

        // Sufficient decrease, with an allowance for energy roundoff: near the
        // minimum the true decrease of a good step is far below eps*|e|.
        const double e_noise =
            4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e));
        double e_t = kInf;
        bool accepted = false;
        for (int ls = 0; ls < opts.max_line_steps; ++ls) {
            xt = res.x + t * d;
            e_t = safe_value(obj, xt);
            if (e_t <= e + opts.armijo_c1 * t * slope + e_noise) {
                accepted = true;
                break;
            }
            t *= opts.backtrack;
        }
        if (!accepted) break;

        res.x.swap(xt);
        e = e_t;
        step = t;
        res.energy_trace.push_back(e);
        obj.gradient(res.x, g_new);
        apply_precond(g_new, z_new);

        double gz_new = g_new.dot(z_new);
        double beta = 0.0;
        if ((res.iterations + 1) % opts.restart_interval != 0 && gz > 0)
            beta = std::max(0.0, (gz_new - g_new.dot(z)) / gz);

        d = -z_new + beta * d;
        g.swap(g_new);
        z.swap(z_new);
        gz = gz_new;
    }

    res.energy = e;
    res.grad_sup = g.lpNorm<Eigen::Infinity>();
    if (res.grad_sup <= opts.grad_tol) res.converged = true;
    return res;
}

Preconditioner laplacian_preconditioner(const Eigen::SparseMatrix<double>& L) {
    if (L.rows() == 0) return {};
    auto llt = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    llt->compute(L);
    if (llt->info() != Eigen::Success)
        throw std::runtime_error("preconditioner factorization failed (graph not anchored?)");
    const auto n = L.rows();
    return [llt, n](const Eigen::VectorXd& r, Eigen::VectorXd& out) {
        Eigen::VectorXd cx(n), cy(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            cx[i] = r[2 * i];
            cy[i] = r[2 * i + 1];
        }
        Eigen::VectorXd sx = llt->solve(cx), sy = llt->solve(cy);
        out.resize(2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            out[2 * i] = sx[i];
            out[2 * i + 1] = sy[i];
        }
    };
}

double fd_gradient_check(const Objective& obj, const Eigen::VectorXd& x, int probes, double h,
                         unsigned seed) {
    Eigen::VectorXd g;
    obj.gradient(x, g);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, x.size() - 1);
    Eigen::VectorXd xp = x;
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        Eigen::Index i = pick(rng);
        xp[i] = x[i] + h;
        double ep = obj.value(xp);
        xp[i] = x[i] - h;
        double em = obj.value(xp);
        xp[i] = x[i];
        worst = std::max(worst, std::abs((ep - em) / (2.0 * h) - g[i]));
    }
    return worst;
}

}  // namespace acbond
