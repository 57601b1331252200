/**
 * acbond_main.cpp - command-line driver.
 *
 * Subcommands: patch-test, convergence, bond-density-check, oned, single-run.
 * Exit codes: 0 success, 1 invariant violation or bad input, 2 solver failure.
 * ACBOND_THREADS limits the worker threads of the convergence study.
 */

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "acbond/harness.hpp"

namespace {

acbond::ExperimentConfig base_config(const std::string& config_path) {
    if (config_path.empty()) return acbond::ExperimentConfig{};
    return acbond::load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-based atomistic/continuum coupling experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;
    std::string method = "ecc";
    std::string potential = "lennard_jones";
    std::string interface_kind;
    std::string dump_mesh_path, dump_state_path;
    std::int64_t n_override = 0, K = 0, N1 = 8;
    int R1 = 2, count = 20;
    unsigned seed = 0;
    bool have_seed = false;
    double F1 = 1.0, alpha = 3.0;

    CLI::App* patch = app.add_subcommand("patch-test",
                                         "ghost-force residuals at uniform deformations");
    patch->add_option("--config", config_path, "JSON experiment config");
    patch->add_option("--n", n_override, "crystal hexagon side");
    patch->add_option("--K", K, "atomistic-region hexagon side");
    patch->add_option("--count", count, "number of random deformations");
    patch->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
        have_seed = true;
    });

    CLI::App* conv = app.add_subcommand("convergence", "w1inf error against the atomistic minimizer");
    conv->add_option("--config", config_path, "JSON experiment config");
    conv->add_option("--output", output_path, "CSV output path (overrides config)");

    CLI::App* bdc = app.add_subcommand("bond-density-check",
                                       "exact bond-density identity on random triangles");
    bdc->add_option("--seed", seed, "random seed");
    bdc->add_option("--count", count, "number of triangles")->default_val(120);

    CLI::App* oned = app.add_subcommand("oned", "evaluate a 1D model at the uniform state");
    oned->add_option("--method", method, "atomistic|qce|ecc|acc")->required();
    oned->add_option("--N", N1, "continuum region (0, N)");
    oned->add_option("--R", R1, "interaction range");
    oned->add_option("--F", F1, "uniform stretch");
    oned->add_option("--potential", potential, "lennard_jones|morse");
    oned->add_option("--alpha", alpha, "Morse stiffness");

    CLI::App* single = app.add_subcommand("single-run", "assemble and minimize one model");
    single->add_option("--config", config_path, "JSON experiment config");
    single->add_option("--method", method, "atomistic|qce|ecc|acc");
    single->add_option("--K", K, "atomistic-region hexagon side");
    single->add_option("--n", n_override, "crystal hexagon side");
    single->add_option("--interface", interface_kind, "aligned|nonaligned");
    single->add_option("--output", output_path, "CSV output path");
    single->add_option("--dump-mesh", dump_mesh_path, "write the mesh as 'n x y' / 't i j k' lines");
    single->add_option("--dump-state", dump_state_path, "write the minimizer as 'i j yx yy' lines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (patch->parsed()) {
            acbond::ExperimentConfig cfg = base_config(config_path);
            if (config_path.empty()) {
                cfg.hexagon_side = 15;
                cfg.K_values = {6};
            }
            if (n_override > 0) cfg.hexagon_side = n_override;
            if (K > 0) cfg.K_values = {K};
            if (have_seed) cfg.seed = seed;
            cfg.validate();
            return acbond::run_patch_test(cfg, count, std::cout);
        }

        if (conv->parsed()) {
            acbond::ExperimentConfig cfg = base_config(config_path);
            if (!output_path.empty()) cfg.output_path = output_path;
            cfg.validate();
            auto rows = acbond::run_convergence(cfg, std::cout);
            std::ofstream out(cfg.output_path);
            if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
            acbond::write_csv(rows, out);
            std::cout << "wrote " << rows.size() << " rows to " << cfg.output_path << "\n";
            return 0;
        }

        if (bdc->parsed()) return acbond::run_bond_density_check(seed, count, std::cout);

        if (oned->parsed()) return acbond::run_oned(method, N1, R1, F1, potential, alpha, std::cout);

        if (single->parsed()) {
            acbond::ExperimentConfig cfg = base_config(config_path);
            if (n_override > 0) cfg.hexagon_side = n_override;
            if (K > 0) cfg.K_values = {K};
            if (!interface_kind.empty()) cfg.interface_kind = interface_kind;
            cfg.validate();
            acbond::ModelKind kind = acbond::model_from_name(method);
            if (kind == acbond::ModelKind::CauchyBorn)
                throw std::invalid_argument("single-run supports atomistic, qce, ecc and acc");
            auto P = acbond::build_hexagon_problem(cfg, cfg.K_values.front());
            auto model = acbond::build_model(kind, P->dd,
                                             kind == acbond::ModelKind::Atomistic ? nullptr
                                                                                  : &P->mesh,
                                             *P->phi);
            std::cout << "single-run " << method << " K=" << cfg.K_values.front()
                      << " carriers=" << model.dofs.carriers.size()
                      << " free dofs=" << 2 * model.dofs.n_free << "\n";
            auto t0 = std::chrono::steady_clock::now();
            acbond::MinimizeResult res =
                acbond::minimize_model(model, model.uniform_state(P->F), cfg.solver,
                                       cfg.precondition);
            double wall = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            std::cout << "energy = " << std::setprecision(17) << res.energy << "\n"
                      << "grad sup = " << std::scientific << std::setprecision(6) << res.grad_sup
                      << std::defaultfloat << "\niterations = " << res.iterations
                      << "\nconverged = " << (res.converged ? "yes" : "no") << "\n";
            if (!dump_mesh_path.empty()) {
                std::ofstream mout(dump_mesh_path);
                if (!mout) throw std::runtime_error("cannot write " + dump_mesh_path);
                P->mesh.dump(mout);
            }
            if (!dump_state_path.empty()) {
                std::ofstream sout(dump_state_path);
                if (!sout) throw std::runtime_error("cannot write " + dump_state_path);
                sout << std::setprecision(17);
                for (std::size_t i = 0; i < model.dofs.carriers.size(); ++i)
                    sout << model.dofs.carriers[i].x << ' ' << model.dofs.carriers[i].y << ' '
                         << res.x[2 * std::int64_t(i)] << ' ' << res.x[2 * std::int64_t(i) + 1]
                         << '\n';
            }
            if (!output_path.empty()) {
                acbond::RunRecord rec;
                rec.method = method;
                rec.K = cfg.K_values.front();
                rec.energy = res.energy;
                rec.iterations = res.iterations;
                rec.wall_ms = wall;
                rec.failed = !res.converged;
                rec.w1inf_error = std::numeric_limits<double>::quiet_NaN();
                std::ofstream out(output_path);
                if (!out) throw std::runtime_error("cannot write " + output_path);
                acbond::write_csv({rec}, out);
            }
            return res.converged ? 0 : 2;
        }
    } catch (const acbond::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
