#pragma once
/**
 * harness.hpp - experiment drivers.
 *
 * Builds the hexagonal crystal-with-void problems, runs the patch test and
 * the convergence studies, and writes CSV records. The crystal is a hexagon
 * of side n (rings 0..n-1 of the triangular lattice); three more rings of
 * sites carry the Dirichlet data y = F A x; the continuum region is the
 * annulus between the atomistic-region hexagon of side K and the crystal
 * edge. The defect is a cluster of removed sites near the origin.
 */

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "acbond/energy_models.hpp"
#include "acbond/fem_mesh.hpp"
#include "acbond/lattice_domain.hpp"
#include "acbond/potentials.hpp"
#include "acbond/solver.hpp"

namespace acbond {

// thrown when a minimization that an experiment depends on fails to converge
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::int64_t hexagon_side = 33;
    std::vector<std::int64_t> K_values = {4, 6, 8, 10, 12};
    std::vector<IVec2> defect;  // removed sites; defaults to the 8-atom void
    Mat2 F_applied;             // defaults to [[1, 0], [0, 0.97]]
    std::string potential = "lennard_jones";
    double r_cut = 3.1;
    double morse_alpha = 3.0;
    std::vector<std::string> methods = {"qce", "ecc", "acc"};
    Grading grading = Grading::Graded;
    int band_width = 4;
    std::string interface_kind = "aligned";  // "aligned" | "nonaligned"
    std::vector<IVec2> hole_override;        // explicit atomistic-region polygon
    MinimizeOptions solver;
    bool precondition = true;
    unsigned seed = 1;
    std::string output_path = "runs.csv";

    ExperimentConfig();
    void validate() const;
};

// the two rows of four sites removed around the origin
std::vector<IVec2> default_defect();

// triangular lattice basis (1, 0), (1/2, sqrt(3)/2)
Mat2 hex_lattice_basis();

// atomistic-region hexagon of side K; the nonaligned variant pushes
// alternate corners outward so no edge is parallel to a lattice direction
std::vector<IVec2> atomistic_hole(std::int64_t K, bool nonaligned);

ExperimentConfig config_from_json(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct HexagonProblem {
    LatticeSpec lattice;
    DomainDecomposition dd;
    Triangulation mesh;
    std::shared_ptr<const PairPotential> phi;
    Mat2 F;
    std::int64_t crystal_atoms = 0;  // crystal sites minus the defect
};

// K is the atomistic-region hexagon side for this instance
std::unique_ptr<HexagonProblem> build_hexagon_problem(const ExperimentConfig& cfg,
                                                      std::int64_t K);

struct RunRecord {
    std::string method;
    std::int64_t K = 0;
    double w1inf_error = 0.0;
    double energy = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
    bool failed = false;
};

void write_csv(const std::vector<RunRecord>& rows, std::ostream& out);

// minimize over the free carriers from the full initial state y0;
// the result's x is the full state with Dirichlet values kept
MinimizeResult minimize_model(const CoupledEnergy& model, const Eigen::VectorXd& y0,
                              const MinimizeOptions& opts, bool precondition);

// the atomistic minimizer the method runs are measured against: seeds the
// closing of the removed-atom cavity, settles the far field around the held
// faces, then minimizes unconstrained (full state returned)
MinimizeResult atomistic_reference(const CoupledEnergy& atom, const Mat2& F,
                                   const std::vector<IVec2>& defect,
                                   const MinimizeOptions& opts, bool precondition);

// ghost-force residuals for qce/ecc/acc on aligned and nonaligned
// interfaces, both potentials, `count` random deformations; returns the CLI
// exit code (1 when ecc or acc exceed 1e-10)
int run_patch_test(const ExperimentConfig& cfg, int count, std::ostream& log);

// the convergence study: one shared atomistic reference minimizer, then one
// minimization per (method, K); rows come back in deterministic order
std::vector<RunRecord> run_convergence(const ExperimentConfig& cfg, std::ostream& log);

// exact rational identity sum_b avg_b chi_T = |T| on random triangles
int run_bond_density_check(unsigned seed, int count, std::ostream& log);

// evaluate a 1D model at the uniform state and print the gradient table
int run_oned(const std::string& method, std::int64_t N, int R, double F,
             const std::string& potential, double alpha, std::ostream& log);

// deformation gradients with entries in [0.9, 1.1] and positive determinant
std::vector<Mat2> random_deformations(int count, unsigned seed);

// ACBOND_THREADS, else hardware concurrency, clamped to [1, tasks]
int thread_count_from_env(int tasks);

}  // namespace acbond
