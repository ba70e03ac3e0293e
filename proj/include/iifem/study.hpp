#pragma once

#include "iifem/analysis.hpp"
#include "iifem/assembly.hpp"
#include "iifem/errors.hpp"
#include "iifem/mixed_fvm.hpp"
#include "iifem/solver.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iifem {

/// Galerkin loads f pointwise; the mixed finite-volume scheme loads the
/// element means of f and recovers an RT0 velocity afterwards.
enum class Scheme { Galerkin, MixedFvm };

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme s);

struct SolverOptions {
    double rel_tol = 1e-12;
    int max_iter = 0;  // 0: 20 * number of unknowns
    Preconditioner precond = Preconditioner::None;
};

/// Everything produced by one pass of the pipeline on one mesh.
struct Discretization {
    Mesh mesh;
    std::vector<CutInfo> cuts;
    std::vector<ElementBasis> bases;
    CsrMatrix stiffness;  // over all edges
    LinearSystem system;
    SolveReport solve;
    std::vector<double> p_dofs;  // per edge
    std::optional<MixedPostprocess> mixed;
};

/// Thrown by the pipeline with the name of the failing stage.
struct StageError : std::runtime_error {
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage(std::move(stage)) {}
    std::string stage;
};

/// mesh -> classify -> basis -> assemble -> dirichlet -> solve [-> recover].
Discretization solve_problem(const ProblemSpec& problem, int nx, int ny, Scheme scheme, const SolverOptions& solver,
                             bool detect_interface = true);

struct ConfigError : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct StudyConfig {
    Scheme scheme = Scheme::Galerkin;
    double beta_minus = 1.0;
    double beta_plus = 1000.0;
    double radius = 0.5;
    /// Cells per axis; the reported h is 1 / entry.
    std::vector<int> ladder{8, 16, 32, 64};
    SolverOptions solver;
    bool detect_interface = true;
    std::string out_csv;
    std::string out_plot;
    /// Debug dumps of the finest ladder entry.
    std::string dump_mesh;
    std::string dump_matrix;
    std::string dump_velocity;
    /// Replaces the circular r^3 problem when set; must carry an exact solution.
    std::optional<ProblemSpec> custom;

    void validate() const;
    ProblemSpec problem() const;
};

/// Applies one `key = value` setting; keys may use '-' or '_'.
void apply_setting(StudyConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` lines; '#' starts a comment.
StudyConfig parse_config(std::istream& in, StudyConfig base = {});
StudyConfig load_config(const std::string& path, StudyConfig base = {});

std::vector<int> parse_ladder(std::string_view text);

enum class Norm { PL2, PH1, UL2, DivL2 };
inline constexpr std::array<Norm, 4> all_norms{Norm::PL2, Norm::PH1, Norm::UL2, Norm::DivL2};
std::string_view column_name(Norm n);

struct ConvergenceRow {
    int inv_h = 0;
    double h = 0.0;
    double p_l2 = 0.0;
    double p_h1 = 0.0;
    std::optional<double> u_l2;
    std::optional<double> div_l2;
    int cg_iterations = 0;
    double relative_residual = 0.0;
    std::optional<double> flux_mismatch;
    /// max |div u_h - fbar| over elements.
    std::optional<double> divergence_defect;

    std::optional<double> value(Norm n) const;
};

struct ConvergenceReport {
    Scheme scheme = Scheme::Galerkin;
    std::vector<ConvergenceRow> rows;

    /// Order between rows i-1 and i.
    std::optional<double> step_order(Norm n, std::size_t i) const;
    /// Least-squares order over all rows.
    std::optional<double> fitted_order(Norm n) const;
};

/// Thrown by run_study; `partial` holds the rows completed before the failure.
struct StudyError : std::runtime_error {
    StudyError(int inv_h, std::string stage, const std::string& what, ConvergenceReport partial)
        : std::runtime_error("1/h=" + std::to_string(inv_h) + ", stage " + stage + ": " + what),
          inv_h(inv_h), stage(std::move(stage)), partial(std::move(partial)) {}
    int inv_h;
    std::string stage;
    ConvergenceReport partial;
};

ConvergenceReport run_study(const StudyConfig& config);

void write_csv(const ConvergenceReport& report, std::ostream& os);
void emit_csv(const ConvergenceReport& report, const std::string& path);
void write_plotdata(const ConvergenceReport& report, std::ostream& os);
void emit_plotdata(const ConvergenceReport& report, const std::string& path);
void print_table(const ConvergenceReport& report, std::ostream& os);

}  // namespace iifem
