#pragma once

#include "iifem/sparse.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace iifem {

enum class Preconditioner { None, Jacobi };

Preconditioner parse_preconditioner(std::string_view name);

struct SolveReport {
    std::vector<double> solution;
    int iterations = 0;
    /// True residual ||b - Ax|| / ||b|| at termination.
    double relative_residual = 0.0;
    bool converged = false;
};

/// Preconditioned conjugate gradients from a zero initial guess.
///
/// Stops once the true relative residual is at most rel_tol, or after
/// max_iter iterations (max_iter <= 0 means 20 * n). Throws NotSpd when a
/// search direction has non-positive energy.
SolveReport cg_solve(const CsrMatrix& a, std::span<const double> b, double rel_tol = 1e-12, int max_iter = 0,
                     Preconditioner precond = Preconditioner::None);

}  // namespace iifem
