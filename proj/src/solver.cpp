#include "iifem/solver.hpp"

#include "iifem/errors.hpp"

#include <cmath>
#include <string>

namespace iifem {

Preconditioner parse_preconditioner(std::string_view name) {
    if (name == "none") return Preconditioner::None;
    if (name == "jacobi") return Preconditioner::Jacobi;
    throw InvalidArgument("unknown preconditioner '" + std::string(name) + "'");
}

SolveReport cg_solve(const CsrMatrix& a, std::span<const double> b, double rel_tol, int max_iter,
                     Preconditioner precond) {
    const int n = a.rows();
    if (static_cast<int>(b.size()) != n) throw InvalidArgument("cg_solve: dimension mismatch");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("cg_solve: rel_tol must lie in (0, 1)");
    if (max_iter <= 0) max_iter = 20 * std::max(n, 1);

    SolveReport rep;
    rep.solution.assign(static_cast<std::size_t>(n), 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        rep.converged = true;
        return rep;
    }

    std::vector<double> inv_diag(static_cast<std::size_t>(n), 1.0);
    if (precond == Preconditioner::Jacobi) {
        for (int i = 0; i < n; ++i) {
            const double d = a.diagonal(i);
            if (!(d > 0.0)) throw NotSpd("cg_solve: non-positive diagonal at row " + std::to_string(i));
            inv_diag[i] = 1.0 / d;
        }
    }

    auto& x = rep.solution;
    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)), ap(static_cast<std::size_t>(n));
    const auto apply_precond = [&] {
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    };
    const auto true_residual = [&] {
        a.multiply(x, ap);
        for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
        return norm2(r) / bnorm;
    };

    apply_precond();
    p = z;
    double rz = dot(r, z);
    int it = 0;
    while (it < max_iter) {
        a.multiply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) throw NotSpd("cg_solve: p^T A p <= 0 at iteration " + std::to_string(it));
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        ++it;
        if (norm2(r) / bnorm <= rel_tol) {
            // Confirm against the true residual; keep iterating from it if the recurrence drifted.
            if (true_residual() <= rel_tol) break;
        }
        apply_precond();
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rep.iterations = it;
    rep.relative_residual = true_residual();
    rep.converged = rep.relative_residual <= rel_tol;
    return rep;
}

}  // namespace iifem
