#pragma once

#include "iifem/basis.hpp"
#include "iifem/geometry.hpp"
#include "iifem/sparse.hpp"

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace iifem {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vec2(const Point&)>;

/// One unknown per mesh edge (its average); boundary edges are Dirichlet.
struct DofMap {
    /// Free index per edge, -1 on Dirichlet edges.
    std::vector<int> free_index;
    /// Edge of each free unknown, in edge order.
    std::vector<int> free_edges;

    static DofMap from_mesh(const Mesh& mesh);
    int num_free() const { return static_cast<int>(free_edges.size()); }
    int num_dofs() const { return static_cast<int>(free_index.size()); }
};

/// System over the free unknowns with Dirichlet columns folded into the right-hand side.
struct LinearSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    /// Edge averages of the boundary data on Dirichlet edges, zero elsewhere.
    std::vector<double> boundary_values;
    DofMap dofs;

    /// Full per-edge vector from a solution over the free unknowns.
    std::vector<double> expand(std::span<const double> free_values) const;
};

/// Pointwise integrates f against the shape functions; CellMean replaces f
/// by its element average first.
enum class LoadMode { Pointwise, CellMean };

LoadMode parse_load_mode(std::string_view name);

/// Local 3x3 stiffness block: sum over regions of beta grad(phi_i).grad(phi_j) |region|.
std::array<std::array<double, 3>, 3> local_stiffness(const CutInfo& cut, const ElementBasis& basis,
                                                     const Coefficients& beta);

/// Global stiffness over all edges (Dirichlet rows included).
CsrMatrix assemble_stiffness(const Mesh& mesh, const std::vector<CutInfo>& cuts,
                             const std::vector<ElementBasis>& bases, const Coefficients& beta);

/// (1/|T|) * integral of f over each element, by the 6-point rule on every region sub-triangle.
std::vector<double> element_means(const Mesh& mesh, const std::vector<CutInfo>& cuts, const ScalarField& f);

/// Load vector over all edges.
std::vector<double> assemble_load(const Mesh& mesh, const std::vector<CutInfo>& cuts,
                                  const std::vector<ElementBasis>& bases, const ScalarField& f, LoadMode mode);

/// Average of g over a mesh edge by 3-point Gauss.
double boundary_average(const Mesh& mesh, int edge, const ScalarField& g);

/// Eliminates Dirichlet unknowns set to the Gauss averages of g.
LinearSystem apply_dirichlet(const CsrMatrix& stiffness, std::span<const double> load, const Mesh& mesh,
                             const DofMap& dofs, const ScalarField& g);

}  // namespace iifem
