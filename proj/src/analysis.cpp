#include "iifem/analysis.hpp"

#include "iifem/errors.hpp"
#include "iifem/quadrature.hpp"

#include <cmath>

namespace iifem {

ProblemSpec circle_r3_problem(double r0, const Coefficients& beta) {
    if (!(r0 > 0.0) || !(beta.beta_minus > 0.0) || !(beta.beta_plus > 0.0)) {
        throw InvalidArgument("circle_r3_problem: radius and coefficients must be positive");
    }
    ProblemSpec spec;
    spec.domain = {-1.0, 1.0, -1.0, 1.0};
    spec.beta = beta;
    spec.level_set = [r0](const Point& x) { return x.x * x.x + x.y * x.y - r0 * r0; };
    const double shift = (1.0 / beta.beta_minus - 1.0 / beta.beta_plus) * r0 * r0 * r0;
    const auto inside = [r0](const Point& x) { return x.x * x.x + x.y * x.y - r0 * r0 < 0.0; };

    ExactSolution ex;
    ex.p = [=](const Point& x) {
        const double r = std::hypot(x.x, x.y);
        return inside(x) ? r * r * r / beta.beta_minus : r * r * r / beta.beta_plus + shift;
    };
    ex.grad_p = [=](const Point& x) {
        const double r = std::hypot(x.x, x.y);
        const double b = inside(x) ? beta.beta_minus : beta.beta_plus;
        return Vec2{3.0 * r * x.x / b, 3.0 * r * x.y / b};
    };
    ex.u = [](const Point& x) {
        const double r = std::hypot(x.x, x.y);
        return Vec2{-3.0 * r * x.x, -3.0 * r * x.y};
    };
    spec.source = [](const Point& x) { return -9.0 * std::hypot(x.x, x.y); };
    spec.boundary = ex.p;
    spec.exact = std::move(ex);
    return spec;
}

double edge_average(const Mesh& mesh, const LevelSet& phi, int edge, const ScalarField& p) {
    const auto [ia, ib] = mesh.edges[edge];
    const Point a = mesh.vertices[ia];
    const Point b = mesh.vertices[ib];
    std::optional<Point> root;
    if (phi) root = edge_intersection(a, b, phi, 0.0);
    double s = 0.0;
    const auto add = [&](const Point& from, const Point& to) {
        if (from == to) return;
        for (const auto& q : segment_rule(from, to)) s += q.weight * p(q.point);
    };
    if (root) {
        add(a, *root);
        add(*root, b);
    } else {
        add(a, b);
    }
    return s / norm(b - a);
}

std::vector<double> interpolate(const Mesh& mesh, const LevelSet& phi, const ScalarField& p) {
    std::vector<double> out(mesh.edges.size());
    for (int e = 0; e < mesh.num_edges(); ++e) out[e] = edge_average(mesh, phi, e, p);
    return out;
}

namespace {

/// Sum over elements, regions and region sub-triangles of the integrand
/// g(point, p_h piece) by the 6-point rule.
template <class G>
double integrate_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<ElementBasis>& bases,
                       std::span<const double> p_dofs, G&& g) {
    if (cuts.size() != mesh.triangles.size() || bases.size() != cuts.size() ||
        static_cast<int>(p_dofs.size()) != mesh.num_edges()) {
        throw InvalidArgument("error norm: inconsistent sizes");
    }
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const AffinePair ph = combine(bases[t], gather(mesh, t, p_dofs));
        double element = 0.0;
        for (const auto& region : cuts[t].regions) {
            const AffineFn& piece = ph.on(region.side);
            for (const auto& tri : region.triangles()) {
                element += integrate(tri, [&](const Point& x) { return g(x, piece); });
            }
        }
        total += element;
    }
    return total;
}

}  // namespace

double l2_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<ElementBasis>& bases,
                std::span<const double> p_dofs, const ScalarField& p) {
    return std::sqrt(integrate_error(mesh, cuts, bases, p_dofs, [&](const Point& x, const AffineFn& ph) {
        const double d = p(x) - ph(x);
        return d * d;
    }));
}

double h1_broken_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<ElementBasis>& bases,
                       std::span<const double> p_dofs, const ScalarField& p, const VectorField& grad_p) {
    return std::sqrt(integrate_error(mesh, cuts, bases, p_dofs, [&](const Point& x, const AffineFn& ph) {
        const double d = p(x) - ph(x);
        const Vec2 dg = grad_p(x) - ph.gradient();
        return d * d + dot(dg, dg);
    }));
}

HdivError hdiv_error(const Mesh& mesh, const std::vector<CutInfo>& cuts, const std::vector<RTVelocity>& velocity,
                     const VectorField& u, const ScalarField& f) {
    if (cuts.size() != mesh.triangles.size() || velocity.size() != cuts.size()) {
        throw InvalidArgument("hdiv_error: inconsistent sizes");
    }
    double su = 0.0, sd = 0.0;
    for (std::size_t t = 0; t < cuts.size(); ++t) {
        const RTVelocity& uh = velocity[t];
        for (const auto& region : cuts[t].regions) {
            for (const auto& tri : region.triangles()) {
                for (const auto& q : triangle_rule(tri)) {
                    const Vec2 du = u(q.point) - uh(q.point);
                    const double dd = f(q.point) - uh.divergence();
                    su += q.weight * dot(du, du);
                    sd += q.weight * dd * dd;
                }
            }
        }
    }
    return {std::sqrt(su), std::sqrt(sd)};
}

double fit_order(std::span<const double> hs, std::span<const double> errors) {
    if (hs.size() != errors.size() || hs.size() < 2) {
        throw InvalidArgument("fit_order: need at least two (h, error) pairs");
    }
    const double n = static_cast<double>(hs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0) || !(errors[i] > 0.0)) throw InvalidArgument("fit_order: entries must be positive");
        mx += std::log(hs[i]);
        my += std::log(errors[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double dx = std::log(hs[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw InvalidArgument("fit_order: all h values are equal");
    return sxy / sxx;
}

double step_order(double h_coarse, double e_coarse, double h_fine, double e_fine) {
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

}  // namespace iifem
