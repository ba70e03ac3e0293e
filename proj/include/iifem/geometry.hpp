#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace iifem {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
    Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }
    Point& operator*=(double s) { x *= s; y *= s; return *this; }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(Point a, double s) { return a *= s; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend bool operator==(const Point&, const Point&) = default;
};

using Vec2 = Point;

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline Point midpoint(const Point& a, const Point& b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

using Triangle = std::array<Point, 3>;
using Polygon = std::vector<Point>;

/// Signed area, positive for counter-clockwise vertex order.
double signed_area(const Triangle& t);
double signed_area(const Polygon& p);
Point centroid(const Triangle& t);

struct Rect {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
};

/// Which subdomain a point belongs to. The level set is negative on Minus.
enum class Side { Minus, Plus };

inline Side opposite(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }

/// Zero set is the interface; negative inside, positive outside.
using LevelSet = std::function<double(const Point&)>;

/// Uniform rectangular grid split into right triangles along the
/// lower-left to upper-right diagonal of every cell.
///
/// Local edge k of a triangle is the edge opposite local vertex k, i.e.
/// (v[k+1], v[k+2]). Triangles are counter-clockwise.
struct Mesh {
    int nx = 0;
    int ny = 0;
    Rect domain;
    std::vector<Point> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 3>> triangle_edges;
    /// Second entry is -1 on boundary edges.
    std::vector<std::array<int, 2>> edge_triangles;
    std::vector<bool> boundary;
    double h = 0.0;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    Triangle triangle(int t) const;
    double area(int t) const;
    double edge_length(int e) const;
    /// Local index (0..2) of global edge e inside triangle t.
    int local_edge(int t, int e) const;
};

Mesh build_uniform_mesh(int nx, int ny, const Rect& domain);

/// "v x y" per vertex then "t i j k" per triangle.
void dump_mesh(const Mesh& mesh, std::ostream& os);

struct CutTolerances {
    /// |phi| below this fraction of the level-set scale counts as zero.
    double value_snap = 1e-12;
    /// Roots closer than this fraction of the edge length to a vertex snap onto it.
    double vertex_snap = 1e-9;
    /// Interface elements with min(|T+|,|T-|)/|T| below this become non-interface.
    double sliver = 1e-10;
    /// Interior samples per edge used to detect multiple crossings.
    int edge_samples = 8;
};

/// Root of phi on the segment p0-p1, if phi changes sign there.
/// `tol` is the absolute snap threshold on level-set values.
std::optional<Point> edge_intersection(const Point& p0, const Point& p1, const LevelSet& phi, double tol,
                                       double vertex_snap = CutTolerances{}.vertex_snap);

enum class ElementKind { NonInterface, Interface };

/// One side-homogeneous piece of an element: the whole triangle, or one
/// of the two polygons cut off by the chord.
struct Region {
    Side side = Side::Plus;
    Polygon polygon;  // counter-clockwise
    double area = 0.0;

    /// Fan triangulation from the first vertex.
    std::vector<Triangle> triangles() const;
    Point centroid() const;
};

/// Interface classification of one element.
struct CutInfo {
    ElementKind kind = ElementKind::NonInterface;
    Triangle vertices;
    double area = 0.0;

    /// Meaningful on non-interface elements only.
    Side side = Side::Plus;

    /// Local edges hosting D and E.
    std::array<int, 2> cut_edges{-1, -1};
    Point d;
    Point e;
    /// Unit normal of the chord DE, pointing from the minus to the plus side.
    Vec2 normal;
    /// Vertex cut off by the chord; for a chord through a vertex this is that vertex.
    int isolated_vertex = -1;

    /// One region on non-interface elements, minus then plus on interface ones.
    std::vector<Region> regions;

    bool is_interface() const { return kind == ElementKind::Interface; }
    double area_on(Side s) const;
    /// Chord side for interface elements (points on the chord are Plus), the element side otherwise.
    Side side_of(const Point& p) const;
    /// Barycentric coordinates of p.
    std::array<double, 3> barycentric(const Point& p) const;

    struct EdgePiece {
        Side side;
        Point mid;
        double length;
    };
    /// Side-homogeneous sub-segments of a local edge (split at D or E when it hosts one).
    std::vector<EdgePiece> edge_pieces(int local_edge) const;
};

CutInfo make_plain_cut(const Triangle& tri, Side side);

/// Builds an interface CutInfo from a chord. `vertex_sign` holds -1/0/+1
/// per vertex; D lies on local edge `d_edge`, E on `e_edge`.
CutInfo make_interface_cut(const Triangle& tri, const std::array<int, 3>& vertex_sign, int d_edge, const Point& d,
                           int e_edge, const Point& e);

std::vector<CutInfo> classify_elements(const Mesh& mesh, const LevelSet& phi, const CutTolerances& tol = {});

/// Every element tagged NonInterface (interface detection disabled). The side
/// comes from the sign of `phi` at the barycenter, or Plus when `phi` is empty.
std::vector<CutInfo> uncut_elements(const Mesh& mesh, const LevelSet& phi = {});

}  // namespace iifem
