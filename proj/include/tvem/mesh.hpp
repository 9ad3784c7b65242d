#pragma once

#include "tvem/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace tvem {

// Mesh edge. Oriented so that elements[0] (the smaller element id) traverses it counter-clockwise;
// normal is the outward normal of elements[0].
struct Edge {
    int v0 = -1;
    int v1 = -1;
    Point a = Point::Zero();
    Point b = Point::Zero();
    double length = 0.0;
    Point tangent = Point::Zero();
    Point normal = Point::Zero();
    Point midpoint = Point::Zero();
    std::array<int, 2> elements{-1, -1};
    std::array<int, 2> local_index{-1, -1};

    bool is_boundary() const noexcept { return elements[1] < 0; }
};

class PolygonalMesh {
public:
    PolygonalMesh() = default;
    PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<int>> elements);

    std::size_t num_vertices() const noexcept { return vertices_.size(); }
    std::size_t num_elements() const noexcept { return polygons_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    const std::vector<std::vector<int>>& element_vertices() const noexcept { return element_vertices_; }
    const Polygon& element(std::size_t k) const { return polygons_[k]; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    // Global edge id of local edge i of element k (local edge i joins local vertices i and i+1).
    const std::vector<int>& element_edges(std::size_t k) const { return element_edges_[k]; }

    // +1 for the first neighbour and for boundary edges, -1 for the second; throws otherwise.
    int jump_sign(int edge, int element) const;

    double max_diameter() const;
    std::vector<int> boundary_edges() const;

    PolygonalMesh scaled(double factor) const;
    PolygonalMesh translated(const Point& shift) const;

private:
    std::vector<Point> vertices_;
    std::vector<std::vector<int>> element_vertices_;
    std::vector<Polygon> polygons_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> element_edges_;
};

struct ElementQuality {
    double diameter = 0.0;
    double min_edge = 0.0;
    double max_edge = 0.0;
    double star_radius = 0.0;
    double edge_ratio = 0.0;  // h_K / min h_e
    double star_ratio = 0.0;  // star radius / h_K
    bool flagged = false;
};

struct MeshQualityReport {
    std::vector<ElementQuality> elements;
    double max_edge_ratio = 0.0;
    double min_star_ratio = 0.0;
    double gamma_estimate = 0.0;  // smallest gamma satisfying both regularity bounds
    double gamma_threshold = 0.0;
    std::size_t flagged_count = 0;
    bool violation() const noexcept { return flagged_count > 0; }
};

MeshQualityReport shape_regularity(const PolygonalMesh& mesh, double gamma_threshold = 10.0);

PolygonalMesh read_mesh_json(const std::string& path);
void write_mesh_json(const PolygonalMesh& mesh, const std::string& path);
std::string mesh_to_json(const PolygonalMesh& mesh);
PolygonalMesh mesh_from_json(const std::string& text, const std::string& source = "<string>");

enum class LatticeKind { Square, Triangle, Hexagon };

LatticeKind parse_lattice_kind(const std::string& name);
std::string to_string(LatticeKind kind);

using Offset = std::array<int, 2>;

struct LatticeRef {
    int fundamental = -1;
    Offset offset{0, 0};
};

// Window of a periodic mesh with unit edge length. Every entity is identified with a fundamental
// representative and an integer lattice offset relative to the central cell.
struct TranslationInvariantMesh {
    LatticeKind kind = LatticeKind::Square;
    PolygonalMesh mesh;
    Point xi1 = Point::Zero();
    Point xi2 = Point::Zero();
    std::array<int, 2> window{0, 0};

    std::vector<int> fundamental_vertices;
    std::vector<int> fundamental_edges;
    std::vector<int> fundamental_elements;

    std::vector<LatticeRef> vertex_map;
    std::vector<LatticeRef> edge_map;
    std::vector<LatticeRef> element_map;

    std::vector<Offset> neighbor_offsets;

    Point shift(const Offset& n) const { return n[0] * xi1 + n[1] * xi2; }
};

TranslationInvariantMesh build_lattice(LatticeKind kind, int nx = 5, int ny = 5);

// Window of the lattice scaled by h; n x n cells.
PolygonalMesh lattice_mesh(LatticeKind kind, int n, double h);

// Unit square split into n x n squares.
PolygonalMesh unit_square_mesh(int n);

}  // namespace tvem
