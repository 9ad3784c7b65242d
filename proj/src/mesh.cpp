#include "tvem/mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tvem {

PolygonalMesh::PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<int>> elements)
    : vertices_(std::move(vertices)), element_vertices_(std::move(elements)) {
    const int nv = static_cast<int>(vertices_.size());
    polygons_.reserve(element_vertices_.size());
    for (std::size_t k = 0; k < element_vertices_.size(); ++k) {
        const auto& ids = element_vertices_[k];
        std::vector<Point> pts;
        pts.reserve(ids.size());
        for (int id : ids) {
            if (id < 0 || id >= nv)
                throw InvalidArgument("element " + std::to_string(k) + " references missing vertex " +
                                      std::to_string(id));
            pts.push_back(vertices_[id]);
        }
        try {
            polygons_.emplace_back(std::move(pts));
        } catch (const DegenerateGeometry& e) {
            throw DegenerateGeometry("element " + std::to_string(k) + ": " + e.what());
        }
    }

    std::map<std::pair<int, int>, int> lookup;
    element_edges_.resize(element_vertices_.size());
    for (std::size_t k = 0; k < element_vertices_.size(); ++k) {
        const auto& ids = element_vertices_[k];
        const std::size_t m = ids.size();
        element_edges_[k].resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const int a = ids[i];
            const int b = ids[(i + 1) % m];
            const auto key = std::minmax(a, b);
            auto it = lookup.find({key.first, key.second});
            if (it == lookup.end()) {
                Edge e;
                e.v0 = a;
                e.v1 = b;
                e.a = vertices_[a];
                e.b = vertices_[b];
                e.length = (e.b - e.a).norm();
                e.tangent = (e.b - e.a) / e.length;
                e.normal = Point(e.tangent.y(), -e.tangent.x());
                e.midpoint = 0.5 * (e.a + e.b);
                e.elements[0] = static_cast<int>(k);
                e.local_index[0] = static_cast<int>(i);
                lookup.emplace(std::pair{key.first, key.second}, static_cast<int>(edges_.size()));
                element_edges_[k][i] = static_cast<int>(edges_.size());
                edges_.push_back(e);
            } else {
                Edge& e = edges_[it->second];
                if (e.elements[1] >= 0 || e.v0 != b || e.v1 != a)
                    throw InvalidArgument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                          ") is not shared consistently by two elements");
                e.elements[1] = static_cast<int>(k);
                e.local_index[1] = static_cast<int>(i);
                element_edges_[k][i] = it->second;
            }
        }
    }
}

int PolygonalMesh::jump_sign(int edge, int element) const {
    const Edge& e = edges_.at(edge);
    if (e.elements[0] == element) return 1;
    if (e.elements[1] == element && element >= 0) return -1;
    throw InvalidArgument("element " + std::to_string(element) + " is not adjacent to edge " + std::to_string(edge));
}

double PolygonalMesh::max_diameter() const {
    double h = 0.0;
    for (const auto& p : polygons_) h = std::max(h, p.diameter());
    return h;
}

std::vector<int> PolygonalMesh::boundary_edges() const {
    std::vector<int> out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
        if (edges_[e].is_boundary()) out.push_back(static_cast<int>(e));
    return out;
}

PolygonalMesh PolygonalMesh::scaled(double factor) const {
    std::vector<Point> v = vertices_;
    for (auto& p : v) p *= factor;
    return PolygonalMesh(std::move(v), element_vertices_);
}

PolygonalMesh PolygonalMesh::translated(const Point& shift) const {
    std::vector<Point> v = vertices_;
    for (auto& p : v) p += shift;
    return PolygonalMesh(std::move(v), element_vertices_);
}

MeshQualityReport shape_regularity(const PolygonalMesh& mesh, double gamma_threshold) {
    if (!(gamma_threshold >= 1.0)) throw InvalidArgument("gamma threshold must be >= 1");
    MeshQualityReport r;
    r.gamma_threshold = gamma_threshold;
    r.min_star_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const Polygon& K = mesh.element(k);
        ElementQuality q;
        q.diameter = K.diameter();
        q.min_edge = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < K.size(); ++i) {
            q.min_edge = std::min(q.min_edge, K.edge_length(i));
            q.max_edge = std::max(q.max_edge, K.edge_length(i));
        }
        q.star_radius = star_ball(K).radius;
        q.edge_ratio = q.diameter / q.min_edge;
        q.star_ratio = q.star_radius / q.diameter;
        q.flagged = q.edge_ratio > gamma_threshold || q.star_ratio < 1.0 / gamma_threshold;
        r.max_edge_ratio = std::max(r.max_edge_ratio, q.edge_ratio);
        r.min_star_ratio = std::min(r.min_star_ratio, q.star_ratio);
        if (q.flagged) ++r.flagged_count;
        r.elements.push_back(q);
    }
    const double star_gamma = r.min_star_ratio > 0.0 ? 1.0 / r.min_star_ratio : std::numeric_limits<double>::infinity();
    r.gamma_estimate = std::max(r.max_edge_ratio, star_gamma);
    return r;
}

std::string mesh_to_json(const PolygonalMesh& mesh) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& p : mesh.vertices()) j["vertices"].push_back({p.x(), p.y()});
    j["elements"] = mesh.element_vertices();
    return j.dump();
}

PolygonalMesh mesh_from_json(const std::string& text, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MeshFileError(source, std::string("malformed JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("vertices") || !j.contains("elements"))
            throw MeshFileError(source, "expected keys 'vertices' and 'elements'");
        std::vector<Point> vertices;
        for (const auto& v : j.at("vertices")) {
            if (!v.is_array() || v.size() != 2) throw MeshFileError(source, "vertex must be [x, y]");
            vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
        }
        auto elements = j.at("elements").get<std::vector<std::vector<int>>>();
        if (elements.empty()) throw MeshFileError(source, "mesh has no elements");
        return PolygonalMesh(std::move(vertices), std::move(elements));
    } catch (const MeshFileError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw MeshFileError(source, std::string("invalid mesh data: ") + e.what());
    } catch (const Error& e) {
        throw MeshFileError(source, e.what());
    }
}

PolygonalMesh read_mesh_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshFileError(path, "cannot open mesh file");
    std::stringstream ss;
    ss << in.rdbuf();
    return mesh_from_json(ss.str(), path);
}

void write_mesh_json(const PolygonalMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << mesh_to_json(mesh) << '\n';
}

LatticeKind parse_lattice_kind(const std::string& name) {
    if (name == "square" || name == "squares") return LatticeKind::Square;
    if (name == "triangle" || name == "triangles") return LatticeKind::Triangle;
    if (name == "hexagon" || name == "hexagons") return LatticeKind::Hexagon;
    throw InvalidArgument("unknown lattice '" + name + "' (square|triangle|hexagon)");
}

std::string to_string(LatticeKind kind) {
    switch (kind) {
    case LatticeKind::Square: return "square";
    case LatticeKind::Triangle: return "triangle";
    case LatticeKind::Hexagon: return "hexagon";
    }
    return "?";
}

namespace {

struct Prototype {
    Point xi1, xi2;
    std::vector<std::vector<Point>> cells;  // element polygons of cell (0,0)
};

Prototype prototype(LatticeKind kind) {
    const double s = std::sqrt(3.0) / 2.0;
    switch (kind) {
    case LatticeKind::Square: return {{1.0, 0.0}, {0.0, 1.0}, {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}};
    case LatticeKind::Triangle:
        return {{1.0, 0.0}, {0.5, s}, {{{0, 0}, {1, 0}, {0.5, s}}, {{1, 0}, {1.5, s}, {0.5, s}}}};
    case LatticeKind::Hexagon: {
        std::vector<Point> hex;
        for (int i = 0; i < 6; ++i) hex.emplace_back(std::cos(i * pi / 3.0), std::sin(i * pi / 3.0));
        hex[0] = {1.0, 0.0};
        hex[1] = {0.5, s};
        hex[2] = {-0.5, s};
        hex[3] = {-1.0, 0.0};
        hex[4] = {-0.5, -s};
        hex[5] = {0.5, -s};
        return {{1.5, s}, {0.0, 2.0 * s}, {hex}};
    }
    }
    throw InvalidArgument("unknown lattice kind");
}

using Key = std::pair<long long, long long>;
Key point_key(const Point& p, double grid) { return {std::llround(p.x() / grid), std::llround(p.y() / grid)}; }

PolygonalMesh window_mesh(const Prototype& proto, int nx, int ny) {
    std::vector<Point> vertices;
    std::map<Key, int> index;
    std::vector<std::vector<int>> elements;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Point o = i * proto.xi1 + j * proto.xi2;
            for (const auto& cell : proto.cells) {
                std::vector<int> ids;
                for (const auto& p : cell) {
                    const Point x = o + p;
                    auto [it, inserted] = index.emplace(point_key(x, 1e-9), static_cast<int>(vertices.size()));
                    if (inserted) vertices.push_back(x);
                    ids.push_back(it->second);
                }
                elements.push_back(std::move(ids));
            }
        }
    return PolygonalMesh(std::move(vertices), std::move(elements));
}

}  // namespace

TranslationInvariantMesh build_lattice(LatticeKind kind, int nx, int ny) {
    if (nx < 3 || ny < 3) throw InvalidArgument("lattice window must be at least 3x3");
    const Prototype proto = prototype(kind);
    TranslationInvariantMesh t;
    t.kind = kind;
    t.xi1 = proto.xi1;
    t.xi2 = proto.xi2;
    t.window = {nx, ny};
    t.mesh = window_mesh(proto, nx, ny);

    const Point origin = (nx / 2) * proto.xi1 + (ny / 2) * proto.xi2;
    Eigen::Matrix2d B;
    B.col(0) = proto.xi1;
    B.col(1) = proto.xi2;
    const Eigen::Matrix2d Binv = B.inverse();

    // Reduce each entity position to the central cell; entities at offset (0,0) are representatives.
    auto classify = [&](const std::vector<Point>& positions, std::vector<int>& fundamentals,
                        std::vector<LatticeRef>& map) {
        const std::size_t n = positions.size();
        std::vector<Key> keys(n);
        map.assign(n, {});
        std::map<Key, int> klass;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d ab = Binv * (positions[i] - origin);
            const Offset off{static_cast<int>(std::floor(ab.x() + 1e-7)), static_cast<int>(std::floor(ab.y() + 1e-7))};
            keys[i] = point_key(positions[i] - origin - t.shift(off), 1e-6);
            map[i].offset = off;
            if (off == Offset{0, 0}) {
                klass.emplace(keys[i], static_cast<int>(fundamentals.size()));
                fundamentals.push_back(static_cast<int>(i));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto it = klass.find(keys[i]);
            if (it == klass.end()) throw Error("lattice classification failed; window too small");
            map[i].fundamental = it->second;
        }
    };

    std::vector<Point> pos;
    for (const auto& v : t.mesh.vertices()) pos.push_back(v);
    classify(pos, t.fundamental_vertices, t.vertex_map);
    pos.clear();
    for (const auto& e : t.mesh.edges()) pos.push_back(e.midpoint);
    classify(pos, t.fundamental_edges, t.edge_map);
    pos.clear();
    for (std::size_t k = 0; k < t.mesh.num_elements(); ++k) pos.push_back(t.mesh.element(k).barycenter());
    classify(pos, t.fundamental_elements, t.element_map);

    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) t.neighbor_offsets.push_back({a, b});
    return t;
}

PolygonalMesh lattice_mesh(LatticeKind kind, int n, double h) {
    if (n < 1) throw InvalidArgument("lattice_mesh needs n >= 1");
    if (!(h > 0.0)) throw InvalidArgument("mesh size must be positive");
    return window_mesh(prototype(kind), n, n).scaled(h);
}

PolygonalMesh unit_square_mesh(int n) { return lattice_mesh(LatticeKind::Square, n, 1.0 / n); }

}  // namespace tvem
