#include "morphkit/mesh.hpp"

#include "morphkit/error.hpp"
#include "geometry.hpp"
#include "numeric_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace morphkit {

// ---------------------------------------------------------------------------
// DisplacementField
// ---------------------------------------------------------------------------

DisplacementField::DisplacementField(NodeIds indices, std::vector<Point> vectors)
    : indices_(std::move(indices)), vectors_(std::move(vectors)) {
    require(indices_.size() == vectors_.size(),
            "displacement field has " + std::to_string(indices_.size()) + " indices but " +
                std::to_string(vectors_.size()) + " vectors");
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        if (!vectors_[i].allFinite())
            fail(ErrorCode::NonFinite, "displacement of node " + std::to_string(indices_[i]) +
                                           " is not finite");
    }
}

DisplacementField DisplacementField::zeros(NodeIds indices) {
    std::vector<Point> v(indices.size(), Point::Zero());
    return {std::move(indices), std::move(v)};
}

Vector DisplacementField::flatten(int dim) const {
    Vector flat(static_cast<Eigen::Index>(vectors_.size()) * dim);
    for (std::size_t i = 0; i < vectors_.size(); ++i)
        for (int c = 0; c < dim; ++c) flat(static_cast<Eigen::Index>(i) * dim + c) = vectors_[i](c);
    return flat;
}

DisplacementField DisplacementField::unflatten(NodeIds indices, const Vector& flat, int dim) {
    require(flat.size() == static_cast<Eigen::Index>(indices.size()) * dim,
            "flattened field length " + std::to_string(flat.size()) + " does not match " +
                std::to_string(indices.size()) + " nodes x " + std::to_string(dim));
    std::vector<Point> v(indices.size(), Point::Zero());
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (int c = 0; c < dim; ++c) v[i](c) = flat(static_cast<Eigen::Index>(i) * dim + c);
    return {std::move(indices), std::move(v)};
}

DisplacementField DisplacementField::restrict_to(const NodeIds& ids) const {
    std::vector<std::size_t> order(indices_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return indices_[a] < indices_[b]; });
    std::vector<Point> v;
    v.reserve(ids.size());
    for (NodeId id : ids) {
        auto it = std::lower_bound(order.begin(), order.end(), id,
                                   [&](std::size_t pos, NodeId key) { return indices_[pos] < key; });
        require(it != order.end() && indices_[*it] == id,
                "node " + std::to_string(id) + " is not covered by the displacement field");
        v.push_back(vectors_[*it]);
    }
    return {ids, std::move(v)};
}

// ---------------------------------------------------------------------------
// Mesh
// ---------------------------------------------------------------------------

namespace {

NodeIds sorted_unique(NodeIds ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

Mesh::Mesh(int dim, std::vector<Point> nodes, std::vector<NodeId> connectivity, NodeIds boundary,
           Groups groups)
    : dim_(dim), nodes_(std::move(nodes)), connectivity_(std::move(connectivity)),
      boundary_(std::move(boundary)), groups_(std::move(groups)) {
    require(dim_ == 2 || dim_ == 3, "mesh dimension must be 2 or 3, got " + std::to_string(dim_));
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!nodes_[i].allFinite())
            fail(ErrorCode::NonFinite, "node " + std::to_string(i) + " has non-finite coordinates");
        if (dim_ == 2 && nodes_[i].z() != 0.0)
            fail(ErrorCode::InvalidArgument, "2D node " + std::to_string(i) + " has nonzero z");
    }
    require(connectivity_.size() % nodes_per_element() == 0,
            "connectivity length is not a multiple of " + std::to_string(nodes_per_element()));
    for (std::size_t k = 0; k < connectivity_.size(); ++k) {
        require(connectivity_[k] < n, "element " + std::to_string(k / nodes_per_element()) +
                                          " references node " + std::to_string(connectivity_[k]) +
                                          " out of range");
    }

    require(std::is_sorted(boundary_.begin(), boundary_.end()) &&
                std::adjacent_find(boundary_.begin(), boundary_.end()) == boundary_.end(),
            "boundary ids must be sorted and unique");
    require(boundary_.empty() || boundary_.back() < n, "boundary id out of range");

    std::vector<char> is_boundary(n, 0);
    for (NodeId b : boundary_) is_boundary[b] = 1;
    interior_.reserve(n - boundary_.size());
    for (NodeId i = 0; i < n; ++i)
        if (!is_boundary[i]) interior_.push_back(i);

    for (auto& [name, ids] : groups_) {
        ids = sorted_unique(std::move(ids));
        for (NodeId id : ids) {
            require(id < n, "group '" + name + "' references node " + std::to_string(id) +
                                " out of range");
            require(is_boundary[id] != 0, "group '" + name + "' contains non-boundary node " +
                                              std::to_string(id));
        }
    }

    if (auto pair = detail::find_coincident_pair(nodes_, 1e-12 * bbox_diagonal()))
        fail(ErrorCode::InvalidArgument, "nodes " + std::to_string(pair->first) + " and " +
                                             std::to_string(pair->second) + " coincide");
}

std::span<const NodeId> Mesh::element(std::size_t e) const {
    require(e < element_count(), "element index " + std::to_string(e) + " out of range");
    return {connectivity_.data() + e * nodes_per_element(), nodes_per_element()};
}

const NodeIds& Mesh::group(const std::string& name) const {
    auto it = groups_.find(name);
    require(it != groups_.end(), "unknown group '" + name + "'");
    return it->second;
}

std::pair<Point, Point> Mesh::bounding_box() const {
    if (nodes_.empty()) return {Point::Zero(), Point::Zero()};
    Point lo = nodes_.front();
    Point hi = nodes_.front();
    for (const Point& p : nodes_) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo, hi};
}

double Mesh::bbox_diagonal() const {
    auto [lo, hi] = bounding_box();
    return (hi - lo).norm();
}

bool Mesh::operator==(const Mesh& other) const {
    return dim_ == other.dim_ && nodes_ == other.nodes_ && connectivity_ == other.connectivity_ &&
           boundary_ == other.boundary_ && groups_ == other.groups_;
}

// ---------------------------------------------------------------------------
// Quality
// ---------------------------------------------------------------------------

double element_quality(const Mesh& mesh, std::size_t e) {
    auto vs = mesh.element(e);
    double longest = 0.0;
    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            const double len = (mesh.node(vs[i]) - mesh.node(vs[j])).norm();
            longest = std::max(longest, len);
            shortest = std::min(shortest, len);
        }
    }
    if (!(shortest > 0.0))
        fail(ErrorCode::DegenerateElement, "element " + std::to_string(e) + " has a zero-length edge");
    return longest / shortest;
}

QualityStats mesh_quality(const Mesh& mesh) {
    require(mesh.element_count() > 0, "mesh quality requires at least one element");
    std::vector<double> q(mesh.element_count());
    for (std::size_t e = 0; e < q.size(); ++e) q[e] = element_quality(mesh, e);
    QualityStats stats;
    stats.max = *std::max_element(q.begin(), q.end());
    stats.mean = detail::pairwise_sum(q) / static_cast<double>(q.size());
    return stats;
}

// ---------------------------------------------------------------------------
// Deformation
// ---------------------------------------------------------------------------

std::vector<Point> displaced_nodes(const Mesh& mesh, const DisplacementField& d) {
    std::vector<Point> nodes = mesh.nodes();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const NodeId id = d.indices()[i];
        require(id < nodes.size(), "displacement index " + std::to_string(id) + " out of range");
        nodes[id] += d.vectors()[i];
        if (mesh.dim() == 2) nodes[id].z() = 0.0;
    }
    return nodes;
}

Mesh apply_deformation(const Mesh& mesh, const DisplacementField& d) {
    return Mesh(mesh.dim(), displaced_nodes(mesh, d), mesh.connectivity(), mesh.boundary_ids(),
                mesh.groups());
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

/// Six tetrahedra of the Kuhn subdivision; corner bit i = x, 2 = y, 4 = z.
constexpr std::array<std::array<int, 4>, 6> kKuhnTets{{
    {0, 1, 3, 7},
    {0, 1, 5, 7},
    {0, 2, 3, 7},
    {0, 2, 6, 7},
    {0, 4, 5, 7},
    {0, 4, 6, 7},
}};

/// Per-axis face labels ordered by group priority.
const std::array<std::string, 6> kFaceNames{"left", "right", "bottom", "top", "front", "rear"};

/// Face index in kFaceNames of a structured node, -1 when not on the box
/// [lo,hi] surface. Axis order for priority: z (left/right), y, x.
int face_of(const std::array<int, 3>& ijk, const std::array<int, 3>& lo, const std::array<int, 3>& hi) {
    if (ijk[2] == lo[2]) return 0;
    if (ijk[2] == hi[2]) return 1;
    if (ijk[1] == lo[1]) return 2;
    if (ijk[1] == hi[1]) return 3;
    if (ijk[0] == lo[0]) return 4;
    if (ijk[0] == hi[0]) return 5;
    return -1;
}

bool on_extreme(int v, int lo, int hi) { return v == lo || v == hi; }

/// Structured tensor grid with an optional removed box of cells [hole_lo,hole_hi).
struct TensorGrid {
    std::array<std::vector<double>, 3> coords;
    bool has_hole = false;
    std::array<int, 3> hole_lo{};
    std::array<int, 3> hole_hi{};

    int cells(int axis) const { return static_cast<int>(coords[axis].size()) - 1; }

    bool node_in_hole_interior(const std::array<int, 3>& ijk) const {
        if (!has_hole) return false;
        for (int a = 0; a < 3; ++a)
            if (ijk[a] <= hole_lo[a] || ijk[a] >= hole_hi[a]) return false;
        return true;
    }
    bool node_on_hole_surface(const std::array<int, 3>& ijk) const {
        if (!has_hole) return false;
        for (int a = 0; a < 3; ++a)
            if (ijk[a] < hole_lo[a] || ijk[a] > hole_hi[a]) return false;
        return !node_in_hole_interior(ijk);
    }
    bool cell_in_hole(const std::array<int, 3>& ijk) const {
        if (!has_hole) return false;
        for (int a = 0; a < 3; ++a)
            if (ijk[a] < hole_lo[a] || ijk[a] >= hole_hi[a]) return false;
        return true;
    }
};

Mesh build_tensor_mesh(const TensorGrid& g) {
    const std::array<int, 3> n{g.cells(0), g.cells(1), g.cells(2)};
    const std::array<int, 3> outer_lo{0, 0, 0};
    const auto lin = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * (n[1] + 1) + j) * (n[0] + 1) + i;
    };

    std::vector<NodeId> remap(static_cast<std::size_t>(n[0] + 1) * (n[1] + 1) * (n[2] + 1),
                              static_cast<NodeId>(-1));
    std::vector<Point> nodes;
    NodeIds boundary;
    Groups groups;
    for (int k = 0; k <= n[2]; ++k) {
        for (int j = 0; j <= n[1]; ++j) {
            for (int i = 0; i <= n[0]; ++i) {
                const std::array<int, 3> ijk{i, j, k};
                if (g.node_in_hole_interior(ijk)) continue;
                const NodeId id = nodes.size();
                remap[lin(i, j, k)] = id;
                nodes.emplace_back(g.coords[0][i], g.coords[1][j], g.coords[2][k]);

                const int outer_face = face_of(ijk, outer_lo, n);
                const bool on_obstacle = g.node_on_hole_surface(ijk);
                if (outer_face >= 0 || on_obstacle) boundary.push_back(id);

                if (outer_face >= 0) {
                    groups[kFaceNames[outer_face]].push_back(id);
                    if (g.has_hole) groups["outer"].push_back(id);
                    const bool x_edge = on_extreme(i, 0, n[0]);
                    const bool y_edge = on_extreme(j, 0, n[1]);
                    if (!g.has_hole) {
                        if (k == 0 && (x_edge || y_edge)) groups["left_edge"].push_back(id);
                        if (k == n[2] && (x_edge || y_edge)) groups["right_edge"].push_back(id);
                        if (x_edge && y_edge) groups["horizontal_edges"].push_back(id);
                    }
                }
                if (on_obstacle) {
                    const auto& lo = g.hole_lo;
                    const auto& hi = g.hole_hi;
                    groups["obstacle"].push_back(id);
                    groups["obstacle_" + kFaceNames[face_of(ijk, lo, hi)]].push_back(id);
                    const bool x_edge = on_extreme(i, lo[0], hi[0]);
                    const bool y_edge = on_extreme(j, lo[1], hi[1]);
                    const bool z_edge = on_extreme(k, lo[2], hi[2]);
                    if (k == lo[2] && (x_edge || y_edge)) groups["obstacle_left_edge"].push_back(id);
                    if (k == hi[2] && (x_edge || y_edge)) groups["obstacle_right_edge"].push_back(id);
                    if (x_edge && y_edge) groups["obstacle_horizontal_edges"].push_back(id);
                    if ((x_edge && y_edge) || (x_edge && z_edge) || (y_edge && z_edge))
                        groups["obstacle_edges"].push_back(id);
                }
            }
        }
    }

    std::vector<NodeId> conn;
    conn.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2] * 24);
    for (int k = 0; k < n[2]; ++k) {
        for (int j = 0; j < n[1]; ++j) {
            for (int i = 0; i < n[0]; ++i) {
                if (g.cell_in_hole({i, j, k})) continue;
                std::array<NodeId, 8> corner{};
                for (int c = 0; c < 8; ++c)
                    corner[c] = remap[lin(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))];
                for (const auto& tet : kKuhnTets)
                    for (int v : tet) conn.push_back(corner[v]);
            }
        }
    }
    return Mesh(3, std::move(nodes), std::move(conn), std::move(boundary), std::move(groups));
}

std::vector<double> uniform_breaks(double lo, double hi, int cells) {
    std::vector<double> c(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i)
        c[i] = i == cells ? hi : lo + (hi - lo) * static_cast<double>(i) / cells;
    return c;
}

} // namespace

Mesh generate_box_wing(int nx, int ny, int nz, const std::array<double, 3>& lengths) {
    require(nx >= 1 && ny >= 1 && nz >= 1, "box cell counts must be >= 1");
    for (double l : lengths) require(l > 0.0, "box extents must be positive");
    TensorGrid g;
    const std::array<int, 3> n{nx, ny, nz};
    for (int a = 0; a < 3; ++a) g.coords[a] = uniform_breaks(0.0, lengths[a], n[a]);
    return build_tensor_mesh(g);
}

Mesh generate_tunnel(const TunnelSpec& spec) {
    require(spec.spacing > 0.0, "tunnel spacing must be positive");
    TensorGrid g;
    g.has_hole = true;
    for (int a = 0; a < 3; ++a) {
        const double L = spec.outer[a];
        const double lo = spec.inner_lo[a];
        const double hi = spec.inner_hi[a];
        require(L > 0.0, "tunnel outer extents must be positive");
        require(0.0 < lo && lo < hi && hi < L,
                "obstacle box must lie strictly inside the outer box (axis " + std::to_string(a) + ")");
        const auto cells = [&](double len) {
            return std::max(1, static_cast<int>(std::lround(len / spec.spacing)));
        };
        auto& c = g.coords[a];
        c = uniform_breaks(0.0, lo, cells(lo));
        auto mid = uniform_breaks(lo, hi, cells(hi - lo));
        c.insert(c.end(), mid.begin() + 1, mid.end());
        auto top = uniform_breaks(hi, L, cells(L - hi));
        c.insert(c.end(), top.begin() + 1, top.end());
        g.hole_lo[a] = cells(lo);
        g.hole_hi[a] = cells(lo) + cells(hi - lo);
    }
    return build_tensor_mesh(g);
}

Mesh generate_tunnel(const std::array<double, 3>& outer, const std::array<double, 3>& inner,
                     double spacing) {
    TunnelSpec spec;
    spec.outer = outer;
    spec.spacing = spacing;
    for (int a = 0; a < 3; ++a) {
        spec.inner_lo[a] = 0.5 * (outer[a] - inner[a]);
        spec.inner_hi[a] = 0.5 * (outer[a] + inner[a]);
    }
    return generate_tunnel(spec);
}

Mesh generate_rectangle(int nx, int ny, const std::array<double, 2>& lengths) {
    require(nx >= 1 && ny >= 1, "rectangle cell counts must be >= 1");
    require(lengths[0] > 0.0 && lengths[1] > 0.0, "rectangle extents must be positive");
    const auto xs = uniform_breaks(0.0, lengths[0], nx);
    const auto ys = uniform_breaks(0.0, lengths[1], ny);
    const auto id = [&](int i, int j) { return static_cast<NodeId>(j) * (nx + 1) + i; };

    std::vector<Point> nodes;
    NodeIds boundary;
    Groups groups;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            nodes.emplace_back(xs[i], ys[j], 0.0);
            const char* face = i == 0 ? "left" : i == nx ? "right" : j == 0 ? "bottom" : j == ny ? "top" : nullptr;
            if (face) {
                boundary.push_back(id(i, j));
                groups[face].push_back(id(i, j));
            }
        }
    }
    std::vector<NodeId> conn;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            conn.insert(conn.end(), {id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            conn.insert(conn.end(), {id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return Mesh(2, std::move(nodes), std::move(conn), std::move(boundary), std::move(groups));
}

} // namespace morphkit
