#pragma once

#include "morphkit/types.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace morphkit {

using Groups = std::map<std::string, NodeIds>;

/// Per-node vector displacement restricted to a set of node indices.
/// `vectors[i]` belongs to node `indices[i]`.
class DisplacementField {
public:
    DisplacementField() = default;
    DisplacementField(NodeIds indices, std::vector<Point> vectors);

    /// Zero displacement on the given nodes.
    static DisplacementField zeros(NodeIds indices);

    const NodeIds& indices() const noexcept { return indices_; }
    const std::vector<Point>& vectors() const noexcept { return vectors_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

    /// Component-interleaved flattening (x0,y0[,z0],x1,...), `dim` components per node.
    Vector flatten(int dim) const;
    static DisplacementField unflatten(NodeIds indices, const Vector& flat, int dim);

    /// Subset of this field on `ids`; every id must be present.
    DisplacementField restrict_to(const NodeIds& ids) const;

private:
    NodeIds indices_;
    std::vector<Point> vectors_;
};

/// Simplicial mesh with a boundary/interior partition and named node groups.
/// Immutable after construction; the constructor validates every invariant.
class Mesh {
public:
    Mesh(int dim, std::vector<Point> nodes, std::vector<NodeId> connectivity, NodeIds boundary,
         Groups groups = {});

    int dim() const noexcept { return dim_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t element_count() const noexcept { return connectivity_.size() / nodes_per_element(); }
    std::size_t nodes_per_element() const noexcept { return static_cast<std::size_t>(dim_) + 1; }

    const std::vector<Point>& nodes() const noexcept { return nodes_; }
    const Point& node(NodeId i) const { return nodes_.at(i); }
    std::span<const NodeId> element(std::size_t e) const;
    const std::vector<NodeId>& connectivity() const noexcept { return connectivity_; }

    const NodeIds& boundary_ids() const noexcept { return boundary_; }
    const NodeIds& interior_ids() const noexcept { return interior_; }
    const Groups& groups() const noexcept { return groups_; }
    bool has_group(const std::string& name) const { return groups_.count(name) != 0; }
    /// Throws invalid-argument naming the group when it does not exist.
    const NodeIds& group(const std::string& name) const;

    std::pair<Point, Point> bounding_box() const;
    double bbox_diagonal() const;

    bool operator==(const Mesh& other) const;

private:
    int dim_;
    std::vector<Point> nodes_;
    std::vector<NodeId> connectivity_;
    NodeIds boundary_;
    NodeIds interior_;
    Groups groups_;
};

/// Q_e = longest edge / shortest edge of element `e`.
double element_quality(const Mesh& mesh, std::size_t e);

struct QualityStats {
    double max = 0.0;
    double mean = 0.0;
};

QualityStats mesh_quality(const Mesh& mesh);

/// New mesh with x_i + d_i on the covered nodes; connectivity untouched.
Mesh apply_deformation(const Mesh& mesh, const DisplacementField& d);

/// Node position moved by a displacement, used when only coordinates matter.
std::vector<Point> displaced_nodes(const Mesh& mesh, const DisplacementField& d);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Structured box [0,Lx]x[0,Ly]x[0,Lz], each hexahedral cell split into six tetrahedra.
///
/// The z axis is the longitudinal direction of the wing analogue: "left" is the
/// z = 0 face (the clamp) and "right" the z = Lz face. "bottom"/"top" are the
/// y faces and "front"/"rear" the x faces. Face groups are disjoint: a node on
/// several faces belongs to the first of left, right, bottom, top, front, rear.
/// Edge groups: "left_edge" and "right_edge" are the perimeters of the two end
/// faces, "horizontal_edges" the four edges running along z.
Mesh generate_box_wing(int nx, int ny, int nz, const std::array<double, 3>& lengths);

struct TunnelSpec {
    std::array<double, 3> outer{};    ///< outer box is [0,outer]
    std::array<double, 3> inner_lo{}; ///< obstacle box corners, strictly inside
    std::array<double, 3> inner_hi{};
    double spacing = 0.0;             ///< target cell size
};

/// Region between an outer box and an inner box-shaped obstacle. Outer face
/// groups follow generate_box_wing naming; the obstacle gets "obstacle" (all
/// of its surface), "obstacle_left", "obstacle_right", "obstacle_bottom",
/// "obstacle_top", "obstacle_front", "obstacle_rear" (disjoint, same priority),
/// "obstacle_left_edge", "obstacle_right_edge", "obstacle_horizontal_edges"
/// and "obstacle_edges" (all twelve edges). "outer" is every outer-face node.
Mesh generate_tunnel(const TunnelSpec& spec);

/// Convenience overload: obstacle of extents `inner` centred in the outer box.
Mesh generate_tunnel(const std::array<double, 3>& outer, const std::array<double, 3>& inner,
                     double spacing);

/// Structured triangulated rectangle [0,Lx]x[0,Ly] (dim = 2). Groups "left"
/// (x = 0), "right", "bottom", "top".
Mesh generate_rectangle(int nx, int ny, const std::array<double, 2>& lengths);

} // namespace morphkit
