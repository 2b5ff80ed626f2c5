#pragma once

#include "morphkit/mesh.hpp"

#include <filesystem>
#include <span>

namespace morphkit {

struct IdwConfig {
    int p = 4;
    /// Absolute length; a target this close to a control takes that control's
    /// value. Negative means "1e-12 x bounding-box diagonal" resolved at assembly.
    double coincidence_tol = -1.0;
};

/// w_k(x) for every control. Within `coincidence_tol` of a control the
/// result is the indicator of the nearest one (lowest index on ties).
/// Evaluated through (d_min/d_k)^p so near-coincident points cannot overflow.
Vector weights_at(const Point& x, std::span<const Point> controls, const IdwConfig& config);

/// Dense IDW interpolation operator: row i holds the weights of target i.
class IdwOperator {
public:
    IdwOperator(RowMatrix matrix, NodeIds target_ids, NodeIds control_ids, IdwConfig config);

    const RowMatrix& matrix() const noexcept { return matrix_; }
    const NodeIds& target_ids() const noexcept { return target_ids_; }
    const NodeIds& control_ids() const noexcept { return control_ids_; }
    const IdwConfig& config() const noexcept { return config_; }
    std::size_t rows() const noexcept { return target_ids_.size(); }
    std::size_t cols() const noexcept { return control_ids_.size(); }

private:
    RowMatrix matrix_;
    NodeIds target_ids_;
    NodeIds control_ids_;
    IdwConfig config_;
};

IdwOperator assemble(const Mesh& mesh, const NodeIds& control_ids, const NodeIds& target_ids,
                     const IdwConfig& config = {});

/// d_targets = W d_controls, per spatial component. `d_controls` must list
/// exactly the operator's control ids in the same order.
DisplacementField deform(const IdwOperator& op, const DisplacementField& d_controls);

/// Binary dump: "IDW1", u64 rows, u64 cols, u32 p, then rows*cols f64 row-major,
/// all little-endian.
void write_idw_binary(const IdwOperator& op, const std::filesystem::path& path);

struct IdwDump {
    RowMatrix matrix;
    int p = 0;
};
IdwDump read_idw_binary(const std::filesystem::path& path);

} // namespace morphkit
