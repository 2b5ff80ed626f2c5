#include "morphkit/idw.hpp"

#include "binary_io.hpp"
#include "geometry.hpp"
#include "morphkit/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace morphkit {

namespace {

void check_config(const IdwConfig& config) {
    require(config.p >= 1, "IDW exponent p must be >= 1, got " + std::to_string(config.p));
}

double resolve_tol(const IdwConfig& config, double diagonal) {
    return config.coincidence_tol >= 0.0 ? config.coincidence_tol : 1e-12 * diagonal;
}

/// Integer power by squaring.
double ipow(double base, int e) {
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/// Writes the weight row of `x` into `out`; returns the index of the
/// coinciding control or -1.
std::ptrdiff_t weight_row(const Point& x, std::span<const Point> controls, int p, double tol,
                          double* out) {
    const std::size_t k = controls.size();
    double d2min = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const double d2 = (x - controls[j]).squaredNorm();
        out[j] = d2;
        if (d2 < d2min) {
            d2min = d2;
            nearest = j;
        }
    }
    if (std::sqrt(d2min) <= tol) {
        for (std::size_t j = 0; j < k; ++j) out[j] = 0.0;
        out[nearest] = 1.0;
        return static_cast<std::ptrdiff_t>(nearest);
    }
    const int half = p / 2;
    const bool odd = (p % 2) != 0;
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double ratio = d2min / out[j];
        double w = ipow(ratio, half);
        if (odd) w *= std::sqrt(ratio);
        out[j] = w;
        sum += w;
    }
    const double inv = 1.0 / sum;
    for (std::size_t j = 0; j < k; ++j) out[j] *= inv;
    return -1;
}

void check_distinct_controls(std::span<const Point> controls, double tol) {
    if (auto pair = detail::find_coincident_pair(controls, tol))
        fail(ErrorCode::InvalidArgument, "control points " + std::to_string(pair->first) + " and " +
                                             std::to_string(pair->second) + " coincide");
}

} // namespace

Vector weights_at(const Point& x, std::span<const Point> controls, const IdwConfig& config) {
    check_config(config);
    require(!controls.empty(), "IDW needs at least one control point");
    std::vector<Point> all(controls.begin(), controls.end());
    all.push_back(x);
    const double tol = resolve_tol(config, detail::bbox_diagonal(all));
    check_distinct_controls(controls, tol);
    Vector w(static_cast<Eigen::Index>(controls.size()));
    weight_row(x, controls, config.p, tol, w.data());
    return w;
}

IdwOperator::IdwOperator(RowMatrix matrix, NodeIds target_ids, NodeIds control_ids, IdwConfig config)
    : matrix_(std::move(matrix)), target_ids_(std::move(target_ids)),
      control_ids_(std::move(control_ids)), config_(config) {
    require(matrix_.rows() == static_cast<Eigen::Index>(target_ids_.size()) &&
                matrix_.cols() == static_cast<Eigen::Index>(control_ids_.size()),
            "IDW matrix shape does not match target/control id lists");
}

IdwOperator assemble(const Mesh& mesh, const NodeIds& control_ids, const NodeIds& target_ids,
                     const IdwConfig& config) {
    check_config(config);
    require(!control_ids.empty(), "IDW needs at least one control point");
    const std::size_t n = mesh.node_count();
    for (NodeId c : control_ids) require(c < n, "control id " + std::to_string(c) + " out of range");
    for (NodeId t : target_ids) require(t < n, "target id " + std::to_string(t) + " out of range");

    IdwConfig resolved = config;
    resolved.coincidence_tol = resolve_tol(config, mesh.bbox_diagonal());

    std::vector<Point> controls;
    controls.reserve(control_ids.size());
    for (NodeId c : control_ids) controls.push_back(mesh.node(c));
    if (auto pair = detail::find_coincident_pair(controls, resolved.coincidence_tol))
        fail(ErrorCode::InvalidArgument, "control columns " + std::to_string(pair->first) + " and " +
                                             std::to_string(pair->second) + " (nodes " +
                                             std::to_string(control_ids[pair->first]) + ", " +
                                             std::to_string(control_ids[pair->second]) + ") coincide");

    RowMatrix w(static_cast<Eigen::Index>(target_ids.size()), static_cast<Eigen::Index>(controls.size()));
    for (std::size_t i = 0; i < target_ids.size(); ++i) {
        const auto hit = weight_row(mesh.node(target_ids[i]), controls, resolved.p,
                                    resolved.coincidence_tol, w.row(static_cast<Eigen::Index>(i)).data());
        if (hit >= 0)
            fail(ErrorCode::InvalidArgument,
                 "target row " + std::to_string(i) + " (node " + std::to_string(target_ids[i]) +
                     ") coincides with control column " + std::to_string(hit) + " (node " +
                     std::to_string(control_ids[static_cast<std::size_t>(hit)]) + ")");
    }
    return {std::move(w), target_ids, control_ids, resolved};
}

DisplacementField deform(const IdwOperator& op, const DisplacementField& d_controls) {
    require(d_controls.indices() == op.control_ids(),
            "control displacement does not match the operator's control ids (" +
                std::to_string(d_controls.size()) + " vs " + std::to_string(op.cols()) + ")");
    Eigen::Matrix<double, Eigen::Dynamic, 3> dc(static_cast<Eigen::Index>(op.cols()), 3);
    for (std::size_t k = 0; k < op.cols(); ++k) dc.row(static_cast<Eigen::Index>(k)) = d_controls.vectors()[k];
    const Eigen::Matrix<double, Eigen::Dynamic, 3> dt = op.matrix() * dc;
    std::vector<Point> out(op.rows());
    for (std::size_t i = 0; i < op.rows(); ++i) out[i] = dt.row(static_cast<Eigen::Index>(i)).transpose();
    return {op.target_ids(), std::move(out)};
}

void write_idw_binary(const IdwOperator& op, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out.write("IDW1", 4);
    detail::put<std::uint64_t>(out, op.rows());
    detail::put<std::uint64_t>(out, op.cols());
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(op.config().p));
    const RowMatrix& m = op.matrix();
    for (Eigen::Index i = 0; i < m.size(); ++i) detail::put<double>(out, m.data()[i]);
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

IdwDump read_idw_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    detail::expect_magic(in, "IDW1");
    const auto rows = detail::get<std::uint64_t>(in, "rows");
    const auto cols = detail::get<std::uint64_t>(in, "cols");
    IdwDump dump;
    dump.p = static_cast<int>(detail::get<std::uint32_t>(in, "p"));
    if (cols != 0 && rows > UINT64_MAX / cols) fail(ErrorCode::Parse, "implausible matrix dimensions");
    detail::ensure_available(in, rows * cols, sizeof(double), "matrix");
    dump.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < dump.matrix.size(); ++i) dump.matrix.data()[i] = detail::get<double>(in, "matrix");
    return dump;
}

} // namespace morphkit
