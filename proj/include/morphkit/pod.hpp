#pragma once

#include "morphkit/idw.hpp"
#include "morphkit/laws.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace morphkit {

/// Singular values below rank_tol * sigma_1 are treated as zero, both for the
/// POD rank and for pseudo-inverse truncation.
inline constexpr double kRankTol = 1e-12;

/// Columns are flattened interior deformations, components interleaved per
/// node (x, y[, z]) in the operator's target order.
struct SnapshotSet {
    Matrix matrix;
    std::vector<double> params;
};

SnapshotSet build_snapshots(const IdwOperator& op, const DisplacementLaw& law, const Mesh& mesh,
                            std::span<const double> mu);

/// Energy fraction in the modes discarded after keeping the first `n`.
double discarded_energy(std::span<const double> sigma, std::size_t n);

/// First n >= 1 with discarded_energy(sigma, n) <= eps.
std::size_t energy_mode_count(std::span<const double> sigma, double eps);

struct PodBasis {
    Matrix basis;          ///< first N left singular vectors
    Vector singular_values;///< all sigma above the rank floor, descending
    std::size_t modes = 0; ///< N
    double energy_tol = 0.0;
};

/// Thin SVD of the snapshot matrix (Householder QR, then Jacobi SVD of the
/// small triangular factor) and energy-based truncation.
PodBasis compute_pod(const SnapshotSet& snapshots, double eps, double rank_tol = kRankTol);

/// Moore-Penrose pseudo-inverse through the SVD, singular values below
/// rank_tol * sigma_max zeroed.
Matrix pseudo_inverse(const Matrix& m, double rank_tol = kRankTol);

enum class ProjectionMode { Weighted, Plain };

ProjectionMode parse_projection(const std::string& name);
std::string to_string(ProjectionMode mode);

/// Offline artifact: basis plus the two matrices of the online system.
///
/// Weighted: lhs = Z^T K^T K Z, rhs_map = Z^T K^T with K the pseudo-inverse of
/// the IDW operator acting per component. Plain: lhs = I, rhs_map = Z^T W.
struct PodModel {
    int dim = 3;
    ProjectionMode mode = ProjectionMode::Weighted;
    Matrix basis;
    Vector singular_values;
    double energy_tol = 0.0;
    Matrix lhs;
    Matrix rhs_map;
    NodeIds target_ids;
    NodeIds control_ids;

    std::size_t modes() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

PodModel build_online(const PodBasis& pod, const IdwOperator& op, int dim, ProjectionMode mode,
                      double rank_tol = kRankTol);

/// Reduced coefficients beta(mu*) for control displacements `d_controls`.
Vector online_coefficients(const PodModel& model, const DisplacementField& d_controls);

/// Z beta(mu*), on the model's target nodes.
DisplacementField online_solve(const PodModel& model, const DisplacementField& d_controls);

/// Binary artifact: "POD1", u32 dim, u32 mode (0 weighted, 1 plain), u64 rows,
/// u64 N, u64 r, u64 n_controls; then Z (rows x N), sigma (r), lhs (N x N),
/// rhs_map (N x n_controls*dim), each column-major f64; then u64 target
/// count + ids and u64 control count + ids. Little-endian throughout.
void write_pod_binary(const PodModel& model, const std::filesystem::path& path);
PodModel read_pod_binary(const std::filesystem::path& path);

} // namespace morphkit
