#include "morphkit/pod.hpp"

#include "binary_io.hpp"
#include "morphkit/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace morphkit {

SnapshotSet build_snapshots(const IdwOperator& op, const DisplacementLaw& law, const Mesh& mesh,
                            std::span<const double> mu) {
    require(!mu.empty(), "snapshot set needs at least one training parameter");
    const int dim = mesh.dim();
    SnapshotSet s;
    s.params.assign(mu.begin(), mu.end());
    s.matrix.resize(static_cast<Eigen::Index>(op.rows()) * dim, static_cast<Eigen::Index>(mu.size()));
    for (std::size_t n = 0; n < mu.size(); ++n) {
        try {
            const DisplacementField dc = evaluate(law, mesh, mu[n]).restrict_to(op.control_ids());
            s.matrix.col(static_cast<Eigen::Index>(n)) = deform(op, dc).flatten(dim);
        } catch (const Error& e) {
            throw Error(e.code(), "snapshot " + std::to_string(n) + " (mu = " + std::to_string(mu[n]) +
                                      "): " + e.what());
        }
    }
    return s;
}

double discarded_energy(std::span<const double> sigma, std::size_t n) {
    double tail = 0.0;
    double total = 0.0;
    // Smallest first so tiny tails are not swamped.
    for (std::size_t i = sigma.size(); i-- > 0;) {
        const double e = sigma[i] * sigma[i];
        total += e;
        if (i >= n) tail += e;
    }
    require(total > 0.0, "energy of an all-zero spectrum is undefined");
    return tail / total;
}

std::size_t energy_mode_count(std::span<const double> sigma, double eps) {
    require(!sigma.empty(), "empty spectrum");
    for (std::size_t n = 1; n <= sigma.size(); ++n)
        if (discarded_energy(sigma, n) <= eps) return n;
    return sigma.size();
}

PodBasis compute_pod(const SnapshotSet& snapshots, double eps, double rank_tol) {
    const Matrix& u = snapshots.matrix;
    require(u.cols() >= 1, "POD needs at least one snapshot");
    require(eps > 0.0 && eps < 1.0, "energy tolerance must lie in (0,1)");
    if (!u.allFinite()) fail(ErrorCode::NonFinite, "snapshot matrix has non-finite entries");
    if (u.cwiseAbs().maxCoeff() == 0.0) fail(ErrorCode::DegenerateSnapshots, "all snapshots are zero");

    Matrix left;
    Vector sigma;
    if (u.rows() >= u.cols()) {
        const Eigen::HouseholderQR<Matrix> qr(u);
        const Matrix r = qr.matrixQR().topRows(u.cols()).triangularView<Eigen::Upper>();
        const Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeFullU);
        left = qr.householderQ() * (Matrix::Identity(u.rows(), u.cols()) * svd.matrixU());
        sigma = svd.singularValues();
    } else {
        const Eigen::JacobiSVD<Matrix> svd(u, Eigen::ComputeThinU);
        left = svd.matrixU();
        sigma = svd.singularValues();
    }

    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > rank_tol * sigma(0)) ++rank;

    PodBasis pod;
    pod.singular_values = sigma.head(rank);
    pod.energy_tol = eps;
    pod.modes = energy_mode_count({pod.singular_values.data(), static_cast<std::size_t>(rank)}, eps);
    pod.basis = left.leftCols(static_cast<Eigen::Index>(pod.modes));
    return pod;
}

Matrix pseudo_inverse(const Matrix& m, double rank_tol) {
    if (!m.allFinite()) fail(ErrorCode::NonFinite, "pseudo-inverse input has non-finite entries");
    if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
    const Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double floor = rank_tol * (s.size() > 0 ? s(0) : 0.0);
    Vector inv = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > floor) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ProjectionMode parse_projection(const std::string& name) {
    if (name == "weighted") return ProjectionMode::Weighted;
    if (name == "plain") return ProjectionMode::Plain;
    fail(ErrorCode::InvalidArgument, "unknown projection mode '" + name + "'");
}

std::string to_string(ProjectionMode mode) {
    return mode == ProjectionMode::Weighted ? "weighted" : "plain";
}

namespace {

/// Applies `scalar` (acting on node values) to each component of the
/// interleaved columns of `z`: returns (scalar (x) I_dim) z.
Matrix per_component(const Matrix& scalar, const Matrix& z, int dim) {
    const Eigen::Index in_nodes = scalar.cols();
    const Eigen::Index out_nodes = scalar.rows();
    require(z.rows() == in_nodes * dim, "basis row count does not match the operator");
    Matrix out(out_nodes * dim, z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const Eigen::Map<const RowMatrix> col(z.col(j).data(), in_nodes, dim);
        const RowMatrix mapped = scalar * col;
        out.col(j) = Eigen::Map<const Vector>(mapped.data(), out_nodes * dim);
    }
    return out;
}

} // namespace

PodModel build_online(const PodBasis& pod, const IdwOperator& op, int dim, ProjectionMode mode,
                      double rank_tol) {
    require(pod.basis.cols() >= 1, "POD basis has no modes");
    require(pod.basis.rows() == static_cast<Eigen::Index>(op.rows()) * dim,
            "POD basis rows do not match operator targets x dim");
    PodModel model;
    model.dim = dim;
    model.mode = mode;
    model.basis = pod.basis;
    model.singular_values = pod.singular_values;
    model.energy_tol = pod.energy_tol;
    model.target_ids = op.target_ids();
    model.control_ids = op.control_ids();

    const Eigen::Index n = pod.basis.cols();
    if (mode == ProjectionMode::Weighted) {
        const Matrix w = op.matrix();
        const Matrix k = pseudo_inverse(w, rank_tol);
        const Matrix kz = per_component(k, pod.basis, dim);
        const Eigen::JacobiSVD<Matrix> svd(kz);
        const Vector& s = svd.singularValues();
        const double smin = s.size() == n ? s(n - 1) : 0.0;
        // Relative to the size of K as well: a basis K annihilates leaves only round-off in KZ.
        const double scale = std::max(s.size() > 0 ? s(0) : 0.0, k.norm() * pod.basis.norm());
        if (!(smin > rank_tol * scale)) {
            std::ostringstream msg;
            msg << "pseudo-inverse times basis is rank deficient (smallest singular value " << smin << ")";
            fail(ErrorCode::IllPosedOnline, msg.str());
        }
        model.rhs_map = kz.transpose();
        model.lhs = kz.transpose() * kz;
    } else {
        const Matrix wt = op.matrix().transpose();
        model.rhs_map = per_component(wt, pod.basis, dim).transpose();
        model.lhs = Matrix::Identity(n, n);
    }
    return model;
}

Vector online_coefficients(const PodModel& model, const DisplacementField& d_controls) {
    require(d_controls.indices() == model.control_ids,
            "control displacement does not match the model's control ids");
    const Vector rhs = model.rhs_map * d_controls.flatten(model.dim);
    if (model.mode == ProjectionMode::Plain) return rhs;
    const Eigen::LLT<Matrix> llt(model.lhs);
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::IllConditionedOnline, "online system is not positive definite");
    return llt.solve(rhs);
}

DisplacementField online_solve(const PodModel& model, const DisplacementField& d_controls) {
    const Vector beta = online_coefficients(model, d_controls);
    return DisplacementField::unflatten(model.target_ids, model.basis * beta, model.dim);
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

void put_matrix(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) detail::put<double>(out, m.data()[i]);
}

Matrix get_matrix(std::istream& in, std::uint64_t rows, std::uint64_t cols, const std::string& what) {
    if (cols != 0 && rows > UINT64_MAX / cols) fail(ErrorCode::Parse, "implausible " + what + " dimensions");
    detail::ensure_available(in, rows * cols, sizeof(double), what);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = detail::get<double>(in, what);
    return m;
}

void put_ids(std::ostream& out, const NodeIds& ids) {
    detail::put<std::uint64_t>(out, ids.size());
    for (NodeId id : ids) detail::put<std::uint64_t>(out, id);
}

NodeIds get_ids(std::istream& in, const std::string& what) {
    const auto n = detail::get<std::uint64_t>(in, what);
    detail::ensure_available(in, n, sizeof(std::uint64_t), what);
    NodeIds ids;
    for (std::uint64_t i = 0; i < n; ++i) ids.push_back(detail::get<std::uint64_t>(in, what));
    return ids;
}

} // namespace

void write_pod_binary(const PodModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out.write("POD1", 4);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(model.dim));
    detail::put<std::uint32_t>(out, model.mode == ProjectionMode::Weighted ? 0u : 1u);
    detail::put<std::uint64_t>(out, model.basis.rows());
    detail::put<std::uint64_t>(out, model.basis.cols());
    detail::put<std::uint64_t>(out, model.singular_values.size());
    detail::put<std::uint64_t>(out, model.control_ids.size());
    put_matrix(out, model.basis);
    put_matrix(out, model.singular_values);
    put_matrix(out, model.lhs);
    put_matrix(out, model.rhs_map);
    put_ids(out, model.target_ids);
    put_ids(out, model.control_ids);
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

PodModel read_pod_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    detail::expect_magic(in, "POD1");
    PodModel m;
    m.dim = static_cast<int>(detail::get<std::uint32_t>(in, "dim"));
    const auto mode = detail::get<std::uint32_t>(in, "mode");
    if (mode > 1) fail(ErrorCode::Parse, "unknown projection mode flag " + std::to_string(mode));
    m.mode = mode == 0 ? ProjectionMode::Weighted : ProjectionMode::Plain;
    const auto rows = detail::get<std::uint64_t>(in, "rows");
    const auto n = detail::get<std::uint64_t>(in, "modes");
    const auto r = detail::get<std::uint64_t>(in, "rank");
    const auto nc = detail::get<std::uint64_t>(in, "controls");
    m.basis = get_matrix(in, rows, n, "basis");
    m.singular_values = get_matrix(in, r, 1, "singular values");
    m.lhs = get_matrix(in, n, n, "online lhs");
    m.rhs_map = get_matrix(in, n, nc * static_cast<std::uint64_t>(m.dim), "online rhs map");
    m.target_ids = get_ids(in, "target ids");
    m.control_ids = get_ids(in, "control ids");
    if (m.target_ids.size() * static_cast<std::size_t>(m.dim) != rows || m.control_ids.size() != nc)
        fail(ErrorCode::Parse, "POD artifact id lists do not match its dimensions");
    return m;
}

} // namespace morphkit
