#include "morphkit/laws.hpp"

#include "morphkit/error.hpp"
#include "morphkit/mesh_io.hpp"
#include "numeric_util.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <unordered_set>

namespace morphkit {

namespace {

struct Evaluator {
    const Mesh& mesh;
    const NodeIds& ids;
    double mu;

    std::vector<Point> operator()(const BendLaw& law) const {
        require(law.along >= 0 && law.along < mesh.dim() && law.direction >= 0 && law.direction < mesh.dim(),
                "bend law axes out of range for a " + std::to_string(mesh.dim()) + "D mesh");
        std::vector<Point> out(ids.size(), Point::Zero());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const double s = mesh.node(ids[i])(law.along) - law.origin;
            out[i](law.direction) = mu * s * s;
        }
        return out;
    }

    std::vector<Point> operator()(const RotationLaw& law) const {
        const double norm = law.axis.norm();
        require(norm > 0.0, "rotation axis must be nonzero");
        const double angle = mu * std::numbers::pi / 180.0;
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, law.axis / norm).toRotationMatrix();
        std::vector<Point> out(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const Point rel = mesh.node(ids[i]) - law.pivot;
            out[i] = rot * rel - rel;
            if (mesh.dim() == 2) out[i].z() = 0.0;
        }
        return out;
    }

    std::vector<Point> operator()(const TabulatedLaw& law) const {
        for (std::size_t k = 0; k < law.mu.size(); ++k) {
            if (law.mu[k] == mu) return law.fields.at(k).restrict_to(ids).vectors();
        }
        fail(ErrorCode::Lookup, "no tabulated displacement for mu = " + std::to_string(mu));
    }
};

} // namespace

DisplacementField evaluate(const DisplacementLaw& law, const Mesh& mesh, double mu) {
    if (!std::isfinite(mu) || !law.domain.contains(mu))
        fail(ErrorCode::Domain, "mu = " + std::to_string(mu) + " outside [" + std::to_string(law.domain.lo) +
                                    ", " + std::to_string(law.domain.hi) + "]");
    for (NodeId id : law.control_ids)
        require(id < mesh.node_count(), "law control id " + std::to_string(id) + " out of range");

    std::vector<Point> vectors = std::visit(Evaluator{mesh, law.control_ids, mu}, law.kind);

    if (!law.clamp_groups.empty()) {
        std::unordered_set<NodeId> clamped;
        for (const std::string& g : law.clamp_groups) {
            const NodeIds& ids = mesh.group(g);
            clamped.insert(ids.begin(), ids.end());
        }
        for (std::size_t i = 0; i < law.control_ids.size(); ++i)
            if (clamped.count(law.control_ids[i])) vectors[i].setZero();
    }
    return {law.control_ids, std::move(vectors)};
}

std::vector<double> sample_domain(const Interval& domain, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample count must be >= 1");
    require(std::isfinite(domain.lo) && std::isfinite(domain.hi) && domain.lo <= domain.hi,
            "empty parameter interval [" + std::to_string(domain.lo) + ", " + std::to_string(domain.hi) + "]");
    std::mt19937_64 rng(seed);
    std::vector<double> mu(n);
    for (double& m : mu) {
        m = domain.lo + (domain.hi - domain.lo) * detail::uniform_unit(rng);
        m = std::min(m, domain.hi);
    }
    return mu;
}

TabulatedLaw tabulated_from_json(const nlohmann::json& doc) {
    TabulatedLaw law;
    try {
        law.mu = doc.at("mu").get<std::vector<double>>();
        for (const auto& f : doc.at("fields")) law.fields.push_back(field_from_json(f));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Parse, std::string("tabulated law: ") + e.what());
    }
    if (law.mu.size() != law.fields.size())
        fail(ErrorCode::Parse, "tabulated law has " + std::to_string(law.mu.size()) + " mu values but " +
                                   std::to_string(law.fields.size()) + " fields");
    return law;
}

TabulatedLaw read_tabulated(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    try {
        return tabulated_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::Parse, path.string() + " at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

} // namespace morphkit
