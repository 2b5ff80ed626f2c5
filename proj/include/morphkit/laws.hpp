#pragma once

#include "morphkit/mesh.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace morphkit {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double mu) const { return mu >= lo && mu <= hi; }
};

/// Polynomial bend: component `direction` gets mu * (x[along] - origin)^2.
/// Defaults give the wing law dy = mu z^2 with z measured from the clamp.
struct BendLaw {
    int along = 2;
    int direction = 1;
    double origin = 0.0;
};

/// Rigid rotation by mu degrees, right-handed about `axis` through `pivot`.
struct RotationLaw {
    Point axis = Point::UnitZ();
    Point pivot = Point::Zero();
};

/// Displacements given per parameter value.
struct TabulatedLaw {
    std::vector<double> mu;
    std::vector<DisplacementField> fields;
};

struct DisplacementLaw {
    std::variant<BendLaw, RotationLaw, TabulatedLaw> kind;
    NodeIds control_ids;
    std::vector<std::string> clamp_groups;
    Interval domain;
};

/// Control displacements d_c(mu) over `law.control_ids`, clamped groups zeroed.
DisplacementField evaluate(const DisplacementLaw& law, const Mesh& mesh, double mu);

/// n i.i.d. uniform samples in `domain`, reproducible from `seed`.
std::vector<double> sample_domain(const Interval& domain, std::size_t n, std::uint64_t seed);

/// {"mu":[...],"fields":[{"indices":[...],"vectors":[[...]]},...]}
TabulatedLaw tabulated_from_json(const nlohmann::json& doc);
TabulatedLaw read_tabulated(const std::filesystem::path& path);

} // namespace morphkit
