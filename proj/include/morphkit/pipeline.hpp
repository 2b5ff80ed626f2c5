#pragma once

#include "morphkit/idw.hpp"
#include "morphkit/laws.hpp"
#include "morphkit/pod.hpp"
#include "morphkit/selection.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace morphkit {

/// Law acting on every boundary node of `mesh`.
DisplacementLaw boundary_law(const Mesh& mesh, std::variant<BendLaw, RotationLaw, TabulatedLaw> kind,
                             std::vector<std::string> clamp_groups, Interval domain);

/// Selection phase, steps (i)-(ii): all boundary nodes when `params` is
/// empty (plain IDW), else the geometric selection, then the enrichment groups.
NodeIds select_controls(const Mesh& mesh, const std::optional<SelectionParams>& params,
                        const std::vector<std::string>& enrich_groups = {});

/// Selection phase, step (iii): operator from `controls` to the interior nodes.
IdwOperator assemble_interior(const Mesh& mesh, const NodeIds& controls, const IdwConfig& config = {});

struct MorphResult {
    DisplacementField boundary;  ///< law applied to every control in C
    DisplacementField interior;  ///< IDW extension to interior nodes
    Mesh deformed;
};

/// Deformation phase: boundary nodes take the law directly, interior nodes
/// the operator applied to the law restricted to the operator's controls.
MorphResult morph(const Mesh& mesh, const IdwOperator& op, const DisplacementLaw& law, double mu);

/// Interior deformation only (no mesh rebuild).
DisplacementField morph_interior(const Mesh& mesh, const IdwOperator& op, const DisplacementLaw& law, double mu);

/// Boundary and interior fields merged into one field over all nodes.
DisplacementField merge_fields(const Mesh& mesh, const DisplacementField& boundary,
                               const DisplacementField& interior);

/// Offline phase steps (b)-(e).
PodModel pod_offline(const Mesh& mesh, const IdwOperator& op, const DisplacementLaw& law,
                     std::span<const double> train, double eps, ProjectionMode mode);

/// Online phase steps (f)-(g) for parameter mu.
DisplacementField pod_online(const Mesh& mesh, const PodModel& model, const DisplacementLaw& law, double mu);

} // namespace morphkit
