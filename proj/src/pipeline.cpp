#include "morphkit/pipeline.hpp"

#include "morphkit/error.hpp"

namespace morphkit {

DisplacementLaw boundary_law(const Mesh& mesh, std::variant<BendLaw, RotationLaw, TabulatedLaw> kind,
                             std::vector<std::string> clamp_groups, Interval domain) {
    DisplacementLaw law;
    law.kind = std::move(kind);
    law.control_ids = mesh.boundary_ids();
    law.clamp_groups = std::move(clamp_groups);
    law.domain = domain;
    return law;
}

NodeIds select_controls(const Mesh& mesh, const std::optional<SelectionParams>& params,
                        const std::vector<std::string>& enrich_groups) {
    if (!params) return enrich(mesh.boundary_ids(), mesh, enrich_groups);
    return enrich(select_multi(mesh, *params).sorted(), mesh, enrich_groups);
}

IdwOperator assemble_interior(const Mesh& mesh, const NodeIds& controls, const IdwConfig& config) {
    return assemble(mesh, controls, mesh.interior_ids(), config);
}

DisplacementField merge_fields(const Mesh& mesh, const DisplacementField& boundary,
                               const DisplacementField& interior) {
    std::vector<Point> all(mesh.node_count(), Point::Zero());
    for (std::size_t i = 0; i < boundary.size(); ++i) all.at(boundary.indices()[i]) = boundary.vectors()[i];
    for (std::size_t i = 0; i < interior.size(); ++i) all.at(interior.indices()[i]) = interior.vectors()[i];
    NodeIds ids(mesh.node_count());
    for (NodeId i = 0; i < ids.size(); ++i) ids[i] = i;
    return {std::move(ids), std::move(all)};
}

DisplacementField morph_interior(const Mesh& mesh, const IdwOperator& op, const DisplacementLaw& law, double mu) {
    return deform(op, evaluate(law, mesh, mu).restrict_to(op.control_ids()));
}

MorphResult morph(const Mesh& mesh, const IdwOperator& op, const DisplacementLaw& law, double mu) {
    DisplacementField boundary = evaluate(law, mesh, mu);
    DisplacementField interior = deform(op, boundary.restrict_to(op.control_ids()));
    Mesh deformed = apply_deformation(mesh, merge_fields(mesh, boundary, interior));
    return {std::move(boundary), std::move(interior), std::move(deformed)};
}

PodModel pod_offline(const Mesh& mesh, const IdwOperator& op, const DisplacementLaw& law,
                     std::span<const double> train, double eps, ProjectionMode mode) {
    const SnapshotSet snapshots = build_snapshots(op, law, mesh, train);
    return build_online(compute_pod(snapshots, eps), op, mesh.dim(), mode);
}

DisplacementField pod_online(const Mesh& mesh, const PodModel& model, const DisplacementLaw& law, double mu) {
    return online_solve(model, evaluate(law, mesh, mu).restrict_to(model.control_ids));
}

} // namespace morphkit
