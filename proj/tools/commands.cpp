#include "commands.hpp"

#include "morphkit/error.hpp"
#include "morphkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace morphkit::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

fs::path prepare_out(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory " + config.out_dir.string() + ": " + ec.message());
    return config.out_dir;
}

void write_json(const json& doc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

void write_csv(const std::vector<ComparisonReport>& rows, const fs::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << report_csv_header() << '\n';
    for (const auto& r : rows) out << report_csv_row(r) << '\n';
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

ComparisonReport base_report(const RunConfig& config, std::size_t card) {
    ComparisonReport r;
    r.method = config.method();
    if (config.selection) {
        r.radius = config.selection->regions.empty() ? 0.0 : config.selection->regions.front().radius;
        r.a = config.selection->a;
        r.b = config.selection->b;
    }
    r.card_c_hat = card;
    r.relative_error = kNaN;
    return r;
}

/// Full-IDW interior deformation, the reference every comparison uses.
DisplacementField reference_field(const Mesh& mesh, const DisplacementLaw& law, const IdwConfig& idw, double mu) {
    return morph_interior(mesh, assemble_interior(mesh, mesh.boundary_ids(), idw), law, mu);
}

void fill_quality(ComparisonReport& r, const Mesh& deformed) {
    const QualityStats q = mesh_quality(deformed);
    r.max_quality = q.max;
    r.mean_quality = q.mean;
}

void write_morph_outputs(const fs::path& dir, const Mesh& mesh, const DisplacementField& boundary,
                         const DisplacementField& interior, const ComparisonReport& report) {
    const DisplacementField all = merge_fields(mesh, boundary, interior);
    const Mesh deformed = apply_deformation(mesh, all);
    write_mesh(deformed, dir / "deformed.json", MeshFormat::NativeJson);
    {
        std::ofstream vtk(dir / "deformed.vtk");
        if (!vtk) fail(ErrorCode::Io, "cannot write " + (dir / "deformed.vtk").string());
        write_vtk(vtk, deformed, &all);
    }
    write_json(report_to_json(report), dir / "report.json");
    write_csv({report}, dir / "report.csv");
}

void print_report(std::ostream& log, const ComparisonReport& r) {
    log << r.method << ": card(C_hat) = " << r.card_c_hat;
    if (r.n_modes > 0) log << ", N = " << r.n_modes;
    if (!std::isnan(r.relative_error)) log << ", relative error = " << r.relative_error;
    log << ", max Q = " << r.max_quality << ", mean Q = " << r.mean_quality << '\n';
}

std::vector<double> training_set(const RunConfig& config, const DisplacementLaw& law) {
    if (!config.pod.train.empty()) return config.pod.train;
    return sample_domain(law.domain, config.pod.n_train, config.pod.seed);
}

NodeIds region_pool(const Mesh& mesh, const SelectionParams& params) {
    NodeIds pool;
    for (const auto& r : params.regions) {
        const NodeIds& g = mesh.group(r.group);
        pool.insert(pool.end(), g.begin(), g.end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

} // namespace

SelectOutput cmd_select(const RunConfig& config, std::ostream& log) {
    const Mesh mesh = build_mesh(config);
    SelectOutput out;
    if (config.selection) {
        out.geometric = select_multi(mesh, *config.selection);
        out.selected = enrich(out.geometric.sorted(), mesh, config.enrich);
    } else {
        out.selected = enrich(mesh.boundary_ids(), mesh, config.enrich);
    }

    json trace = json::array();
    for (const auto& t : out.geometric.trace)
        trace.push_back({{"node", t.node}, {"beta_size", t.beta_size}, {"annulus", t.annulus}});
    json doc{{"selected", out.selected},
             {"node_count", mesh.node_count()},
             {"params", config.selection ? selection_params_to_json(*config.selection) : json(nullptr)},
             {"enrich", config.enrich},
             {"trace", std::move(trace)}};
    out.file = prepare_out(config) / "selection.json";
    write_json(doc, out.file);
    log << "card(C) = " << mesh.boundary_ids().size() << ", card(C_hat) = " << out.selected.size() << '\n';
    return out;
}

NodeIds read_selection(const fs::path& path, const Mesh& mesh) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open selection " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, path.string() + " at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (doc.contains("node_count") && doc.at("node_count").get<std::size_t>() != mesh.node_count())
        fail(ErrorCode::InvalidArgument, "selection " + path.string() + " was made for a mesh with " +
                                             doc.at("node_count").dump() + " nodes, this mesh has " +
                                             std::to_string(mesh.node_count()));
    if (!doc.contains("selected")) fail(ErrorCode::Parse, path.string() + ": missing field 'selected'");
    auto ids = doc.at("selected").get<NodeIds>();
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const NodeIds& boundary = mesh.boundary_ids();
    for (NodeId id : ids)
        if (!std::binary_search(boundary.begin(), boundary.end(), id))
            fail(ErrorCode::InvalidArgument, "selected node " + std::to_string(id) + " is not a boundary node");
    if (ids.empty()) fail(ErrorCode::InvalidArgument, "selection " + path.string() + " is empty");
    return ids;
}

ComparisonReport cmd_morph(const RunConfig& config, const std::optional<fs::path>& selection_file,
                           std::ostream& log) {
    const Mesh mesh = build_mesh(config);
    const DisplacementLaw law = build_law(config, mesh);
    if (!law.domain.contains(config.mu))
        fail(ErrorCode::Domain, "mu* = " + std::to_string(config.mu) + " lies outside the law domain");

    const NodeIds controls = selection_file ? read_selection(*selection_file, mesh)
                                            : select_controls(mesh, config.selection, config.enrich);
    ComparisonReport report = base_report(config, controls.size());
    if (selection_file) report.method = controls.size() == mesh.boundary_ids().size() ? "IDW" : "SIDW";

    std::optional<IdwOperator> op;
    report.t_assembly_s = mean_seconds([&] { op.emplace(assemble_interior(mesh, controls, config.idw)); },
                                       config.repeat);
    MorphResult result = morph(mesh, *op, law, config.mu);
    report.t_deform_s = mean_seconds([&] { (void)morph_interior(mesh, *op, law, config.mu); }, config.repeat);
    fill_quality(report, result.deformed);
    if (config.reference_idw)
        report.relative_error = relative_error(result.interior, reference_field(mesh, law, config.idw, config.mu));

    write_morph_outputs(prepare_out(config), mesh, result.boundary, result.interior, report);
    print_report(log, report);
    return report;
}

OfflineOutput cmd_pod_offline(const RunConfig& config, std::ostream& log) {
    const Mesh mesh = build_mesh(config);
    const DisplacementLaw law = build_law(config, mesh);
    const std::vector<double> train = training_set(config, law);

    OfflineOutput out;
    std::optional<IdwOperator> op;
    out.t_offline_s = mean_seconds(
        [&] {
            const NodeIds controls = select_controls(mesh, config.selection, config.enrich);
            op.emplace(assemble_interior(mesh, controls, config.idw));
            out.model = pod_offline(mesh, *op, law, train, config.pod.epsilon, config.pod.projection);
        },
        1);

    const fs::path dir = prepare_out(config);
    out.artifact = dir / "pod.bin";
    write_pod_binary(out.model, out.artifact);
    std::vector<double> sigma(out.model.singular_values.data(),
                              out.model.singular_values.data() + out.model.singular_values.size());
    json sidecar{{"epsilon", config.pod.epsilon},
                 {"modes", out.model.modes()},
                 {"singular_values", sigma},
                 {"projection", to_string(config.pod.projection)},
                 {"train", train},
                 {"method", config.method()},
                 {"card_C_hat", out.model.control_ids.size()},
                 {"selection", config.selection ? selection_params_to_json(*config.selection) : json(nullptr)},
                 {"enrich", config.enrich},
                 {"t_offline_s", out.t_offline_s}};
    write_json(sidecar, dir / "pod.json");
    log << "POD-" << config.method() << ": N = " << out.model.modes() << " of rank " << sigma.size()
        << ", card(C_hat) = " << out.model.control_ids.size() << ", offline " << out.t_offline_s << " s\n";
    return out;
}

ComparisonReport cmd_pod_online(const RunConfig& config, const fs::path& artifact, std::ostream& log) {
    const Mesh mesh = build_mesh(config);
    const DisplacementLaw law = build_law(config, mesh);
    const PodModel model = read_pod_binary(artifact);
    if (model.dim != mesh.dim() || model.target_ids != mesh.interior_ids())
        fail(ErrorCode::InvalidArgument, "POD artifact " + artifact.string() + " does not match the configured mesh");
    for (NodeId id : model.control_ids)
        if (!std::binary_search(mesh.boundary_ids().begin(), mesh.boundary_ids().end(), id))
            fail(ErrorCode::InvalidArgument, "POD artifact control " + std::to_string(id) + " is not a boundary node");
    if (!law.domain.contains(config.mu))
        fail(ErrorCode::Domain, "mu* = " + std::to_string(config.mu) + " lies outside the law domain");

    ComparisonReport report = base_report(config, model.control_ids.size());
    report.method = "POD-" + report.method;
    report.n_modes = model.modes();
    const fs::path sidecar = fs::path(artifact).replace_extension(".json");
    if (fs::exists(sidecar)) {
        std::ifstream in(sidecar);
        const json doc = json::parse(in, nullptr, false);
        if (!doc.is_discarded() && doc.contains("t_offline_s")) report.t_offline_s = doc.at("t_offline_s").get<double>();
    }

    DisplacementField interior;
    report.t_online_s = mean_seconds([&] { interior = pod_online(mesh, model, law, config.mu); }, config.repeat);
    const DisplacementField boundary = evaluate(law, mesh, config.mu);
    fill_quality(report, apply_deformation(mesh, merge_fields(mesh, boundary, interior)));
    if (config.reference_idw)
        report.relative_error = relative_error(interior, reference_field(mesh, law, config.idw, config.mu));

    write_morph_outputs(prepare_out(config), mesh, boundary, interior, report);
    print_report(log, report);
    return report;
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "R") return SweepAxis::Radius;
    if (name == "a") return SweepAxis::A;
    if (name == "b") return SweepAxis::B;
    if (name == "mu") return SweepAxis::Mu;
    fail(ErrorCode::InvalidArgument, "unknown sweep axis '" + name + "' (expected R, a, b or mu)");
}

std::vector<ComparisonReport> cmd_sweep(const RunConfig& config, SweepAxis axis, const std::vector<double>& values,
                                        bool couple_b, std::ostream& log) {
    require(!values.empty(), "sweep needs at least one value");
    if (axis != SweepAxis::Mu)
        require(config.selection.has_value(), "an R, a or b sweep needs a selection section in the config");
    const Mesh mesh = build_mesh(config);
    const DisplacementLaw law = build_law(config, mesh);

    std::optional<IdwOperator> full;
    if (axis != SweepAxis::Mu) full.emplace(assemble_interior(mesh, mesh.boundary_ids(), config.idw));

    std::vector<ComparisonReport> rows;
    for (double v : values) {
        RunConfig c = config;
        switch (axis) {
        case SweepAxis::Radius:
            for (auto& r : c.selection->regions) r.radius = v;
            break;
        case SweepAxis::A:
            c.selection->a = v;
            if (couple_b) {
                require(v > 0.0, "b = 1/a needs a > 0");
                c.selection->b = 1.0 / v;
            }
            break;
        case SweepAxis::B: c.selection->b = v; break;
        case SweepAxis::Mu: c.mu = v; break;
        }
        const NodeIds controls = select_controls(mesh, c.selection, c.enrich);
        ComparisonReport report = base_report(c, controls.size());
        std::optional<IdwOperator> op;
        report.t_assembly_s =
            mean_seconds([&] { op.emplace(assemble_interior(mesh, controls, c.idw)); }, c.repeat);
        const MorphResult result = morph(mesh, *op, law, c.mu);
        report.t_deform_s = mean_seconds([&] { (void)morph_interior(mesh, *op, law, c.mu); }, c.repeat);
        fill_quality(report, result.deformed);
        const DisplacementField ref = full ? morph_interior(mesh, *full, law, c.mu)
                                           : reference_field(mesh, law, c.idw, c.mu);
        report.relative_error = relative_error(result.interior, ref);
        log << "value " << v << ": ";
        print_report(log, report);
        rows.push_back(std::move(report));
    }
    write_csv(rows, prepare_out(config) / "sweep.csv");
    return rows;
}

BaselineOutput cmd_random_baseline(const RunConfig& config, std::size_t draws, std::uint64_t master_seed,
                                   std::ostream& log) {
    require(config.selection.has_value(), "random baseline needs a selection section in the config");
    require(draws >= 2, "random baseline needs at least 2 draws");
    const Mesh mesh = build_mesh(config);
    const DisplacementLaw law = build_law(config, mesh);
    const DisplacementField ref = reference_field(mesh, law, config.idw, config.mu);

    const NodeIds geometric = select_multi(mesh, *config.selection).sorted();
    const NodeIds pool = region_pool(mesh, *config.selection);
    auto error_of = [&](const NodeIds& picked) {
        const IdwOperator op = assemble_interior(mesh, enrich(picked, mesh, config.enrich), config.idw);
        return relative_error(morph_interior(mesh, op, law, config.mu), ref);
    };

    BaselineOutput out;
    out.cardinality = geometric.size();
    for (std::size_t i = 0; i < draws; ++i) {
        out.seeds.push_back(draw_seed(master_seed, i));
        out.errors.push_back(error_of(select_random(pool, out.cardinality, out.seeds.back())));
    }
    out.stats = random_baseline_stats(out.errors, error_of(geometric));

    const fs::path dir = prepare_out(config);
    {
        std::ofstream csv(dir / "random_baseline.csv");
        if (!csv) fail(ErrorCode::Io, "cannot write " + (dir / "random_baseline.csv").string());
        csv.precision(17);
        csv << "draw,seed,card_C_hat,rel_error\n";
        for (std::size_t i = 0; i < draws; ++i)
            csv << i << ',' << out.seeds[i] << ',' << out.cardinality << ',' << out.errors[i] << '\n';
    }
    write_json({{"draws", draws},
                {"master_seed", master_seed},
                {"card_C_hat", out.cardinality},
                {"mean", out.stats.mean},
                {"stddev", out.stats.stddev},
                {"delta_min", out.stats.delta_min},
                {"delta_max", out.stats.delta_max},
                {"selection_error", out.stats.reference}},
               dir / "random_baseline.json");
    log << "random baseline over " << draws << " draws of " << out.cardinality << " points: mean "
        << out.stats.mean << ", sigma " << out.stats.stddev << ", delta [" << out.stats.delta_min << ", "
        << out.stats.delta_max << "], selection error " << out.stats.reference << '\n';
    return out;
}

fs::path cmd_mesh_gen(const RunConfig& config, MeshFormat format, std::ostream& log) {
    const Mesh mesh = build_mesh(config);
    const fs::path path = prepare_out(config) / (format == MeshFormat::NativeJson ? "mesh.json" : "mesh.vtk");
    write_mesh(mesh, path, format);
    log << "wrote " << path.string() << ": " << mesh.node_count() << " nodes, " << mesh.element_count()
        << " elements, " << mesh.boundary_ids().size() << " boundary, " << mesh.interior_ids().size()
        << " interior\n";
    return path;
}

} // namespace morphkit::cli
