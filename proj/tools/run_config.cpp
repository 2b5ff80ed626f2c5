#include "run_config.hpp"

#include "morphkit/error.hpp"
#include "morphkit/mesh_io.hpp"
#include "morphkit/pipeline.hpp"

#include <fstream>

namespace morphkit::cli {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("config field '") + key + "': " + e.what());
    }
}

template <class T>
T get_req(const json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key)) fail(ErrorCode::Parse, where + ": missing field '" + key + "'");
    return get_or<T>(doc, key, T{});
}

std::array<double, 3> triple(const json& doc, const char* key, const std::string& where) {
    const auto v = get_req<std::vector<double>>(doc, key, where);
    if (v.size() != 3) fail(ErrorCode::Parse, where + "." + key + " must have 3 entries");
    return {v[0], v[1], v[2]};
}

Point point_or(const json& doc, const char* key, Point fallback) {
    if (!doc.contains(key)) return fallback;
    const auto v = get_or<std::vector<double>>(doc, key, {});
    if (v.size() < 2 || v.size() > 3) fail(ErrorCode::Parse, std::string("law.") + key + " needs 2 or 3 entries");
    return Point(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

} // namespace

std::string RunConfig::method() const {
    if (!selection) return "IDW";
    return enrich.empty() ? "SIDW" : "ESIDW";
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) fail(ErrorCode::Parse, "config must be a JSON object");
    RunConfig c;
    c.base_dir = base_dir;
    if (!doc.contains("mesh")) fail(ErrorCode::Parse, "config: missing field 'mesh'");
    c.mesh = doc.at("mesh");

    if (doc.contains("idw")) {
        c.idw.p = get_or<int>(doc.at("idw"), "p", 4);
        c.idw.coincidence_tol = get_or<double>(doc.at("idw"), "coincidence_tol", -1.0);
    }

    if (doc.contains("selection") && !doc.at("selection").is_null()) {
        const json& s = doc.at("selection");
        SelectionParams p;
        p.a = get_or<double>(s, "a", 0.8);
        p.b = get_or<double>(s, "b", 1.3);
        p.strategy = parse_strategy(get_or<std::string>(s, "strategy", "random"));
        p.seed = get_or<std::uint64_t>(s, "seed", 0);
        if (!s.contains("regions") || !s.at("regions").is_array())
            fail(ErrorCode::Parse, "selection.regions must be an array");
        for (const json& r : s.at("regions")) {
            RegionParams region;
            region.group = get_req<std::string>(r, "group", "selection.regions[]");
            region.radius = get_req<double>(r, "R", "selection.regions[]");
            if (r.contains("seed_point")) region.seed_point = r.at("seed_point").get<NodeId>();
            p.regions.push_back(std::move(region));
        }
        c.selection = std::move(p);
    }
    c.enrich = get_or<std::vector<std::string>>(doc, "enrich", {});
    c.law = doc.contains("law") ? doc.at("law") : json::object();
    c.mu = get_or<double>(doc, "mu", 0.0);

    if (doc.contains("pod")) {
        const json& p = doc.at("pod");
        c.pod.n_train = get_or<std::size_t>(p, "n_train", 100);
        c.pod.epsilon = get_or<double>(p, "epsilon", 1e-5);
        c.pod.seed = get_or<std::uint64_t>(p, "seed", 0);
        c.pod.projection = parse_projection(get_or<std::string>(p, "projection", "weighted"));
        c.pod.train = get_or<std::vector<double>>(p, "train", {});
        require(c.pod.epsilon > 0.0 && c.pod.epsilon < 1.0, "pod.epsilon must lie in (0,1)");
    }
    c.out_dir = resolve(base_dir, get_or<std::string>(doc, "out", "out"));
    c.repeat = get_or<std::size_t>(doc, "repeat", 100);
    const auto reference = get_or<std::string>(doc, "reference", "none");
    require(reference == "idw" || reference == "none", "reference must be 'idw' or 'none'");
    c.reference_idw = reference == "idw";
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, path.string() + " at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_run_config(doc, path.parent_path());
}

void apply_overrides(RunConfig& config, const Overrides& o, const char* env_seed) {
    auto set_seed = [&](std::uint64_t seed) {
        if (config.selection) config.selection->seed = seed;
        config.pod.seed = seed;
    };
    if (env_seed && *env_seed) {
        try {
            set_seed(std::stoull(env_seed));
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidArgument, std::string("MORPHKIT_SEED is not an integer: ") + env_seed);
        }
    }
    if (o.seed) set_seed(*o.seed);
    if (o.mu) config.mu = *o.mu;
    if (o.reference) {
        require(*o.reference == "idw" || *o.reference == "none", "--reference must be idw or none");
        config.reference_idw = *o.reference == "idw";
    }
    if (o.projection) config.pod.projection = parse_projection(*o.projection);
    if (o.repeat) config.repeat = *o.repeat;
    if (o.out) config.out_dir = *o.out;
}

Mesh build_mesh(const RunConfig& config) {
    const json& m = config.mesh;
    if (m.contains("file")) return read_mesh(resolve(config.base_dir, m.at("file").get<std::string>()));
    const auto gen = get_req<std::string>(m, "generator", "mesh");
    if (gen == "box_wing") {
        const auto cells = get_req<std::vector<int>>(m, "cells", "mesh");
        if (cells.size() != 3) fail(ErrorCode::Parse, "mesh.cells must have 3 entries");
        return generate_box_wing(cells[0], cells[1], cells[2], triple(m, "lengths", "mesh"));
    }
    if (gen == "tunnel") {
        TunnelSpec spec;
        spec.outer = triple(m, "outer", "mesh");
        spec.spacing = get_req<double>(m, "spacing", "mesh");
        if (m.contains("inner_lo")) {
            spec.inner_lo = triple(m, "inner_lo", "mesh");
            spec.inner_hi = triple(m, "inner_hi", "mesh");
            return generate_tunnel(spec);
        }
        return generate_tunnel(spec.outer, triple(m, "inner", "mesh"), spec.spacing);
    }
    if (gen == "rectangle") {
        const auto cells = get_req<std::vector<int>>(m, "cells", "mesh");
        const auto lengths = get_req<std::vector<double>>(m, "lengths", "mesh");
        if (cells.size() != 2 || lengths.size() != 2)
            fail(ErrorCode::Parse, "rectangle needs 2 cells and 2 lengths");
        return generate_rectangle(cells[0], cells[1], {lengths[0], lengths[1]});
    }
    fail(ErrorCode::InvalidArgument, "unknown mesh generator '" + gen + "'");
}

DisplacementLaw build_law(const RunConfig& config, const Mesh& mesh) {
    const json& l = config.law;
    const auto kind = get_req<std::string>(l, "kind", "law");
    const auto dom = get_req<std::vector<double>>(l, "domain", "law");
    if (dom.size() != 2) fail(ErrorCode::Parse, "law.domain must be [lo, hi]");
    const auto clamp = get_or<std::vector<std::string>>(l, "clamp", {});
    for (const auto& g : clamp) mesh.group(g);

    std::variant<BendLaw, RotationLaw, TabulatedLaw> k;
    if (kind == "bend") {
        BendLaw b;
        b.along = get_or<int>(l, "along", 2);
        b.direction = get_or<int>(l, "direction", 1);
        b.origin = get_or<double>(l, "origin", 0.0);
        k = b;
    } else if (kind == "rotation") {
        RotationLaw r;
        r.axis = point_or(l, "axis", Point::UnitZ());
        r.pivot = point_or(l, "pivot", Point::Zero());
        k = r;
    } else if (kind == "tabulated") {
        k = read_tabulated(resolve(config.base_dir, get_req<std::string>(l, "file", "law")));
    } else {
        fail(ErrorCode::InvalidArgument, "unknown law kind '" + kind + "'");
    }
    return boundary_law(mesh, std::move(k), clamp, {dom[0], dom[1]});
}

json selection_params_to_json(const SelectionParams& params) {
    json regions = json::array();
    for (const auto& r : params.regions) {
        json jr{{"group", r.group}, {"R", r.radius}};
        if (r.seed_point) jr["seed_point"] = *r.seed_point;
        regions.push_back(std::move(jr));
    }
    return {{"regions", std::move(regions)},
            {"a", params.a},
            {"b", params.b},
            {"strategy", to_string(params.strategy)},
            {"seed", params.seed}};
}

} // namespace morphkit::cli
