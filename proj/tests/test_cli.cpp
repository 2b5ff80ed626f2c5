#include "commands.hpp"
#include "run_config.hpp"

#include "morphkit/error.hpp"
#include "morphkit/pipeline.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace morphkit;
using namespace morphkit::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path out_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "morphkit_cli_tests" / name;
    fs::remove_all(dir);
    return dir;
}

json wing_config(const std::string& name) {
    return {{"mesh", {{"generator", "box_wing"}, {"cells", {4, 2, 10}}, {"lengths", {1.0, 0.25, 4.0}}}},
            {"selection",
             {{"regions",
               {{{"group", "left"}, {"R", 0.3}},
                {{"group", "right"}, {"R", 0.3}},
                {{"group", "front"}, {"R", 0.5}},
                {{"group", "rear"}, {"R", 0.5}},
                {{"group", "top"}, {"R", 0.5}},
                {{"group", "bottom"}, {"R", 0.5}}}},
              {"seed", 3}}},
            {"law", {{"kind", "bend"}, {"clamp", {"left"}}, {"domain", {0.0, 1.3}}}},
            {"mu", 0.01},
            {"pod", {{"n_train", 10}, {"epsilon", 1e-5}, {"seed", 2}}},
            {"reference", "idw"},
            {"repeat", 1},
            {"out", out_dir(name).string()}};
}

json rotation_config(const std::string& name) {
    json c = wing_config(name);
    c["law"] = {{"kind", "rotation"}, {"axis", {0, 0, 1}}, {"pivot", {0.5, 0.125, 0}}, {"domain", {-36.0, 0.0}}};
    c["mu"] = -5.0;
    return c;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

} // namespace

TEST_CASE("config parsing and overrides") {
    RunConfig c = parse_run_config(wing_config("parse"));
    CHECK(c.method() == "SIDW");
    CHECK(c.selection->regions.size() == 6);
    CHECK(c.selection->a == 0.8);
    CHECK(c.selection->b == 1.3);
    CHECK(c.repeat == 1);
    CHECK(c.reference_idw);
    CHECK(c.pod.projection == ProjectionMode::Weighted);

    Overrides o;
    o.mu = 0.5;
    o.seed = 99;
    o.projection = "plain";
    o.reference = "none";
    o.repeat = 7;
    o.out = "elsewhere";
    apply_overrides(c, o, "12");
    CHECK(c.mu == 0.5);
    CHECK(c.selection->seed == 99);  // flag beats environment
    CHECK(c.pod.seed == 99);
    CHECK(c.pod.projection == ProjectionMode::Plain);
    CHECK_FALSE(c.reference_idw);
    CHECK(c.repeat == 7);
    CHECK(c.out_dir == "elsewhere");

    RunConfig env = parse_run_config(wing_config("parse"));
    apply_overrides(env, {}, "12");
    CHECK(env.selection->seed == 12);
    CHECK_THROWS_AS(apply_overrides(env, {}, "twelve"), Error);

    json bad = wing_config("parse");
    bad["pod"]["epsilon"] = 1.0;
    CHECK_THROWS_AS(parse_run_config(bad), Error);
    bad = wing_config("parse");
    bad.erase("mesh");
    CHECK_THROWS_AS(parse_run_config(bad), Error);
    bad = wing_config("parse");
    bad["reference"] = "rbf";
    CHECK_THROWS_AS(parse_run_config(bad), Error);
    bad = wing_config("parse");
    bad["law"]["clamp"] = {"nowhere"};
    const RunConfig cb = parse_run_config(bad);
    CHECK_THROWS_AS(build_law(cb, build_mesh(cb)), Error);

    json plain = wing_config("parse");
    plain["enrich"] = {"left_edge"};
    CHECK(parse_run_config(plain).method() == "ESIDW");
    plain.erase("selection");
    CHECK(parse_run_config(plain).method() == "IDW");
}

TEST_CASE("select command") {
    std::ostringstream log;
    json cfg = wing_config("select_huge");
    for (auto& r : cfg["selection"]["regions"]) r["R"] = 100.0;
    const SelectOutput huge = cmd_select(parse_run_config(cfg), log);
    CHECK(huge.selected.size() == 6);
    CHECK(fs::exists(huge.file));
    std::ifstream in(huge.file);
    const json doc = json::parse(in);
    CHECK(doc["selected"].get<NodeIds>() == huge.selected);
    CHECK(doc.contains("params"));
    CHECK(doc.contains("trace"));
    CHECK(log.str().find("card(C_hat) = 6") != std::string::npos);

    cfg = wing_config("select_tiny");
    for (auto& r : cfg["selection"]["regions"]) r["R"] = 1e-3;
    const RunConfig tiny = parse_run_config(cfg);
    CHECK(cmd_select(tiny, log).selected == build_mesh(tiny).boundary_ids());

    cfg = wing_config("select_enrich");
    cfg["enrich"] = {"left_edge", "right_edge", "horizontal_edges"};
    const RunConfig enriched = parse_run_config(cfg);
    const SelectOutput e = cmd_select(enriched, log);
    const Mesh m = build_mesh(enriched);
    std::set<NodeId> expect(e.geometric.selected.begin(), e.geometric.selected.end());
    for (const char* g : {"left_edge", "right_edge", "horizontal_edges"})
        expect.insert(m.group(g).begin(), m.group(g).end());
    CHECK(e.selected == NodeIds(expect.begin(), expect.end()));
}

TEST_CASE("morph command") {
    std::ostringstream log;
    // Enrichment with every face: ESIDW degenerates to IDW.
    json cfg = wing_config("morph_full");
    cfg["enrich"] = {"left", "right", "top", "bottom", "front", "rear"};
    const ComparisonReport full = cmd_morph(parse_run_config(cfg), std::nullopt, log);
    CHECK(full.relative_error <= 1e-12);
    CHECK(full.method == "ESIDW");

    const RunConfig plain = parse_run_config(wing_config("morph_sidw"));
    const ComparisonReport sidw = cmd_morph(plain, std::nullopt, log);
    CHECK(sidw.relative_error > 0.0);
    CHECK(sidw.relative_error < 0.1);
    CHECK(sidw.max_quality >= sidw.mean_quality);
    CHECK(sidw.mean_quality >= 1.0);
    for (const char* f : {"deformed.json", "deformed.vtk", "report.json", "report.csv"})
        CHECK(fs::exists(plain.out_dir / f));
    CHECK(first_line(plain.out_dir / "report.csv") == report_csv_header());

    // mu = 0 leaves the mesh untouched.
    json zero = wing_config("morph_zero");
    zero["mu"] = 0.0;
    zero["reference"] = "none";
    const RunConfig zc = parse_run_config(zero);
    cmd_morph(zc, std::nullopt, log);
    CHECK(read_mesh(zc.out_dir / "deformed.json") == build_mesh(zc));

    json outside = wing_config("morph_domain");
    outside["mu"] = 2.0;
    try {
        cmd_morph(parse_run_config(outside), std::nullopt, log);
        FAIL("mu outside the domain accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Domain);
    }
}

TEST_CASE("morph with a selection artifact") {
    std::ostringstream log;
    const RunConfig c = parse_run_config(wing_config("artifact"));
    const SelectOutput s = cmd_select(c, log);
    const ComparisonReport inline_run = cmd_morph(c, std::nullopt, log);
    const ComparisonReport from_file = cmd_morph(c, s.file, log);
    CHECK(from_file.card_c_hat == inline_run.card_c_hat);
    CHECK(from_file.relative_error == inline_run.relative_error);

    // Artifact made for another mesh.
    json other = wing_config("artifact_other");
    other["mesh"]["cells"] = {3, 2, 10};
    try {
        cmd_morph(parse_run_config(other), s.file, log);
        FAIL("mismatched artifact accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
    const fs::path bogus = c.out_dir / "bogus.json";
    std::ofstream(bogus) << R"({"selected":[0, 100000]})";
    CHECK_THROWS_AS(cmd_morph(c, bogus, log), Error);
}

TEST_CASE("pod commands") {
    std::ostringstream log;
    const RunConfig lin = parse_run_config(wing_config("pod_linear"));
    const OfflineOutput off = cmd_pod_offline(lin, log);
    CHECK(off.model.modes() == 1);
    CHECK(fs::exists(lin.out_dir / "pod.bin"));
    std::ifstream side(lin.out_dir / "pod.json");
    const json sidecar = json::parse(side);
    CHECK(sidecar["modes"] == 1);
    CHECK(sidecar["train"].size() == 10);
    CHECK(sidecar["epsilon"] == 1e-5);
    CHECK(sidecar.contains("selection"));

    // Online against the same selection's morph: identical up to round-off.
    for (double mu : {0.003, 0.4, 1.2}) {
        RunConfig at = lin;
        at.mu = mu;
        const ComparisonReport online = cmd_pod_online(at, off.artifact, log);
        const ComparisonReport morph = cmd_morph(at, std::nullopt, log);
        CHECK(online.n_modes == 1);
        CHECK(std::abs(online.relative_error - morph.relative_error) <= 1e-8);
    }

    json idw = wing_config("pod_idw");
    idw.erase("selection");
    const RunConfig full = parse_run_config(idw);
    const OfflineOutput fo = cmd_pod_offline(full, log);
    RunConfig at = full;
    at.mu = 0.77;
    CHECK(cmd_pod_online(at, fo.artifact, log).relative_error <= 1e-8);

    const RunConfig rot = parse_run_config(rotation_config("pod_rotation"));
    CHECK(cmd_pod_offline(rot, log).model.modes() == 2);

    json loose = rotation_config("pod_loose");
    loose["pod"]["epsilon"] = 0.5;
    CHECK(cmd_pod_offline(parse_run_config(loose), log).model.modes() == 1);

    // Artifact from another mesh is rejected.
    json other = wing_config("pod_other");
    other["mesh"]["cells"] = {3, 2, 10};
    CHECK_THROWS_AS(cmd_pod_online(parse_run_config(other), off.artifact, log), Error);
}

TEST_CASE("sweep command") {
    std::ostringstream log;
    const RunConfig c = parse_run_config(wing_config("sweep"));
    const auto two = cmd_sweep(c, SweepAxis::Radius, {0.2, 0.6}, false, log);
    CHECK(two.size() == 2);
    CHECK(two[0].radius == 0.2);
    CHECK(line_count(c.out_dir / "sweep.csv") == 3);

    std::ifstream golden(fs::path(MORPHKIT_TEST_DATA_DIR) / "report_header.csv");
    std::string header;
    std::getline(golden, header);
    CHECK(first_line(c.out_dir / "sweep.csv") == header);

    const auto a = cmd_sweep(c, SweepAxis::A, {0.5, 0.8}, true, log);
    for (const auto& r : a) CHECK(r.b == doctest::Approx(1.0 / r.a));

    // Error falls to zero once R is below the node spacing.
    const auto rs = cmd_sweep(c, SweepAxis::Radius, {1.0, 0.5, 0.25, 0.01}, false, log);
    CHECK(rs.back().relative_error <= 1e-12);
    CHECK(rs.back().card_c_hat == build_mesh(c).boundary_ids().size());
    CHECK(rs.front().relative_error > rs.back().relative_error);

    const auto mu = cmd_sweep(c, SweepAxis::Mu, {0.1, 0.2}, false, log);
    CHECK(mu[0].relative_error == doctest::Approx(mu[1].relative_error).epsilon(1e-10));  // linear law

    CHECK_THROWS_AS(parse_sweep_axis("p"), Error);
    CHECK_THROWS_AS(cmd_sweep(c, SweepAxis::Radius, {}, false, log), Error);
}

TEST_CASE("random baseline command") {
    std::ostringstream log;
    const RunConfig c = parse_run_config(wing_config("baseline"));
    const BaselineOutput a = cmd_random_baseline(c, 12, 5, log);
    const BaselineOutput b = cmd_random_baseline(c, 12, 5, log);
    CHECK(a.errors == b.errors);
    CHECK(std::set<std::uint64_t>(a.seeds.begin(), a.seeds.end()).size() == 12);
    CHECK(a.stats.delta_min <= 0.0);
    CHECK(a.stats.delta_max >= 0.0);
    CHECK(line_count(c.out_dir / "random_baseline.csv") == 13);
    CHECK(fs::exists(c.out_dir / "random_baseline.json"));
    CHECK(cmd_random_baseline(c, 12, 6, log).errors != a.errors);
}

TEST_CASE("mesh-gen command") {
    std::ostringstream log;
    const RunConfig c = parse_run_config(wing_config("mesh_gen"));
    const fs::path j = cmd_mesh_gen(c, MeshFormat::NativeJson, log);
    CHECK(read_mesh(j) == build_mesh(c));
    const fs::path v = cmd_mesh_gen(c, MeshFormat::VtkLegacy, log);
    CHECK(first_line(v) == "# vtk DataFile Version 3.0");

    json tunnel = wing_config("mesh_tunnel");
    tunnel["mesh"] = {{"generator", "tunnel"}, {"outer", {4, 2, 2}}, {"inner", {1, 0.5, 0.5}}, {"spacing", 0.5}};
    CHECK(build_mesh(parse_run_config(tunnel)).group("obstacle").size() > 0);
    json rect = wing_config("mesh_rect");
    rect["mesh"] = {{"generator", "rectangle"}, {"cells", {3, 3}}, {"lengths", {1, 1}}};
    CHECK(build_mesh(parse_run_config(rect)).dim() == 2);
    json unknown = wing_config("mesh_unknown");
    unknown["mesh"] = {{"generator", "naca"}};
    CHECK_THROWS_AS(build_mesh(parse_run_config(unknown)), Error);
}
