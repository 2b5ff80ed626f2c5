#include "commands.hpp"

#include "morphkit/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace morphkit;
using namespace morphkit::cli;

namespace {

struct CommonFlags {
    std::string config;
    Overrides overrides;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--mu", f.overrides.mu, "parameter value mu*");
    sub->add_option("--seed", f.overrides.seed, "seed for selection and training draws");
    sub->add_option("--reference", f.overrides.reference, "compare against full IDW")
        ->check(CLI::IsMember({"idw", "none"}));
    sub->add_option("--projection", f.overrides.projection, "online projection")
        ->check(CLI::IsMember({"weighted", "plain"}));
    sub->add_option("--repeat", f.overrides.repeat, "timing repeat count");
    sub->add_option("--out", f.overrides.out, "output directory");
}

RunConfig load(const CommonFlags& f) {
    RunConfig config = load_run_config(f.config);
    apply_overrides(config, f.overrides, std::getenv("MORPHKIT_SEED"));
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mesh morphing with selective inverse distance weighting and POD reduction"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* select = app.add_subcommand("select", "choose control points");
    add_common(select, flags);

    auto* morph = app.add_subcommand("morph", "deform a mesh at mu*");
    add_common(morph, flags);
    std::optional<std::string> selection_file;
    morph->add_option("--selection", selection_file, "selection artifact from 'select'")->check(CLI::ExistingFile);

    auto* offline = app.add_subcommand("pod-offline", "build the reduced model");
    add_common(offline, flags);

    auto* online = app.add_subcommand("pod-online", "deform with the reduced model at mu*");
    add_common(online, flags);
    std::string artifact;
    online->add_option("--artifact", artifact, "POD artifact from 'pod-offline'")
        ->required()
        ->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "sensitivity sweep to CSV");
    add_common(sweep, flags);
    std::string axis;
    std::vector<double> values;
    bool couple_b = false;
    sweep->add_option("--axis", axis, "R, a, b or mu")->required()->check(CLI::IsMember({"R", "a", "b", "mu"}));
    sweep->add_option("--values", values, "values to sweep")->required()->delimiter(',');
    sweep->add_flag("--couple-b", couple_b, "set b = 1/a in an a-sweep");

    auto* baseline = app.add_subcommand("random-baseline", "random selections of equal cardinality");
    add_common(baseline, flags);
    std::size_t draws = 100;
    std::uint64_t master_seed = 0;
    baseline->add_option("--draws", draws, "number of random selections")->capture_default_str();
    baseline->add_option("--master-seed", master_seed, "seed all draws derive from")->capture_default_str();

    auto* mesh_gen = app.add_subcommand("mesh-gen", "write the configured mesh");
    add_common(mesh_gen, flags);
    std::string format = "json";
    mesh_gen->add_option("--format", format, "json or vtk")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = load(flags);
        if (select->parsed()) {
            cmd_select(config, std::cout);
        } else if (morph->parsed()) {
            std::optional<std::filesystem::path> sel;
            if (selection_file) sel = *selection_file;
            cmd_morph(config, sel, std::cout);
        } else if (offline->parsed()) {
            cmd_pod_offline(config, std::cout);
        } else if (online->parsed()) {
            cmd_pod_online(config, artifact, std::cout);
        } else if (sweep->parsed()) {
            cmd_sweep(config, parse_sweep_axis(axis), values, couple_b, std::cout);
        } else if (baseline->parsed()) {
            cmd_random_baseline(config, draws, master_seed, std::cout);
        } else if (mesh_gen->parsed()) {
            cmd_mesh_gen(config, parse_mesh_format(format), std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
