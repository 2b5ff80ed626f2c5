#pragma once

#include "morphkit/idw.hpp"
#include "morphkit/laws.hpp"
#include "morphkit/pod.hpp"
#include "morphkit/selection.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace morphkit::cli {

struct PodSpec {
    std::size_t n_train = 100;
    double epsilon = 1e-5;
    std::uint64_t seed = 0;
    ProjectionMode projection = ProjectionMode::Weighted;
    std::vector<double> train;  ///< explicit training set; drawn from the law domain when empty
};

/// Everything one command needs: inputs of the selection/deformation and
/// offline/online pipelines plus output locations.
struct RunConfig {
    nlohmann::json mesh;  ///< generator spec or {"file": path}
    std::filesystem::path base_dir;  ///< relative paths in the config resolve here
    IdwConfig idw;
    std::optional<SelectionParams> selection;
    std::vector<std::string> enrich;
    nlohmann::json law;
    double mu = 0.0;
    PodSpec pod;
    std::filesystem::path out_dir = "out";
    std::size_t repeat = 100;
    bool reference_idw = false;

    /// "IDW", "SIDW" or "ESIDW".
    std::string method() const;
};

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Command-line overrides, applied after MORPHKIT_SEED.
struct Overrides {
    std::optional<double> mu;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> reference;
    std::optional<std::string> projection;
    std::optional<std::size_t> repeat;
    std::optional<std::filesystem::path> out;
};

/// Environment seed (when `env_seed` is non-null) first, then flags.
void apply_overrides(RunConfig& config, const Overrides& overrides, const char* env_seed);

Mesh build_mesh(const RunConfig& config);
DisplacementLaw build_law(const RunConfig& config, const Mesh& mesh);

nlohmann::json selection_params_to_json(const SelectionParams& params);

} // namespace morphkit::cli
