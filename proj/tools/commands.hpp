#pragma once

#include "run_config.hpp"

#include "morphkit/metrics.hpp"
#include "morphkit/mesh_io.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

namespace morphkit::cli {

struct SelectOutput {
    NodeIds selected;  ///< final control set, sorted (after enrichment)
    SelectionResult geometric;
    std::filesystem::path file;
};

/// Writes <out>/selection.json: {"selected", "node_count", "params", "enrich", "trace"}.
SelectOutput cmd_select(const RunConfig& config, std::ostream& log);

/// Reads the "selected" list of a selection artifact, checked against `mesh`.
NodeIds read_selection(const std::filesystem::path& path, const Mesh& mesh);

/// Writes <out>/deformed.json, deformed.vtk and report.{json,csv}.
/// `selection_file` replaces the inline selection when given.
ComparisonReport cmd_morph(const RunConfig& config, const std::optional<std::filesystem::path>& selection_file,
                           std::ostream& log);

struct OfflineOutput {
    PodModel model;
    double t_offline_s = 0.0;
    std::filesystem::path artifact;
};

/// Writes <out>/pod.bin and the sidecar <out>/pod.json.
OfflineOutput cmd_pod_offline(const RunConfig& config, std::ostream& log);

/// Writes <out>/deformed.json, deformed.vtk and report.{json,csv}.
ComparisonReport cmd_pod_online(const RunConfig& config, const std::filesystem::path& artifact, std::ostream& log);

enum class SweepAxis { Radius, A, B, Mu };

SweepAxis parse_sweep_axis(const std::string& name);

/// One report per value, written to <out>/sweep.csv in input order. With
/// `couple_b`, an a-sweep sets b = 1/a. The R axis sets every region's radius.
std::vector<ComparisonReport> cmd_sweep(const RunConfig& config, SweepAxis axis, const std::vector<double>& values,
                                        bool couple_b, std::ostream& log);

struct BaselineOutput {
    std::size_t cardinality = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> errors;
    BaselineStats stats;
};

/// `draws` random control sets of the geometric selection's cardinality.
/// Writes <out>/random_baseline.csv and <out>/random_baseline.json.
BaselineOutput cmd_random_baseline(const RunConfig& config, std::size_t draws, std::uint64_t master_seed,
                                   std::ostream& log);

/// Writes the configured mesh to <out>/mesh.json or <out>/mesh.vtk.
std::filesystem::path cmd_mesh_gen(const RunConfig& config, MeshFormat format, std::ostream& log);

} // namespace morphkit::cli
