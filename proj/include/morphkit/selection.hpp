#pragma once

#include "morphkit/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace morphkit {

/// How SelectControlPoint picks from the current selection area (and how the
/// first point is picked when no explicit seed point is given).
enum class SelectStrategy { Random, CentroidNearest, FarthestPoint };

SelectStrategy parse_strategy(const std::string& name);
std::string to_string(SelectStrategy s);

struct RegionParams {
    std::string group;
    double radius = 0.0;                 ///< R: influence radius
    std::optional<NodeId> seed_point;    ///< explicit first control point
};

struct SelectionParams {
    std::vector<RegionParams> regions;
    double a = 0.8;   ///< annulus thickness factor, 0 < a < 1
    double b = 1.3;   ///< selection band factor, b > 1
    SelectStrategy strategy = SelectStrategy::Random;
    std::uint64_t seed = 0;
};

/// Per-region parameters for a single selection run.
struct SelectOptions {
    double radius = 0.0;
    double a = 0.8;
    double b = 1.3;
    SelectStrategy strategy = SelectStrategy::Random;
    std::uint64_t seed = 0;
    std::optional<NodeId> seed_point;
};

struct TraceEntry {
    NodeId node;
    std::size_t beta_size;  ///< size of the selection area the node was drawn from (0 for the first)
    std::size_t annulus;    ///< annulus index being processed
};

struct SelectionResult {
    NodeIds selected;       ///< in selection order
    std::vector<TraceEntry> trace;
    std::size_t annulus_count = 0;

    NodeIds sorted() const;
};

/// Geometric thinning of `candidates`: tessellate around the first point in
/// annuli of width aR starting at R, then repeatedly pick from the band
/// (R, bR] around the latest pick inside the current annulus and drop every
/// candidate within the closed ball of radius R of each pick.
///
/// Guarantees: selected points are pairwise more than R apart, and every
/// candidate lies within R of some selected point.
SelectionResult select(const Mesh& mesh, const NodeIds& candidates, const SelectOptions& options);

/// One `select` run per region (regions must be disjoint), results concatenated.
SelectionResult select_multi(const Mesh& mesh, const SelectionParams& params);

/// selected ∪ named groups, sorted and deduplicated.
NodeIds enrich(const NodeIds& selected, const Mesh& mesh, const std::vector<std::string>& groups);

/// Uniform sample without replacement of `k` candidates, sorted.
NodeIds select_random(const NodeIds& candidates, std::size_t k, std::uint64_t seed);

/// Seed of draw `index` in a baseline run driven by `master`.
std::uint64_t draw_seed(std::uint64_t master, std::size_t index);

struct BaselineStats {
    double mean = 0.0;
    double stddev = 0.0;     ///< sample standard deviation (n - 1)
    double delta_min = 0.0;  ///< (min - mean) / stddev
    double delta_max = 0.0;  ///< (max - mean) / stddev
    double reference = 0.0;  ///< error of the geometric selection, for comparison
};

BaselineStats random_baseline_stats(const std::vector<double>& errors, double reference);

} // namespace morphkit
