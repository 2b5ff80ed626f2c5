#pragma once

#include "morphkit/mesh.hpp"

#include <json.hpp>

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

namespace morphkit {

/// ||test - ref|| / ||ref|| over the flattened fields (plain nodal Euclidean norm).
double relative_error(const DisplacementField& test, const DisplacementField& ref);

/// Mean element quality divided by the largest tip displacement.
double normalized_quality_index(double mean_quality, double max_tip_displacement);
double normalized_quality_index(const Mesh& deformed, double max_tip_displacement);

/// Largest displacement magnitude over `ids` (e.g. the free end of a wing).
double max_displacement(const DisplacementField& d, const NodeIds& ids);

struct ComparisonReport {
    std::string method;
    double radius = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::size_t card_c_hat = 0;
    std::size_t n_modes = 0;
    double relative_error = 0.0;
    double max_quality = 0.0;
    double mean_quality = 0.0;
    double t_assembly_s = 0.0;
    double t_deform_s = 0.0;
    double t_offline_s = 0.0;
    double t_online_s = 0.0;
};

/// Stable header: method,R,a,b,card_C_hat,N_modes,rel_error,max_Q,mean_Q,
/// t_assembly_s,t_deform_s,t_offline_s,t_online_s
std::string report_csv_header();
std::string report_csv_row(const ComparisonReport& r);
nlohmann::json report_to_json(const ComparisonReport& r);

/// Mean wall time in seconds of `repeat` calls, on a monotonic clock.
template <class F>
double mean_seconds(F&& fn, std::size_t repeat) {
    if (repeat == 0) repeat = 1;
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    for (std::size_t i = 0; i < repeat; ++i) fn();
    const std::chrono::duration<double> elapsed = clock::now() - start;
    return elapsed.count() / static_cast<double>(repeat);
}

} // namespace morphkit
