#include "morphkit/metrics.hpp"

#include "morphkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace morphkit {

double relative_error(const DisplacementField& test, const DisplacementField& ref) {
    require(test.indices() == ref.indices(), "compared fields cover different node sets");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        num += (test.vectors()[i] - ref.vectors()[i]).squaredNorm();
        den += ref.vectors()[i].squaredNorm();
    }
    if (!(den > 0.0)) fail(ErrorCode::UndefinedReference, "reference displacement is identically zero");
    return std::sqrt(num / den);
}

double normalized_quality_index(double mean_quality, double max_tip_displacement) {
    require(max_tip_displacement > 0.0, "tip displacement must be positive");
    return mean_quality / max_tip_displacement;
}

double normalized_quality_index(const Mesh& deformed, double max_tip_displacement) {
    return normalized_quality_index(mesh_quality(deformed).mean, max_tip_displacement);
}

double max_displacement(const DisplacementField& d, const NodeIds& ids) {
    double best = 0.0;
    const DisplacementField sub = d.restrict_to(ids);
    for (const Point& v : sub.vectors()) best = std::max(best, v.norm());
    return best;
}

std::string report_csv_header() {
    return "method,R,a,b,card_C_hat,N_modes,rel_error,max_Q,mean_Q,t_assembly_s,t_deform_s,t_offline_s,"
           "t_online_s";
}

std::string report_csv_row(const ComparisonReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.method << ',' << r.radius << ',' << r.a << ',' << r.b << ',' << r.card_c_hat << ','
        << r.n_modes << ',' << r.relative_error << ',' << r.max_quality << ',' << r.mean_quality << ','
        << r.t_assembly_s << ',' << r.t_deform_s << ',' << r.t_offline_s << ',' << r.t_online_s;
    return out.str();
}

nlohmann::json report_to_json(const ComparisonReport& r) {
    return {{"method", r.method},         {"R", r.radius},
            {"a", r.a},                   {"b", r.b},
            {"card_C_hat", r.card_c_hat}, {"N_modes", r.n_modes},
            {"rel_error", r.relative_error}, {"max_Q", r.max_quality},
            {"mean_Q", r.mean_quality},   {"t_assembly_s", r.t_assembly_s},
            {"t_deform_s", r.t_deform_s}, {"t_offline_s", r.t_offline_s},
            {"t_online_s", r.t_online_s}};
}

} // namespace morphkit
