#include "morphkit/selection.hpp"

#include "morphkit/error.hpp"
#include "numeric_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace morphkit {

SelectStrategy parse_strategy(const std::string& name) {
    if (name == "random") return SelectStrategy::Random;
    if (name == "centroid_nearest" || name == "centroid") return SelectStrategy::CentroidNearest;
    if (name == "farthest_point" || name == "farthest") return SelectStrategy::FarthestPoint;
    fail(ErrorCode::InvalidArgument, "unknown selection strategy '" + name + "'");
}

std::string to_string(SelectStrategy s) {
    switch (s) {
    case SelectStrategy::Random: return "random";
    case SelectStrategy::CentroidNearest: return "centroid_nearest";
    case SelectStrategy::FarthestPoint: return "farthest_point";
    }
    return "random";
}

NodeIds SelectionResult::sorted() const {
    NodeIds s = selected;
    std::sort(s.begin(), s.end());
    return s;
}

namespace {

/// Working state of one selection run. Candidates are addressed by their
/// position in `ids` (sorted node ids).
class Selector {
public:
    Selector(const Mesh& mesh, NodeIds ids, const SelectOptions& opt)
        : ids_(std::move(ids)), opt_(opt), rng_(opt.seed) {
        pos_.reserve(ids_.size());
        for (NodeId id : ids_) pos_.push_back(mesh.node(id));
    }

    SelectionResult run() {
        SelectionResult result;
        const double R = opt_.radius;
        const std::size_t first = pick_first();
        select_point(first, 0, result);

        // Tessellation: annulus m covers distances (bounds[m], bounds[m+1]].
        double r_omega = 0.0;
        for (const Point& p : pos_) r_omega = std::max(r_omega, (p - pos_[first]).norm());
        std::vector<double> bounds{R};
        for (double r = R; r <= r_omega; r += opt_.a * R) bounds.push_back(r + opt_.a * R);
        const std::size_t n = bounds.size() - 1;
        result.annulus_count = n;

        annuli_.assign(n, {});
        alive_.assign(ids_.size(), 0);
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            const double d = (pos_[i] - pos_[first]).norm();
            if (d <= R) continue;
            const auto m = static_cast<std::size_t>(
                std::lower_bound(bounds.begin() + 1, bounds.end(), d) - (bounds.begin() + 1));
            annuli_[m].push_back(i);
            alive_[i] = 1;
        }

        std::size_t m = 0;
        std::size_t last = first;
        std::vector<std::size_t> beta = n > 0 ? band(m, last) : std::vector<std::size_t>{};
        while (m < n) {
            while (!beta.empty()) {
                const std::size_t c = pick(beta);
                select_point(c, beta.size(), result, m);
                remove_influence(c, m);
                last = c;
                beta = band(m, c);
            }
            if (annulus_empty(m)) {
                ++m;
                if (m < n) beta = band(m, last);
            } else {
                beta = alive_members(m);
            }
        }
        return result;
    }

private:
    void select_point(std::size_t c, std::size_t beta_size, SelectionResult& result, std::size_t m = 0) {
        chosen_.push_back(c);
        result.selected.push_back(ids_[c]);
        result.trace.push_back({ids_[c], beta_size, m});
    }

    void remove_influence(std::size_t c, std::size_t from) {
        const double R = opt_.radius;
        for (std::size_t l = from; l < annuli_.size(); ++l)
            for (std::size_t i : annuli_[l])
                if (alive_[i] && (pos_[i] - pos_[c]).norm() <= R) alive_[i] = 0;
    }

    /// Alive members of annulus m at distance (R, bR] from candidate c.
    std::vector<std::size_t> band(std::size_t m, std::size_t c) const {
        std::vector<std::size_t> out;
        const double lo = opt_.radius;
        const double hi = opt_.b * opt_.radius;
        for (std::size_t i : annuli_[m]) {
            if (!alive_[i]) continue;
            const double d = (pos_[i] - pos_[c]).norm();
            if (d > lo && d <= hi) out.push_back(i);
        }
        return out;
    }

    std::vector<std::size_t> alive_members(std::size_t m) const {
        std::vector<std::size_t> out;
        for (std::size_t i : annuli_[m])
            if (alive_[i]) out.push_back(i);
        return out;
    }

    bool annulus_empty(std::size_t m) const {
        return std::none_of(annuli_[m].begin(), annuli_[m].end(), [&](std::size_t i) { return alive_[i] != 0; });
    }

    Point centroid(const std::vector<std::size_t>& set) const {
        Point c = Point::Zero();
        for (std::size_t i : set) c += pos_[i];
        return c / static_cast<double>(set.size());
    }

    /// Member of `set` minimising `score`; ties go to the lowest node id, which
    /// is the lowest position since `ids_` is sorted and `set` ascending.
    template <class Score>
    std::size_t arg_min(const std::vector<std::size_t>& set, Score score) const {
        std::size_t best = set.front();
        double best_score = std::numeric_limits<double>::infinity();
        for (std::size_t i : set) {
            const double s = score(i);
            if (s < best_score) {
                best_score = s;
                best = i;
            }
        }
        return best;
    }

    std::size_t pick_first() {
        if (opt_.seed_point) {
            auto it = std::lower_bound(ids_.begin(), ids_.end(), *opt_.seed_point);
            require(it != ids_.end() && *it == *opt_.seed_point,
                    "seed point " + std::to_string(*opt_.seed_point) + " is not a candidate");
            return static_cast<std::size_t>(it - ids_.begin());
        }
        std::vector<std::size_t> all(ids_.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        switch (opt_.strategy) {
        case SelectStrategy::Random: return detail::uniform_index(rng_, ids_.size());
        case SelectStrategy::CentroidNearest: {
            const Point g = centroid(all);
            return arg_min(all, [&](std::size_t i) { return (pos_[i] - g).squaredNorm(); });
        }
        case SelectStrategy::FarthestPoint: {
            const Point g = centroid(all);
            return arg_min(all, [&](std::size_t i) { return -(pos_[i] - g).squaredNorm(); });
        }
        }
        return 0;
    }

    std::size_t pick(const std::vector<std::size_t>& beta) {
        switch (opt_.strategy) {
        case SelectStrategy::Random: return beta[detail::uniform_index(rng_, beta.size())];
        case SelectStrategy::CentroidNearest: {
            const Point g = centroid(beta);
            return arg_min(beta, [&](std::size_t i) { return (pos_[i] - g).squaredNorm(); });
        }
        case SelectStrategy::FarthestPoint:
            return arg_min(beta, [&](std::size_t i) {
                double nearest = std::numeric_limits<double>::infinity();
                for (std::size_t c : chosen_) nearest = std::min(nearest, (pos_[i] - pos_[c]).squaredNorm());
                return -nearest;
            });
        }
        return beta.front();
    }

    NodeIds ids_;
    std::vector<Point> pos_;
    SelectOptions opt_;
    std::mt19937_64 rng_;
    std::vector<std::vector<std::size_t>> annuli_;
    std::vector<char> alive_;
    std::vector<std::size_t> chosen_;
};

NodeIds sorted_unique(NodeIds ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

SelectionResult select(const Mesh& mesh, const NodeIds& candidates, const SelectOptions& options) {
    require(!candidates.empty(), "selection needs a nonempty candidate set");
    require(options.radius > 0.0, "selection radius R must be positive");
    require(options.a > 0.0 && options.a < 1.0, "annulus factor a must lie in (0,1)");
    require(options.b > 1.0, "selection factor b must be > 1");
    NodeIds ids = sorted_unique(candidates);
    for (NodeId id : ids) require(id < mesh.node_count(), "candidate " + std::to_string(id) + " out of range");
    return Selector(mesh, std::move(ids), options).run();
}

SelectionResult select_multi(const Mesh& mesh, const SelectionParams& params) {
    require(!params.regions.empty(), "selection needs at least one region");
    std::set<NodeId> seen;
    SelectionResult all;
    for (std::size_t r = 0; r < params.regions.size(); ++r) {
        const RegionParams& region = params.regions[r];
        const NodeIds& group = mesh.group(region.group);
        require(!group.empty(), "region group '" + region.group + "' is empty");
        for (NodeId id : group)
            require(seen.insert(id).second,
                    "region group '" + region.group + "' overlaps an earlier region at node " + std::to_string(id));

        SelectOptions opt;
        opt.radius = region.radius;
        opt.a = params.a;
        opt.b = params.b;
        opt.strategy = params.strategy;
        opt.seed = detail::mix_seed(params.seed, r);
        opt.seed_point = region.seed_point;
        SelectionResult part = select(mesh, group, opt);
        all.selected.insert(all.selected.end(), part.selected.begin(), part.selected.end());
        all.trace.insert(all.trace.end(), part.trace.begin(), part.trace.end());
        all.annulus_count += part.annulus_count;
    }
    return all;
}

NodeIds enrich(const NodeIds& selected, const Mesh& mesh, const std::vector<std::string>& groups) {
    NodeIds out = selected;
    for (const std::string& name : groups) {
        const NodeIds& g = mesh.group(name);
        out.insert(out.end(), g.begin(), g.end());
    }
    return sorted_unique(std::move(out));
}

NodeIds select_random(const NodeIds& candidates, std::size_t k, std::uint64_t seed) {
    NodeIds pool = sorted_unique(candidates);
    require(k >= 1 && k <= pool.size(), "random selection size " + std::to_string(k) +
                                            " outside [1, " + std::to_string(pool.size()) + "]");
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + detail::uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::uint64_t draw_seed(std::uint64_t master, std::size_t index) {
    return detail::mix_seed(master, index);
}

BaselineStats random_baseline_stats(const std::vector<double>& errors, double reference) {
    require(errors.size() >= 2, "baseline statistics need at least 2 samples");
    const double n = static_cast<double>(errors.size());
    BaselineStats s;
    s.reference = reference;
    s.mean = detail::pairwise_sum(errors) / n;
    std::vector<double> sq(errors.size());
    for (std::size_t i = 0; i < errors.size(); ++i) sq[i] = (errors[i] - s.mean) * (errors[i] - s.mean);
    s.stddev = std::sqrt(detail::pairwise_sum(sq) / (n - 1.0));
    if (!(s.stddev > 0.0)) fail(ErrorCode::DegenerateSample, "sample standard deviation is zero");
    const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
    s.delta_min = (*lo - s.mean) / s.stddev;
    s.delta_max = (*hi - s.mean) / s.stddev;
    return s;
}

} // namespace morphkit
