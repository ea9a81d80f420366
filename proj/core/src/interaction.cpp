#include "mrftrack/interaction.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mrftrack/error.hpp"

namespace mrftrack {

std::string_view to_string(OverlapMode mode) noexcept {
    return mode == OverlapMode::fraction ? "fraction" : "raw-count";
}

OverlapMode parse_overlap_mode(std::string_view text) {
    if (text == "raw-count") {
        return OverlapMode::raw_count;
    }
    if (text == "fraction") {
        return OverlapMode::fraction;
    }
    throw ConfigError("overlap_mode must be 'raw-count' or 'fraction', got '" +
                      std::string(text) + "'");
}

void InteractionParams::validate() const {
    if (!(strength > 0.0)) {
        throw std::invalid_argument("InteractionParams: strength must be positive");
    }
    if (!(neighbor_radius > 0.0)) {
        throw std::invalid_argument("InteractionParams: neighbor_radius must be positive");
    }
}

void MrfGraph::add_edge(std::size_t i, std::size_t j) {
    if (i >= size() || j >= size()) {
        throw std::out_of_range("MrfGraph::add_edge: target index out of range");
    }
    if (i == j) {
        throw std::invalid_argument("MrfGraph::add_edge: self edge");
    }
    if (has_edge(i, j)) {
        return;
    }
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
    const std::pair<std::size_t, std::size_t> edge{std::min(i, j), std::max(i, j)};
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), edge), edge);
}

bool MrfGraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& adj = adjacency_.at(i);
    return std::find(adj.begin(), adj.end(), j) != adj.end();
}

MrfGraph build_mrf(std::span<const TargetState> reference, const InteractionParams& params) {
    params.validate();
    MrfGraph graph(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        for (std::size_t j = i + 1; j < reference.size(); ++j) {
            if (center_distance(reference[i], reference[j]) <= params.neighbor_radius) {
                graph.add_edge(i, j);
            }
        }
    }
    return graph;
}

double log_potential(const TargetState& a, const TargetState& b, const PatchDims& dims,
                     const InteractionParams& params) {
    const int count = rect_overlap_count(a, b, dims);
    if (count == 0) {
        return 0.0;
    }
    double p = static_cast<double>(count);
    if (params.overlap_mode == OverlapMode::fraction) {
        p /= static_cast<double>(dims.area());
    }
    return -params.strength * p;
}

double local_log_interaction(std::span<const TargetState> joint, const TargetState& candidate,
                             const MrfGraph& graph, std::size_t i, const PatchDims& dims,
                             const InteractionParams& params) {
    if (i >= graph.size() || joint.size() != graph.size()) {
        throw std::out_of_range("local_log_interaction: target index or particle size mismatch");
    }
    double total = 0.0;
    for (std::size_t j : graph.neighbors(i)) {
        total += log_potential(candidate, joint[j], dims, params);
    }
    return total;
}

double local_log_interaction(const JointParticle& particle, const MrfGraph& graph, std::size_t i,
                             const PatchDims& dims, const InteractionParams& params) {
    if (i >= particle.size()) {
        throw std::out_of_range("local_log_interaction: target index out of range");
    }
    return local_log_interaction(particle.targets, particle.targets[i], graph, i, dims, params);
}

} // namespace mrftrack
