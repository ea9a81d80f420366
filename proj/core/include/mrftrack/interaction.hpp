#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mrftrack/geometry.hpp"

namespace mrftrack {

enum class OverlapMode {
    raw_count,  ///< p = number of shared pixel centers
    fraction,   ///< p = shared pixel centers / patch area
};

[[nodiscard]] std::string_view to_string(OverlapMode mode) noexcept;
/// Accepts "raw-count" or "fraction"; throws ConfigError otherwise.
[[nodiscard]] OverlapMode parse_overlap_mode(std::string_view text);

struct InteractionParams {
    double strength = 5000.0;
    OverlapMode overlap_mode = OverlapMode::raw_count;
    double neighbor_radius = 64.0;  ///< pixels, center to center

    void validate() const;
};

/// Undirected interaction graph over target indices, rebuilt every frame.
class MrfGraph {
public:
    explicit MrfGraph(std::size_t n = 0) : adjacency_(n) {}

    /// Adds {i, j}; self edges are rejected, duplicates ignored.
    void add_edge(std::size_t i, std::size_t j);

    [[nodiscard]] std::size_t size() const noexcept { return adjacency_.size(); }
    [[nodiscard]] std::span<const std::size_t> neighbors(std::size_t i) const {
        return adjacency_.at(i);
    }
    [[nodiscard]] bool has_edge(std::size_t i, std::size_t j) const;
    /// Edges as (i, j) with i < j, sorted.
    [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept {
        return edges_;
    }

private:
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// Edge (i, j) iff the centers are within neighbor_radius.
[[nodiscard]] MrfGraph build_mrf(std::span<const TargetState> reference,
                                 const InteractionParams& params);

/// log psi(a, b) = -strength * p. Always <= 0, and 0 exactly when the
/// footprints share no pixel.
[[nodiscard]] double log_potential(const TargetState& a, const TargetState& b,
                                   const PatchDims& dims, const InteractionParams& params);

/// Sum of log_potential between `candidate` (standing in for target i) and
/// every graph neighbor of i in `joint`.
[[nodiscard]] double local_log_interaction(std::span<const TargetState> joint,
                                           const TargetState& candidate, const MrfGraph& graph,
                                           std::size_t i, const PatchDims& dims,
                                           const InteractionParams& params);

/// Same, evaluated at target i's own state in the particle.
[[nodiscard]] double local_log_interaction(const JointParticle& particle, const MrfGraph& graph,
                                           std::size_t i, const PatchDims& dims,
                                           const InteractionParams& params);

} // namespace mrftrack
