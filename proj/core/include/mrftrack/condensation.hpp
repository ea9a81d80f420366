#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrftrack/appearance.hpp"
#include "mrftrack/estimate.hpp"
#include "mrftrack/motion.hpp"
#include "mrftrack/rng.hpp"

namespace mrftrack {

/// M weighted hypotheses for one target.
struct TargetParticles {
    std::vector<TargetState> particles;
    std::vector<double> weights;
};

/// One independent weighted particle set per target.
struct WeightedParticleSet {
    std::vector<TargetParticles> targets;

    /// m copies of each pose with uniform weights.
    [[nodiscard]] static WeightedParticleSet at_poses(std::span<const TargetState> poses,
                                                      std::size_t m);
};

struct CondensationConfig {
    std::size_t particles_per_target = 10;
    MotionParams motion;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct CondensationStepResult {
    WeightedParticleSet set;
    TrackEstimate estimate;
    double mean_ess = 0.0;               ///< effective sample size, averaged over targets
    std::size_t degenerate_targets = 0;  ///< targets whose weights fell back to uniform
};

/// Interaction-unaware baseline: for every target independently, resample
/// proportionally to the previous weights (systematic), propagate through the
/// motion model, and reweight by the template likelihood.
[[nodiscard]] CondensationStepResult condensation_step(const WeightedParticleSet& previous,
                                                       const Frame& frame,
                                                       const TemplateModel& appearance,
                                                       const CondensationConfig& cfg, Rng& rng);

} // namespace mrftrack
