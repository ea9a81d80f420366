#pragma once

#include "mrftrack/geometry.hpp"
#include "mrftrack/rng.hpp"

namespace mrftrack {

/// Standard deviations of the oriented random-walk motion model.
struct MotionParams {
    double sigma_x = 5.0;      ///< forward displacement, pixels
    double sigma_y = 3.0;      ///< lateral displacement, pixels
    double sigma_theta = 0.4;  ///< heading change, radians

    void validate() const;
};

/// One draw (dx, dy, dtheta) in the target's own frame.
struct MotionDraw {
    double dx = 0.0;
    double dy = 0.0;
    double dtheta = 0.0;
};

[[nodiscard]] MotionDraw draw_motion(const MotionParams& params, Rng& rng);

/// Deterministic part of the transition: the heading is updated first and the
/// displacement is rotated by the *updated* heading.
[[nodiscard]] TargetState apply_motion(const TargetState& state, const MotionDraw& draw);

/// Inverse of apply_motion (heading difference taken in [-pi, pi)).
[[nodiscard]] MotionDraw recover_motion(const TargetState& next, const TargetState& prev);

[[nodiscard]] TargetState propagate_target(const TargetState& state, const MotionParams& params,
                                           Rng& rng);

/// Factored transition: every target moves independently, order preserved.
[[nodiscard]] JointParticle propagate_joint(const JointParticle& particle,
                                            const MotionParams& params, Rng& rng);

/// log p(next | prev) for a single target. The rotation has unit Jacobian, so
/// this is the sum of three zero-mean Gaussian log-densities of the recovered
/// draw.
[[nodiscard]] double log_transition_density(const TargetState& next, const TargetState& prev,
                                            const MotionParams& params);

} // namespace mrftrack
