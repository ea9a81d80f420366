#include "mrftrack/motion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mrftrack {
namespace {

double log_normal_pdf(double x, double sigma) {
    const double z = x / sigma;
    return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

} // namespace

void MotionParams::validate() const {
    if (!(sigma_x > 0.0) || !(sigma_y > 0.0) || !(sigma_theta > 0.0)) {
        throw std::invalid_argument("MotionParams: all standard deviations must be positive");
    }
}

MotionDraw draw_motion(const MotionParams& params, Rng& rng) {
    MotionDraw d;
    d.dx = params.sigma_x * standard_normal(rng);
    d.dy = params.sigma_y * standard_normal(rng);
    d.dtheta = params.sigma_theta * standard_normal(rng);
    return d;
}

TargetState apply_motion(const TargetState& state, const MotionDraw& draw) {
    const double theta = normalize_angle(state.theta + draw.dtheta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {state.x + c * draw.dx - s * draw.dy, state.y + s * draw.dx + c * draw.dy, theta};
}

MotionDraw recover_motion(const TargetState& next, const TargetState& prev) {
    const double c = std::cos(next.theta);
    const double s = std::sin(next.theta);
    const double ex = next.x - prev.x;
    const double ey = next.y - prev.y;
    return {c * ex + s * ey, -s * ex + c * ey, normalize_angle(next.theta - prev.theta)};
}

TargetState propagate_target(const TargetState& state, const MotionParams& params, Rng& rng) {
    return apply_motion(state, draw_motion(params, rng));
}

JointParticle propagate_joint(const JointParticle& particle, const MotionParams& params,
                              Rng& rng) {
    JointParticle out;
    out.targets.reserve(particle.size());
    for (const TargetState& t : particle.targets) {
        out.targets.push_back(propagate_target(t, params, rng));
    }
    return out;
}

double log_transition_density(const TargetState& next, const TargetState& prev,
                              const MotionParams& params) {
    const MotionDraw d = recover_motion(next, prev);
    return log_normal_pdf(d.dx, params.sigma_x) + log_normal_pdf(d.dy, params.sigma_y) +
           log_normal_pdf(d.dtheta, params.sigma_theta);
}

} // namespace mrftrack
