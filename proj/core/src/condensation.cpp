#include "mrftrack/condensation.hpp"

#include <stdexcept>

#include "mrftrack/resample.hpp"

namespace mrftrack {

WeightedParticleSet WeightedParticleSet::at_poses(std::span<const TargetState> poses,
                                                  std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("WeightedParticleSet: need at least one particle per target");
    }
    WeightedParticleSet set;
    set.targets.reserve(poses.size());
    for (const TargetState& pose : poses) {
        set.targets.push_back({std::vector<TargetState>(m, pose),
                               std::vector<double>(m, 1.0 / static_cast<double>(m))});
    }
    return set;
}

void CondensationConfig::validate() const {
    if (particles_per_target < 1) {
        throw std::invalid_argument("CondensationConfig: particles_per_target must be >= 1");
    }
    motion.validate();
}

CondensationStepResult condensation_step(const WeightedParticleSet& previous, const Frame& frame,
                                         const TemplateModel& appearance,
                                         const CondensationConfig& cfg, Rng& rng) {
    const std::size_t m = cfg.particles_per_target;
    CondensationStepResult out;
    out.set.targets.resize(previous.targets.size());
    out.estimate.targets.reserve(previous.targets.size());
    std::vector<double> log_w(m);
    double ess_total = 0.0;

    for (std::size_t t = 0; t < previous.targets.size(); ++t) {
        const TargetParticles& prev = previous.targets[t];
        if (prev.particles.empty() || prev.particles.size() != prev.weights.size()) {
            throw std::invalid_argument("condensation_step: malformed particle set for a target");
        }
        TargetParticles& next = out.set.targets[t];
        next.particles.reserve(m);
        for (std::size_t k : resample_systematic(prev.weights, m, rng)) {
            next.particles.push_back(propagate_target(prev.particles[k], cfg.motion, rng));
        }
        for (std::size_t k = 0; k < m; ++k) {
            log_w[k] = log_likelihood(frame, next.particles[k], appearance);
        }
        if (!normalize_log_weights(log_w, next.weights)) {
            ++out.degenerate_targets;
        }
        ess_total += effective_sample_size(next.weights);

        PoseAccumulator acc;
        for (std::size_t k = 0; k < m; ++k) {
            acc.add(next.particles[k], next.weights[k]);
        }
        out.estimate.targets.push_back(acc.mean());
    }
    if (!previous.targets.empty()) {
        out.mean_ess = ess_total / static_cast<double>(previous.targets.size());
    }
    return out;
}

} // namespace mrftrack
