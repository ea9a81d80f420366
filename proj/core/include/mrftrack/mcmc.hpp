#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mrftrack/appearance.hpp"
#include "mrftrack/estimate.hpp"
#include "mrftrack/geometry.hpp"
#include "mrftrack/interaction.hpp"
#include "mrftrack/motion.hpp"
#include "mrftrack/rng.hpp"

namespace mrftrack {

/// min(1, exp((loglik_new + logint_new) - (loglik_old + logint_old))),
/// evaluated in log space so -5000 * p exponents never overflow or produce NaN.
[[nodiscard]] double acceptance_probability(double loglik_new, double loglik_old,
                                            double logint_new, double logint_old) noexcept;

struct ChainStats {
    std::size_t proposals = 0;
    std::size_t accepted = 0;

    [[nodiscard]] double acceptance_rate() const noexcept {
        return proposals == 0 ? 0.0
                              : static_cast<double>(accepted) / static_cast<double>(proposals);
    }
};

/// What the joint Metropolis-Hastings chain needs from a state space:
///  - propose(prev_target, i, rng): draw from the single-target transition
///  - log_likelihood(i, s): observation score of target i at s
///  - log_interaction(i, s, joint): sum of pairwise log potentials between s
///    (standing in for target i) and i's neighbors in `joint`
/// Joint is an indexable per-target container (size(), operator[]).
template <typename M>
concept ChainModel = requires(const M& model, std::size_t i, const typename M::State& state,
                              const typename M::Joint& joint, Rng& rng) {
    typename M::State;
    typename M::Joint;
    { model.propose(state, i, rng) } -> std::same_as<typename M::State>;
    { model.log_likelihood(i, state) } -> std::convertible_to<double>;
    { model.log_interaction(i, state, joint) } -> std::convertible_to<double>;
    { joint.size() } -> std::convertible_to<std::size_t>;
};

template <typename Joint>
struct ChainResult {
    std::vector<Joint> samples;
    ChainStats stats;
};

/// One frame of the interaction-aware MCMC filter.
///
/// The chain starts from a uniformly chosen previous particle pushed through
/// the full factored transition. Each iteration then picks a random previous
/// particle r and a random target i, proposes target i from the transition
/// applied to particle r's target i, and accepts with the ratio of target i's
/// likelihood times its incident interaction potentials. Because proposals are
/// drawn from the transition itself, the transition terms cancel and never
/// need to be evaluated. After `burn_in` discarded iterations, the current
/// joint state is appended once per iteration, so exactly `n_samples` are
/// returned regardless of the acceptance rate.
template <ChainModel Model>
[[nodiscard]] ChainResult<typename Model::Joint> run_mh_chain(
    const Model& model, const std::vector<typename Model::Joint>& previous,
    std::size_t n_samples, std::size_t burn_in, Rng& rng) {
    using Joint = typename Model::Joint;
    if (previous.empty()) {
        throw std::invalid_argument("run_mh_chain: empty previous sample set");
    }
    const std::size_t n = previous.front().size();
    for (const Joint& p : previous) {
        if (p.size() != n) {
            throw std::invalid_argument("run_mh_chain: previous particles differ in target count");
        }
    }
    if (n == 0) {
        throw std::invalid_argument("run_mh_chain: particles hold no targets");
    }

    ChainResult<Joint> result;
    result.samples.reserve(n_samples);

    Joint current = previous[uniform_index(rng, previous.size())];
    std::vector<double> loglik(n);
    for (std::size_t i = 0; i < n; ++i) {
        current[i] = model.propose(current[i], i, rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        loglik[i] = model.log_likelihood(i, current[i]);
    }

    const std::size_t total = burn_in + n_samples;
    for (std::size_t it = 0; it < total; ++it) {
        const std::size_t r = uniform_index(rng, previous.size());
        const std::size_t i = uniform_index(rng, n);
        auto candidate = model.propose(previous[r][i], i, rng);
        const double ll_new = model.log_likelihood(i, candidate);
        const double li_new = model.log_interaction(i, candidate, current);
        const double li_old = model.log_interaction(i, current[i], current);
        const double alpha = acceptance_probability(ll_new, loglik[i], li_new, li_old);
        ++result.stats.proposals;
        if (uniform01(rng) < alpha) {
            current[i] = std::move(candidate);
            loglik[i] = ll_new;
            ++result.stats.accepted;
        }
        if (it >= burn_in) {
            result.samples.push_back(current);
        }
    }
    return result;
}

/// Unweighted joint sample set for one frame.
struct SampleSet {
    std::vector<JointParticle> samples;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] std::size_t target_count() const noexcept {
        return samples.empty() ? 0 : samples.front().size();
    }
};

struct McmcConfig {
    std::size_t n_samples = 200;
    std::size_t burn_in = 0;
    MotionParams motion;
    InteractionParams interaction;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Frame + template + per-frame graph as a ChainModel over image poses.
class ImageMrfModel {
public:
    using State = TargetState;
    using Joint = JointParticle;

    ImageMrfModel(const Frame& frame, const TemplateModel& appearance, const MrfGraph& graph,
                  const MotionParams& motion, const InteractionParams& interaction)
        : frame_(frame), appearance_(appearance), graph_(graph), motion_(motion),
          interaction_(interaction) {}

    [[nodiscard]] State propose(const State& prev, std::size_t /*i*/, Rng& rng) const {
        return propagate_target(prev, motion_, rng);
    }
    [[nodiscard]] double log_likelihood(std::size_t /*i*/, const State& s) const {
        return mrftrack::log_likelihood(frame_, s, appearance_);
    }
    [[nodiscard]] double log_interaction(std::size_t i, const State& s, const Joint& joint) const {
        return local_log_interaction(joint.targets, s, graph_, i, appearance_.dims(), interaction_);
    }

private:
    const Frame& frame_;
    const TemplateModel& appearance_;
    const MrfGraph& graph_;
    const MotionParams& motion_;
    const InteractionParams& interaction_;
};

struct McmcStepResult {
    SampleSet samples;
    TrackEstimate estimate;
    ChainStats stats;
};

/// Per-target sample mean (circular mean for heading).
[[nodiscard]] TrackEstimate estimate_from_samples(const SampleSet& samples);

[[nodiscard]] McmcStepResult mcmc_mrf_step(const SampleSet& previous, const Frame& frame,
                                           const TemplateModel& appearance,
                                           const MrfGraph& graph, const McmcConfig& cfg,
                                           Rng& rng);

} // namespace mrftrack
