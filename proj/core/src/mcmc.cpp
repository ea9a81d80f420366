#include "mrftrack/mcmc.hpp"

#include <algorithm>
#include <cmath>

namespace mrftrack {

double acceptance_probability(double loglik_new, double loglik_old, double logint_new,
                              double logint_old) noexcept {
    const double log_ratio = (loglik_new + logint_new) - (loglik_old + logint_old);
    if (std::isnan(log_ratio)) {
        return 0.0;
    }
    return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

void McmcConfig::validate() const {
    if (n_samples < 1) {
        throw std::invalid_argument("McmcConfig: n_samples must be >= 1");
    }
    motion.validate();
    interaction.validate();
}

TrackEstimate estimate_from_samples(const SampleSet& samples) {
    const std::size_t n = samples.target_count();
    std::vector<PoseAccumulator> acc(n);
    for (const JointParticle& p : samples.samples) {
        for (std::size_t i = 0; i < n; ++i) {
            acc[i].add(p[i]);
        }
    }
    TrackEstimate est;
    est.targets.reserve(n);
    for (const auto& a : acc) {
        est.targets.push_back(a.mean());
    }
    return est;
}

McmcStepResult mcmc_mrf_step(const SampleSet& previous, const Frame& frame,
                             const TemplateModel& appearance, const MrfGraph& graph,
                             const McmcConfig& cfg, Rng& rng) {
    if (previous.samples.empty()) {
        throw std::invalid_argument("mcmc_mrf_step: empty previous sample set");
    }
    if (graph.size() != previous.target_count()) {
        throw std::invalid_argument("mcmc_mrf_step: graph size does not match target count");
    }
    const ImageMrfModel model(frame, appearance, graph, cfg.motion, cfg.interaction);
    auto chain = run_mh_chain(model, previous.samples, cfg.n_samples, cfg.burn_in, rng);
    McmcStepResult out;
    out.samples.samples = std::move(chain.samples);
    out.stats = chain.stats;
    out.estimate = estimate_from_samples(out.samples);
    return out;
}

} // namespace mrftrack
