#include "mrftrack/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mrftrack/error.hpp"

namespace mrftrack {

IntensityStats learn_template(std::span<const std::vector<double>> patches,
                              const PatchDims& dims) {
    dims.validate();
    if (patches.size() < 2) {
        throw ConfigError("learn_template: need at least 2 training patches, got " +
                          std::to_string(patches.size()));
    }
    const auto area = static_cast<std::size_t>(dims.area());
    std::vector<double> mean_image(area, 0.0);
    for (std::size_t p = 0; p < patches.size(); ++p) {
        if (patches[p].size() != area) {
            throw ConfigError("learn_template: patch " + std::to_string(p) + " has " +
                              std::to_string(patches[p].size()) + " pixels, expected " +
                              std::to_string(area));
        }
        for (std::size_t k = 0; k < area; ++k) {
            mean_image[k] += patches[p][k];
        }
    }
    double mu = 0.0;
    for (double& v : mean_image) {
        v /= static_cast<double>(patches.size());
        mu += v;
    }
    mu /= static_cast<double>(area);

    double sq = 0.0;
    for (const auto& patch : patches) {
        for (double v : patch) {
            sq += (v - mu) * (v - mu);
        }
    }
    const double sigma = std::sqrt(sq / static_cast<double>(area * patches.size()));
    return {mu, std::max(sigma, kMinTemplateSigma)};
}

TemplateModel::TemplateModel(IntensityStats foreground, IntensityStats background,
                             PatchDims dims, std::optional<double> outside)
    : fg_(foreground), bg_(background), dims_(dims), outside_(outside.value_or(background.mu)) {
    dims_.validate();
    if (!(fg_.sigma > 0.0) || !(bg_.sigma > 0.0)) {
        throw std::invalid_argument("TemplateModel: sigma_F and sigma_B must be positive");
    }
    if (!std::isfinite(fg_.mu) || !std::isfinite(bg_.mu) || fg_.mu == bg_.mu) {
        throw std::invalid_argument("TemplateModel: mu_F and mu_B must be finite and distinct");
    }
    if (!(outside_ >= 0.0 && outside_ <= 1.0)) {
        throw std::invalid_argument("TemplateModel: outside intensity must be in [0, 1]");
    }
}

namespace {

double combine(double sq_fg, double sq_bg, const TemplateModel& model) {
    return -0.5 * std::sqrt(sq_fg) / model.sigma_f() + 0.5 * std::sqrt(sq_bg) / model.sigma_b();
}

} // namespace

double patch_log_likelihood(std::span<const double> patch, const TemplateModel& model) {
    double sq_fg = 0.0;
    double sq_bg = 0.0;
    for (double v : patch) {
        sq_fg += (v - model.mu_f()) * (v - model.mu_f());
        sq_bg += (v - model.mu_b()) * (v - model.mu_b());
    }
    return combine(sq_fg, sq_bg, model);
}

double log_likelihood(const Frame& frame, const TargetState& state, const TemplateModel& model) {
    const double mu_f = model.mu_f();
    const double mu_b = model.mu_b();
    const double outside = model.outside_intensity();
    double sq_fg = 0.0;
    double sq_bg = 0.0;
    for_each_patch_point(state, model.dims(), [&](double px, double py) {
        const double v = frame.bilinear(px, py, outside);
        sq_fg += (v - mu_f) * (v - mu_f);
        sq_bg += (v - mu_b) * (v - mu_b);
    });
    return combine(sq_fg, sq_bg, model);
}

double joint_log_likelihood(const Frame& frame, const JointParticle& particle,
                            const TemplateModel& model) {
    double total = 0.0;
    for (const TargetState& t : particle.targets) {
        total += log_likelihood(frame, t, model);
    }
    return total;
}

} // namespace mrftrack
