#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrftrack/geometry.hpp"

namespace mrftrack {

/// Scalar intensity mean and spread learned from a set of patches.
struct IntensityStats {
    double mu = 0.0;
    double sigma = 0.0;
};

/// Learned sigmas never go below this.
inline constexpr double kMinTemplateSigma = 1e-3;

/// mu is the mean of the per-pixel mean image; sigma is the RMS deviation of
/// every training pixel from mu (floored at kMinTemplateSigma). Throws
/// ConfigError for fewer than two patches or a patch of the wrong size.
[[nodiscard]] IntensityStats learn_template(std::span<const std::vector<double>> patches,
                                            const PatchDims& dims);

/// Foreground/background appearance model. Immutable once built.
class TemplateModel {
public:
    /// `outside` is the intensity used for patch samples that fall off the
    /// frame; defaults to the background mean.
    TemplateModel(IntensityStats foreground, IntensityStats background, PatchDims dims = {},
                  std::optional<double> outside = std::nullopt);

    [[nodiscard]] double mu_f() const noexcept { return fg_.mu; }
    [[nodiscard]] double sigma_f() const noexcept { return fg_.sigma; }
    [[nodiscard]] double mu_b() const noexcept { return bg_.mu; }
    [[nodiscard]] double sigma_b() const noexcept { return bg_.sigma; }
    [[nodiscard]] const PatchDims& dims() const noexcept { return dims_; }
    [[nodiscard]] double outside_intensity() const noexcept { return outside_; }

private:
    IntensityStats fg_;
    IntensityStats bg_;
    PatchDims dims_;
    double outside_;
};

/// -1/2 ||F - mu_F|| / sigma_F + 1/2 ||F - mu_B|| / sigma_B with ||.|| the L2
/// norm of the patch minus the broadcast scalar mean. No per-pixel
/// normalization.
[[nodiscard]] double patch_log_likelihood(std::span<const double> patch,
                                          const TemplateModel& model);

/// Template score of one target hypothesis; samples the patch on the fly.
[[nodiscard]] double log_likelihood(const Frame& frame, const TargetState& state,
                                    const TemplateModel& model);

/// Sum of the per-target scores.
[[nodiscard]] double joint_log_likelihood(const Frame& frame, const JointParticle& particle,
                                          const TemplateModel& model);

} // namespace mrftrack
