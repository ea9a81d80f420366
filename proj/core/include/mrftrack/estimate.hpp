#pragma once

#include <span>
#include <vector>

#include "mrftrack/geometry.hpp"

namespace mrftrack {

/// Point estimate of every target after one filter step.
struct TrackEstimate {
    std::vector<TargetState> targets;

    [[nodiscard]] std::size_t size() const noexcept { return targets.size(); }
};

/// Accumulates a (weighted) mean pose: arithmetic mean of position, circular
/// mean of heading via the mean of (cos, sin).
class PoseAccumulator {
public:
    void add(const TargetState& s, double weight = 1.0) noexcept;
    [[nodiscard]] TargetState mean() const;

private:
    double w_ = 0.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double c_ = 0.0;
    double s_ = 0.0;
};

} // namespace mrftrack
