#include "mrftrack/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace mrftrack {

void PoseAccumulator::add(const TargetState& s, double weight) noexcept {
    w_ += weight;
    x_ += weight * s.x;
    y_ += weight * s.y;
    c_ += weight * std::cos(s.theta);
    s_ += weight * std::sin(s.theta);
}

TargetState PoseAccumulator::mean() const {
    if (!(w_ > 0.0)) {
        throw std::logic_error("PoseAccumulator: no weight accumulated");
    }
    return make_state(x_ / w_, y_ / w_, std::atan2(s_, c_));
}

} // namespace mrftrack
