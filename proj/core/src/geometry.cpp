#include "mrftrack/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mrftrack {

double normalize_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("normalize_angle: non-finite angle");
    }
    if (theta >= -std::numbers::pi && theta < std::numbers::pi) {
        return theta;
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta + std::numbers::pi, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    r -= std::numbers::pi;
    // fmod can land exactly on +pi after the shift for tiny negative inputs.
    if (r >= std::numbers::pi) {
        r -= two_pi;
    }
    return r;
}

TargetState make_state(double x, double y, double theta) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw std::invalid_argument("TargetState: non-finite position");
    }
    return {x, y, normalize_angle(theta)};
}

void PatchDims::validate() const {
    if (length <= 0 || width <= 0) {
        throw std::invalid_argument("PatchDims: length and width must be positive, got " +
                                    std::to_string(length) + "x" + std::to_string(width));
    }
}

Frame::Frame(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("Frame: dimensions must be positive");
    }
    if (!(fill >= 0.0 && fill <= 1.0)) {
        throw std::invalid_argument("Frame: fill intensity outside [0, 1]");
    }
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Frame::Frame(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("Frame: dimensions must be positive");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("Frame: pixel count does not match width x height");
    }
    for (double v : pixels_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("Frame: intensity outside [0, 1]");
        }
    }
}

void Frame::set(int col, int row, double value) {
    pixels_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)] = std::clamp(value, 0.0, 1.0);
}

double Frame::bilinear(double px, double py, double outside) const noexcept {
    if (!contains(px, py)) {
        return outside;
    }
    const double fx = px - 0.5;
    const double fy = py - 0.5;
    const double x0f = std::floor(fx);
    const double y0f = std::floor(fy);
    const double ax = fx - x0f;
    const double ay = fy - y0f;
    const int x0 = static_cast<int>(x0f);
    const int y0 = static_cast<int>(y0f);
    const int xa = std::clamp(x0, 0, width_ - 1);
    const int xb = std::clamp(x0 + 1, 0, width_ - 1);
    const int ya = std::clamp(y0, 0, height_ - 1);
    const int yb = std::clamp(y0 + 1, 0, height_ - 1);
    const double top = (1.0 - ax) * at(xa, ya) + ax * at(xb, ya);
    const double bottom = (1.0 - ax) * at(xa, yb) + ax * at(xb, yb);
    return (1.0 - ay) * top + ay * bottom;
}

std::vector<double> sample_patch(const Frame& frame, const TargetState& state,
                                 const PatchDims& dims, double outside) {
    dims.validate();
    std::vector<double> patch;
    patch.reserve(static_cast<std::size_t>(dims.area()));
    for_each_patch_point(state, dims, [&](double px, double py) {
        patch.push_back(frame.bilinear(px, py, outside));
    });
    return patch;
}

PixelBox rect_pixel_box(const TargetState& state, const PatchDims& dims) noexcept {
    const double c = std::abs(std::cos(state.theta));
    const double s = std::abs(std::sin(state.theta));
    const double ex = 0.5 * (dims.length * c + dims.width * s);
    const double ey = 0.5 * (dims.length * s + dims.width * c);
    // Pixel centers at col + 0.5 within [x - ex, x + ex].
    return {static_cast<int>(std::floor(state.x - ex - 0.5)),
            static_cast<int>(std::ceil(state.x + ex - 0.5)),
            static_cast<int>(std::floor(state.y - ey - 0.5)),
            static_cast<int>(std::ceil(state.y + ey - 0.5))};
}

PixelBox intersect(const PixelBox& a, const PixelBox& b) noexcept {
    return {std::max(a.col_min, b.col_min), std::min(a.col_max, b.col_max),
            std::max(a.row_min, b.row_min), std::min(a.row_max, b.row_max)};
}

int rect_overlap_count(const TargetState& a, const TargetState& b,
                       const PatchDims& dims) noexcept {
    const double reach = std::hypot(dims.length, dims.width);
    if (center_distance(a, b) > reach) {
        return 0;
    }
    const PixelBox box = intersect(rect_pixel_box(a, dims), rect_pixel_box(b, dims));
    const OrientedRect ra(a, dims);
    const OrientedRect rb(b, dims);
    int count = 0;
    for (int r = box.row_min; r <= box.row_max; ++r) {
        for (int col = box.col_min; col <= box.col_max; ++col) {
            const double px = col + 0.5;
            const double py = r + 0.5;
            if (ra.contains(px, py) && rb.contains(px, py)) {
                ++count;
            }
        }
    }
    return count;
}

} // namespace mrftrack
