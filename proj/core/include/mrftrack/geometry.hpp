#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mrftrack {

/// Pose of one target in frame coordinates. Pixel (c, r) has its center at
/// (c + 0.5, r + 0.5); theta is the heading of the target's long axis.
struct TargetState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    friend bool operator==(const TargetState&, const TargetState&) = default;
};

/// Wraps an angle into [-pi, pi). Throws std::invalid_argument on NaN/Inf.
[[nodiscard]] double normalize_angle(double theta);

/// Validated constructor: finite coordinates, heading normalized.
[[nodiscard]] TargetState make_state(double x, double y, double theta);

/// Euclidean distance between the two centers.
[[nodiscard]] inline double center_distance(const TargetState& a, const TargetState& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Hypothesis for all n targets at once. Index i is the same physical target
/// in every particle and every frame.
struct JointParticle {
    std::vector<TargetState> targets;

    [[nodiscard]] std::size_t size() const noexcept { return targets.size(); }
    [[nodiscard]] const TargetState& operator[](std::size_t i) const { return targets[i]; }
    [[nodiscard]] TargetState& operator[](std::size_t i) { return targets[i]; }

    friend bool operator==(const JointParticle&, const JointParticle&) = default;
};

/// Footprint of a target: `length` pixels along the heading, `width` across.
struct PatchDims {
    int length = 32;
    int width = 10;

    [[nodiscard]] int area() const noexcept { return length * width; }
    void validate() const;

    friend bool operator==(const PatchDims&, const PatchDims&) = default;
};

/// Row-major grayscale image with intensities in [0, 1].
class Frame {
public:
    Frame() = default;
    Frame(int width, int height, double fill = 0.0);
    Frame(int width, int height, std::vector<double> pixels);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::span<const double> pixels() const noexcept { return pixels_; }

    [[nodiscard]] double at(int col, int row) const {
        return pixels_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                       static_cast<std::size_t>(col)];
    }
    /// Value is clamped into [0, 1].
    void set(int col, int row, double value);

    [[nodiscard]] bool contains(double px, double py) const noexcept {
        return px >= 0.0 && py >= 0.0 && px < width_ && py < height_;
    }

    /// Bilinear interpolation between pixel centers. Points outside the image
    /// return `outside`; points inside but past the outermost centers clamp to
    /// the edge pixels.
    [[nodiscard]] double bilinear(double px, double py, double outside) const noexcept;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> pixels_;
};

/// Visits the length x width sampling grid of a pose, in patch order
/// (row l across the target, column k along it; index l * length + k), and
/// calls fn(px, py) with the continuous frame position of each grid point.
template <typename Fn>
void for_each_patch_point(const TargetState& state, const PatchDims& dims, Fn&& fn) {
    const double c = std::cos(state.theta);
    const double s = std::sin(state.theta);
    const double u0 = -0.5 * (dims.length - 1);
    const double v0 = -0.5 * (dims.width - 1);
    for (int l = 0; l < dims.width; ++l) {
        const double v = v0 + l;
        const double bx = state.x - v * s;
        const double by = state.y + v * c;
        for (int k = 0; k < dims.length; ++k) {
            const double u = u0 + k;
            fn(bx + u * c, by + u * s);
        }
    }
}

/// F(X): the frame sampled on the pose's grid (bilinear), `outside` for grid
/// points that fall off the frame.
[[nodiscard]] std::vector<double> sample_patch(const Frame& frame, const TargetState& state,
                                               const PatchDims& dims, double outside);

/// Oriented length x width rectangle of a pose with its trig precomputed.
/// Containment is half-open in the target frame:
/// -length/2 <= u < length/2 and -width/2 <= v < width/2.
struct OrientedRect {
    OrientedRect(const TargetState& state, const PatchDims& dims) noexcept
        : cx(state.x), cy(state.y), c(std::cos(state.theta)), s(std::sin(state.theta)),
          half_length(0.5 * dims.length), half_width(0.5 * dims.width) {}

    [[nodiscard]] bool contains(double px, double py) const noexcept {
        const double dx = px - cx;
        const double dy = py - cy;
        const double u = dx * c + dy * s;
        const double v = -dx * s + dy * c;
        return u >= -half_length && u < half_length && v >= -half_width && v < half_width;
    }

    double cx, cy, c, s, half_length, half_width;
};

[[nodiscard]] inline bool rect_contains(const TargetState& state, const PatchDims& dims,
                                        double px, double py) noexcept {
    return OrientedRect(state, dims).contains(px, py);
}

/// Integer pixel index bounds [col_min, col_max] x [row_min, row_max] that can
/// hold a covered pixel center.
struct PixelBox {
    int col_min = 0;
    int col_max = -1;
    int row_min = 0;
    int row_max = -1;

    [[nodiscard]] bool empty() const noexcept { return col_min > col_max || row_min > row_max; }
};

[[nodiscard]] PixelBox rect_pixel_box(const TargetState& state, const PatchDims& dims) noexcept;
[[nodiscard]] PixelBox intersect(const PixelBox& a, const PixelBox& b) noexcept;

/// Calls fn(col, row) for every pixel whose center lies in the rectangle,
/// restricted to `clip`.
template <typename Fn>
void for_each_covered_pixel(const TargetState& state, const PatchDims& dims, const PixelBox& clip,
                            Fn&& fn) {
    const PixelBox box = intersect(rect_pixel_box(state, dims), clip);
    const OrientedRect rect(state, dims);
    for (int r = box.row_min; r <= box.row_max; ++r) {
        for (int col = box.col_min; col <= box.col_max; ++col) {
            if (rect.contains(col + 0.5, r + 0.5)) {
                fn(col, r);
            }
        }
    }
}

/// Number of integer pixel centers covered by both rectangles. Symmetric.
[[nodiscard]] int rect_overlap_count(const TargetState& a, const TargetState& b,
                                     const PatchDims& dims) noexcept;

} // namespace mrftrack
