#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mrftrack/geometry.hpp"
#include "mrftrack/rng.hpp"

using namespace mrftrack;

namespace {

constexpr double kPi = std::numbers::pi;

Frame ramp_frame(int w, int h) {
    std::vector<double> px(static_cast<std::size_t>(w * h));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            px[static_cast<std::size_t>(r * w + c)] = ((c * 7 + r * 13) % 97) / 96.0;
        }
    }
    return Frame(w, h, std::move(px));
}

// Independent containment: point-in-convex-polygon against the four corners.
bool corner_contains(const TargetState& s, const PatchDims& d, double px, double py) {
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    const double hl = 0.5 * d.length;
    const double hw = 0.5 * d.width;
    const double corners[4][2] = {{-hl, -hw}, {hl, -hw}, {hl, hw}, {-hl, hw}};
    double wx[4];
    double wy[4];
    for (int k = 0; k < 4; ++k) {
        wx[k] = s.x + corners[k][0] * c - corners[k][1] * sn;
        wy[k] = s.y + corners[k][0] * sn + corners[k][1] * c;
    }
    for (int k = 0; k < 4; ++k) {
        const int n = (k + 1) % 4;
        const double cross = (wx[n] - wx[k]) * (py - wy[k]) - (wy[n] - wy[k]) * (px - wx[k]);
        if (cross < 0.0) {
            return false;
        }
    }
    return true;
}

int brute_overlap(const TargetState& a, const TargetState& b, const PatchDims& d) {
    int count = 0;
    const int x0 = static_cast<int>(std::floor(std::min(a.x, b.x))) - 40;
    const int x1 = static_cast<int>(std::ceil(std::max(a.x, b.x))) + 40;
    const int y0 = static_cast<int>(std::floor(std::min(a.y, b.y))) - 40;
    const int y1 = static_cast<int>(std::ceil(std::max(a.y, b.y))) + 40;
    for (int r = y0; r <= y1; ++r) {
        for (int c = x0; c <= x1; ++c) {
            if (corner_contains(a, d, c + 0.5, r + 0.5) && corner_contains(b, d, c + 0.5, r + 0.5)) {
                ++count;
            }
        }
    }
    return count;
}

} // namespace

TEST(NormalizeAngle, WrapsIntoHalfOpenRange) {
    EXPECT_NEAR(normalize_angle(1.5 * kPi), -0.5 * kPi, 1e-12);
    EXPECT_NEAR(normalize_angle(-1.5 * kPi), 0.5 * kPi, 1e-12);
    EXPECT_DOUBLE_EQ(normalize_angle(kPi), -kPi);
    EXPECT_DOUBLE_EQ(normalize_angle(-kPi), -kPi);
    EXPECT_NEAR(normalize_angle(7.0 * kPi + 0.25), -kPi + 0.25, 1e-9);
    for (double t = -20.0; t < 20.0; t += 0.37) {
        const double n = normalize_angle(t);
        EXPECT_GE(n, -kPi);
        EXPECT_LT(n, kPi);
        EXPECT_NEAR(std::remainder(n - t, 2.0 * kPi), 0.0, 1e-9);
    }
}

TEST(NormalizeAngle, RejectsNonFinite) {
    EXPECT_THROW((void)normalize_angle(std::numeric_limits<double>::quiet_NaN()),
                 std::invalid_argument);
    EXPECT_THROW((void)normalize_angle(std::numeric_limits<double>::infinity()),
                 std::invalid_argument);
    EXPECT_THROW((void)make_state(std::nan(""), 0.0, 0.0), std::invalid_argument);
}

TEST(Frame, ValidatesConstruction) {
    EXPECT_THROW(Frame(0, 5), std::invalid_argument);
    EXPECT_THROW(Frame(3, 3, 1.5), std::invalid_argument);
    EXPECT_THROW(Frame(2, 2, std::vector<double>(3, 0.0)), std::invalid_argument);
    EXPECT_THROW(Frame(1, 1, std::vector<double>{-0.1}), std::invalid_argument);
    Frame f(4, 3, 0.5);
    f.set(1, 2, 3.0);
    EXPECT_DOUBLE_EQ(f.at(1, 2), 1.0);
}

TEST(Frame, BilinearAtCentersMidpointsAndOutside) {
    const Frame f = ramp_frame(9, 7);
    for (int r = 0; r < 7; ++r) {
        for (int c = 0; c < 9; ++c) {
            EXPECT_DOUBLE_EQ(f.bilinear(c + 0.5, r + 0.5, -1.0), f.at(c, r));
        }
    }
    EXPECT_NEAR(f.bilinear(3.0, 2.5, -1.0), 0.5 * (f.at(2, 2) + f.at(3, 2)), 1e-12);
    EXPECT_NEAR(f.bilinear(3.0, 3.0, -1.0),
                0.25 * (f.at(2, 2) + f.at(3, 2) + f.at(2, 3) + f.at(3, 3)), 1e-12);
    EXPECT_EQ(f.bilinear(-0.01, 3.0, 0.42), 0.42);
    EXPECT_EQ(f.bilinear(9.0, 3.0, 0.42), 0.42);
    // Past the outermost centers but inside the image: clamps to the edge.
    EXPECT_DOUBLE_EQ(f.bilinear(0.1, 0.2, -1.0), f.at(0, 0));
    EXPECT_DOUBLE_EQ(f.bilinear(8.9, 6.9, -1.0), f.at(8, 6));
}

TEST(SamplePatch, AxisAlignedGridHitsPixelCenters) {
    const Frame f = ramp_frame(60, 30);
    const PatchDims d{32, 10};
    const int c0 = 5;
    const int r0 = 7;
    // Grid point (k, l) sits at (c0 + k + 0.5, r0 + l + 0.5).
    const TargetState s{c0 + 0.5 + 15.5, r0 + 0.5 + 4.5, 0.0};
    const auto patch = sample_patch(f, s, d, -1.0);
    ASSERT_EQ(patch.size(), 320u);
    for (int l = 0; l < d.width; ++l) {
        for (int k = 0; k < d.length; ++k) {
            EXPECT_DOUBLE_EQ(patch[static_cast<std::size_t>(l * d.length + k)], f.at(c0 + k, r0 + l));
        }
    }
}

TEST(SamplePatch, RotatedGridMatchesNearestNeighbour) {
    const Frame f = ramp_frame(60, 60);
    const PatchDims d{32, 10};
    // theta = pi/2: u runs along +y, v along -x.
    const TargetState s{30.0, 30.0, 0.5 * kPi};
    const auto patch = sample_patch(f, s, d, -1.0);
    for (int l = 0; l < d.width; ++l) {
        for (int k = 0; k < d.length; ++k) {
            const double u = k - 15.5;
            const double v = l - 4.5;
            const double px = s.x - v;
            const double py = s.y + u;
            const int col = static_cast<int>(std::floor(px));
            const int row = static_cast<int>(std::floor(py));
            EXPECT_NEAR(patch[static_cast<std::size_t>(l * d.length + k)], f.at(col, row), 1e-9);
        }
    }
}

TEST(SamplePatch, OutsidePointsUseOutsideIntensity) {
    const Frame f(20, 20, 0.3);
    const auto patch = sample_patch(f, {0.0, 0.0, 0.0}, {32, 10}, 0.9);
    int outside = 0;
    for (double v : patch) {
        outside += v == 0.9;
    }
    EXPECT_GT(outside, 0);
    EXPECT_LT(outside, 320);
}

TEST(Overlap, AxisAlignedAreaIsExactlyLengthTimesWidth) {
    const PatchDims d{32, 10};
    const TargetState s{16.0, 5.0, 0.0};
    EXPECT_EQ(rect_overlap_count(s, s, d), 320);
    int covered = 0;
    for_each_covered_pixel(s, d, {-100, 100, -100, 100}, [&](int, int) { ++covered; });
    EXPECT_EQ(covered, 320);
    EXPECT_TRUE(rect_contains(s, d, 0.0, 0.0));
    EXPECT_FALSE(rect_contains(s, d, 32.0, 5.0));
    EXPECT_FALSE(rect_contains(s, d, 5.0, 10.0));
}

TEST(Overlap, MatchesPerPixelOracleAndIsSymmetric) {
    Rng rng = make_rng(11);
    const PatchDims d{32, 10};
    int nonzero = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const TargetState a{100.0 + 20.0 * uniform01(rng), 100.0 + 20.0 * uniform01(rng),
                            normalize_angle(6.3 * uniform01(rng))};
        const TargetState b{100.0 + 40.0 * uniform01(rng), 100.0 + 40.0 * uniform01(rng),
                            normalize_angle(6.3 * uniform01(rng))};
        const int got = rect_overlap_count(a, b, d);
        EXPECT_EQ(got, brute_overlap(a, b, d)) << "trial " << trial;
        EXPECT_EQ(got, rect_overlap_count(b, a, d));
        nonzero += got > 0;
    }
    EXPECT_GT(nonzero, 100);
}

TEST(Overlap, FarApartIsZero) {
    EXPECT_EQ(rect_overlap_count({0, 0, 0}, {100, 0, 0}, {32, 10}), 0);
    EXPECT_EQ(rect_overlap_count({0, 0, 0}, {0, 10.0, 0}, {32, 10}), 0);
    EXPECT_GT(rect_overlap_count({0, 0, 0}, {0, 9.0, 0}, {32, 10}), 0);
}

TEST(PatchDims, Validates) {
    EXPECT_THROW((PatchDims{0, 10}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((PatchDims{1, 1}.validate()));
    EXPECT_EQ((PatchDims{32, 10}.area()), 320);
}
