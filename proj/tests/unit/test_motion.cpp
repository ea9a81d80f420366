#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mrftrack/motion.hpp"

using namespace mrftrack;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Motion, HeadingIsUpdatedBeforeTheDisplacement) {
    const TargetState s{10.0, 20.0, 0.0};
    const TargetState n = apply_motion(s, {1.0, 0.0, 0.5 * kPi});
    EXPECT_NEAR(n.x, 10.0, 1e-12);
    EXPECT_NEAR(n.y, 21.0, 1e-12);
    EXPECT_NEAR(n.theta, 0.5 * kPi, 1e-12);

    const TargetState m = apply_motion({0.0, 0.0, 0.5 * kPi}, {2.0, 3.0, 0.0});
    EXPECT_NEAR(m.x, -3.0, 1e-12);
    EXPECT_NEAR(m.y, 2.0, 1e-12);
}

TEST(Motion, RecoverInvertsApply) {
    Rng rng = make_rng(3);
    const MotionParams p;
    for (int k = 0; k < 1000; ++k) {
        const TargetState s{100.0 * uniform01(rng), 100.0 * uniform01(rng),
                            normalize_angle(7.0 * uniform01(rng))};
        const MotionDraw d = draw_motion(p, rng);
        const MotionDraw r = recover_motion(apply_motion(s, d), s);
        ASSERT_NEAR(r.dx, d.dx, 1e-9);
        ASSERT_NEAR(r.dy, d.dy, 1e-9);
        ASSERT_NEAR(r.dtheta, d.dtheta, 1e-9);
    }
}

TEST(Motion, DensityIsSumOfThreeGaussians) {
    const MotionParams p{5.0, 3.0, 0.4};
    const TargetState prev{50.0, 50.0, 0.3};
    const TargetState next = apply_motion(prev, {2.0, -1.0, 0.1});
    const auto lg = [](double x, double s) {
        return -0.5 * (x / s) * (x / s) - std::log(s * std::sqrt(2.0 * kPi));
    };
    EXPECT_NEAR(log_transition_density(next, prev, p), lg(2.0, 5.0) + lg(-1.0, 3.0) + lg(0.1, 0.4),
                1e-12);
}

TEST(Motion, DensityIntegratesToOne) {
    const MotionParams p{5.0, 3.0, 0.4};
    const TargetState prev{0.0, 0.0, 0.7};
    const double h = 0.5;
    const double ht = 2.0 * kPi / 256.0;
    double total = 0.0;
    for (int it = 0; it < 256; ++it) {
        const double theta = -kPi + (it + 0.5) * ht;
        for (double x = -32.0 + 0.5 * h; x < 32.0; x += h) {
            for (double y = -32.0 + 0.5 * h; y < 32.0; y += h) {
                total += std::exp(log_transition_density({x, y, theta}, prev, p));
            }
        }
    }
    total *= h * h * ht;
    EXPECT_NEAR(total, 1.0, 0.01);
}

TEST(Motion, PropagationMatchesPriorMoments) {
    const MotionParams p{5.0, 3.0, 0.4};
    Rng rng = make_rng(9);
    const TargetState s{0.0, 0.0, 1.0};
    const int n = 100000;
    double sx = 0.0;
    double sy = 0.0;
    double st = 0.0;
    double mx = 0.0;
    for (int k = 0; k < n; ++k) {
        const MotionDraw d = recover_motion(propagate_target(s, p, rng), s);
        sx += d.dx * d.dx;
        sy += d.dy * d.dy;
        st += d.dtheta * d.dtheta;
        mx += d.dx;
    }
    EXPECT_NEAR(std::sqrt(sx / n), 5.0, 0.05);
    EXPECT_NEAR(std::sqrt(sy / n), 3.0, 0.03);
    EXPECT_NEAR(std::sqrt(st / n), 0.4, 0.004);
    EXPECT_NEAR(mx / n, 0.0, 0.06);
}

TEST(Motion, JointPropagationKeepsOrderAndRejectsBadParams) {
    Rng rng = make_rng(1);
    JointParticle p{{{0.0, 0.0, 0.0}, {1000.0, 1000.0, 0.0}}};
    const JointParticle q = propagate_joint(p, {}, rng);
    ASSERT_EQ(q.size(), 2u);
    EXPECT_LT(std::hypot(q[0].x, q[0].y), 100.0);
    EXPECT_LT(std::hypot(q[1].x - 1000.0, q[1].y - 1000.0), 100.0);
    EXPECT_THROW((MotionParams{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
}
