#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mrftrack/error.hpp"
#include "mrftrack/pgm.hpp"
#include "mrftrack/simulator.hpp"

using namespace mrftrack;

namespace {

constexpr double kPi = std::numbers::pi;

double min_pair_distance(const ScenarioConfig& cfg) {
    Rng rng = make_rng(cfg.rng_seed, 1);
    WorldState w = init_world(cfg, rng);
    double best = center_distance(w.agents[0].pose, w.agents[1].pose);
    for (int f = 1; f < cfg.n_frames; ++f) {
        w = step_world(w, cfg, rng);
        best = std::min(best, center_distance(w.agents[0].pose, w.agents[1].pose));
    }
    return best;
}

} // namespace

TEST(StepWorld, StraightLineKinematics) {
    ScenarioConfig cfg;
    cfg.n_agents = 1;
    cfg.heading_jitter = 0.0;
    cfg.speed_std = 0.0;
    cfg.speed_mean = 2.0;
    cfg.initial_poses = {{100.0, 100.0, 0.0}};
    Rng rng = make_rng(1);
    WorldState w = init_world(cfg, rng);
    for (int k = 1; k <= 50; ++k) {
        w = step_world(w, cfg, rng);
        EXPECT_NEAR(w.agents[0].pose.x, 100.0 + 2.0 * k, 1e-9);
        EXPECT_EQ(w.agents[0].pose.y, 100.0);
        EXPECT_EQ(w.agents[0].speed, 2.0);
    }
}

TEST(StepWorld, HeadOnAgentsWithinRadiusBothReverse) {
    ScenarioConfig cfg;
    cfg.n_agents = 2;
    cfg.encounter_radius = 40.0;
    cfg.reverse_probability = 1.0;
    cfg.initial_poses = {{100.0, 100.0, 0.0}, {136.0, 100.0, -kPi}};
    Rng rng = make_rng(2);
    const WorldState w0 = init_world(cfg, rng);
    const WorldState w1 = step_world(w0, cfg, rng);
    for (int a = 0; a < 2; ++a) {
        EXPECT_EQ(w1.agents[a].speed, 0.0);
        EXPECT_TRUE(w1.agents[a].in_contact);
        EXPECT_EQ(w1.agents[a].pose.x, w0.agents[a].pose.x);
        EXPECT_NEAR(std::abs(std::remainder(w1.agents[a].pose.theta - w0.agents[a].pose.theta, 2 * kPi)),
                    kPi, 1e-12);
    }
}

TEST(StepWorld, WallsReflect) {
    ScenarioConfig cfg;
    cfg.n_agents = 1;
    cfg.heading_jitter = 0.0;
    cfg.speed_std = 0.0;
    cfg.speed_mean = 4.0;
    const double m = cfg.wall_margin();
    cfg.initial_poses = {{cfg.arena_width - m - 1.0, 200.0, 0.0}};
    Rng rng = make_rng(3);
    const WorldState w = step_world(init_world(cfg, rng), cfg, rng);
    EXPECT_NEAR(w.agents[0].pose.x, cfg.arena_width - m - 3.0, 1e-9);
    EXPECT_NEAR(std::abs(w.agents[0].pose.theta), kPi, 1e-12);

    cfg.initial_poses = {{300.0, m + 1.0, -0.5 * kPi}};
    const WorldState v = step_world(init_world(cfg, rng), cfg, rng);
    EXPECT_NEAR(v.agents[0].pose.y, m + 3.0, 1e-9);
    EXPECT_NEAR(v.agents[0].pose.theta, 0.5 * kPi, 1e-12);
}

TEST(Render, ConstantBackgroundAndExactFootprint) {
    ScenarioConfig cfg;
    cfg.n_agents = 0;
    cfg.noise_std = 0.0;
    cfg.agent_intensity_spread = 0.0;
    Rng rng = make_rng(4);
    const Frame empty = render(init_world(cfg, rng), cfg, rng);
    for (double v : empty.pixels()) {
        ASSERT_EQ(v, (quantize_intensity(cfg.background_intensity) / 255.0));
    }
    cfg.n_agents = 1;
    cfg.initial_poses = {{200.0, 200.0, 0.0}};
    const Frame one = render(init_world(cfg, rng), cfg, rng);
    int dark = 0;
    for (double v : one.pixels()) {
        dark += v == (quantize_intensity(cfg.agent_intensity) / 255.0);
    }
    EXPECT_EQ(dark, 320);
}

TEST(Scenario, DeterministicInsideArenaAndBodiesNeverOverlap) {
    ScenarioConfig cfg;
    cfg.n_frames = 150;
    cfg.rng_seed = 17;
    ScenarioStream a(cfg);
    ScenarioStream b(cfg);
    const double m = cfg.wall_margin();
    while (!a.done()) {
        const LabeledFrame fa = a.next();
        const LabeledFrame fb = b.next();
        ASSERT_EQ(fa.truth, fb.truth);
        ASSERT_TRUE(std::equal(fa.frame.pixels().begin(), fa.frame.pixels().end(),
                               fb.frame.pixels().begin()));
        for (std::size_t i = 0; i < fa.truth.size(); ++i) {
            const TargetState& p = fa.truth[i];
            ASSERT_GE(p.x, m);
            ASSERT_LE(p.x, cfg.arena_width - m);
            ASSERT_GE(p.y, m);
            ASSERT_LE(p.y, cfg.arena_height - m);
            for (std::size_t j = i + 1; j < fa.truth.size(); ++j) {
                ASSERT_EQ(rect_overlap_count(p, fa.truth[j], cfg.agent_dims), 0)
                    << "frame " << fa.index << " agents " << i << ", " << j;
            }
        }
    }
    EXPECT_THROW((void)a.next(), std::out_of_range);
    cfg.rng_seed = 18;
    ScenarioStream c(cfg);
    EXPECT_NE(c.next().truth, ScenarioStream(ScenarioConfig{}).next().truth);
}

TEST(Scenario, BodiesTouchIsAnExactRectangleTest) {
    const PatchDims d{32, 10};
    EXPECT_TRUE(bodies_touch({0, 0, 0}, {31.5, 0, 0}, d, 0.0));
    EXPECT_FALSE(bodies_touch({0, 0, 0}, {32.5, 0, 0}, d, 0.0));
    EXPECT_TRUE(bodies_touch({0, 0, 0}, {32.5, 0, 0}, d, 1.0));
    EXPECT_FALSE(bodies_touch({0, 0, 0}, {0, 10.5, 0}, d, 0.0));
    // Diagonal placement: bounding circles intersect, rectangles do not.
    EXPECT_FALSE(bodies_touch({0, 0, 0.25 * kPi}, {20, -20, 0.25 * kPi}, d, 0.0));
    EXPECT_TRUE(bodies_touch({0, 0, 0}, {16, 10, 0.5 * kPi}, d, 0.0));
}

TEST(Crossing, PathsMeetWithinTheFirstThird) {
    ScenarioConfig base;
    base.n_frames = 240;
    const ScenarioConfig cfg = make_crossing_scenario(base);
    ASSERT_EQ(cfg.n_agents, 2);
    EXPECT_LT(min_pair_distance(cfg), cfg.encounter_radius);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        ScenarioConfig s = cfg;
        s.rng_seed = seed;
        EXPECT_LT(min_pair_distance(s), 32.0) << "seed " << seed;
    }
}

TEST(Crossing, WithoutReversalBothAgentsPassTheCrossingPoint) {
    ScenarioConfig base;
    base.n_frames = 240;
    base.reverse_probability = 0.0;
    const ScenarioConfig cfg = make_crossing_scenario(base);
    const double cx = 0.5 * cfg.arena_width;
    const double cy = 0.5 * cfg.arena_height;
    ScenarioStream stream(cfg);
    LabeledFrame last;
    while (!stream.done()) {
        last = stream.next();
    }
    EXPECT_GT(last.truth[0].x, cx + 40.0);
    EXPECT_GT(last.truth[1].y, cy + 40.0);
}

TEST(Scenario, ValidationListsEveryProblem) {
    ScenarioConfig cfg;
    cfg.reverse_probability = 1.5;
    cfg.noise_std = -1.0;
    cfg.n_frames = 0;
    try {
        cfg.validate();
        FAIL() << "accepted";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("reverse_probability"), std::string::npos);
        EXPECT_NE(msg.find("noise_std"), std::string::npos);
        EXPECT_NE(msg.find("n_frames"), std::string::npos);
    }
    ScenarioConfig crowded;
    crowded.arena_width = 100;
    crowded.arena_height = 100;
    crowded.n_agents = 50;
    Rng rng = make_rng(1);
    EXPECT_THROW((void)init_world(crowded, rng), ConfigError);
}
