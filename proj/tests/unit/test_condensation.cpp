#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mrftrack/condensation.hpp"
#include "mrftrack/simulator.hpp"

using namespace mrftrack;

TEST(Condensation, SingleParticleAlwaysSurvivesWithUnitWeight) {
    const Frame f(200, 200, 0.7);
    const TemplateModel tm({0.25, 0.05}, {0.7, 0.05});
    const std::vector<TargetState> poses{{100.0, 100.0, 0.0}};
    CondensationConfig cfg;
    cfg.particles_per_target = 1;
    Rng rng = make_rng(1);
    WeightedParticleSet set = WeightedParticleSet::at_poses(poses, 1);
    for (int k = 0; k < 5; ++k) {
        const CondensationStepResult r = condensation_step(set, f, tm, cfg, rng);
        ASSERT_EQ(r.set.targets[0].particles.size(), 1u);
        EXPECT_EQ(r.set.targets[0].weights[0], 1.0);
        EXPECT_EQ(r.estimate.targets[0], r.set.targets[0].particles[0]);
        set = r.set;
    }
}

TEST(Condensation, EqualLikelihoodsGiveUniformWeights) {
    const Frame f(400, 400, 0.5);
    const TemplateModel tm({0.2, 0.1}, {0.8, 0.1}, {32, 10}, 0.5);
    const std::vector<TargetState> poses{{200.0, 200.0, 0.0}, {100.0, 300.0, 2.0}};
    CondensationConfig cfg;
    cfg.particles_per_target = 16;
    Rng rng = make_rng(2);
    const CondensationStepResult r =
        condensation_step(WeightedParticleSet::at_poses(poses, 4), f, tm, cfg, rng);
    for (const TargetParticles& t : r.set.targets) {
        ASSERT_EQ(t.weights.size(), 16u);
        for (double w : t.weights) {
            EXPECT_DOUBLE_EQ(w, 1.0 / 16.0);
        }
    }
    EXPECT_NEAR(r.mean_ess, 16.0, 1e-9);
    EXPECT_EQ(r.degenerate_targets, 0u);
}

TEST(Condensation, WeightsStayNormalizedAndTrackAMovingAgent) {
    ScenarioConfig sc;
    sc.n_agents = 1;
    sc.heading_jitter = 0.05;
    sc.initial_poses = {{100.0, 240.0, 0.0}};
    sc.n_frames = 120;
    ScenarioStream stream(sc);
    const TemplateModel tm({sc.agent_intensity, 0.1}, {sc.background_intensity, 0.1});
    CondensationConfig cfg;
    cfg.particles_per_target = 50;
    Rng rng = make_rng(3);
    LabeledFrame first = stream.next();
    WeightedParticleSet set = WeightedParticleSet::at_poses(first.truth, cfg.particles_per_target);
    double worst = 0.0;
    while (!stream.done()) {
        const LabeledFrame lf = stream.next();
        const CondensationStepResult r = condensation_step(set, lf.frame, tm, cfg, rng);
        const auto& w = r.set.targets[0].weights;
        EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-9);
        worst = std::max(worst, center_distance(r.estimate.targets[0], lf.truth[0]));
        set = r.set;
    }
    EXPECT_LT(worst, 10.0);
}

TEST(Condensation, RejectsMalformedInput) {
    const Frame f(50, 50, 0.5);
    const TemplateModel tm({0.2, 0.1}, {0.8, 0.1});
    Rng rng = make_rng(4);
    WeightedParticleSet bad;
    bad.targets.push_back({{{10.0, 10.0, 0.0}}, {}});
    EXPECT_THROW((void)condensation_step(bad, f, tm, {}, rng), std::invalid_argument);
    EXPECT_THROW((void)WeightedParticleSet::at_poses(std::vector<TargetState>{}, 0),
                 std::invalid_argument);
    CondensationConfig none;
    none.particles_per_target = 0;
    EXPECT_THROW(none.validate(), std::invalid_argument);
}
