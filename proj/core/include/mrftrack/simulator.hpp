#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrftrack/geometry.hpp"
#include "mrftrack/rng.hpp"

namespace mrftrack {

/// Synthetic arena of interacting agents that stop and usually reverse when
/// they meet another agent.
struct ScenarioConfig {
    int n_agents = 20;
    int arena_width = 720;
    int arena_height = 480;
    PatchDims agent_dims{};
    double speed_mean = 2.0;        ///< pixels per frame
    double speed_std = 0.5;
    double heading_jitter = 0.15;   ///< radians per frame
    double encounter_radius = 26.0; ///< sensing distance: a center this close ahead (45 degree cone) triggers a stop
    double body_clearance = 1.0;    ///< bodies closer than this count as touching
    double reverse_probability = 0.8;
    int encounter_pause = 20;       ///< frames an agent stays stopped once blocked
    double agent_intensity = 0.5;
    double agent_intensity_spread = 0.1; ///< per-agent intensity is uniform in +-spread around the mean
    double background_intensity = 0.7;
    double noise_std = 0.1;
    int n_frames = 662;
    std::uint64_t rng_seed = 1;
    /// Explicit starting poses; random non-touching placement when empty.
    std::vector<TargetState> initial_poses;

    /// Throws ConfigError listing every violated constraint.
    void validate() const;

    /// Centers are kept this far from the walls so bodies stay in the arena.
    [[nodiscard]] double wall_margin() const noexcept { return 0.5 * agent_dims.length; }
};

struct AgentState {
    TargetState pose;
    double speed = 0.0;       ///< signed forward speed applied in the last step
    bool in_contact = false;  ///< another agent was within the encounter radius
    int pause_left = 0;       ///< remaining stopped frames of the current encounter
    double intensity = 0.0;   ///< rendered body intensity
};

struct WorldState {
    std::vector<AgentState> agents;

    [[nodiscard]] std::vector<TargetState> poses() const;
};

/// Initial world: explicit poses if given, else random placement with no two
/// centers within max(encounter radius, agent length) and no touching bodies.
[[nodiscard]] WorldState init_world(const ScenarioConfig& cfg, Rng& rng);

/// True when the two bodies, each grown by `clearance` in length and width,
/// intersect (exact separating-axis test).
[[nodiscard]] bool bodies_touch(const TargetState& a, const TargetState& b, const PatchDims& dims,
                                double clearance) noexcept;

/// Advances every agent one frame, in index order, against the already updated
/// poses of lower-indexed agents. An agent is blocked when another center lies
/// within the encounter radius and within 45 degrees of its heading, or when
/// its next pose would touch
/// another body. A blocked agent stays put for `encounter_pause` frames,
/// starting with this one, and with the reverse probability turns around by
/// pi. Otherwise it moves along its jittered heading at a drawn speed. Walls
/// reflect specularly.
[[nodiscard]] WorldState step_world(const WorldState& world, const ScenarioConfig& cfg, Rng& rng);

/// Background, agents as filled oriented rectangles, additive Gaussian noise,
/// clamped to [0, 1] and quantized to 8-bit levels so that frames round-trip
/// through PGM exactly.
[[nodiscard]] Frame render(const WorldState& world, const ScenarioConfig& cfg, Rng& rng);

/// Two agents on perpendicular collision courses that meet mid-arena at about
/// one sixth of the run. Starts from `base` (only agent-related fields are
/// overwritten).
[[nodiscard]] ScenarioConfig make_crossing_scenario(ScenarioConfig base = {});

/// One frame of a scenario with its exact groundtruth.
struct LabeledFrame {
    std::size_t index = 0;  ///< 0-based
    Frame frame;
    std::vector<TargetState> truth;
};

/// Lazily generates a scenario frame by frame. Frame 0 is the initial world.
/// World dynamics and pixel noise draw from separate streams of rng_seed.
class ScenarioStream {
public:
    explicit ScenarioStream(ScenarioConfig cfg);

    [[nodiscard]] bool done() const noexcept { return next_index_ >= static_cast<std::size_t>(cfg_.n_frames); }
    [[nodiscard]] LabeledFrame next();
    [[nodiscard]] const ScenarioConfig& config() const noexcept { return cfg_; }

private:
    ScenarioConfig cfg_;
    Rng world_rng_;
    Rng noise_rng_;
    WorldState world_;
    std::size_t next_index_ = 0;
};

} // namespace mrftrack
