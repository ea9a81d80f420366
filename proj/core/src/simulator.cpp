#include "mrftrack/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "mrftrack/error.hpp"
#include "mrftrack/pgm.hpp"

namespace mrftrack {

void ScenarioConfig::validate() const {
    std::ostringstream problems;
    auto check = [&](bool ok, const char* msg) {
        if (!ok) {
            problems << msg << '\n';
        }
    };
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    check(n_agents >= 0, "scenario.n_agents must be >= 0");
    check(agent_dims.length > 0 && agent_dims.width > 0, "scenario.agent_dims must be positive");
    check(arena_width > agent_dims.length + 1 && arena_height > agent_dims.length + 1,
          "scenario arena must be larger than an agent");
    check(speed_std >= 0.0, "scenario.speed_std must be >= 0");
    check(heading_jitter >= 0.0, "scenario.heading_jitter must be >= 0");
    check(encounter_radius >= 0.0, "scenario.encounter_radius must be >= 0");
    check(encounter_pause >= 1, "scenario.encounter_pause must be >= 1");
    check(body_clearance >= 0.0, "scenario.body_clearance must be >= 0");
    check(unit(reverse_probability), "scenario.reverse_probability must be in [0, 1]");
    check(unit(agent_intensity), "scenario.agent_intensity must be in [0, 1]");
    check(agent_intensity_spread >= 0.0 && unit(agent_intensity - agent_intensity_spread) &&
              unit(agent_intensity + agent_intensity_spread),
          "scenario.agent_intensity +- agent_intensity_spread must stay in [0, 1]");
    check(unit(background_intensity), "scenario.background_intensity must be in [0, 1]");
    check(noise_std >= 0.0, "scenario.noise_std must be >= 0");
    check(n_frames >= 1, "scenario.n_frames must be >= 1");
    check(std::isfinite(speed_mean), "scenario.speed_mean must be finite");
    if (!initial_poses.empty()) {
        check(static_cast<int>(initial_poses.size()) == n_agents,
              "scenario.initial_poses must hold one pose per agent");
        for (const TargetState& p : initial_poses) {
            const double m = wall_margin();
            if (!(p.x >= m && p.x <= arena_width - m && p.y >= m && p.y <= arena_height - m)) {
                problems << "scenario.initial_poses: pose (" << p.x << ", " << p.y
                         << ") outside the arena margins\n";
            }
        }
    }
    const std::string text = problems.str();
    if (!text.empty()) {
        throw ConfigError(text);
    }
}

std::vector<TargetState> WorldState::poses() const {
    std::vector<TargetState> out;
    out.reserve(agents.size());
    for (const AgentState& a : agents) {
        out.push_back(a.pose);
    }
    return out;
}

namespace {
void place_agents(const ScenarioConfig& cfg, Rng& rng, WorldState& world);
} // namespace

WorldState init_world(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    WorldState world;
    if (!cfg.initial_poses.empty()) {
        for (const TargetState& p : cfg.initial_poses) {
            world.agents.push_back({make_state(p.x, p.y, p.theta), 0.0, false, 0, 0.0});
        }
    } else {
        place_agents(cfg, rng, world);
    }
    std::uniform_real_distribution<double> ui(cfg.agent_intensity - cfg.agent_intensity_spread,
                                              cfg.agent_intensity + cfg.agent_intensity_spread);
    for (AgentState& a : world.agents) {
        a.intensity = cfg.agent_intensity_spread > 0.0 ? ui(rng) : cfg.agent_intensity;
    }
    return world;
}

namespace {

void place_agents(const ScenarioConfig& cfg, Rng& rng, WorldState& world) {
    const double m = cfg.wall_margin();
    const double min_gap = std::max(cfg.encounter_radius, static_cast<double>(cfg.agent_dims.length));
    std::uniform_real_distribution<double> ux(m, cfg.arena_width - m);
    std::uniform_real_distribution<double> uy(m, cfg.arena_height - m);
    std::uniform_real_distribution<double> ut(-std::numbers::pi, std::numbers::pi);
    constexpr int max_attempts = 100000;
    for (int a = 0; a < cfg.n_agents; ++a) {
        int attempt = 0;
        while (true) {
            if (++attempt > max_attempts) {
                throw ConfigError("scenario: cannot place " + std::to_string(cfg.n_agents) +
                                  " agents without initial contact; arena too crowded");
            }
            const TargetState cand = make_state(ux(rng), uy(rng), ut(rng));
            const bool clear = std::none_of(world.agents.begin(), world.agents.end(),
                                            [&](const AgentState& other) {
                                                return center_distance(cand, other.pose) <= min_gap ||
                                                       bodies_touch(cand, other.pose, cfg.agent_dims,
                                                                    cfg.body_clearance);
                                            });
            if (clear) {
                world.agents.push_back({cand, 0.0, false, 0, 0.0});
                break;
            }
        }
    }
}

} // namespace

namespace {

// Mirrors a coordinate into [lo, hi]; returns true when a wall was hit.
bool reflect(double& v, double lo, double hi) {
    bool hit = false;
    for (int guard = 0; guard < 4 && (v < lo || v > hi); ++guard) {
        v = v < lo ? 2.0 * lo - v : 2.0 * hi - v;
        hit = true;
    }
    v = std::clamp(v, lo, hi);
    return hit;
}

} // namespace

bool bodies_touch(const TargetState& a, const TargetState& b, const PatchDims& dims,
                  double clearance) noexcept {
    const double hl = 0.5 * (dims.length + clearance);
    const double hw = 0.5 * (dims.width + clearance);
    if (center_distance(a, b) > 2.0 * std::hypot(hl, hw)) {
        return false;
    }
    const double ca = std::cos(a.theta);
    const double sa = std::sin(a.theta);
    const double cb = std::cos(b.theta);
    const double sb = std::sin(b.theta);
    const double axes[4][2] = {{ca, sa}, {-sa, ca}, {cb, sb}, {-sb, cb}};
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    for (const auto& ax : axes) {
        const double ra = hl * std::abs(ca * ax[0] + sa * ax[1]) +
                          hw * std::abs(-sa * ax[0] + ca * ax[1]);
        const double rb = hl * std::abs(cb * ax[0] + sb * ax[1]) +
                          hw * std::abs(-sb * ax[0] + cb * ax[1]);
        if (std::abs(dx * ax[0] + dy * ax[1]) >= ra + rb) {
            return false;
        }
    }
    return true;
}

namespace {

// Half-angle of the forward sensing cone is 45 degrees.
constexpr double kAheadCos = 0.70710678118654752;

} // namespace

WorldState step_world(const WorldState& world, const ScenarioConfig& cfg, Rng& rng) {
    WorldState next = world;
    const double m = cfg.wall_margin();
    for (std::size_t i = 0; i < next.agents.size(); ++i) {
        const AgentState cur = next.agents[i];
        AgentState& out = next.agents[i];
        // Draw everything up front so the random stream does not depend on the branch.
        const double u_reverse = uniform01(rng);
        const double jitter = cfg.heading_jitter * standard_normal(rng);
        const double speed = cfg.speed_mean + cfg.speed_std * standard_normal(rng);

        out.speed = 0.0;
        if (cur.pause_left > 0) {
            out.pause_left = cur.pause_left - 1;
            out.in_contact = true;
            continue;
        }

        double theta = cur.pose.theta + jitter;
        const double hx = std::cos(theta);
        const double hy = std::sin(theta);
        double x = cur.pose.x + speed * hx;
        double y = cur.pose.y + speed * hy;
        if (reflect(x, m, cfg.arena_width - m)) {
            theta = std::numbers::pi - theta;
        }
        if (reflect(y, m, cfg.arena_height - m)) {
            theta = -theta;
        }
        const TargetState moved = make_state(x, y, theta);

        bool blocked = false;
        for (std::size_t j = 0; j < next.agents.size() && !blocked; ++j) {
            if (j == i) {
                continue;
            }
            const TargetState& o = next.agents[j].pose;
            const double dx = o.x - cur.pose.x;
            const double dy = o.y - cur.pose.y;
            const double dist = std::hypot(dx, dy);
            blocked = (dist <= cfg.encounter_radius && dx * hx + dy * hy > kAheadCos * dist) ||
                      bodies_touch(moved, o, cfg.agent_dims, cfg.body_clearance);
        }
        out.in_contact = blocked;
        if (blocked) {
            out.pause_left = cfg.encounter_pause - 1;
            if (u_reverse < cfg.reverse_probability) {
                out.pose.theta = normalize_angle(cur.pose.theta + std::numbers::pi);
            }
            continue;
        }
        out.speed = speed;
        out.pose = moved;
    }
    return next;
}

namespace {

// Standard normal quantiles at (k + 0.5) / 65536, so one 64-bit draw yields
// four noise samples.
const std::array<double, 65536>& normal_quantiles() {
    static const std::array<double, 65536> table = [] {
        std::array<double, 65536> t{};
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double p = (static_cast<double>(k) + 0.5) / 65536.0;
            double lo = -10.0;
            double hi = 10.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (0.5 * std::erfc(-mid / std::numbers::sqrt2) < p) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            t[k] = 0.5 * (lo + hi);
        }
        return t;
    }();
    return table;
}

} // namespace

Frame render(const WorldState& world, const ScenarioConfig& cfg, Rng& rng) {
    Frame frame(cfg.arena_width, cfg.arena_height, cfg.background_intensity);
    const PixelBox clip{0, cfg.arena_width - 1, 0, cfg.arena_height - 1};
    for (const AgentState& a : world.agents) {
        for_each_covered_pixel(a.pose, cfg.agent_dims, clip,
                               [&](int c, int r) { frame.set(c, r, a.intensity); });
    }
    std::vector<double> pixels(frame.pixels().begin(), frame.pixels().end());
    if (cfg.noise_std > 0.0) {
        const auto& z = normal_quantiles();
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < pixels.size(); ++k) {
            if (k % 4 == 0) {
                bits = rng();
            }
            pixels[k] += cfg.noise_std * z[bits & 0xffffu];
            bits >>= 16;
        }
    }
    for (double& v : pixels) {
        v = quantize_intensity(v) / 255.0;
    }
    return Frame(cfg.arena_width, cfg.arena_height, std::move(pixels));
}

ScenarioConfig make_crossing_scenario(ScenarioConfig base) {
    base.n_agents = 2;
    base.heading_jitter = 0.0;
    base.speed_std = std::min(base.speed_std, 0.1);
    const double cx = 0.5 * base.arena_width;
    const double cy = 0.5 * base.arena_height;
    const double room = std::min(cx, cy) - base.wall_margin() - 2.0;
    const double meet_frame = base.n_frames / 6.0;
    const double d = std::clamp(base.speed_mean * meet_frame, 0.0, std::max(room, 0.0));
    base.initial_poses = {make_state(cx - d, cy, 0.0),
                          make_state(cx, cy - d, 0.5 * std::numbers::pi)};
    return base;
}

ScenarioStream::ScenarioStream(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), world_rng_(make_rng(cfg_.rng_seed, 1)),
      noise_rng_(make_rng(cfg_.rng_seed, 2)) {
    cfg_.validate();
    world_ = init_world(cfg_, world_rng_);
}

LabeledFrame ScenarioStream::next() {
    if (done()) {
        throw std::out_of_range("ScenarioStream: no frames left");
    }
    if (next_index_ > 0) {
        world_ = step_world(world_, cfg_, world_rng_);
    }
    LabeledFrame out;
    out.index = next_index_++;
    out.frame = render(world_, cfg_, noise_rng_);
    out.truth = world_.poses();
    return out;
}

} // namespace mrftrack
