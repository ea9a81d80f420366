#include "mrftrack/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "mrftrack/error.hpp"

namespace mrftrack {

using nlohmann::json;

namespace {

/// Reads typed fields from one JSON object, recording every problem instead
/// of stopping at the first, and reports keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string prefix, std::vector<std::string>& problems)
        : j_(j), prefix_(std::move(prefix)), problems_(problems) {
        if (!j_.is_object()) {
            problems_.push_back(where() + "expected an object");
        }
    }

    template <typename T>
    void get(const char* key, T& out) {
        const json* v = find(key);
        if (v == nullptr) {
            return;
        }
        if constexpr (std::is_same_v<T, bool>) {
            if (v->is_boolean()) {
                out = v->get<bool>();
                return;
            }
            problems_.push_back(name(key) + ": expected true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (v->is_string()) {
                out = v->get<std::string>();
                return;
            }
            problems_.push_back(name(key) + ": expected a string");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (v->is_number()) {
                out = v->get<T>();
                return;
            }
            problems_.push_back(name(key) + ": expected a number");
        } else if constexpr (std::is_unsigned_v<T>) {
            if (v->is_number_unsigned() ||
                (v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
                out = static_cast<T>(v->get<std::uint64_t>());
                return;
            }
            problems_.push_back(name(key) + ": expected a non-negative integer");
        } else {
            if (v->is_number_integer()) {
                out = static_cast<T>(v->get<std::int64_t>());
                return;
            }
            problems_.push_back(name(key) + ": expected an integer");
        }
    }

    /// The nested value under `key`, or nullptr when absent.
    const json* find(const char* key) {
        seen_.insert(key);
        if (!j_.is_object()) {
            return nullptr;
        }
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    [[nodiscard]] std::string name(const std::string& key) const { return prefix_ + key; }

    void finish() {
        if (!j_.is_object()) {
            return;
        }
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.contains(it.key())) {
                problems_.push_back(name(it.key()) + ": unknown key");
            }
        }
    }

private:
    [[nodiscard]] std::string where() const {
        return prefix_.empty() ? std::string() : prefix_.substr(0, prefix_.size() - 1) + ": ";
    }

    const json& j_;
    std::string prefix_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
        if (!out.empty()) {
            out += '\n';
        }
        out += l;
    }
    return out;
}

void throw_if_any(const std::vector<std::string>& problems) {
    if (!problems.empty()) {
        throw ConfigError(join_lines(problems));
    }
}

template <typename Fn>
void collect(std::vector<std::string>& problems, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        std::istringstream lines(e.what());
        for (std::string line; std::getline(lines, line);) {
            problems.push_back(line);
        }
    }
}

ScenarioConfig read_scenario(const json& j, const std::string& prefix,
                             std::vector<std::string>& problems) {
    ScenarioConfig cfg;
    ObjectReader r(j, prefix, problems);
    std::string preset = "random";
    r.get("preset", preset);
    r.get("n_agents", cfg.n_agents);
    r.get("arena_width", cfg.arena_width);
    r.get("arena_height", cfg.arena_height);
    r.get("agent_length", cfg.agent_dims.length);
    r.get("agent_width", cfg.agent_dims.width);
    r.get("speed_mean", cfg.speed_mean);
    r.get("speed_std", cfg.speed_std);
    r.get("heading_jitter", cfg.heading_jitter);
    r.get("encounter_radius", cfg.encounter_radius);
    r.get("reverse_probability", cfg.reverse_probability);
    r.get("encounter_pause", cfg.encounter_pause);
    r.get("body_clearance", cfg.body_clearance);
    r.get("agent_intensity", cfg.agent_intensity);
    r.get("agent_intensity_spread", cfg.agent_intensity_spread);
    r.get("background_intensity", cfg.background_intensity);
    r.get("noise_std", cfg.noise_std);
    r.get("n_frames", cfg.n_frames);
    r.get("rng_seed", cfg.rng_seed);
    if (const json* poses = r.find("initial_poses")) {
        bool ok = poses->is_array();
        if (ok) {
            for (const json& p : *poses) {
                if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
                    !p[2].is_number()) {
                    ok = false;
                    break;
                }
                cfg.initial_poses.push_back(
                    {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
            }
        }
        if (!ok) {
            problems.push_back(r.name("initial_poses") + ": expected a list of [x, y, theta]");
            cfg.initial_poses.clear();
        }
    }
    r.finish();
    if (preset == "crossing") {
        cfg = make_crossing_scenario(cfg);
    } else if (preset != "random") {
        problems.push_back(r.name("preset") + ": expected \"random\" or \"crossing\", got \"" +
                           preset + "\"");
    }
    return cfg;
}

RunConfig read_run_config(const json& j, std::vector<std::string>& problems,
                          const std::set<std::string>& extra_keys = {}) {
    RunConfig cfg;
    ObjectReader r(j, "", problems);
    for (const auto& k : extra_keys) {
        (void)r.find(k.c_str());
    }

    std::string tracker = std::string(to_string(cfg.tracker));
    r.get("tracker", tracker);
    collect(problems, [&] { cfg.tracker = parse_tracker_kind(tracker); });
    r.get("n_samples", cfg.n_samples);
    r.get("particles_per_target", cfg.particles_per_target);
    r.get("burn_in", cfg.burn_in);

    if (const json* m = r.find("motion")) {
        ObjectReader mr(*m, "motion.", problems);
        mr.get("sigma_x", cfg.motion.sigma_x);
        mr.get("sigma_y", cfg.motion.sigma_y);
        mr.get("sigma_theta", cfg.motion.sigma_theta);
        mr.finish();
    }
    if (const json* m = r.find("interaction")) {
        ObjectReader ir(*m, "interaction.", problems);
        ir.get("strength", cfg.interaction.strength);
        std::string mode = std::string(to_string(cfg.interaction.overlap_mode));
        ir.get("overlap_mode", mode);
        collect(problems, [&] { cfg.interaction.overlap_mode = parse_overlap_mode(mode); });
        ir.get("neighbor_radius", cfg.interaction.neighbor_radius);
        ir.finish();
    }
    if (const json* m = r.find("dims")) {
        ObjectReader dr(*m, "dims.", problems);
        dr.get("length", cfg.dims.length);
        dr.get("width", cfg.dims.width);
        dr.finish();
    }
    if (const json* m = r.find("template"); m != nullptr && !m->is_null()) {
        TemplateSpec t;
        ObjectReader tr(*m, "template.", problems);
        tr.get("mu_f", t.mu_f);
        tr.get("sigma_f", t.sigma_f);
        tr.get("mu_b", t.mu_b);
        tr.get("sigma_b", t.sigma_b);
        if (const json* o = tr.find("outside"); o != nullptr && !o->is_null()) {
            double v = 0.0;
            tr.get("outside", v);
            t.outside = v;
        }
        tr.finish();
        cfg.template_model = t;
    }
    r.get("template_dir", cfg.template_dir);
    if (const json* v = r.find("failure_threshold"); v != nullptr && v->is_null()) {
        cfg.failure_threshold = std::numeric_limits<double>::infinity();
    } else {
        r.get("failure_threshold", cfg.failure_threshold);
    }
    r.get("frames_dir", cfg.frames_dir);
    r.get("groundtruth", cfg.groundtruth);
    if (const json* s = r.find("scenario"); s != nullptr && !s->is_null()) {
        cfg.scenario = read_scenario(*s, "scenario.", problems);
    }
    r.get("output_dir", cfg.output_dir);
    r.get("rng_seed", cfg.rng_seed);
    r.get("reference_frames", cfg.reference_frames);
    r.get("dump_frames", cfg.dump_frames);
    r.finish();
    return cfg;
}

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, json>>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix + it.key();
        if (it->is_object()) {
            flatten(*it, key + ".", out);
        } else if (!it->is_array() && !it->is_null()) {
            out.emplace_back(key, *it);
        }
    }
}

} // namespace

json to_json(const ScenarioConfig& cfg) {
    json poses = json::array();
    for (const TargetState& p : cfg.initial_poses) {
        poses.push_back({p.x, p.y, p.theta});
    }
    return {{"preset", "random"},
            {"n_agents", cfg.n_agents},
            {"arena_width", cfg.arena_width},
            {"arena_height", cfg.arena_height},
            {"agent_length", cfg.agent_dims.length},
            {"agent_width", cfg.agent_dims.width},
            {"speed_mean", cfg.speed_mean},
            {"speed_std", cfg.speed_std},
            {"heading_jitter", cfg.heading_jitter},
            {"encounter_radius", cfg.encounter_radius},
            {"reverse_probability", cfg.reverse_probability},
            {"encounter_pause", cfg.encounter_pause},
            {"body_clearance", cfg.body_clearance},
            {"agent_intensity", cfg.agent_intensity},
            {"agent_intensity_spread", cfg.agent_intensity_spread},
            {"background_intensity", cfg.background_intensity},
            {"noise_std", cfg.noise_std},
            {"n_frames", cfg.n_frames},
            {"rng_seed", cfg.rng_seed},
            {"initial_poses", std::move(poses)}};
}

json to_json(const RunConfig& cfg) {
    json j = {{"tracker", std::string(to_string(cfg.tracker))},
              {"n_samples", cfg.n_samples},
              {"particles_per_target", cfg.particles_per_target},
              {"burn_in", cfg.burn_in},
              {"motion",
               {{"sigma_x", cfg.motion.sigma_x},
                {"sigma_y", cfg.motion.sigma_y},
                {"sigma_theta", cfg.motion.sigma_theta}}},
              {"interaction",
               {{"strength", cfg.interaction.strength},
                {"overlap_mode", std::string(to_string(cfg.interaction.overlap_mode))},
                {"neighbor_radius", cfg.interaction.neighbor_radius}}},
              {"dims", {{"length", cfg.dims.length}, {"width", cfg.dims.width}}},
              {"template_dir", cfg.template_dir},
              {"failure_threshold", cfg.failure_threshold},
              {"frames_dir", cfg.frames_dir},
              {"groundtruth", cfg.groundtruth},
              {"output_dir", cfg.output_dir},
              {"rng_seed", cfg.rng_seed},
              {"reference_frames", cfg.reference_frames},
              {"dump_frames", cfg.dump_frames}};
    if (cfg.template_model) {
        const TemplateSpec& t = *cfg.template_model;
        j["template"] = {{"mu_f", t.mu_f}, {"sigma_f", t.sigma_f}, {"mu_b", t.mu_b},
                         {"sigma_b", t.sigma_b}};
        if (t.outside) {
            j["template"]["outside"] = *t.outside;
        }
    }
    if (cfg.scenario) {
        j["scenario"] = to_json(*cfg.scenario);
    }
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    std::vector<std::string> problems;
    ScenarioConfig cfg = read_scenario(j, "", problems);
    collect(problems, [&] { cfg.validate(); });
    throw_if_any(problems);
    return cfg;
}

RunConfig run_config_from_json(const json& j) {
    std::vector<std::string> problems;
    RunConfig cfg = read_run_config(j, problems);
    collect(problems, [&] { cfg.validate(); });
    throw_if_any(problems);
    return cfg;
}

CompareConfig compare_config_from_json(const json& j) {
    std::vector<std::string> problems;
    CompareConfig cfg;
    cfg.base = read_run_config(j, problems, {"compare"});
    cfg.output_dir = cfg.base.output_dir;
    cfg.base.output_dir.clear();

    const json* c = j.is_object() && j.contains("compare") ? &j.at("compare") : nullptr;
    if (c == nullptr) {
        problems.emplace_back("compare: missing section");
    } else {
        ObjectReader cr(*c, "compare.", problems);
        if (const json* cells = cr.find("cells")) {
            if (!cells->is_array()) {
                problems.emplace_back("compare.cells: expected a list");
            } else {
                for (std::size_t k = 0; k < cells->size(); ++k) {
                    CompareCell cell;
                    ObjectReader rr((*cells)[k], "compare.cells[" + std::to_string(k) + "].",
                                    problems);
                    std::string tracker;
                    rr.get("tracker", tracker);
                    collect(problems, [&] { cell.tracker = parse_tracker_kind(tracker); });
                    rr.get("particles", cell.particles);
                    rr.finish();
                    cfg.cells.push_back(cell);
                }
            }
        }
        if (const json* seeds = cr.find("seeds")) {
            if (seeds->is_array()) {
                for (const json& s : *seeds) {
                    if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
                        problems.emplace_back("compare.seeds: expected non-negative integers");
                        break;
                    }
                    cfg.seeds.push_back(s.get<std::uint64_t>());
                }
            } else if (seeds->is_object()) {
                std::uint64_t first = 1;
                std::size_t count = 0;
                ObjectReader sr(*seeds, "compare.seeds.", problems);
                sr.get("first", first);
                sr.get("count", count);
                sr.finish();
                for (std::size_t k = 0; k < count; ++k) {
                    cfg.seeds.push_back(first + k);
                }
            } else {
                problems.emplace_back("compare.seeds: expected a list or {first, count}");
            }
        }
        cr.get("jobs", cfg.jobs);
        cr.finish();
    }
    collect(problems, [&] { cfg.validate(); });
    throw_if_any(problems);
    return cfg;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(path.string(), "cannot open");
    }
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::vector<std::pair<std::string, json>> json_leaves(const json& j) {
    std::vector<std::pair<std::string, json>> out;
    if (j.is_object()) {
        flatten(j, "", out);
    }
    return out;
}

std::vector<std::pair<std::string, json>> run_config_leaves() {
    RunConfig cfg;
    cfg.scenario = ScenarioConfig{};
    cfg.template_model = TemplateSpec{0.0, 0.0, 0.0, 0.0, 0.0};
    std::vector<std::pair<std::string, json>> out;
    flatten(to_json(cfg), "", out);
    return out;
}

void set_dotted(json& j, std::string_view key, const std::string& text, const json& example) {
    json* node = &j;
    std::string_view rest = key;
    for (;;) {
        const auto dot = rest.find('.');
        const std::string part(rest.substr(0, dot));
        if (!node->is_object()) {
            *node = json::object();
        }
        node = &(*node)[part];
        if (dot == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(dot + 1);
    }

    const std::string flag = "--" + std::string(key);
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (example.is_boolean()) {
        if (text == "true" || text == "1") {
            *node = true;
        } else if (text == "false" || text == "0") {
            *node = false;
        } else {
            throw ConfigError(flag + ": expected true or false, got \"" + text + "\"");
        }
    } else if (example.is_number_unsigned()) {
        std::uint64_t v = 0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) {
            throw ConfigError(flag + ": expected a non-negative integer, got \"" + text + "\"");
        }
        *node = v;
    } else if (example.is_number_integer()) {
        std::int64_t v = 0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) {
            throw ConfigError(flag + ": expected an integer, got \"" + text + "\"");
        }
        *node = v;
    } else if (example.is_number()) {
        double v = 0.0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) {
            throw ConfigError(flag + ": expected a number, got \"" + text + "\"");
        }
        *node = v;
    } else {
        *node = text;
    }
}

} // namespace mrftrack
