#include "mrftrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "mrftrack/config.hpp"
#include "mrftrack/error.hpp"
#include "mrftrack/pgm.hpp"

namespace mrftrack {

namespace fs = std::filesystem;

std::string_view to_string(TrackerKind kind) noexcept {
    return kind == TrackerKind::mcmc_mrf ? "mcmc-mrf" : "independent";
}

TrackerKind parse_tracker_kind(std::string_view text) {
    if (text == "mcmc-mrf") {
        return TrackerKind::mcmc_mrf;
    }
    if (text == "independent") {
        return TrackerKind::independent;
    }
    throw ConfigError("tracker: expected \"mcmc-mrf\" or \"independent\", got \"" +
                      std::string(text) + "\"");
}

namespace {

template <typename Fn>
void collect(std::vector<std::string>& problems, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }
}

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

std::string frame_name(std::size_t number) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu.pgm", number);
    return buf;
}

std::string optional_number(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

nlohmann::json nullable(double v) {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

} // namespace

void RunConfig::validate() const {
    std::vector<std::string> problems;
    if (n_samples < 1) {
        problems.emplace_back("n_samples must be >= 1");
    }
    if (particles_per_target < 1) {
        problems.emplace_back("particles_per_target must be >= 1");
    }
    collect(problems, [&] { motion.validate(); });
    collect(problems, [&] { interaction.validate(); });
    collect(problems, [&] { dims.validate(); });
    if (!(failure_threshold > 0.0)) {
        problems.emplace_back("failure_threshold must be > 0");
    }
    const bool has_dir = !frames_dir.empty();
    if (has_dir == scenario.has_value()) {
        problems.emplace_back("exactly one of frames_dir or scenario must be given");
    }
    if (has_dir && groundtruth.empty()) {
        problems.emplace_back("frames_dir requires groundtruth");
    }
    if (!has_dir && !groundtruth.empty()) {
        problems.emplace_back("groundtruth is only used together with frames_dir");
    }
    if (scenario) {
        collect(problems, [&] { scenario->validate(); });
    }
    if (template_model && !template_dir.empty()) {
        problems.emplace_back("give at most one of template and template_dir");
    }
    if (template_model) {
        collect(problems, [&] {
            (void)TemplateModel({template_model->mu_f, template_model->sigma_f},
                                {template_model->mu_b, template_model->sigma_b}, dims,
                                template_model->outside);
        });
    }
    if (reference_frames < 1) {
        problems.emplace_back("reference_frames must be >= 1");
    }
    if (dump_frames && output_dir.empty()) {
        problems.emplace_back("dump_frames requires output_dir");
    }
    if (!problems.empty()) {
        throw ConfigError(join_lines(problems));
    }
}

// --- trackers ----------------------------------------------------------------

McmcMrfTracker::McmcMrfTracker(McmcConfig cfg, TemplateModel appearance)
    : cfg_(std::move(cfg)), appearance_(std::move(appearance)), rng_(make_rng(cfg_.rng_seed, 100)) {
    cfg_.validate();
}

void McmcMrfTracker::initialize(std::span<const TargetState> poses) {
    JointParticle p;
    p.targets.assign(poses.begin(), poses.end());
    samples_.samples.assign(cfg_.n_samples, p);
    reference_ = p.targets;
}

TrackerStep McmcMrfTracker::step(const Frame& frame) {
    if (samples_.samples.empty()) {
        throw std::logic_error("McmcMrfTracker: step before initialize");
    }
    const MrfGraph graph = build_mrf(reference_, cfg_.interaction);
    McmcStepResult res = mcmc_mrf_step(samples_, frame, appearance_, graph, cfg_, rng_);
    samples_ = std::move(res.samples);
    reference_ = res.estimate.targets;
    TrackerStep out;
    out.estimate = std::move(res.estimate);
    out.acceptance_rate = res.stats.acceptance_rate();
    return out;
}

void McmcMrfTracker::overwrite_target(std::size_t i, const TargetState& pose) {
    if (i >= reference_.size()) {
        throw std::out_of_range("McmcMrfTracker: target index out of range");
    }
    for (JointParticle& p : samples_.samples) {
        p[i] = pose;
    }
    reference_[i] = pose;
}

IndependentTracker::IndependentTracker(CondensationConfig cfg, TemplateModel appearance)
    : cfg_(std::move(cfg)), appearance_(std::move(appearance)), rng_(make_rng(cfg_.rng_seed, 100)) {
    cfg_.validate();
}

void IndependentTracker::initialize(std::span<const TargetState> poses) {
    particles_ = WeightedParticleSet::at_poses(poses, cfg_.particles_per_target);
}

TrackerStep IndependentTracker::step(const Frame& frame) {
    if (particles_.targets.empty()) {
        throw std::logic_error("IndependentTracker: step before initialize");
    }
    CondensationStepResult res = condensation_step(particles_, frame, appearance_, cfg_, rng_);
    particles_ = std::move(res.set);
    TrackerStep out;
    out.estimate = std::move(res.estimate);
    out.ess = res.mean_ess;
    return out;
}

void IndependentTracker::overwrite_target(std::size_t i, const TargetState& pose) {
    TargetParticles& t = particles_.targets.at(i);
    std::fill(t.particles.begin(), t.particles.end(), pose);
    std::fill(t.weights.begin(), t.weights.end(), 1.0 / static_cast<double>(t.weights.size()));
}

std::unique_ptr<Tracker> make_tracker(const RunConfig& cfg, const TemplateModel& appearance) {
    if (cfg.tracker == TrackerKind::mcmc_mrf) {
        McmcConfig m;
        m.n_samples = cfg.n_samples;
        m.burn_in = cfg.burn_in;
        m.motion = cfg.motion;
        m.interaction = cfg.interaction;
        m.rng_seed = cfg.rng_seed;
        return std::make_unique<McmcMrfTracker>(m, appearance);
    }
    CondensationConfig c;
    c.particles_per_target = cfg.particles_per_target;
    c.motion = cfg.motion;
    c.rng_seed = cfg.rng_seed;
    return std::make_unique<IndependentTracker>(c, appearance);
}

// --- failure protocol ----------------------------------------------------------

CorrectionResult detect_and_correct(const TrackEstimate& estimate,
                                    std::span<const TargetState> truth, double threshold,
                                    Tracker& tracker) {
    if (estimate.size() != truth.size() || tracker.target_count() != truth.size()) {
        throw std::invalid_argument("detect_and_correct: estimate, truth and tracker disagree on "
                                    "the number of targets");
    }
    CorrectionResult out;
    out.distances.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = center_distance(estimate.targets[i], truth[i]);
        out.distances.push_back(d);
        if (d > threshold) {
            out.failed.push_back(i);
            tracker.overwrite_target(i, truth[i]);
        }
    }
    return out;
}

long long scale_failures(long long count, long long frames_observed, long long frames_reference) {
    if (frames_observed < 1) {
        throw std::invalid_argument("scale_failures: frames_observed must be >= 1");
    }
    return std::llround(static_cast<double>(count) * static_cast<double>(frames_reference) /
                        static_cast<double>(frames_observed));
}

std::vector<double> mean_distance_series(std::span<const FrameMetrics> metrics) {
    std::vector<double> out;
    out.reserve(metrics.size());
    for (const FrameMetrics& m : metrics) {
        double sum = 0.0;
        for (double d : m.distances) {
            sum += d;
        }
        out.push_back(m.distances.empty() ? 0.0 : sum / static_cast<double>(m.distances.size()));
    }
    return out;
}

namespace {

FrameMetrics make_metrics(std::size_t frame_number, std::vector<double> distances,
                          std::vector<std::size_t> failed) {
    FrameMetrics m;
    m.frame = frame_number;
    m.distances = std::move(distances);
    m.failures = failed.size();
    m.corrected = std::move(failed);
    double sum = 0.0;
    for (double d : m.distances) {
        sum += d;
    }
    m.mean_distance = m.distances.empty() ? 0.0 : sum / static_cast<double>(m.distances.size());
    return m;
}

} // namespace

std::vector<FrameMetrics> evaluate_estimates(const PoseTrack& estimates, const PoseTrack& truth,
                                             double threshold) {
    if (estimates.frame_count() != truth.frame_count() ||
        estimates.target_count() != truth.target_count()) {
        throw std::invalid_argument("evaluate_estimates: estimates and groundtruth differ in "
                                    "frame or target count");
    }
    std::vector<FrameMetrics> out;
    for (std::size_t f = 1; f < truth.frame_count(); ++f) {
        std::vector<double> distances;
        std::vector<std::size_t> failed;
        for (std::size_t i = 0; i < truth.target_count(); ++i) {
            const double d = center_distance(estimates.frames[f][i], truth.frames[f][i]);
            distances.push_back(d);
            if (d > threshold) {
                failed.push_back(i);
            }
        }
        out.push_back(make_metrics(f + 1, std::move(distances), std::move(failed)));
    }
    return out;
}

void summarize(RunReport& report, int reference_frames) {
    report.total_failures = 0;
    double dist_sum = 0.0;
    std::size_t dist_count = 0;
    report.max_distance = 0.0;
    double acc_sum = 0.0;
    std::size_t acc_count = 0;
    for (const FrameMetrics& m : report.frames) {
        report.total_failures += m.failures;
        for (double d : m.distances) {
            dist_sum += d;
            report.max_distance = std::max(report.max_distance, d);
        }
        dist_count += m.distances.size();
        if (!std::isnan(m.acceptance_rate)) {
            acc_sum += m.acceptance_rate;
            ++acc_count;
        }
    }
    report.mean_distance = dist_count == 0 ? 0.0 : dist_sum / static_cast<double>(dist_count);
    report.mean_acceptance = acc_count == 0 ? std::numeric_limits<double>::quiet_NaN()
                                            : acc_sum / static_cast<double>(acc_count);
    const auto observed = static_cast<long long>(std::max<std::size_t>(report.sequence_frames, 1));
    report.equivalent_failures = scale_failures(static_cast<long long>(report.total_failures),
                                                observed, reference_frames);
}

// --- frame sources -------------------------------------------------------------

std::optional<LabeledFrame> ScenarioSource::next() {
    if (stream_.done()) {
        return std::nullopt;
    }
    return stream_.next();
}

DirectorySource::DirectorySource(const fs::path& frames_dir, const fs::path& groundtruth) {
    std::error_code ec;
    if (!fs::is_directory(frames_dir, ec)) {
        throw IoError(frames_dir.string(), "not a readable directory");
    }
    truth_ = read_pose_csv(groundtruth);
    for (std::size_t k = 1;; ++k) {
        fs::path p = frames_dir / frame_name(k);
        if (!fs::exists(p, ec)) {
            break;
        }
        files_.push_back(std::move(p));
    }
    if (files_.empty()) {
        throw IoError(frames_dir.string(), "no frame_000001.pgm found");
    }
    if (files_.size() != truth_.frame_count()) {
        throw IoError(groundtruth.string(),
                      "groundtruth has " + std::to_string(truth_.frame_count()) +
                          " frames but the directory holds " + std::to_string(files_.size()) +
                          " consecutive frame files");
    }
}

std::optional<LabeledFrame> DirectorySource::next() {
    if (next_ >= files_.size()) {
        return std::nullopt;
    }
    LabeledFrame out;
    out.index = next_;
    out.frame = read_pgm(files_[next_]);
    out.truth = truth_.frames[next_];
    ++next_;
    return out;
}

std::unique_ptr<FrameSource> make_source(const RunConfig& cfg) {
    if (cfg.scenario) {
        return std::make_unique<ScenarioSource>(*cfg.scenario);
    }
    return std::make_unique<DirectorySource>(cfg.frames_dir, cfg.groundtruth);
}

// --- templates -------------------------------------------------------------------

namespace {

bool patch_inside(const Frame& frame, const TargetState& pose, const PatchDims& dims) {
    const double r = 0.5 * std::hypot(dims.length, dims.width);
    return pose.x - r >= 0.0 && pose.y - r >= 0.0 && pose.x + r <= frame.width() &&
           pose.y + r <= frame.height();
}

} // namespace

TrainingPatches collect_training_patches(std::span<const LabeledFrame> frames,
                                         const PatchDims& dims, Rng& rng, std::size_t per_set) {
    dims.validate();
    TrainingPatches out;
    if (frames.empty()) {
        throw ConfigError("template learning needs at least one labeled frame");
    }
    for (const LabeledFrame& lf : frames) {
        for (const TargetState& pose : lf.truth) {
            if (out.foreground.size() >= per_set) {
                break;
            }
            if (patch_inside(lf.frame, pose, dims)) {
                out.foreground.push_back(sample_patch(lf.frame, pose, dims, 0.0));
            }
        }
    }
    const double reach = std::hypot(dims.length, dims.width);
    const std::size_t max_attempts = 10000 * std::max<std::size_t>(per_set, 1);
    for (std::size_t attempt = 0; attempt < max_attempts && out.background.size() < per_set;
         ++attempt) {
        const LabeledFrame& lf = frames[attempt % frames.size()];
        const double r = 0.5 * reach;
        const double w = lf.frame.width() - 2.0 * r;
        const double h = lf.frame.height() - 2.0 * r;
        if (w <= 0.0 || h <= 0.0) {
            break;
        }
        const TargetState pose{r + w * uniform01(rng), r + h * uniform01(rng),
                               normalize_angle(2.0 * std::numbers::pi * uniform01(rng))};
        const bool clear = std::none_of(lf.truth.begin(), lf.truth.end(), [&](const TargetState& t) {
            return center_distance(t, pose) <= reach;
        });
        if (clear) {
            out.background.push_back(sample_patch(lf.frame, pose, dims, 0.0));
        }
    }
    if (out.foreground.size() < 2 || out.background.size() < 2) {
        throw ConfigError("could not cut enough training patches from the first frames (" +
                          std::to_string(out.foreground.size()) + " foreground, " +
                          std::to_string(out.background.size()) + " background)");
    }
    return out;
}

TemplateModel learn_template_from_frames(std::span<const LabeledFrame> frames,
                                         const PatchDims& dims, Rng& rng, std::size_t per_set) {
    const TrainingPatches p = collect_training_patches(frames, dims, rng, per_set);
    return TemplateModel(learn_template(p.foreground, dims), learn_template(p.background, dims),
                         dims);
}

namespace {

std::vector<std::vector<double>> load_patch_dir(const fs::path& dir, const PatchDims& dims) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError(dir.string(), "not a readable directory");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.path().extension() == ".pgm") {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        throw IoError(dir.string(), ec.message());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::vector<double>> patches;
    for (const fs::path& f : files) {
        const Frame img = read_pgm(f);
        if (img.width() != dims.length || img.height() != dims.width) {
            throw IoError(f.string(), "patch is " + std::to_string(img.width()) + "x" +
                                          std::to_string(img.height()) + ", expected " +
                                          std::to_string(dims.length) + "x" +
                                          std::to_string(dims.width));
        }
        patches.emplace_back(img.pixels().begin(), img.pixels().end());
    }
    return patches;
}

} // namespace

TemplateModel learn_template_from_dir(const fs::path& dir, const PatchDims& dims) {
    dims.validate();
    const auto fg = load_patch_dir(dir / "fg", dims);
    const auto bg = load_patch_dir(dir / "bg", dims);
    return TemplateModel(learn_template(fg, dims), learn_template(bg, dims), dims);
}

TemplateModel resolve_template(const RunConfig& cfg, std::span<const LabeledFrame> prefix) {
    if (cfg.template_model) {
        const TemplateSpec& t = *cfg.template_model;
        return TemplateModel({t.mu_f, t.sigma_f}, {t.mu_b, t.sigma_b}, cfg.dims, t.outside);
    }
    if (!cfg.template_dir.empty()) {
        return learn_template_from_dir(cfg.template_dir, cfg.dims);
    }
    Rng rng = make_rng(cfg.rng_seed, 200);
    return learn_template_from_frames(prefix, cfg.dims, rng);
}

// --- experiments -------------------------------------------------------------------

TrackerEvaluation::TrackerEvaluation(std::string label, const RunConfig& cfg,
                                     const TemplateModel& appearance)
    : tracker_(make_tracker(cfg, appearance)), threshold_(cfg.failure_threshold) {
    report_.label = std::move(label);
    report_.tracker = cfg.tracker;
    report_.particles = cfg.particle_count();
}

void TrackerEvaluation::start(const LabeledFrame& first) {
    tracker_->initialize(first.truth);
    last_.targets = first.truth;
    report_.frames.clear();
    report_.estimates.frames.assign(1, first.truth);
}

void TrackerEvaluation::process(const LabeledFrame& frame) {
    const auto t0 = std::chrono::steady_clock::now();
    TrackerStep step = tracker_->step(frame.frame);
    CorrectionResult corr = detect_and_correct(step.estimate, frame.truth, threshold_, *tracker_);
    elapsed_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    FrameMetrics m = make_metrics(frame.index + 1, std::move(corr.distances), std::move(corr.failed));
    m.acceptance_rate = step.acceptance_rate;
    m.ess = step.ess;
    report_.frames.push_back(std::move(m));
    report_.estimates.frames.push_back(step.estimate.targets);
    last_ = std::move(step.estimate);
}

RunReport TrackerEvaluation::finish(std::size_t sequence_frames, int reference_frames) {
    report_.sequence_frames = sequence_frames;
    report_.wall_seconds = elapsed_;
    summarize(report_, reference_frames);
    return report_;
}

namespace {

constexpr std::size_t kTemplateFrames = 5;

std::string run_label(const RunConfig& cfg) {
    return std::string(to_string(cfg.tracker)) + "-" + std::to_string(cfg.particle_count());
}

} // namespace

std::vector<RunReport> run_lockstep(std::span<const RunConfig> configs, const LockstepHooks& hooks) {
    if (configs.empty()) {
        throw std::invalid_argument("run_lockstep: no configurations");
    }
    for (const RunConfig& c : configs) {
        c.validate();
    }
    auto source = make_source(configs.front());

    std::deque<LabeledFrame> buffer;
    while (buffer.size() < kTemplateFrames) {
        auto f = source->next();
        if (!f) {
            break;
        }
        buffer.push_back(std::move(*f));
    }
    if (buffer.empty()) {
        throw ConfigError("input sequence holds no frames");
    }
    const std::vector<LabeledFrame> prefix(buffer.begin(), buffer.end());
    const TemplateModel appearance = resolve_template(configs.front(), prefix);

    std::vector<TrackerEvaluation> evals;
    evals.reserve(configs.size());
    for (const RunConfig& c : configs) {
        evals.emplace_back(run_label(c), c, appearance);
    }

    bool first = true;
    for (;;) {
        std::optional<LabeledFrame> lf;
        if (!buffer.empty()) {
            lf = std::move(buffer.front());
            buffer.pop_front();
        } else {
            lf = source->next();
        }
        if (!lf) {
            break;
        }
        for (TrackerEvaluation& e : evals) {
            if (first) {
                e.start(*lf);
            } else {
                e.process(*lf);
            }
        }
        first = false;
        if (hooks.on_frame) {
            hooks.on_frame(*lf, evals);
        }
    }

    std::vector<RunReport> reports;
    reports.reserve(evals.size());
    for (std::size_t k = 0; k < evals.size(); ++k) {
        reports.push_back(evals[k].finish(source->frame_count(), configs[k].reference_frames));
    }
    return reports;
}

RunReport run_experiment(const RunConfig& cfg) {
    cfg.validate();
    LockstepHooks hooks;
    if (cfg.dump_frames) {
        const fs::path dir = fs::path(cfg.output_dir) / "annotated";
        hooks.on_frame = [dir, dims = cfg.dims](const LabeledFrame& lf,
                                                std::span<const TrackerEvaluation> evals) {
            const Frame annotated =
                annotate_frame(lf.frame, evals.front().last_estimate(), lf.truth, dims);
            std::error_code ec;
            fs::create_directories(dir, ec);
            write_pgm(dir / frame_name(lf.index + 1), annotated);
        };
    }
    std::vector<RunReport> reports = run_lockstep(std::span<const RunConfig>(&cfg, 1), hooks);
    if (!cfg.output_dir.empty()) {
        write_run_outputs(cfg.output_dir, reports.front(), cfg);
    }
    return std::move(reports.front());
}

std::string metrics_csv(const RunReport& report) {
    std::string out = "frame,target,dist_px,failed\n";
    for (const FrameMetrics& m : report.frames) {
        std::size_t next_failed = 0;
        for (std::size_t i = 0; i < m.distances.size(); ++i) {
            const bool failed = next_failed < m.corrected.size() && m.corrected[next_failed] == i;
            if (failed) {
                ++next_failed;
            }
            out += std::to_string(m.frame);
            out += ',';
            out += std::to_string(i);
            out += ',';
            out += format_double(m.distances[i]);
            out += failed ? ",1\n" : ",0\n";
        }
    }
    return out;
}

std::string summary_csv_header() {
    return "label,tracker,particles,frames,failures,equivalent_failures,mean_dist_px,max_dist_px,"
           "mean_acceptance\n";
}

std::string summary_csv_row(const RunReport& report) {
    std::ostringstream out;
    out << report.label << ',' << to_string(report.tracker) << ',' << report.particles << ','
        << report.sequence_frames << ',' << report.total_failures << ','
        << report.equivalent_failures << ',' << format_double(report.mean_distance) << ','
        << format_double(report.max_distance) << ',' << optional_number(report.mean_acceptance)
        << '\n';
    return out.str();
}

namespace {

std::string diagnostics_csv(const RunReport& report) {
    std::string out = "frame,failures,mean_dist_px,acceptance_rate,ess\n";
    for (const FrameMetrics& m : report.frames) {
        out += std::to_string(m.frame) + ',' + std::to_string(m.failures) + ',' +
               format_double(m.mean_distance) + ',' + optional_number(m.acceptance_rate) + ',' +
               optional_number(m.ess) + '\n';
    }
    return out;
}

nlohmann::json report_json(const RunReport& report, const RunConfig& cfg) {
    nlohmann::json series = nlohmann::json::array();
    for (const FrameMetrics& m : report.frames) {
        series.push_back({{"frame", m.frame},
                          {"mean_dist_px", m.mean_distance},
                          {"failures", m.failures},
                          {"corrected", m.corrected},
                          {"acceptance_rate", nullable(m.acceptance_rate)},
                          {"ess", nullable(m.ess)}});
    }
    return {{"label", report.label},
            {"tracker", std::string(to_string(report.tracker))},
            {"particles", report.particles},
            {"sequence_frames", report.sequence_frames},
            {"reference_frames", cfg.reference_frames},
            {"total_failures", report.total_failures},
            {"equivalent_failures", report.equivalent_failures},
            {"mean_dist_px", report.mean_distance},
            {"max_dist_px", report.max_distance},
            {"mean_acceptance", nullable(report.mean_acceptance)},
            {"wall_seconds", report.wall_seconds},
            {"config", to_json(cfg)},
            {"frames", std::move(series)}};
}

} // namespace

void write_run_outputs(const fs::path& dir, const RunReport& report, const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError(dir.string(), "cannot create output directory: " + ec.message());
    }
    write_file_atomic(dir / "metrics.csv", metrics_csv(report));
    write_pose_csv(dir / "estimates.csv", report.estimates);
    write_file_atomic(dir / "diagnostics.csv", diagnostics_csv(report));
    write_file_atomic(dir / "summary.csv", summary_csv_header() + summary_csv_row(report));
    write_file_atomic(dir / "report.json", report_json(report, cfg).dump(2) + "\n");
}

Frame annotate_frame(const Frame& frame, const TrackEstimate& estimate,
                     std::span<const TargetState> truth, const PatchDims& dims) {
    Frame out = frame;
    const PixelBox clip{0, frame.width() - 1, 0, frame.height() - 1};
    for (const TargetState& s : estimate.targets) {
        const OrientedRect rect(s, dims);
        for_each_covered_pixel(s, dims, clip, [&](int col, int row) {
            const double px = col + 0.5;
            const double py = row + 0.5;
            const bool edge = !rect.contains(px - 1.0, py) || !rect.contains(px + 1.0, py) ||
                              !rect.contains(px, py - 1.0) || !rect.contains(px, py + 1.0);
            if (edge) {
                out.set(col, row, 1.0);
            }
        });
    }
    for (const TargetState& t : truth) {
        const int cx = static_cast<int>(std::floor(t.x));
        const int cy = static_cast<int>(std::floor(t.y));
        for (int r = cy - 1; r <= cy + 1; ++r) {
            for (int c = cx - 1; c <= cx + 1; ++c) {
                if (c >= 0 && r >= 0 && c < frame.width() && r < frame.height()) {
                    out.set(c, r, 0.0);
                }
            }
        }
    }
    return out;
}

// --- comparisons ---------------------------------------------------------------------

void CompareConfig::validate() const {
    std::vector<std::string> problems;
    collect(problems, [&] { base.validate(); });
    if (cells.empty()) {
        problems.emplace_back("compare: no cells");
    }
    for (const CompareCell& c : cells) {
        if (c.particles < 1) {
            problems.emplace_back("compare: cell particle counts must be >= 1");
            break;
        }
    }
    if (seeds.empty()) {
        problems.emplace_back("compare: no seeds");
    }
    if (jobs < 1) {
        problems.emplace_back("compare: jobs must be >= 1");
    }
    if (!problems.empty()) {
        throw ConfigError(join_lines(problems));
    }
}

RunConfig cell_config(const RunConfig& base, const CompareCell& cell, std::uint64_t seed) {
    RunConfig cfg = base;
    cfg.tracker = cell.tracker;
    if (cell.tracker == TrackerKind::mcmc_mrf) {
        cfg.n_samples = cell.particles;
    } else {
        cfg.particles_per_target = cell.particles;
    }
    cfg.rng_seed = seed;
    if (cfg.scenario) {
        cfg.scenario->rng_seed = seed;
    }
    cfg.output_dir.clear();
    cfg.dump_frames = false;
    return cfg;
}

std::vector<CompareRow> run_compare(const CompareConfig& cfg) {
    cfg.validate();
    std::vector<CompareRow> rows(cfg.cells.size());
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
        rows[c].cell = cfg.cells[c];
        rows[c].runs.resize(cfg.seeds.size());
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t s = next.fetch_add(1);
            if (s >= cfg.seeds.size()) {
                return;
            }
            {
                std::lock_guard lock(error_mutex);
                if (error) {
                    return;
                }
            }
            try {
                const std::uint64_t seed = cfg.seeds[s];
                std::vector<RunConfig> configs;
                configs.reserve(cfg.cells.size());
                for (const CompareCell& cell : cfg.cells) {
                    configs.push_back(cell_config(cfg.base, cell, seed));
                }
                std::vector<RunReport> reports = run_lockstep(configs);
                for (std::size_t c = 0; c < reports.size(); ++c) {
                    if (!cfg.output_dir.empty()) {
                        write_run_outputs(fs::path(cfg.output_dir) / reports[c].label /
                                              ("seed_" + std::to_string(seed)),
                                          reports[c], configs[c]);
                    }
                    rows[c].runs[s] = std::move(reports[c]);
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                return;
            }
        }
    };

    const std::size_t n_threads = std::min(cfg.jobs, cfg.seeds.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    for (CompareRow& row : rows) {
        double fails = 0.0;
        double eq = 0.0;
        double dist = 0.0;
        double acc = 0.0;
        std::size_t acc_n = 0;
        for (const RunReport& r : row.runs) {
            fails += static_cast<double>(r.total_failures);
            eq += static_cast<double>(r.equivalent_failures);
            dist += r.mean_distance;
            if (!std::isnan(r.mean_acceptance)) {
                acc += r.mean_acceptance;
                ++acc_n;
            }
        }
        const auto n = static_cast<double>(row.runs.size());
        row.mean_failures = fails / n;
        row.mean_equivalent_failures = eq / n;
        row.mean_distance = dist / n;
        if (acc_n > 0) {
            row.mean_acceptance = acc / static_cast<double>(acc_n);
        }
    }
    return rows;
}

std::string compare_table_csv(std::span<const CompareRow> rows) {
    std::ostringstream out;
    out << "tracker,particles,seeds,mean_failures,mean_equivalent_failures,mean_dist_px,"
           "mean_acceptance,failures_per_seed\n";
    for (const CompareRow& row : rows) {
        out << to_string(row.cell.tracker) << ',' << row.cell.particles << ',' << row.runs.size()
            << ',' << format_fixed(row.mean_failures, 3) << ','
            << format_fixed(row.mean_equivalent_failures, 3) << ','
            << format_fixed(row.mean_distance, 4) << ',';
        if (!std::isnan(row.mean_acceptance)) {
            out << format_fixed(row.mean_acceptance, 4);
        }
        out << ',';
        for (std::size_t k = 0; k < row.runs.size(); ++k) {
            out << (k ? " " : "") << row.runs[k].total_failures;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace mrftrack
