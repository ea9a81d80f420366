#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrftrack/appearance.hpp"
#include "mrftrack/condensation.hpp"
#include "mrftrack/csv_io.hpp"
#include "mrftrack/estimate.hpp"
#include "mrftrack/interaction.hpp"
#include "mrftrack/mcmc.hpp"
#include "mrftrack/motion.hpp"
#include "mrftrack/simulator.hpp"

namespace mrftrack {

enum class TrackerKind { mcmc_mrf, independent };

[[nodiscard]] std::string_view to_string(TrackerKind kind) noexcept;
[[nodiscard]] TrackerKind parse_tracker_kind(std::string_view text);

/// Explicit foreground/background statistics (instead of learning them).
struct TemplateSpec {
    double mu_f = 0.0;
    double sigma_f = 0.0;
    double mu_b = 0.0;
    double sigma_b = 0.0;
    std::optional<double> outside;
};

struct RunConfig {
    TrackerKind tracker = TrackerKind::mcmc_mrf;
    std::size_t n_samples = 200;           ///< joint samples per frame (mcmc-mrf)
    std::size_t particles_per_target = 10; ///< independent filters
    std::size_t burn_in = 0;
    MotionParams motion;
    InteractionParams interaction;
    PatchDims dims;
    /// Template source: explicit numbers, a directory with fg/ and bg/ PGM
    /// patches, or (neither) learned from the first frames and groundtruth.
    std::optional<TemplateSpec> template_model;
    std::string template_dir;
    double failure_threshold = 50.0;
    /// Input: exactly one of (frames_dir + groundtruth) or scenario.
    std::string frames_dir;
    std::string groundtruth;
    std::optional<ScenarioConfig> scenario;
    std::string output_dir;
    std::uint64_t rng_seed = 1;
    int reference_frames = 10400;
    bool dump_frames = false;

    /// Throws ConfigError listing every problem, one per line.
    void validate() const;
    /// Particle budget of this tracker (joint samples or per-target count).
    [[nodiscard]] std::size_t particle_count() const noexcept {
        return tracker == TrackerKind::mcmc_mrf ? n_samples : particles_per_target;
    }
};

/// Output of one filter step plus its diagnostics (NaN when not applicable).
struct TrackerStep {
    TrackEstimate estimate;
    double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
    double ess = std::numeric_limits<double>::quiet_NaN();
};

/// Common driver interface of the two filters.
class Tracker {
public:
    virtual ~Tracker() = default;

    /// Places every particle of every target on the given poses.
    virtual void initialize(std::span<const TargetState> poses) = 0;
    virtual TrackerStep step(const Frame& frame) = 0;
    /// Overwrites target i in every particle/sample with `pose`.
    virtual void overwrite_target(std::size_t i, const TargetState& pose) = 0;
    [[nodiscard]] virtual std::size_t target_count() const = 0;
};

class McmcMrfTracker final : public Tracker {
public:
    McmcMrfTracker(McmcConfig cfg, TemplateModel appearance);

    void initialize(std::span<const TargetState> poses) override;
    TrackerStep step(const Frame& frame) override;
    void overwrite_target(std::size_t i, const TargetState& pose) override;
    [[nodiscard]] std::size_t target_count() const override { return reference_.size(); }

    [[nodiscard]] const SampleSet& samples() const noexcept { return samples_; }
    /// Poses the next frame's interaction graph is built from.
    [[nodiscard]] const std::vector<TargetState>& reference() const noexcept { return reference_; }

private:
    McmcConfig cfg_;
    TemplateModel appearance_;
    Rng rng_;
    SampleSet samples_;
    std::vector<TargetState> reference_;
};

class IndependentTracker final : public Tracker {
public:
    IndependentTracker(CondensationConfig cfg, TemplateModel appearance);

    void initialize(std::span<const TargetState> poses) override;
    TrackerStep step(const Frame& frame) override;
    void overwrite_target(std::size_t i, const TargetState& pose) override;
    [[nodiscard]] std::size_t target_count() const override { return particles_.targets.size(); }

    [[nodiscard]] const WeightedParticleSet& particles() const noexcept { return particles_; }

private:
    CondensationConfig cfg_;
    TemplateModel appearance_;
    Rng rng_;
    WeightedParticleSet particles_;
};

[[nodiscard]] std::unique_ptr<Tracker> make_tracker(const RunConfig& cfg,
                                                    const TemplateModel& appearance);

struct CorrectionResult {
    std::vector<std::size_t> failed;  ///< target ids, ascending
    std::vector<double> distances;    ///< per-target position error, pixels
};

/// Flags every target whose position error exceeds `threshold` and snaps it
/// (position and heading) back to the truth in the whole particle
/// population. Lost and switched tracks count the same.
CorrectionResult detect_and_correct(const TrackEstimate& estimate,
                                    std::span<const TargetState> truth, double threshold,
                                    Tracker& tracker);

/// round(count * frames_reference / frames_observed).
[[nodiscard]] long long scale_failures(long long count, long long frames_observed,
                                       long long frames_reference);

struct FrameMetrics {
    std::size_t frame = 0;  ///< 1-based sequence frame number
    std::vector<double> distances;
    double mean_distance = 0.0;
    std::size_t failures = 0;
    std::vector<std::size_t> corrected;
    double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
    double ess = std::numeric_limits<double>::quiet_NaN();
};

/// Mean over targets of each frame's distances.
[[nodiscard]] std::vector<double> mean_distance_series(std::span<const FrameMetrics> metrics);

/// Builds FrameMetrics from stored estimates and truth without running a
/// tracker (the `eval` path).
[[nodiscard]] std::vector<FrameMetrics> evaluate_estimates(const PoseTrack& estimates,
                                                           const PoseTrack& truth,
                                                           double threshold);

struct RunReport {
    std::string label;
    TrackerKind tracker = TrackerKind::mcmc_mrf;
    std::size_t particles = 0;
    std::size_t sequence_frames = 0;
    std::size_t total_failures = 0;
    long long equivalent_failures = 0;
    double mean_distance = 0.0;
    double max_distance = 0.0;
    double mean_acceptance = std::numeric_limits<double>::quiet_NaN();
    double wall_seconds = 0.0;
    std::vector<FrameMetrics> frames;
    PoseTrack estimates;  ///< frame 1 holds the initial (groundtruth) poses
};

/// Fills totals/means of a report from its per-frame metrics.
void summarize(RunReport& report, int reference_frames);

// --- frame sources ----------------------------------------------------------

class FrameSource {
public:
    virtual ~FrameSource() = default;
    [[nodiscard]] virtual std::optional<LabeledFrame> next() = 0;
    [[nodiscard]] virtual std::size_t frame_count() const = 0;
};

class ScenarioSource final : public FrameSource {
public:
    explicit ScenarioSource(ScenarioConfig cfg) : stream_(std::move(cfg)) {}
    [[nodiscard]] std::optional<LabeledFrame> next() override;
    [[nodiscard]] std::size_t frame_count() const override {
        return static_cast<std::size_t>(stream_.config().n_frames);
    }

private:
    ScenarioStream stream_;
};

/// frame_*.pgm files (sorted by name) paired with a groundtruth CSV.
class DirectorySource final : public FrameSource {
public:
    DirectorySource(const std::filesystem::path& frames_dir,
                    const std::filesystem::path& groundtruth);
    [[nodiscard]] std::optional<LabeledFrame> next() override;
    [[nodiscard]] std::size_t frame_count() const override { return files_.size(); }

private:
    std::vector<std::filesystem::path> files_;
    PoseTrack truth_;
    std::size_t next_ = 0;
};

[[nodiscard]] std::unique_ptr<FrameSource> make_source(const RunConfig& cfg);

/// Learns foreground statistics from patches at the truth poses of the given
/// frames (up to `per_set` patches) and background statistics from `per_set`
/// random poses that touch no target.
[[nodiscard]] TemplateModel learn_template_from_frames(std::span<const LabeledFrame> frames,
                                                       const PatchDims& dims, Rng& rng,
                                                       std::size_t per_set = 32);

/// Loads fg/*.pgm and bg/*.pgm patches from a directory and learns both sets.
[[nodiscard]] TemplateModel learn_template_from_dir(const std::filesystem::path& dir,
                                                    const PatchDims& dims);

/// Foreground/background training patches cut from labeled frames, as written
/// by `simulate --training-patches`.
struct TrainingPatches {
    std::vector<std::vector<double>> foreground;
    std::vector<std::vector<double>> background;
};
[[nodiscard]] TrainingPatches collect_training_patches(std::span<const LabeledFrame> frames,
                                                       const PatchDims& dims, Rng& rng,
                                                       std::size_t per_set = 32);

// --- experiments -------------------------------------------------------------

/// Tracker plus its running metrics, advanced one labeled frame at a time.
class TrackerEvaluation {
public:
    TrackerEvaluation(std::string label, const RunConfig& cfg, const TemplateModel& appearance);

    /// Frame 0: initialize from the truth; nothing is scored.
    void start(const LabeledFrame& first);
    void process(const LabeledFrame& frame);
    /// Finalizes totals. `sequence_frames` is the length of the input sequence.
    [[nodiscard]] RunReport finish(std::size_t sequence_frames, int reference_frames);

    [[nodiscard]] const Tracker& tracker() const noexcept { return *tracker_; }
    [[nodiscard]] const TrackEstimate& last_estimate() const noexcept { return last_; }

private:
    RunReport report_;
    std::unique_ptr<Tracker> tracker_;
    double threshold_;
    TrackEstimate last_;
    double elapsed_ = 0.0;
};

/// Everything a run needs before tracking: frames are pulled from `source`,
/// the template is learned or loaded, and then every evaluation is driven over
/// the same frames in lockstep. `on_frame` (if set) sees each frame after all
/// trackers processed it.
struct LockstepHooks {
    std::function<void(const LabeledFrame&, std::span<const TrackerEvaluation>)> on_frame;
};

[[nodiscard]] TemplateModel resolve_template(const RunConfig& cfg,
                                             std::span<const LabeledFrame> prefix);

/// Runs one configuration end to end and writes its outputs when
/// cfg.output_dir is set: metrics.csv, estimates.csv, diagnostics.csv,
/// summary.csv, report.json and (dump_frames) annotated/*.pgm.
[[nodiscard]] RunReport run_experiment(const RunConfig& cfg);

/// Runs several configurations over one shared input sequence. All configs
/// must describe the same input; the template is resolved from the first.
[[nodiscard]] std::vector<RunReport> run_lockstep(std::span<const RunConfig> configs,
                                                  const LockstepHooks& hooks = {});

/// Writes metrics.csv, estimates.csv, diagnostics.csv, summary.csv and
/// report.json for one report.
void write_run_outputs(const std::filesystem::path& dir, const RunReport& report,
                       const RunConfig& cfg);

[[nodiscard]] std::string metrics_csv(const RunReport& report);
[[nodiscard]] std::string summary_csv_header();
[[nodiscard]] std::string summary_csv_row(const RunReport& report);

/// Copy of a frame with each estimate's footprint outlined in white and each
/// truth center marked in black.
[[nodiscard]] Frame annotate_frame(const Frame& frame, const TrackEstimate& estimate,
                                   std::span<const TargetState> truth, const PatchDims& dims);

// --- comparisons -------------------------------------------------------------

struct CompareCell {
    TrackerKind tracker = TrackerKind::mcmc_mrf;
    std::size_t particles = 0;
};

struct CompareConfig {
    RunConfig base;
    std::vector<CompareCell> cells;
    std::vector<std::uint64_t> seeds;
    std::size_t jobs = 1;
    std::string output_dir;

    void validate() const;
};

struct CompareRow {
    CompareCell cell;
    std::vector<RunReport> runs;  ///< one per seed, in seed order
    double mean_failures = 0.0;
    double mean_equivalent_failures = 0.0;
    double mean_distance = 0.0;
    double mean_acceptance = std::numeric_limits<double>::quiet_NaN();
};

/// Every cell on every seed. With a scenario input, each seed regenerates the
/// scenario (scenario seed = run seed = the seed) and all cells of that seed
/// share the frames. Seeds run on up to `jobs` worker threads.
[[nodiscard]] std::vector<CompareRow> run_compare(const CompareConfig& cfg);

[[nodiscard]] std::string compare_table_csv(std::span<const CompareRow> rows);

/// The run configuration of one (cell, seed) pair.
[[nodiscard]] RunConfig cell_config(const RunConfig& base, const CompareCell& cell,
                                    std::uint64_t seed);

} // namespace mrftrack
