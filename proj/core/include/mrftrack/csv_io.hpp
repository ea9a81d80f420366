#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mrftrack/geometry.hpp"

namespace mrftrack {

/// Per-frame, per-target poses: tracks[f][id]. Used for groundtruth and for
/// stored tracker estimates. On disk: `frame,id,x,y,theta` with 1-based frame
/// numbers, 0-based ids, shortest round-trip decimal floats.
struct PoseTrack {
    std::vector<std::vector<TargetState>> frames;

    [[nodiscard]] std::size_t frame_count() const noexcept { return frames.size(); }
    [[nodiscard]] std::size_t target_count() const noexcept {
        return frames.empty() ? 0 : frames.front().size();
    }
};

void write_pose_csv(const std::filesystem::path& path, const PoseTrack& track);

/// Throws IoError on unreadable files, malformed rows, or an incomplete
/// frame x id grid.
[[nodiscard]] PoseTrack read_pose_csv(const std::filesystem::path& path);

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string format_double(double v);
/// Fixed-point with `digits` decimals.
[[nodiscard]] std::string format_fixed(double v, int digits);

/// Writes `content` to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace mrftrack
