#include "mrftrack/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "mrftrack/error.hpp"

namespace mrftrack {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError(tmp.string(), "cannot open for writing");
        }
        out << content;
        if (!out) {
            throw IoError(tmp.string(), "write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError(path.string(), "rename failed: " + ec.message());
    }
}

void write_pose_csv(const std::filesystem::path& path, const PoseTrack& track) {
    std::ostringstream out;
    out << "frame,id,x,y,theta\n";
    for (std::size_t f = 0; f < track.frames.size(); ++f) {
        for (std::size_t id = 0; id < track.frames[f].size(); ++id) {
            const TargetState& s = track.frames[f][id];
            out << (f + 1) << ',' << id << ',' << format_double(s.x) << ','
                << format_double(s.y) << ',' << format_double(s.theta) << '\n';
        }
    }
    write_file_atomic(path, out.str());
}

namespace {

template <typename T>
T parse_field(const std::string& text, const std::filesystem::path& path, std::size_t line) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw IoError(path.string(), "line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return value;
}

} // namespace

PoseTrack read_pose_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(path.string(), "cannot open");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string(), "empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "frame,id,x,y,theta") {
        throw IoError(path.string(), "expected header 'frame,id,x,y,theta'");
    }
    std::map<std::size_t, std::map<std::size_t, TargetState>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 5) {
            throw IoError(path.string(), "line " + std::to_string(line_no) + ": expected 5 fields");
        }
        const auto frame = parse_field<std::size_t>(fields[0], path, line_no);
        const auto id = parse_field<std::size_t>(fields[1], path, line_no);
        if (frame < 1) {
            throw IoError(path.string(), "line " + std::to_string(line_no) + ": frames are 1-based");
        }
        TargetState s;
        try {
            s = make_state(parse_field<double>(fields[2], path, line_no),
                           parse_field<double>(fields[3], path, line_no),
                           parse_field<double>(fields[4], path, line_no));
        } catch (const std::invalid_argument& e) {
            throw IoError(path.string(), "line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!rows[frame].emplace(id, s).second) {
            throw IoError(path.string(), "line " + std::to_string(line_no) + ": duplicate frame/id");
        }
    }
    PoseTrack track;
    if (rows.empty()) {
        return track;
    }
    const std::size_t n_targets = rows.begin()->second.size();
    std::size_t expected_frame = 1;
    for (const auto& [frame, ids] : rows) {
        if (frame != expected_frame++) {
            throw IoError(path.string(), "missing frame " + std::to_string(expected_frame - 1));
        }
        if (ids.size() != n_targets || ids.rbegin()->first != n_targets - 1) {
            throw IoError(path.string(), "frame " + std::to_string(frame) +
                                             " does not list ids 0.." +
                                             std::to_string(n_targets - 1));
        }
        std::vector<TargetState> poses;
        poses.reserve(n_targets);
        for (const auto& [id, s] : ids) {
            poses.push_back(s);
        }
        track.frames.push_back(std::move(poses));
    }
    return track;
}

} // namespace mrftrack
