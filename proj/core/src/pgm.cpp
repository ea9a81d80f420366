#include "mrftrack/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "mrftrack/csv_io.hpp"
#include "mrftrack/error.hpp"

namespace mrftrack {
namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in, const std::filesystem::path& path) {
    std::string token;
    int ch = 0;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) {
                return token;
            }
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    if (token.empty()) {
        throw IoError(path.string(), "truncated PGM header");
    }
    return token;
}

int parse_positive(const std::string& token, const std::filesystem::path& path,
                   const char* field) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size() || value <= 0) {
            throw std::invalid_argument(token);
        }
        return value;
    } catch (const std::exception&) {
        throw IoError(path.string(), std::string("bad PGM ") + field + " '" + token + "'");
    }
}

} // namespace

std::uint8_t quantize_intensity(double value) noexcept {
    return static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 1.0) * 255.0));
}

Frame read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path.string(), "cannot open");
    }
    if (next_token(in, path) != "P5") {
        throw IoError(path.string(), "not a binary PGM (P5)");
    }
    const int width = parse_positive(next_token(in, path), path, "width");
    const int height = parse_positive(next_token(in, path), path, "height");
    const int maxval = parse_positive(next_token(in, path), path, "maxval");
    if (maxval > 255) {
        throw IoError(path.string(), "only 8-bit PGM is supported");
    }
    // next_token consumed exactly one whitespace byte after maxval.
    std::vector<unsigned char> raw(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw IoError(path.string(), "truncated pixel data");
    }
    std::vector<double> pixels(raw.size());
    const double scale = static_cast<double>(maxval);
    std::transform(raw.begin(), raw.end(), pixels.begin(), [&](unsigned char v) {
        return std::min(1.0, v / scale);
    });
    return Frame(width, height, std::move(pixels));
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
    std::string out = "P5\n" + std::to_string(frame.width()) + ' ' +
                      std::to_string(frame.height()) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + frame.pixels().size());
    std::transform(frame.pixels().begin(), frame.pixels().end(), out.begin() + static_cast<std::ptrdiff_t>(header),
                   [](double v) { return static_cast<char>(quantize_intensity(v)); });
    write_file_atomic(path, out);
}

void write_patch_pgm(const std::filesystem::path& path, const std::vector<double>& patch,
                     const PatchDims& dims) {
    write_pgm(path, Frame(dims.length, dims.width,
                          std::vector<double>(patch.begin(), patch.end())));
}

} // namespace mrftrack
