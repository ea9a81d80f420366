#pragma once

#include <stdexcept>
#include <string>

namespace mrftrack {

/// Invalid run/scenario configuration. Messages may list several problems,
/// one per line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input file, or an output that could not be written.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace mrftrack
