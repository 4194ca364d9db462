#pragma once

#include <stdexcept>
#include <string>

namespace qkt {

/// Invalid scenario configuration. Carries the offending key when known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    explicit ConfigError(const std::string& what) : ConfigError("", what) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A numerical invariant was violated at run time (unitarity loss, norm
/// drift, eigensolver non-convergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File I/O failure. Carries the path involved.
class IoError : public std::runtime_error {
public:
    IoError(std::string path, const std::string& what)
        : std::runtime_error(what + " (" + path + ")"), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace qkt
