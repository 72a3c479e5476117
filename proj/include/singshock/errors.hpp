#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace singshock {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: grids, parameters, flux tables, presets, test functions.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while reading or writing an artifact.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(what + ": " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// r·|Φ| > 1 somewhere: transported mass would skip a cell.
class CflViolation : public Error {
public:
    CflViolation(std::size_t cell, std::int64_t step, double courant)
        : Error("CFL violation at cell " + std::to_string(cell) + ", step " + std::to_string(step)
                + ": r*|phi| = " + std::to_string(courant)),
          cell_(cell), step_(step), courant_(courant) {}

    std::size_t cell() const noexcept { return cell_; }
    std::int64_t step() const noexcept { return step_; }
    double courant() const noexcept { return courant_; }

private:
    std::size_t cell_;
    std::int64_t step_;
    double courant_;
};

/// Auto-r mode gave up after the maximum number of halvings.
class CflExhausted : public Error {
public:
    CflExhausted(int restarts, double last_r)
        : Error("CFL still violated after " + std::to_string(restarts) + " restarts (last r = "
                + std::to_string(last_r) + ")"),
          restarts_(restarts), last_r_(last_r) {}
    int restarts() const noexcept { return restarts_; }
    double last_r() const noexcept { return last_r_; }

private:
    int restarts_;
    double last_r_;
};

/// A reduction or fit was asked for with too few inputs.
class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace singshock
