#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swelab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values (non-finite, out of physical range, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Geometry that cannot be meshed at the requested element size.
class MeshError : public Error {
public:
    explicit MeshError(const std::string& msg) : Error(msg) {}
};

/// Too few data points for the requested operation.
class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

/// Time integration produced a non-finite or bound-exceeding displacement.
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& msg, std::size_t step)
        : Error(msg + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Phase regression slope too small to define a propagation speed.
class DegenerateSlopeError : public Error {
public:
    explicit DegenerateSlopeError(const std::string& msg) : Error(msg) {}
};

/// Spatial sampling too coarse for unambiguous phase unwrapping.
class AliasingError : public Error {
public:
    explicit AliasingError(const std::string& msg) : Error(msg) {}
};

/// k-space peak at the axis boundary or not resolvable.
class UnreliablePeakError : public Error {
public:
    explicit UnreliablePeakError(const std::string& msg) : Error(msg) {}
};

/// File I/O failure, message carries the offending path.
class IoError : public Error {
public:
    IoError(const std::string& msg, const std::string& path)
        : Error(msg + ": " + path) {}
};

}  // namespace swelab
