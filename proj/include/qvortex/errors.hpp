#pragma once

#include <stdexcept>
#include <string>

namespace qvx {

/// Error category; maps one-to-one onto process exit codes and C-API status.
enum class ErrorCategory { config = 1, numeric = 2, io = 3, invalid = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, std::string msg)
        : std::runtime_error(std::move(msg)), category_(cat) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct ConfigError : Error {
    explicit ConfigError(std::string m) : Error(ErrorCategory::config, std::move(m)) {}
};

struct NumericError : Error {
    explicit NumericError(std::string m) : Error(ErrorCategory::numeric, std::move(m)) {}
};

struct InvalidArgument : Error {
    explicit InvalidArgument(std::string m) : Error(ErrorCategory::invalid, std::move(m)) {}
};

/// File-format failures keep a machine-checkable reason alongside the message.
enum class IoReason {
    open_failed,
    bad_magic,
    bad_version,
    truncated_payload,
    dims_overflow,
    malformed,
    write_failed
};

class IoError : public Error {
public:
    IoError(IoReason r, std::string m) : Error(ErrorCategory::io, std::move(m)), reason_(r) {}
    IoReason reason() const noexcept { return reason_; }

private:
    IoReason reason_;
};

/// Geometry validation failures (mesh orientation, boundary matching, degenerate input).
enum class GeometryReason {
    degenerate_input,
    non_planar,
    inconsistent_orientation,
    boundary_mismatch
};

class GeometryError : public Error {
public:
    GeometryError(GeometryReason r, std::string m)
        : Error(ErrorCategory::invalid, std::move(m)), reason_(r) {}
    GeometryReason reason() const noexcept { return reason_; }

private:
    GeometryReason reason_;
};

/// Point-evaluation failures in the potential-theory kernels.
enum class EvalReason { core_proximity, on_cut, ill_conditioned_probe };

class EvaluationError : public Error {
public:
    EvaluationError(EvalReason r, std::string m)
        : Error(ErrorCategory::numeric, std::move(m)), reason_(r) {}
    EvalReason reason() const noexcept { return reason_; }

private:
    EvalReason reason_;
};

}  // namespace qvx
