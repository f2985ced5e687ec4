#pragma once

#include <stdexcept>
#include <string>

namespace simtebd {

enum class ErrorKind {
    NumericInput,
    Dimension,
    Symmetry,
    Config,
    Normalization,
    Gate,
    Index,
    DegenerateState,
    StaleGauge,
    MetricUndefined,
    RecoveryDegenerate,
    InstanceTooLarge,
    Divergence,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NumericInput: return "numeric-input error";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Symmetry: return "symmetry error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Normalization: return "normalization error";
    case ErrorKind::Gate: return "gate error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::DegenerateState: return "degenerate-state error";
    case ErrorKind::StaleGauge: return "stale-gauge error";
    case ErrorKind::MetricUndefined: return "metric undefined";
    case ErrorKind::RecoveryDegenerate: return "recovery-degenerate error";
    case ErrorKind::InstanceTooLarge: return "instance-too-large error";
    case ErrorKind::Divergence: return "divergence error";
    }
    return "error";
}

}  // namespace simtebd
