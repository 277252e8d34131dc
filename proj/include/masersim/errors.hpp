#pragma once

#include <stdexcept>
#include <string>

namespace masersim {

enum class ErrorCode {
    InvalidArgument,
    ConfigParse,
    SchemaError,
    NonFiniteState,
    StepUnderflow,
    MaxStepsExceeded,
    NonPositiveComponent,
    NoPulse,
    UnboundedPulse,
    FewerThanTwoPeaks,
    EmptyWindow,
    NoConservedQuantity,
    UnknownVariant,
    UnknownPreset,
    ZeroInversionScale,
    ZeroLoss,
    NonPositiveLength,
    NonPositiveRadius,
    GridTooLarge,
    MismatchedGrids,
    Io,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type; every thrown error carries a code so the
/// C API and the CLI can map it to a stable status / exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace masersim
