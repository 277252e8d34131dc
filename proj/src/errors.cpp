#include "masersim/errors.hpp"

namespace masersim {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::ConfigParse: return "config_parse";
        case ErrorCode::SchemaError: return "schema_error";
        case ErrorCode::NonFiniteState: return "non_finite_state";
        case ErrorCode::StepUnderflow: return "step_underflow";
        case ErrorCode::MaxStepsExceeded: return "max_steps_exceeded";
        case ErrorCode::NonPositiveComponent: return "non_positive_component";
        case ErrorCode::NoPulse: return "no_pulse";
        case ErrorCode::UnboundedPulse: return "unbounded_pulse";
        case ErrorCode::FewerThanTwoPeaks: return "fewer_than_two_peaks";
        case ErrorCode::EmptyWindow: return "empty_window";
        case ErrorCode::NoConservedQuantity: return "no_conserved_quantity";
        case ErrorCode::UnknownVariant: return "unknown_variant";
        case ErrorCode::UnknownPreset: return "unknown_preset";
        case ErrorCode::ZeroInversionScale: return "zero_inversion_scale";
        case ErrorCode::ZeroLoss: return "zero_loss";
        case ErrorCode::NonPositiveLength: return "non_positive_length";
        case ErrorCode::NonPositiveRadius: return "non_positive_radius";
        case ErrorCode::GridTooLarge: return "grid_too_large";
        case ErrorCode::MismatchedGrids: return "mismatched_grids";
        case ErrorCode::Io: return "io_error";
    }
    return "unknown";
}

} // namespace masersim
