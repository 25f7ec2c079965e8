#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crooked {

enum class ErrorCode {
    DomainError,
    NotSeparated,
    LinesCross,
    MixedSides,
    IsDisjoint,
    NotInProduct,
    Degenerate,
    RejectedUnreduced,
    NoHyperbolic,
    PairingFailed,
    HalfSpacesOverlap,
    PingPongFailed,
    EmptyWindow,
    ChartOverflow,
    InvalidInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NotSeparated: return "NotSeparated";
        case ErrorCode::LinesCross: return "LinesCross";
        case ErrorCode::MixedSides: return "MixedSides";
        case ErrorCode::IsDisjoint: return "IsDisjoint";
        case ErrorCode::NotInProduct: return "NotInProduct";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::RejectedUnreduced: return "RejectedUnreduced";
        case ErrorCode::NoHyperbolic: return "NoHyperbolic";
        case ErrorCode::PairingFailed: return "PairingFailed";
        case ErrorCode::HalfSpacesOverlap: return "HalfSpacesOverlap";
        case ErrorCode::PingPongFailed: return "PingPongFailed";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::ChartOverflow: return "ChartOverflow";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace crooked
