#pragma once

#include <stdexcept>
#include <string>

namespace bprobe {

enum class ErrorCode {
    ConfigSyntax,
    ConfigSemantic,
    UnitMismatch,
    InitialRejected,
    OracleExhausted,
    InconsistentOracle,
    EmptyRoute,
    EmptyCorpus,
    UnknownCategory,
    UnknownItem,
    UnknownStore,
    SpawnFailure,
    ProtocolViolation,
    PoolExhausted,
    OracleUnavailable,
    EmptyRoadNetwork,
    NotOwner,
    Io,
};

/// Library-wide exception carrying a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

} // namespace bprobe
