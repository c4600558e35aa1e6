#include "bprobe/error.hpp"

namespace bprobe {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigSyntax: return "config-syntax";
        case ErrorCode::ConfigSemantic: return "config-semantic";
        case ErrorCode::UnitMismatch: return "unit-mismatch";
        case ErrorCode::InitialRejected: return "initial-rejected";
        case ErrorCode::OracleExhausted: return "oracle-exhausted";
        case ErrorCode::InconsistentOracle: return "inconsistent-oracle";
        case ErrorCode::EmptyRoute: return "empty-route";
        case ErrorCode::EmptyCorpus: return "empty-corpus";
        case ErrorCode::UnknownCategory: return "unknown-category";
        case ErrorCode::UnknownItem: return "unknown-item";
        case ErrorCode::UnknownStore: return "unknown-store";
        case ErrorCode::SpawnFailure: return "spawn-failure";
        case ErrorCode::ProtocolViolation: return "protocol-violation";
        case ErrorCode::PoolExhausted: return "pool-exhausted";
        case ErrorCode::OracleUnavailable: return "oracle-unavailable";
        case ErrorCode::EmptyRoadNetwork: return "empty-road-network";
        case ErrorCode::NotOwner: return "not-owner";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

} // namespace bprobe
