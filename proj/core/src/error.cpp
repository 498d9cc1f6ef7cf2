#include <compactchain/error.hpp>

namespace compactchain {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ModulusTooSmall: return "ModulusTooSmall";
    case ErrorCode::NonCoprimeGenerator: return "NonCoprimeGenerator";
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::PrimeSearchExhausted: return "PrimeSearchExhausted";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::MemberNotInCohort: return "MemberNotInCohort";
    case ErrorCode::MemberPresent: return "MemberPresent";
    case ErrorCode::DuplicateCoin: return "DuplicateCoin";
    case ErrorCode::StaleWitness: return "StaleWitness";
    case ErrorCode::FutureWitness: return "FutureWitness";
    case ErrorCode::UnknownHeight: return "UnknownHeight";
    case ErrorCode::InvalidCommitmentProof: return "InvalidCommitmentProof";
    case ErrorCode::InvalidTransaction: return "InvalidTransaction";
    case ErrorCode::BrokenChainLink: return "BrokenChainLink";
    case ErrorCode::CoinNotInBlock: return "CoinNotInBlock";
    case ErrorCode::CoinAlreadySpentInBlock: return "CoinAlreadySpentInBlock";
    case ErrorCode::CoinSpent: return "CoinSpent";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::DegenerateConfig: return "DegenerateConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index)
    : std::runtime_error(what), code_(code), index_(index)
{
}

} // namespace compactchain
