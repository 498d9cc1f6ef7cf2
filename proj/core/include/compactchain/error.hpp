#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace compactchain {

enum class ErrorCode {
    InvalidArgument,
    ModulusTooSmall,
    NonCoprimeGenerator,
    InvalidElement,
    NonInvertible,
    PrimeSearchExhausted,
    NotCoprime,
    MemberNotInCohort,
    MemberPresent,
    DuplicateCoin,
    StaleWitness,
    FutureWitness,
    UnknownHeight,
    InvalidCommitmentProof,
    InvalidTransaction,
    BrokenChainLink,
    CoinNotInBlock,
    CoinAlreadySpentInBlock,
    CoinSpent,
    WitnessInvalid,
    DegenerateConfig,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `index()` carries the offending
/// position (transaction index in a block, member index in a batch) when
/// one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

} // namespace compactchain
