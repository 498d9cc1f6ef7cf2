#pragma once

// Single-UTXO-commitment update in the style of Boneh-Bunz-Fisch batching:
// deletions aggregate membership witnesses pairwise (shamir_trick), then new
// outputs are batch-added. Kept for the update-cost comparison only.

#include <compactchain/accumulator.hpp>

#include <span>
#include <utility>
#include <vector>

namespace compactchain {

struct UtxoCommitment {
    GroupElement element;
    friend bool operator==(const UtxoCommitment&, const UtxoCommitment&) = default;
};

/// w with w^(x1*x2) = A from w1^x1 = A and w2^x2 = A.
GroupElement shamir_trick(const GroupElement& w1, const GroupElement& w2, const BigInt& x1, const BigInt& x2,
                          const Commitment& a, const GroupParams& params);

struct DeletionResult {
    Commitment commitment;
    NiPoeProof proof; // commitment^(prod deleted) = previous
};

/// Sequential left-to-right fold of all witnesses. Each step works with the
/// running product exponent, so total cost is quadratic in the member count.
DeletionResult batch_del(const Commitment& a, std::span<const std::pair<PrimeRep, MemWitness>> members,
                         const GroupParams& params);

struct BonehUpdate {
    UtxoCommitment commitment;
    NiPoeProof deletion_proof;
    NiPoeProof addition_proof;
    Commitment after_deletion;
};

BonehUpdate boneh_update(const UtxoCommitment& a, std::span<const std::pair<PrimeRep, MemWitness>> inputs,
                         std::span<const PrimeRep> output_primes, const GroupParams& params, unsigned workers = 1);

} // namespace compactchain
