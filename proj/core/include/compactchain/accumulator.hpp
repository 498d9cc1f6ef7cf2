#pragma once

#include <compactchain/rsa_group.hpp>

#include <span>
#include <vector>

namespace compactchain {

/// Accumulator value A = base^(prod of accumulated primes).
struct Commitment {
    GroupElement element;
    friend bool operator==(const Commitment&, const Commitment&) = default;
};

/// w with w^t = A.
struct MemWitness {
    GroupElement element;
    friend bool operator==(const MemWitness&, const MemWitness&) = default;
};

/// (d, b) with d^t * A^b = base. The base travels with the witness because
/// protocol witnesses are relative to an earlier commitment, not to g.
struct NonMemWitness {
    GroupElement d;
    BigInt b;
    GroupElement base;
    friend bool operator==(const NonMemWitness&, const NonMemWitness&) = default;
};

/// Q with Q^l * u^(x mod l) = w.
struct NiPoeProof {
    GroupElement q;
    friend bool operator==(const NiPoeProof&, const NiPoeProof&) = default;
};

/// Source of the Fiat-Shamir challenge prime in NI-PoE.
class PrimeMapper {
public:
    virtual ~PrimeMapper() = default;
    virtual BigInt challenge(std::span<const std::uint8_t> transcript) const = 0;
};

class HashPrimeMapper final : public PrimeMapper {
public:
    explicit HashPrimeMapper(const GroupParams& params) : params_(params) {}
    BigInt challenge(std::span<const std::uint8_t> transcript) const override;

private:
    const GroupParams& params_;
};

/// Returns the same prime for every transcript. Test vectors only.
class FixedPrimeMapper final : public PrimeMapper {
public:
    explicit FixedPrimeMapper(BigInt prime) : prime_(std::move(prime)) {}
    BigInt challenge(std::span<const std::uint8_t>) const override { return prime_; }

private:
    BigInt prime_;
};

Commitment batch_add(const Commitment& a, std::span<const PrimeRep> new_primes, const GroupParams& params,
                     unsigned workers = 1);

MemWitness create_mem_witness(const Commitment& base, std::span<const PrimeRep> cohort, const PrimeRep& member,
                              const GroupParams& params);
bool verify_mem_witness(const MemWitness& w, const PrimeRep& member, const Commitment& a, const GroupParams& params);

/// Membership witnesses for every element of `cohort` at once (root-factor
/// recursion, O(n log n) exponent bits instead of O(n^2)).
std::vector<MemWitness> create_all_mem_witnesses(const Commitment& base, std::span<const PrimeRep> cohort,
                                                 const GroupParams& params);

NonMemWitness create_nonmem_witness(const Commitment& base, std::span<const PrimeRep> cohort, const PrimeRep& outsider,
                                    const GroupParams& params);
bool verify_nonmem_witness(const NonMemWitness& u, const PrimeRep& outsider, const Commitment& a,
                           const GroupParams& params);

/// Rewrites b = q*t + r with r in (-t/2, t/2] and folds A^q into d.
NonMemWitness normalize_nonmem_witness(const NonMemWitness& u, const PrimeRep& outsider, const Commitment& a,
                                       const GroupParams& params);

/// Length-prefixed big-endian encoding of (x, u, w) fed to the challenge mapper.
Bytes nipoe_transcript(const BigInt& x, const GroupElement& u, const GroupElement& w, const GroupParams& params);

NiPoeProof prove_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const GroupParams& params,
                        const PrimeMapper& mapper);
NiPoeProof prove_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const GroupParams& params);

bool verify_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const NiPoeProof& proof,
                   const GroupParams& params, const PrimeMapper& mapper);
bool verify_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const NiPoeProof& proof,
                   const GroupParams& params);

inline constexpr std::size_t kSignedCoefficientBytes = 16;

Bytes encode_mem_witness(const MemWitness& w, const GroupParams& params);
MemWitness decode_mem_witness(std::span<const std::uint8_t> data, const GroupParams& params);
/// d || b; the base is implied by context and never serialized.
Bytes encode_nonmem_witness(const NonMemWitness& u, const GroupParams& params);
NonMemWitness decode_nonmem_witness(std::span<const std::uint8_t> data, const GroupElement& base,
                                    const GroupParams& params);
Bytes encode_proof(const NiPoeProof& proof, const GroupParams& params);

} // namespace compactchain
