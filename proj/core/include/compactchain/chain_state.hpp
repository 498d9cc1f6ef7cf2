#pragma once

#include <compactchain/accumulator.hpp>
#include <compactchain/bytes.hpp>
#include <compactchain/rsa_group.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <vector>

namespace compactchain {

/// An output. Coins are abstract identifiers; there are no scripts.
struct Coin {
    Hash256 txid{};
    std::uint32_t index = 0;
    std::uint64_t value = 0;
    Hash256 owner_tag{};

    static constexpr std::size_t kEncodedBytes = 32 + 4 + 8 + 32;

    Bytes encode() const;
    static Coin decode(ByteReader& in);

    friend auto operator<=>(const Coin&, const Coin&) = default;
};

/// Prime representative of a coin created at `creation_height`. The height is
/// part of the hashed preimage, so a spender cannot claim a later creation
/// height than the real one (the membership proof would be for a different prime).
PrimeRep coin_prime(const Coin& coin, std::uint64_t creation_height, const GroupParams& params);

/// Per-input proof carried by a transaction: existence in TXO_C_h, non-spend
/// against STXO_C_h relative to STXO_C_{k-1}.
struct TxWitness {
    MemWitness mem{GroupElement::one()};
    NonMemWitness nonmem{GroupElement::one(), BigInt(0), GroupElement::one()};
    std::uint64_t creation_height = 0; // k
    std::uint64_t witness_height = 0;  // h

    friend bool operator==(const TxWitness&, const TxWitness&) = default;
};

/// Resolves STXO_C_{k-1} (the non-membership base) for a creation height k.
using BaseResolver = std::function<GroupElement(std::uint64_t creation_height)>;

/// k || h || mem || d || b. 800 bytes at a 3072-bit modulus.
Bytes encode_witness_envelope(const TxWitness& w, const GroupParams& params);
TxWitness decode_witness_envelope(std::span<const std::uint8_t> data, const BaseResolver& base_for,
                                  const GroupParams& params);
std::size_t witness_envelope_bytes(const GroupParams& params);
/// Existence proof (membership witness) bytes.
std::size_t existence_proof_bytes(const GroupParams& params);
/// Unspent proof (d and the 16-byte coefficient) bytes.
std::size_t unspent_proof_bytes(const GroupParams& params);

struct Transaction {
    std::vector<Coin> inputs;
    std::vector<Coin> outputs;
    std::vector<TxWitness> witnesses; // aligned with inputs

    bool is_coinbase() const { return inputs.empty(); }
    /// Throws InvalidArgument/DuplicateCoin on malformed shape.
    void check_structure() const;
    /// Inputs and outputs only; witnesses are not part of the id.
    Bytes encode_body() const;
    Hash256 id() const;
};

struct BlockHeader {
    std::uint64_t height = 0;
    Hash256 prev_hash{};
    Hash256 tx_root{};
    Commitment txo_c{GroupElement::one()};
    Commitment stxo_c{GroupElement::one()};
    NiPoeProof pi_txo{GroupElement::one()};
    NiPoeProof pi_stxo{GroupElement::one()};
    std::uint64_t timestamp = 0;

    Bytes encode(const GroupParams& params) const;
    static BlockHeader decode(std::span<const std::uint8_t> data, const GroupParams& params);
    Hash256 hash(const GroupParams& params) const;

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

/// 1616 bytes at a 3072-bit modulus.
std::size_t header_bytes(const GroupParams& params);

struct Block {
    BlockHeader header;
    std::vector<Transaction> txs;
};

Bytes encode_block(const Block& block, const GroupParams& params);
Block decode_block(ByteReader& in, const BaseResolver& base_for, const GroupParams& params);

Hash256 merkle_root(std::span<const Hash256> leaves);
Hash256 tx_root(std::span<const Transaction> txs);

/// Flat prime lists a block contributes: the feed wallets need to update witnesses.
struct BlockDigest {
    std::vector<PrimeRep> output_primes;
    std::vector<PrimeRep> input_primes;
};

/// Throws DuplicateCoin when a prime repeats among the outputs or among the inputs.
BlockDigest digest_block(std::span<const Transaction> txs, std::uint64_t height, const GroupParams& params,
                         unsigned workers = 1);

/// Spent primes of the latest `capacity` blocks, keyed by height.
class StxoCache {
public:
    explicit StxoCache(std::size_t capacity);

    /// Adds the bucket for `height` and evicts every bucket at or below height - capacity.
    void insert(std::uint64_t height, std::span<const PrimeRep> spent);
    /// True if `prime` was spent at some cached height strictly above `height`.
    bool spent_after(const PrimeRep& prime, std::uint64_t height) const;

    std::size_t capacity() const { return capacity_; }
    std::size_t bucket_count() const { return window_.size(); }
    std::size_t prime_count() const;
    const std::map<std::uint64_t, std::set<PrimeRep>>& window() const { return window_; }

    /// Per bucket: u64 height || u32 count || count x 16-byte primes.
    Bytes encode() const;
    static StxoCache decode(std::span<const std::uint8_t> data, std::size_t capacity);

    friend bool operator==(const StxoCache&, const StxoCache&) = default;

private:
    std::size_t capacity_;
    std::map<std::uint64_t, std::set<PrimeRep>> window_;
};

/// Append-only header chain with contiguous heights and verified hash links.
class HeaderStore {
public:
    void append(const BlockHeader& header, const GroupParams& params);

    const BlockHeader& at(std::uint64_t height) const;
    const BlockHeader& tip() const;
    std::uint64_t tip_height() const;
    const Hash256& hash_at(std::uint64_t height) const;
    std::size_t size() const { return headers_.size(); }
    bool empty() const { return headers_.empty(); }

    Bytes encode(const GroupParams& params) const;
    static HeaderStore decode(std::span<const std::uint8_t> data, const GroupParams& params);

private:
    std::vector<BlockHeader> headers_;
    std::vector<Hash256> hashes_;
};

/// Height-0 header (both commitments g, trivial proofs) and an empty cache.
std::pair<BlockHeader, StxoCache> genesis(const GroupParams& params, std::size_t cache_blocks);

struct CommitmentUpdate {
    Commitment txo_c;
    Commitment stxo_c;
    NiPoeProof pi_txo;
    NiPoeProof pi_stxo;
};

/// Miner side: raise both commitments by the block's output/input products and prove it.
CommitmentUpdate update_commitments(const BlockHeader& prev, std::span<const Transaction> txs,
                                    const GroupParams& params, unsigned workers = 1);

/// Validator side: checks both proofs without the full-size exponentiation.
bool verify_commitments(const BlockHeader& prev, std::span<const Transaction> txs, const BlockHeader& candidate,
                        const GroupParams& params, unsigned workers = 1);
bool verify_commitments(const BlockHeader& prev, const BlockDigest& digest, const BlockHeader& candidate,
                        const GroupParams& params, unsigned workers = 1);

/// Checks every input's witness against the headers at its witness height and
/// the STXO cache. Throws StaleWitness / FutureWitness / UnknownHeight for
/// heights outside the window; returns false for any failed proof.
bool validate_transaction(const Transaction& tx, std::uint64_t tip, const HeaderStore& headers,
                          const StxoCache& cache, const GroupParams& params);

/// Everything a stateless validator keeps: headers and the STXO cache.
class ChainState {
public:
    ChainState(GroupParams params, std::size_t cache_blocks, unsigned workers = 1);
    ChainState(GroupParams params, HeaderStore headers, StxoCache cache, unsigned workers = 1);

    /// Validates and appends. Bodies are dropped afterwards.
    void apply_block(const Block& block);

    /// Re-validates the transactions against the current tip and seals a block on top of it.
    Block assemble_block(std::vector<Transaction> txs, std::uint64_t timestamp) const;
    /// Seals without validating the transactions (what a dishonest miner would publish).
    Block seal_block(std::vector<Transaction> txs, std::uint64_t timestamp) const;

    const GroupParams& params() const { return params_; }
    const HeaderStore& headers() const { return headers_; }
    const StxoCache& cache() const { return cache_; }
    std::uint64_t tip() const { return headers_.tip_height(); }
    const BlockHeader& tip_header() const { return headers_.tip(); }
    unsigned workers() const { return workers_; }

    /// STXO_C_{k-1}, with STXO_C_{-1} := g.
    GroupElement nonmem_base(std::uint64_t creation_height) const;
    BaseResolver base_resolver() const;

private:
    GroupParams params_;
    HeaderStore headers_;
    StxoCache cache_;
    unsigned workers_;
};

} // namespace compactchain
