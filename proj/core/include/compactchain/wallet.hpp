#pragma once

#include <compactchain/chain_state.hpp>

#include <functional>
#include <span>
#include <vector>

namespace compactchain {

struct OwnedCoin {
    Coin coin;
    PrimeRep prime;
    TxWitness witness;
    bool spent = false;
};

/// Witness for a coin created in block k, built from that block's digest and
/// the height k-1 header. Witness height starts at k.
TxWitness generate_witness(const PrimeRep& coin_prime, const BlockDigest& block_k, std::uint64_t k,
                           const BlockHeader& prev_header, const GroupParams& params);
TxWitness generate_witness(const Coin& coin, const Block& block_k, const BlockHeader& prev_header,
                           const GroupParams& params);

/// w^(prod new_output_primes).
MemWitness update_mem_witness(const MemWitness& w, std::span<const PrimeRep> new_output_primes,
                              const GroupParams& params);

/// Moves (d, b) from STXO_C_h to STXO_C_h^(prod new_input_primes). The
/// coefficient is reduced into (-t/2, t/2] in the same exponentiation, so the
/// 16-byte encoding never overflows. Throws CoinSpent if the coin's prime
/// divides the product.
NonMemWitness update_nonmem_witness(const NonMemWitness& u, const PrimeRep& coin_prime, const Commitment& stxo_c_h,
                                    std::span<const PrimeRep> new_input_primes, const GroupParams& params);

class Wallet {
public:
    using Claim = std::function<bool(const Coin&)>;

    /// Tracks the outputs `claim` accepts; by default every output.
    explicit Wallet(Claim claim = {});

    /// Advances every unspent coin by one block, marks coins the block spends,
    /// and picks up newly created outputs the wallet claims.
    /// `prev_header` must be the header every unspent witness currently targets.
    void roll_forward(const Block& block, const BlockHeader& prev_header, const GroupParams& params,
                      unsigned workers = 1);
    void roll_forward(const Block& block, const BlockDigest& digest, const BlockHeader& prev_header,
                      const GroupParams& params, unsigned workers = 1);

    void add(OwnedCoin coin) { coins_.push_back(std::move(coin)); }
    std::vector<OwnedCoin>& coins() { return coins_; }
    const std::vector<OwnedCoin>& coins() const { return coins_; }
    std::size_t unspent_count() const;

    /// Records of coin encoding || witness envelope || spent flag (u8).
    Bytes encode(const GroupParams& params) const;
    static Wallet decode(std::span<const std::uint8_t> data, const BaseResolver& base_for, const GroupParams& params,
                         Claim claim = {});

private:
    Claim claim_;
    std::vector<OwnedCoin> coins_;
};

} // namespace compactchain
