#pragma once

#include <compactchain/chain_state.hpp>
#include <compactchain/wallet.hpp>

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace compactchain {

struct WorkloadConfig {
    std::uint32_t txs_per_block = 20;
    std::uint32_t inputs_per_tx = 2;
    std::uint32_t outputs_per_tx = 2;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::uint64_t block_interval = 600;
    std::uint64_t coinbase_value = 50'000;
};

struct BlockStats {
    std::uint64_t height = 0;
    double update_seconds = 0.0;         // miner: commitment update + proofs
    double verify_seconds = 0.0;         // validator: apply_block
    double witness_update_seconds = 0.0; // wallet roll-forward
    std::uint64_t block_bytes = 0;       // header + transaction bodies
    std::uint64_t proof_bytes = 0;       // existence + unspent proofs of all inputs
    std::uint32_t txs = 0;
    std::uint32_t inputs = 0;
    std::uint32_t outputs = 0;
};

enum class AttackKind {
    /// Re-spend a coin spent inside the cache window using its pre-spend witness.
    InWindowReplay,
    /// Re-spend a coin with a witness older than tip - M.
    StaleWitness,
    /// Claim a creation height after the real spend to dodge the STXO check.
    ForgedCreationHeight,
};

std::string_view to_string(AttackKind kind);

struct AttackOutcome {
    AttackKind kind;
    bool rejected_by_validation = false; // validate_transaction said no (false or error)
    bool rejected_in_block = false;      // apply_block refused a block carrying it
    std::string reason;
};

/// Synthetic chain driver: one wallet owns every coin, each block spends coins
/// drawn uniformly from the unspent pool and tops up with coinbase
/// transactions when the pool runs dry.
class ChainHarness {
public:
    ChainHarness(GroupParams params, std::size_t cache_blocks, WorkloadConfig config);
    ChainHarness(ChainState chain, Wallet wallet, WorkloadConfig config);

    /// Mines, validates and applies one block, then rolls the wallet forward.
    BlockStats step();

    /// Builds a double-spend of the requested kind against the current tip.
    /// nullopt if no suitable spent coin exists yet.
    std::optional<AttackOutcome> attempt(AttackKind kind);

    std::vector<Transaction> make_transactions();

    /// Called with every accepted block (before its body is dropped).
    void on_block(std::function<void(const Block&)> hook) { hook_ = std::move(hook); }

    ChainState& chain() { return chain_; }
    const ChainState& chain() const { return chain_; }
    Wallet& wallet() { return wallet_; }
    const Wallet& wallet() const { return wallet_; }
    const WorkloadConfig& config() const { return config_; }

private:
    std::mt19937_64 block_rng(std::uint64_t height) const;
    Coin new_coin(std::mt19937_64& rng, std::uint64_t height, std::size_t tx_index, std::uint32_t index,
                  std::uint64_t value) const;

    ChainState chain_;
    Wallet wallet_;
    WorkloadConfig config_;
    std::function<void(const Block&)> hook_;
};

} // namespace compactchain
