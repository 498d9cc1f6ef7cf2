#pragma once

#include <compactchain/chain_state.hpp>
#include <compactchain/wallet.hpp>

#include <filesystem>
#include <string>

namespace compactchain {

/// On-disk chain directory:
///   params.ccg      group parameters (CCG1)
///   chain.cfg       cache_blocks=M
///   headers.bin     append-only fixed-width header records
///   stxo_cache.bin  height-tagged prime lists of the cache window
///   blocks.bin      block archive used only for replay (validators never read it)
///   tip             hex hash of the last header
///   wallet.bin      simulated wallet population
class ChainStore {
public:
    static ChainStore init(const std::filesystem::path& dir, const GroupParams& params, std::size_t cache_blocks);
    static ChainStore open(const std::filesystem::path& dir);

    const GroupParams& params() const { return params_; }
    std::size_t cache_blocks() const { return cache_blocks_; }
    const std::filesystem::path& dir() const { return dir_; }

    ChainState load_chain(unsigned workers = 1) const;
    Wallet load_wallet(const ChainState& chain) const;

    /// Persists a block the chain has just accepted.
    void append(const Block& block, const ChainState& after) const;
    void save_wallet(const Wallet& wallet) const;

    struct VerifyReport {
        bool ok = false;
        std::uint64_t height = 0; // last height that replayed cleanly
        std::string error;
    };
    /// Replays the archive from genesis and checks every stored header byte
    /// and the tip anchor against the replay.
    VerifyReport verify(unsigned workers = 1) const;

private:
    ChainStore(std::filesystem::path dir, GroupParams params, std::size_t cache_blocks);

    std::filesystem::path dir_;
    GroupParams params_;
    std::size_t cache_blocks_;
};

} // namespace compactchain
