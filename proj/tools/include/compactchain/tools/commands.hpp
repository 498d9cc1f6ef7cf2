#pragma once

#include <compactchain/tools/bench.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace compactchain::tools {

struct SetupOptions {
    std::optional<unsigned> bits;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> modulus_file;
    std::optional<std::string> generator;
    unsigned prime_bits = 128;
    std::string domain_tag = "compactchain";
    std::filesystem::path out;
};

struct HarnessOptions {
    std::uint32_t blocks = 10;
    std::uint32_t txs_per_block = 20;
    std::uint32_t inputs_per_tx = 2;
    std::uint32_t outputs_per_tx = 2;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct SimulateOptions {
    std::filesystem::path params;
    std::optional<std::filesystem::path> store;
    HarnessOptions harness;
    std::size_t cache_blocks = 6;
    std::uint32_t double_spends = 0;
    std::optional<std::filesystem::path> attacks_out;
};

struct NetsimRunOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::string> scheme; // compact | boneh | minichain | all (default all)
    std::optional<std::uint32_t> seeds; // consecutive seeds from rng_seed (default 1)
    unsigned workers = 1;
};

/// Each command writes its CSV to `out`, diagnostics to `err`, and throws
/// compactchain::Error on failure.
void cmd_setup(const SetupOptions& o, std::ostream& err);

void cmd_chain_init(const std::filesystem::path& dir, const std::filesystem::path& params, std::size_t cache_blocks,
                    std::ostream& out);
void cmd_chain_append(const std::filesystem::path& dir, const HarnessOptions& o, std::ostream& out);
/// Returns false (after printing the reason) if replay disagrees with the store.
bool cmd_chain_verify(const std::filesystem::path& dir, unsigned workers, std::ostream& out);
void cmd_chain_stats(const std::filesystem::path& dir, std::ostream& out);

/// Returns false if an injected double-spend got through or a surviving
/// witness fails at the tip.
bool cmd_wallet_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err);

void cmd_bench(const std::filesystem::path& params, const BenchOptions& o, std::ostream& out);

void cmd_netsim_run(const NetsimRunOptions& o, std::ostream& out);
void cmd_netsim_tps(const NetsimRunOptions& o, std::uint32_t tx_per_block, bool published, std::ostream& out);

} // namespace compactchain::tools
