#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace compactchain::netsim {

struct NetConfig {
    std::uint32_t node_count = 13000;
    std::uint32_t miner_count = 10;
    std::vector<double> miner_hashrate_weights; // empty: default_hashrate_weights(miner_count)
    double upload_mbps = 50.0;
    std::uint32_t degree = 8;
    std::uint64_t block_bytes = 250'000;
    std::uint64_t per_tx_proof_bytes = 0;
    std::uint32_t tx_count = 1000;
    double validation_seconds = 0.0;
    std::uint64_t rng_seed = 1;

    std::uint64_t payload_bytes() const { return block_bytes + std::uint64_t{tx_count} * per_tx_proof_bytes; }
    /// Throws DegenerateConfig.
    void validate() const;
};

/// Ten-ish miners with geometrically decaying share (ratio 0.7), normalized to 1.
std::vector<double> default_hashrate_weights(std::uint32_t miner_count);

struct Topology {
    std::vector<std::vector<std::uint32_t>> adjacency; // undirected, sorted
    std::vector<std::uint32_t> miners;
    std::vector<double> weights;
    std::uint64_t seed_used = 0;

    std::size_t node_count() const { return adjacency.size(); }
    bool connected() const;
};

/// Each node picks `degree` distinct outbound peers uniformly; links are
/// bidirectional. Seeds derived from rng_seed are retried until connected.
Topology build_network(const NetConfig& config);

/// A linear chain 0 - 1 - ... - n-1, for closed-form checks.
Topology line_topology(std::uint32_t nodes);

struct PropagationResult {
    std::vector<double> arrival_seconds; // time each node holds a validated block
    std::uint32_t origin = 0;
    double consensus_latency = 0.0;
    double full_coverage_latency = 0.0;
};

/// Validate-then-relay, uploads serialized per sender; a peer already being
/// served or holding the block is skipped.
PropagationResult simulate_propagation(const Topology& topology, const NetConfig& config);
PropagationResult simulate_propagation(const Topology& topology, const NetConfig& config, std::uint32_t origin);

/// Smallest t with at least ceil(n/2) arrivals <= t.
double consensus_latency(std::span<const double> arrivals);
double consensus_latency(const PropagationResult& result);

/// tx_per_block over the slowest of the three stages.
double max_tps(double tx_verif_latency, double commit_update_latency, double consensus_latency,
               std::uint32_t tx_per_block);

/// Byte and latency profile of one protocol in the propagation comparison.
struct SchemeProfile {
    std::string name;
    std::uint64_t per_tx_proof_bytes;
    double validation_seconds;     // 1000-tx block verification
    double tx_verif_latency;       // 500-tx verification
    double commit_update_latency;  // 500-tx commitment update
    double consensus_latency;      // reported propagation to half the network
};

/// boneh, minichain, compact with the published proof sizes and latencies.
const std::vector<SchemeProfile>& published_profiles();
const SchemeProfile& profile(std::string_view name);

NetConfig apply_profile(NetConfig config, const SchemeProfile& profile);

/// Flat key=value text; '#' starts a comment. Unknown keys raise ParseError.
/// Non-NetConfig keys (scheme, seeds, ...) are returned in `extras`.
NetConfig parse_config(std::string_view text, std::map<std::string, std::string>* extras = nullptr);
std::string format_config(const NetConfig& config);

} // namespace compactchain::netsim
