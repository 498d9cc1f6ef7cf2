#include <compactchain/error.hpp>
#include <compactchain/netsim.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace compactchain::netsim {
namespace {

[[noreturn]] void degenerate(const std::string& why) { throw Error(ErrorCode::DegenerateConfig, why); }

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value)
{
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw Error(ErrorCode::ParseError, "bad value for " + key + ": '" + value + "'");
    return out;
}

std::vector<double> parse_weights(const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_number<double>("miner_hashrate_weights", trim(item)));
    return out;
}

} // namespace

void NetConfig::validate() const
{
    if (node_count == 0)
        degenerate("node_count must be >= 1");
    if (miner_count == 0 || miner_count > node_count)
        degenerate("miner_count must be in [1, node_count]");
    if (node_count > 1 && (degree == 0 || degree >= node_count))
        degenerate("degree must be in [1, node_count)");
    if (!(upload_mbps > 0.0))
        degenerate("upload_mbps must be positive");
    if (validation_seconds < 0.0)
        degenerate("validation_seconds must be non-negative");
    if (!miner_hashrate_weights.empty()) {
        if (miner_hashrate_weights.size() != miner_count)
            degenerate("need one hashrate weight per miner");
        double sum = 0.0;
        for (double w : miner_hashrate_weights) {
            if (w < 0.0)
                degenerate("hashrate weights must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            degenerate("hashrate weights must sum to 1");
    }
}

std::vector<double> default_hashrate_weights(std::uint32_t miner_count)
{
    std::vector<double> w(miner_count);
    double share = 1.0;
    for (auto& x : w) {
        x = share;
        share *= 0.7;
    }
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w)
        x /= sum;
    return w;
}

bool Topology::connected() const
{
    if (adjacency.empty())
        return true;
    std::vector<char> seen(adjacency.size(), 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto u : adjacency[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
    }
    return count == adjacency.size();
}

Topology build_network(const NetConfig& config)
{
    config.validate();
    const std::uint32_t n = config.node_count;
    Topology topo;
    topo.weights = config.miner_hashrate_weights.empty() ? default_hashrate_weights(config.miner_count)
                                                         : config.miner_hashrate_weights;
    topo.miners.resize(config.miner_count);
    std::iota(topo.miners.begin(), topo.miners.end(), 0u);

    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        const std::uint64_t seed = config.rng_seed + attempt;
        std::mt19937_64 rng(seed);
        std::vector<std::vector<std::uint32_t>> adj(n);
        if (n > 1) {
            std::uniform_int_distribution<std::uint32_t> pick(0, n - 2);
            std::vector<std::uint32_t> chosen;
            for (std::uint32_t v = 0; v < n; ++v) {
                chosen.clear();
                while (chosen.size() < config.degree) {
                    std::uint32_t u = pick(rng);
                    if (u >= v)
                        ++u; // skip self
                    if (std::find(chosen.begin(), chosen.end(), u) == chosen.end())
                        chosen.push_back(u);
                }
                for (auto u : chosen) {
                    adj[v].push_back(u);
                    adj[u].push_back(v);
                }
            }
            for (auto& list : adj) {
                std::sort(list.begin(), list.end());
                list.erase(std::unique(list.begin(), list.end()), list.end());
            }
        }
        topo.adjacency = std::move(adj);
        topo.seed_used = seed;
        if (topo.connected())
            return topo;
    }
    degenerate("could not build a connected network in 64 attempts");
}

Topology line_topology(std::uint32_t nodes)
{
    if (nodes == 0)
        degenerate("line needs at least one node");
    Topology topo;
    topo.adjacency.resize(nodes);
    for (std::uint32_t i = 0; i + 1 < nodes; ++i) {
        topo.adjacency[i].push_back(i + 1);
        topo.adjacency[i + 1].push_back(i);
    }
    topo.miners = {0};
    topo.weights = {1.0};
    return topo;
}

PropagationResult simulate_propagation(const Topology& topology, const NetConfig& config)
{
    std::mt19937_64 rng(config.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    std::discrete_distribution<std::size_t> pick(topology.weights.begin(), topology.weights.end());
    return simulate_propagation(topology, config, topology.miners.at(pick(rng)));
}

PropagationResult simulate_propagation(const Topology& topology, const NetConfig& config, std::uint32_t origin)
{
    const std::size_t n = topology.node_count();
    if (origin >= n)
        degenerate("origin outside the topology");
    const double transfer = static_cast<double>(config.payload_bytes()) * 8.0 / (config.upload_mbps * 1e6);
    const double inf = std::numeric_limits<double>::infinity();

    PropagationResult res;
    res.origin = origin;
    res.arrival_seconds.assign(n, inf);
    std::vector<char> claimed(n, 0);
    std::vector<std::size_t> cursor(n, 0);

    // (time the sender's uplink is free, sender)
    using Event = std::pair<double, std::uint32_t>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    res.arrival_seconds[origin] = 0.0;
    claimed[origin] = 1;
    queue.emplace(0.0, origin);

    while (!queue.empty()) {
        auto [t, sender] = queue.top();
        queue.pop();
        const auto& peers = topology.adjacency[sender];
        auto& c = cursor[sender];
        while (c < peers.size() && claimed[peers[c]])
            ++c;
        if (c == peers.size())
            continue;
        const std::uint32_t peer = peers[c++];
        claimed[peer] = 1;
        const double done = t + transfer;
        res.arrival_seconds[peer] = done + config.validation_seconds;
        queue.emplace(res.arrival_seconds[peer], peer);
        queue.emplace(done, sender);
    }

    res.consensus_latency = consensus_latency(res.arrival_seconds);
    res.full_coverage_latency = *std::max_element(res.arrival_seconds.begin(), res.arrival_seconds.end());
    return res;
}

double consensus_latency(std::span<const double> arrivals)
{
    if (arrivals.empty())
        throw Error(ErrorCode::InvalidArgument, "no arrivals");
    std::vector<double> sorted(arrivals.begin(), arrivals.end());
    const std::size_t need = (sorted.size() + 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(need - 1), sorted.end());
    return sorted[need - 1];
}

double consensus_latency(const PropagationResult& result) { return consensus_latency(result.arrival_seconds); }

double max_tps(double tx_verif_latency, double commit_update_latency, double consensus_latency,
               std::uint32_t tx_per_block)
{
    if (!(tx_verif_latency > 0.0) || !(commit_update_latency > 0.0) || !(consensus_latency > 0.0))
        throw Error(ErrorCode::InvalidArgument, "latencies must be positive");
    return tx_per_block / std::max({tx_verif_latency, commit_update_latency, consensus_latency});
}

const std::vector<SchemeProfile>& published_profiles()
{
    // Proof bytes per single-input transaction and verification/update latencies
    // as reported for a 3072-bit modulus.
    static const std::vector<SchemeProfile> profiles = {
        {"boneh", 384, 0.193, 0.193, 235.62, 2.08},
        {"compact", 384 + 400, 0.303, 0.303, 0.99, 3.03},
        {"minichain", 960 + 400, 0.306, 0.306, 0.97, 3.57},
    };
    return profiles;
}

const SchemeProfile& profile(std::string_view name)
{
    for (const auto& p : published_profiles())
        if (p.name == name)
            return p;
    throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

NetConfig apply_profile(NetConfig config, const SchemeProfile& profile)
{
    config.per_tx_proof_bytes = profile.per_tx_proof_bytes;
    config.validation_seconds = profile.validation_seconds;
    return config;
}

NetConfig parse_config(std::string_view text, std::map<std::string, std::string>* extras)
{
    NetConfig c;
    std::stringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key == "node_count")
            c.node_count = parse_number<std::uint32_t>(key, value);
        else if (key == "miner_count")
            c.miner_count = parse_number<std::uint32_t>(key, value);
        else if (key == "miner_hashrate_weights")
            c.miner_hashrate_weights = parse_weights(value);
        else if (key == "upload_mbps")
            c.upload_mbps = parse_number<double>(key, value);
        else if (key == "degree")
            c.degree = parse_number<std::uint32_t>(key, value);
        else if (key == "block_bytes")
            c.block_bytes = parse_number<std::uint64_t>(key, value);
        else if (key == "per_tx_proof_bytes")
            c.per_tx_proof_bytes = parse_number<std::uint64_t>(key, value);
        else if (key == "tx_count")
            c.tx_count = parse_number<std::uint32_t>(key, value);
        else if (key == "validation_seconds")
            c.validation_seconds = parse_number<double>(key, value);
        else if (key == "rng_seed")
            c.rng_seed = parse_number<std::uint64_t>(key, value);
        else if (extras)
            (*extras)[key] = value;
        else
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
    }
    return c;
}

std::string format_config(const NetConfig& c)
{
    std::ostringstream out;
    out.precision(17);
    out << "node_count=" << c.node_count << '\n'
        << "miner_count=" << c.miner_count << '\n';
    if (!c.miner_hashrate_weights.empty()) {
        out << "miner_hashrate_weights=";
        for (std::size_t i = 0; i < c.miner_hashrate_weights.size(); ++i)
            out << (i ? "," : "") << c.miner_hashrate_weights[i];
        out << '\n';
    }
    out << "upload_mbps=" << c.upload_mbps << '\n'
        << "degree=" << c.degree << '\n'
        << "block_bytes=" << c.block_bytes << '\n'
        << "per_tx_proof_bytes=" << c.per_tx_proof_bytes << '\n'
        << "tx_count=" << c.tx_count << '\n'
        << "validation_seconds=" << c.validation_seconds << '\n'
        << "rng_seed=" << c.rng_seed << '\n';
    return out.str();
}

} // namespace compactchain::netsim
