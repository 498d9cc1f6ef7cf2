#include <compactchain/error.hpp>
#include <compactchain/netsim.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <queue>

using namespace compactchain;
using namespace compactchain::netsim;

namespace {

NetConfig small(std::uint32_t nodes, std::uint32_t degree, std::uint64_t seed)
{
    NetConfig c;
    c.node_count = nodes;
    c.miner_count = std::min<std::uint32_t>(nodes, 3);
    c.degree = degree;
    c.rng_seed = seed;
    return c;
}

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(Topology, SingleNode)
{
    NetConfig c = small(1, 8, 1);
    c.miner_count = 1;
    const Topology t = build_network(c);
    ASSERT_EQ(t.node_count(), 1u);
    EXPECT_TRUE(t.adjacency[0].empty());
    const auto r = simulate_propagation(t, c);
    EXPECT_EQ(r.consensus_latency, 0.0);
    EXPECT_EQ(r.full_coverage_latency, 0.0);
}

TEST(Topology, SeededDeterminism)
{
    const NetConfig c = small(10, 3, 42);
    EXPECT_EQ(build_network(c).adjacency, build_network(c).adjacency);
    EXPECT_NE(build_network(c).adjacency, build_network(small(10, 3, 43)).adjacency);
}

TEST(Topology, FullSizeNetworkIsConnected)
{
    NetConfig c; // defaults: 13000 nodes, degree 8
    const Topology t = build_network(c);
    ASSERT_EQ(t.node_count(), 13000u);
    // Independent BFS.
    std::vector<int> dist(t.node_count(), -1);
    std::queue<std::uint32_t> q;
    dist[0] = 0;
    q.push(0);
    std::size_t reached = 1;
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto u : t.adjacency[v]) {
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                ++reached;
                q.push(u);
            }
        }
    }
    EXPECT_EQ(reached, 13000u);
    for (std::size_t v = 0; v < t.node_count(); ++v) {
        ASSERT_GE(t.adjacency[v].size(), 8u);
        for (auto u : t.adjacency[v])
            ASSERT_NE(u, v);
    }
    EXPECT_EQ(t.miners.size(), 10u);
}

TEST(Config, Validation)
{
    NetConfig c;
    c.node_count = 0;
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::DegenerateConfig);
    c = small(5, 5, 1);
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::DegenerateConfig);
    c = small(5, 2, 1);
    c.miner_hashrate_weights = {0.5, 0.5, 0.1};
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::DegenerateConfig);
    c.miner_hashrate_weights = {0.5, 0.6, -0.1};
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::DegenerateConfig);
    c.miner_hashrate_weights = {0.25, 0.25, 0.5};
    EXPECT_NO_THROW(c.validate());
    c.upload_mbps = 0;
    EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::DegenerateConfig);
}

TEST(Config, DefaultWeightsSumToOne)
{
    const auto w = default_hashrate_weights(10);
    ASSERT_EQ(w.size(), 10u);
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += w[i];
        if (i)
            EXPECT_LT(w[i], w[i - 1]);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Config, ParseAndFormat)
{
    std::map<std::string, std::string> extras;
    const NetConfig c = parse_config("# comment\nnode_count = 100\ndegree=4\nupload_mbps=25.5\nscheme=compact\n"
                                     "miner_count=2\nminer_hashrate_weights=0.75,0.25\n",
                                     &extras);
    EXPECT_EQ(c.node_count, 100u);
    EXPECT_EQ(c.degree, 4u);
    EXPECT_DOUBLE_EQ(c.upload_mbps, 25.5);
    EXPECT_EQ(extras.at("scheme"), "compact");
    const NetConfig back = parse_config(format_config(c));
    EXPECT_EQ(back.node_count, c.node_count);
    EXPECT_EQ(back.miner_hashrate_weights, c.miner_hashrate_weights);
    EXPECT_DOUBLE_EQ(back.upload_mbps, c.upload_mbps);
    EXPECT_EQ(code_of([] { parse_config("bogus=1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_config("node_count=abc\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_config("node_count\n"); }), ErrorCode::ParseError);
}

TEST(Propagation, TwoNodeClosedForm)
{
    NetConfig c = small(2, 1, 1);
    c.miner_count = 1;
    c.block_bytes = 250000;
    c.tx_count = 0;
    c.validation_seconds = 0.3;
    const auto r = simulate_propagation(build_network(c), c);
    EXPECT_EQ(r.origin, 0u);
    EXPECT_EQ(r.arrival_seconds[0], 0.0);
    EXPECT_NEAR(r.arrival_seconds[1], 0.25 * 8 / 50 + 0.3, 1e-12);
    EXPECT_NEAR(r.consensus_latency, 0.0, 1e-12); // 1 of 2 nodes already holds it
    EXPECT_NEAR(r.full_coverage_latency, 0.34, 1e-12);
}

TEST(Propagation, LineTopologyScalesWithPayload)
{
    NetConfig c = small(9, 1, 1);
    c.block_bytes = 125000;
    c.tx_count = 0;
    c.validation_seconds = 0.0;
    const Topology line = line_topology(9);
    const auto r1 = simulate_propagation(line, c, 0);
    const double transfer = 125000.0 * 8 / 50e6;
    for (std::uint32_t k = 0; k < 9; ++k)
        EXPECT_NEAR(r1.arrival_seconds[k], k * transfer, 1e-12);
    c.block_bytes *= 2;
    const auto r2 = simulate_propagation(line, c, 0);
    EXPECT_NEAR(r2.full_coverage_latency, 2 * r1.full_coverage_latency, 1e-12);
    c.validation_seconds = 0.1;
    const auto r3 = simulate_propagation(line, c, 0);
    EXPECT_NEAR(r3.full_coverage_latency, 8 * (2 * transfer + 0.1), 1e-12);
}

TEST(Propagation, SerializedUploads)
{
    // Star: origin 0 with three leaves; the i-th leaf waits for i transfers.
    Topology star;
    star.adjacency = {{1, 2, 3}, {0}, {0}, {0}};
    star.miners = {0};
    star.weights = {1.0};
    NetConfig c = small(4, 1, 1);
    c.block_bytes = 50000;
    c.tx_count = 0;
    c.validation_seconds = 0.05;
    const auto r = simulate_propagation(star, c, 0);
    const double t = 50000.0 * 8 / 50e6;
    EXPECT_NEAR(r.arrival_seconds[1], t + 0.05, 1e-12);
    EXPECT_NEAR(r.arrival_seconds[2], 2 * t + 0.05, 1e-12);
    EXPECT_NEAR(r.arrival_seconds[3], 3 * t + 0.05, 1e-12);
}

TEST(Propagation, DeterminismMonotonicityAndTreeOrder)
{
    NetConfig c = small(2000, 8, 5);
    c.validation_seconds = 0.3;
    c.per_tx_proof_bytes = 400;
    const Topology t = build_network(c);
    const auto a = simulate_propagation(t, c);
    const auto b = simulate_propagation(t, c);
    EXPECT_EQ(a.arrival_seconds, b.arrival_seconds);
    EXPECT_LE(a.consensus_latency, a.full_coverage_latency);

    // Every non-origin node heard from a neighbour that already held the block.
    const double hop = static_cast<double>(c.payload_bytes()) * 8 / 50e6 + c.validation_seconds;
    for (std::uint32_t v = 0; v < t.node_count(); ++v) {
        if (v == a.origin)
            continue;
        bool fed = false;
        for (auto u : t.adjacency[v])
            fed = fed || a.arrival_seconds[u] <= a.arrival_seconds[v] - hop + 1e-9;
        ASSERT_TRUE(fed) << v;
    }

    double prev = 0;
    for (std::uint64_t bytes : {0u, 200u, 400u, 800u, 1600u}) {
        c.per_tx_proof_bytes = bytes;
        const double lat = simulate_propagation(t, c).consensus_latency;
        EXPECT_GE(lat, prev);
        prev = lat;
    }
}

TEST(Latency, ConsensusDefinition)
{
    const std::vector<double> four{0, 1, 2, 3};
    EXPECT_EQ(consensus_latency(four), 1.0);
    const std::vector<double> five{4, 0, 3, 1, 2};
    EXPECT_EQ(consensus_latency(five), 2.0);
    const std::vector<double> zeros(7, 0.0);
    EXPECT_EQ(consensus_latency(zeros), 0.0);
    EXPECT_EQ(code_of([] { consensus_latency(std::span<const double>{}); }), ErrorCode::InvalidArgument);
}

TEST(Tps, PublishedColumns)
{
    EXPECT_NEAR(max_tps(0.303, 0.99, 3.03, 500), 165.0, 0.5);
    EXPECT_NEAR(max_tps(0.193, 235.62, 2.08, 500), 2.12, 0.5);
    EXPECT_NEAR(max_tps(0.306, 0.97, 3.57, 500), 140.06, 0.5);
    EXPECT_EQ(max_tps(1.0, 1.0, 1.0, 500), 500.0);
    EXPECT_EQ(code_of([] { max_tps(0.0, 1.0, 1.0, 5); }), ErrorCode::InvalidArgument);
}

TEST(Profiles, PublishedRows)
{
    EXPECT_EQ(profile("compact").per_tx_proof_bytes, 784u);
    EXPECT_EQ(profile("boneh").per_tx_proof_bytes, 384u);
    EXPECT_EQ(profile("minichain").per_tx_proof_bytes, 1360u);
    EXPECT_EQ(code_of([] { profile("nope"); }), ErrorCode::InvalidArgument);
    const NetConfig c = apply_profile(NetConfig{}, profile("compact"));
    EXPECT_EQ(c.payload_bytes(), 250000u + 1000u * 784u);
    EXPECT_DOUBLE_EQ(c.validation_seconds, 0.303);
}
