// Micro-benchmarks at a 2048-bit development modulus. Block size m is the
// number of single-input, single-output transactions.

#include <compactchain/accumulator.hpp>
#include <compactchain/baselines.hpp>
#include <compactchain/bytes.hpp>
#include <compactchain/chain_state.hpp>
#include <compactchain/wallet.hpp>

#include <benchmark/benchmark.h>

#include <map>

using namespace compactchain;

namespace {

const GroupParams& params()
{
    static const GroupParams p = setup_dev(2048, 2024);
    return p;
}

Coin coin(std::string_view role, std::uint32_t i)
{
    ByteWriter w;
    w.str(role);
    w.u32(i);
    Coin c;
    c.txid = sha256(w.data());
    c.value = 1;
    return c;
}

std::vector<Transaction> block_of(std::uint32_t m)
{
    std::vector<Transaction> txs(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        txs[i].inputs.push_back(coin("in", i));
        txs[i].witnesses.emplace_back();
        txs[i].outputs.push_back(coin("out", i));
    }
    return txs;
}

/// Digests are cached per m so hash-to-prime stays out of the timed loops.
const BlockDigest& digest_of(std::uint32_t m)
{
    static std::map<std::uint32_t, BlockDigest> cache;
    auto it = cache.find(m);
    if (it == cache.end())
        it = cache.emplace(m, digest_block(block_of(m), 1, params())).first;
    return it->second;
}

void BM_CompactUpdate(benchmark::State& state)
{
    const auto m = static_cast<std::uint32_t>(state.range(0));
    const BlockHeader prev = genesis(params(), 1).first;
    const auto txs = block_of(m);
    for (auto _ : state)
        benchmark::DoNotOptimize(update_commitments(prev, txs, params()));
    state.SetComplexityN(m);
}
BENCHMARK(BM_CompactUpdate)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond)->Complexity();

void BM_CompactVerify(benchmark::State& state)
{
    const auto m = static_cast<std::uint32_t>(state.range(0));
    const BlockHeader prev = genesis(params(), 1).first;
    const auto txs = block_of(m);
    const CommitmentUpdate u = update_commitments(prev, txs, params());
    BlockHeader next = prev;
    next.height = 1;
    next.txo_c = u.txo_c;
    next.stxo_c = u.stxo_c;
    next.pi_txo = u.pi_txo;
    next.pi_stxo = u.pi_stxo;
    const BlockDigest& d = digest_of(m);
    for (auto _ : state)
        if (!verify_commitments(prev, d, next, params()))
            state.SkipWithError("honest proofs rejected");
    state.SetComplexityN(m);
}
BENCHMARK(BM_CompactVerify)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond)->Complexity();

void BM_BonehUpdate(benchmark::State& state)
{
    const auto m = static_cast<std::uint32_t>(state.range(0));
    const BlockDigest& d = digest_of(m);
    const Commitment g{generator_of(params())};
    const Commitment a = batch_add(g, d.input_primes, params());
    const auto ws = create_all_mem_witnesses(g, d.input_primes, params());
    std::vector<std::pair<PrimeRep, MemWitness>> inputs;
    for (std::uint32_t i = 0; i < m; ++i)
        inputs.emplace_back(d.input_primes[i], ws[i]);
    for (auto _ : state)
        benchmark::DoNotOptimize(boneh_update(UtxoCommitment{a.element}, inputs, d.output_primes, params()));
    state.SetComplexityN(m);
}
BENCHMARK(BM_BonehUpdate)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond)->Complexity();

void BM_WitnessUpdate(benchmark::State& state)
{
    const auto m = static_cast<std::uint32_t>(state.range(0));
    const BlockDigest& d = digest_of(m);
    const PrimeRep x = coin_prime(coin("own", 0), 1, params());
    const Commitment g{generator_of(params())};
    const MemWitness w{g.element};
    const NonMemWitness u = create_nonmem_witness(g, {}, x, params());
    for (auto _ : state) {
        benchmark::DoNotOptimize(update_mem_witness(w, d.output_primes, params()));
        benchmark::DoNotOptimize(update_nonmem_witness(u, x, g, d.input_primes, params()));
    }
    state.SetComplexityN(m);
}
BENCHMARK(BM_WitnessUpdate)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond)->Complexity();

// Both proofs of one input against the tip commitments; independent of chain length.
void BM_WitnessVerify(benchmark::State& state)
{
    const BlockDigest& d = digest_of(64);
    const Commitment g{generator_of(params())};
    const PrimeRep x = d.output_primes[0];
    const Commitment txo = batch_add(g, d.output_primes, params());
    const Commitment stxo = batch_add(g, d.input_primes, params());
    const MemWitness w = create_all_mem_witnesses(g, d.output_primes, params())[0];
    const NonMemWitness u = create_nonmem_witness(g, d.input_primes, x, params());
    for (auto _ : state)
        if (!verify_mem_witness(w, x, txo, params()) || !verify_nonmem_witness(u, x, stxo, params()))
            state.SkipWithError("honest witness rejected");
}
BENCHMARK(BM_WitnessVerify)->Unit(benchmark::kMicrosecond);

void BM_HashToPrime(benchmark::State& state)
{
    std::uint32_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(coin_prime(coin("h2p", i++), 1, params()));
}
BENCHMARK(BM_HashToPrime)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
