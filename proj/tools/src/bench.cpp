#include <compactchain/baselines.hpp>
#include <compactchain/chain_state.hpp>
#include <compactchain/error.hpp>
#include <compactchain/tools/bench.hpp>
#include <compactchain/wallet.hpp>

#include <chrono>
#include <cmath>
#include <functional>

namespace compactchain::tools {
namespace {

using Clock = std::chrono::steady_clock;

Coin synthetic_coin(std::uint64_t seed, std::uint32_t m, std::uint32_t i, std::string_view role)
{
    ByteWriter w;
    w.str("bench");
    w.str(role);
    w.u64(seed);
    w.u32(m);
    w.u32(i);
    Coin c;
    c.txid = sha256(w.data());
    c.index = 0;
    c.value = 1;
    return c;
}

// m transactions spending one coin created at height 0 and creating one coin.
std::vector<Transaction> block_of(std::uint64_t seed, std::uint32_t m)
{
    std::vector<Transaction> txs(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        txs[i].inputs.push_back(synthetic_coin(seed, m, i, "in"));
        txs[i].witnesses.emplace_back();
        txs[i].outputs.push_back(synthetic_coin(seed, m, i, "out"));
    }
    return txs;
}

std::string digest_of(std::initializer_list<const GroupElement*> elems, const GroupParams& params)
{
    ByteWriter w;
    for (const auto* e : elems)
        w.bytes(encode_element(*e, params));
    return to_hex(sha256(w.data()));
}

// One warm-up run, then the mean of `iterations` timed runs.
double time_mean(unsigned iterations, const std::function<void()>& fn)
{
    fn();
    double total = 0.0;
    for (unsigned i = 0; i < iterations; ++i) {
        auto t0 = Clock::now();
        fn();
        total += std::chrono::duration<double>(Clock::now() - t0).count();
    }
    return total / iterations;
}

BenchRow bench_compact(const GroupParams& params, const BenchOptions& o, std::uint32_t m)
{
    const BlockHeader prev = genesis(params, 1).first;
    const auto txs = block_of(o.seed, m);
    BenchRow row{Scheme::Compact, m, 0.0, o.workers, {}};

    switch (o.op) {
    case BenchOp::Update: {
        CommitmentUpdate u{Commitment{GroupElement::one()}, Commitment{GroupElement::one()},
                           NiPoeProof{GroupElement::one()}, NiPoeProof{GroupElement::one()}};
        row.seconds = time_mean(o.iterations, [&] { u = update_commitments(prev, txs, params, o.workers); });
        row.digest = digest_of({&u.txo_c.element, &u.stxo_c.element, &u.pi_txo.q, &u.pi_stxo.q}, params);
        break;
    }
    case BenchOp::Verify: {
        const CommitmentUpdate u = update_commitments(prev, txs, params, o.workers);
        BlockHeader candidate = prev;
        candidate.height = 1;
        candidate.txo_c = u.txo_c;
        candidate.stxo_c = u.stxo_c;
        candidate.pi_txo = u.pi_txo;
        candidate.pi_stxo = u.pi_stxo;
        bool ok = false;
        row.seconds = time_mean(o.iterations, [&] { ok = verify_commitments(prev, txs, candidate, params, o.workers); });
        if (!ok)
            throw Error(ErrorCode::InvalidCommitmentProof, "honest commitment proofs failed to verify");
        row.digest = ok ? "valid" : "invalid";
        break;
    }
    case BenchOp::WitnessUpdate: {
        // Coin created at height 1, advanced over a block of m spends and m outputs.
        const Coin own = synthetic_coin(o.seed, m, 0, "own");
        const PrimeRep x = coin_prime(own, 1, params);
        const BlockDigest d = digest_block(txs, 2, params, o.workers);
        const Commitment txo_h{pow_signed(prev.txo_c.element, x.value(), params)};
        const Commitment stxo_h = prev.stxo_c;
        const MemWitness w0{prev.txo_c.element};
        const NonMemWitness u0 = create_nonmem_witness(prev.stxo_c, {}, x, params);
        MemWitness w = w0;
        NonMemWitness u = u0;
        row.seconds = time_mean(o.iterations, [&] {
            w = update_mem_witness(w0, d.output_primes, params);
            u = update_nonmem_witness(u0, x, stxo_h, d.input_primes, params);
        });
        const Commitment txo_n{pow_signed(txo_h.element, product(d.output_primes, o.workers), params)};
        const Commitment stxo_n{pow_signed(stxo_h.element, product(d.input_primes, o.workers), params)};
        if (!verify_mem_witness(w, x, txo_n, params) || !verify_nonmem_witness(u, x, stxo_n, params))
            throw Error(ErrorCode::WitnessInvalid, "updated witness failed to verify");
        row.digest = digest_of({&w.element, &u.d}, params);
        break;
    }
    }
    return row;
}

BenchRow bench_boneh(const GroupParams& params, const BenchOptions& o, std::uint32_t m)
{
    if (o.op == BenchOp::WitnessUpdate)
        throw Error(ErrorCode::InvalidArgument, "witness-update is only measured for the compact scheme");
    const auto txs = block_of(o.seed, m);
    const BlockDigest d = digest_block(txs, 1, params, o.workers);
    const Commitment g{generator_of(params)};
    const Commitment a = batch_add(g, d.input_primes, params, o.workers);
    const auto witnesses = create_all_mem_witnesses(g, d.input_primes, params);
    std::vector<std::pair<PrimeRep, MemWitness>> inputs;
    inputs.reserve(m);
    for (std::uint32_t i = 0; i < m; ++i)
        inputs.emplace_back(d.input_primes[i], witnesses[i]);
    const UtxoCommitment start{a.element};

    BenchRow row{Scheme::Boneh, m, 0.0, o.workers, {}};
    if (o.op == BenchOp::Update) {
        BonehUpdate u{start, NiPoeProof{GroupElement::one()}, NiPoeProof{GroupElement::one()}, a};
        row.seconds =
            time_mean(o.iterations, [&] { u = boneh_update(start, inputs, d.output_primes, params, o.workers); });
        row.digest = digest_of({&u.commitment.element, &u.deletion_proof.q, &u.addition_proof.q}, params);
        return row;
    }
    const BonehUpdate u = boneh_update(start, inputs, d.output_primes, params, o.workers);
    bool ok = false;
    row.seconds = time_mean(o.iterations, [&] {
        BigInt del = product(d.input_primes, o.workers);
        BigInt add = product(d.output_primes, o.workers);
        ok = verify_ni_poe(del, u.after_deletion.element, a.element, u.deletion_proof, params) &&
             verify_ni_poe(add, u.after_deletion.element, u.commitment.element, u.addition_proof, params);
    });
    if (!ok)
        throw Error(ErrorCode::InvalidCommitmentProof, "honest baseline proofs failed to verify");
    row.digest = "valid";
    return row;
}

} // namespace

Scheme parse_scheme(std::string_view name)
{
    if (name == "compact")
        return Scheme::Compact;
    if (name == "boneh")
        return Scheme::Boneh;
    throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

BenchOp parse_op(std::string_view name)
{
    if (name == "update")
        return BenchOp::Update;
    if (name == "verify")
        return BenchOp::Verify;
    if (name == "witness-update")
        return BenchOp::WitnessUpdate;
    throw Error(ErrorCode::InvalidArgument, "unknown bench op '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) { return scheme == Scheme::Compact ? "compact" : "boneh"; }

std::string_view to_string(BenchOp op)
{
    switch (op) {
    case BenchOp::Update: return "update";
    case BenchOp::Verify: return "verify";
    case BenchOp::WitnessUpdate: return "witness-update";
    }
    return "unknown";
}

std::vector<BenchRow> run_bench(const GroupParams& params, const BenchOptions& o)
{
    if (o.iterations == 0)
        throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
    std::vector<BenchRow> rows;
    for (std::uint32_t m : o.m_values) {
        if (m == 0)
            throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
        rows.push_back(o.scheme == Scheme::Compact ? bench_compact(params, o, m) : bench_boneh(params, o, m));
    }
    return rows;
}

double loglog_slope(const std::vector<BenchRow>& rows)
{
    if (rows.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double x = std::log(static_cast<double>(r.m));
        const double y = std::log(r.seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace compactchain::tools
