#include <compactchain/error.hpp>
#include <compactchain/workload.hpp>

#include <algorithm>
#include <chrono>

namespace compactchain {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

std::string_view to_string(AttackKind kind)
{
    switch (kind) {
    case AttackKind::InWindowReplay: return "in_window_replay";
    case AttackKind::StaleWitness: return "stale_witness";
    case AttackKind::ForgedCreationHeight: return "forged_creation_height";
    }
    return "unknown";
}

ChainHarness::ChainHarness(GroupParams params, std::size_t cache_blocks, WorkloadConfig config)
    : chain_(std::move(params), cache_blocks, config.workers), config_(config)
{
}

ChainHarness::ChainHarness(ChainState chain, Wallet wallet, WorkloadConfig config)
    : chain_(std::move(chain)), wallet_(std::move(wallet)), config_(config)
{
}

std::mt19937_64 ChainHarness::block_rng(std::uint64_t height) const
{
    std::seed_seq seq{static_cast<std::uint32_t>(config_.seed), static_cast<std::uint32_t>(config_.seed >> 32),
                      static_cast<std::uint32_t>(height), static_cast<std::uint32_t>(height >> 32)};
    return std::mt19937_64(seq);
}

Coin ChainHarness::new_coin(std::mt19937_64& rng, std::uint64_t height, std::size_t tx_index, std::uint32_t index,
                            std::uint64_t value) const
{
    ByteWriter nonce;
    nonce.str("synthetic-tx");
    nonce.u64(config_.seed);
    nonce.u64(height);
    nonce.u64(tx_index);
    Coin c;
    c.txid = sha256(nonce.data());
    c.index = index;
    c.value = value;
    for (auto& b : c.owner_tag)
        b = static_cast<std::uint8_t>(rng());
    return c;
}

std::vector<Transaction> ChainHarness::make_transactions()
{
    const std::uint64_t height = chain_.tip() + 1;
    auto rng = block_rng(height);

    std::vector<const OwnedCoin*> pool;
    for (const auto& c : wallet_.coins())
        if (!c.spent && c.witness.witness_height == chain_.tip())
            pool.push_back(&c);
    std::shuffle(pool.begin(), pool.end(), rng);

    std::vector<Transaction> txs;
    std::size_t next = 0;
    for (std::uint32_t i = 0; i < config_.txs_per_block; ++i) {
        Transaction tx;
        std::uint64_t total = config_.coinbase_value;
        if (config_.inputs_per_tx > 0 && pool.size() - next >= config_.inputs_per_tx) {
            total = 0;
            for (std::uint32_t j = 0; j < config_.inputs_per_tx; ++j) {
                const OwnedCoin* c = pool[next++];
                tx.inputs.push_back(c->coin);
                tx.witnesses.push_back(c->witness);
                total += c->coin.value;
            }
        }
        const std::uint32_t outs = std::max<std::uint32_t>(1, config_.outputs_per_tx);
        for (std::uint32_t j = 0; j < outs; ++j) {
            std::uint64_t value = total / outs + (j == 0 ? total % outs : 0);
            tx.outputs.push_back(new_coin(rng, height, i, j, value));
        }
        txs.push_back(std::move(tx));
    }
    return txs;
}

BlockStats ChainHarness::step()
{
    auto txs = make_transactions();
    const std::uint64_t height = chain_.tip() + 1;
    const BlockHeader prev = chain_.tip_header();

    BlockStats stats;
    stats.height = height;
    stats.txs = static_cast<std::uint32_t>(txs.size());

    for (std::size_t i = 0; i < txs.size(); ++i) {
        if (!validate_transaction(txs[i], chain_.tip(), chain_.headers(), chain_.cache(), chain_.params()))
            throw Error(ErrorCode::InvalidTransaction, "harness produced an invalid transaction", i);
    }
    auto t0 = Clock::now();
    Block block = chain_.seal_block(std::move(txs), height * config_.block_interval);
    stats.update_seconds = seconds_since(t0);

    t0 = Clock::now();
    chain_.apply_block(block);
    stats.verify_seconds = seconds_since(t0);

    t0 = Clock::now();
    wallet_.roll_forward(block, prev, chain_.params(), config_.workers);
    stats.witness_update_seconds = seconds_since(t0);

    stats.block_bytes = header_bytes(chain_.params());
    const std::size_t per_input = existence_proof_bytes(chain_.params()) + unspent_proof_bytes(chain_.params());
    for (const auto& tx : block.txs) {
        stats.block_bytes += tx.encode_body().size();
        stats.inputs += static_cast<std::uint32_t>(tx.inputs.size());
        stats.outputs += static_cast<std::uint32_t>(tx.outputs.size());
    }
    stats.proof_bytes = std::uint64_t{stats.inputs} * per_input;
    if (hook_)
        hook_(block);
    return stats;
}

std::optional<AttackOutcome> ChainHarness::attempt(AttackKind kind)
{
    const std::uint64_t tip = chain_.tip();
    const std::uint64_t m = chain_.cache().capacity();
    // A spent coin keeps the witness it had just before the spending block.
    const OwnedCoin* victim = nullptr;
    for (const auto& c : wallet_.coins()) {
        if (!c.spent)
            continue;
        const std::uint64_t h = c.witness.witness_height;
        const bool in_window = h + m >= tip;
        if ((kind == AttackKind::InWindowReplay && in_window) || (kind == AttackKind::StaleWitness && !in_window) ||
            kind == AttackKind::ForgedCreationHeight) {
            victim = &c;
            if (kind != AttackKind::ForgedCreationHeight || in_window)
                break;
        }
    }
    if (!victim)
        return std::nullopt;

    auto rng = block_rng(tip + 1);
    Transaction tx;
    tx.inputs.push_back(victim->coin);
    TxWitness w = victim->witness;
    if (kind == AttackKind::ForgedCreationHeight && victim->witness.creation_height < tip) {
        // Claim the coin appeared at the tip, after its real spend. The unspent
        // proof for block `tip` is honest; the old existence proof is all the
        // attacker has for the membership side.
        w.creation_height = tip;
        w.witness_height = tip;
        const PrimeRep forged = coin_prime(victim->coin, tip, chain_.params());
        const auto& bucket = chain_.cache().window().at(tip);
        std::vector<PrimeRep> spent_at_tip(bucket.begin(), bucket.end());
        w.nonmem = create_nonmem_witness(Commitment{chain_.nonmem_base(tip)}, spent_at_tip, forged, chain_.params());
    }
    tx.witnesses.push_back(w);
    tx.outputs.push_back(new_coin(rng, tip + 1, 0xdead, 0, victim->coin.value));

    AttackOutcome out;
    out.kind = kind;
    try {
        out.rejected_by_validation = !validate_transaction(tx, tip, chain_.headers(), chain_.cache(), chain_.params());
        if (out.rejected_by_validation) {
            const PrimeRep t = coin_prime(victim->coin, w.creation_height, chain_.params());
            out.reason = chain_.cache().spent_after(t, w.witness_height) ? "spent inside cache window"
                                                                         : "witness check failed";
        }
    } catch (const Error& e) {
        out.rejected_by_validation = true;
        out.reason = std::string(to_string(e.code()));
    }

    // Same transaction inside an otherwise honest block from a dishonest miner.
    auto honest = make_transactions();
    honest.push_back(tx);
    Block forged = chain_.seal_block(std::move(honest), (tip + 1) * config_.block_interval);
    try {
        chain_.apply_block(forged);
        out.rejected_in_block = false;
    } catch (const Error& e) {
        out.rejected_in_block = true;
        if (out.reason.empty())
            out.reason = std::string(to_string(e.code()));
    }
    return out;
}

} // namespace compactchain
