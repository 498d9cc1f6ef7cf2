#include <compactchain/chain_state.hpp>
#include <compactchain/detail/parallel.hpp>
#include <compactchain/error.hpp>

#include <algorithm>
#include <future>

namespace compactchain {
namespace {

constexpr std::string_view kCoinPurpose = "coin";

void check_unique(std::vector<PrimeRep>& primes, std::string_view what)
{
    std::vector<PrimeRep> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
        throw Error(ErrorCode::DuplicateCoin, std::string(what) + " prime repeats within the block");
}

std::vector<PrimeRep> map_primes(const std::vector<std::pair<const Coin*, std::uint64_t>>& coins,
                                 const GroupParams& params, unsigned workers)
{
    std::vector<std::optional<PrimeRep>> slots(coins.size());
    detail::parallel_for(coins.size(), workers,
                         [&](std::size_t i) { slots[i] = coin_prime(*coins[i].first, coins[i].second, params); });
    std::vector<PrimeRep> out;
    out.reserve(coins.size());
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace

Bytes Coin::encode() const
{
    ByteWriter w;
    w.bytes(txid);
    w.u32(index);
    w.u64(value);
    w.bytes(owner_tag);
    return std::move(w).take();
}

Coin Coin::decode(ByteReader& in)
{
    Coin c;
    c.txid = in.array<32>();
    c.index = in.u32();
    c.value = in.u64();
    c.owner_tag = in.array<32>();
    return c;
}

PrimeRep coin_prime(const Coin& coin, std::uint64_t creation_height, const GroupParams& params)
{
    ByteWriter w;
    w.bytes(coin.encode());
    w.u64(creation_height);
    return hash_to_prime(w.data(), params, kCoinPurpose);
}

std::size_t existence_proof_bytes(const GroupParams& params) { return params.element_bytes(); }

std::size_t unspent_proof_bytes(const GroupParams& params)
{
    return params.element_bytes() + kSignedCoefficientBytes;
}

std::size_t witness_envelope_bytes(const GroupParams& params)
{
    return 8 + 8 + existence_proof_bytes(params) + unspent_proof_bytes(params);
}

Bytes encode_witness_envelope(const TxWitness& w, const GroupParams& params)
{
    ByteWriter out;
    out.u64(w.creation_height);
    out.u64(w.witness_height);
    out.bytes(encode_mem_witness(w.mem, params));
    out.bytes(encode_nonmem_witness(w.nonmem, params));
    return std::move(out).take();
}

TxWitness decode_witness_envelope(std::span<const std::uint8_t> data, const BaseResolver& base_for,
                                  const GroupParams& params)
{
    if (data.size() != witness_envelope_bytes(params))
        throw Error(ErrorCode::ParseError, "witness envelope has wrong length");
    ByteReader in(data);
    TxWitness w;
    w.creation_height = in.u64();
    w.witness_height = in.u64();
    w.mem = decode_mem_witness(in.bytes(existence_proof_bytes(params)), params);
    w.nonmem = decode_nonmem_witness(in.bytes(unspent_proof_bytes(params)), base_for(w.creation_height), params);
    return w;
}

void Transaction::check_structure() const
{
    if (outputs.empty())
        throw Error(ErrorCode::InvalidArgument, "transaction has no outputs");
    if (witnesses.size() != inputs.size())
        throw Error(ErrorCode::InvalidArgument, "witness count does not match input count");
    auto unique = [](std::vector<Coin> coins) {
        std::sort(coins.begin(), coins.end());
        return std::adjacent_find(coins.begin(), coins.end()) == coins.end();
    };
    if (!unique(inputs) || !unique(outputs))
        throw Error(ErrorCode::DuplicateCoin, "coin repeats within a transaction");
}

Bytes Transaction::encode_body() const
{
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(inputs.size()));
    for (const auto& c : inputs)
        w.bytes(c.encode());
    w.u32(static_cast<std::uint32_t>(outputs.size()));
    for (const auto& c : outputs)
        w.bytes(c.encode());
    return std::move(w).take();
}

Hash256 Transaction::id() const { return sha256(encode_body()); }

std::size_t header_bytes(const GroupParams& params) { return 8 + 32 + 32 + 4 * params.element_bytes() + 8; }

Bytes BlockHeader::encode(const GroupParams& params) const
{
    ByteWriter w;
    w.u64(height);
    w.bytes(prev_hash);
    w.bytes(tx_root);
    w.bytes(encode_element(txo_c.element, params));
    w.bytes(encode_element(stxo_c.element, params));
    w.bytes(encode_proof(pi_txo, params));
    w.bytes(encode_proof(pi_stxo, params));
    w.u64(timestamp);
    return std::move(w).take();
}

BlockHeader BlockHeader::decode(std::span<const std::uint8_t> data, const GroupParams& params)
{
    if (data.size() != header_bytes(params))
        throw Error(ErrorCode::ParseError, "header record has wrong length");
    const auto width = params.element_bytes();
    ByteReader in(data);
    BlockHeader h;
    h.height = in.u64();
    h.prev_hash = in.array<32>();
    h.tx_root = in.array<32>();
    h.txo_c = Commitment{decode_element(in.bytes(width), params)};
    h.stxo_c = Commitment{decode_element(in.bytes(width), params)};
    h.pi_txo = NiPoeProof{decode_element(in.bytes(width), params)};
    h.pi_stxo = NiPoeProof{decode_element(in.bytes(width), params)};
    h.timestamp = in.u64();
    return h;
}

Hash256 BlockHeader::hash(const GroupParams& params) const { return sha256(encode(params)); }

Bytes encode_block(const Block& block, const GroupParams& params)
{
    ByteWriter w;
    w.bytes(block.header.encode(params));
    w.u32(static_cast<std::uint32_t>(block.txs.size()));
    for (const auto& tx : block.txs) {
        w.bytes(tx.encode_body());
        for (const auto& wit : tx.witnesses)
            w.bytes(encode_witness_envelope(wit, params));
    }
    return std::move(w).take();
}

Block decode_block(ByteReader& in, const BaseResolver& base_for, const GroupParams& params)
{
    Block block;
    block.header = BlockHeader::decode(in.bytes(header_bytes(params)), params);
    std::uint32_t ntx = in.u32();
    block.txs.reserve(ntx);
    for (std::uint32_t i = 0; i < ntx; ++i) {
        Transaction tx;
        std::uint32_t nin = in.u32();
        for (std::uint32_t j = 0; j < nin; ++j)
            tx.inputs.push_back(Coin::decode(in));
        std::uint32_t nout = in.u32();
        for (std::uint32_t j = 0; j < nout; ++j)
            tx.outputs.push_back(Coin::decode(in));
        for (std::uint32_t j = 0; j < nin; ++j)
            tx.witnesses.push_back(decode_witness_envelope(in.bytes(witness_envelope_bytes(params)), base_for, params));
        block.txs.push_back(std::move(tx));
    }
    return block;
}

Hash256 merkle_root(std::span<const Hash256> leaves)
{
    if (leaves.empty())
        return Hash256{};
    std::vector<Hash256> level(leaves.begin(), leaves.end());
    while (level.size() > 1) {
        if (level.size() % 2)
            level.push_back(level.back());
        std::vector<Hash256> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            Bytes pair(level[i].begin(), level[i].end());
            pair.insert(pair.end(), level[i + 1].begin(), level[i + 1].end());
            next.push_back(sha256(pair));
        }
        level = std::move(next);
    }
    return level.front();
}

Hash256 tx_root(std::span<const Transaction> txs)
{
    std::vector<Hash256> ids;
    ids.reserve(txs.size());
    for (const auto& tx : txs)
        ids.push_back(tx.id());
    return merkle_root(ids);
}

BlockDigest digest_block(std::span<const Transaction> txs, std::uint64_t height, const GroupParams& params,
                         unsigned workers)
{
    std::vector<std::pair<const Coin*, std::uint64_t>> outs, ins;
    for (const auto& tx : txs) {
        if (tx.witnesses.size() != tx.inputs.size())
            throw Error(ErrorCode::InvalidArgument, "witness count does not match input count");
        for (const auto& c : tx.outputs)
            outs.emplace_back(&c, height);
        for (std::size_t i = 0; i < tx.inputs.size(); ++i)
            ins.emplace_back(&tx.inputs[i], tx.witnesses[i].creation_height);
    }
    BlockDigest d;
    d.output_primes = map_primes(outs, params, workers);
    d.input_primes = map_primes(ins, params, workers);
    check_unique(d.output_primes, "output");
    check_unique(d.input_primes, "input");
    return d;
}

StxoCache::StxoCache(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw Error(ErrorCode::InvalidArgument, "STXO cache needs capacity >= 1");
}

void StxoCache::insert(std::uint64_t height, std::span<const PrimeRep> spent)
{
    if (!window_.empty() && height <= window_.rbegin()->first)
        throw Error(ErrorCode::InvalidArgument, "STXO cache heights must increase");
    window_[height] = std::set<PrimeRep>(spent.begin(), spent.end());
    if (height >= capacity_)
        window_.erase(window_.begin(), window_.upper_bound(height - capacity_));
}

bool StxoCache::spent_after(const PrimeRep& prime, std::uint64_t height) const
{
    for (auto it = window_.upper_bound(height); it != window_.end(); ++it)
        if (it->second.contains(prime))
            return true;
    return false;
}

std::size_t StxoCache::prime_count() const
{
    std::size_t n = 0;
    for (const auto& [h, primes] : window_)
        n += primes.size();
    return n;
}

Bytes StxoCache::encode() const
{
    ByteWriter w;
    for (const auto& [h, primes] : window_) {
        w.u64(h);
        w.u32(static_cast<std::uint32_t>(primes.size()));
        for (const auto& p : primes)
            w.bytes(encode_unsigned(p.value(), kSignedCoefficientBytes));
    }
    return std::move(w).take();
}

StxoCache StxoCache::decode(std::span<const std::uint8_t> data, std::size_t capacity)
{
    StxoCache cache(capacity);
    ByteReader in(data);
    while (!in.done()) {
        std::uint64_t h = in.u64();
        std::uint32_t n = in.u32();
        std::vector<PrimeRep> primes;
        primes.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i)
            primes.push_back(PrimeRep::trusted(decode_unsigned(in.bytes(kSignedCoefficientBytes))));
        cache.insert(h, primes);
    }
    return cache;
}

void HeaderStore::append(const BlockHeader& header, const GroupParams& params)
{
    if (headers_.empty()) {
        if (header.height != 0 || header.prev_hash != Hash256{})
            throw Error(ErrorCode::BrokenChainLink, "first header must be height 0 with a null parent");
    } else {
        if (header.height != tip_height() + 1)
            throw Error(ErrorCode::BrokenChainLink, "expected height " + std::to_string(tip_height() + 1) + ", got " +
                                                        std::to_string(header.height));
        if (header.prev_hash != hashes_.back())
            throw Error(ErrorCode::BrokenChainLink, "prev_hash mismatch at height " + std::to_string(header.height));
    }
    hashes_.push_back(header.hash(params));
    headers_.push_back(header);
}

const BlockHeader& HeaderStore::at(std::uint64_t height) const
{
    if (height >= headers_.size())
        throw Error(ErrorCode::UnknownHeight, "no header at height " + std::to_string(height));
    return headers_[height];
}

const BlockHeader& HeaderStore::tip() const
{
    if (headers_.empty())
        throw Error(ErrorCode::UnknownHeight, "header store is empty");
    return headers_.back();
}

std::uint64_t HeaderStore::tip_height() const { return tip().height; }

const Hash256& HeaderStore::hash_at(std::uint64_t height) const
{
    at(height);
    return hashes_[height];
}

Bytes HeaderStore::encode(const GroupParams& params) const
{
    Bytes out;
    for (const auto& h : headers_) {
        auto rec = h.encode(params);
        out.insert(out.end(), rec.begin(), rec.end());
    }
    return out;
}

HeaderStore HeaderStore::decode(std::span<const std::uint8_t> data, const GroupParams& params)
{
    const auto rec = header_bytes(params);
    if (data.size() % rec)
        throw Error(ErrorCode::ParseError, "header store is not a whole number of records");
    HeaderStore store;
    for (std::size_t off = 0; off < data.size(); off += rec)
        store.append(BlockHeader::decode(data.subspan(off, rec), params), params);
    return store;
}

std::pair<BlockHeader, StxoCache> genesis(const GroupParams& params, std::size_t cache_blocks)
{
    BlockHeader h;
    h.height = 0;
    h.txo_c = Commitment{generator_of(params)};
    h.stxo_c = Commitment{generator_of(params)};
    h.pi_txo = NiPoeProof{GroupElement::one()};
    h.pi_stxo = NiPoeProof{GroupElement::one()};
    h.timestamp = 0;
    return {h, StxoCache(cache_blocks)};
}

CommitmentUpdate update_commitments(const BlockHeader& prev, std::span<const Transaction> txs,
                                    const GroupParams& params, unsigned workers)
{
    BlockDigest d = digest_block(txs, prev.height + 1, params, workers);
    auto advance = [&params](const Commitment& from, const std::vector<PrimeRep>& primes, unsigned w) {
        BigInt p = product(primes, w);
        Commitment to{pow_signed(from.element, p, params)};
        NiPoeProof proof = prove_ni_poe(p, from.element, to.element, params);
        return std::pair{to, proof};
    };
    // The two accumulators are independent; run them side by side when allowed.
    std::pair<Commitment, NiPoeProof> txo{Commitment{GroupElement::one()}, NiPoeProof{GroupElement::one()}};
    std::pair<Commitment, NiPoeProof> stxo = txo;
    if (workers > 1) {
        auto fut = std::async(std::launch::async, [&] { return advance(prev.txo_c, d.output_primes, workers / 2); });
        stxo = advance(prev.stxo_c, d.input_primes, workers - workers / 2);
        txo = fut.get();
    } else {
        txo = advance(prev.txo_c, d.output_primes, 1);
        stxo = advance(prev.stxo_c, d.input_primes, 1);
    }
    return CommitmentUpdate{txo.first, stxo.first, txo.second, stxo.second};
}

bool verify_commitments(const BlockHeader& prev, std::span<const Transaction> txs, const BlockHeader& candidate,
                        const GroupParams& params, unsigned workers)
{
    BlockDigest d;
    try {
        d = digest_block(txs, prev.height + 1, params, workers);
    } catch (const Error&) {
        return false;
    }
    return verify_commitments(prev, d, candidate, params, workers);
}

bool verify_commitments(const BlockHeader& prev, const BlockDigest& d, const BlockHeader& candidate,
                        const GroupParams& params, unsigned workers)
{
    BigInt p1 = product(d.output_primes, workers);
    BigInt p2 = product(d.input_primes, workers);
    bool b1 = verify_ni_poe(p1, prev.txo_c.element, candidate.txo_c.element, candidate.pi_txo, params);
    bool b2 = verify_ni_poe(p2, prev.stxo_c.element, candidate.stxo_c.element, candidate.pi_stxo, params);
    return b1 && b2;
}

bool validate_transaction(const Transaction& tx, std::uint64_t tip, const HeaderStore& headers,
                          const StxoCache& cache, const GroupParams& params)
{
    if (tx.witnesses.size() != tx.inputs.size())
        return false;
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const TxWitness& w = tx.witnesses[i];
        const std::uint64_t h = w.witness_height;
        const std::uint64_t k = w.creation_height;
        if (h > tip)
            throw Error(ErrorCode::FutureWitness, "witness height " + std::to_string(h) + " above tip " +
                                                      std::to_string(tip), i);
        if (h + cache.capacity() < tip)
            throw Error(ErrorCode::StaleWitness, "witness height " + std::to_string(h) + " older than tip - M = " +
                                                     std::to_string(tip - cache.capacity()), i);
        if (k > h)
            return false;
        const BlockHeader& at_h = headers.at(h);
        const GroupElement base = k == 0 ? generator_of(params) : headers.at(k - 1).stxo_c.element;

        const PrimeRep t = coin_prime(tx.inputs[i], k, params);
        if (!verify_mem_witness(w.mem, t, at_h.txo_c, params))
            return false;
        NonMemWitness u{w.nonmem.d, w.nonmem.b, base};
        if (!verify_nonmem_witness(u, t, at_h.stxo_c, params))
            return false;
        if (cache.spent_after(t, h))
            return false;
    }
    return true;
}

ChainState::ChainState(GroupParams params, std::size_t cache_blocks, unsigned workers)
    : params_(std::move(params)), cache_(cache_blocks), workers_(std::max(1u, workers))
{
    auto [header, cache] = genesis(params_, cache_blocks);
    headers_.append(header, params_);
    cache_ = std::move(cache);
}

ChainState::ChainState(GroupParams params, HeaderStore headers, StxoCache cache, unsigned workers)
    : params_(std::move(params)), headers_(std::move(headers)), cache_(std::move(cache)),
      workers_(std::max(1u, workers))
{
    if (headers_.empty())
        throw Error(ErrorCode::InvalidArgument, "restored chain has no genesis header");
    if (!cache_.window().empty() && cache_.window().rbegin()->first > headers_.tip_height())
        throw Error(ErrorCode::InvalidArgument, "STXO cache is ahead of the header store");
}

GroupElement ChainState::nonmem_base(std::uint64_t creation_height) const
{
    return creation_height == 0 ? generator_of(params_) : headers_.at(creation_height - 1).stxo_c.element;
}

BaseResolver ChainState::base_resolver() const
{
    return [this](std::uint64_t k) { return nonmem_base(k); };
}

void ChainState::apply_block(const Block& block)
{
    const BlockHeader& prev = headers_.tip();
    const BlockHeader& cand = block.header;
    if (cand.height != prev.height + 1 || cand.prev_hash != headers_.hash_at(prev.height))
        throw Error(ErrorCode::BrokenChainLink, "block does not extend the tip at height " + std::to_string(prev.height));
    if (cand.tx_root != tx_root(block.txs))
        throw Error(ErrorCode::InvalidCommitmentProof, "tx_root does not match the block body");

    const std::uint64_t tip = prev.height;
    std::vector<char> ok(block.txs.size(), 0);
    std::vector<std::string> why(block.txs.size());
    detail::parallel_for(block.txs.size(), workers_, [&](std::size_t i) {
        try {
            block.txs[i].check_structure();
            ok[i] = validate_transaction(block.txs[i], tip, headers_, cache_, params_);
            if (!ok[i])
                why[i] = "witness check failed";
        } catch (const Error& e) {
            why[i] = std::string(to_string(e.code())) + ": " + e.what();
        }
    });
    for (std::size_t i = 0; i < block.txs.size(); ++i)
        if (!ok[i])
            throw Error(ErrorCode::InvalidTransaction, "transaction " + std::to_string(i) + " rejected (" + why[i] + ")", i);

    BlockDigest d = digest_block(block.txs, cand.height, params_, workers_);
    if (!verify_commitments(prev, d, cand, params_, workers_))
        throw Error(ErrorCode::InvalidCommitmentProof, "commitment proofs do not verify at height " +
                                                           std::to_string(cand.height));
    headers_.append(cand, params_);
    cache_.insert(cand.height, d.input_primes);
}

Block ChainState::assemble_block(std::vector<Transaction> txs, std::uint64_t timestamp) const
{
    const std::uint64_t tip = headers_.tip_height();
    for (std::size_t i = 0; i < txs.size(); ++i) {
        bool valid = false;
        std::string why = "witness check failed";
        try {
            txs[i].check_structure();
            valid = validate_transaction(txs[i], tip, headers_, cache_, params_);
        } catch (const Error& e) {
            why = std::string(to_string(e.code())) + ": " + e.what();
        }
        if (!valid)
            throw Error(ErrorCode::InvalidTransaction, "transaction " + std::to_string(i) + " rejected (" + why + ")", i);
    }
    return seal_block(std::move(txs), timestamp);
}

Block ChainState::seal_block(std::vector<Transaction> txs, std::uint64_t timestamp) const
{
    const BlockHeader& prev = headers_.tip();
    CommitmentUpdate up = update_commitments(prev, txs, params_, workers_);
    Block block;
    block.header.height = prev.height + 1;
    block.header.prev_hash = headers_.hash_at(prev.height);
    block.header.tx_root = tx_root(txs);
    block.header.txo_c = up.txo_c;
    block.header.stxo_c = up.stxo_c;
    block.header.pi_txo = up.pi_txo;
    block.header.pi_stxo = up.pi_stxo;
    block.header.timestamp = timestamp;
    block.txs = std::move(txs);
    return block;
}

} // namespace compactchain
