#include <compactchain/detail/parallel.hpp>
#include <compactchain/error.hpp>
#include <compactchain/wallet.hpp>

#include <algorithm>

namespace compactchain {

TxWitness generate_witness(const PrimeRep& coin_prime, const BlockDigest& block_k, std::uint64_t k,
                           const BlockHeader& prev_header, const GroupParams& params)
{
    if (prev_header.height + 1 != k)
        throw Error(ErrorCode::InvalidArgument, "previous header must sit at height k - 1");
    TxWitness w;
    try {
        w.mem = create_mem_witness(prev_header.txo_c, block_k.output_primes, coin_prime, params);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MemberNotInCohort)
            throw Error(ErrorCode::CoinNotInBlock, "coin is not an output of block " + std::to_string(k));
        throw;
    }
    try {
        w.nonmem = create_nonmem_witness(prev_header.stxo_c, block_k.input_primes, coin_prime, params);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MemberPresent)
            throw Error(ErrorCode::CoinAlreadySpentInBlock, "coin is spent in its own block " + std::to_string(k));
        throw;
    }
    w.creation_height = k;
    w.witness_height = k;
    return w;
}

TxWitness generate_witness(const Coin& coin, const Block& block_k, const BlockHeader& prev_header,
                           const GroupParams& params)
{
    const std::uint64_t k = block_k.header.height;
    BlockDigest digest = digest_block(block_k.txs, k, params);
    return generate_witness(coin_prime(coin, k, params), digest, k, prev_header, params);
}

MemWitness update_mem_witness(const MemWitness& w, std::span<const PrimeRep> new_output_primes,
                              const GroupParams& params)
{
    if (new_output_primes.empty())
        return w;
    return MemWitness{pow_signed(w.element, product(new_output_primes), params)};
}

NonMemWitness update_nonmem_witness(const NonMemWitness& u, const PrimeRep& coin_prime, const Commitment& stxo_c_h,
                                    std::span<const PrimeRep> new_input_primes, const GroupParams& params)
{
    if (new_input_primes.empty())
        return u;
    const BigInt p = product(new_input_primes);
    const BigInt& t = coin_prime.value();
    BezoutPair ab;
    try {
        ab = bezout(t, p);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotCoprime)
            throw Error(ErrorCode::CoinSpent, "coin prime divides the spent-set product");
        throw;
    }
    // Unreduced update: d' = d * S^(a0*b), b' = b0*b against S' = S^p.
    // Reducing b' = q*t + r folds S'^q = S^(p*q) into the same exponent.
    BigInt b_new = ab.b * u.b;
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), b_new.get_mpz_t(), t.get_mpz_t());
    if (2 * r > t)
        r -= t;
    BigInt q = b_new - r;
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), t.get_mpz_t());
    BigInt exponent = ab.a * u.b + p * q;
    return NonMemWitness{multiply(u.d, pow_signed(stxo_c_h.element, exponent, params), params), std::move(r), u.base};
}

Wallet::Wallet(Claim claim) : claim_(std::move(claim)) {}

std::size_t Wallet::unspent_count() const
{
    return static_cast<std::size_t>(std::count_if(coins_.begin(), coins_.end(), [](const auto& c) { return !c.spent; }));
}

void Wallet::roll_forward(const Block& block, const BlockHeader& prev_header, const GroupParams& params,
                          unsigned workers)
{
    BlockDigest digest = digest_block(block.txs, block.header.height, params, workers);
    roll_forward(block, digest, prev_header, params, workers);
}

void Wallet::roll_forward(const Block& block, const BlockDigest& digest, const BlockHeader& prev_header,
                          const GroupParams& params, unsigned workers)
{
    const std::uint64_t n = block.header.height;
    if (prev_header.height + 1 != n)
        throw Error(ErrorCode::InvalidArgument, "roll_forward needs the header just below the block");

    std::set<PrimeRep> spent(digest.input_primes.begin(), digest.input_primes.end());
    std::vector<OwnedCoin*> live;
    for (auto& c : coins_) {
        if (c.spent)
            continue;
        if (c.witness.witness_height != prev_header.height)
            throw Error(ErrorCode::InvalidArgument, "coin witness is not at height " + std::to_string(prev_header.height));
        if (spent.contains(c.prime))
            c.spent = true;
        else
            live.push_back(&c);
    }

    // Both updates reuse the block-wide products; only the Bezout step is per coin.
    const BigInt p_out = product(digest.output_primes, workers);
    detail::parallel_for(live.size(), workers, [&](std::size_t i) {
        OwnedCoin& c = *live[i];
        if (!digest.output_primes.empty())
            c.witness.mem = MemWitness{pow_signed(c.witness.mem.element, p_out, params)};
        c.witness.nonmem = update_nonmem_witness(c.witness.nonmem, c.prime, prev_header.stxo_c, digest.input_primes, params);
        c.witness.witness_height = n;
    });

    std::vector<OwnedCoin> fresh;
    std::size_t out_index = 0;
    for (const auto& tx : block.txs) {
        for (const auto& coin : tx.outputs) {
            const PrimeRep& prime = digest.output_primes[out_index++];
            if (claim_ && !claim_(coin))
                continue;
            fresh.push_back(OwnedCoin{coin, prime, TxWitness{}, false});
        }
    }
    detail::parallel_for(fresh.size(), workers, [&](std::size_t i) {
        fresh[i].witness = generate_witness(fresh[i].prime, digest, n, prev_header, params);
    });
    for (auto& c : fresh)
        coins_.push_back(std::move(c));
}

Bytes Wallet::encode(const GroupParams& params) const
{
    ByteWriter w;
    for (const auto& c : coins_) {
        w.bytes(c.coin.encode());
        w.bytes(encode_witness_envelope(c.witness, params));
        w.u8(c.spent ? 1 : 0);
    }
    return std::move(w).take();
}

Wallet Wallet::decode(std::span<const std::uint8_t> data, const BaseResolver& base_for, const GroupParams& params,
                      Claim claim)
{
    Wallet wallet(std::move(claim));
    ByteReader in(data);
    while (!in.done()) {
        Coin coin = Coin::decode(in);
        TxWitness wit = decode_witness_envelope(in.bytes(witness_envelope_bytes(params)), base_for, params);
        std::uint8_t flag = in.u8();
        if (flag > 1)
            throw Error(ErrorCode::ParseError, "bad spent flag in wallet record");
        PrimeRep prime = coin_prime(coin, wit.creation_height, params);
        wallet.coins_.push_back(OwnedCoin{coin, std::move(prime), std::move(wit), flag == 1});
    }
    return wallet;
}

} // namespace compactchain
