#include <compactchain/baselines.hpp>
#include <compactchain/error.hpp>

namespace compactchain {

GroupElement shamir_trick(const GroupElement& w1, const GroupElement& w2, const BigInt& x1, const BigInt& x2,
                          const Commitment& a, const GroupParams& params)
{
    if (pow_signed(w1, x1, params) != a.element)
        throw Error(ErrorCode::WitnessInvalid, "first witness does not open the accumulator", 0);
    if (pow_signed(w2, x2, params) != a.element)
        throw Error(ErrorCode::WitnessInvalid, "second witness does not open the accumulator", 1);
    BezoutPair ab = bezout(x1, x2);
    return multiply(pow_signed(w1, ab.b, params), pow_signed(w2, ab.a, params), params);
}

DeletionResult batch_del(const Commitment& a, std::span<const std::pair<PrimeRep, MemWitness>> members,
                         const GroupParams& params)
{
    if (members.empty())
        return DeletionResult{a, prove_ni_poe(BigInt(1), a.element, a.element, params)};

    for (std::size_t i = 0; i < members.size(); ++i)
        if (!verify_mem_witness(members[i].second, members[i].first, a, params))
            throw Error(ErrorCode::WitnessInvalid, "witness " + std::to_string(i) + " does not open the accumulator", i);

    GroupElement agg = members[0].second.element;
    BigInt agg_exp = members[0].first.value();
    for (std::size_t i = 1; i < members.size(); ++i) {
        const BigInt& x = members[i].first.value();
        BezoutPair ab;
        try {
            ab = bezout(agg_exp, x);
        } catch (const Error& e) {
            throw Error(e.code(), "member " + std::to_string(i) + ": " + e.what(), i);
        }
        // agg^(agg_exp) = A and w_i^x = A; both witnesses are already verified.
        agg = multiply(pow_signed(agg, ab.b, params), pow_signed(members[i].second.element, ab.a, params), params);
        agg_exp *= x;
    }
    Commitment reduced{agg};
    return DeletionResult{reduced, prove_ni_poe(agg_exp, reduced.element, a.element, params)};
}

BonehUpdate boneh_update(const UtxoCommitment& a, std::span<const std::pair<PrimeRep, MemWitness>> inputs,
                         std::span<const PrimeRep> output_primes, const GroupParams& params, unsigned workers)
{
    DeletionResult del = batch_del(Commitment{a.element}, inputs, params);
    BigInt p = product(output_primes, workers);
    GroupElement added = pow_signed(del.commitment.element, p, params);
    NiPoeProof add_proof = prove_ni_poe(p, del.commitment.element, added, params);
    return BonehUpdate{UtxoCommitment{added}, del.proof, add_proof, del.commitment};
}

} // namespace compactchain
