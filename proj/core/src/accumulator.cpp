#include <compactchain/accumulator.hpp>
#include <compactchain/bytes.hpp>
#include <compactchain/error.hpp>

#include <algorithm>

namespace compactchain {
namespace {

constexpr std::string_view kNiPoePurpose = "nipoe";

void collect_witnesses(const GroupElement& base, std::span<const PrimeRep> cohort, const GroupParams& params,
                       std::vector<MemWitness>& out)
{
    if (cohort.size() == 1) {
        out.push_back(MemWitness{base});
        return;
    }
    auto mid = cohort.size() / 2;
    auto left = cohort.first(mid);
    auto right = cohort.subspan(mid);
    collect_witnesses(pow_signed(base, product(right), params), left, params, out);
    collect_witnesses(pow_signed(base, product(left), params), right, params, out);
}

} // namespace

BigInt HashPrimeMapper::challenge(std::span<const std::uint8_t> transcript) const
{
    return hash_to_prime(transcript, params_, kNiPoePurpose).value();
}

Commitment batch_add(const Commitment& a, std::span<const PrimeRep> new_primes, const GroupParams& params,
                     unsigned workers)
{
    if (new_primes.empty())
        return a;
    return Commitment{pow_signed(a.element, product(new_primes, workers), params)};
}

MemWitness create_mem_witness(const Commitment& base, std::span<const PrimeRep> cohort, const PrimeRep& member,
                              const GroupParams& params)
{
    std::vector<PrimeRep> rest;
    rest.reserve(cohort.size());
    std::size_t hits = 0;
    for (const auto& p : cohort) {
        if (p == member)
            ++hits;
        else
            rest.push_back(p);
    }
    if (hits == 0)
        throw Error(ErrorCode::MemberNotInCohort, "member " + member.value().get_str() + " is not in the cohort");
    if (hits > 1)
        throw Error(ErrorCode::DuplicateCoin, "member appears " + std::to_string(hits) + " times in the cohort");
    return MemWitness{pow_signed(base.element, product(rest), params)};
}

bool verify_mem_witness(const MemWitness& w, const PrimeRep& member, const Commitment& a, const GroupParams& params)
{
    return pow_signed(w.element, member.value(), params) == a.element;
}

std::vector<MemWitness> create_all_mem_witnesses(const Commitment& base, std::span<const PrimeRep> cohort,
                                                 const GroupParams& params)
{
    std::vector<MemWitness> out;
    out.reserve(cohort.size());
    if (!cohort.empty())
        collect_witnesses(base.element, cohort, params, out);
    return out;
}

NonMemWitness create_nonmem_witness(const Commitment& base, std::span<const PrimeRep> cohort, const PrimeRep& outsider,
                                    const GroupParams& params)
{
    BigInt p = product(cohort);
    BezoutPair ab;
    try {
        ab = bezout(outsider.value(), p);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotCoprime)
            throw Error(ErrorCode::MemberPresent, "prime " + outsider.value().get_str() + " is accumulated");
        throw;
    }
    return NonMemWitness{pow_signed(base.element, ab.a, params), std::move(ab.b), base.element};
}

bool verify_nonmem_witness(const NonMemWitness& u, const PrimeRep& outsider, const Commitment& a,
                           const GroupParams& params)
{
    auto lhs = multiply(pow_signed(u.d, outsider.value(), params), pow_signed(a.element, u.b, params), params);
    return lhs == u.base;
}

NonMemWitness normalize_nonmem_witness(const NonMemWitness& u, const PrimeRep& outsider, const Commitment& a,
                                       const GroupParams& params)
{
    const BigInt& t = outsider.value();
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), u.b.get_mpz_t(), t.get_mpz_t());
    if (2 * r > t)
        r -= t;
    if (r == u.b)
        return u;
    BigInt q = u.b - r;
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), t.get_mpz_t());
    return NonMemWitness{multiply(u.d, pow_signed(a.element, q, params), params), std::move(r), u.base};
}

Bytes nipoe_transcript(const BigInt& x, const GroupElement& u, const GroupElement& w, const GroupParams& params)
{
    if (sgn(x) <= 0)
        throw Error(ErrorCode::InvalidArgument, "NI-PoE exponent must be positive");
    ByteWriter out;
    out.framed(magnitude_bytes(x));
    out.framed(encode_element(u, params));
    out.framed(encode_element(w, params));
    return std::move(out).take();
}

NiPoeProof prove_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const GroupParams& params,
                        const PrimeMapper& mapper)
{
    BigInt l = mapper.challenge(nipoe_transcript(x, u, w, params));
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), l.get_mpz_t());
    return NiPoeProof{pow_signed(u, q, params)};
}

NiPoeProof prove_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const GroupParams& params)
{
    return prove_ni_poe(x, u, w, params, HashPrimeMapper(params));
}

bool verify_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const NiPoeProof& proof,
                   const GroupParams& params, const PrimeMapper& mapper)
{
    if (sgn(x) <= 0)
        return false;
    BigInt l = mapper.challenge(nipoe_transcript(x, u, w, params));
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), l.get_mpz_t());
    auto lhs = multiply(pow_signed(proof.q, l, params), pow_signed(u, r, params), params);
    return lhs == w;
}

bool verify_ni_poe(const BigInt& x, const GroupElement& u, const GroupElement& w, const NiPoeProof& proof,
                   const GroupParams& params)
{
    return verify_ni_poe(x, u, w, proof, params, HashPrimeMapper(params));
}

Bytes encode_mem_witness(const MemWitness& w, const GroupParams& params) { return encode_element(w.element, params); }

MemWitness decode_mem_witness(std::span<const std::uint8_t> data, const GroupParams& params)
{
    return MemWitness{decode_element(data, params)};
}

Bytes encode_nonmem_witness(const NonMemWitness& u, const GroupParams& params)
{
    Bytes out = encode_element(u.d, params);
    Bytes b = encode_signed(u.b, kSignedCoefficientBytes);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

NonMemWitness decode_nonmem_witness(std::span<const std::uint8_t> data, const GroupElement& base,
                                    const GroupParams& params)
{
    const auto width = params.element_bytes();
    if (data.size() != width + kSignedCoefficientBytes)
        throw Error(ErrorCode::ParseError, "non-membership witness has wrong length");
    return NonMemWitness{decode_element(data.first(width), params), decode_signed(data.subspan(width)), base};
}

Bytes encode_proof(const NiPoeProof& proof, const GroupParams& params) { return encode_element(proof.q, params); }

} // namespace compactchain
