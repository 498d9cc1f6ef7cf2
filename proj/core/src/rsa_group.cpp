#include <compactchain/bytes.hpp>
#include <compactchain/error.hpp>
#include <compactchain/rsa_group.hpp>

#include <future>

namespace compactchain {
namespace {

constexpr std::array<std::uint8_t, 4> kParamsMagic = {'C', 'C', 'G', '1'};

BigInt gcd_of(const BigInt& a, const BigInt& b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

BigInt default_generator(const BigInt& modulus)
{
    for (unsigned long k = 2;; ++k) {
        BigInt candidate = BigInt(k) * k;
        if (candidate >= modulus)
            break;
        if (gcd_of(candidate, modulus) == 1)
            return candidate;
    }
    // Tiny moduli: fall back to any unit.
    for (BigInt candidate = 2; candidate < modulus; ++candidate)
        if (gcd_of(candidate, modulus) == 1)
            return candidate;
    throw Error(ErrorCode::NonCoprimeGenerator, "no unit available as generator");
}

void check_params(const GroupParams& p)
{
    if (p.modulus < 15)
        throw Error(ErrorCode::ModulusTooSmall, "modulus must be at least 15");
    if (mpz_even_p(p.modulus.get_mpz_t()))
        throw Error(ErrorCode::InvalidArgument, "modulus must be odd");
    if (p.generator <= 1 || p.generator >= p.modulus)
        throw Error(ErrorCode::InvalidElement, "generator must lie in (1, N)");
    if (gcd_of(p.generator, p.modulus) != 1)
        throw Error(ErrorCode::NonCoprimeGenerator,
                    "gcd(generator, modulus) = " + gcd_of(p.generator, p.modulus).get_str());
    if (p.prime_bits < 2 || p.prime_bits > 0xffff)
        throw Error(ErrorCode::InvalidArgument, "prime_bits must be in [2, 65535]");
    if (p.domain_tag.size() > 0xff)
        throw Error(ErrorCode::InvalidArgument, "domain tag longer than 255 bytes");
}

BigInt product_range(std::span<const BigInt> values, unsigned workers)
{
    switch (values.size()) {
    case 0: return 1;
    case 1: return values[0];
    case 2: return values[0] * values[1];
    default: break;
    }
    auto mid = values.size() / 2;
    auto left = values.first(mid);
    auto right = values.subspan(mid);
    if (workers > 1 && values.size() >= 64) {
        unsigned lw = workers / 2;
        auto fut = std::async(std::launch::async, [left, lw] { return product_range(left, lw); });
        BigInt r = product_range(right, workers - lw);
        return fut.get() * r;
    }
    return product_range(left, 1) * product_range(right, 1);
}

} // namespace

std::size_t GroupParams::modulus_bits() const { return mpz_sizeinbase(modulus.get_mpz_t(), 2); }

std::size_t GroupParams::element_bytes() const { return (modulus_bits() + 7) / 8; }

GroupParams setup(const BigInt& modulus, std::optional<BigInt> generator, unsigned prime_bits, std::string domain_tag)
{
    GroupParams p;
    p.modulus = modulus;
    if (p.modulus < 15)
        throw Error(ErrorCode::ModulusTooSmall, "modulus must be at least 15");
    p.generator = generator ? *generator : default_generator(modulus);
    p.prime_bits = prime_bits;
    p.domain_tag = std::move(domain_tag);
    check_params(p);
    return p;
}

GroupParams setup_dev(unsigned bits, std::uint64_t seed, unsigned prime_bits, std::string domain_tag)
{
    if (bits < 16)
        throw Error(ErrorCode::ModulusTooSmall, "generated moduli need at least 16 bits");
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(seed));
    const unsigned pbits = bits / 2;
    const unsigned qbits = bits - pbits;
    auto draw = [&rng](unsigned nbits) {
        BigInt c = rng.get_z_bits(nbits);
        mpz_setbit(c.get_mpz_t(), nbits - 1);
        mpz_setbit(c.get_mpz_t(), nbits - 2);
        BigInt prime;
        mpz_nextprime(prime.get_mpz_t(), c.get_mpz_t());
        return prime;
    };
    for (;;) {
        BigInt p = draw(pbits);
        BigInt q = draw(qbits);
        BigInt n = p * q;
        if (p != q && mpz_sizeinbase(n.get_mpz_t(), 2) == bits)
            return setup(n, std::nullopt, prime_bits, std::move(domain_tag));
    }
}

Bytes serialize_params(const GroupParams& params)
{
    check_params(params);
    const std::size_t width = params.element_bytes();
    ByteWriter w;
    w.bytes(kParamsMagic);
    w.u16(static_cast<std::uint16_t>(params.prime_bits));
    w.u32(static_cast<std::uint32_t>(width));
    w.bytes(encode_unsigned(params.modulus, width));
    w.bytes(encode_unsigned(params.generator, width));
    w.u8(static_cast<std::uint8_t>(params.domain_tag.size()));
    w.str(params.domain_tag);
    return std::move(w).take();
}

GroupParams parse_params(std::span<const std::uint8_t> data)
{
    ByteReader r(data);
    auto magic = r.array<4>();
    if (magic != kParamsMagic)
        throw Error(ErrorCode::ParseError, "bad group parameter magic");
    GroupParams p;
    p.prime_bits = r.u16();
    std::uint32_t width = r.u32();
    if (width == 0 || width > (1u << 16))
        throw Error(ErrorCode::ParseError, "implausible modulus length " + std::to_string(width));
    p.modulus = decode_unsigned(r.bytes(width));
    p.generator = decode_unsigned(r.bytes(width));
    auto tag = r.bytes(r.u8());
    p.domain_tag.assign(tag.begin(), tag.end());
    r.expect_done();
    if (p.element_bytes() != width)
        throw Error(ErrorCode::ParseError, "modulus length field does not match modulus");
    check_params(p);
    return p;
}

GroupElement::GroupElement(const BigInt& value, const GroupParams& params)
{
    mpz_fdiv_r(value_.get_mpz_t(), value.get_mpz_t(), params.modulus.get_mpz_t());
    if (sgn(value_) == 0)
        throw Error(ErrorCode::InvalidElement, "zero is not a group element");
    if (gcd_of(value_, params.modulus) != 1)
        throw Error(ErrorCode::NonInvertible, "element shares a factor with the modulus");
}

GroupElement generator_of(const GroupParams& params) { return GroupElement(params.generator, params); }

GroupElement multiply(const GroupElement& a, const GroupElement& b, const GroupParams& params)
{
    return GroupElement(a.value() * b.value(), params);
}

GroupElement inverse(const GroupElement& a, const GroupParams& params)
{
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), a.value().get_mpz_t(), params.modulus.get_mpz_t()) == 0)
        throw Error(ErrorCode::NonInvertible, "element has no inverse modulo N");
    return GroupElement(inv, params);
}

GroupElement pow_signed(const GroupElement& base, const BigInt& exponent, const GroupParams& params)
{
    if (sgn(exponent) == 0)
        return GroupElement::one();
    BigInt b = base.value();
    BigInt e = exponent;
    if (sgn(exponent) < 0) {
        b = inverse(base, params).value();
        e = -exponent;
    }
    BigInt out;
    mpz_powm(out.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), params.modulus.get_mpz_t());
    return GroupElement(out, params);
}

Bytes encode_element(const GroupElement& e, const GroupParams& params)
{
    return encode_unsigned(e.value(), params.element_bytes());
}

GroupElement decode_element(std::span<const std::uint8_t> data, const GroupParams& params)
{
    if (data.size() != params.element_bytes())
        throw Error(ErrorCode::ParseError, "group element must be " + std::to_string(params.element_bytes()) + " bytes");
    BigInt v = decode_unsigned(data);
    if (v >= params.modulus)
        throw Error(ErrorCode::ParseError, "group element not reduced modulo N");
    try {
        return GroupElement(v, params);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid group element: ") + e.what());
    }
}

PrimeRep::PrimeRep(BigInt value) : value_(std::move(value))
{
    if (mpz_even_p(value_.get_mpz_t()) || !is_probable_prime(value_))
        throw Error(ErrorCode::InvalidArgument, "not an odd prime: " + value_.get_str());
}

PrimeRep PrimeRep::trusted(BigInt value) { return PrimeRep(std::move(value), Trusted{}); }

PrimeRep hash_to_prime(std::span<const std::uint8_t> data, const GroupParams& params, std::string_view purpose)
{
    if (data.empty())
        throw Error(ErrorCode::InvalidArgument, "hash_to_prime needs non-empty input");
    const unsigned bits = params.prime_bits;
    const unsigned blocks = (bits + 255) / 256;

    ByteWriter prefix;
    prefix.str(params.domain_tag);
    if (!purpose.empty()) {
        prefix.u8(':');
        prefix.str(purpose);
    }
    prefix.bytes(data);
    Bytes buf = std::move(prefix).take();
    const std::size_t base_len = buf.size();

    for (std::uint32_t counter = 0; counter < kPrimeSearchCap; ++counter) {
        Bytes digest;
        digest.reserve(32 * blocks);
        for (unsigned j = 0; j < blocks; ++j) {
            buf.resize(base_len);
            ByteWriter tail;
            tail.u32(counter);
            if (blocks > 1)
                tail.u32(j);
            buf.insert(buf.end(), tail.data().begin(), tail.data().end());
            auto h = sha256(buf);
            digest.insert(digest.end(), h.begin(), h.end());
        }
        BigInt candidate = decode_unsigned(digest);
        candidate >>= static_cast<mp_bitcnt_t>(256 * blocks - bits);
        mpz_setbit(candidate.get_mpz_t(), bits - 1);
        mpz_setbit(candidate.get_mpz_t(), 0);
        if (is_probable_prime(candidate))
            return PrimeRep::trusted(std::move(candidate));
    }
    throw Error(ErrorCode::PrimeSearchExhausted, "no prime after " + std::to_string(kPrimeSearchCap) + " candidates");
}

BezoutPair bezout(const BigInt& x, const BigInt& p)
{
    if (sgn(x) <= 0 || sgn(p) <= 0)
        throw Error(ErrorCode::InvalidArgument, "bezout needs positive inputs");
    BigInt g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    if (g != 1)
        throw Error(ErrorCode::NotCoprime, "gcd(x, p) = " + g.get_str());
    BigInt b;
    mpz_fdiv_r(b.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t());
    if (2 * b > x)
        b -= x;
    BigInt num = 1 - b * p;
    BigInt a;
    mpz_divexact(a.get_mpz_t(), num.get_mpz_t(), x.get_mpz_t());
    return {std::move(a), std::move(b)};
}

BigInt product(std::span<const BigInt> values, unsigned workers) { return product_range(values, workers); }

BigInt product(std::span<const PrimeRep> primes, unsigned workers)
{
    std::vector<BigInt> values;
    values.reserve(primes.size());
    for (const auto& p : primes)
        values.push_back(p.value());
    return product_range(values, workers);
}

} // namespace compactchain
