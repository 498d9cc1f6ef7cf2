#include <compactchain/bytes.hpp>
#include <compactchain/error.hpp>
#include <compactchain/rsa_group.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace compactchain;

namespace {

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

TEST(Setup, ExplicitParamsPassThrough)
{
    GroupParams p = setup(77, BigInt(2));
    EXPECT_EQ(p.modulus, 77);
    EXPECT_EQ(p.generator, 2);
    EXPECT_EQ(p.prime_bits, 128u);
    EXPECT_EQ(p.element_bytes(), 1u);
}

TEST(Setup, RejectsBadParams)
{
    EXPECT_EQ(code_of([] { setup(77, BigInt(7)); }), ErrorCode::NonCoprimeGenerator);
    EXPECT_EQ(code_of([] { setup(13, BigInt(2)); }), ErrorCode::ModulusTooSmall);
    EXPECT_EQ(code_of([] { setup(78, BigInt(5)); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { setup(77, BigInt(1)); }), ErrorCode::InvalidElement);
    EXPECT_EQ(code_of([] { setup(77, BigInt(77)); }), ErrorCode::InvalidElement);
    EXPECT_EQ(code_of([] { setup(77, BigInt(2), 1); }), ErrorCode::InvalidArgument);
}

TEST(Setup, DefaultGeneratorIsSmallCoprimeSquare)
{
    EXPECT_EQ(setup(77).generator, 4);
    EXPECT_EQ(setup(15).generator, 4);
    EXPECT_EQ(setup(1155).generator, 4);
}

TEST(Setup, DevModulusHasRequestedSize)
{
    for (unsigned bits : {64u, 512u, 2048u}) {
        GroupParams p = setup_dev(bits, 7);
        EXPECT_EQ(p.modulus_bits(), bits);
        EXPECT_EQ(p.element_bytes(), bits / 8);
        EXPECT_TRUE(mpz_odd_p(p.modulus.get_mpz_t()));
        EXPECT_FALSE(oracle::gmp_prime(p.modulus));
    }
    EXPECT_EQ(setup_dev(512, 7).modulus, setup_dev(512, 7).modulus);
    EXPECT_NE(setup_dev(512, 7).modulus, setup_dev(512, 8).modulus);
}

TEST(Setup, ProductionSizeModulus)
{
    EXPECT_EQ(oracle::dev(3072).modulus_bits(), 3072u);
    EXPECT_EQ(oracle::dev(3072).element_bytes(), 384u);
}

TEST(Params, RoundTripAndCorruption)
{
    GroupParams p = setup_dev(256, 1, 96, "unit");
    Bytes b = serialize_params(p);
    GroupParams q = parse_params(b);
    EXPECT_EQ(q.modulus, p.modulus);
    EXPECT_EQ(q.generator, p.generator);
    EXPECT_EQ(q.prime_bits, 96u);
    EXPECT_EQ(q.domain_tag, "unit");

    Bytes bad_magic = b;
    bad_magic[0] ^= 1;
    EXPECT_EQ(code_of([&] { parse_params(bad_magic); }), ErrorCode::ParseError);
    Bytes truncated(b.begin(), b.end() - 1);
    EXPECT_EQ(code_of([&] { parse_params(truncated); }), ErrorCode::ParseError);
    Bytes trailing = b;
    trailing.push_back(0);
    EXPECT_EQ(code_of([&] { parse_params(trailing); }), ErrorCode::ParseError);
}

TEST(GroupElement, ConstructionChecks)
{
    const auto& p = oracle::toy();
    EXPECT_EQ(GroupElement(79, p).value(), 2);
    EXPECT_EQ(GroupElement(-1, p).value(), 76);
    EXPECT_EQ(code_of([&] { GroupElement(0, p); }), ErrorCode::InvalidElement);
    EXPECT_EQ(code_of([&] { GroupElement(77, p); }), ErrorCode::InvalidElement);
    EXPECT_EQ(code_of([&] { GroupElement(14, p); }), ErrorCode::NonInvertible);
    EXPECT_EQ(code_of([&] { GroupElement(22, p); }), ErrorCode::NonInvertible);
}

TEST(PowSigned, ToyVectors)
{
    const auto& p = oracle::toy();
    const GroupElement g = generator_of(p);
    EXPECT_EQ(oracle::pow(2, 15, 77), 43);
    EXPECT_EQ(pow_signed(g, 15, p).value(), 43);
    EXPECT_EQ(pow_signed(g, 0, p), GroupElement::one());
    EXPECT_EQ(oracle::inverse(2, 77), 39);
    EXPECT_EQ(oracle::pow(2, -2, 77), 58);
    EXPECT_EQ(pow_signed(g, -2, p).value(), 58);
    EXPECT_EQ(inverse(g, p).value(), 39);
    EXPECT_EQ(multiply(g, inverse(g, p), p), GroupElement::one());
}

// Every exponent in [-90, 90] for every unit of Z/77, against the schoolbook
// oracle and against reduction mod lambda(77) = 30.
TEST(PowSigned, ExhaustiveToyGroup)
{
    const auto& p = oracle::toy();
    for (int x = 1; x < 77; ++x) {
        if (std::gcd(x, 77) != 1)
            continue;
        const GroupElement e(x, p);
        for (int k = -90; k <= 90; ++k) {
            const BigInt got = pow_signed(e, k, p).value();
            ASSERT_EQ(got, oracle::pow(x, k, 77)) << x << "^" << k;
            ASSERT_EQ(got, oracle::pow(x, oracle::mod(k, 30), 77)) << x << "^" << k;
        }
    }
}

TEST(PowSigned, AlgebraicLaws)
{
    const auto& p = oracle::dev(512);
    std::mt19937_64 rng(11);
    gmp_randclass r(gmp_randinit_mt);
    r.seed(5);
    const GroupElement g = generator_of(p);
    for (int i = 0; i < 200; ++i) {
        BigInt a = r.get_z_bits(160) - (BigInt(1) << 159);
        BigInt b = r.get_z_bits(96) - (BigInt(1) << 95);
        EXPECT_EQ(pow_signed(pow_signed(g, a, p), b, p), pow_signed(g, a * b, p));
        const GroupElement x(r.get_z_range(p.modulus - 2) + 2, p);
        EXPECT_EQ(multiply(pow_signed(x, a, p), pow_signed(x, -a, p), p), GroupElement::one());
    }
}

TEST(Element, EncodeDecode)
{
    const auto& p = oracle::dev(512);
    const GroupElement g = generator_of(p);
    Bytes b = encode_element(g, p);
    EXPECT_EQ(b.size(), 64u);
    EXPECT_EQ(decode_element(b, p), g);
    EXPECT_EQ(code_of([&] { decode_element(std::span(b).first(63), p); }), ErrorCode::ParseError);
    Bytes big = encode_unsigned(p.modulus, 64);
    EXPECT_EQ(code_of([&] { decode_element(big, p); }), ErrorCode::ParseError);
}

TEST(Bezout, PinnedVectorsMatchEuclid)
{
    struct Case {
        int x, p, a, b;
    };
    for (auto c : {Case{7, 15, -2, 1}, Case{3, 5, 2, -1}, Case{7, 11, -3, 2}}) {
        auto ab = bezout(c.x, c.p);
        EXPECT_EQ(ab.a, c.a) << c.x << "," << c.p;
        EXPECT_EQ(ab.b, c.b) << c.x << "," << c.p;
        auto [g, s, t] = oracle::ext_euclid(c.x, c.p);
        EXPECT_EQ(g, 1);
        EXPECT_EQ(s * c.x + t * c.p, 1);
        // The pinned pair is the Euclid solution shifted so b is the symmetric residue mod x.
        EXPECT_EQ(oracle::mod(t - ab.b, c.x), 0);
    }
}

TEST(Bezout, Errors)
{
    EXPECT_EQ(code_of([] { bezout(3, 15); }), ErrorCode::NotCoprime);
    EXPECT_EQ(code_of([] { bezout(0, 15); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { bezout(3, -5); }), ErrorCode::InvalidArgument);
}

TEST(Bezout, IdentityHoldsOnRandomCoprimePairs)
{
    gmp_randclass r(gmp_randinit_mt);
    r.seed(99);
    int checked = 0;
    while (checked < 10000) {
        BigInt x = r.get_z_bits(128) + 1;
        BigInt p = r.get_z_bits(1 + checked % 700) + 1;
        BigInt g;
        mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        if (g != 1)
            continue;
        auto ab = bezout(x, p);
        ASSERT_EQ(ab.a * x + ab.b * p, 1);
        BigInt twice_b = 2 * ab.b;
        ASSERT_TRUE(twice_b <= x && twice_b > -x);
        ++checked;
    }
}

TEST(Product, SmallCasesAndFold)
{
    EXPECT_EQ(product(std::span<const PrimeRep>{}), 1);
    std::vector<PrimeRep> two{PrimeRep(3), PrimeRep(5)};
    EXPECT_EQ(product(two), 15);

    std::mt19937_64 rng(3);
    auto primes = oracle::random_primes(rng, 1000);
    const BigInt expect = oracle::fold_product(primes);
    EXPECT_EQ(product(primes), expect);
    EXPECT_EQ(product(primes, 4), expect);
    std::shuffle(primes.begin(), primes.end(), rng);
    EXPECT_EQ(product(primes, 3), expect);
}

TEST(PrimeRep, RejectsNonPrimes)
{
    EXPECT_EQ(code_of([] { PrimeRep(15); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { PrimeRep(2); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { PrimeRep(1); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(PrimeRep(13).value(), 13);
}
