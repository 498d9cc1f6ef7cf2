#pragma once

#include <compactchain/types.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace compactchain {

/// Public parameters of the group of unknown order: Z_N^* for an RSA modulus N.
/// Immutable once built; every other module takes it by const reference.
struct GroupParams {
    BigInt modulus;
    BigInt generator;
    unsigned prime_bits = 128;
    std::string domain_tag = "compactchain";

    /// Width of a serialized group element: ceil(bitlen(N) / 8).
    std::size_t element_bytes() const;
    std::size_t modulus_bits() const;
};

inline constexpr unsigned kDefaultPrimeBits = 128;
inline constexpr std::string_view kDefaultDomainTag = "compactchain";

/// Explicit (production) parameters. Without a generator the smallest square
/// k^2 (k = 2, 3, ...) coprime to N is chosen.
GroupParams setup(const BigInt& modulus, std::optional<BigInt> generator = std::nullopt,
                  unsigned prime_bits = kDefaultPrimeBits, std::string domain_tag = std::string(kDefaultDomainTag));

/// Dev-mode parameters: N = p*q from two random probable primes drawn from a
/// seeded generator. Whoever ran this knows the factorization.
GroupParams setup_dev(unsigned bits, std::uint64_t seed, unsigned prime_bits = kDefaultPrimeBits,
                      std::string domain_tag = std::string(kDefaultDomainTag));

/// CCG1 wire format.
Bytes serialize_params(const GroupParams& params);
GroupParams parse_params(std::span<const std::uint8_t> data);

/// Element of Z_N^*, reduced and coprime to N.
class GroupElement {
public:
    GroupElement(const BigInt& value, const GroupParams& params);
    static GroupElement one() { return GroupElement(); }

    const BigInt& value() const { return value_; }
    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value_ == b.value_; }

private:
    GroupElement() : value_(1) {}
    BigInt value_;
};

GroupElement generator_of(const GroupParams& params);
GroupElement multiply(const GroupElement& a, const GroupElement& b, const GroupParams& params);
GroupElement inverse(const GroupElement& a, const GroupParams& params);

/// base^exponent mod N for any signed exponent; negative exponents go through
/// the modular inverse.
GroupElement pow_signed(const GroupElement& base, const BigInt& exponent, const GroupParams& params);

Bytes encode_element(const GroupElement& e, const GroupParams& params);
GroupElement decode_element(std::span<const std::uint8_t> data, const GroupParams& params);

/// Odd prime used as an accumulator exponent.
class PrimeRep {
public:
    /// Checks primality; throws InvalidArgument otherwise.
    explicit PrimeRep(BigInt value);
    /// For values that are prime by construction.
    static PrimeRep trusted(BigInt value);

    const BigInt& value() const { return value_; }

    friend bool operator==(const PrimeRep& a, const PrimeRep& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const PrimeRep& a, const PrimeRep& b)
    {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    struct Trusted {};
    PrimeRep(BigInt value, Trusted) : value_(std::move(value)) {}
    BigInt value_;
};

/// Baillie-PSW: trial division, strong base-2 Miller-Rabin, strong Lucas (Selfridge A).
bool is_probable_prime(const BigInt& n);

inline constexpr std::uint32_t kPrimeSearchCap = 1'000'000;

/// Deterministic map to a prime of exactly params.prime_bits bits. Candidate c is
/// SHA-256(tag || data || c) truncated with the top and bottom bits forced; the
/// first candidate passing Baillie-PSW wins. `purpose` is appended to the
/// domain tag ("coin", "nipoe") so the different uses never collide.
PrimeRep hash_to_prime(std::span<const std::uint8_t> data, const GroupParams& params, std::string_view purpose = {});

struct BezoutPair {
    BigInt a;
    BigInt b;
};

/// a*x + b*p = 1 with b the symmetric residue in (-x/2, x/2].
BezoutPair bezout(const BigInt& x, const BigInt& p);

/// Balanced product tree; the empty product is 1.
BigInt product(std::span<const PrimeRep> primes, unsigned workers = 1);
BigInt product(std::span<const BigInt> values, unsigned workers = 1);

} // namespace compactchain
