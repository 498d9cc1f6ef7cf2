#include <compactchain/rsa_group.hpp>

#include <array>

namespace compactchain {
namespace {

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,
    67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

bool strong_fermat_base2(const BigInt& n)
{
    BigInt d = n - 1;
    unsigned s = static_cast<unsigned>(mpz_scan1(d.get_mpz_t(), 0));
    d >>= s;
    BigInt x;
    BigInt two = 2;
    mpz_powm(x.get_mpz_t(), two.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    BigInt minus_one = n - 1;
    if (x == 1 || x == minus_one)
        return true;
    for (unsigned r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == minus_one)
            return true;
        if (x == 1)
            return false;
    }
    return false;
}

BigInt mod(const BigInt& a, const BigInt& n)
{
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

BigInt half(const BigInt& a, const BigInt& n)
{
    BigInt r = mpz_odd_p(a.get_mpz_t()) ? BigInt(a + n) : a;
    r >>= 1;
    return r;
}

bool strong_lucas_selfridge(const BigInt& n)
{
    // Selfridge method A: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    long D = 5;
    for (;;) {
        BigInt bd = D;
        int j = mpz_jacobi(bd.get_mpz_t(), n.get_mpz_t());
        if (j == -1)
            break;
        if (j == 0) {
            BigInt absd = D < 0 ? -D : D;
            if (absd != n)
                return false;
        }
        D = D > 0 ? -(D + 2) : -(D - 2);
    }
    const BigInt P = 1;
    const BigInt Q = BigInt(1 - D) / 4;
    const BigInt bigD = D;

    BigInt d = n + 1;
    unsigned s = static_cast<unsigned>(mpz_scan1(d.get_mpz_t(), 0));
    d >>= s;

    BigInt U = 1, V = P, Qk = mod(Q, n);
    for (long bit = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
        U = mod(U * V, n);
        V = mod(V * V - 2 * Qk, n);
        Qk = mod(Qk * Qk, n);
        if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            BigInt u2 = half(mod(P * U + V, n), n);
            BigInt v2 = half(mod(bigD * U + P * V, n), n);
            U = u2;
            V = v2;
            Qk = mod(Qk * Q, n);
        }
    }
    if (U == 0 || V == 0)
        return true;
    for (unsigned r = 1; r < s; ++r) {
        V = mod(V * V - 2 * Qk, n);
        if (V == 0)
            return true;
        Qk = mod(Qk * Qk, n);
    }
    return false;
}

} // namespace

bool is_probable_prime(const BigInt& n)
{
    if (n < 2)
        return false;
    for (unsigned p : kSmallPrimes) {
        if (n == p)
            return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return false;
    }
    if (!strong_fermat_base2(n))
        return false;
    // Lucas with Selfridge parameters never terminates on perfect squares.
    if (mpz_perfect_square_p(n.get_mpz_t()))
        return false;
    return strong_lucas_selfridge(n);
}

} // namespace compactchain
