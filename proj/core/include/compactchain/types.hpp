#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <vector>

namespace compactchain {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;

} // namespace compactchain
