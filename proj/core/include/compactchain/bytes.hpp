#pragma once

#include <compactchain/types.hpp>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace compactchain {

Hash256 sha256(std::span<const std::uint8_t> data);
std::string to_hex(std::span<const std::uint8_t> data);

/// Unsigned magnitude as exactly `width` big-endian bytes; throws if it does not fit.
Bytes encode_unsigned(const BigInt& value, std::size_t width);
BigInt decode_unsigned(std::span<const std::uint8_t> data);

/// Two's complement, `width` bytes, big-endian.
Bytes encode_signed(const BigInt& value, std::size_t width);
BigInt decode_signed(std::span<const std::uint8_t> data);

/// Minimal big-endian magnitude (empty for zero).
Bytes magnitude_bytes(const BigInt& value);

class ByteWriter {
public:
    void u8(std::uint8_t v);
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void bytes(std::span<const std::uint8_t> data);
    void str(std::string_view s);
    /// u32 length prefix followed by the data
    void framed(std::span<const std::uint8_t> data);

    const Bytes& data() const& { return buf_; }
    Bytes&& take() && { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    std::span<const std::uint8_t> bytes(std::size_t n);
    template <std::size_t N>
    std::array<std::uint8_t, N> array()
    {
        std::array<std::uint8_t, N> out{};
        auto s = bytes(N);
        std::copy(s.begin(), s.end(), out.begin());
        return out;
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return remaining() == 0; }
    void expect_done() const;

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void append_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

} // namespace compactchain
