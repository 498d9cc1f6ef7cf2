#include <compactchain/bytes.hpp>
#include <compactchain/error.hpp>

#include <openssl/evp.h>

#include <fstream>
#include <iterator>

namespace compactchain {

Hash256 sha256(std::span<const std::uint8_t> data)
{
    Hash256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
        throw Error(ErrorCode::InvalidArgument, "sha256 digest failed");
    return out;
}

std::string to_hex(std::span<const std::uint8_t> data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes magnitude_bytes(const BigInt& value)
{
    if (sgn(value) == 0)
        return {};
    std::size_t count = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
    Bytes out(count);
    std::size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
    out.resize(written);
    return out;
}

Bytes encode_unsigned(const BigInt& value, std::size_t width)
{
    if (sgn(value) < 0)
        throw Error(ErrorCode::InvalidArgument, "encode_unsigned: negative value");
    Bytes mag = magnitude_bytes(value);
    if (mag.size() > width)
        throw Error(ErrorCode::InvalidArgument, "encode_unsigned: value exceeds " + std::to_string(width) + " bytes");
    Bytes out(width - mag.size(), 0);
    out.insert(out.end(), mag.begin(), mag.end());
    return out;
}

BigInt decode_unsigned(std::span<const std::uint8_t> data)
{
    BigInt out;
    if (!data.empty())
        mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
    return out;
}

Bytes encode_signed(const BigInt& value, std::size_t width)
{
    BigInt bound = BigInt(1) << (8 * width - 1);
    if (value >= bound || value < -bound)
        throw Error(ErrorCode::InvalidArgument, "encode_signed: value exceeds " + std::to_string(width) + " bytes");
    BigInt twos = value;
    if (sgn(value) < 0)
        twos += bound << 1;
    return encode_unsigned(twos, width);
}

BigInt decode_signed(std::span<const std::uint8_t> data)
{
    BigInt v = decode_unsigned(data);
    if (!data.empty() && (data[0] & 0x80))
        v -= BigInt(1) << (8 * data.size());
    return v;
}

void ByteWriter::u8(std::uint8_t v) { buf_.push_back(v); }

void ByteWriter::u16(std::uint16_t v)
{
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u64(std::uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::bytes(std::span<const std::uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }

void ByteWriter::str(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

void ByteWriter::framed(std::span<const std::uint8_t> data)
{
    u32(static_cast<std::uint32_t>(data.size()));
    bytes(data);
}

std::span<const std::uint8_t> ByteReader::bytes(std::size_t n)
{
    if (remaining() < n)
        throw Error(ErrorCode::ParseError, "unexpected end of input (need " + std::to_string(n) + " bytes, have " +
                                               std::to_string(remaining()) + ")");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t ByteReader::u8() { return bytes(1)[0]; }

std::uint16_t ByteReader::u16()
{
    auto s = bytes(2);
    return static_cast<std::uint16_t>((s[0] << 8) | s[1]);
}

std::uint32_t ByteReader::u32()
{
    std::uint32_t v = 0;
    for (auto b : bytes(4))
        v = (v << 8) | b;
    return v;
}

std::uint64_t ByteReader::u64()
{
    std::uint64_t v = 0;
    for (auto b : bytes(8))
        v = (v << 8) | b;
    return v;
}

void ByteReader::expect_done() const
{
    if (!done())
        throw Error(ErrorCode::ParseError, std::to_string(remaining()) + " trailing bytes");
}

Bytes read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!out)
            throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void append_file(const std::filesystem::path& path, std::span<const std::uint8_t> data)
{
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot append to " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw Error(ErrorCode::IoError, "short write to " + path.string());
}

} // namespace compactchain
