#include <compactchain/error.hpp>
#include <compactchain/store.hpp>

#include <sstream>

namespace compactchain {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text)
{
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text(const fs::path& path)
{
    Bytes b = read_file(path);
    return std::string(b.begin(), b.end());
}

std::size_t parse_cache_cfg(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("cache_blocks=", 0) == 0) {
            try {
                return std::stoul(line.substr(13));
            } catch (const std::exception&) {
                break;
            }
        }
    }
    throw Error(ErrorCode::ParseError, "chain.cfg lacks a valid cache_blocks entry");
}

} // namespace

ChainStore::ChainStore(fs::path dir, GroupParams params, std::size_t cache_blocks)
    : dir_(std::move(dir)), params_(std::move(params)), cache_blocks_(cache_blocks)
{
}

ChainStore ChainStore::init(const fs::path& dir, const GroupParams& params, std::size_t cache_blocks)
{
    if (fs::exists(dir / "headers.bin"))
        throw Error(ErrorCode::IoError, "a chain already exists in " + dir.string());
    fs::create_directories(dir);
    ChainState chain(params, cache_blocks);
    write_file(dir / "params.ccg", serialize_params(params));
    write_text(dir / "chain.cfg", "cache_blocks=" + std::to_string(cache_blocks) + "\n");
    write_file(dir / "headers.bin", chain.headers().encode(params));
    write_file(dir / "stxo_cache.bin", chain.cache().encode());
    write_file(dir / "blocks.bin", Bytes{});
    write_file(dir / "wallet.bin", Bytes{});
    write_text(dir / "tip", to_hex(chain.headers().hash_at(0)) + "\n");
    return ChainStore(dir, params, cache_blocks);
}

ChainStore ChainStore::open(const fs::path& dir)
{
    GroupParams params = parse_params(read_file(dir / "params.ccg"));
    std::size_t m = parse_cache_cfg(read_text(dir / "chain.cfg"));
    return ChainStore(dir, std::move(params), m);
}

ChainState ChainStore::load_chain(unsigned workers) const
{
    HeaderStore headers = HeaderStore::decode(read_file(dir_ / "headers.bin"), params_);
    StxoCache cache = StxoCache::decode(read_file(dir_ / "stxo_cache.bin"), cache_blocks_);
    ChainState chain(params_, std::move(headers), std::move(cache), workers);
    std::string tip = read_text(dir_ / "tip");
    if (tip.substr(0, 64) != to_hex(chain.headers().hash_at(chain.tip())))
        throw Error(ErrorCode::BrokenChainLink, "tip anchor does not match the header store");
    return chain;
}

Wallet ChainStore::load_wallet(const ChainState& chain) const
{
    return Wallet::decode(read_file(dir_ / "wallet.bin"), chain.base_resolver(), params_);
}

void ChainStore::append(const Block& block, const ChainState& after) const
{
    if (after.tip() != block.header.height)
        throw Error(ErrorCode::InvalidArgument, "append expects the chain state right after the block");
    append_file(dir_ / "headers.bin", block.header.encode(params_));
    append_file(dir_ / "blocks.bin", encode_block(block, params_));
    write_file(dir_ / "stxo_cache.bin", after.cache().encode());
    write_text(dir_ / "tip", to_hex(after.headers().hash_at(after.tip())) + "\n");
}

void ChainStore::save_wallet(const Wallet& wallet) const { write_file(dir_ / "wallet.bin", wallet.encode(params_)); }

ChainStore::VerifyReport ChainStore::verify(unsigned workers) const
{
    VerifyReport report;
    try {
        const Bytes header_bytes_raw = read_file(dir_ / "headers.bin");
        const Bytes blocks_raw = read_file(dir_ / "blocks.bin");
        const std::size_t rec = header_bytes(params_);
        if (header_bytes_raw.empty() || header_bytes_raw.size() % rec)
            throw Error(ErrorCode::ParseError, "header store is not a whole number of records");
        const std::span<const std::uint8_t> stored(header_bytes_raw);

        ChainState replay(params_, cache_blocks_, workers);
        if (!std::ranges::equal(stored.first(rec), replay.tip_header().encode(params_)))
            throw Error(ErrorCode::BrokenChainLink, "stored genesis differs from the parameters' genesis");

        ByteReader in(blocks_raw);
        std::size_t count = 1;
        while (!in.done()) {
            Block block = decode_block(in, replay.base_resolver(), params_);
            if ((count + 1) * rec > stored.size())
                throw Error(ErrorCode::BrokenChainLink, "block archive is longer than the header store");
            if (!std::ranges::equal(stored.subspan(count * rec, rec), block.header.encode(params_)))
                throw Error(ErrorCode::BrokenChainLink,
                            "stored header at height " + std::to_string(count) + " differs from the archive");
            replay.apply_block(block);
            report.height = replay.tip();
            ++count;
        }
        if (count * rec != stored.size())
            throw Error(ErrorCode::BrokenChainLink, "header store is longer than the block archive");
        if (read_text(dir_ / "tip").substr(0, 64) != to_hex(replay.headers().hash_at(replay.tip())))
            throw Error(ErrorCode::BrokenChainLink, "tip anchor does not match the replayed chain");
        if (!(StxoCache::decode(read_file(dir_ / "stxo_cache.bin"), cache_blocks_) == replay.cache()))
            throw Error(ErrorCode::BrokenChainLink, "stored STXO cache differs from the replayed cache");
        report.ok = true;
    } catch (const Error& e) {
        report.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    return report;
}

} // namespace compactchain
