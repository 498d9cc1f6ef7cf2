#include <compactchain/error.hpp>
#include <compactchain/store.hpp>
#include <compactchain/workload.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include <unistd.h>

using namespace compactchain;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("cc_store_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

void flip(const fs::path& file, std::size_t offset)
{
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(static_cast<std::streamoff>(offset));
    char c = 0;
    f.read(&c, 1);
    c ^= 0x01;
    f.seekp(static_cast<std::streamoff>(offset));
    f.write(&c, 1);
}

// Builds `blocks` blocks into a new store and returns it.
ChainStore build(const fs::path& dir, int blocks, const GroupParams& params = oracle::dev(512))
{
    const ChainStore store = ChainStore::init(dir, params, 4);
    WorkloadConfig cfg;
    cfg.txs_per_block = 3;
    ChainHarness h(store.load_chain(), store.load_wallet(store.load_chain()), cfg);
    h.on_block([&](const Block& b) { store.append(b, h.chain()); });
    for (int i = 0; i < blocks; ++i)
        h.step();
    store.save_wallet(h.wallet());
    return store;
}

} // namespace

TEST(Store, InitLoadAndRefuseOverwrite)
{
    const fs::path dir = fresh_dir("init");
    const ChainStore s = ChainStore::init(dir, oracle::dev(512), 6);
    EXPECT_EQ(s.cache_blocks(), 6u);
    const ChainStore o = ChainStore::open(dir);
    EXPECT_EQ(o.params().modulus, oracle::dev(512).modulus);
    const ChainState c = o.load_chain();
    EXPECT_EQ(c.tip(), 0u);
    EXPECT_EQ(c.tip_header(), genesis(oracle::dev(512), 6).first);
    try {
        ChainStore::init(dir, oracle::dev(512), 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
    EXPECT_TRUE(o.verify().ok);
    fs::remove_all(dir);
}

TEST(Store, ReloadedStateMatchesLiveState)
{
    const fs::path dir = fresh_dir("reload");
    const ChainStore s = build(dir, 8);
    const ChainState c = s.load_chain();
    EXPECT_EQ(c.tip(), 8u);
    EXPECT_EQ(c.cache().bucket_count(), 4u);
    EXPECT_EQ(fs::file_size(dir / "headers.bin"), 9 * header_bytes(c.params()));
    const Wallet w = s.load_wallet(c);
    EXPECT_GT(w.unspent_count(), 0u);
    const auto report = s.verify();
    EXPECT_TRUE(report.ok) << report.error;
    EXPECT_EQ(report.height, 8u);
    fs::remove_all(dir);
}

TEST(Store, AnyHeaderByteFlipFailsVerification)
{
    const fs::path dir = fresh_dir("flip");
    // A 128-bit modulus keeps the per-flip replay cheap.
    const ChainStore s = build(dir, 3, setup_dev(128, 5));
    const std::size_t rec = header_bytes(s.params());
    const Bytes pristine = read_file(dir / "headers.bin");
    for (std::size_t off = 0; off < pristine.size(); ++off) {
        flip(dir / "headers.bin", off);
        ASSERT_FALSE(s.verify().ok) << "header " << off / rec << " byte " << off % rec;
        write_file(dir / "headers.bin", pristine);
    }
    EXPECT_TRUE(s.verify().ok);
    fs::remove_all(dir);
}

TEST(Store, TruncationAndAnchorTampering)
{
    const fs::path dir = fresh_dir("trunc");
    const ChainStore s = build(dir, 3);
    const Bytes headers = read_file(dir / "headers.bin");
    write_file(dir / "headers.bin", std::span(headers).first(headers.size() - header_bytes(s.params())));
    EXPECT_FALSE(s.verify().ok);
    write_file(dir / "headers.bin", headers);

    const Bytes tip = read_file(dir / "tip");
    Bytes bad_tip = tip;
    bad_tip[0] = bad_tip[0] == '0' ? '1' : '0';
    write_file(dir / "tip", bad_tip);
    EXPECT_FALSE(s.verify().ok);
    try {
        s.load_chain();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BrokenChainLink);
    }
    write_file(dir / "tip", tip);

    const Bytes cache = read_file(dir / "stxo_cache.bin");
    flip(dir / "stxo_cache.bin", cache.size() - 1);
    EXPECT_FALSE(s.verify().ok);
    write_file(dir / "stxo_cache.bin", cache);
    EXPECT_TRUE(s.verify().ok);
    fs::remove_all(dir);
}
