#include <compactchain/error.hpp>
#include <compactchain/netsim.hpp>
#include <compactchain/store.hpp>
#include <compactchain/tools/commands.hpp>
#include <compactchain/workload.hpp>

#include <array>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace compactchain::tools {
namespace fs = std::filesystem;

namespace {

BigInt parse_integer(std::string text, const std::string& what)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.pop_back();
    std::size_t start = text.find_first_not_of(" \t\r\n");
    if (start == std::string::npos)
        throw Error(ErrorCode::ParseError, what + " is empty");
    text = text.substr(start);
    int base = 10;
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) {
        text = text.substr(2);
        base = 16;
    }
    BigInt v;
    if (text.empty() || v.set_str(text, base) != 0)
        throw Error(ErrorCode::ParseError, what + " is not an integer");
    return v;
}

std::string read_text(const fs::path& path)
{
    Bytes b = read_file(path);
    return std::string(b.begin(), b.end());
}

GroupParams load_params(const fs::path& path) { return parse_params(read_file(path)); }

WorkloadConfig workload(const HarnessOptions& o)
{
    WorkloadConfig w;
    w.txs_per_block = o.txs_per_block;
    w.inputs_per_tx = o.inputs_per_tx;
    w.outputs_per_tx = o.outputs_per_tx;
    w.seed = o.seed;
    w.workers = o.workers;
    return w;
}

void stats_header(std::ostream& out) { out << "height,update_seconds,verify_seconds,block_bytes,proof_bytes\n"; }

void stats_row(std::ostream& out, const BlockStats& s)
{
    out << s.height << ',' << std::setprecision(6) << std::fixed << s.update_seconds << ',' << s.verify_seconds << ','
        << std::defaultfloat << s.block_bytes << ',' << s.proof_bytes << '\n';
}

// Runs `blocks` harness steps; the store, if any, receives each accepted block.
void run_blocks(ChainHarness& harness, std::uint32_t blocks, const ChainStore* store, std::ostream& out,
                const std::function<void(std::uint32_t)>& after_block = {})
{
    if (store)
        harness.on_block([&](const Block& b) { store->append(b, harness.chain()); });
    for (std::uint32_t i = 0; i < blocks; ++i) {
        BlockStats s;
        try {
            s = harness.step();
        } catch (const Error& e) {
            throw Error(e.code(), "block " + std::to_string(harness.chain().tip() + 1) + ": " + e.what(), e.index());
        }
        stats_row(out, s);
        if (after_block)
            after_block(i);
    }
}

// Every unspent coin must carry witnesses valid against the current tip.
std::size_t stale_witnesses(const ChainState& chain, const Wallet& wallet)
{
    const BlockHeader& tip = chain.tip_header();
    std::size_t bad = 0;
    for (const auto& c : wallet.coins()) {
        if (c.spent)
            continue;
        const bool ok = c.witness.witness_height == chain.tip() &&
                        verify_mem_witness(c.witness.mem, c.prime, tip.txo_c, chain.params()) &&
                        verify_nonmem_witness(c.witness.nonmem, c.prime, tip.stxo_c, chain.params());
        bad += ok ? 0 : 1;
    }
    return bad;
}

struct NetsimPlan {
    netsim::NetConfig base;
    std::vector<std::string> schemes;
    std::uint32_t seeds = 1;
};

NetsimPlan plan_netsim(const NetsimRunOptions& o)
{
    NetsimPlan plan;
    std::map<std::string, std::string> extras;
    if (o.config)
        plan.base = netsim::parse_config(read_text(*o.config), &extras);
    for (const auto& [key, value] : extras)
        if (key != "scheme" && key != "seeds")
            throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    std::string scheme = o.scheme.value_or(extras.count("scheme") ? extras["scheme"] : "all");
    if (scheme == "all") {
        for (const auto& p : netsim::published_profiles())
            plan.schemes.push_back(p.name);
    } else {
        netsim::profile(scheme);
        plan.schemes.push_back(scheme);
    }
    if (o.seeds) {
        plan.seeds = *o.seeds;
    } else if (extras.count("seeds")) {
        try {
            plan.seeds = static_cast<std::uint32_t>(std::stoul(extras["seeds"]));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad value for seeds");
        }
    }
    if (plan.seeds == 0)
        throw Error(ErrorCode::InvalidArgument, "seeds must be >= 1");
    plan.base.validate();
    return plan;
}

struct NetsimSample {
    std::uint64_t seed;
    std::string scheme;
    std::uint64_t payload_bytes;
    double consensus;
    double full;
};

std::vector<NetsimSample> run_netsim(const NetsimPlan& plan, unsigned workers)
{
    auto one_seed = [&plan](std::uint64_t seed) {
        netsim::NetConfig cfg = plan.base;
        cfg.rng_seed = seed;
        const netsim::Topology topo = netsim::build_network(cfg);
        std::vector<NetsimSample> out;
        for (const auto& name : plan.schemes) {
            const netsim::NetConfig c = netsim::apply_profile(cfg, netsim::profile(name));
            const auto r = netsim::simulate_propagation(topo, c);
            out.push_back({seed, name, c.payload_bytes(), r.consensus_latency, r.full_coverage_latency});
        }
        return out;
    };
    std::vector<std::future<std::vector<NetsimSample>>> jobs;
    std::vector<NetsimSample> samples;
    for (std::uint32_t i = 0; i < plan.seeds; ++i) {
        const std::uint64_t seed = plan.base.rng_seed + i;
        if (workers > 1) {
            jobs.push_back(std::async(std::launch::async, one_seed, seed));
            if (jobs.size() < workers && i + 1 < plan.seeds)
                continue;
            for (auto& j : jobs)
                for (auto& s : j.get())
                    samples.push_back(std::move(s));
            jobs.clear();
        } else {
            for (auto& s : one_seed(seed))
                samples.push_back(std::move(s));
        }
    }
    return samples;
}

} // namespace

void cmd_setup(const SetupOptions& o, std::ostream& err)
{
    if (o.bits.has_value() == o.modulus_file.has_value())
        throw Error(ErrorCode::InvalidArgument, "give exactly one of --bits or --modulus-file");
    GroupParams params;
    if (o.bits) {
        params = setup_dev(*o.bits, o.seed, o.prime_bits, o.domain_tag);
        err << "warning: development modulus; its factors were known to this process, so it is not trapdoorless\n";
    } else {
        const BigInt n = parse_integer(read_text(*o.modulus_file), "modulus file");
        std::optional<BigInt> g;
        if (o.generator)
            g = parse_integer(*o.generator, "generator");
        params = setup(n, g, o.prime_bits, o.domain_tag);
    }
    write_file(o.out, serialize_params(params));
}

void cmd_chain_init(const fs::path& dir, const fs::path& params, std::size_t cache_blocks, std::ostream& out)
{
    const ChainStore store = ChainStore::init(dir, load_params(params), cache_blocks);
    out << "height,tip\n0," << to_hex(store.load_chain().headers().hash_at(0)) << '\n';
}

void cmd_chain_append(const fs::path& dir, const HarnessOptions& o, std::ostream& out)
{
    const ChainStore store = ChainStore::open(dir);
    ChainState chain = store.load_chain(o.workers);
    Wallet wallet = store.load_wallet(chain);
    ChainHarness harness(std::move(chain), std::move(wallet), workload(o));
    stats_header(out);
    run_blocks(harness, o.blocks, &store, out, [&](std::uint32_t) { store.save_wallet(harness.wallet()); });
}

bool cmd_chain_verify(const fs::path& dir, unsigned workers, std::ostream& out)
{
    const auto report = ChainStore::open(dir).verify(workers);
    out << "status,height,error\n"
        << (report.ok ? "ok" : "fail") << ',' << report.height << ',' << report.error << '\n';
    return report.ok;
}

void cmd_chain_stats(const fs::path& dir, std::ostream& out)
{
    const ChainStore store = ChainStore::open(dir);
    const ChainState chain = store.load_chain();
    const Wallet wallet = store.load_wallet(chain);
    const auto& p = chain.params();
    out << "height,modulus_bits,cache_blocks,header_bytes,header_store_bytes,cache_buckets,cache_primes,"
           "cache_bytes,wallet_coins,wallet_unspent,tip\n"
        << chain.tip() << ',' << p.modulus_bits() << ',' << store.cache_blocks() << ',' << header_bytes(p) << ','
        << fs::file_size(dir / "headers.bin") << ',' << chain.cache().bucket_count() << ','
        << chain.cache().prime_count() << ',' << chain.cache().encode().size() << ',' << wallet.coins().size() << ','
        << wallet.unspent_count() << ',' << to_hex(chain.headers().hash_at(chain.tip())) << '\n';
}

bool cmd_wallet_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err)
{
    std::optional<ChainStore> store;
    std::optional<ChainHarness> harness;
    if (o.store) {
        store = ChainStore::init(*o.store, load_params(o.params), o.cache_blocks);
        harness.emplace(store->load_chain(o.harness.workers), Wallet{}, workload(o.harness));
    } else {
        harness.emplace(load_params(o.params), o.cache_blocks, workload(o.harness));
    }

    // Attacks are spread over the second half of the run, cycling through the kinds.
    std::vector<AttackOutcome> outcomes;
    std::uint32_t pending = o.double_spends;
    const std::array kinds{AttackKind::InWindowReplay, AttackKind::StaleWitness, AttackKind::ForgedCreationHeight};
    std::size_t next_kind = 0;
    auto inject = [&](std::uint32_t i) {
        const std::uint32_t remaining_blocks = o.harness.blocks - i - 1;
        if (pending == 0 || i + 1 < o.harness.blocks / 2)
            return;
        std::uint32_t now = remaining_blocks == 0 ? pending : (pending + remaining_blocks) / (remaining_blocks + 1);
        for (std::uint32_t tries = 0; now > 0 && tries < 3 * kinds.size(); ++tries) {
            auto r = harness->attempt(kinds[next_kind]);
            next_kind = (next_kind + 1) % kinds.size();
            if (!r)
                continue;
            outcomes.push_back(*r);
            --now;
            --pending;
        }
    };

    stats_header(out);
    run_blocks(*harness, o.harness.blocks, store ? &*store : nullptr, out, inject);
    if (store)
        store->save_wallet(harness->wallet());

    std::ofstream attacks_file;
    std::ostream* attacks = &err;
    if (o.attacks_out) {
        attacks_file.open(*o.attacks_out);
        if (!attacks_file)
            throw Error(ErrorCode::IoError, "cannot write " + o.attacks_out->string());
        attacks = &attacks_file;
    }
    *attacks << "kind,rejected_by_validation,rejected_in_block,reason\n";
    bool ok = true;
    for (const auto& a : outcomes) {
        *attacks << to_string(a.kind) << ',' << a.rejected_by_validation << ',' << a.rejected_in_block << ','
                 << a.reason << '\n';
        ok = ok && a.rejected_by_validation && a.rejected_in_block;
    }
    if (outcomes.size() < o.double_spends) {
        err << "error: InvalidArgument: only " << outcomes.size() << " of " << o.double_spends
            << " double-spends could be staged\n";
        ok = false;
    }
    const std::size_t bad = stale_witnesses(harness->chain(), harness->wallet());
    if (bad != 0) {
        err << "error: WitnessInvalid: " << bad << " surviving witnesses fail at tip\n";
        ok = false;
    }
    return ok;
}

void cmd_bench(const fs::path& params, const BenchOptions& o, std::ostream& out)
{
    const auto rows = run_bench(load_params(params), o);
    out << "scheme,m,seconds,workers\n";
    for (const auto& r : rows)
        out << to_string(r.scheme) << ',' << r.m << ',' << std::setprecision(9) << r.seconds << ',' << r.workers
            << '\n';
}

void cmd_netsim_run(const NetsimRunOptions& o, std::ostream& out)
{
    const NetsimPlan plan = plan_netsim(o);
    out << "seed,scheme,payload_bytes,consensus_latency_s,full_coverage_s\n";
    for (const auto& s : run_netsim(plan, o.workers))
        out << s.seed << ',' << s.scheme << ',' << s.payload_bytes << ',' << std::setprecision(9) << s.consensus
            << ',' << s.full << '\n';
}

void cmd_netsim_tps(const NetsimRunOptions& o, std::uint32_t tx_per_block, bool published, std::ostream& out)
{
    if (tx_per_block == 0)
        throw Error(ErrorCode::InvalidArgument, "tx-per-block must be >= 1");
    NetsimPlan plan = plan_netsim(o);
    std::map<std::string, double> consensus;
    if (published) {
        for (const auto& name : plan.schemes)
            consensus[name] = netsim::profile(name).consensus_latency;
    } else {
        std::map<std::string, int> n;
        for (const auto& s : run_netsim(plan, o.workers)) {
            consensus[s.scheme] += s.consensus;
            ++n[s.scheme];
        }
        for (auto& [name, v] : consensus)
            v /= n[name];
    }
    out << "scheme,tx_verif_s,commit_update_s,consensus_s,tps_verif,tps_update,tps_consensus,max_tps\n";
    for (const auto& name : plan.schemes) {
        const auto& p = netsim::profile(name);
        const double c = consensus[name];
        out << name << ',' << std::setprecision(6) << p.tx_verif_latency << ',' << p.commit_update_latency << ','
            << c << ',' << tx_per_block / p.tx_verif_latency << ',' << tx_per_block / p.commit_update_latency << ','
            << tx_per_block / c << ',' << netsim::max_tps(p.tx_verif_latency, p.commit_update_latency, c, tx_per_block)
            << '\n';
    }
}

} // namespace compactchain::tools
