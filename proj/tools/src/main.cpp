#include <compactchain/error.hpp>
#include <compactchain/tools/commands.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace compactchain;
using namespace compactchain::tools;

namespace {

// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty())
            return;
        file_.open(path);
        if (!file_)
            throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void add_harness_flags(CLI::App* cmd, HarnessOptions& h)
{
    cmd->add_option("--blocks", h.blocks, "Blocks to build");
    cmd->add_option("--txs", h.txs_per_block, "Transactions per block");
    cmd->add_option("--inputs", h.inputs_per_tx, "Inputs per transaction");
    cmd->add_option("--outputs", h.outputs_per_tx, "Outputs per transaction");
    cmd->add_option("--seed", h.seed, "Workload seed");
    cmd->add_option("--workers", h.workers, "Worker threads")->check(CLI::Range(1u, 256u));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"CompactChain: stateless UTXO chain with dual RSA accumulators"};
    app.require_subcommand(1);
    std::string out_path;
    int status = 0;

    SetupOptions setup_o;
    std::string setup_out;
    auto* setup = app.add_subcommand("setup", "Write group parameters");
    setup->add_option("--bits", setup_o.bits, "Generate a development modulus of this size");
    setup->add_option("--seed", setup_o.seed, "Seed for the development modulus");
    setup->add_option("--modulus-file", setup_o.modulus_file, "Text file holding N (decimal or 0x-hex)");
    setup->add_option("--generator", setup_o.generator, "Generator (default: smallest square coprime to N)");
    setup->add_option("--prime-bits", setup_o.prime_bits, "Bit length of prime representatives");
    setup->add_option("--tag", setup_o.domain_tag, "Hash domain tag");
    setup->add_option("--out", setup_out, "Parameters file")->required();
    setup->callback([&] {
        setup_o.out = setup_out;
        cmd_setup(setup_o, std::cerr);
    });

    auto* chain = app.add_subcommand("chain", "Persistent header store");
    chain->require_subcommand(1);
    std::string dir, params_path;
    std::size_t cache_blocks = 6;
    auto* init = chain->add_subcommand("init", "Create a chain directory holding the genesis header");
    init->add_option("--dir", dir)->required();
    init->add_option("--params", params_path)->required();
    init->add_option("--cache", cache_blocks, "STXO cache depth M")->check(CLI::PositiveNumber);
    init->callback([&] { cmd_chain_init(dir, params_path, cache_blocks, std::cout); });

    HarnessOptions append_o;
    auto* append = chain->add_subcommand("append", "Mine synthetic blocks onto a stored chain");
    append->add_option("--dir", dir)->required();
    add_harness_flags(append, append_o);
    append->add_option("--out", out_path, "Per-block CSV");
    append->callback([&] {
        Output out(out_path);
        cmd_chain_append(dir, append_o, out.stream());
    });

    unsigned verify_workers = 1;
    auto* verify = chain->add_subcommand("verify", "Replay the archive and check every stored header");
    verify->add_option("--dir", dir)->required();
    verify->add_option("--workers", verify_workers)->check(CLI::Range(1u, 256u));
    verify->callback([&] {
        if (!cmd_chain_verify(dir, verify_workers, std::cout))
            status = 3;
    });

    auto* stats = chain->add_subcommand("stats", "Validator storage footprint");
    stats->add_option("--dir", dir)->required();
    stats->callback([&] { cmd_chain_stats(dir, std::cout); });

    auto* wallet = app.add_subcommand("wallet", "Wallet population");
    wallet->require_subcommand(1);
    SimulateOptions sim_o;
    std::string sim_params, sim_store, sim_attacks;
    auto* simulate = wallet->add_subcommand("simulate", "Build a chain with a simulated wallet population");
    simulate->add_option("--params", sim_params)->required();
    add_harness_flags(simulate, sim_o.harness);
    simulate->add_option("--cache", sim_o.cache_blocks, "STXO cache depth M")->check(CLI::PositiveNumber);
    simulate->add_option("--store", sim_store, "Persist the chain into this new directory");
    simulate->add_option("--double-spends", sim_o.double_spends, "Double-spend attempts to inject");
    simulate->add_option("--attacks-out", sim_attacks, "CSV of injected double-spends (default stderr)");
    simulate->add_option("--out", out_path, "Per-block CSV");
    simulate->callback([&] {
        sim_o.params = sim_params;
        if (!sim_store.empty())
            sim_o.store = sim_store;
        if (!sim_attacks.empty())
            sim_o.attacks_out = sim_attacks;
        Output out(out_path);
        if (!cmd_wallet_simulate(sim_o, out.stream(), std::cerr))
            status = 3;
    });

    BenchOptions bench_o;
    std::string scheme = "compact", op = "update", bench_params;
    auto* bench = app.add_subcommand("bench", "Commitment update / verification timing sweep");
    bench->add_option("--params", bench_params)->required();
    bench->add_option("--scheme", scheme)->check(CLI::IsMember({"compact", "boneh"}));
    bench->add_option("--op", op)->check(CLI::IsMember({"update", "verify", "witness-update"}));
    bench->add_option("--m", bench_o.m_values, "Transactions per block")->delimiter(',');
    bench->add_option("--workers", bench_o.workers)->check(CLI::Range(1u, 256u));
    bench->add_option("--iterations", bench_o.iterations)->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_o.seed);
    bench->add_option("--out", out_path);
    bench->callback([&] {
        bench_o.scheme = parse_scheme(scheme);
        bench_o.op = parse_op(op);
        Output out(out_path);
        cmd_bench(bench_params, bench_o, out.stream());
    });

    auto* net = app.add_subcommand("netsim", "Block propagation simulator");
    net->require_subcommand(1);
    NetsimRunOptions net_o;
    std::string net_config;
    auto net_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", net_config, "key=value file mirroring the network configuration");
        cmd->add_option("--scheme", net_o.scheme)->check(CLI::IsMember({"compact", "boneh", "minichain", "all"}));
        cmd->add_option("--seeds", net_o.seeds, "Consecutive seeds to run");
        cmd->add_option("--workers", net_o.workers)->check(CLI::Range(1u, 256u));
        cmd->add_option("--out", out_path);
    };
    auto* run = net->add_subcommand("run", "Propagation latency per seed and scheme");
    net_flags(run);
    run->callback([&] {
        if (!net_config.empty())
            net_o.config = net_config;
        Output out(out_path);
        cmd_netsim_run(net_o, out.stream());
    });
    std::uint32_t tx_per_block = 500;
    bool published = false;
    auto* tps = net->add_subcommand("tps", "Maximum throughput matrix");
    net_flags(tps);
    tps->add_option("--tx-per-block", tx_per_block);
    tps->add_flag("--published", published, "Use reported consensus latencies instead of simulating");
    tps->callback([&] {
        if (!net_config.empty())
            net_o.config = net_config;
        Output out(out_path);
        cmd_netsim_tps(net_o, tx_per_block, published, out.stream());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "error: ParseError: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what();
        if (e.index())
            std::cerr << " (index " << *e.index() << ')';
        std::cerr << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: IoError: " << e.what() << '\n';
        return 1;
    }
    return status;
}
