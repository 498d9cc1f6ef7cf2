#pragma once

#include <compactchain/rsa_group.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace compactchain::tools {

enum class Scheme { Compact, Boneh };
enum class BenchOp { Update, Verify, WitnessUpdate };

Scheme parse_scheme(std::string_view name);
BenchOp parse_op(std::string_view name);
std::string_view to_string(Scheme scheme);
std::string_view to_string(BenchOp op);

struct BenchOptions {
    Scheme scheme = Scheme::Compact;
    BenchOp op = BenchOp::Update;
    std::vector<std::uint32_t> m_values{100, 200, 400, 800};
    unsigned workers = 1;
    unsigned iterations = 10;
    std::uint64_t seed = 1;
};

struct BenchRow {
    Scheme scheme;
    std::uint32_t m;
    double seconds; // mean over iterations, warm-up excluded
    unsigned workers;
    std::string digest; // hex hash of the operation's output, for determinism checks
};

/// One block of m single-input, single-output transactions per point.
/// Fixtures are built outside the timed region.
std::vector<BenchRow> run_bench(const GroupParams& params, const BenchOptions& options);

/// Least-squares slope of log(seconds) against log(m).
double loglog_slope(const std::vector<BenchRow>& rows);

} // namespace compactchain::tools
