// permstat: two-sample tests, data simulation and benchmark runs from the shell.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permstat/permstat.hpp"

namespace {

using namespace permstat;
using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitShape = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::DegenerateVariance:
      return kExitShape;
    default:
      return kExitUsage;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
void write_file(const std::string& path, Fn&& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  body(out);
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing " + path);
}

struct TestArgs {
  std::string x_path, y_path;
  std::string statistic = "ed";
  std::string backend = "efficient";
  std::size_t permutations = 200;
  std::uint64_t seed = 0;
  std::string bandwidth = "median";
  std::string null_out;
  bool json = false;
  std::size_t threads = 0;
  CLI::Option* permutations_opt = nullptr;
};

std::optional<double> parse_bandwidth(const std::string& text) {
  if (text == "median") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::InvalidArgument, "--bandwidth must be 'median' or a positive number, got '" + text + "'");
  }
  return v;
}

int run_test(const TestArgs& a) {
  const StatisticKind kind = *parse_statistic_kind(a.statistic);
  const std::optional<double> fixed_bw = parse_bandwidth(a.bandwidth);
  const DataMatrix x = load_csv(a.x_path).data;
  const DataMatrix y = load_csv(a.y_path).data;
  if (x.cols() != y.cols()) {
    fail(ErrorCode::DimensionMismatch, a.x_path + " has " + std::to_string(x.cols()) + " columns but " +
                                           a.y_path + " has " + std::to_string(y.cols()));
  }

  ordered_json report;
  report["statistic"] = std::string(to_string(kind));
  report["backend"] = a.backend;
  report["n_x"] = x.rows();
  report["n_y"] = y.rows();
  report["p"] = x.cols();

  if (a.backend == "cross") {
    if (a.permutations_opt->count() > 0) {
      std::cerr << "warning: --permutations is ignored by the cross backend\n";
    }
    if (!a.null_out.empty()) std::cerr << "warning: --null-out is ignored by the cross backend\n";
    CrossTestResult r;
    if (kind == StatisticKind::EnergyDistance) {
      r = cross_ed_test(x, y);
    } else {
      const double bw = fixed_bw ? *fixed_bw : median_heuristic_bandwidth(x, y);
      r = cross_mmd_test(x, y, bw);
      report["bandwidth"] = bw;
    }
    report["u_hat"] = r.u_hat;
    report["sigma_hat"] = r.sigma_hat;
    report["z"] = r.z;
    report["p_value"] = r.p_value;
    report["elapsed_s"] = r.elapsed_seconds;
  } else {
    PermTestOptions opts;
    opts.statistic = kind;
    opts.bandwidth = fixed_bw;
    opts.threads = a.threads;
    const TestResult r =
        run_perm_test(*parse_perm_backend(a.backend), x, y, a.permutations, PermutationStream(a.seed), opts);
    if (!a.null_out.empty()) {
      write_file(a.null_out, [&](std::ostream& out) {
        out << "null\n";
        for (double v : r.null_sample) out << format_double(v) << '\n';
      });
    }
    if (kind == StatisticKind::MmdBiasedSquared) report["bandwidth"] = r.bandwidth;
    report["observed"] = r.observed;
    report["p_value"] = r.p_value;
    report["b"] = r.b;
    report["seed"] = a.seed;
    report["elapsed_s"] = r.elapsed_seconds;
  }

  if (a.json) {
    std::cout << report.dump() << '\n';
    return 0;
  }
  for (const auto& [key, value] : report.items()) {
    std::string text;
    if (value.is_number_float()) {
      text = format_double(value.get<double>());
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else {
      text = value.dump();
    }
    std::cout << key << ": " << text << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t j = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> out;
};

int run_simulate(const SimulateArgs& a) {
  const MeanShiftSpec spec{a.p, a.j, a.epsilon};
  validate(spec);
  const DataMatrix x = sample_gaussian(a.n, a.p, std::nullopt, derive_seed(a.seed, 0));
  const DataMatrix y = sample_gaussian(a.n, a.p, spec, derive_seed(a.seed, 1));
  save_csv(x, a.out[0]);
  save_csv(y, a.out[1]);
  std::cout << "x: " << a.n << " x " << a.p << " from N(0, I) -> " << a.out[0] << '\n';
  std::cout << "y: " << a.n << " x " << a.p << " from N(mu, I) -> " << a.out[1] << '\n';
  std::cout << "mu: coordinates 1.." << a.j << " = " << format_shortest(a.epsilon) << ", coordinates "
            << a.j + 1 << ".." << a.p << " = 0\n";
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out;
  std::string jsonl_out;
  std::size_t threads = 0;
  bool timing_isolated = false;
};

int run_bench(const BenchArgs& a) {
  const ExperimentConfig config = parse_experiment_config(read_file(a.config));
  const auto records = run_experiment(config, {a.threads, a.timing_isolated});
  write_file(a.out, [&](std::ostream& out) { write_records_csv(out, records); });
  if (!a.jsonl_out.empty()) {
    write_file(a.jsonl_out, [&](std::ostream& out) { write_records_jsonl(out, records); });
  }
  write_summary_table(std::cout, summarize(records, config.alpha, config.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permstat: energy-distance and MMD two-sample tests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PERMSTAT_VERSION_STRING));

  TestArgs t;
  auto* test = app.add_subcommand("test", "Two-sample test on two CSV files");
  test->add_option("x", t.x_path, "First sample, one row per observation")->required();
  test->add_option("y", t.y_path, "Second sample, same number of columns")->required();
  test->add_option("--statistic", t.statistic, "Test statistic")
      ->check(CLI::IsMember({"ed", "mmd"}))
      ->capture_default_str();
  test->add_option("--backend", t.backend, "Permutation strategy, or 'cross' for the split test")
      ->check(CLI::IsMember({"standard", "precomputed", "efficient", "cross"}))
      ->capture_default_str();
  t.permutations_opt = test->add_option("--permutations,-b", t.permutations, "Number of permutations")
                           ->check(CLI::PositiveNumber)
                           ->capture_default_str();
  test->add_option("--seed", t.seed, "Permutation seed")->capture_default_str();
  test->add_option("--bandwidth", t.bandwidth, "Gaussian kernel bandwidth: 'median' or a positive number")
      ->capture_default_str();
  test->add_option("--null-out", t.null_out, "Write the permutation null sample to this CSV file");
  test->add_flag("--json", t.json, "Print the report as one JSON object");
  test->add_option("--threads", t.threads, "Worker threads, 0 for all cores")
      ->envname("PERMSTAT_THREADS")
      ->capture_default_str();

  SimulateArgs s;
  auto* simulate = app.add_subcommand("simulate", "Draw x ~ N(0, I) and y ~ N(mu, I) samples");
  simulate->add_option("--n", s.n, "Rows per sample")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--p", s.p, "Columns")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--j", s.j, "Number of shifted mean coordinates")->capture_default_str();
  simulate->add_option("--epsilon", s.epsilon, "Shift applied to each of the first j coordinates")
      ->capture_default_str();
  simulate->add_option("--seed", s.seed, "Sampler seed")->capture_default_str();
  simulate->add_option("--out", s.out, "Output paths for x and y")->required()->expected(2);
  std::size_t simulate_threads = 0;
  simulate->add_option("--threads", simulate_threads, "Accepted for uniformity; sampling is serial")
      ->envname("PERMSTAT_THREADS");

  BenchArgs bch;
  auto* bench = app.add_subcommand("bench", "Run a timing or calibration experiment grid");
  bench->add_option("--config", bch.config, "Experiment config, JSON or key = value")->required();
  bench->add_option("--out", bch.out, "Records CSV output path")->required();
  bench->add_option("--jsonl-out", bch.jsonl_out, "Also write records as JSON lines");
  bench->add_option("--threads", bch.threads, "Worker threads, 0 for all cores")
      ->envname("PERMSTAT_THREADS")
      ->capture_default_str();
  bench->add_flag("--timing-isolated", bch.timing_isolated,
                  "Run one test at a time so timings do not overlap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*test) return run_test(t);
    if (*simulate) return run_simulate(s);
    return run_bench(bch);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
