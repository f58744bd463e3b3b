// End-to-end checks of the toolkit's headline properties. Prints one
// PASS/FAIL line per criterion and exits non-zero if any failed.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "permstat/permstat.hpp"
#include "run_cli.hpp"

using namespace permstat;
using V = std::vector<std::size_t>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

template <typename Fn>
double min_seconds(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

Outcome equivalence() {
  std::mt19937_64 meta(20240601);
  double worst = 0.0;
  int compared = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t nx = 2 + meta() % 11, ny = 2 + meta() % 11, p = 1 + meta() % 4, b = 1 + meta() % 50;
    const auto x = oracle::random_matrix(nx, p, meta());
    const auto y = oracle::random_matrix(ny, p, meta());
    const PermutationStream stream(meta());
    for (auto kind : {StatisticKind::EnergyDistance, StatisticKind::MmdBiasedSquared}) {
      PermTestOptions o;
      o.statistic = kind;
      const auto s = standard_perm_test(x, y, b, stream, o);
      const auto pc = precomputed_perm_test(x, y, b, stream, o);
      const auto e = efficient_perm_test(x, y, b, stream, o);
      auto rel = [](double a, double c) {
        const double scale = std::max(std::fabs(a), std::fabs(c));
        return scale == 0.0 ? 0.0 : std::fabs(a - c) / scale;
      };
      worst = std::max({worst, rel(s.observed, e.observed), rel(pc.observed, e.observed)});
      for (std::size_t k = 0; k < b; ++k) {
        worst = std::max({worst, rel(s.null_sample[k], e.null_sample[k]), rel(pc.null_sample[k], e.null_sample[k])});
        ++compared;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && secs < 60.0,
          fmt("%d null entries, worst relative gap %.3g, %.2f s", compared, worst, secs)};
}

Outcome golden_example() {
  const V draw{7, 4, 5, 6, 2};
  const auto s = permutation_indexes_from_draw(5, 4, draw);
  bool ok = s.i1 == V{4, 5, 2} && s.i2 == V{2, 1} && s.j1 == V{1, 3} && s.j2 == V{3, 4} &&
            s.i1s == V{1, 2, 3} && s.i2s == V{4, 5} && s.j1s == V{1, 2} && s.j2s == V{3, 4};
  PermutationStream stream(0);
  stream.force_draw(0, draw);
  ok = ok && permutation_indexes(5, 4, stream, 0) == s;

  const auto x = oracle::random_matrix(5, 3, 11);
  const auto y = oracle::random_matrix(4, 3, 12);
  const auto base = compute_base_matrices(x, y, StatisticKind::EnergyDistance, 0.0);
  PermutedMatrices eff;
  reconstruct_permuted_matrices(base, s, eff);
  const auto std_m = standard_permuted_matrices(x, y, draw, StatisticKind::EnergyDistance, 0.0);

  // Standard x* = (y2, x4, x5, y1, x2); block order is (x4, x5, x2, y2, y1).
  // Both orders of y* are (x1, x3, y3, y4).
  const std::array<std::size_t, 5> px{1, 2, 4, 0, 3};
  const std::array<std::size_t, 4> py{0, 1, 2, 3};
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t c = 0; c < 5; ++c) ok = ok && eff.xx(a, c) == std_m.xx(px[a], px[c]);
    for (std::size_t c = 0; c < 4; ++c) ok = ok && eff.xy(a, c) == std_m.xy(px[a], py[c]);
  }
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t c = 0; c < 4; ++c) ok = ok && eff.yy(a, c) == std_m.yy(py[a], py[c]);

  const double ed_eff = energy_statistic(eff.xy, eff.xx, eff.yy);
  const double ed_std = energy_statistic(std_m.xy, std_m.xx, std_m.yy);
  ok = ok && std::fabs(ed_eff - ed_std) <= 1e-12;
  return {ok, fmt("index sets exact, blocks match after reordering, ED* %.15g vs %.15g", ed_eff, ed_std)};
}

Outcome null_calibration() {
  ExperimentConfig c;
  c.kind = ExperimentKind::NullCalibration;
  c.grid = {{50, 50, 10, 0, 0.0}};
  c.backends = {BenchBackend::Efficient, BenchBackend::CrossED};
  c.b = 200;
  c.replications = 500;
  c.seed = 1;
  const auto records = run_experiment(c, {0, false});
  std::array<int, 2> rejected{};
  std::array<int, 10> bins{};
  for (const auto& r : records) {
    const int k = r.backend == BenchBackend::Efficient ? 0 : 1;
    if (r.p_value <= c.alpha) ++rejected[k];
    if (k == 0) ++bins[std::min(9, static_cast<int>(r.p_value * 10.0))];
  }
  const double perm_rate = rejected[0] / 500.0, cross_rate = rejected[1] / 500.0;
  bool ok = perm_rate >= 0.02 && perm_rate <= 0.09 && cross_rate >= 0.02 && cross_rate <= 0.09;
  std::string hist;
  for (int b : bins) {
    ok = ok && std::abs(b - 50) <= 30;
    hist += (hist.empty() ? "" : " ") + std::to_string(b);
  }
  return {ok, fmt("rejection perm %.3f, cross-ed %.3f; perm deciles [%s]", perm_rate, cross_rate, hist.c_str())};
}

Outcome power_ordering() {
  ExperimentConfig c;
  c.kind = ExperimentKind::PowerCurve;
  c.grid = {{100, 100, 50, 5, 0.4}};
  c.backends = {BenchBackend::Efficient, BenchBackend::CrossED};
  c.b = 200;
  c.replications = 200;
  c.seed = 2;
  const auto rows = summarize(run_experiment(c, {0, false}), c.alpha);
  const double perm = rows[0].power, cross = rows[1].power;
  return {perm - cross >= -0.03 && perm >= 0.5, fmt("power perm %.3f, cross-ed %.3f", perm, cross)};
}

Outcome timing_ordering() {
  const auto x = sample_gaussian(200, 500, std::nullopt, 31);
  const auto y = sample_gaussian(200, 500, std::nullopt, 32);
  const PermutationStream stream(3);
  const std::size_t b = 200;
  const double t_std = min_seconds(2, [&] { standard_perm_test(x, y, b, stream); });
  double t_pre = 1e300, t_eff = 1e300, t_cross = 1e300;
  for (int r = 0; r < 7; ++r) {
    t_pre = std::min(t_pre, min_seconds(1, [&] { precomputed_perm_test(x, y, b, stream); }));
    t_eff = std::min(t_eff, min_seconds(1, [&] { efficient_perm_test(x, y, b, stream); }));
    t_cross = std::min(t_cross, min_seconds(1, [&] { cross_ed_test(x, y); }));
  }
  const bool ok = t_eff <= 0.25 * t_std && t_eff <= 1.1 * t_pre && t_cross <= t_eff;
  return {ok, fmt("standard %.3f s, precomputed %.3f s, efficient %.3f s, cross-ed %.4f s", t_std, t_pre, t_eff,
                  t_cross)};
}

Outcome scaling() {
  // Small and large sizes alternate so drift in machine load hits both.
  auto ratio = [](std::size_t n1, std::size_t p1, std::size_t n2, std::size_t p2) {
    const auto a = oracle::random_matrix(n1, p1, 1), b = oracle::random_matrix(n1, p1, 2);
    const auto c = oracle::random_matrix(n2, p2, 3), d = oracle::random_matrix(n2, p2, 4);
    double small = 1e300, large = 1e300;
    for (int r = 0; r < 15; ++r) {
      small = std::min(small, min_seconds(1, [&] { euclidean_distance_matrix(a, b); }));
      large = std::min(large, min_seconds(1, [&] { euclidean_distance_matrix(c, d); }));
    }
    return large / small;
  };
  const double n_ratio = ratio(400, 64, 800, 64);
  const double p_ratio = ratio(300, 200, 300, 400);
  const bool ok = n_ratio >= 2.5 && n_ratio <= 6.0 && p_ratio >= 1.4 && p_ratio <= 3.0;
  return {ok, fmt("doubling n: x%.2f, doubling p: x%.2f", n_ratio, p_ratio)};
}

Outcome brute_force() {
  std::mt19937_64 meta(77);
  double worst = 0.0;
  auto rel = [](double a, double c) {
    const double scale = std::max(std::fabs(a), std::fabs(c));
    return scale == 0.0 ? 0.0 : std::fabs(a - c) / scale;
  };
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t nx = 4 + meta() % 9, ny = 4 + meta() % 9, p = 1 + meta() % 5;
    const auto x = oracle::random_matrix(nx, p, meta());
    const auto y = oracle::random_matrix(ny, p, meta(), -1.0, 3.0);
    const double bw = 0.5 + static_cast<double>(meta() % 100) / 50.0;

    const double ed = energy_statistic(euclidean_distance_matrix(x, y), euclidean_distance_matrix(x, x),
                                       euclidean_distance_matrix(y, y));
    const double mmd = mmd_biased_statistic(gaussian_kernel_matrix(x, x, bw), gaussian_kernel_matrix(y, y, bw),
                                            gaussian_kernel_matrix(x, y, bw));
    worst = std::max({worst, rel(ed, oracle::energy(x, y)), rel(mmd, oracle::mmd_biased(x, y, bw)),
                      rel(cross_ed_test(x, y).u_hat, oracle::cross_ed_u(x, y))});
  }
  return {worst <= 1e-10, fmt("50 instances, worst relative gap %.3g", worst)};
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path tmp = fs::path(PERMSTAT_ACCEPTANCE_TMP);
  fs::create_directories(tmp);
  const std::string bin = PERMSTAT_CLI_PATH;
  auto p = [&](const char* name) { return (tmp / name).string(); };
  auto run = [&](const std::string& args, const std::string& env = "") {
    return cli::run(bin, args, tmp / "io", env);
  };

  bool ok = true;
  int compared = 0;
  // simulate
  for (const char* threads : {"1", "4"}) {
    const auto r = run(std::string("simulate --n 60 --p 4 --j 2 --epsilon 0.5 --seed 21 --threads ") + threads +
                       " --out " + p(threads[0] == '1' ? "x1.csv" : "x4.csv") + " " +
                       p(threads[0] == '1' ? "y1.csv" : "y4.csv"));
    ok = ok && r.status == 0;
  }
  ok = ok && cli::slurp(tmp / "x1.csv") == cli::slurp(tmp / "x4.csv") &&
       cli::slurp(tmp / "y1.csv") == cli::slurp(tmp / "y4.csv");
  ++compared;

  // test, every backend and statistic
  for (const char* backend : {"standard", "precomputed", "efficient", "cross"}) {
    for (const char* stat : {"ed", "mmd"}) {
      const std::string args = "test " + p("x1.csv") + " " + p("y1.csv") + " --seed 5 -b 100 --statistic " + stat +
                               " --backend " + backend;
      const bool perm = std::string(backend) != "cross";
      const auto one = run(args + " --threads 1" + (perm ? " --null-out " + p("n1.csv") : ""));
      const std::string null_one = perm ? cli::slurp(tmp / "n1.csv") : "";
      const auto four = run(args + " --threads 4" + (perm ? " --null-out " + p("n4.csv") : ""));
      const std::string null_four = perm ? cli::slurp(tmp / "n4.csv") : "";
      const auto env = run(args, "PERMSTAT_THREADS=3");
      ok = ok && one.status == 0 && four.status == 0 && env.status == 0;
      ok = ok && cli::without_timing(one.out) == cli::without_timing(four.out) &&
           cli::without_timing(one.out) == cli::without_timing(env.out) && null_one == null_four;
      ++compared;
    }
  }

  // bench: compare every column except elapsed_s
  const auto cfg = tmp / "bench.cfg";
  {
    std::ofstream out(cfg);
    out << "kind = PowerCurve\ngrid = 20,20,3,1,0.5; 16,24,3,3,0.8\nb = 40\nreplications = 6\n"
           "backends = standard, efficient, cross-ed\nstatistic = ed\nseed = 13\n";
  }
  auto strip_elapsed = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, kept;
    while (std::getline(in, line)) {
      // elapsed_s is the second to last column
      const auto last = line.rfind(',');
      const auto before = line.rfind(',', last - 1);
      kept += line.substr(0, before) + line.substr(last) + '\n';
    }
    return kept;
  };
  const auto b1 = run("bench --config " + cfg.string() + " --out " + p("r1.csv") + " --threads 1");
  const auto b4 = run("bench --config " + cfg.string() + " --out " + p("r4.csv") + " --threads 4");
  const auto bi = run("bench --config " + cfg.string() + " --out " + p("ri.csv") + " --threads 2 --timing-isolated");
  ok = ok && b1.status == 0 && b4.status == 0 && bi.status == 0;
  const std::string r1 = strip_elapsed(cli::slurp(tmp / "r1.csv"));
  ok = ok && !r1.empty() && r1 == strip_elapsed(cli::slurp(tmp / "r4.csv")) &&
       r1 == strip_elapsed(cli::slurp(tmp / "ri.csv"));
  ++compared;

  return {ok, fmt("%d invocation groups compared across thread counts", compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 back-end equivalence", equivalence},
      {"2 worked index-mapping example", golden_example},
      {"3 null calibration", null_calibration},
      {"4 power ordering", power_ordering},
      {"5 timing ordering", timing_ordering},
      {"6 scaling shapes", scaling},
      {"7 brute-force statistic oracles", brute_force},
      {"8 CLI determinism across threads", cli_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
