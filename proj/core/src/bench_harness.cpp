#include "permstat/bench_harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <string>

#include "json.hpp"
#include "permstat/cross_tests.hpp"
#include "permstat/data_io.hpp"
#include "permstat/error.hpp"
#include "permstat/kernels.hpp"
#include "permstat/parallel.hpp"
#include "permstat/perm_engine.hpp"
#include "permstat/random.hpp"
#include "permstat/summation.hpp"

namespace permstat {

namespace {

std::string normalize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  fail(ErrorCode::InvalidArgument, "config field '" + field + "': " + message);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::TimingVsN: return "TimingVsN";
    case ExperimentKind::TimingVsP: return "TimingVsP";
    case ExperimentKind::NullCalibration: return "NullCalibration";
    case ExperimentKind::PowerCurve: return "PowerCurve";
  }
  return "unknown";
}

std::string_view to_string(BenchBackend backend) noexcept {
  switch (backend) {
    case BenchBackend::Standard: return "standard";
    case BenchBackend::Precomputed: return "precomputed";
    case BenchBackend::Efficient: return "efficient";
    case BenchBackend::CrossED: return "cross-ed";
    case BenchBackend::CrossMMD: return "cross-mmd";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept {
  const std::string n = normalize_name(name);
  if (n == "timingvsn") return ExperimentKind::TimingVsN;
  if (n == "timingvsp") return ExperimentKind::TimingVsP;
  if (n == "nullcalibration") return ExperimentKind::NullCalibration;
  if (n == "powercurve") return ExperimentKind::PowerCurve;
  return std::nullopt;
}

std::optional<BenchBackend> parse_bench_backend(std::string_view name) noexcept {
  const std::string n = normalize_name(name);
  if (n == "standard") return BenchBackend::Standard;
  if (n == "precomputed") return BenchBackend::Precomputed;
  if (n == "efficient") return BenchBackend::Efficient;
  if (n == "crossed") return BenchBackend::CrossED;
  if (n == "crossmmd") return BenchBackend::CrossMMD;
  return std::nullopt;
}

void validate(const ExperimentConfig& config) {
  if (config.grid.empty()) field_error("grid", "must contain at least one point");
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const GridPoint& pt = config.grid[g];
    const std::string field = "grid[" + std::to_string(g) + "]";
    if (pt.n_x == 0 || pt.n_y == 0 || pt.p == 0) field_error(field, "n_x, n_y and p must be >= 1");
    if (pt.j > pt.p) field_error(field, "j must not exceed p");
    if (!std::isfinite(pt.epsilon)) field_error(field, "epsilon must be finite");
  }
  if (config.b == 0) field_error("b", "must be >= 1");
  if (config.replications == 0) field_error("replications", "must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) field_error("alpha", "must lie in (0, 1)");
  if (config.backends.empty()) field_error("backends", "must list at least one backend");
  for (BenchBackend backend : config.backends) {
    const bool is_cross = backend == BenchBackend::CrossED || backend == BenchBackend::CrossMMD;
    if (backend == BenchBackend::CrossED && config.statistic != StatisticKind::EnergyDistance) {
      field_error("backends", "cross-ed is incompatible with statistic 'mmd'");
    }
    if (backend == BenchBackend::CrossMMD && config.statistic != StatisticKind::MmdBiasedSquared) {
      field_error("backends", "cross-mmd is incompatible with statistic 'ed'");
    }
    if (is_cross) {
      for (const GridPoint& pt : config.grid) {
        if (pt.n_x < 4 || pt.n_y < 4) {
          field_error("grid", "cross backends need n_x >= 4 and n_y >= 4");
        }
      }
    }
  }
}

namespace {

template <typename Int>
Int parse_integer(std::string_view text, const std::string& field) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    field_error(field, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, const std::string& field) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    field_error(field, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto at = s.find(sep, start);
    parts.push_back(trim(s.substr(start, at == std::string_view::npos ? s.npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

ExperimentKind kind_from(std::string_view name) {
  auto k = parse_experiment_kind(name);
  if (!k) field_error("kind", "unknown experiment kind '" + std::string(name) + "'");
  return *k;
}

BenchBackend backend_from(std::string_view name, const std::string& field) {
  auto b = parse_bench_backend(name);
  if (!b) field_error(field, "unknown backend '" + std::string(name) + "'");
  return *b;
}

StatisticKind statistic_from(std::string_view name) {
  auto s = parse_statistic_kind(name);
  if (!s) field_error("statistic", "unknown statistic '" + std::string(name) + "'");
  return *s;
}

using nlohmann::json;

template <typename Int>
Int json_integer(const json& v, const std::string& field) {
  if (!v.is_number_unsigned()) {
    field_error(field, "expected a non-negative integer");
  }
  return v.get<Int>();
}

double json_real(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

std::string json_string(const json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, "expected a string");
  return v.get<std::string>();
}

GridPoint json_grid_point(const json& v, const std::string& field) {
  GridPoint pt;
  if (v.is_array()) {
    if (v.size() != 5) field_error(field, "expected [n_x, n_y, p, j, epsilon]");
    pt.n_x = json_integer<std::size_t>(v[0], field + ".n_x");
    pt.n_y = json_integer<std::size_t>(v[1], field + ".n_y");
    pt.p = json_integer<std::size_t>(v[2], field + ".p");
    pt.j = json_integer<std::size_t>(v[3], field + ".j");
    pt.epsilon = json_real(v[4], field + ".epsilon");
    return pt;
  }
  if (!v.is_object()) field_error(field, "expected an object or a 5-element array");
  for (const auto& [key, value] : v.items()) {
    const std::string sub = field + "." + key;
    if (key == "n_x") pt.n_x = json_integer<std::size_t>(value, sub);
    else if (key == "n_y") pt.n_y = json_integer<std::size_t>(value, sub);
    else if (key == "p") pt.p = json_integer<std::size_t>(value, sub);
    else if (key == "j") pt.j = json_integer<std::size_t>(value, sub);
    else if (key == "epsilon") pt.epsilon = json_real(value, sub);
    else field_error(sub, "unknown field");
  }
  return pt;
}

ExperimentConfig parse_json_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Parse, "config must be a JSON object");

  ExperimentConfig config;
  bool has_kind = false, has_grid = false, has_backends = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "kind") {
      config.kind = kind_from(json_string(value, key));
      has_kind = true;
    } else if (key == "grid") {
      if (!value.is_array()) field_error(key, "expected an array of grid points");
      for (std::size_t g = 0; g < value.size(); ++g) {
        config.grid.push_back(json_grid_point(value[g], "grid[" + std::to_string(g) + "]"));
      }
      has_grid = true;
    } else if (key == "b") {
      config.b = json_integer<std::size_t>(value, key);
    } else if (key == "replications") {
      config.replications = json_integer<std::size_t>(value, key);
    } else if (key == "backends") {
      if (!value.is_array()) field_error(key, "expected an array of backend names");
      for (std::size_t k = 0; k < value.size(); ++k) {
        const std::string field = "backends[" + std::to_string(k) + "]";
        config.backends.push_back(backend_from(json_string(value[k], field), field));
      }
      has_backends = true;
    } else if (key == "seed") {
      config.seed = json_integer<std::uint64_t>(value, key);
    } else if (key == "alpha") {
      config.alpha = json_real(value, key);
    } else if (key == "statistic") {
      config.statistic = statistic_from(json_string(value, key));
    } else {
      field_error(key, "unknown field");
    }
  }
  if (!has_kind) field_error("kind", "missing");
  if (!has_grid) field_error("grid", "missing");
  if (!has_backends) field_error("backends", "missing");
  return config;
}

ExperimentConfig parse_key_value_config(std::string_view text) {
  ExperimentConfig config;
  bool has_kind = false, has_grid = false, has_backends = false;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = unquote(line.substr(eq + 1));

    if (key == "kind") {
      config.kind = kind_from(value);
      has_kind = true;
    } else if (key == "grid") {
      for (std::string_view point : split(value, ';')) {
        if (point.empty()) continue;
        const std::string field = "grid[" + std::to_string(config.grid.size()) + "]";
        const auto parts = split(point, ',');
        if (parts.size() != 5) field_error(field, "expected n_x,n_y,p,j,epsilon");
        config.grid.push_back({parse_integer<std::size_t>(parts[0], field + ".n_x"),
                               parse_integer<std::size_t>(parts[1], field + ".n_y"),
                               parse_integer<std::size_t>(parts[2], field + ".p"),
                               parse_integer<std::size_t>(parts[3], field + ".j"),
                               parse_real(parts[4], field + ".epsilon")});
      }
      has_grid = true;
    } else if (key == "b") {
      config.b = parse_integer<std::size_t>(value, key);
    } else if (key == "replications") {
      config.replications = parse_integer<std::size_t>(value, key);
    } else if (key == "backends") {
      for (std::string_view name : split(value, ',')) {
        const std::string field = "backends[" + std::to_string(config.backends.size()) + "]";
        config.backends.push_back(backend_from(unquote(name), field));
      }
      has_backends = true;
    } else if (key == "seed") {
      config.seed = parse_integer<std::uint64_t>(value, key);
    } else if (key == "alpha") {
      config.alpha = parse_real(value, key);
    } else if (key == "statistic") {
      config.statistic = statistic_from(value);
    } else {
      field_error(key, "unknown field");
    }
  }
  if (!has_kind) field_error("kind", "missing");
  if (!has_grid) field_error("grid", "missing");
  if (!has_backends) field_error("backends", "missing");
  return config;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  const std::string_view body = trim(text);
  ExperimentConfig config =
      body.starts_with('{') ? parse_json_config(body) : parse_key_value_config(body);
  validate(config);
  return config;
}

namespace {

using Clock = std::chrono::steady_clock;

double run_backend(BenchBackend backend, const DataMatrix& x, const DataMatrix& y,
                   const ExperimentConfig& config, const PermutationStream& stream,
                   std::size_t perm_threads, double& elapsed) {
  const auto start = Clock::now();
  double p = 1.0;
  switch (backend) {
    case BenchBackend::Standard:
    case BenchBackend::Precomputed:
    case BenchBackend::Efficient: {
      PermTestOptions opts;
      opts.statistic = config.statistic;
      opts.threads = perm_threads;
      const PermBackend pb = backend == BenchBackend::Standard      ? PermBackend::Standard
                             : backend == BenchBackend::Precomputed ? PermBackend::Precomputed
                                                                    : PermBackend::Efficient;
      p = run_perm_test(pb, x, y, config.b, stream, opts).p_value;
      break;
    }
    case BenchBackend::CrossED:
      p = cross_ed_test(x, y).p_value;
      break;
    case BenchBackend::CrossMMD:
      p = cross_mmd_test(x, y, median_heuristic_bandwidth(x, y)).p_value;
      break;
  }
  elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  return p;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const RunOptions& options) {
  validate(config);
  const std::size_t reps = config.replications;
  const std::size_t nb = config.backends.size();
  const std::size_t tasks = config.grid.size() * reps;
  std::vector<ExperimentRecord> records(tasks * nb);

  auto run_task = [&](std::size_t task, std::size_t perm_threads) {
    const std::size_t g = task / reps;
    const std::size_t r = task % reps;
    const GridPoint& pt = config.grid[g];
    const std::uint64_t rep_seed = derive_seed(derive_seed(config.seed, g), r);

    const DataMatrix x = sample_gaussian(pt.n_x, pt.p, std::nullopt, derive_seed(rep_seed, 0));
    const DataMatrix y =
        sample_gaussian(pt.n_y, pt.p, MeanShiftSpec{pt.p, pt.j, pt.epsilon}, derive_seed(rep_seed, 1));
    const PermutationStream stream(derive_seed(rep_seed, 2));

    for (std::size_t k = 0; k < nb; ++k) {
      ExperimentRecord& rec = records[task * nb + k];
      rec.kind = config.kind;
      rec.point = pt;
      rec.b = config.b;
      rec.backend = config.backends[k];
      rec.replication = r;
      rec.p_value = run_backend(rec.backend, x, y, config, stream, perm_threads, rec.elapsed_seconds);
    }
  };

  if (options.timing_isolated) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t, options.threads);
  } else {
    parallel_for(tasks, options.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t t = begin; t < end; ++t) run_task(t, 1);
    });
  }
  return records;
}

std::vector<SummaryRow> summarize(std::span<const ExperimentRecord> records, double alpha,
                                  std::uint64_t bootstrap_seed, std::size_t bootstrap_resamples) {
  if (records.empty()) fail(ErrorCode::EmptyInput, "no records to summarize");

  struct Group {
    GridPoint point;
    BenchBackend backend;
    std::vector<double> elapsed;
    std::vector<bool> rejected;
  };
  std::vector<Group> groups;
  for (const ExperimentRecord& rec : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.point == rec.point && g.backend == rec.backend;
    });
    if (it == groups.end()) {
      groups.push_back({rec.point, rec.backend, {}, {}});
      it = std::prev(groups.end());
    }
    it->elapsed.push_back(rec.elapsed_seconds);
    it->rejected.push_back(rec.p_value <= alpha);
  }

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    Group& g = groups[gi];
    const std::size_t m = g.elapsed.size();
    SummaryRow row;
    row.point = g.point;
    row.backend = g.backend;
    row.count = m;

    row.mean_elapsed = compensated_sum(g.elapsed) / static_cast<double>(m);
    std::vector<double> sorted = g.elapsed;
    std::sort(sorted.begin(), sorted.end());
    row.min_elapsed = sorted.front();
    row.max_elapsed = sorted.back();
    row.median_elapsed =
        m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

    const auto hits = static_cast<std::size_t>(std::count(g.rejected.begin(), g.rejected.end(), true));
    row.power = static_cast<double>(hits) / static_cast<double>(m);

    if (bootstrap_resamples >= 2) {
      std::mt19937_64 engine(derive_seed(bootstrap_seed, gi));
      std::vector<double> powers(bootstrap_resamples);
      for (double& pw : powers) {
        std::size_t count = 0;
        for (std::size_t k = 0; k < m; ++k) count += g.rejected[uniform_index(engine, m)] ? 1 : 0;
        pw = static_cast<double>(count) / static_cast<double>(m);
      }
      const double mean = compensated_sum(powers) / static_cast<double>(powers.size());
      CompensatedSum ss;
      for (double pw : powers) ss.add((pw - mean) * (pw - mean));
      row.power_bootstrap_sd = std::sqrt(ss.value() / static_cast<double>(powers.size() - 1));
    }
    rows.push_back(row);
  }
  return rows;
}

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  out << "kind,n_x,n_y,p,j,epsilon,b,backend,rep,elapsed_s,p_value\n";
  for (const ExperimentRecord& r : records) {
    out << to_string(r.kind) << ',' << r.point.n_x << ',' << r.point.n_y << ',' << r.point.p << ','
        << r.point.j << ',' << format_shortest(r.point.epsilon) << ',' << r.b << ','
        << to_string(r.backend) << ',' << r.replication << ',' << format_shortest(r.elapsed_seconds)
        << ',' << format_shortest(r.p_value) << '\n';
  }
}

void write_records_jsonl(std::ostream& out, std::span<const ExperimentRecord> records) {
  for (const ExperimentRecord& r : records) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(r.kind));
    j["n_x"] = r.point.n_x;
    j["n_y"] = r.point.n_y;
    j["p"] = r.point.p;
    j["j"] = r.point.j;
    j["epsilon"] = r.point.epsilon;
    j["b"] = r.b;
    j["backend"] = std::string(to_string(r.backend));
    j["rep"] = r.replication;
    j["elapsed_s"] = r.elapsed_seconds;
    j["p_value"] = r.p_value;
    out << j.dump() << '\n';
  }
}

void write_summary_table(std::ostream& out, std::span<const SummaryRow> rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%6s %6s %6s %5s %8s %-12s %5s %10s %10s %10s %10s %7s %7s\n",
                "n_x", "n_y", "p", "j", "epsilon", "backend", "reps", "mean_s", "median_s", "min_s",
                "max_s", "power", "sd");
  out << line;
  for (const SummaryRow& r : rows) {
    const std::string backend(to_string(r.backend));
    std::snprintf(line, sizeof line,
                  "%6zu %6zu %6zu %5zu %8.4g %-12s %5zu %10.4g %10.4g %10.4g %10.4g %7.4f %7.4f\n",
                  r.point.n_x, r.point.n_y, r.point.p, r.point.j, r.point.epsilon, backend.c_str(),
                  r.count, r.mean_elapsed, r.median_elapsed, r.min_elapsed, r.max_elapsed, r.power,
                  r.power_bootstrap_sd);
    out << line;
  }
}

}  // namespace permstat
