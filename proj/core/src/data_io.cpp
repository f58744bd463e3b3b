#include "permstat/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "permstat/error.hpp"
#include "permstat/random.hpp"

namespace permstat {

std::vector<double> MeanShiftSpec::mean_vector() const {
  validate(*this);
  std::vector<double> mu(p, 0.0);
  for (std::size_t k = 0; k < j; ++k) mu[k] = epsilon;
  return mu;
}

void validate(const MeanShiftSpec& spec) {
  if (spec.p == 0) fail(ErrorCode::InvalidArgument, "mean shift needs p >= 1");
  if (spec.j > spec.p) {
    fail(ErrorCode::InvalidArgument, "mean shift j = " + std::to_string(spec.j) +
                                         " exceeds p = " + std::to_string(spec.p));
  }
  if (!std::isfinite(spec.epsilon)) fail(ErrorCode::NonFinite, "mean shift epsilon must be finite");
}

namespace {

// Marsaglia polar method; the second deviate of each accepted pair is kept
// for the next call.
class PolarNormal {
 public:
  explicit PolarNormal(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform_unit(engine_) - 1.0;
      v = 2.0 * uniform_unit(engine_) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

DataMatrix sample_gaussian(std::size_t n, std::size_t p, const std::optional<MeanShiftSpec>& mean,
                           std::uint64_t seed) {
  if (n == 0 || p == 0) fail(ErrorCode::InvalidArgument, "sample size and dimension must be >= 1");
  std::vector<double> mu(p, 0.0);
  if (mean) {
    if (mean->p != p) {
      fail(ErrorCode::DimensionMismatch, "mean shift has p = " + std::to_string(mean->p) +
                                             " but the sample has " + std::to_string(p));
    }
    mu = mean->mean_vector();
  }
  PolarNormal normal(seed);
  std::vector<double> values(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p; ++k) values[i * p + k] = mu[k] + normal();
  }
  return DataMatrix(n, p, std::move(values));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::string location(std::string_view source, std::size_t line, std::size_t column) {
  std::string s(source);
  s += ": row " + std::to_string(line);
  if (column != 0) s += ", column " + std::to_string(column);
  return s;
}

}  // namespace

CsvDocument parse_csv(std::string_view text, std::string_view source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::optional<std::vector<std::string>> header;
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_row = true;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    const auto cells = split_cells(line);
    if (first_row) {
      first_row = false;
      cols = cells.size();
      bool numeric = true;
      for (auto c : cells) numeric = numeric && parse_number(c).has_value();
      if (!numeric) {
        header.emplace(cells.begin(), cells.end());
        continue;
      }
    }
    if (cells.size() != cols) {
      fail(ErrorCode::Parse, location(source, line_no, 0) + ": expected " + std::to_string(cols) +
                                 " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto v = parse_number(cells[k]);
      if (!v) {
        fail(ErrorCode::Parse, location(source, line_no, k + 1) + ": '" + std::string(cells[k]) +
                                   "' is not a number");
      }
      if (!std::isfinite(*v)) {
        fail(ErrorCode::NonFinite, location(source, line_no, k + 1) + ": non-finite value");
      }
      values.push_back(*v);
    }
    ++rows;
  }

  if (rows == 0) fail(ErrorCode::EmptyInput, std::string(source) + ": no data rows");
  return {DataMatrix(rows, cols, std::move(values)), std::move(header)};
}

CsvDocument load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(ErrorCode::Io, "failed reading " + path.string());
  return parse_csv(buffer.str(), path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const DataMatrix& m,
               const std::optional<std::vector<std::string>>& header) {
  if (header) {
    for (std::size_t k = 0; k < header->size(); ++k) out << (k ? "," : "") << (*header)[k];
    out << '\n';
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) out << (k ? "," : "") << format_double(m(i, k));
    out << '\n';
  }
}

void save_csv(const DataMatrix& m, const std::filesystem::path& path,
              const std::optional<std::vector<std::string>>& header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  write_csv(out, m, header);
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace permstat
