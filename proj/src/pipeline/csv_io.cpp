#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unordered_set>
#include <unistd.h>

#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

namespace tensoruq {
namespace {

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
      cell.remove_suffix(1);
    cells.push_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
  throw Error(ErrorCode::parse_error, "row " + std::to_string(row) + ": " + what);
}

template <typename T>
T parse_cell(std::string_view cell, std::size_t row, const char* column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    row_error(row, std::string("cannot parse ") + column + " '" + std::string(cell) + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::io_error, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::io_error, "cannot rename to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string plan_csv(const SamplePlan& plan) {
  std::ostringstream out;
  const std::size_t d = plan.entries.empty() ? 0 : plan.entries.front().index.dim();
  out << "sample_id";
  for (std::size_t k = 1; k <= d; ++k) out << ",i_" << k;
  for (std::size_t k = 1; k <= d; ++k) out << ",xi_" << k;
  out << '\n';
  for (const auto& e : plan.entries) {
    out << e.sample_id;
    for (int i : e.index.values()) out << ',' << i;
    for (double x : e.point) out << ',' << format_double(x);
    out << '\n';
  }
  return out.str();
}

void write_plan(const SamplePlan& plan, const std::filesystem::path& path) {
  atomic_write(path, plan_csv(plan));
}

SamplePlan parse_plan(const std::string& text, const ParameterSpace& space) {
  const auto lines = lines_of(text);
  const std::size_t d = space.dim();
  if (lines.empty()) throw Error(ErrorCode::parse_error, "plan file is empty");

  std::string expected = "sample_id";
  for (std::size_t k = 1; k <= d; ++k) expected += ",i_" + std::to_string(k);
  for (std::size_t k = 1; k <= d; ++k) expected += ",xi_" + std::to_string(k);
  std::string header;
  for (auto cell : split_row(lines.front())) header += (header.empty() ? "" : ",") + std::string(cell);
  if (header != expected)
    throw Error(ErrorCode::parse_error, "row 1: plan header does not match a " +
                                            std::to_string(d) + "-parameter space");

  std::vector<QuadratureRule> rules;
  for (const auto& p : space.params()) rules.push_back(gauss_quadrature(p.dist, p.quad_order));
  const auto shape = space.quad_orders();

  SamplePlan plan;
  plan.space_fingerprint = space.fingerprint();
  plan.shape = shape;
  std::unordered_set<GridIndex, GridIndexHash> seen;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (blank(lines[r])) continue;
    const std::size_t row = r + 1;
    const auto cells = split_row(lines[r]);
    if (cells.size() != 1 + 2 * d)
      row_error(row, "expected " + std::to_string(1 + 2 * d) + " columns, found " +
                         std::to_string(cells.size()));
    PlanEntry e;
    e.sample_id = parse_cell<int>(cells[0], row, "sample_id");
    if (e.sample_id != static_cast<int>(plan.entries.size()) + 1)
      row_error(row, "sample ids must run 1, 2, ... in order; found " +
                         std::to_string(e.sample_id));
    std::vector<int> idx(d);
    for (std::size_t k = 0; k < d; ++k) idx[k] = parse_cell<int>(cells[1 + k], row, "grid index");
    e.index = GridIndex(idx);
    if (!e.index.in_bounds(shape)) row_error(row, "grid index out of bounds");
    if (!seen.insert(e.index).second) row_error(row, "duplicate grid index");
    e.point = grid_point(rules, e.index.values());
    for (std::size_t k = 0; k < d; ++k) {
      const double xi = parse_cell<double>(cells[1 + d + k], row, "parameter value");
      if (std::abs(xi - e.point[k]) > 1e-12 * std::max(1.0, std::abs(e.point[k])))
        row_error(row, "xi_" + std::to_string(k + 1) + " does not match the grid node");
    }
    plan.entries.push_back(std::move(e));
  }
  if (plan.entries.empty()) throw Error(ErrorCode::parse_error, "plan has no rows");
  return plan;
}

SamplePlan read_plan(const std::filesystem::path& path, const ParameterSpace& space) {
  return parse_plan(read_file(path), space);
}

std::string results_csv(const SamplePlan& plan, const SampleSet& samples) {
  if (plan.entries.size() != samples.size())
    throw Error(ErrorCode::shape_mismatch, "plan and sample set sizes differ");
  std::ostringstream out;
  out << "sample_id,value\n";
  for (std::size_t s = 0; s < samples.size(); ++s)
    out << plan.entries[s].sample_id << ',' << format_double(samples[s].value) << '\n';
  return out.str();
}

void write_results(const SamplePlan& plan, const SampleSet& samples,
                   const std::filesystem::path& path) {
  atomic_write(path, results_csv(plan, samples));
}

SampleSet parse_results(const SamplePlan& plan, const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::parse_error, "results file is empty");
  const auto head = split_row(lines.front());
  if (head.size() != 2 || head[0] != "sample_id" || head[1] != "value")
    throw Error(ErrorCode::parse_error, "row 1: expected header 'sample_id,value'");

  const std::size_t n = plan.entries.size();
  std::vector<double> values(n, 0.0);
  std::vector<std::size_t> seen_at(n, 0);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (blank(lines[r])) continue;
    const std::size_t row = r + 1;
    const auto cells = split_row(lines[r]);
    if (cells.size() != 2) row_error(row, "expected 2 columns");
    const int id = parse_cell<int>(cells[0], row, "sample_id");
    if (id < 1 || static_cast<std::size_t>(id) > n)
      row_error(row, "unknown sample id " + std::to_string(id));
    double v = 0.0;
    const auto cell = cells[1];
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
      row_error(row, "cannot parse value '" + std::string(cell) + "'");
    if (!std::isfinite(v)) row_error(row, "non-finite value for sample id " + std::to_string(id));
    auto& slot = seen_at[static_cast<std::size_t>(id - 1)];
    if (slot != 0)
      row_error(row, "duplicate sample id " + std::to_string(id) + " (first at row " +
                         std::to_string(slot) + ")");
    slot = row;
    values[static_cast<std::size_t>(id - 1)] = v;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (seen_at[i] == 0)
      throw Error(ErrorCode::parse_error, "missing result for sample id " + std::to_string(i + 1));

  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) samples.push_back({plan.entries[i].index, values[i]});
  return SampleSet(std::move(samples), plan.shape);
}

SampleSet ingest_results(const SamplePlan& plan, const std::filesystem::path& results_file) {
  if (plan.entries.empty()) throw Error(ErrorCode::empty_samples, "plan is empty");
  return parse_results(plan, read_file(results_file));
}

}  // namespace tensoruq
