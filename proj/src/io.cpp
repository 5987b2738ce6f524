#include "gle/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gle {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    cfg.entries_[key] = value;
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw std::invalid_argument("config key missing: " + key);
  return it->second;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not a number: " + s);
  }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an integer: " + s);
  }
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": not an unsigned integer: " + s);
  }
}

std::optional<std::uint64_t> RunConfig::maybe_u64(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_u64(key);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const {
  std::ostringstream os;
  for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return buf;
}

MemoryKernel kernel_from_config(const RunConfig& cfg) {
  const std::string family = cfg.get_string("kernel.family");
  if (family == "exponential")
    return make_exponential(cfg.get_double("kernel.lambda", 1.0));
  if (family == "power_law") return make_power_law(cfg.get_double("kernel.alpha"));
  if (family == "pure_power") return make_pure_power(cfg.get_double("kernel.alpha"));
  if (family == "tabulated") {
    auto table = read_kernel_table(cfg.get_string("kernel.table_path"));
    const std::string tail = cfg.get_string("kernel.tail", "unclassified");
    RegimeTag tag = Unclassified{};
    if (tail == "diffusive")
      tag = Diffusive{cfg.get_double("kernel.beta0", 2.0)};
    else if (tail == "subdiffusive")
      tag = Subdiffusive{cfg.get_double("kernel.alpha"),
                         cfg.get_double("kernel.c_alpha", 1.0),
                         cfg.get_double("kernel.beta_alpha", 1.0)};
    else if (tail == "critical")
      tag = Critical{cfg.get_double("kernel.c1", 1.0),
                     cfg.get_double("kernel.beta1", 1.0)};
    else if (tail != "unclassified")
      throw std::invalid_argument("unknown kernel.tail: " + tail);
    return make_tabulated(table, tag);
  }
  throw std::invalid_argument("unknown kernel.family: " + family);
}

std::vector<std::pair<double, double>> read_kernel_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open kernel table: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("kernel table is empty: " + path);
  // header row is mandatory: "t,K"
  {
    std::string h = trim(line);
    if (h != "t,K" && h != "t, K")
      throw std::invalid_argument("kernel table must start with header 't,K'");
  }
  std::vector<std::pair<double, double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("kernel table line " + std::to_string(lineno) +
                                  ": expected 't,K'");
    rows.emplace_back(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  }
  return rows;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t n_columns = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& metadata,
                     std::span<const std::string> columns)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);  // '\n' endings everywhere
  if (!impl_->out) {
    delete impl_;
    throw std::invalid_argument("cannot open output file: " + path);
  }
  impl_->n_columns = columns.size();
  impl_->out << "# " << metadata << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "");
  impl_->out << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != impl_->n_columns)
    throw std::invalid_argument("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    impl_->out << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
  impl_->out << "\n";
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw std::invalid_argument("log_grid needs 0 < lo < hi and >= 2 points");
  std::vector<double> g(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo * std::exp(step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace gle
