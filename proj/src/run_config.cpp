#include "campana/run_config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace campana {

namespace {

std::string trim(const std::string& s) {
  const auto lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return "";
  const auto hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("not a non-negative integer: '" + text + "'");
  }
  return v;
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_number(xs[i]);
  return out;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_commas(text)) out.push_back(parse_double(item));
  return out;
}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "model") {
    model = value;
  } else if (key == "m") {
    m = parse_multiplicity(value);
  } else if (key == "S") {
    S = PlaceSet::parse(value);
  } else if (key == "lambda") {
    if (value.empty()) {
      lambda.reset();
    } else {
      lambda = Rational::parse(value);
    }
  } else if (key == "T") {
    T = parse_number_list(value);
  } else if (key == "prime_bound") {
    prime_bound = parse_unsigned(value);
  } else if (key == "s") {
    s = parse_number_list(value);
  } else if (key == "format") {
    if (value != "json" && value != "csv") throw std::invalid_argument("format must be json or csv");
    format = value;
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_unsigned(value));
  } else if (key == "output") {
    output = value;
  } else if (key == "prime") {
    prime = parse_unsigned(value);
  } else if (key == "ms") {
    ms.clear();
    for (const auto& item : split_commas(value)) ms.push_back(parse_multiplicity(item));
  } else if (key == "slope_tol") {
    slope_tol = parse_double(value);
  } else if (key == "const_tol") {
    const_tol = parse_double(value);
  } else if (key == "method") {
    if (value != "fast" && value != "brute") throw std::invalid_argument("method must be fast or brute");
    method = value;
  } else if (key == "depth") {
    depth = static_cast<unsigned>(parse_unsigned(value));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "model = " << model << '\n';
  os << "m = " << multiplicity_str(m) << '\n';
  os << "S = " << S.str() << '\n';
  if (lambda) os << "lambda = " << lambda->str() << '\n';
  if (!T.empty()) os << "T = " << join_numbers(T) << '\n';
  os << "prime_bound = " << prime_bound << '\n';
  if (!s.empty()) os << "s = " << join_numbers(s) << '\n';
  os << "format = " << format << '\n';
  if (threads) os << "threads = " << *threads << '\n';
  if (!output.empty()) os << "output = " << output << '\n';
  if (prime) os << "prime = " << *prime << '\n';
  if (!ms.empty()) {
    os << "ms = ";
    for (std::size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << multiplicity_str(ms[i]);
    os << '\n';
  }
  if (slope_tol) os << "slope_tol = " << format_number(*slope_tol) << '\n';
  if (const_tol) os << "const_tol = " << format_number(*const_tol) << '\n';
  os << "method = " << method << '\n';
  os << "depth = " << depth << '\n';
  return os.str();
}

}  // namespace campana
