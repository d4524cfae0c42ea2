#include "pmllab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pmllab {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

std::uint64_t parse_uint(std::string_view token, const char* what) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw FormatError(std::string("malformed ") + what + " token '" + std::string(token) + "'");
  return value;
}

}  // namespace

Profile parse_profile(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::uint64_t> dense;
  std::string token;
  while (in >> token) dense.push_back(parse_uint(token, "profile"));
  return Profile::from_dense(dense);
}

std::string format_profile(const Profile& profile) {
  std::string out;
  const auto dense = profile.dense();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (i != 0) out += ' ';
    out += std::to_string(dense[i]);
  }
  out += '\n';
  return out;
}

Profile read_profile_file(const std::filesystem::path& path) { return parse_profile(read_text_file(path)); }

void write_profile_file(const Profile& profile, const std::filesystem::path& path) {
  write_text_file(path, format_profile(profile));
}

Distribution parse_pml(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> probs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    double value = 0.0;
    std::string rest;
    if (!(fields >> value) || (fields >> rest))
      throw FormatError("line " + std::to_string(lineno) + ": not a number: '" + line + "'");
    if (!(value >= 0.0) || !std::isfinite(value))
      throw FormatError("line " + std::to_string(lineno) + ": negative or non-finite probability");
    probs.push_back(value);
  }
  if (probs.empty()) throw FormatError("PML file has no entries");
  try {
    return Distribution(std::move(probs));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("PML file: ") + e.what());
  }
}

std::string format_pml(const Distribution& dist) {
  std::string out;
  char buf[64];
  for (double p : dist.probs()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", p);
    out += buf;
  }
  return out;
}

Distribution read_pml_file(const std::filesystem::path& path) { return parse_pml(read_text_file(path)); }

void write_pml_file(const Distribution& dist, const std::filesystem::path& path) {
  write_text_file(path, format_pml(dist));
}

Sample parse_sample(const std::string& text) {
  std::istringstream in(text);
  std::map<std::uint64_t, std::uint64_t> counts;
  std::string symbol, mult;
  while (in >> symbol) {
    if (!(in >> mult)) throw FormatError("sample file ends inside a record");
    const auto m = parse_uint(mult, "multiplicity");
    if (m == 0) throw FormatError("sample multiplicities must be positive");
    if (!counts.emplace(parse_uint(symbol, "symbol"), m).second) throw FormatError("duplicate symbol " + symbol);
  }
  return Sample(std::move(counts));
}

std::string format_sample(const Sample& sample) {
  std::string out;
  for (const auto& [symbol, mult] : sample.counts()) {
    out += std::to_string(symbol);
    out += ' ';
    out += std::to_string(mult);
    out += '\n';
  }
  return out;
}

Sample read_sample_file(const std::filesystem::path& path) { return parse_sample(read_text_file(path)); }

void write_sample_file(const Sample& sample, const std::filesystem::path& path) {
  write_text_file(path, format_sample(sample));
}

}  // namespace pmllab
