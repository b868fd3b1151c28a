#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minfo/experiment.hpp"

namespace minfo {

namespace {

std::string fmt(double v, const char* spec) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  return std::stod(s);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string csv_header() {
  return "preset,point,estimator,k,p,M,mi_bits,stderr_bits,capacity_bits,"
         "half_gaussian_bits,wall_s,seed";
}

std::string csv_line(const ResultRow& r) {
  std::ostringstream out;
  out << quote_if_needed(r.preset) << ',' << fmt(r.point, "%.6g") << ','
      << quote_if_needed(r.estimator) << ',' << r.k << ',' << r.p << ','
      << r.integration_samples << ',' << fmt(r.mi_bits, "%.6f") << ','
      << fmt(r.stderr_bits, "%.6f") << ',' << fmt(r.capacity_bits, "%.6f") << ','
      << fmt(r.half_gaussian_bits, "%.6f") << ',' << fmt(r.wall_s, "%.3f") << ',' << r.seed;
  return out.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.good()) throw std::runtime_error("cannot write " + tmp.string());
    out << csv_header() << "\r\n";
    for (const auto& r : rows) out << csv_line(r) << "\r\n";
  }
  fs::rename(tmp, target);
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != csv_header()) throw std::runtime_error("unexpected CSV header in " + path);

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 12) throw std::runtime_error("malformed CSV row in " + path);
    ResultRow r;
    r.preset = f[0];
    r.point = parse_double(f[1]);
    r.estimator = f[2];
    r.k = std::stoi(f[3]);
    r.p = std::stoi(f[4]);
    r.integration_samples = std::stoi(f[5]);
    r.mi_bits = parse_double(f[6]);
    r.stderr_bits = parse_double(f[7]);
    r.capacity_bits = parse_double(f[8]);
    r.half_gaussian_bits = parse_double(f[9]);
    r.wall_s = parse_double(f[10]);
    r.seed = std::stoull(f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace minfo
