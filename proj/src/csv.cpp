#include "mfrp/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mfrp/errors.hpp"

namespace mfrp {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_returns_csv(const ReturnPanel& panel, const std::string& path) {
  std::ostringstream out;
  out << "t";
  for (int a = 0; a < panel.config.n_assets; ++a) out << ",asset_" << a;
  out << "\n";
  for (Eigen::Index t = 0; t < panel.returns.rows(); ++t) {
    out << t;
    for (Eigen::Index a = 0; a < panel.returns.cols(); ++a)
      out << "," << fmt_full(panel.returns(t, a));
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_panel_meta(const ReturnPanel& panel, const std::string& path) {
  const ModelConfig& c = panel.config;
  std::ostringstream out;
  out << "version=" << kVersion << "\n"
      << "n_assets=" << c.n_assets << "\n"
      << "n_main=" << c.n_main << "\n"
      << "n_random=" << c.n_random << "\n"
      << "alpha=" << fmt_full(c.alpha) << "\n"
      << "sigma_eps=" << fmt_full(c.sigma_eps) << "\n"
      << "target_var=" << fmt_full(c.target_var) << "\n"
      << "n_steps=" << c.n_steps << "\n"
      << "transient=" << c.transient << "\n"
      << "seed=" << c.seed << "\n"
      << "effective_mode="
      << (c.effective_mode == MomentMode::AllColumns ? "all_columns"
                                                     : "main_only")
      << "\n"
      << "pseudo_source="
      << (c.pseudo_source == PseudoVarianceSource::Effective ? "effective"
                                                             : "main_only")
      << "\n";
  write_text_file(path, out.str());
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_number(const std::string& s, double& v) {
  try {
    std::size_t pos = 0;
    v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

std::vector<double> read_series_csv(const std::string& path, int column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (column >= static_cast<int>(fields.size())) {
      if (first) {
        first = false;
        continue;
      }
      throw IoError("row with too few columns in " + path);
    }
    double v = 0.0;
    if (!parse_number(trim(fields[column]), v)) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw IoError("non-numeric value in " + path + ": " + fields[column]);
    }
    values.push_back(v);
    first = false;
  }
  if (values.empty()) throw IoError("no numeric data in " + path);
  return values;
}

int csv_column_count(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) return static_cast<int>(split(line, ',').size());
  throw IoError("empty file: " + path);
}

std::map<std::string, std::string> read_key_value_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::map<std::string, std::string> out;
  std::string line, section;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line: " + line);
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return hash;
}

std::vector<double> parse_double_list(const std::string& csv_list) {
  std::vector<double> out;
  for (const std::string& tok : split(csv_list, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) continue;
    double v = 0.0;
    if (!parse_number(t, v)) throw ConfigError("not a number: " + t);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list: " + csv_list);
  return out;
}

std::vector<int> parse_int_list(const std::string& csv_list) {
  std::vector<int> out;
  for (double v : parse_double_list(csv_list))
    out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace mfrp
