#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfrp/model.hpp"

namespace mfrp {

inline constexpr const char* kVersion = "0.1.0";

// Fixed-format floating-point text, stable across runs.
std::string fmt_full(double v);   // round-trip precision (%.17g)
std::string fmt_short(double v);  // compact (%.10g)

// Returns CSV with header "t,asset_0,...,asset_{N-1}".
void write_returns_csv(const ReturnPanel& panel, const std::string& path);

// Sidecar key=value metadata recording the full config and seed.
void write_panel_meta(const ReturnPanel& panel, const std::string& path);

// Reads one numeric column (0-based; column 0 is usually the index) from a
// CSV file; a non-numeric first row is treated as a header and skipped.
std::vector<double> read_series_csv(const std::string& path, int column);

// Number of data columns in the file (header row preferred).
int csv_column_count(const std::string& path);

// Plain key=value config file; '#' starts a comment, [section] headers
// prefix keys as "section.key". Later keys win.
std::map<std::string, std::string> read_key_value_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a over the file bytes, for the sweep manifest.
std::uint64_t fnv1a_file(const std::string& path);

std::vector<double> parse_double_list(const std::string& csv_list);
std::vector<int> parse_int_list(const std::string& csv_list);

}  // namespace mfrp
