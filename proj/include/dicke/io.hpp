#pragma once

// CSV and JSON emission for sweep tables. Numbers use the shortest
// representation that round-trips, so identical input gives identical bytes.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "dicke/meanfield.hpp"
#include "dicke/sweep.hpp"

namespace dicke::io {

inline constexpr const char* kVersion = "1.0.0";

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// FNV-1a, 64 bit.
inline std::string config_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

inline std::vector<std::string> csv_columns(const sweep::SweepTable& table) {
  std::vector<std::string> cols{"rho12_nm", "q",        "delta",   "phase", "e0_per_N",
                                "dn_over_N", "i_over_N", "alpha",  "beta"};
  if (table.has_ed) {
    for (const char* c : {"e0_per_N_ed", "photons_per_N_ed", "two_sz_over_N_ed", "lambda"}) cols.emplace_back(c);
  }
  return cols;
}

inline std::string phase_cell(const sweep::SweepRow& row) {
  return row.mean_field_ok ? std::string(meanfield::phase_name(row.phase)) : std::string("error");
}

inline void write_csv(std::ostream& out, const sweep::SweepTable& table) {
  const std::vector<std::string> cols = csv_columns(table);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const sweep::SweepRow& r : table.rows) {
    out << format_optional(r.rho12_nm) << ',';
    if (r.mean_field_ok) {
      out << format_double(r.q) << ',' << format_double(r.delta) << ',' << phase_cell(r) << ','
          << format_double(r.e0_per_N) << ',' << format_double(r.dn_over_N) << ',' << format_double(r.i_over_N)
          << ',' << format_double(r.alpha) << ',' << format_double(r.beta);
    } else {
      out << ",,error,,,,,";
    }
    if (table.has_ed) {
      out << ',' << format_optional(r.e0_per_N_ed) << ',' << format_optional(r.photons_per_N_ed) << ','
          << format_optional(r.two_sz_over_N_ed) << ',' << format_double(r.lambda);
    }
    out << '\n';
  }
}

inline nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline nlohmann::ordered_json number_or_null(const std::optional<double>& v) {
  return v ? number_or_null(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json table_json(const sweep::SweepTable& table, const nlohmann::ordered_json& metadata) {
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata;
  doc["metadata"]["variable"] = table.variable;
  doc["metadata"]["critical"] = number_or_null(table.critical);
  doc["columns"] = csv_columns(table);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const sweep::SweepRow& r : table.rows) {
    nlohmann::ordered_json row;
    row["rho12_nm"] = number_or_null(r.rho12_nm);
    const bool ok = r.mean_field_ok;
    auto mf = [ok](double v) { return ok ? number_or_null(v) : nlohmann::ordered_json(nullptr); };
    row["q"] = mf(r.q);
    row["delta"] = mf(r.delta);
    row["phase"] = phase_cell(r);
    row["e0_per_N"] = mf(r.e0_per_N);
    row["dn_over_N"] = mf(r.dn_over_N);
    row["i_over_N"] = mf(r.i_over_N);
    row["alpha"] = mf(r.alpha);
    row["beta"] = mf(r.beta);
    if (table.has_ed) {
      row["e0_per_N_ed"] = number_or_null(r.e0_per_N_ed);
      row["photons_per_N_ed"] = number_or_null(r.photons_per_N_ed);
      row["two_sz_over_N_ed"] = number_or_null(r.two_sz_over_N_ed);
      row["lambda"] = number_or_null(r.lambda);
    }
    if (r.error) row["error"] = *r.error;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace dicke::io
