#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gammak/exactpoly.hpp"
#include "gammak/precision.hpp"
#include "gammak/rational.hpp"

namespace gammak {

using json = nlohmann::ordered_json;

inline constexpr int report_schema_version = 1;

enum class output_format { json, csv, latex, plain };

inline output_format parse_format(const std::string& s) {
  if (s == "json") return output_format::json;
  if (s == "csv") return output_format::csv;
  if (s == "latex") return output_format::latex;
  if (s == "plain") return output_format::plain;
  throw std::invalid_argument("unknown format '" + s + "'");
}

inline json make_check(const std::string& name, const std::string& value, const std::string& anchor,
                       const std::string& tolerance, bool pass) {
  return json{{"name", name}, {"value", value}, {"anchor", anchor}, {"tolerance", tolerance}, {"pass", pass}};
}

inline json int_list(const std::vector<big_int>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

/// {k, scale, pieces: [{interval, coeffs_scaled}]}, coefficients ascending in c.
inline json gamma_poly_json(const gamma_poly_set& g) {
  json pieces = json::array();
  for (int j = 0; j < g.k; ++j)
    pieces.push_back({{"interval", {j, j + 1}}, {"coeffs_scaled", int_list(g.scaled_piece(j))}});
  return json{{"k", g.k}, {"scale", "(k^2-1)!"}, {"pieces", pieces}};
}

namespace detail {

inline std::vector<std::string> latex_terms(const std::vector<big_int>& ascending) {
  std::vector<std::string> terms;
  for (std::size_t i = ascending.size(); i-- > 0;) {
    const big_int& a = ascending[i];
    if (a == 0) continue;
    std::string t = a < 0 ? "-" : (terms.empty() ? "" : "+");
    const big_int mag = a < 0 ? big_int(-a) : a;
    if (i == 0 || mag != 1) t += mag.str();
    if (i >= 1) t += (i == 0 || mag != 1) ? " c" : "c";
    if (i >= 2) t += "^{" + std::to_string(i) + "}";
    terms.push_back(std::move(t));
  }
  if (terms.empty()) terms.emplace_back("0");
  return terms;
}

inline bool is_power_of_shift(const std::vector<big_int>& ascending, int k, int n) {
  // (k - c)^n
  for (int i = 0; i <= n; ++i) {
    big_int expect = binomial(static_cast<unsigned>(n), static_cast<unsigned>(i)) *
                     ipow(big_int(k), static_cast<unsigned>(n - i));
    if (i % 2) expect = -expect;
    const big_int have = static_cast<std::size_t>(i) < ascending.size() ? ascending[i] : big_int(0);
    if (have != expect) return false;
  }
  return ascending.size() <= static_cast<std::size_t>(n + 1);
}

}  // namespace detail

/// Tables of (k^2-1)! gamma_k(c) in the three-column k / j / polynomial layout.
/// Pieces equal to c^n or (k-c)^n are written in that form; other pieces are
/// expanded in descending powers and wrapped at about `width` characters.
inline std::string latex_gamma_table(const std::vector<gamma_poly_set>& sets, std::size_t width = 60) {
  std::ostringstream os;
  os << "\\begin{tabular}{|c|c|l|}\n\\hline\n$k$ & $ j$ & $ (k^2-1)!\\gamma_k(c)$ \\\\\n\\hline\n";
  for (const auto& g : sets) {
    const int n = g.k * g.k - 1;
    os << "\\hline\n";
    for (int j = 0; j < g.k; ++j) {
      const auto coeffs = g.scaled_piece(j);
      os << (j == 0 ? "$" + std::to_string(g.k) + "$" : std::string()) << " & $ " << j << "$ & ";
      if (j == 0 && coeffs.size() == static_cast<std::size_t>(n + 1) && coeffs.back() == 1 &&
          std::all_of(coeffs.begin(), coeffs.end() - 1, [](const big_int& c) { return c == 0; })) {
        os << "$ c^{" << n << "}$ \\\\\n\\hline\n";
        continue;
      }
      if (j == g.k - 1 && g.k > 1 && detail::is_power_of_shift(coeffs, g.k, n)) {
        os << "$ (" << g.k << "-c)^{" << n << "}$ \\\\\n\\hline\n";
        continue;
      }
      std::vector<std::string> lines{""};
      for (const auto& t : detail::latex_terms(coeffs)) {
        if (!lines.back().empty() && lines.back().size() + t.size() > width) lines.emplace_back();
        lines.back() += t;
      }
      for (std::size_t l = 0; l < lines.size(); ++l) {
        if (l > 0) os << "& & ";
        os << "$ " << lines[l] << "$ \\\\\n";
      }
      os << "\\hline\n";
    }
  }
  os << "\\end{tabular}\n";
  return os.str();
}

namespace detail {

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [key, val] : v.items()) flatten(val, prefix.empty() ? key : prefix + "." + key, out);
  } else if (v.is_array()) {
    bool scalars = std::all_of(v.begin(), v.end(), [](const json& e) { return !e.is_structured(); });
    if (scalars) {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : " ") + scalar_text(e);
      out.emplace_back(prefix, s);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

/// Renders a report. CSV uses the "rows" array when present (one line per
/// row), otherwise key,value pairs; LaTeX needs a "latex" member.
inline std::string render(const json& report, output_format fmt) {
  switch (fmt) {
    case output_format::json:
      return report.dump(2) + "\n";
    case output_format::latex:
      if (!report.contains("latex")) throw std::invalid_argument("this command has no LaTeX output");
      return report["latex"].get<std::string>();
    case output_format::plain: {
      std::vector<std::pair<std::string, std::string>> kv;
      json r = report;
      r.erase("latex");
      detail::flatten(r, "", kv);
      std::string s;
      for (const auto& [k, v] : kv) s += k + ": " + v + "\n";
      return s;
    }
    case output_format::csv: {
      std::string s;
      if (report.contains("rows") && report["rows"].is_array() && !report["rows"].empty()) {
        std::vector<std::string> header;
        for (const auto& [key, val] : report["rows"][0].items()) header.push_back(key);
        for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + detail::csv_field(header[i]);
        s += "\n";
        for (const auto& row : report["rows"]) {
          for (std::size_t i = 0; i < header.size(); ++i) {
            std::vector<std::pair<std::string, std::string>> kv;
            detail::flatten(row.contains(header[i]) ? row[header[i]] : json(""), "", kv);
            s += (i ? "," : "") + detail::csv_field(kv.empty() ? "" : kv[0].second);
          }
          s += "\n";
        }
        return s;
      }
      std::vector<std::pair<std::string, std::string>> kv;
      json r = report;
      r.erase("latex");
      detail::flatten(r, "", kv);
      s = "key,value\n";
      for (const auto& [k, v] : kv) s += detail::csv_field(k) + "," + detail::csv_field(v) + "\n";
      return s;
    }
  }
  return {};
}

}  // namespace gammak
