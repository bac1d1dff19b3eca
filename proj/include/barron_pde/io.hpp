#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"

namespace barron_pde {

inline constexpr const char* kNetFormat = "barron-net/1";

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_atoms(std::ostream& os, const ShallowRep& rep) {
  os << '[';
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (i) os << ',';
    os << "{\"a\":" << format_double(rep.a(i)) << ",\"w\":[";
    auto w = rep.w(i);
    for (std::size_t j = 0; j < w.size(); ++j) os << (j ? "," : "") << format_double(w[j]);
    os << "],\"b\":" << format_double(rep.b(i)) << '}';
  }
  os << ']';
}

inline double finite_number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw FormatError(std::string("barron-net: ") + what + " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw FormatError(std::string("barron-net: non-finite ") + what);
  return d;
}

inline ShallowRep read_atoms(const nlohmann::json& atoms, std::size_t dim, Activation act) {
  if (!atoms.is_array()) throw FormatError("barron-net: atoms must be an array");
  std::vector<double> a, w, b;
  a.reserve(atoms.size());
  b.reserve(atoms.size());
  w.reserve(atoms.size() * dim);
  for (const auto& at : atoms) {
    if (!at.is_object() || !at.contains("a") || !at.contains("w") || !at.contains("b"))
      throw FormatError("barron-net: malformed atom record (needs a, w, b)");
    a.push_back(finite_number(at["a"], "outer weight"));
    b.push_back(finite_number(at["b"], "bias"));
    const auto& wv = at["w"];
    if (!wv.is_array()) throw FormatError("barron-net: atom weight must be an array");
    if (wv.size() != dim)
      throw DimensionMismatch("barron-net: atom weight has " + std::to_string(wv.size()) + " entries, expected " +
                              std::to_string(dim));
    for (const auto& x : wv) w.push_back(finite_number(x, "inner weight"));
  }
  return ShallowRep(dim, act, std::move(a), std::move(w), std::move(b));
}

inline Activation read_activation(const nlohmann::json& j) {
  if (!j.contains("activation") || !j["activation"].is_string()) throw FormatError("barron-net: missing activation");
  const auto act = parse_activation(j["activation"].get<std::string>());
  if (!act) throw FormatError("barron-net: unknown activation '" + j["activation"].get<std::string>() + "'");
  return *act;
}

inline std::size_t read_dim(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0)
    throw FormatError(std::string("barron-net: missing or invalid ") + key);
  return j[key].get<std::size_t>();
}

}  // namespace detail

inline std::string to_json(const ShallowRep& rep) {
  std::ostringstream os;
  os << "{\"format\":\"" << kNetFormat << "\",\"kind\":\"shallow\",\"activation\":\"" << to_string(rep.activation())
     << "\",\"input_dim\":" << rep.input_dim() << ",\"atoms\":";
  detail::write_atoms(os, rep);
  os << "}\n";
  return os.str();
}

inline std::string to_json(const DeepRep& net) {
  std::ostringstream os;
  os << "{\"format\":\"" << kNetFormat << "\",\"kind\":\"deep\",\"input_dim\":" << net.input_dim() << ",\"blocks\":[";
  for (std::size_t k = 0; k < net.depth(); ++k) {
    const Block& blk = net.blocks()[k];
    if (k) os << ',';
    os << "{\"output_dim\":" << blk.output_dim() << ",\"activation\":\"" << to_string(blk.activation) << '"';
    if (blk.channelwise) os << ",\"channelwise\":true";
    os << ",\"outputs\":[";
    for (std::size_t o = 0; o < blk.output_dim(); ++o) {
      if (o) os << ',';
      detail::write_atoms(os, blk.outputs[o]);
    }
    os << "]}";
  }
  os << "]}\n";
  return os.str();
}

using NetFile = std::variant<ShallowRep, DeepRep>;

inline NetFile parse_net(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("barron-net: not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string())
    throw FormatError("barron-net: missing format tag");
  const std::string fmt = j["format"].get<std::string>();
  if (fmt != kNetFormat) {
    if (fmt.rfind("barron-net/", 0) == 0)
      throw VersionError("barron-net: unsupported format version '" + fmt + "' (expected " + kNetFormat + ")");
    throw FormatError("barron-net: unknown format '" + fmt + "'");
  }
  const std::string kind = j.value("kind", std::string{});
  if (kind == "shallow") {
    const std::size_t dim = detail::read_dim(j, "input_dim");
    if (!j.contains("atoms")) throw FormatError("barron-net: shallow net without atoms");
    return detail::read_atoms(j["atoms"], dim, detail::read_activation(j));
  }
  if (kind == "deep") {
    const std::size_t dim = detail::read_dim(j, "input_dim");
    if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
      throw FormatError("barron-net: deep net without blocks");
    std::vector<Block> blocks;
    std::size_t in = dim;
    for (const auto& bj : j["blocks"]) {
      if (!bj.is_object() || !bj.contains("outputs") || !bj["outputs"].is_array())
        throw FormatError("barron-net: malformed block record");
      Block blk;
      blk.activation = detail::read_activation(bj);
      blk.input_dim = in;
      blk.channelwise = bj.value("channelwise", false);
      const std::size_t out_dim = detail::read_dim(bj, "output_dim");
      if (bj["outputs"].size() != out_dim) throw DimensionMismatch("barron-net: block output count differs from output_dim");
      for (const auto& oj : bj["outputs"])
        blk.outputs.push_back(detail::read_atoms(oj, blk.channelwise ? 1 : in, blk.activation));
      in = out_dim;
      blocks.push_back(std::move(blk));
    }
    return DeepRep(dim, std::move(blocks));
  }
  throw FormatError("barron-net: kind must be 'shallow' or 'deep'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw FormatError("write to '" + path + "' failed");
}

inline NetFile read_net(const std::string& path) { return parse_net(read_text(path)); }

inline ShallowRep read_shallow(const std::string& path) {
  NetFile f = read_net(path);
  if (auto* s = std::get_if<ShallowRep>(&f)) return *s;
  throw FormatError("'" + path + "' holds a deep network; a shallow one is required");
}

inline DeepRep read_deep(const std::string& path) {
  NetFile f = read_net(path);
  if (auto* s = std::get_if<ShallowRep>(&f)) return DeepRep(*s);
  return std::get<DeepRep>(f);
}

inline void write_net(const std::string& path, const ShallowRep& rep) { write_text(path, to_json(rep)); }
inline void write_net(const std::string& path, const DeepRep& net) { write_text(path, to_json(net)); }

// ---------------------------------------------------------------------------
// CSV reports.

struct Report {
  std::vector<std::pair<std::string, std::string>> config;  // "# config" lines, in order
  std::string seed = "none";
  std::string paper_bound = "none";
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> footer;  // trailing "# key: value" lines

  void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

inline std::string cell(double v) { return format_double(v); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(const std::string& s) { return s; }

inline std::string render_report(const Report& r) {
  std::ostringstream os;
  for (const auto& [k, v] : r.config) os << "# config: " << k << '=' << v << '\n';
  os << "# seed: " << r.seed << '\n';
  os << "# paper_bound: " << r.paper_bound << '\n';
  for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << r.columns[c];
  if (!r.columns.empty()) os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << '\n';
  }
  for (const auto& [k, v] : r.footer) os << "# " << k << ": " << v << '\n';
  return os.str();
}

inline void emit_report(const Report& r, const std::string& path) { write_text(path, render_report(r)); }

}  // namespace barron_pde
