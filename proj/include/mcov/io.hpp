#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcov/family.hpp"
#include "mcov/matroid.hpp"

namespace mcov {

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Next non-blank, non-comment line; false at end of input.
inline bool next_content_line(std::istream& in, std::string& out) {
  std::string line;
  while (std::getline(in, line)) {
    out = strip_comment(line);
    if (!out.empty()) return true;
  }
  return false;
}

inline std::vector<long long> parse_ints(const std::string& line) {
  std::istringstream ss(line);
  std::vector<long long> v;
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      const long long x = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      v.push_back(x);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "expected integer, got '" + tok + "'");
    }
  }
  return v;
}

inline Subset subset_from_ints(const std::vector<long long>& v, int n) {
  Subset s;
  for (long long e : v) {
    if (e < 0 || e >= n)
      throw Error(Errc::ElementOutOfRange, "element " + std::to_string(e) + " outside ground set");
    s = s.with(static_cast<int>(e));
  }
  return s;
}

}  // namespace detail

/**
 * Reads one matroid description:
 *   matroid uniform <r> <n>
 *   matroid linear <q> <rows> <cols>   + <rows> lines of <cols> entries
 *   matroid graphic <nv> <ne>          + <ne> lines "<u> <v>"
 *   matroid pg <n> <q>                 (PG(n-1, q))
 *   matroid bases <n>                  + one basis per line until EOF/blank
 */
inline InstancePtr read_matroid(std::istream& in) {
  std::string header;
  if (!detail::next_content_line(in, header)) throw Error(Errc::ParseError, "empty matroid file");
  std::istringstream hs(header);
  std::string word, kind;
  hs >> word >> kind;
  if (word != "matroid") throw Error(Errc::ParseError, "expected 'matroid' header, got '" + header + "'");
  std::string rest;
  std::getline(hs, rest);
  const auto args = detail::parse_ints(rest);
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw Error(Errc::ParseError, "matroid " + kind + " expects " + std::to_string(k) + " arguments");
  };
  if (kind == "uniform") {
    need(2);
    return make_uniform(static_cast<int>(args[0]), static_cast<int>(args[1]));
  }
  if (kind == "pg") {
    need(2);
    return make_pg(static_cast<int>(args[0]), static_cast<int>(args[1]));
  }
  if (kind == "linear") {
    need(3);
    const int q = static_cast<int>(args[0]), rows = static_cast<int>(args[1]),
              cols = static_cast<int>(args[2]);
    if (cols > kMaxElements) throw Error(Errc::GroundSetTooLarge, "too many columns");
    std::vector<std::vector<int>> matrix;
    for (int r = 0; r < rows; ++r) {
      std::string line;
      if (!detail::next_content_line(in, line)) throw Error(Errc::ParseError, "missing matrix row");
      const auto v = detail::parse_ints(line);
      if (static_cast<int>(v.size()) != cols) throw Error(Errc::ParseError, "matrix row has wrong length");
      matrix.emplace_back(v.begin(), v.end());
    }
    return make_linear(GaloisField::make(q), matrix, cols);
  }
  if (kind == "graphic") {
    need(2);
    const int nv = static_cast<int>(args[0]), ne = static_cast<int>(args[1]);
    if (ne > kMaxElements) throw Error(Errc::GroundSetTooLarge, "too many edges");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < ne; ++i) {
      std::string line;
      if (!detail::next_content_line(in, line)) throw Error(Errc::ParseError, "missing edge line");
      const auto v = detail::parse_ints(line);
      if (v.size() != 2) throw Error(Errc::ParseError, "edge line needs two vertices");
      edges.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
    }
    return make_graphic(nv, std::move(edges));
  }
  if (kind == "bases") {
    need(1);
    const int n = static_cast<int>(args[0]);
    if (n > kMaxElements) throw Error(Errc::GroundSetTooLarge, "ground set too large");
    // Basis lines run to a blank line or EOF; none at all means rank 0.
    std::vector<Subset> bases;
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) break;
      const std::string s = detail::strip_comment(line);
      if (s.empty()) continue;
      bases.push_back(detail::subset_from_ints(detail::parse_ints(s), n));
    }
    if (bases.empty()) bases.push_back(Subset{});
    return make_bases(n, std::move(bases));
  }
  throw Error(Errc::ParseError, "unknown matroid kind '" + kind + "'");
}

inline InstancePtr read_matroid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return read_matroid(in);
}

inline void write_matroid(std::ostream& out, const MatroidInstance& m) {
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformData>) {
          out << "matroid uniform " << d.rank << ' ' << m.size() << '\n';
        } else if constexpr (std::is_same_v<T, LinearData>) {
          if (m.kind() == MatroidKind::ProjectiveGeometry) {
            out << "matroid pg " << d.rows << ' ' << d.field->order() << '\n';
            return;
          }
          out << "matroid linear " << d.field->order() << ' ' << d.rows << ' ' << m.size() << '\n';
          for (int r = 0; r < d.rows; ++r) {
            for (int c = 0; c < m.size(); ++c) out << (c ? " " : "") << d.columns[c][r];
            out << '\n';
          }
        } else if constexpr (std::is_same_v<T, GraphicData>) {
          out << "matroid graphic " << d.vertices << ' ' << d.edges.size() << '\n';
          for (auto [u, v] : d.edges) out << u << ' ' << v << '\n';
        } else {
          out << "matroid bases " << m.size() << '\n';
          for (Subset b : d.bases)
            if (!b.empty()) out << to_string(b) << '\n';
        }
      },
      m.oracle());
}

/// One subset per line; an empty line (or EOF) terminates. '#' lines skipped.
inline SetFamily read_family(std::istream& in, int n) {
  SetFamily fam;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) break;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    fam.push_back(detail::subset_from_ints(detail::parse_ints(s), n));
  }
  return fam;
}

inline SetFamily read_family_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return read_family(in, n);
}

inline void write_family(std::ostream& out, const SetFamily& fam) {
  for (Subset x : fam) out << to_string(x) << '\n';
}

}  // namespace mcov
