#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mat2seq/core.hpp"
#include "mat2seq/xyz_triplet.hpp"

namespace mat2seq {

struct AtomSite {
  std::string label;
  std::string symbol;
  Vec3 frac = Vec3::Zero();
  double occupancy = 1.0;
};

/// The subset of a CIF data block this library reads.
struct CifDocument {
  std::string data_block_name;
  std::map<std::string, std::string> fields;
  std::vector<AtomSite> atom_site_loop;
  std::optional<std::vector<std::string>> symmetry_ops_loop;
};

namespace detail {

struct CifToken {
  std::string text;
  bool quoted = false;
};

inline std::vector<CifToken> tokenize_cif(std::string_view text) {
  std::vector<CifToken> tokens;
  std::size_t i = 0;
  bool line_start = true;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      line_start = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ch == ';' && line_start) {
      // Semicolon text field runs until a line starting with ';'.
      const std::size_t body = i + 1;
      std::size_t end = text.find("\n;", body);
      if (end == std::string_view::npos) throw Error(ErrorCode::MalformedLoop, "unterminated text field");
      tokens.push_back({std::string(text.substr(body, end - body)), true});
      i = end + 2;
      line_start = false;
      continue;
    }
    line_start = false;
    if (ch == '\'' || ch == '"') {
      std::size_t j = i + 1;
      while (j < text.size()) {
        if (text[j] == ch && (j + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[j + 1])))) break;
        if (text[j] == '\n') break;
        ++j;
      }
      if (j >= text.size() || text[j] != ch) throw Error(ErrorCode::MalformedLoop, "unterminated quoted value");
      tokens.push_back({std::string(text.substr(i + 1, j - i - 1)), true});
      i = j + 1;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    tokens.push_back({std::string(text.substr(i, j - i)), false});
    i = j;
  }
  return tokens;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Parses "5.640(3)" style numbers.
inline double cif_number(const std::string& value, const std::string& tag) {
  std::string v = value.substr(0, value.find('('));
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw Error(ErrorCode::MalformedLoop, "non-numeric value '" + value + "' for " + tag);
  }
  return x;
}

inline int element_from_site_symbol(const std::string& raw) {
  std::string symbol;
  for (char c : raw) {
    if (symbol.empty() && std::isupper(static_cast<unsigned char>(c))) {
      symbol += c;
    } else if (symbol.size() == 1 && std::islower(static_cast<unsigned char>(c))) {
      symbol += c;
    } else {
      break;
    }
  }
  auto z = atomic_number(symbol);
  if (!z && symbol.size() == 2) z = atomic_number(symbol.substr(0, 1));
  if (!z) throw Error(ErrorCode::UnknownElement, "'" + raw + "'");
  return *z;
}

inline bool is_tag(const CifToken& t) { return !t.quoted && !t.text.empty() && t.text[0] == '_'; }
inline bool is_keyword(const CifToken& t, std::string_view kw) {
  return !t.quoted && lower(t.text).rfind(kw, 0) == 0;
}

}  // namespace detail

inline CifDocument parse_cif_document(std::string_view text) {
  using detail::is_keyword;
  using detail::is_tag;
  const auto tokens = detail::tokenize_cif(text);
  CifDocument doc;
  std::vector<std::map<std::string, std::vector<std::string>>> loops;

  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& tok = tokens[i];
    if (is_keyword(tok, "data_")) {
      if (!doc.data_block_name.empty()) break;  // first block only
      doc.data_block_name = tok.text.substr(5);
      ++i;
    } else if (is_keyword(tok, "loop_")) {
      ++i;
      std::vector<std::string> tags;
      while (i < tokens.size() && is_tag(tokens[i])) tags.push_back(detail::lower(tokens[i++].text));
      if (tags.empty()) throw Error(ErrorCode::MalformedLoop, "loop_ without tags");
      std::vector<std::string> values;
      while (i < tokens.size() && !is_tag(tokens[i]) && !is_keyword(tokens[i], "loop_") &&
             !is_keyword(tokens[i], "data_")) {
        values.push_back(tokens[i++].text);
      }
      if (values.size() % tags.size() != 0) {
        throw Error(ErrorCode::MalformedLoop, "value count not a multiple of the " +
                                                  std::to_string(tags.size()) + " loop tags");
      }
      std::map<std::string, std::vector<std::string>> loop;
      for (std::size_t k = 0; k < values.size(); ++k) loop[tags[k % tags.size()]].push_back(values[k]);
      for (const auto& t : tags) loop[t];  // empty columns for value-less loops
      loops.push_back(std::move(loop));
    } else if (is_tag(tok)) {
      if (i + 1 >= tokens.size() || (is_tag(tokens[i + 1]) && !tokens[i + 1].quoted)) {
        throw Error(ErrorCode::MalformedLoop, "tag " + tok.text + " has no value");
      }
      doc.fields[detail::lower(tok.text)] = tokens[i + 1].text;
      i += 2;
    } else {
      throw Error(ErrorCode::MalformedLoop, "unexpected token '" + tok.text + "'");
    }
  }

  for (const char* tag : {"_cell_length_a", "_cell_length_b", "_cell_length_c", "_cell_angle_alpha",
                          "_cell_angle_beta", "_cell_angle_gamma"}) {
    if (!doc.fields.count(tag)) throw Error(ErrorCode::MissingField, tag);
  }

  for (auto& loop : loops) {
    for (const char* tag : {"_symmetry_equiv_pos_as_xyz", "_space_group_symop_operation_xyz"}) {
      if (loop.count(tag)) doc.symmetry_ops_loop = loop[tag];
    }
    const bool has_frac = loop.count("_atom_site_fract_x") > 0;
    const bool has_cart = loop.count("_atom_site_cartn_x") > 0;
    if (has_cart && !has_frac) {
      throw Error(ErrorCode::MalformedLoop, "Cartesian atom sites are not supported");
    }
    if (!has_frac) continue;
    for (const char* tag : {"_atom_site_fract_y", "_atom_site_fract_z"}) {
      if (!loop.count(tag)) throw Error(ErrorCode::MissingField, tag);
    }
    const auto& xs = loop["_atom_site_fract_x"];
    for (std::size_t r = 0; r < xs.size(); ++r) {
      AtomSite site;
      if (loop.count("_atom_site_label")) site.label = loop["_atom_site_label"][r];
      if (loop.count("_atom_site_type_symbol")) {
        site.symbol = loop["_atom_site_type_symbol"][r];
      } else if (!site.label.empty()) {
        site.symbol = site.label;
      } else {
        throw Error(ErrorCode::MissingField, "_atom_site_type_symbol");
      }
      site.frac = Vec3(detail::cif_number(xs[r], "_atom_site_fract_x"),
                       detail::cif_number(loop["_atom_site_fract_y"][r], "_atom_site_fract_y"),
                       detail::cif_number(loop["_atom_site_fract_z"][r], "_atom_site_fract_z"));
      if (loop.count("_atom_site_occupancy")) {
        const auto& occ = loop["_atom_site_occupancy"][r];
        site.occupancy = (occ == "." || occ == "?") ? 1.0 : detail::cif_number(occ, "_atom_site_occupancy");
      }
      doc.atom_site_loop.push_back(std::move(site));
    }
  }
  if (doc.atom_site_loop.empty()) throw Error(ErrorCode::MissingField, "atom site loop");
  return doc;
}

/// Builds the full-cell crystal: every site expanded by every listed
/// operation, duplicates within 1e-4 (fractional) merged.
inline Crystal crystal_from_cif(const CifDocument& doc) {
  const auto num = [&](const char* tag) { return detail::cif_number(doc.fields.at(tag), tag); };
  const LatticeParameters params{num("_cell_length_a"),    num("_cell_length_b"),   num("_cell_length_c"),
                                 num("_cell_angle_alpha"), num("_cell_angle_beta"), num("_cell_angle_gamma")};
  const Mat3 lattice = lattice_from_params(params);

  std::vector<SymmetryOperation> ops;
  if (doc.symmetry_ops_loop) {
    for (const auto& s : *doc.symmetry_ops_loop) ops.push_back(parse_xyz_triplet(s));
  }
  if (ops.empty()) ops.push_back(SymmetryOperation{});

  std::vector<int> species;
  std::vector<Vec3> frac;
  for (const auto& site : doc.atom_site_loop) {
    if (std::abs(site.occupancy - 1.0) > 1e-6) {
      throw Error(ErrorCode::PartialOccupancy, "site " + site.label + " has occupancy " + std::to_string(site.occupancy));
    }
    const int z = detail::element_from_site_symbol(site.symbol);
    for (const auto& op : ops) {
      const Vec3 p = wrap_unit(op.apply(site.frac));
      bool duplicate = false;
      for (std::size_t k = 0; k < frac.size(); ++k) {
        if (frac_max_distance(frac[k], p) < 1e-4) {
          if (species[k] != z) {
            throw Error(ErrorCode::SpeciesClash, "sites of different species coincide at " + site.label);
          }
          duplicate = true;
          break;
        }
      }
      if (!duplicate) {
        species.push_back(z);
        frac.push_back(p);
      }
    }
  }
  return Crystal(std::move(species), std::move(frac), lattice);
}

inline Crystal parse_cif(std::string_view text) { return crystal_from_cif(parse_cif_document(text)); }

/// Reduced formula with elements by ascending atomic number, unit counts
/// omitted ("O3Al2", "ClCs").
inline std::string reduced_formula(const std::vector<int>& species) {
  std::map<int, long> counts;
  for (int z : species) ++counts[z];
  long g = 0;
  for (const auto& [z, n] : counts) g = std::gcd(g, n);
  std::string out;
  for (const auto& [z, n] : counts) {
    out += element_symbol(z);
    if (n / g != 1) out += std::to_string(n / g);
  }
  return out;
}

/// P1 CIF with 6-decimal cell and coordinates.
inline std::string write_cif(const Crystal& crystal) {
  const auto p = params_from_lattice(crystal.lattice());
  std::string out;
  char buf[160];
  out += "data_" + reduced_formula(crystal.species()) + "\n";
  out += "_symmetry_space_group_name_H-M   'P 1'\n";
  const std::pair<const char*, double> cell[] = {{"_cell_length_a", p.a},     {"_cell_length_b", p.b},
                                                 {"_cell_length_c", p.c},     {"_cell_angle_alpha", p.alpha},
                                                 {"_cell_angle_beta", p.beta}, {"_cell_angle_gamma", p.gamma}};
  for (const auto& [tag, value] : cell) {
    std::snprintf(buf, sizeof buf, "%-20s%.6f\n", tag, value);
    out += buf;
  }
  out += "loop_\n _symmetry_equiv_pos_as_xyz\n  'x, y, z'\n";
  out += "loop_\n _atom_site_label\n _atom_site_type_symbol\n _atom_site_fract_x\n _atom_site_fract_y\n"
         " _atom_site_fract_z\n _atom_site_occupancy\n";
  for (std::size_t i = 0; i < crystal.size(); ++i) {
    const auto symbol = std::string(element_symbol(crystal.species()[i]));
    const Vec3& f = crystal.frac_positions()[i];
    std::snprintf(buf, sizeof buf, "  %s%zu  %s  %.6f  %.6f  %.6f  1\n", symbol.c_str(), i, symbol.c_str(), f.x(),
                  f.y(), f.z());
    out += buf;
  }
  return out;
}

}  // namespace mat2seq
