#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mat2seq/cif_io.hpp"
#include "mat2seq/core.hpp"
#include "mat2seq/detail/spacegroup_table.hpp"
#include "mat2seq/symmetry.hpp"
#include "mat2seq/xyz_triplet.hpp"

namespace mat2seq {

inline constexpr int kPropertySlots = 10;
inline constexpr int kMaxIntegerToken = 300;
inline constexpr int kMaxFallbackGroupOrder = 48;

/// Fixed-point rendering with exactly four decimals, rounding half-up.
inline std::string quantize(double x) {
  const long long ticks = quantize_ticks(x);
  const long long mag = ticks < 0 ? -ticks : ticks;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%04lld", ticks < 0 ? "-" : "", mag / 10000, mag % 10000);
  return buf;
}

/// As quantize(), for fractional coordinates: "1.0000" wraps to "0.0000".
inline std::string quantize_frac(double x) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0.%04d", frac_ticks(x));
  return buf;
}

/// Property value to its interval index: [k*width, (k+1)*width) -> k.
inline int bin_property(double value, double width) {
  if (!(width > 0)) throw Error(ErrorCode::ValueOutOfRange, "bin width must be positive");
  if (value < 0) throw Error(ErrorCode::NegativeValue, "property value " + std::to_string(value));
  return static_cast<int>(std::floor(value / width));
}

struct PropertyBin {
  double value = 0;
  double width = 0;
  int bin = 0;
};

inline PropertyBin make_property_bin(double value, double width) { return {value, width, bin_property(value, width)}; }

/// Token <-> id mapping. Ids are dense and stable for a given build.
class TokenVocabulary {
 public:
  TokenVocabulary() {
    for (const char* special : {"<pad>", "space_group_symbol", "formula", "atoms", "lattice_parameters", "a", "b",
                                "c", "alpha", "beta", "gamma", "unknown_prop", ",", " ", ":", "\n"}) {
      add(special);
    }
    add("prop");
    add("operations");
    for (auto symbol : kSequenceElements) add(std::string(symbol));
    for (int i = 0; i <= kMaxIntegerToken; ++i) add(std::to_string(i));
    for (const char* ch : {".", "x", "y", "z", "-", "+", "/", "(", ")"}) add(ch);
    for (const auto& row : detail::kSpaceGroupFingerprints) add(row.symbol, true);
    for (int order = 1; order <= kMaxFallbackGroupOrder; ++order) add("G" + std::to_string(order), true);
    for (const auto& [token, id] : ids_) {
      if (!labels_.count(token) && !is_number(token)) {
        max_word_length_ = std::max(max_word_length_, token.size());
      }
    }
  }

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
      throw Error(ErrorCode::UnknownToken, "id " + std::to_string(id));
    }
    return tokens_[id];
  }
  std::optional<int> id(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  bool is_label(std::string_view token) const { return labels_.count(std::string(token)) > 0; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Greedy longest match over keywords, element symbols and punctuation.
  std::optional<std::pair<int, std::size_t>> match_word(std::string_view text) const {
    for (std::size_t len = std::min(max_word_length_, text.size()); len > 0; --len) {
      const std::string candidate(text.substr(0, len));
      if (labels_.count(candidate) || is_number(candidate)) continue;
      const auto it = ids_.find(candidate);
      if (it != ids_.end()) return std::make_pair(it->second, len);
    }
    return std::nullopt;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < tokens_.size(); ++i) j[tokens_[i]] = i;
    return j;
  }

 private:
  static bool is_number(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  }
  void add(const std::string& token, bool label = false) {
    if (ids_.count(token)) return;
    ids_[token] = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
    if (label) labels_[token] = true;
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  std::unordered_map<std::string, bool> labels_;
  std::size_t max_word_length_ = 1;
};

inline const TokenVocabulary& vocabulary() {
  static const TokenVocabulary vocab;
  return vocab;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t pos) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

/// Grammar-aware tokenization: labels only after "space_group_symbol: ",
/// integers as whole tokens, reals as digit and "." characters.
inline std::vector<int> tokenize(std::string_view text) {
  const auto& vocab = vocabulary();
  std::vector<int> out;
  const auto fail = [&](std::size_t pos, const std::string& what) {
    const auto [line, col] = detail::line_column(text, pos);
    throw Error(ErrorCode::UnknownToken, what + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  };
  const auto push = [&](std::string_view token, std::size_t pos) {
    const auto id = vocab.id(token);
    if (!id) fail(pos, "'" + std::string(token) + "'");
    out.push_back(*id);
  };
  static constexpr std::string_view kLabelPrefix = "space_group_symbol: ";

  std::size_t i = 0;
  bool line_start = true;
  while (i < text.size()) {
    if (line_start && text.substr(i, kLabelPrefix.size()) == kLabelPrefix) {
      push("space_group_symbol", i);
      push(":", i + 18);
      push(" ", i + 19);
      i += kLabelPrefix.size();
      std::size_t end = text.find('\n', i);
      if (end == std::string_view::npos) end = text.size();
      const auto label = text.substr(i, end - i);
      if (!vocab.is_label(label)) fail(i, "space group label '" + std::string(label) + "'");
      push(label, i);
      i = end;
      line_start = false;
      continue;
    }
    const char c = text[i];
    if (detail::is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && detail::is_digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && detail::is_digit(text[j])) ++j;
        for (std::size_t k = i; k < j; ++k) push(text.substr(k, 1), k);
      } else {
        const auto digits = text.substr(i, j - i);
        if (digits.size() > 3 || std::stoi(std::string(digits)) > kMaxIntegerToken ||
            (digits.size() > 1 && digits[0] == '0')) {
          fail(i, "integer '" + std::string(digits) + "'");
        }
        push(digits, i);
      }
      i = j;
      line_start = false;
      continue;
    }
    const auto word = vocab.match_word(text.substr(i));
    if (!word) fail(i, "'" + std::string(1, c) + "'");
    out.push_back(word->first);
    i += word->second;
    line_start = c == '\n';
  }
  return out;
}

inline std::string detokenize(const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) out += vocabulary().token(id);
  return out;
}

namespace detail {

inline std::string checked_int(long long value, const char* what) {
  if (value < 0 || value > kMaxIntegerToken) {
    throw Error(ErrorCode::ValueOutOfRange, std::string(what) + " " + std::to_string(value) + " exceeds " +
                                               std::to_string(kMaxIntegerToken));
  }
  return std::to_string(value);
}

inline void check_formula(const std::string& formula) {
  for (std::size_t i = 0; i < formula.size();) {
    if (is_digit(formula[i])) {
      std::size_t j = i;
      while (j < formula.size() && is_digit(formula[j])) ++j;
      checked_int(std::stoll(formula.substr(i, j - i)), "formula count");
      i = j;
    } else {
      ++i;
    }
  }
}

}  // namespace detail

/// Everything after the property lines: composition, symmetry, lattice and
/// irreducible atoms. Canonical candidates are compared on this text.
inline std::string encode_body(const CanonicalCell& cell) {
  for (const auto& atom : cell.atoms) {
    if (!in_sequence_vocabulary(atom.z)) {
      const auto symbol = element_symbol(atom.z);
      throw Error(ErrorCode::UnsupportedElement,
                  (symbol.empty() ? "Z=" + std::to_string(atom.z) : std::string(symbol)) + " is not in the vocabulary");
    }
  }
  detail::check_formula(cell.formula);
  std::string out;
  out += "formula: " + cell.formula + "\n";
  out += "space_group_symbol: " + cell.space_group_label + "\n";
  out += "operations: " + detail::checked_int(static_cast<long long>(cell.operations.size()), "operation count") + "\n";
  for (const auto& op : cell.operations) out += format_xyz_triplet(op) + "\n";
  const auto& p = cell.params;
  out += "lattice_parameters: a: " + quantize(p.a) + ", b: " + quantize(p.b) + ", c: " + quantize(p.c) +
         ", alpha: " + quantize(p.alpha) + ", beta: " + quantize(p.beta) + ", gamma: " + quantize(p.gamma) + "\n";
  out += "atoms: " + detail::checked_int(static_cast<long long>(cell.atoms.size()), "atom count") + "\n";
  for (const auto& atom : cell.atoms) {
    out += std::string(element_symbol(atom.z)) + " " + detail::checked_int(atom.multiplicity, "multiplicity") + " " +
           quantize_frac(atom.frac.x()) + " " + quantize_frac(atom.frac.y()) + " " + quantize_frac(atom.frac.z()) +
           "\n";
  }
  return out;
}

/// Serializes a canonical cell. `property_bins` fill the leading property
/// slots in order; remaining slots carry unknown_prop.
inline CrystalSequence encode(const CanonicalCell& cell,
                              const std::vector<std::pair<std::string, int>>& property_bins = {}) {
  if (property_bins.size() > static_cast<std::size_t>(kPropertySlots)) {
    throw Error(ErrorCode::ValueOutOfRange, "at most 10 property slots");
  }
  std::string text;
  for (int slot = 0; slot < kPropertySlots; ++slot) {
    if (slot < static_cast<int>(property_bins.size())) {
      text += "prop: " + detail::checked_int(property_bins[slot].second, "property bin") + "\n";
    } else {
      text += "prop: unknown_prop\n";
    }
  }
  text += encode_body(cell);
  auto tokens = tokenize(text);
  return {std::move(text), std::move(tokens)};
}

/// Parsed sequence contents.
struct ParsedSequence {
  std::vector<std::optional<int>> property_bins;
  CanonicalCell cell;
};

namespace detail {

class SequenceParser {
 public:
  explicit SequenceParser(std::string_view text) : text_(text) {}

  ParsedSequence parse() {
    ParsedSequence out;
    for (int slot = 0; slot < kPropertySlots; ++slot) {
      expect("prop: ");
      if (peek("unknown_prop")) {
        expect("unknown_prop");
        out.property_bins.push_back(std::nullopt);
      } else {
        out.property_bins.push_back(integer("property bin"));
      }
      expect("\n");
    }
    expect("formula: ");
    out.cell.formula = until_newline("formula");
    expect("\n");
    expect("space_group_symbol: ");
    out.cell.space_group_label = until_newline("space group label");
    expect("\n");
    expect("operations: ");
    const int n_ops = integer("operation count");
    expect("\n");
    for (int k = 0; k < n_ops; ++k) {
      const std::size_t start = pos_;
      const std::string triplet = until_newline("operation");
      try {
        out.cell.operations.push_back(parse_xyz_triplet(triplet));
      } catch (const Error& e) {
        fail_at(start, e.what());
      }
      expect("\n");
    }
    expect("lattice_parameters: a: ");
    out.cell.params.a = real("a");
    expect(", b: ");
    out.cell.params.b = real("b");
    expect(", c: ");
    out.cell.params.c = real("c");
    expect(", alpha: ");
    out.cell.params.alpha = real("alpha");
    expect(", beta: ");
    out.cell.params.beta = real("beta");
    expect(", gamma: ");
    out.cell.params.gamma = real("gamma");
    expect("\n");
    expect("atoms: ");
    const int n_atoms = integer("atom count");
    expect("\n");
    for (int k = 0; k < n_atoms; ++k) {
      IrreducibleAtom atom;
      const std::size_t start = pos_;
      std::string symbol;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) symbol += text_[pos_++];
      const auto z = atomic_number(symbol);
      if (!z || !in_sequence_vocabulary(*z)) fail_at(start, "expected element symbol");
      atom.z = *z;
      expect(" ");
      atom.multiplicity = integer("multiplicity");
      if (atom.multiplicity < 1) fail_at(pos_, "multiplicity must be positive");
      for (int c = 0; c < 3; ++c) {
        expect(" ");
        atom.frac(c) = real("fractional coordinate");
      }
      expect("\n");
      out.cell.atoms.push_back(atom);
    }
    if (pos_ != text_.size()) fail_at(pos_, "expected end of sequence");
    return out;
  }

 private:
  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
    const auto [line, col] = line_column(text_, pos);
    throw ParseError(line, col, what);
  }
  bool peek(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  void expect(std::string_view s) {
    if (!peek(s)) {
      std::string shown;
      for (char c : s) shown += c == '\n' ? std::string("\\n") : std::string(1, c);
      fail_at(pos_, "expected '" + shown + "'");
    }
    pos_ += s.size();
  }
  std::string until_newline(const char* what) {
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos || end == pos_) fail_at(pos_, std::string("expected ") + what);
    std::string s(text_.substr(pos_, end - pos_));
    pos_ = end;
    return s;
  }
  int integer(const char* what) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ == start || pos_ - start > 3) fail_at(start, std::string("expected integer ") + what);
    const int v = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (v > kMaxIntegerToken) fail_at(start, std::string(what) + " exceeds 300");
    return v;
  }
  double real(const char* what) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    const std::size_t int_digits = pos_ - start;
    if (int_digits == 0 || !peek(".")) fail_at(start, std::string("expected 4-decimal ") + what);
    ++pos_;
    const std::size_t frac_start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ - frac_start != 4) fail_at(start, std::string("expected 4-decimal ") + what);
    return std::stod(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ParsedSequence parse_sequence(std::string_view text) { return detail::SequenceParser(text).parse(); }

/// Rebuilds the full crystal: lattice from the six parameters, positions by
/// orbit expansion of the irreducible atoms.
inline Crystal decode_cell(const CanonicalCell& cell) {
  const Mat3 lattice = lattice_from_params(cell.params);
  std::vector<int> orbit_sizes;
  // Quantized special positions are pulled back onto their exact site.
  std::vector<IrreducibleAtom> reps = cell.atoms;
  for (auto& rep : reps) rep.frac = detail::symmetrize_site(rep.frac, cell.operations);
  const auto atoms = detail::reconstruct(reps, cell.operations, &orbit_sizes, kDecodeTolerance);
  for (std::size_t k = 0; k < cell.atoms.size(); ++k) {
    if (orbit_sizes[k] != cell.atoms[k].multiplicity) {
      throw Error(ErrorCode::MultiplicityMismatch,
                  "atom " + std::to_string(k + 1) + " declares multiplicity " +
                      std::to_string(cell.atoms[k].multiplicity) + " but reconstructs " +
                      std::to_string(orbit_sizes[k]) + " sites");
    }
  }
  std::vector<int> species;
  std::vector<Vec3> frac;
  for (const auto& a : atoms) {
    species.push_back(a.z);
    frac.push_back(a.frac);
  }
  if (species.empty()) throw Error(ErrorCode::InvalidCrystal, "sequence has no atoms");
  return Crystal(std::move(species), std::move(frac), lattice);
}

inline Crystal decode(std::string_view text) { return decode_cell(parse_sequence(text).cell); }
inline Crystal decode(const CrystalSequence& seq) { return decode(std::string_view(seq.text)); }

}  // namespace mat2seq
