#include <gtest/gtest.h>

#include <random>

#include "mat2seq/canonicalize.hpp"
#include "mat2seq/codec.hpp"
#include "mat2seq/corpus.hpp"
#include "mat2seq/verify.hpp"
#include "oracles.hpp"

using namespace mat2seq;

namespace {

Crystal cscl() { return Crystal({55, 17}, {Vec3::Zero(), Vec3(0.5, 0.5, 0.5)}, Mat3::Identity() * 4.12); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidCrystal;
}

CanonicalCell p1_cell(int k) {
  CanonicalCell cell;
  cell.params = {4, 5, 6, 90, 90, 90};
  cell.operations = {SymmetryOperation{}};
  cell.formula = "O" + (k > 1 ? std::to_string(k) : std::string());
  cell.space_group_label = "P1";
  for (int i = 0; i < k; ++i) cell.atoms.push_back({8, Vec3(0.1 * i, 0.05 * i + 0.01, 0.2), 1});
  return cell;
}

}  // namespace

TEST(Quantize, Examples) {
  EXPECT_EQ(quantize(1.0 / 3.0), "0.3333");
  EXPECT_EQ(quantize(90.0), "90.0000");
  EXPECT_EQ(quantize(0.03125), "0.0313");
  EXPECT_EQ(quantize_frac(0.99996), "0.0000");
  EXPECT_EQ(quantize_frac(0.5), "0.5000");
}

TEST(Encode, CsClLayout) {
  const auto seq = encode(canonicalize(cscl()));
  std::string expected_head;
  for (int i = 0; i < kPropertySlots; ++i) expected_head += "prop: unknown_prop\n";
  expected_head += "formula: ClCs\n";
  ASSERT_GE(seq.text.size(), expected_head.size());
  EXPECT_EQ(seq.text.substr(0, expected_head.size()), expected_head);
  EXPECT_NE(seq.text.find("space_group_symbol: "), std::string::npos);
  EXPECT_NE(seq.text.find("lattice_parameters: a: 4.1200, b: 4.1200, c: 4.1200, alpha: 90.0000, beta: 90.0000, "
                          "gamma: 90.0000\n"),
            std::string::npos);
  EXPECT_NE(seq.text.find("atoms: 2\nCl 1 0.0000 0.0000 0.0000\nCs 1 0.5000 0.5000 0.5000\n"), std::string::npos);
  EXPECT_EQ(detokenize(seq.tokens), seq.text);
}

TEST(Encode, Deterministic) {
  for (const auto& e : prototype_corpus()) {
    const auto cell = canonicalize(e.crystal);
    EXPECT_EQ(encode(cell).text, encode(cell).text) << e.id;
    EXPECT_EQ(encode(cell).tokens, encode(cell).tokens) << e.id;
  }
}

TEST(Encode, UnsupportedElement) {
  CanonicalCell cell = p1_cell(1);
  cell.atoms[0].z = 100;
  cell.formula = "Fm";
  EXPECT_EQ(code_of([&] { encode(cell); }), ErrorCode::UnsupportedElement);
}

TEST(Encode, IntegerOutOfRange) {
  CanonicalCell cell = p1_cell(1);
  cell.atoms[0].multiplicity = 301;
  EXPECT_EQ(code_of([&] { encode(cell); }), ErrorCode::ValueOutOfRange);
  cell = p1_cell(1);
  cell.formula = "O301";
  EXPECT_EQ(code_of([&] { encode(cell); }), ErrorCode::ValueOutOfRange);
}

TEST(Encode, PropertyBinsFillLeadingSlots) {
  const auto seq = encode(canonicalize(cscl()), {{"band_gap", 7}, {"energy", 0}});
  EXPECT_EQ(seq.text.substr(0, 32), "prop: 7\nprop: 0\nprop: unknown_pr");
  const auto parsed = parse_sequence(seq.text);
  ASSERT_EQ(parsed.property_bins.size(), 10u);
  EXPECT_EQ(parsed.property_bins[0], 7);
  EXPECT_EQ(parsed.property_bins[1], 0);
  EXPECT_FALSE(parsed.property_bins[2].has_value());
}

TEST(Decode, IdentityOnlyGivesInputAtoms) {
  for (int k = 1; k <= 4; ++k) {
    const auto seq = encode(p1_cell(k));
    const Crystal c = decode(seq);
    EXPECT_EQ(c.size(), static_cast<std::size_t>(k));
    const auto p = params_from_lattice(c.lattice());
    EXPECT_NEAR(p.a, 4, 1e-9);
    EXPECT_NEAR(p.c, 6, 1e-9);
  }
}

TEST(Decode, TruncatedInputReportsPosition) {
  const auto seq = encode(canonicalize(cscl()));
  const std::string truncated = seq.text.substr(0, seq.text.size() - 5);
  try {
    decode(truncated);
    FAIL();
  } catch (const ParseError& e) {
    const auto lines = static_cast<std::size_t>(std::count(truncated.begin(), truncated.end(), '\n'));
    EXPECT_EQ(e.line(), lines + 1);
    EXPECT_GE(e.column(), 1u);
  }
}

TEST(Decode, EmptyInput) {
  try {
    decode(std::string());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Decode, MultiplicityMismatch) {
  auto text = encode(canonicalize(cscl())).text;
  const auto pos = text.find("Cl 1 ");
  text.replace(pos, 5, "Cl 2 ");
  EXPECT_EQ(code_of([&] { decode(text); }), ErrorCode::MultiplicityMismatch);
}

TEST(Decode, RoundTripMatches) {
  for (const auto& e : prototype_corpus()) {
    const Crystal back = decode(encode(canonicalize(e.crystal)));
    const auto m = match_structures(e.crystal, back);
    EXPECT_TRUE(m.matched) << e.id;
    EXPECT_LE(m.normalized_rmse, 1e-3) << e.id;
  }
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("0.1250").size(), 6u);
  EXPECT_EQ(tokenize("lattice_parameters").size(), 1u);
  EXPECT_EQ(tokenize("atoms: 12\n").size(), 5u);  // atoms : space 12 newline
  EXPECT_EQ(code_of([] { tokenize("atoms: 301\n"); }), ErrorCode::UnknownToken);
  EXPECT_EQ(code_of([] { tokenize("#"); }), ErrorCode::UnknownToken);
}

TEST(Tokenize, LabelIsSingleToken) {
  const auto ids = tokenize("space_group_symbol: P4_2/mnm\n");
  ASSERT_EQ(ids.size(), 5u);
  EXPECT_EQ(vocabulary().token(ids[3]), "P4_2/mnm");
}

TEST(Tokenize, DetokenizeInverts) {
  for (const auto& e : random_corpus(50, 3)) {
    const auto seq = encode(canonicalize(e.crystal));
    EXPECT_EQ(detokenize(tokenize(seq.text)), seq.text) << e.id;
  }
}

TEST(Tokenize, VocabularyIsDense) {
  const auto& v = vocabulary();
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v.id(v.token(static_cast<int>(i))), static_cast<int>(i));
  EXPECT_EQ(code_of([&] { v.token(static_cast<int>(v.size())); }), ErrorCode::UnknownToken);
}

TEST(BinProperty, Examples) {
  EXPECT_EQ(bin_property(0.7, 0.5), 1);
  EXPECT_EQ(bin_property(0.0, 0.5), 0);
  EXPECT_EQ(bin_property(3.7, 0.5), 7);
  EXPECT_EQ(code_of([] { bin_property(-0.1, 0.5); }), ErrorCode::NegativeValue);
}

// Origin on a general position makes every translation a 4-decimal value;
// special sites must still decode with their declared multiplicity.
TEST(Decode, GeneralPositionOriginWithSpecialSites) {
  std::mt19937_64 rng(881);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (const auto& e : prototype_corpus()) {
    const auto prepared = detail::prepare(e.crystal, kDefaultSymprec);
    const auto& ops = prepared.symmetry.operations;
    for (int attempt = 0; attempt < 60; ++attempt) {
      const std::vector<IrreducibleAtom> irr{{3, Vec3(u(rng), u(rng), u(rng)), 1},
                                             {64, prepared.crystal.frac_positions()[0], 1}};
      const auto full = reconstruct_full_cell(irr, ops);
      std::vector<int> species;
      std::vector<Vec3> frac;
      for (const auto& a : full) {
        species.push_back(a.z);
        frac.push_back(a.frac);
      }
      const Crystal c(species, frac, prepared.crystal.lattice() * 2.0);
      const auto d = oracle::sorted_pair_distances(c);
      if (!d.empty() && d.front() < 1.0) continue;
      // Samples within symprec of a higher symmetry are symmetrized on
      // encoding; keep only those whose group is exactly the generating one.
      if (detect_operations(c).size() != ops.size()) continue;
      const auto seq = encode(canonicalize(c));
      const Crystal back = decode(seq);
      EXPECT_EQ(back.size(), c.size()) << e.id;
      EXPECT_EQ(encode(canonicalize(back)).text, seq.text) << e.id;
      const auto m = match_structures(c, back);
      EXPECT_TRUE(m.matched && m.normalized_rmse <= 1e-3) << e.id << " " << m.normalized_rmse;
      ++checked;
      break;
    }
  }
  EXPECT_GE(checked, 10);
}
