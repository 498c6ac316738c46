#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

#include "mat2seq/cif_io.hpp"
#include "mat2seq/corpus.hpp"

using namespace mat2seq;

namespace {

const std::string kNaCl = R"(data_NaCl
_cell_length_a 5.64
_cell_length_b 5.64
_cell_length_c 5.64
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
loop_
_atom_site_label
_atom_site_type_symbol
_atom_site_fract_x
_atom_site_fract_y
_atom_site_fract_z
_atom_site_occupancy
Na1 Na 0 0 0 1
Cl1 Cl 0.5 0.5 0.5 1
)";

const std::string kIdentityOps = R"(loop_
_symmetry_equiv_pos_as_xyz
'x, y, z'
)";

ErrorCode code_of(const std::string& text) {
  try {
    parse_cif(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidCrystal;  // no error: never expected by callers
}


}  // namespace

TEST(ParseCif, DirectFieldReading) {
  const Crystal c = parse_cif(kNaCl);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.species()[0], 11);
  EXPECT_EQ(c.species()[1], 17);
  EXPECT_NEAR(c.volume(), 5.64 * 5.64 * 5.64, 1e-9);
  EXPECT_TRUE(c.frac_positions()[1].isApprox(Vec3(0.5, 0.5, 0.5)));
}

TEST(ParseCif, IdentityOpsLoopAddsNothing) {
  const Crystal a = parse_cif(kNaCl);
  const Crystal b = parse_cif(kNaCl + kIdentityOps);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.species(), b.species());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a.frac_positions()[i].isApprox(b.frac_positions()[i]));
  EXPECT_TRUE(a.lattice().isApprox(b.lattice()));
}

TEST(ParseCif, MissingCellLength) {
  std::string text = kNaCl;
  text.replace(text.find("_cell_length_a 5.64\n"), 20, "");
  EXPECT_EQ(code_of(text), ErrorCode::MissingField);
}

TEST(ParseCif, PartialOccupancy) {
  std::string text = kNaCl;
  text.replace(text.find("Cl1 Cl 0.5 0.5 0.5 1"), 20, "Cl1 Cl 0.5 0.5 0.5 0.5");
  EXPECT_EQ(code_of(text), ErrorCode::PartialOccupancy);
}

TEST(ParseCif, UnknownElement) {
  std::string text = kNaCl;
  text.replace(text.find("Cl1 Cl"), 6, "Xx1 Xx");
  EXPECT_EQ(code_of(text), ErrorCode::UnknownElement);
}

TEST(ParseCif, MalformedLoop) {
  std::string text = kNaCl;
  text += "Na2 Na 0.25\n";
  EXPECT_EQ(code_of(text), ErrorCode::MalformedLoop);
}

TEST(ParseCif, CartesianSitesRejected) {
  const std::string text = R"(data_x
_cell_length_a 4
_cell_length_b 4
_cell_length_c 4
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
loop_
_atom_site_type_symbol
_atom_site_Cartn_x
_atom_site_Cartn_y
_atom_site_Cartn_z
Fe 0 0 0
)";
  EXPECT_EQ(code_of(text), ErrorCode::MalformedLoop);
}

TEST(ParseCif, OrderWhitespaceCommentsAndUncertainties) {
  const std::string text = R"(# leading comment
data_shuffled
_cell_angle_gamma   90.0
_cell_length_c 5.64(2)
# a comment between tags
_cell_angle_beta 90    _cell_angle_alpha 90
_cell_length_b	5.64
_cell_length_a 5.64
_symmetry_space_group_name_H-M 'F m -3 m'
loop_
_atom_site_type_symbol
_atom_site_label
_atom_site_fract_z
_atom_site_fract_y
_atom_site_fract_x
Cl Cl1 0.5 0.5 0.5
Na Na1 0.0 0.0 0.0
)";
  const Crystal c = parse_cif(text);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.species()[0], 17);
  EXPECT_NEAR(c.lattice()(2, 2), 5.64, 1e-9);
}

TEST(ParseCif, ExpandsSymmetryOperations) {
  // Rock salt in its conventional setting: two sites and the F-centering
  // translations expand to 8 atoms.
  const std::string text = R"(data_NaCl
_cell_length_a 5.64
_cell_length_b 5.64
_cell_length_c 5.64
_cell_angle_alpha 90
_cell_angle_beta 90
_cell_angle_gamma 90
loop_
_symmetry_equiv_pos_as_xyz
x,y,z
x,y+1/2,z+1/2
x+1/2,y,z+1/2
'x+1/2, y+1/2, z'
-x,-y,-z
loop_
_atom_site_label
_atom_site_type_symbol
_atom_site_fract_x
_atom_site_fract_y
_atom_site_fract_z
_atom_site_occupancy
Na1 Na 0 0 0 1.0
Cl1 Cl 0.5 0 0 1.0
)";
  const Crystal c = parse_cif(text);
  EXPECT_EQ(c.size(), 8u);
  EXPECT_EQ(std::count(c.species().begin(), c.species().end(), 11), 4);
}

TEST(WriteCif, SingleAtomHasOneSiteRow) {
  const Crystal c({29}, {Vec3::Zero()}, Mat3::Identity() * 3.61);
  const std::string text = write_cif(c);
  EXPECT_NE(text.find("_symmetry_equiv_pos_as_xyz"), std::string::npos);
  EXPECT_NE(text.find("'x, y, z'"), std::string::npos);
  EXPECT_EQ(parse_cif_document(text).atom_site_loop.size(), 1u);
}

TEST(WriteCif, SixDecimalCellLengths) {
  const std::string text = write_cif(parse_cif(kNaCl));
  EXPECT_NE(text.find("_cell_length_a      5.640000\n"), std::string::npos);
  EXPECT_NE(text.find("_cell_angle_gamma   90.000000\n"), std::string::npos);
}

TEST(WriteCif, RoundTripOnRandomCrystals) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    const Crystal m = random_crystal(rng);
    const Crystal back = parse_cif(write_cif(m));
    ASSERT_EQ(back.size(), m.size());
    auto sa = m.species(), sb = back.species();
    EXPECT_EQ(sa, sb);
    for (std::size_t i = 0; i < m.size(); ++i) {
      EXPECT_LE(frac_max_distance(m.frac_positions()[i], back.frac_positions()[i]), 1e-6);
    }
    const auto pa = params_from_lattice(m.lattice()), pb = params_from_lattice(back.lattice());
    EXPECT_NEAR(pa.a, pb.a, 1e-6);
    EXPECT_NEAR(pa.gamma, pb.gamma, 1e-6);
  }
}

TEST(ReducedFormula, AscendingAtomicNumber) {
  EXPECT_EQ(reduced_formula({55, 17}), "ClCs");
  EXPECT_EQ(reduced_formula({8, 8, 8, 13, 13}), "O3Al2");
  EXPECT_EQ(reduced_formula({22, 22, 8, 8, 8, 8}), "O2Ti");
  EXPECT_EQ(reduced_formula({6, 6, 6, 6}), "C");
}
