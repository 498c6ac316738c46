#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mat2seq/core.hpp"
#include "mat2seq/verify.hpp"

using namespace mat2seq;

namespace {

Mat3 rows(const Vec3& a, const Vec3& b, const Vec3& c) {
  Mat3 m;
  m.row(0) = a;
  m.row(1) = b;
  m.row(2) = c;
  return m;
}

}  // namespace

TEST(Crystal, WrapsPositionsOnConstruction) {
  Crystal c({11, 17}, {Vec3(1.25, -0.25, 0.9999999999), Vec3(0.5, 0.5, 0.5)}, Mat3::Identity() * 4);
  EXPECT_DOUBLE_EQ(c.frac_positions()[0].x(), 0.25);
  EXPECT_DOUBLE_EQ(c.frac_positions()[0].y(), 0.75);
  EXPECT_DOUBLE_EQ(c.frac_positions()[0].z(), 0.0);  // snapped, not 0.99999...
}

TEST(Crystal, RejectsInvalidInput) {
  EXPECT_THROW(Crystal({}, {}, Mat3::Identity()), Error);
  EXPECT_THROW(Crystal({1, 2}, {Vec3::Zero()}, Mat3::Identity()), Error);
  EXPECT_THROW(Crystal({104}, {Vec3::Zero()}, Mat3::Identity()), Error);
  EXPECT_THROW(Crystal({0}, {Vec3::Zero()}, Mat3::Identity()), Error);
  try {
    Crystal({1}, {Vec3::Zero()}, rows({1, 0, 0}, {0, 1, 0}, {1, 1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLattice);
  }
}

TEST(FracToCart, CubicBodyCentre) {
  Crystal c({26}, {Vec3(0.5, 0.5, 0.5)}, Mat3::Identity() * 4);
  EXPECT_TRUE(frac_to_cart(c, 0).isApprox(Vec3(2, 2, 2)));
}

TEST(FracToCart, OriginIsFixed) {
  Crystal c({26}, {Vec3::Zero()}, rows({3, 0.2, 0}, {1, 4, 0}, {0.5, 0.1, 5}));
  EXPECT_TRUE(frac_to_cart(c, 0).isZero());
}

TEST(FracToCart, HexagonalByHand) {
  // 0.5*(1,0,0) + 0.5*(0.5,0.866,0) = (0.75, 0.433, 0)
  Crystal c({26, 26}, {Vec3(1.0, 0, 0), Vec3(0.5, 0.5, 0)}, rows({1, 0, 0}, {0.5, 0.8660, 0}, {0, 0, 2}));
  EXPECT_TRUE(frac_to_cart(c, 0).isZero());
  const Vec3 p = frac_to_cart(c, 1);
  EXPECT_NEAR(p.x(), 0.75, 1e-12);
  EXPECT_NEAR(p.y(), 0.4330, 1e-12);
  EXPECT_NEAR(p.z(), 0.0, 1e-12);
}

TEST(FracToCart, IndexOutOfRange) {
  Crystal c({26}, {Vec3::Zero()}, Mat3::Identity());
  try {
    frac_to_cart(c, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(FracToCart, LinearAndRotationEquivariant) {
  std::mt19937_64 rng(3);
  const Mat3 l = rows({4, 0.3, -0.2}, {0.7, 5, 0.1}, {-0.4, 0.6, 6});
  const Vec3 f1(0.1, 0.2, 0.3), f2(0.35, 0.05, 0.6);
  EXPECT_TRUE(frac_to_cart(l, f1 + f2).isApprox(frac_to_cart(l, f1) + frac_to_cart(l, f2)));
  for (int k = 0; k < 20; ++k) {
    const Mat3 r = random_rotation(rng);
    EXPECT_TRUE(frac_to_cart(l * r.transpose(), f1).isApprox(r * frac_to_cart(l, f1), 1e-12));
  }
}

TEST(LatticeParameters, OrthogonalCell) {
  const auto p = params_from_lattice(Eigen::Vector3d(3, 4, 5).asDiagonal().toDenseMatrix());
  EXPECT_DOUBLE_EQ(p.a, 3);
  EXPECT_DOUBLE_EQ(p.b, 4);
  EXPECT_DOUBLE_EQ(p.c, 5);
  EXPECT_DOUBLE_EQ(p.alpha, 90);
  EXPECT_DOUBLE_EQ(p.beta, 90);
  EXPECT_DOUBLE_EQ(p.gamma, 90);
}

TEST(LatticeParameters, HexagonalCell) {
  const auto p = params_from_lattice(rows({1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}, {0, 0, 2}));
  EXPECT_NEAR(p.a, 1, 1e-12);
  EXPECT_NEAR(p.b, 1, 1e-12);
  EXPECT_NEAR(p.c, 2, 1e-12);
  EXPECT_NEAR(p.alpha, 90, 1e-10);
  EXPECT_NEAR(p.beta, 90, 1e-10);
  EXPECT_NEAR(p.gamma, 60, 1e-10);
}

TEST(LatticeParameters, UnrealizableAngles) {
  // 1 + 2(-1/2)^3 - 3/4 = 0
  EXPECT_NEAR(detail::gram_determinant(120, 120, 120), 0.0, 1e-15);
  try {
    lattice_from_params({1, 1, 1, 120, 120, 120});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnrealizableAngles);
  }
  EXPECT_THROW(lattice_from_params({1, 1, 1, 90, 90, 180}), Error);
  EXPECT_THROW(lattice_from_params({0, 1, 1, 90, 90, 90}), Error);
}

TEST(LatticeParameters, DegenerateLattice) {
  try {
    params_from_lattice(rows({1, 0, 0}, {0, 1, 0}, {1, 1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLattice);
  }
}

TEST(LatticeParameters, RoundTripAndConvention) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(2, 12), ang(50, 130);
  int checked = 0;
  while (checked < 200) {
    const LatticeParameters p{len(rng), len(rng), len(rng), ang(rng), ang(rng), ang(rng)};
    if (detail::gram_determinant(p.alpha, p.beta, p.gamma) <= 1e-3) continue;
    const Mat3 l = lattice_from_params(p);
    EXPECT_NEAR(l(0, 1), 0, 1e-12);
    EXPECT_NEAR(l(0, 2), 0, 1e-12);
    EXPECT_GT(l(0, 0), 0);
    EXPECT_NEAR(l(1, 2), 0, 1e-12);
    EXPECT_GT(l(1, 1), 0);
    EXPECT_GT(l(2, 2), 0);
    EXPECT_GT(l.determinant(), 0);
    const auto q = params_from_lattice(l);
    EXPECT_NEAR(q.a, p.a, 1e-8);
    EXPECT_NEAR(q.b, p.b, 1e-8);
    EXPECT_NEAR(q.c, p.c, 1e-8);
    EXPECT_NEAR(q.alpha, p.alpha, 1e-8);
    EXPECT_NEAR(q.beta, p.beta, 1e-8);
    EXPECT_NEAR(q.gamma, p.gamma, 1e-8);
    ++checked;
  }
}

TEST(LatticeParameters, RotationInvariant) {
  std::mt19937_64 rng(5);
  const Mat3 l = rows({4, 0.3, -0.2}, {0.7, 5, 0.1}, {-0.4, 0.6, 6});
  const auto ref = params_from_lattice(l);
  for (int k = 0; k < 50; ++k) {
    const auto p = params_from_lattice(l * random_rotation(rng).transpose());
    EXPECT_NEAR(p.a, ref.a, 1e-8);
    EXPECT_NEAR(p.b, ref.b, 1e-8);
    EXPECT_NEAR(p.c, ref.c, 1e-8);
    EXPECT_NEAR(p.alpha, ref.alpha, 1e-8);
    EXPECT_NEAR(p.beta, ref.beta, 1e-8);
    EXPECT_NEAR(p.gamma, ref.gamma, 1e-8);
  }
}

TEST(Unimodular, InverseIsExact) {
  IMat3 k;
  k << 1, 2, 0, 0, 1, -1, 0, 1, 0;
  ASSERT_EQ(k.determinant(), 1 * (0 + 1) - 2 * 0 + 0);
  EXPECT_EQ(k * unimodular_inverse(k), IMat3::Identity());
}

TEST(Quantize, Ticks) {
  EXPECT_EQ(quantize_ticks(0.03125), 313);  // 312.5 exactly, rounds up
  EXPECT_EQ(quantize_ticks(-0.03125), -312);
  EXPECT_EQ(frac_ticks(0.99996), 0);
  EXPECT_EQ(frac_ticks(0.99994), 9999);
}
