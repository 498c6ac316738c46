#include <gtest/gtest.h>

#include <random>

#include "mat2seq/canonicalize.hpp"
#include "mat2seq/codec.hpp"
#include "mat2seq/corpus.hpp"
#include "mat2seq/verify.hpp"
#include "oracles.hpp"

using namespace mat2seq;

namespace {

const Crystal& nacl() {
  static const Crystal c = [] {
    for (auto& e : prototype_corpus()) {
      if (e.id == "proto_NaCl") return e.crystal;
    }
    throw std::logic_error("missing prototype");
  }();
  return c;
}

Crystal cscl() { return Crystal({55, 17}, {Vec3::Zero(), Vec3(0.5, 0.5, 0.5)}, Mat3::Identity() * 4.12); }

}  // namespace

TEST(Transform, DeterministicForSeed) {
  const auto c = random_corpus(1, 4).front().crystal;
  for (auto kind : kAllTransforms) {
    const Crystal a = transform(c, kind, 77), b = transform(c, kind, 77);
    EXPECT_TRUE(a.lattice() == b.lattice());
    EXPECT_EQ(a.species(), b.species());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a.frac_positions()[i] == b.frac_positions()[i]);
  }
}

TEST(Transform, ReexpressPreservesVolume) {
  for (const auto& e : random_corpus(30, 8)) {
    const Crystal t = transform(e.crystal, TransformKind::ReexpressLattice, 5);
    EXPECT_NEAR(t.volume(), e.crystal.volume(), 1e-9 * e.crystal.volume()) << e.id;
  }
}

TEST(Transform, PreserveDistances) {
  for (const auto& e : random_corpus(30, 9)) {
    const auto ref = oracle::sorted_pair_distances(e.crystal);
    for (auto kind : kAllTransforms) {
      const auto d = oracle::sorted_pair_distances(transform(e.crystal, kind, 11));
      ASSERT_EQ(d.size(), ref.size()) << e.id << " " << to_string(kind);
      // Construction snaps coordinates within 1e-8 of a cell face onto it,
      // and shift_boundary puts an atom 1e-10 from a face on purpose.
      const Mat3& l = e.crystal.lattice();
      const double tol = kind == TransformKind::ShiftBoundary
                             ? 2 * kWrapSnap * (l.row(0).norm() + l.row(1).norm() + l.row(2).norm())
                             : 1e-9;
      for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], ref[i], tol) << e.id << " " << to_string(kind);
    }
  }
}

TEST(Transform, ParseKindNames) {
  for (auto kind : kAllTransforms) EXPECT_EQ(parse_transform_kind(to_string(kind)), kind);
  EXPECT_FALSE(parse_transform_kind("mirror").has_value());
}

TEST(Hungarian, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 10);
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto& row : cost) {
      for (auto& x : row) x = u(rng);
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double best = 1e300;
    do {
      double s = 0;
      for (int i = 0; i < n; ++i) s += cost[i][perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto assign = detail::hungarian(cost);
    double got = 0;
    for (int i = 0; i < n; ++i) got += cost[i][assign[i]];
    EXPECT_NEAR(got, best, 1e-9);
  }
}

TEST(Match, SelfAndRoundTrip) {
  const auto m = match_structures(nacl(), nacl());
  EXPECT_TRUE(m.matched);
  EXPECT_NEAR(m.normalized_rmse, 0.0, 1e-9);
  const auto r = match_structures(nacl(), decode(encode(canonicalize(nacl()))));
  EXPECT_TRUE(r.matched);
  EXPECT_LE(r.normalized_rmse, 1e-3);
}

TEST(Match, DifferentStructures) {
  EXPECT_FALSE(match_structures(nacl(), cscl()).matched);
  const Crystal a({26}, {Vec3::Zero()}, Mat3::Identity() * 3);
  const Crystal b({26}, {Vec3::Zero()}, Mat3::Identity() * 4);
  EXPECT_FALSE(match_structures(a, b).matched);
}

TEST(Match, InvariantUnderTransforms) {
  for (const auto& e : random_corpus(20, 12)) {
    for (auto kind : kAllTransforms) {
      const auto m = match_structures(e.crystal, transform(e.crystal, kind, 3));
      EXPECT_TRUE(m.matched) << e.id << " " << to_string(kind);
      EXPECT_LE(m.normalized_rmse, 1e-6) << e.id;
    }
  }
}

TEST(FirstDifferingLine, Examples) {
  EXPECT_EQ(detail::first_differing_line("a\nb\n", "a\nb\n"), "");
  EXPECT_EQ(detail::first_differing_line("a\nb\n", "a\nc\n"), "line 2: 'b' vs 'c'");
}

TEST(VerifyUniqueness, NoTransformsGivesOne) {
  const auto report = verify_uniqueness(random_corpus(20, 1), 3, {}, 1);
  EXPECT_EQ(report.total, 60u);
  EXPECT_DOUBLE_EQ(report.rate, 1.0);
}

TEST(VerifyUniqueness, AllTransformsOnSmallCorpus) {
  auto corpus = random_corpus(40, 21);
  for (auto& e : prototype_corpus()) corpus.push_back(e);
  const std::vector<TransformKind> kinds(kAllTransforms.begin(), kAllTransforms.end());
  const auto report = verify_uniqueness(corpus, 3, kinds, 5);
  EXPECT_DOUBLE_EQ(report.rate, 1.0);
  for (const auto& f : report.failures) ADD_FAILURE() << f.id << " " << f.transform_chain << " " << f.first_diff_line;
}

TEST(VerifyUniqueness, MutationIsDetected) {
  CanonicalizeOptions broken;
  broken.disable_origin_selection = true;
  const std::vector<TransformKind> kinds(kAllTransforms.begin(), kAllTransforms.end());
  const auto report = verify_uniqueness(random_corpus(40, 21), 3, kinds, 5, broken);
  EXPECT_LT(report.rate, 1.0);
  EXPECT_FALSE(report.failures.empty());
}

TEST(VerifyUniqueness, ReportReproducibleAndJsonShape) {
  const auto corpus = random_corpus(10, 6);
  const std::vector<TransformKind> kinds{TransformKind::Rotate, TransformKind::PermuteAtoms};
  const auto a = verify_uniqueness(corpus, 2, kinds, 42);
  const auto b = verify_uniqueness(corpus, 2, kinds, 42);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  const auto j = a.to_json();
  EXPECT_TRUE(j.contains("total"));
  EXPECT_TRUE(j.contains("successes"));
  EXPECT_TRUE(j.contains("rate"));
  EXPECT_TRUE(j["failures"].is_array());
  EXPECT_EQ(j["total"].get<std::size_t>(), 20u);
}
