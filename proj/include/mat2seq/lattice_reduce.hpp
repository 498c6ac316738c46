#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "mat2seq/core.hpp"

namespace mat2seq {

struct NiggliResult {
  Crystal crystal;
  IMat3 transform;  // reduced lattice = transform * input lattice
};

namespace detail {

inline int sign_eps(double x, double eps) { return x > eps ? 1 : (x < -eps ? -1 : 0); }

inline double niggli_epsilon(const Mat3& lattice) { return 1e-5 * std::cbrt(std::abs(lattice.determinant())); }

/// Stabilized Krivy-Gruber reduction. Returns K with K * lattice reduced,
/// det(K) = +1.
inline IMat3 niggli_transform(const Mat3& lattice) {
  if (!lattice.allFinite() || std::abs(lattice.determinant()) <= 1e-8) {
    throw Error(ErrorCode::DegenerateLattice, "lattice vectors are collinear or coplanar");
  }
  const double eps = niggli_epsilon(lattice);
  IMat3 k = IMat3::Identity();
  Mat3 l = lattice;
  double A, B, C, xi, eta, zeta;
  const auto metric = [&] {
    const Vec3 a = l.row(0), b = l.row(1), c = l.row(2);
    A = a.dot(a);
    B = b.dot(b);
    C = c.dot(c);
    xi = 2 * b.dot(c);
    eta = 2 * a.dot(c);
    zeta = 2 * a.dot(b);
  };
  // Column-convention step matrix: new basis columns = old columns * m.
  const auto apply = [&](const IMat3& m) {
    k = m.transpose() * k;
    l = to_double(k) * lattice;
    metric();
  };
  const auto sgn = [](double x) { return x > 0 ? 1 : -1; };

  metric();
  for (int step = 0; step < 1000; ++step) {
    // A1
    if (A > B + eps || (std::abs(A - B) <= eps && std::abs(xi) > std::abs(eta) + eps)) {
      IMat3 m;
      m << 0, -1, 0, -1, 0, 0, 0, 0, -1;
      apply(m);
    }
    // A2
    if (B > C + eps || (std::abs(B - C) <= eps && std::abs(eta) > std::abs(zeta) + eps)) {
      IMat3 m;
      m << -1, 0, 0, 0, 0, -1, 0, -1, 0;
      apply(m);
      continue;
    }
    const int l_ = sign_eps(xi, eps), m_ = sign_eps(eta, eps), n_ = sign_eps(zeta, eps);
    if (l_ * m_ * n_ == 1) {
      // A3
      IMat3 m = IMat3::Identity();
      m(0, 0) = l_ == -1 ? -1 : 1;
      m(1, 1) = m_ == -1 ? -1 : 1;
      m(2, 2) = n_ == -1 ? -1 : 1;
      apply(m);
    } else {
      // A4
      std::array<int, 3> d{1, 1, 1};
      int* zero_slot = nullptr;
      const std::array<int, 3> s{l_, m_, n_};
      for (int i = 0; i < 3; ++i) {
        if (s[i] == 1) d[i] = -1;
        else if (s[i] == 0) zero_slot = &d[i];
      }
      if (d[0] * d[1] * d[2] < 0) {
        if (zero_slot) *zero_slot = -1;
      }
      IMat3 m = IMat3::Identity();
      m(0, 0) = d[0];
      m(1, 1) = d[1];
      m(2, 2) = d[2];
      if (m.determinant() == 1) apply(m);
    }
    // A5
    if (std::abs(xi) > B + eps || (std::abs(xi - B) <= eps && 2 * eta < zeta - eps) ||
        (std::abs(xi + B) <= eps && zeta < -eps)) {
      IMat3 m = IMat3::Identity();
      m(1, 2) = -sgn(xi);
      apply(m);
      continue;
    }
    // A6
    if (std::abs(eta) > A + eps || (std::abs(eta - A) <= eps && 2 * xi < zeta - eps) ||
        (std::abs(eta + A) <= eps && zeta < -eps)) {
      IMat3 m = IMat3::Identity();
      m(0, 2) = -sgn(eta);
      apply(m);
      continue;
    }
    // A7
    if (std::abs(zeta) > A + eps || (std::abs(zeta - A) <= eps && 2 * xi < eta - eps) ||
        (std::abs(zeta + A) <= eps && eta < -eps)) {
      IMat3 m = IMat3::Identity();
      m(0, 1) = -sgn(zeta);
      apply(m);
      continue;
    }
    // A8
    const double sum = xi + eta + zeta + A + B;
    if (sum < -eps || (std::abs(sum) <= eps && 2 * (A + eta) + zeta > eps)) {
      IMat3 m = IMat3::Identity();
      m(0, 2) = 1;
      m(1, 2) = 1;
      apply(m);
      continue;
    }
    return k;
  }
  throw Error(ErrorCode::NonConvergence, "Niggli reduction exceeded 1000 steps");
}

/// Re-expresses a crystal in the basis new_lattice = k * lattice
/// (k unimodular): f' = k^-T f.
inline Crystal change_basis(const Crystal& crystal, const IMat3& k) {
  const Mat3 m = to_double(unimodular_inverse(k)).transpose();
  std::vector<Vec3> frac;
  frac.reserve(crystal.size());
  for (const auto& f : crystal.frac_positions()) frac.push_back(m * f);
  return Crystal(crystal.species(), std::move(frac), to_double(k) * crystal.lattice());
}

}  // namespace detail

/// Niggli-reduced, right-handed re-expression of the crystal.
inline NiggliResult niggli_reduce(const Crystal& crystal) {
  IMat3 k = detail::niggli_transform(crystal.lattice());
  // Negating all three vectors keeps the reduced metric and flips handedness.
  if ((to_double(k) * crystal.lattice()).determinant() < 0) k = -k;
  return {detail::change_basis(crystal, k), k};
}

/// All right-handed bases K * lattice (K unimodular, entries in {-1,0,1})
/// with the same reduced metric as the Niggli-reduced `lattice`: equal
/// vector lengths and off-diagonal Gram entries all non-negative or all
/// non-positive, each within the Niggli epsilon. Includes the identity.
inline std::vector<IMat3> equivalent_reduced_bases(const Mat3& lattice) {
  const double eps = detail::niggli_epsilon(lattice);
  const Mat3 gram = lattice * lattice.transpose();
  std::array<std::vector<IVec3>, 3> rows;
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      for (int z = -1; z <= 1; ++z) {
        const IVec3 v(x, y, z);
        if (v.isZero()) continue;
        const Vec3 vd = v.cast<double>();
        const double len2 = vd.dot(gram * vd);
        for (int i = 0; i < 3; ++i) {
          if (std::abs(len2 - gram(i, i)) <= eps) rows[i].push_back(v);
        }
      }
    }
  }
  std::vector<IMat3> out;
  for (const auto& r0 : rows[0]) {
    for (const auto& r1 : rows[1]) {
      for (const auto& r2 : rows[2]) {
        IMat3 k;
        k.row(0) = r0;
        k.row(1) = r1;
        k.row(2) = r2;
        if (k.determinant() != 1) continue;
        const Mat3 kd = to_double(k);
        const Mat3 g = kd * gram * kd.transpose();
        const double off[3] = {g(1, 2), g(0, 2), g(0, 1)};
        const bool all_nonneg = std::all_of(std::begin(off), std::end(off), [&](double v) { return v >= -eps; });
        const bool all_nonpos = std::all_of(std::begin(off), std::end(off), [&](double v) { return v <= eps; });
        if (all_nonneg || all_nonpos) out.push_back(k);
      }
    }
  }
  return out;
}

namespace detail {

/// Row-style Hermite normal form basis of the integer row lattice spanned
/// by `gens` (full rank 3 assumed).
inline std::array<std::array<long, 3>, 3> hnf_basis(std::vector<std::array<long, 3>> gens) {
  std::size_t top = 0;
  for (int col = 0; col < 3; ++col) {
    while (true) {
      std::size_t pivot = gens.size();
      for (std::size_t r = top; r < gens.size(); ++r) {
        if (gens[r][col] != 0 && (pivot == gens.size() || std::labs(gens[r][col]) < std::labs(gens[pivot][col]))) {
          pivot = r;
        }
      }
      if (pivot == gens.size()) break;
      std::swap(gens[top], gens[pivot]);
      bool done = true;
      for (std::size_t r = top + 1; r < gens.size(); ++r) {
        const long q = gens[r][col] / gens[top][col];
        for (int c = 0; c < 3; ++c) gens[r][c] -= q * gens[top][c];
        if (gens[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (gens[top][col] < 0) {
      for (auto& v : gens[top]) v = -v;
    }
    ++top;
  }
  return {gens[0], gens[1], gens[2]};
}

/// Returns, for a pure translation t, whether every atom maps onto an atom
/// of the same species within `tol` (fractional, per component).
inline bool is_pure_translation(const Crystal& crystal, const Vec3& t, double tol) {
  const auto& frac = crystal.frac_positions();
  const auto& species = crystal.species();
  for (std::size_t a = 0; a < crystal.size(); ++a) {
    const Vec3 target = frac[a] + t;
    bool found = false;
    for (std::size_t b = 0; b < crystal.size() && !found; ++b) {
      found = species[b] == species[a] && frac_max_distance(target, frac[b]) < tol;
    }
    if (!found) return false;
  }
  return true;
}

/// Index of the atoms of the least frequent species (ties: smaller Z).
inline std::vector<std::size_t> least_frequent_species_atoms(const Crystal& crystal) {
  std::map<int, int> counts;
  for (int z : crystal.species()) ++counts[z];
  int best_z = 0, best_n = 0;
  for (const auto& [z, n] : counts) {
    if (best_n == 0 || n < best_n) {
      best_z = z;
      best_n = n;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < crystal.size(); ++i) {
    if (crystal.species()[i] == best_z) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Pure lattice translations (fractional, excluding zero) mapping the
/// structure onto itself.
inline std::vector<Vec3> pure_translations(const Crystal& crystal, double tol = 0.01) {
  std::vector<Vec3> found;
  const auto anchors = detail::least_frequent_species_atoms(crystal);
  const Vec3& origin = crystal.frac_positions()[anchors.front()];
  for (std::size_t j = 1; j < anchors.size(); ++j) {
    const Vec3 t = wrap_unit(crystal.frac_positions()[anchors[j]] - origin);
    if (frac_max_distance(t, Vec3::Zero()) < tol) continue;
    bool seen = std::any_of(found.begin(), found.end(), [&](const Vec3& u) { return frac_max_distance(u, t) < tol; });
    if (!seen && detail::is_pure_translation(crystal, t, tol)) found.push_back(t);
  }
  return found;
}

/// Reduces a supercell to its primitive cell (returned Niggli-reduced);
/// returns the input unchanged when it is already primitive.
inline Crystal reduce_to_primitive(const Crystal& crystal, double tol = 0.01) {
  if (crystal.size() == 1) return crystal;
  const Crystal reduced = niggli_reduce(crystal).crystal;
  const auto translations = pure_translations(reduced, tol);
  if (translations.empty()) return crystal;

  const long n_lattice_points = static_cast<long>(translations.size()) + 1;
  if (reduced.size() % n_lattice_points != 0) {
    throw Error(ErrorCode::InconsistentSupercell, std::to_string(translations.size() + 1) +
                                                      " lattice points do not divide " +
                                                      std::to_string(reduced.size()) + " atoms");
  }
  std::vector<std::array<long, 3>> gens{{n_lattice_points, 0, 0}, {0, n_lattice_points, 0}, {0, 0, n_lattice_points}};
  for (const auto& t : translations) {
    std::array<long, 3> g{};
    for (int c = 0; c < 3; ++c) {
      const double scaled = t(c) * n_lattice_points;
      g[c] = std::lround(scaled);
      if (std::abs(scaled - g[c]) > tol * n_lattice_points) {
        throw Error(ErrorCode::InconsistentSupercell, "translation is not a lattice point of the sublattice");
      }
    }
    gens.push_back(g);
  }
  const auto hnf = detail::hnf_basis(gens);
  Mat3 basis;  // primitive lattice = basis * reduced lattice
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) basis(r, c) = static_cast<double>(hnf[r][c]) / n_lattice_points;
  }
  const double ratio = std::abs(basis.determinant()) * n_lattice_points;
  if (std::abs(ratio - 1.0) > 1e-6) {
    throw Error(ErrorCode::InconsistentSupercell, "primitive basis has the wrong volume");
  }
  const Mat3 to_new = basis.inverse().transpose();
  const Mat3 lattice = basis * reduced.lattice();

  // Group each atom with its images under the pure translations (nearest
  // match, same tolerance as detection) and average the group in the new cell.
  const auto& pos = reduced.frac_positions();
  std::vector<int> group(reduced.size(), -1);
  std::vector<int> species;
  std::vector<Vec3> frac;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    if (group[i] >= 0) continue;
    const int g = static_cast<int>(frac.size());
    group[i] = g;
    const Vec3 anchor = to_new * pos[i];
    Vec3 sum = anchor;
    for (const auto& t : translations) {
      std::size_t best = reduced.size();
      double best_d = tol;
      for (std::size_t j = 0; j < reduced.size(); ++j) {
        if (reduced.species()[j] != reduced.species()[i]) continue;
        const double d = frac_max_distance(pos[i] + t, pos[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best == reduced.size() || group[best] >= 0) {
        throw Error(ErrorCode::InconsistentSupercell, "atoms do not split evenly over lattice points");
      }
      group[best] = g;
      sum += anchor + min_image_delta(to_new * pos[best] - anchor);
    }
    species.push_back(reduced.species()[i]);
    frac.push_back(sum / static_cast<double>(n_lattice_points));
  }
  return niggli_reduce(Crystal(std::move(species), std::move(frac), lattice)).crystal;
}

}  // namespace mat2seq
