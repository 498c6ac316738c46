#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mat2seq/core.hpp"
#include "mat2seq/detail/spacegroup_table.hpp"
#include "mat2seq/lattice_reduce.hpp"

namespace mat2seq {

inline constexpr double kDefaultSymprec = 0.01;
// Reconstructed images closer than this (fractional, per component) are one site.
inline constexpr double kReconstructTolerance = 1e-4;
// Decoding works from 4-decimal coordinates and translations, whose images
// scatter by a few 1e-4; sites are snapped and merged at this distance.
inline constexpr double kDecodeTolerance = 1e-3;

namespace detail {

/// Canonical operation order: rotation entries row-major, then translation.
inline bool operation_less(const SymmetryOperation& a, const SymmetryOperation& b) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (a.rotation(r, c) != b.rotation(r, c)) return a.rotation(r, c) < b.rotation(r, c);
    }
  }
  return frac_ticks(a.translation) < frac_ticks(b.translation);
}

inline SymmetryOperation compose(const SymmetryOperation& a, const SymmetryOperation& b) {
  return {a.rotation * b.rotation, wrap_unit(to_double(a.rotation) * b.translation + a.translation)};
}

/// Operations plus, for each, the atom permutation it induces.
struct SymmetryDetection {
  std::vector<SymmetryOperation> operations;
  std::vector<std::vector<int>> permutations;  // permutations[k][a] = image of atom a
};

inline std::vector<IMat3> metric_preserving_rotations(const Mat3& lattice, int max_entry, double symprec) {
  const Mat3 gram = lattice * lattice.transpose();
  const double rel = 2.0 * symprec;
  const auto close = [&](double value, int i, int j) {
    return std::abs(value - gram(i, j)) <= rel * std::sqrt(gram(i, i) * gram(j, j));
  };
  std::array<std::vector<IVec3>, 3> columns;
  for (int x = -max_entry; x <= max_entry; ++x) {
    for (int y = -max_entry; y <= max_entry; ++y) {
      for (int z = -max_entry; z <= max_entry; ++z) {
        const IVec3 v(x, y, z);
        if (v.isZero()) continue;
        const Vec3 vd = v.cast<double>();
        const double len2 = vd.dot(gram * vd);
        for (int j = 0; j < 3; ++j) {
          if (close(len2, j, j)) columns[j].push_back(v);
        }
      }
    }
  }
  std::vector<IMat3> out;
  for (const auto& c0 : columns[0]) {
    for (const auto& c1 : columns[1]) {
      if (!close(c0.cast<double>().dot(gram * c1.cast<double>()), 0, 1)) continue;
      for (const auto& c2 : columns[2]) {
        if (!close(c0.cast<double>().dot(gram * c2.cast<double>()), 0, 2)) continue;
        if (!close(c1.cast<double>().dot(gram * c2.cast<double>()), 1, 2)) continue;
        IMat3 w;
        w.col(0) = c0;
        w.col(1) = c1;
        w.col(2) = c2;
        const int det = w.determinant();
        if (det == 1 || det == -1) out.push_back(w);
      }
    }
  }
  return out;
}

/// Maps every atom through (w, t); returns the permutation or empty when
/// some atom has no same-species partner within symprec.
inline std::vector<int> induced_permutation(const Crystal& crystal, const IMat3& w, const Vec3& t,
                                            double symprec) {
  const auto& frac = crystal.frac_positions();
  const auto& species = crystal.species();
  const Mat3 wd = to_double(w);
  std::vector<int> perm(crystal.size(), -1);
  std::vector<char> used(crystal.size(), 0);
  for (std::size_t a = 0; a < crystal.size(); ++a) {
    const Vec3 image = wd * frac[a] + t;
    int best = -1;
    double best_d = symprec;
    for (std::size_t b = 0; b < crystal.size(); ++b) {
      if (species[b] != species[a] || used[b]) continue;
      const double d = frac_max_distance(image, frac[b]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(b);
      }
    }
    if (best < 0) return {};
    perm[a] = best;
    used[best] = 1;
  }
  return perm;
}

inline bool is_closed_group(const std::vector<SymmetryOperation>& ops, double tol) {
  const auto find = [&](const SymmetryOperation& x) {
    return std::any_of(ops.begin(), ops.end(), [&](const SymmetryOperation& y) {
      return y.rotation == x.rotation && frac_max_distance(y.translation, x.translation) < tol;
    });
  };
  if (!find(SymmetryOperation{})) return false;
  for (const auto& a : ops) {
    for (const auto& b : ops) {
      if (!find(compose(a, b))) return false;
    }
  }
  return true;
}

inline SymmetryDetection detect_with_range(const Crystal& crystal, double symprec, int max_entry) {
  const auto anchors = least_frequent_species_atoms(crystal);
  const auto& frac = crystal.frac_positions();
  const Vec3& anchor = frac[anchors.front()];
  SymmetryDetection found;
  for (const auto& w : metric_preserving_rotations(crystal.lattice(), max_entry, symprec)) {
    const Mat3 wd = to_double(w);
    std::vector<Vec3> accepted;
    for (std::size_t a : anchors) {
      const Vec3 t = wrap_unit(frac[a] - wd * anchor);
      if (std::any_of(accepted.begin(), accepted.end(),
                      [&](const Vec3& u) { return frac_max_distance(u, t) < symprec; })) {
        continue;
      }
      auto perm = induced_permutation(crystal, w, t, symprec);
      if (perm.empty()) continue;
      // Least-squares translation over all matched atoms.
      Vec3 shift = Vec3::Zero();
      for (std::size_t i = 0; i < crystal.size(); ++i) {
        shift += min_image_delta(frac[perm[i]] - (wd * frac[i] + t));
      }
      const Vec3 refined = wrap_unit(t + shift / static_cast<double>(crystal.size()));
      accepted.push_back(t);
      found.operations.push_back({w, refined});
      found.permutations.push_back(std::move(perm));
    }
  }
  return found;
}

}  // namespace detail

namespace detail {

inline SymmetryDetection detect_symmetry(const Crystal& crystal, double symprec = kDefaultSymprec) {
  for (int max_entry : {1, 2}) {
    auto found = detect_with_range(crystal, symprec, max_entry);
    if (is_closed_group(found.operations, 2 * symprec)) {
      std::vector<std::size_t> order(found.operations.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return operation_less(found.operations[x], found.operations[y]);
      });
      SymmetryDetection sorted;
      for (std::size_t i : order) {
        sorted.operations.push_back(found.operations[i]);
        sorted.permutations.push_back(found.permutations[i]);
      }
      return sorted;
    }
  }
  throw Error(ErrorCode::GroupClosureFailure,
              "detected operations do not form a group; retry with a smaller symprec");
}

}  // namespace detail

/// All space-group operations (W, t) of the crystal in its own basis, as a
/// closed group sorted in canonical operation order.
inline std::vector<SymmetryOperation> detect_operations(const Crystal& crystal, double symprec = kDefaultSymprec) {
  return detail::detect_symmetry(crystal, symprec).operations;
}

namespace detail {

/// Orbit index per atom from operation permutations.
inline std::vector<int> orbit_ids(std::size_t n_atoms, const std::vector<std::vector<int>>& permutations) {
  std::vector<int> id(n_atoms, -1);
  int next = 0;
  for (std::size_t a = 0; a < n_atoms; ++a) {
    if (id[a] >= 0) continue;
    for (const auto& perm : permutations) id[perm[a]] = next;
    id[a] = next;
    ++next;
  }
  return id;
}

}  // namespace detail

/// One representative per orbit, the orbit member with the smallest
/// quantized fractional coordinates; multiplicity is the orbit size.
inline std::vector<IrreducibleAtom> extract_irreducible(const Crystal& crystal,
                                                        const std::vector<SymmetryOperation>& ops,
                                                        double symprec = kDefaultSymprec) {
  std::vector<std::vector<int>> perms;
  for (const auto& op : ops) {
    auto perm = detail::induced_permutation(crystal, op.rotation, op.translation, symprec);
    if (perm.empty()) throw Error(ErrorCode::OrbitInconsistency, "operation does not map the structure");
    perms.push_back(std::move(perm));
  }
  const auto ids = detail::orbit_ids(crystal.size(), perms);
  const int n_orbits = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<IrreducibleAtom> out(n_orbits);
  std::vector<int> sizes(n_orbits, 0);
  for (std::size_t a = 0; a < crystal.size(); ++a) {
    const int o = ids[a];
    const Vec3& f = crystal.frac_positions()[a];
    if (sizes[o] == 0 || frac_ticks(f) < frac_ticks(out[o].frac)) {
      out[o].z = crystal.species()[a];
      out[o].frac = f;
    }
    ++sizes[o];
  }
  for (int o = 0; o < n_orbits; ++o) {
    if (ops.size() % sizes[o] != 0) {
      throw Error(ErrorCode::OrbitInconsistency, "orbit of size " + std::to_string(sizes[o]) +
                                                     " does not divide group order " +
                                                     std::to_string(ops.size()));
    }
    out[o].multiplicity = sizes[o];
  }
  return out;
}

struct ReconstructedAtom {
  int z = 0;
  Vec3 frac = Vec3::Zero();
};

namespace detail {

/// Moves a site onto the fixed set of its stabilizer: the mean of the
/// images that land within `tol` of it (taken unwrapped, next to the site).
inline Vec3 symmetrize_site(const Vec3& frac, const std::vector<SymmetryOperation>& ops,
                            double tol = kDecodeTolerance) {
  Vec3 sum = Vec3::Zero();
  int count = 0;
  for (const auto& op : ops) {
    const Vec3 delta = min_image_delta(op.apply(frac) - frac);
    if (delta.cwiseAbs().maxCoeff() < tol) {
      sum += frac + delta;
      ++count;
    }
  }
  return count == 0 ? frac : Vec3(sum / count);
}

/// Moves atoms onto exact positions of the detected group: translations are
/// refit from the atoms, then each atom becomes the mean of its pre-images.
/// A few alternations remove the symprec-level noise of approximate input.
inline Crystal symmetrize(const Crystal& crystal, SymmetryDetection& sym, int rounds = 3) {
  std::vector<Vec3> frac = crystal.frac_positions();
  std::vector<Mat3> inverse;
  for (const auto& op : sym.operations) inverse.push_back(to_double(unimodular_inverse(op.rotation)));
  for (int round = 0; round < rounds; ++round) {
    for (std::size_t n = 0; n < sym.operations.size(); ++n) {
      auto& op = sym.operations[n];
      Vec3 shift = Vec3::Zero();
      for (std::size_t a = 0; a < frac.size(); ++a) {
        shift += min_image_delta(frac[sym.permutations[n][a]] - op.apply(frac[a]));
      }
      op.translation = wrap_unit(Vec3(op.translation + shift / static_cast<double>(frac.size())));
    }
    std::vector<Vec3> next(frac.size());
    for (std::size_t a = 0; a < frac.size(); ++a) {
      Vec3 sum = Vec3::Zero();
      for (std::size_t n = 0; n < sym.operations.size(); ++n) {
        const Vec3 pre = inverse[n] * (frac[sym.permutations[n][a]] - sym.operations[n].translation);
        sum += min_image_delta(pre - frac[a]);
      }
      next[a] = frac[a] + sum / static_cast<double>(sym.operations.size());
    }
    frac = std::move(next);
  }
  return Crystal(crystal.species(), std::move(frac), crystal.lattice());
}

/// Orbit expansion with per-irreducible-atom image counts.
inline std::vector<ReconstructedAtom> reconstruct(const std::vector<IrreducibleAtom>& irr,
                                                  const std::vector<SymmetryOperation>& ops,
                                                  std::vector<int>* orbit_sizes,
                                                  double tol = kReconstructTolerance) {
  std::vector<ReconstructedAtom> atoms;
  if (orbit_sizes) orbit_sizes->assign(irr.size(), 0);
  for (std::size_t k = 0; k < irr.size(); ++k) {
    const auto& atom = irr[k];
    const auto add = [&](const Vec3& p) {
      for (const auto& existing : atoms) {
        if (frac_max_distance(existing.frac, p) < tol) {
          if (existing.z != atom.z) {
            throw Error(ErrorCode::SpeciesClash, std::string(element_symbol(existing.z)) + " and " +
                                                     std::string(element_symbol(atom.z)) +
                                                     " reconstruct onto the same site");
          }
          return;
        }
      }
      atoms.push_back({atom.z, p});
      if (orbit_sizes) ++(*orbit_sizes)[k];
    };
    add(wrap_unit(atom.frac));
    for (const auto& op : ops) add(wrap_unit(op.apply(atom.frac)));
  }
  return atoms;
}

}  // namespace detail

/// Full cell from irreducible atoms: every (W p + t) mod 1, duplicates merged.
inline std::vector<ReconstructedAtom> reconstruct_full_cell(const std::vector<IrreducibleAtom>& irr,
                                                            const std::vector<SymmetryOperation>& ops) {
  return detail::reconstruct(irr, ops, nullptr);
}

/// Rotation type: 1,2,3,4,6 for proper rotations, -1,-2,-3,-4,-6 for improper.
inline int rotation_type(const IMat3& w) {
  const int det = w.determinant();
  const int tr = w.trace();
  if (det == 1) {
    switch (tr) {
      case 3: return 1;
      case -1: return 2;
      case 0: return 3;
      case 1: return 4;
      case 2: return 6;
    }
  } else {
    switch (tr) {
      case -3: return -1;
      case 1: return -2;
      case 0: return -3;
      case -1: return -4;
      case -2: return -6;
    }
  }
  return 0;
}

/// True when the affine map has a fixed point modulo the lattice (no screw
/// or glide component).
inline bool has_fixed_point(const SymmetryOperation& op) {
  const int type = rotation_type(op.rotation);
  int order = 1;
  switch (type) {
    case 1: order = 1; break;
    case 2: case -1: case -2: order = 2; break;
    case 3: order = 3; break;
    case 4: case -4: order = 4; break;
    case 6: case -3: case -6: order = 6; break;
    default: return false;
  }
  Mat3 proj = Mat3::Zero();
  Mat3 power = Mat3::Identity();
  const Mat3 w = to_double(op.rotation);
  for (int k = 0; k < order; ++k) {
    proj += power;
    power = power * w;
  }
  proj /= order;
  const Vec3 intrinsic = proj * op.translation;
  for (int x = -3; x <= 3; ++x) {
    for (int y = -3; y <= 3; ++y) {
      for (int z = -3; z <= 3; ++z) {
        if ((proj * Vec3(x, y, z) - intrinsic).cwiseAbs().maxCoeff() < 1e-3) return true;
      }
    }
  }
  return false;
}

/// Hermann-Mauguin symbol when the operation set's fingerprint identifies a
/// single space-group type; otherwise "G<order>".
inline std::string classify_space_group(const std::vector<SymmetryOperation>& ops,
                                        [[maybe_unused]] const LatticeParameters& params = {}) {
  static constexpr std::array<int, 10> kTypes{1, 2, 3, 4, 6, -1, -2, -3, -4, -6};
  std::array<int, 10> counts{}, free{};
  for (const auto& op : ops) {
    const int type = rotation_type(op.rotation);
    const auto it = std::find(kTypes.begin(), kTypes.end(), type);
    if (it == kTypes.end()) continue;
    const auto slot = static_cast<std::size_t>(it - kTypes.begin());
    ++counts[slot];
    if (!has_fixed_point(op)) ++free[slot];
  }
  for (const auto& row : detail::kSpaceGroupFingerprints) {
    if (row.order == static_cast<int>(ops.size()) && row.counts == counts && row.fixed_point_free == free) {
      return row.symbol;
    }
  }
  return "G" + std::to_string(ops.size());
}

}  // namespace mat2seq
