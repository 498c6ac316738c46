#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mat2seq/cif_io.hpp"
#include "mat2seq/codec.hpp"
#include "mat2seq/core.hpp"
#include "mat2seq/lattice_reduce.hpp"
#include "mat2seq/symmetry.hpp"

namespace mat2seq {

/// Radii (Angstrom) for the density tie-breaking rules, compared in order.
inline constexpr std::array<double, 4> kRadiusLadder{3.0, 5.0, 8.0, 12.0};
// Neighbors count only when strictly closer than r by this margin (Angstrom).
inline constexpr double kDistanceMargin = 1e-6;
// A fractional offset counts as positive along an axis above this value.
inline constexpr double kOffsetEpsilon = 1e-8;

struct CanonicalizeOptions {
  double symprec = kDefaultSymprec;
  /// Harness self-test: skip origin selection and keep the first atom.
  bool disable_origin_selection = false;
  int max_fixed_point_iterations = 8;
};

namespace detail {

struct Neighbor {
  Vec3 offset;  // unwrapped fractional offset from the centre atom
  double distance;
  int z;
};

/// Periodic images of every atom within `radius` of atom i, excluding the
/// zero-offset self image.
inline std::vector<Neighbor> neighbors_within(const Crystal& crystal, std::size_t i, double radius) {
  const Mat3& l = crystal.lattice();
  const double volume = crystal.volume();
  std::array<double, 3> reach{};
  for (int a = 0; a < 3; ++a) {
    const Vec3 u = l.row((a + 1) % 3), v = l.row((a + 2) % 3);
    reach[a] = radius / (volume / u.cross(v).norm());
  }
  const Mat3 lt = l.transpose();
  const Vec3& centre = crystal.frac_positions()[i];
  std::vector<Neighbor> out;
  for (std::size_t j = 0; j < crystal.size(); ++j) {
    const Vec3 d = crystal.frac_positions()[j] - centre;
    const int x0 = static_cast<int>(std::ceil(-reach[0] - d.x())), x1 = static_cast<int>(std::floor(reach[0] - d.x()));
    const int y0 = static_cast<int>(std::ceil(-reach[1] - d.y())), y1 = static_cast<int>(std::floor(reach[1] - d.y()));
    const int z0 = static_cast<int>(std::ceil(-reach[2] - d.z())), z1 = static_cast<int>(std::floor(reach[2] - d.z()));
    for (int x = x0; x <= x1; ++x) {
      for (int y = y0; y <= y1; ++y) {
        for (int z = z0; z <= z1; ++z) {
          if (j == i && x == 0 && y == 0 && z == 0) continue;
          const Vec3 offset = d + Vec3(x, y, z);
          const double dist = (lt * offset).norm();
          if (dist < radius - kDistanceMargin) out.push_back({offset, dist, crystal.species()[j]});
        }
      }
    }
  }
  return out;
}

using DensityKey = std::array<long, kRadiusLadder.size()>;
using DirectionalKey = std::array<long, 3 * kRadiusLadder.size()>;

inline DensityKey density_key(const std::vector<Neighbor>& neighbors) {
  DensityKey key{};
  for (const auto& n : neighbors) {
    for (std::size_t r = 0; r < kRadiusLadder.size(); ++r) {
      if (n.distance < kRadiusLadder[r] - kDistanceMargin) key[r] += n.z;
    }
  }
  return key;
}

/// Directional densities over the ladder with offsets mapped by `to_basis`.
inline DirectionalKey directional_key(const std::vector<Neighbor>& neighbors, const Mat3& to_basis) {
  DirectionalKey key{};
  for (const auto& n : neighbors) {
    const Vec3 offset = to_basis * n.offset;
    for (std::size_t r = 0; r < kRadiusLadder.size(); ++r) {
      if (!(n.distance < kRadiusLadder[r] - kDistanceMargin)) continue;
      for (int a = 0; a < 3; ++a) {
        if (offset(a) > kOffsetEpsilon) key[3 * r + a] += n.z;
      }
    }
  }
  return key;
}

}  // namespace detail

/// Sum of atomic numbers of all periodic images strictly within r of atom i.
inline long local_density(const Crystal& crystal, std::size_t i, double r) {
  if (i >= crystal.size()) throw Error(ErrorCode::IndexOutOfRange, "atom index " + std::to_string(i));
  long sum = 0;
  for (const auto& n : detail::neighbors_within(crystal, i, r)) sum += n.z;
  return sum;
}

/// Densities restricted to neighbors with a positive fractional offset
/// along l1, l2 and l3 respectively.
inline std::array<long, 3> directional_densities(const Crystal& crystal, std::size_t i, double r) {
  if (i >= crystal.size()) throw Error(ErrorCode::IndexOutOfRange, "atom index " + std::to_string(i));
  std::array<long, 3> out{};
  for (const auto& n : detail::neighbors_within(crystal, i, r)) {
    for (int a = 0; a < 3; ++a) {
      if (n.offset(a) > kOffsetEpsilon) out[a] += n.z;
    }
  }
  return out;
}

/// Moves atom i to the origin: every position becomes (p_j - p_i) mod 1.
inline Crystal shift_origin(const Crystal& crystal, std::size_t i) {
  if (i >= crystal.size()) throw Error(ErrorCode::IndexOutOfRange, "atom index " + std::to_string(i));
  const Vec3 origin = crystal.frac_positions()[i];
  std::vector<Vec3> frac;
  frac.reserve(crystal.size());
  for (std::size_t j = 0; j < crystal.size(); ++j) {
    frac.push_back(j == i ? Vec3::Zero() : wrap_unit(Vec3(crystal.frac_positions()[j] - origin)));
  }
  return Crystal(crystal.species(), std::move(frac), crystal.lattice());
}

/// Sorts by (Z ascending, multiplicity descending, quantized fractional
/// coordinates ascending). Two atoms equal in every key are an error.
inline std::vector<IrreducibleAtom> order_atoms(std::vector<IrreducibleAtom> atoms) {
  const auto key = [](const IrreducibleAtom& a) { return std::make_tuple(a.z, -a.multiplicity, frac_ticks(a.frac)); };
  std::stable_sort(atoms.begin(), atoms.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
  for (std::size_t k = 1; k < atoms.size(); ++k) {
    if (key(atoms[k - 1]) == key(atoms[k])) {
      throw Error(ErrorCode::DuplicateAtom, std::string(element_symbol(atoms[k].z)) + " " + quantize_frac(atoms[k].frac.x()) +
                                                " " + quantize_frac(atoms[k].frac.y()) + " " +
                                                quantize_frac(atoms[k].frac.z()));
    }
  }
  return atoms;
}

namespace detail {

/// A reduced primitive cell with its symmetry, ready for frame selection.
struct PreparedCrystal {
  Crystal crystal;
  SymmetryDetection symmetry;
  std::vector<int> orbit;
  std::string formula;
  std::string label;
};

// Halvings of symprec tried when the detected group is inconsistent.
inline constexpr int kSymprecRetries = 4;

inline bool orbits_consistent(const std::vector<int>& orbit, std::size_t group_order) {
  std::map<int, std::size_t> sizes;
  for (int id : orbit) ++sizes[id];
  return std::all_of(sizes.begin(), sizes.end(), [&](const auto& kv) { return group_order % kv.second == 0; });
}

inline PreparedCrystal prepare(const Crystal& input, double symprec) {
  Crystal reduced = niggli_reduce(input).crystal;
  reduced = reduce_to_primitive(reduced, symprec);
  for (int attempt = 0;; ++attempt, symprec /= 2) {
    try {
      auto symmetry = detect_symmetry(reduced, symprec);
      auto orbit = orbit_ids(reduced.size(), symmetry.permutations);
      if (!orbits_consistent(orbit, symmetry.operations.size())) {
        throw Error(ErrorCode::OrbitInconsistency, "orbit sizes do not divide the group order");
      }
      Crystal exact = symmetrize(reduced, symmetry);
      auto formula = reduced_formula(exact.species());
      auto label = classify_space_group(symmetry.operations);
      return {std::move(exact), std::move(symmetry), std::move(orbit), std::move(formula), std::move(label)};
    } catch (const Error&) {
      if (attempt == kSymprecRetries) throw;
    }
  }
}

/// The canonical cell seen from basis k * lattice with atom `origin` moved
/// to (0,0,0).
inline CanonicalCell cell_in_frame(const PreparedCrystal& prepared, const IMat3& k, std::size_t origin) {
  const Crystal& crystal = prepared.crystal;
  const IMat3 to_basis_i = unimodular_inverse(k).transpose();  // f' = k^-T f
  const IMat3 from_basis_i = k.transpose();
  const Mat3 to_basis = to_double(to_basis_i);
  const Vec3 o = to_basis * crystal.frac_positions()[origin];

  std::vector<Vec3> frac(crystal.size());
  for (std::size_t j = 0; j < crystal.size(); ++j) {
    frac[j] = j == origin ? Vec3::Zero() : wrap_unit(Vec3(to_basis * crystal.frac_positions()[j] - o));
  }

  CanonicalCell cell;
  cell.params = params_from_lattice(to_double(k) * crystal.lattice());
  cell.formula = prepared.formula;
  cell.space_group_label = prepared.label;

  const auto& ops = prepared.symmetry.operations;
  cell.operations.reserve(ops.size());
  for (std::size_t n = 0; n < ops.size(); ++n) {
    SymmetryOperation op;
    op.rotation = to_basis_i * ops[n].rotation * from_basis_i;
    // The origin atom maps onto its image, so the translation is exactly
    // that image's position in this frame.
    op.translation = frac[prepared.symmetry.permutations[n][origin]];
    cell.operations.push_back(op);
  }
  std::sort(cell.operations.begin(), cell.operations.end(), operation_less);

  std::map<int, IrreducibleAtom> reps;
  for (std::size_t j = 0; j < crystal.size(); ++j) {
    const int o_id = prepared.orbit[j];
    auto it = reps.find(o_id);
    if (it == reps.end()) {
      reps[o_id] = {crystal.species()[j], frac[j], 1};
    } else {
      ++it->second.multiplicity;
      if (frac_ticks(frac[j]) < frac_ticks(it->second.frac)) it->second.frac = frac[j];
    }
  }
  std::vector<IrreducibleAtom> atoms;
  for (auto& [id, atom] : reps) atoms.push_back(atom);
  cell.atoms = order_atoms(std::move(atoms));
  return cell;
}

struct Frame {
  IMat3 basis;
  std::size_t origin;
};

/// Rules 1-3 over all equivalent reduced bases; returns the surviving
/// (basis, origin) candidates.
inline std::vector<Frame> candidate_frames(const PreparedCrystal& prepared, const std::vector<IMat3>& bases,
                                           const std::vector<std::size_t>& allowed_origins) {
  const Crystal& crystal = prepared.crystal;
  // Rule 1: smallest atomic number.
  int min_z = 1 << 30;
  for (std::size_t i : allowed_origins) min_z = std::min(min_z, crystal.species()[i]);
  std::vector<std::size_t> atoms;
  for (std::size_t i : allowed_origins) {
    if (crystal.species()[i] == min_z) atoms.push_back(i);
  }
  if (atoms.size() == 1 && bases.size() == 1) return {{bases.front(), atoms.front()}};

  // Rule 2: local densities over the radius ladder.
  std::map<std::size_t, std::vector<Neighbor>> shells;
  for (std::size_t i : atoms) shells[i] = neighbors_within(crystal, i, kRadiusLadder.back());
  if (atoms.size() > 1) {
    DensityKey best{};
    bool first = true;
    std::vector<std::size_t> kept;
    for (std::size_t i : atoms) {
      const auto key = density_key(shells[i]);
      if (first || key < best) {
        best = key;
        kept.clear();
        first = false;
      }
      if (key == best) kept.push_back(i);
    }
    atoms = std::move(kept);
  }

  // Rule 3: directional densities, per candidate basis.
  std::vector<Frame> frames;
  DirectionalKey best{};
  bool first = true;
  for (const auto& k : bases) {
    const Mat3 to_basis = to_double(unimodular_inverse(k)).transpose();
    for (std::size_t i : atoms) {
      const auto key = directional_key(shells[i], to_basis);
      if (first || key < best) {
        best = key;
        frames.clear();
        first = false;
      }
      if (key == best) frames.push_back({k, i});
    }
  }
  return frames;
}

inline std::array<long long, 6> param_ticks(const LatticeParameters& p) {
  return {quantize_ticks(p.a),     quantize_ticks(p.b),    quantize_ticks(p.c),
          quantize_ticks(p.alpha), quantize_ticks(p.beta), quantize_ticks(p.gamma)};
}

/// Equivalent reduced bases with the lexicographically smallest quantized
/// lattice parameters.
inline std::vector<IMat3> minimal_parameter_bases(const Crystal& crystal) {
  std::vector<IMat3> bases;
  std::array<long long, 6> best{};
  for (const auto& k : equivalent_reduced_bases(crystal.lattice())) {
    const auto ticks = param_ticks(params_from_lattice(to_double(k) * crystal.lattice()));
    if (bases.empty() || ticks < best) {
      best = ticks;
      bases.clear();
    }
    if (ticks == best) bases.push_back(k);
  }
  return bases;
}

/// Rule 4: the frame whose serialized body is lexicographically smallest.
inline CanonicalCell best_frame(const PreparedCrystal& prepared, const std::vector<Frame>& frames) {
  CanonicalCell best;
  std::string best_text;
  for (const auto& frame : frames) {
    CanonicalCell cell = cell_in_frame(prepared, frame.basis, frame.origin);
    std::string text = encode_body(cell);
    if (best_text.empty() || text < best_text) {
      best_text = std::move(text);
      best = std::move(cell);
    }
  }
  return best;
}

/// One atom per orbit of the proper-rotation subgroup. A frame at g(i) for a
/// proper operation g serializes like some other proper basis at i, so the
/// remaining origins add nothing to the minimum.
inline std::vector<std::size_t> origin_candidates(const PreparedCrystal& prepared) {
  std::vector<std::vector<int>> proper;
  const auto& sym = prepared.symmetry;
  for (std::size_t n = 0; n < sym.operations.size(); ++n) {
    if (sym.operations[n].rotation.determinant() == 1) proper.push_back(sym.permutations[n]);
  }
  const auto ids = orbit_ids(prepared.crystal.size(), proper);
  std::vector<std::size_t> out;
  std::vector<char> seen(prepared.crystal.size(), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen[ids[i]]) {
      seen[ids[i]] = 1;
      out.push_back(i);
    }
  }
  return out;
}

/// Crystal described by a serialized body (quantized values only).
inline Crystal rebuild(const std::string& body) {
  std::string text;
  for (int slot = 0; slot < kPropertySlots; ++slot) text += "prop: unknown_prop\n";
  return decode(text + body);
}

inline CanonicalCell canonicalize_once(const Crystal& crystal, const CanonicalizeOptions& options) {
  const PreparedCrystal prepared = prepare(crystal, options.symprec);
  if (options.disable_origin_selection) {
    return cell_in_frame(prepared, IMat3::Identity(), 0);
  }
  const auto bases = minimal_parameter_bases(prepared.crystal);
  return best_frame(prepared, candidate_frames(prepared, bases, origin_candidates(prepared)));
}

}  // namespace detail

/// Origin atom of a reduced primitive crystal in its own basis: smallest Z,
/// then local densities, then directional densities over the radius
/// ladder, then the smallest serialized cell among remaining ties.
inline std::size_t select_origin(const Crystal& crystal, double symprec = kDefaultSymprec) {
  if (crystal.size() == 1) return 0;
  detail::PreparedCrystal prepared{crystal, detail::detect_symmetry(crystal, symprec), {}, reduced_formula(crystal.species()), ""};
  prepared.orbit = detail::orbit_ids(crystal.size(), prepared.symmetry.permutations);
  prepared.label = classify_space_group(prepared.symmetry.operations);
  std::vector<std::size_t> all(crystal.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto frames = detail::candidate_frames(prepared, {IMat3::Identity()}, all);
  if (frames.size() == 1) return frames.front().origin;
  std::size_t best = frames.front().origin;
  std::string best_text;
  for (const auto& frame : frames) {
    std::string text = encode_body(detail::cell_in_frame(prepared, frame.basis, frame.origin));
    if (best_text.empty() || text < best_text) {
      best_text = std::move(text);
      best = frame.origin;
    }
  }
  return best;
}

/// Full canonicalization: Niggli reduction, primitive reduction, symmetry,
/// basis and origin selection, atom ordering. The result is a fixed point
/// of serialize-then-rebuild, so re-canonicalizing a decoded sequence
/// reproduces it.
inline CanonicalCell canonicalize(const Crystal& crystal, const CanonicalizeOptions& options = {}) {
  CanonicalCell cell = detail::canonicalize_once(crystal, options);
  std::string text = encode_body(cell);
  std::vector<std::string> seen{text};
  std::vector<CanonicalCell> cells{cell};
  for (int iteration = 0; iteration < options.max_fixed_point_iterations; ++iteration) {
    CanonicalCell next = detail::canonicalize_once(detail::rebuild(text), options);
    std::string next_text = encode_body(next);
    if (next_text == text) return cell;
    const auto repeat = std::find(seen.begin(), seen.end(), next_text);
    if (repeat != seen.end()) {
      // Cycle: the smallest member is reached from every entry point.
      const auto start = static_cast<std::size_t>(repeat - seen.begin());
      std::size_t best = start;
      for (std::size_t k = start + 1; k < seen.size(); ++k) {
        if (seen[k] < seen[best]) best = k;
      }
      return cells[best];
    }
    seen.push_back(next_text);
    cells.push_back(next);
    cell = std::move(next);
    text = std::move(next_text);
  }
  return cell;
}

}  // namespace mat2seq
