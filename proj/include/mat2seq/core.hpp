#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mat2seq/elements.hpp"
#include "mat2seq/error.hpp"

namespace mat2seq {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using IVec3 = Eigen::Vector3i;
using IMat3 = Eigen::Matrix3i;

// Fractional components this close below 1.0 snap to 0.0.
inline constexpr double kWrapSnap = 1e-8;

/// Wraps a fractional coordinate into [0, 1).
inline double wrap_unit(double x) {
  double w = x - std::floor(x);
  if (w >= 1.0 - kWrapSnap || w < 0.0) w = 0.0;
  return w;
}

inline Vec3 wrap_unit(const Vec3& v) { return {wrap_unit(v.x()), wrap_unit(v.y()), wrap_unit(v.z())}; }

/// Component-wise difference mapped into [-0.5, 0.5).
inline Vec3 min_image_delta(const Vec3& d) {
  return {d.x() - std::round(d.x()), d.y() - std::round(d.y()), d.z() - std::round(d.z())};
}

inline double frac_max_distance(const Vec3& a, const Vec3& b) {
  return min_image_delta(a - b).cwiseAbs().maxCoeff();
}

inline Mat3 to_double(const IMat3& m) { return m.cast<double>(); }

/// Round-half-up to the 1e-4 grid, as an integer tick count.
inline long long quantize_ticks(double x) { return static_cast<long long>(std::floor(x * 1e4 + 0.5)); }

/// Ticks of a fractional coordinate; 1.0000 wraps to 0.0000.
inline int frac_ticks(double x) {
  long long t = quantize_ticks(x) % 10000;
  if (t < 0) t += 10000;
  return static_cast<int>(t);
}

inline std::array<int, 3> frac_ticks(const Eigen::Vector3d& f) {
  return {frac_ticks(f.x()), frac_ticks(f.y()), frac_ticks(f.z())};
}

/// Exact inverse of a unimodular integer matrix.
inline IMat3 unimodular_inverse(const IMat3& m) {
  const int det = m.determinant();
  IMat3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return adj * det;  // det is +-1, so adj / det == adj * det
}

/// A periodic unit cell. Lattice rows are the lattice vectors in Angstrom;
/// positions are fractional and always wrapped into [0, 1).
class Crystal {
 public:
  Crystal(std::vector<int> species, std::vector<Vec3> frac_positions, const Mat3& lattice)
      : species_(std::move(species)), frac_(std::move(frac_positions)), lattice_(lattice) {
    if (species_.empty() || species_.size() != frac_.size()) {
      throw Error(ErrorCode::InvalidCrystal, "species and positions must have equal, nonzero length");
    }
    for (int z : species_) {
      if (z < 1 || z > kMaxAtomicNumber) {
        throw Error(ErrorCode::InvalidCrystal, "atomic number out of range: " + std::to_string(z));
      }
    }
    if (!lattice_.allFinite() || std::abs(lattice_.determinant()) <= 1e-8) {
      throw Error(ErrorCode::DegenerateLattice, "|det(lattice)| must exceed 1e-8");
    }
    for (auto& f : frac_) {
      if (!f.allFinite()) throw Error(ErrorCode::InvalidCrystal, "non-finite coordinate");
      f = wrap_unit(f);
    }
  }

  std::size_t size() const noexcept { return species_.size(); }
  const std::vector<int>& species() const noexcept { return species_; }
  const std::vector<Vec3>& frac_positions() const noexcept { return frac_; }
  const Mat3& lattice() const noexcept { return lattice_; }
  double volume() const { return std::abs(lattice_.determinant()); }

 private:
  std::vector<int> species_;
  std::vector<Vec3> frac_;
  Mat3 lattice_;
};

struct LatticeParameters {
  double a = 0, b = 0, c = 0;
  double alpha = 0, beta = 0, gamma = 0;  // degrees
};

/// (W, t): f -> W f + t on fractional column vectors.
struct SymmetryOperation {
  IMat3 rotation = IMat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& f) const { return to_double(rotation) * f + translation; }
};

struct IrreducibleAtom {
  int z = 0;
  Vec3 frac = Vec3::Zero();
  int multiplicity = 1;
};

struct CanonicalCell {
  LatticeParameters params;
  std::vector<IrreducibleAtom> atoms;
  std::vector<SymmetryOperation> operations;
  std::string formula;
  std::string space_group_label;
};

struct CrystalSequence {
  std::string text;
  std::vector<int> tokens;
};

inline Vec3 frac_to_cart(const Mat3& lattice, const Vec3& frac) { return lattice.transpose() * frac; }

/// Cartesian position of atom `index`: x*l1 + y*l2 + z*l3.
inline Vec3 frac_to_cart(const Crystal& crystal, std::size_t index) {
  if (index >= crystal.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "atom index " + std::to_string(index));
  }
  return frac_to_cart(crystal.lattice(), crystal.frac_positions()[index]);
}

namespace detail {
inline constexpr double kDeg = std::numbers::pi / 180.0;

inline double gram_determinant(double alpha, double beta, double gamma) {
  const double ca = std::cos(alpha * kDeg), cb = std::cos(beta * kDeg), cg = std::cos(gamma * kDeg);
  return 1.0 + 2.0 * ca * cb * cg - ca * ca - cb * cb - cg * cg;
}

inline double angle_between(const Vec3& u, const Vec3& v) {
  double c = u.dot(v) / (u.norm() * v.norm());
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) / kDeg;
}
}  // namespace detail

inline LatticeParameters params_from_lattice(const Mat3& lattice) {
  const Vec3 l1 = lattice.row(0), l2 = lattice.row(1), l3 = lattice.row(2);
  if (!lattice.allFinite() || std::abs(lattice.determinant()) <= 1e-8) {
    throw Error(ErrorCode::DegenerateLattice, "lattice vectors are collinear or coplanar");
  }
  return {l1.norm(),
          l2.norm(),
          l3.norm(),
          detail::angle_between(l2, l3),
          detail::angle_between(l1, l3),
          detail::angle_between(l1, l2)};
}

/// l1 along +x, l2 in the xy-plane with positive y, l3 with positive z.
inline Mat3 lattice_from_params(const LatticeParameters& p) {
  const bool lengths_ok = p.a > 0 && p.b > 0 && p.c > 0 && std::isfinite(p.a) && std::isfinite(p.b) &&
                          std::isfinite(p.c);
  if (!lengths_ok) throw Error(ErrorCode::DegenerateLattice, "lattice lengths must be positive");
  for (double angle : {p.alpha, p.beta, p.gamma}) {
    if (!(angle > 0 && angle < 180)) throw Error(ErrorCode::UnrealizableAngles, "angle outside (0, 180)");
  }
  const double g = detail::gram_determinant(p.alpha, p.beta, p.gamma);
  if (!(g > 1e-10)) throw Error(ErrorCode::UnrealizableAngles, "angle triple does not span 3D space");
  using detail::kDeg;
  const double ca = std::cos(p.alpha * kDeg), cb = std::cos(p.beta * kDeg);
  const double cg = std::cos(p.gamma * kDeg), sg = std::sin(p.gamma * kDeg);
  Mat3 l;
  l.row(0) = Vec3(p.a, 0, 0);
  l.row(1) = Vec3(p.b * cg, p.b * sg, 0);
  const double cy = (ca - cb * cg) / sg;
  l.row(2) = Vec3(p.c * cb, p.c * cy, p.c * std::sqrt(g) / sg);
  return l;
}

}  // namespace mat2seq
