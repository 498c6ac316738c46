#pragma once
// Brute-force reference computations. These deliberately avoid the library's
// algorithms so that tests compare two independent derivations.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "mat2seq/core.hpp"

namespace oracle {

using mat2seq::Crystal;
using mat2seq::IMat3;
using mat2seq::Mat3;
using mat2seq::Vec3;

// Image range along each axis guaranteed to contain every point within r
// (r over the smallest interplanar spacing, plus one).
inline int reach_for(const Mat3& lattice, double r) {
  const double volume = std::abs(lattice.determinant());
  double min_height = 1e300;
  for (int a = 0; a < 3; ++a) {
    const Vec3 u = lattice.row((a + 1) % 3), v = lattice.row((a + 2) % 3);
    min_height = std::min(min_height, volume / u.cross(v).norm());
  }
  return static_cast<int>(std::ceil(r / min_height)) + 1;
}

// Sum of Z over all images at distance in (0, r), offsets k in {-reach..reach}^3.
inline long local_density(const Crystal& c, std::size_t i, double r, int reach = 2) {
  const Mat3 lt = c.lattice().transpose();
  long sum = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (int a = -reach; a <= reach; ++a) {
      for (int b = -reach; b <= reach; ++b) {
        for (int d = -reach; d <= reach; ++d) {
          const Vec3 off = c.frac_positions()[j] + Vec3(a, b, d) - c.frac_positions()[i];
          const double dist = (lt * off).norm();
          if (dist > 1e-9 && dist < r) sum += c.species()[j];
        }
      }
    }
  }
  return sum;
}

inline std::array<long, 3> directional(const Crystal& c, std::size_t i, double r, int reach = 2) {
  const Mat3 lt = c.lattice().transpose();
  std::array<long, 3> out{0, 0, 0};
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (int a = -reach; a <= reach; ++a) {
      for (int b = -reach; b <= reach; ++b) {
        for (int d = -reach; d <= reach; ++d) {
          const Vec3 off = c.frac_positions()[j] + Vec3(a, b, d) - c.frac_positions()[i];
          const double dist = (lt * off).norm();
          if (dist <= 1e-9 || dist >= r) continue;
          for (int axis = 0; axis < 3; ++axis) {
            if (off(axis) > 1e-8) out[axis] += c.species()[j];
          }
        }
      }
    }
  }
  return out;
}

// Every W with entries in {-1,0,1}, det +-1 and W^T G W = G.
inline std::vector<IMat3> metric_preserving(const Mat3& lattice, double rel_tol = 1e-6) {
  const Mat3 g = lattice * lattice.transpose();
  const double scale = g.diagonal().maxCoeff();
  std::vector<IMat3> out;
  for (int code = 0; code < 19683; ++code) {
    IMat3 w;
    int rest = code;
    for (int e = 0; e < 9; ++e) {
      w(e / 3, e % 3) = rest % 3 - 1;
      rest /= 3;
    }
    const int det = w.determinant();
    if (det != 1 && det != -1) continue;
    const Mat3 wd = w.cast<double>();
    if ((wd.transpose() * g * wd - g).cwiseAbs().maxCoeff() <= rel_tol * scale) out.push_back(w);
  }
  return out;
}

// True when f -> W f + t maps the species-labelled point set onto itself.
inline bool maps_onto_itself(const Crystal& c, const IMat3& w, const Vec3& t, double tol = 1e-6) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 img = w.cast<double>() * c.frac_positions()[i] + t;
    bool hit = false;
    for (std::size_t j = 0; j < c.size() && !hit; ++j) {
      if (c.species()[j] != c.species()[i]) continue;
      Vec3 d = img - c.frac_positions()[j];
      for (int a = 0; a < 3; ++a) d(a) -= std::round(d(a));
      hit = d.cwiseAbs().maxCoeff() < tol;
    }
    if (!hit) return false;
  }
  return true;
}

// Sorted lengths of the three shortest linearly independent lattice vectors,
// found by exhaustive search over k in {-reach..reach}^3.
inline std::array<double, 3> shortest_basis_lengths(const Mat3& lattice, int reach = 3) {
  struct V {
    Vec3 v;
    double len;
  };
  std::vector<V> vs;
  for (int a = -reach; a <= reach; ++a) {
    for (int b = -reach; b <= reach; ++b) {
      for (int d = -reach; d <= reach; ++d) {
        if (a == 0 && b == 0 && d == 0) continue;
        const Vec3 v = lattice.transpose() * Vec3(a, b, d);
        vs.push_back({v, v.norm()});
      }
    }
  }
  std::sort(vs.begin(), vs.end(), [](const V& x, const V& y) { return x.len < y.len; });
  std::vector<Vec3> picked;
  std::array<double, 3> out{};
  for (const auto& v : vs) {
    if (picked.empty()) {
      picked.push_back(v.v);
    } else if (picked.size() == 1) {
      if (picked[0].cross(v.v).norm() > 1e-6 * v.len * picked[0].norm()) picked.push_back(v.v);
    } else if (std::abs(picked[0].cross(picked[1]).dot(v.v)) > 1e-6 * v.len * picked[0].norm() * picked[1].norm()) {
      picked.push_back(v.v);
    }
    if (picked.size() == 3) break;
  }
  for (int k = 0; k < 3; ++k) out[k] = picked[k].norm();
  return out;
}

// Pairwise minimum-image distances, sorted. The in-cell image is never
// farther than |a|+|b|+|c|, so the default reach covers every candidate.
inline std::vector<double> sorted_pair_distances(const Crystal& c, int reach = -1) {
  const Mat3 lt = c.lattice().transpose();
  if (reach < 0) reach = reach_for(c.lattice(), c.lattice().rowwise().norm().sum());
  std::vector<double> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      double best = 1e300;
      for (int a = -reach; a <= reach; ++a) {
        for (int b = -reach; b <= reach; ++b) {
          for (int d = -reach; d <= reach; ++d) {
            best = std::min(best, (lt * (c.frac_positions()[j] + Vec3(a, b, d) - c.frac_positions()[i])).norm());
          }
        }
      }
      out.push_back(best);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// nx*ny*nz replication of a cell.
inline Crystal supercell(const Crystal& c, int nx, int ny, int nz) {
  std::vector<int> species;
  std::vector<Vec3> frac;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nz; ++k) {
        for (std::size_t a = 0; a < c.size(); ++a) {
          const Vec3 p = c.frac_positions()[a] + Vec3(i, j, k);
          species.push_back(c.species()[a]);
          frac.push_back(Vec3(p.x() / nx, p.y() / ny, p.z() / nz));
        }
      }
    }
  }
  Mat3 l = c.lattice();
  l.row(0) *= nx;
  l.row(1) *= ny;
  l.row(2) *= nz;
  return Crystal(std::move(species), std::move(frac), l);
}

}  // namespace oracle
