#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mat2seq/core.hpp"
#include "mat2seq/elements.hpp"
#include "mat2seq/verify.hpp"

namespace mat2seq {

namespace detail {

inline Mat3 cubic(double a) { return Mat3(Eigen::Vector3d(a, a, a).asDiagonal()); }

inline Mat3 hexagonal(double a, double c) { return lattice_from_params({a, a, c, 90, 90, 120}); }

inline Crystal fcc_decorated(double a, const std::vector<std::pair<int, Vec3>>& basis) {
  const Vec3 centering[4] = {{0, 0, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}};
  std::vector<int> species;
  std::vector<Vec3> frac;
  for (const auto& c : centering) {
    for (const auto& [z, p] : basis) {
      species.push_back(z);
      frac.push_back(p + c);
    }
  }
  return Crystal(std::move(species), std::move(frac), cubic(a));
}

}  // namespace detail

/// Textbook structures with exact symmetry, several given as conventional
/// (non-primitive) cells.
inline std::vector<CorpusEntry> prototype_corpus() {
  using detail::cubic;
  using detail::hexagonal;
  std::vector<CorpusEntry> out;
  out.push_back({"proto_simple_cubic", Crystal({11}, {Vec3(0, 0, 0)}, cubic(3.1))});
  out.push_back({"proto_CsCl", Crystal({55, 17}, {Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5)}, cubic(4.12))});
  out.push_back({"proto_NaCl", detail::fcc_decorated(5.64, {{11, {0, 0, 0}}, {17, {0.5, 0, 0}}})});
  out.push_back({"proto_Cu_fcc", detail::fcc_decorated(3.61, {{29, {0, 0, 0}}})});
  out.push_back({"proto_Si_diamond", detail::fcc_decorated(5.431, {{14, {0, 0, 0}}, {14, {0.25, 0.25, 0.25}}})});
  out.push_back({"proto_GaAs", detail::fcc_decorated(5.653, {{31, {0, 0, 0}}, {33, {0.25, 0.25, 0.25}}})});
  out.push_back({"proto_CaF2", detail::fcc_decorated(5.463, {{20, {0, 0, 0}}, {9, {0.25, 0.25, 0.25}}, {9, {0.75, 0.75, 0.75}}})});
  out.push_back({"proto_Fe_bcc", Crystal({26, 26}, {Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5)}, cubic(2.87))});
  out.push_back({"proto_SrTiO3", Crystal({38, 22, 8, 8, 8},
                                         {Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5), Vec3(0.5, 0.5, 0), Vec3(0.5, 0, 0.5),
                                          Vec3(0, 0.5, 0.5)},
                                         cubic(3.905))});
  {
    const double u = 0.3048;
    Mat3 l = Mat3::Zero();
    l(0, 0) = l(1, 1) = 4.594;
    l(2, 2) = 2.959;
    out.push_back({"proto_TiO2_rutile", Crystal({22, 22, 8, 8, 8, 8},
                                                {Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5), Vec3(u, u, 0), Vec3(1 - u, 1 - u, 0),
                                                 Vec3(0.5 + u, 0.5 - u, 0.5), Vec3(0.5 - u, 0.5 + u, 0.5)},
                                                l)});
  }
  {
    const double u = 0.382;
    out.push_back({"proto_ZnO_wurtzite",
                   Crystal({30, 30, 8, 8},
                           {Vec3(1.0 / 3, 2.0 / 3, 0), Vec3(2.0 / 3, 1.0 / 3, 0.5), Vec3(1.0 / 3, 2.0 / 3, u),
                            Vec3(2.0 / 3, 1.0 / 3, 0.5 + u)},
                           hexagonal(3.25, 5.207))});
  }
  out.push_back({"proto_Mg_hcp", Crystal({12, 12}, {Vec3(1.0 / 3, 2.0 / 3, 0.25), Vec3(2.0 / 3, 1.0 / 3, 0.75)},
                                         hexagonal(3.21, 5.21))});
  out.push_back({"proto_C_graphite",
                 Crystal({6, 6, 6, 6},
                         {Vec3(0, 0, 0.25), Vec3(0, 0, 0.75), Vec3(1.0 / 3, 2.0 / 3, 0.25), Vec3(2.0 / 3, 1.0 / 3, 0.75)},
                         hexagonal(2.46, 6.71))});
  return out;
}

struct RandomCrystalOptions {
  int min_atoms = 1;
  int max_atoms = 20;
  int max_species = 4;
  double min_distance = 1.0;        // Angstrom
  double min_volume_per_atom = 10;  // Angstrom^3
  double max_volume_per_atom = 25;
  double min_gram_determinant = 0.1;
};

/// Random valid crystal: random lattice shape scaled to a physical density,
/// species drawn from the sequence vocabulary, positions kept at least
/// `min_distance` apart.
template <class Rng>
Crystal random_crystal(Rng& rng, const RandomCrystalOptions& opt = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> n_dist(opt.min_atoms, opt.max_atoms);
  std::uniform_int_distribution<std::size_t> element(0, kSequenceElements.size() - 1);
  while (true) {
    const int n = n_dist(rng);
    LatticeParameters p{3 + 7 * u(rng), 3 + 7 * u(rng), 3 + 7 * u(rng), 60 + 60 * u(rng), 60 + 60 * u(rng),
                        60 + 60 * u(rng)};
    if (detail::gram_determinant(p.alpha, p.beta, p.gamma) <= opt.min_gram_determinant) continue;
    Mat3 lattice = lattice_from_params(p);
    const double target = n * (opt.min_volume_per_atom + (opt.max_volume_per_atom - opt.min_volume_per_atom) * u(rng));
    lattice *= std::cbrt(target / std::abs(lattice.determinant()));

    std::uniform_int_distribution<int> k_dist(1, std::min(opt.max_species, n));
    const int k = k_dist(rng);
    std::vector<int> palette;
    while (static_cast<int>(palette.size()) < k) {
      const int z = *atomic_number(kSequenceElements[element(rng)]);
      if (std::find(palette.begin(), palette.end(), z) == palette.end()) palette.push_back(z);
    }
    std::vector<int> species;
    for (int i = 0; i < n; ++i) species.push_back(i < k ? palette[i] : palette[std::uniform_int_distribution<int>(0, k - 1)(rng)]);

    const Mat3 reduced = to_double(detail::niggli_transform(lattice)) * lattice;
    const Mat3 reduced_t = reduced.transpose();
    const Mat3 to_reduced = (reduced * lattice.inverse()).transpose();  // f_reduced = K^-T f
    std::vector<Vec3> frac;
    int attempts = 0;
    while (static_cast<int>(frac.size()) < n && attempts < 2000) {
      ++attempts;
      const Vec3 f(u(rng), u(rng), u(rng));
      bool ok = true;
      for (const auto& g : frac) {
        if (detail::min_image_cartesian(reduced_t, to_reduced * (f - g)) < opt.min_distance) {
          ok = false;
          break;
        }
      }
      if (ok) frac.push_back(f);
    }
    if (static_cast<int>(frac.size()) < n) continue;
    if (n == 1) {
      // single-atom cells still need a valid self-distance
      if (detail::min_image_cartesian(reduced_t, Vec3(1, 0, 0)) < opt.min_distance) continue;
    }
    return Crystal(std::move(species), std::move(frac), lattice);
  }
}

/// `count` random crystals with ids "rand_0000", ... from a fixed seed.
inline std::vector<CorpusEntry> random_corpus(std::size_t count, std::uint64_t seed,
                                              const RandomCrystalOptions& opt = {}) {
  std::vector<CorpusEntry> out;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "rand_%04zu", i);
    out.push_back({id, random_crystal(rng, opt)});
  }
  return out;
}

}  // namespace mat2seq
