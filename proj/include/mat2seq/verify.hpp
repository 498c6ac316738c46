#pragma once

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mat2seq/canonicalize.hpp"
#include "mat2seq/codec.hpp"
#include "mat2seq/core.hpp"
#include "mat2seq/lattice_reduce.hpp"

namespace mat2seq {

enum class TransformKind { Rotate, Translate, ShiftBoundary, ReexpressLattice, PermuteAtoms };

inline constexpr std::array<TransformKind, 5> kAllTransforms{TransformKind::Rotate, TransformKind::Translate,
                                                             TransformKind::ShiftBoundary,
                                                             TransformKind::ReexpressLattice,
                                                             TransformKind::PermuteAtoms};

constexpr std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Rotate: return "rotate";
    case TransformKind::Translate: return "translate";
    case TransformKind::ShiftBoundary: return "shift_boundary";
    case TransformKind::ReexpressLattice: return "reexpress_lattice";
    case TransformKind::PermuteAtoms: return "permute_atoms";
  }
  return "";
}

inline std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  for (auto kind : kAllTransforms) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

/// SplitMix64 step; used to derive independent per-structure seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniformly distributed proper rotation (random unit quaternion).
template <class Rng>
Mat3 random_rotation(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double u1 = u(rng), u2 = u(rng), u3 = u(rng);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const Eigen::Quaterniond q(std::sqrt(u1) * std::cos(two_pi * u3), std::sqrt(1 - u1) * std::sin(two_pi * u2),
                             std::sqrt(1 - u1) * std::cos(two_pi * u2), std::sqrt(u1) * std::sin(two_pi * u3));
  return q.normalized().toRotationMatrix();
}

/// Random integer matrix with det = 1 and entries in [-max_entry, max_entry].
template <class Rng>
IMat3 random_unimodular(Rng& rng, int max_entry = 2) {
  std::uniform_int_distribution<int> entry(-max_entry, max_entry);
  while (true) {
    IMat3 k;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) k(r, c) = entry(rng);
    }
    if (k.determinant() == 1) return k;
  }
}

template <class Rng>
Crystal apply_transform(const Crystal& crystal, TransformKind kind, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind) {
    case TransformKind::Rotate: {
      const Mat3 r = random_rotation(rng);
      return Crystal(crystal.species(), crystal.frac_positions(), crystal.lattice() * r.transpose());
    }
    case TransformKind::Translate:
    case TransformKind::ShiftBoundary: {
      Vec3 shift(u(rng), u(rng), u(rng));
      if (kind == TransformKind::ShiftBoundary) {
        // Put a random atom on the cell boundary, nudged to either side.
        std::uniform_int_distribution<std::size_t> pick(0, crystal.size() - 1);
        std::uniform_int_distribution<int> side(-1, 1);
        shift = -crystal.frac_positions()[pick(rng)];
        for (int a = 0; a < 3; ++a) shift(a) += 1e-10 * side(rng);
      }
      std::vector<Vec3> frac;
      for (const auto& f : crystal.frac_positions()) frac.push_back(f + shift);
      return Crystal(crystal.species(), std::move(frac), crystal.lattice());
    }
    case TransformKind::ReexpressLattice:
      return detail::change_basis(crystal, random_unimodular(rng));
    case TransformKind::PermuteAtoms: {
      std::vector<std::size_t> order(crystal.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<int> species;
      std::vector<Vec3> frac;
      for (std::size_t i : order) {
        species.push_back(crystal.species()[i]);
        frac.push_back(crystal.frac_positions()[i]);
      }
      return Crystal(std::move(species), std::move(frac), crystal.lattice());
    }
  }
  return crystal;
}

/// Structure-preserving transform; the same seed gives the same output.
inline Crystal transform(const Crystal& crystal, TransformKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return apply_transform(crystal, kind, rng);
}

namespace detail {

/// Minimum-cost perfect assignment on a square matrix (Hungarian method).
/// Returns assignment[row] = column.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

/// Shortest Cartesian length of a fractional difference over its images
/// (adequate for reduced cells).
inline double min_image_cartesian(const Mat3& lattice_t, const Vec3& delta) {
  const Vec3 d = min_image_delta(delta);
  double best = std::numeric_limits<double>::infinity();
  for (int x = -1; x <= 1; ++x) {
    for (int y = -1; y <= 1; ++y) {
      for (int z = -1; z <= 1; ++z) best = std::min(best, (lattice_t * (d + Vec3(x, y, z))).norm());
    }
  }
  return best;
}

}  // namespace detail

struct MatcherTolerances {
  double ltol = 0.2;       // relative lattice length tolerance
  double stol = 0.3;       // site tolerance, in units of (V/n)^(1/3)
  double angle_tol = 5.0;  // degrees
};

struct MatchResult {
  bool matched = false;
  double normalized_rmse = std::numeric_limits<double>::infinity();
};

/// Decides whether two crystals describe the same periodic structure.
/// Both are reduced to Niggli primitive cells; every equivalent reduced
/// basis of `b` and every anchor translation is tried, atoms are paired
/// per species by optimal assignment.
inline MatchResult match_structures(const Crystal& a, const Crystal& b, const MatcherTolerances& tol = {},
                                    double symprec = kDefaultSymprec) {
  const Crystal pa = reduce_to_primitive(niggli_reduce(a).crystal, symprec);
  const Crystal pb = reduce_to_primitive(niggli_reduce(b).crystal, symprec);
  auto sa = pa.species(), sb = pb.species();
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return {};

  const auto params_a = params_from_lattice(pa.lattice());
  const double norm = std::cbrt(pa.volume() / static_cast<double>(pa.size()));
  const Mat3 lt = pa.lattice().transpose();
  const auto anchors = detail::least_frequent_species_atoms(pa);
  const std::size_t anchor = anchors.front();
  std::set<int> species_set(sa.begin(), sa.end());

  MatchResult best;
  for (const auto& k : equivalent_reduced_bases(pb.lattice())) {
    const Crystal cb = detail::change_basis(pb, k);
    const auto pbp = params_from_lattice(cb.lattice());
    const double la[3] = {params_a.a, params_a.b, params_a.c}, lb[3] = {pbp.a, pbp.b, pbp.c};
    const double aa[3] = {params_a.alpha, params_a.beta, params_a.gamma}, ab[3] = {pbp.alpha, pbp.beta, pbp.gamma};
    bool lattice_ok = true;
    for (int i = 0; i < 3; ++i) {
      lattice_ok = lattice_ok && std::abs(la[i] - lb[i]) / la[i] <= tol.ltol && std::abs(aa[i] - ab[i]) <= tol.angle_tol;
    }
    if (!lattice_ok) continue;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (cb.species()[j] != pa.species()[anchor]) continue;
      const Vec3 shift = pa.frac_positions()[anchor] - cb.frac_positions()[j];
      double sum_sq = 0, max_d = 0;
      for (int z : species_set) {
        std::vector<std::size_t> ia, ib;
        for (std::size_t i = 0; i < pa.size(); ++i) {
          if (pa.species()[i] == z) ia.push_back(i);
        }
        for (std::size_t i = 0; i < cb.size(); ++i) {
          if (cb.species()[i] == z) ib.push_back(i);
        }
        std::vector<std::vector<double>> dist(ia.size(), std::vector<double>(ib.size()));
        std::vector<std::vector<double>> cost(ia.size(), std::vector<double>(ib.size()));
        for (std::size_t r = 0; r < ia.size(); ++r) {
          for (std::size_t c = 0; c < ib.size(); ++c) {
            dist[r][c] = detail::min_image_cartesian(
                lt, pa.frac_positions()[ia[r]] - (cb.frac_positions()[ib[c]] + shift));
            cost[r][c] = dist[r][c] * dist[r][c];
          }
        }
        const auto assignment = detail::hungarian(cost);
        for (std::size_t r = 0; r < ia.size(); ++r) {
          const double d = dist[r][assignment[r]];
          sum_sq += d * d;
          max_d = std::max(max_d, d);
        }
      }
      if (max_d < tol.stol * norm) {
        const double rmse = std::sqrt(sum_sq / static_cast<double>(pa.size())) / norm;
        if (!best.matched || rmse < best.normalized_rmse) best = {true, rmse};
      }
    }
  }
  return best;
}

struct CorpusEntry {
  std::string id;
  Crystal crystal;
};

struct UniquenessFailure {
  std::string id;
  std::string transform_chain;
  std::string first_diff_line;
};

struct UniquenessReport {
  std::size_t total = 0;
  std::size_t successes = 0;
  double rate = 0;
  std::vector<UniquenessFailure> failures;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["total"] = total;
    j["successes"] = successes;
    j["rate"] = rate;
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : failures) {
      j["failures"].push_back({{"id", f.id}, {"transform_chain", f.transform_chain}, {"first_diff_line", f.first_diff_line}});
    }
    return j;
  }
};

namespace detail {

inline std::string first_differing_line(const std::string& a, const std::string& b) {
  std::size_t line = 1, start = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const char ca = i < a.size() ? a[i] : '\0', cb = i < b.size() ? b[i] : '\0';
    if (ca != cb) {
      const auto end_a = a.find('\n', start), end_b = b.find('\n', start);
      return "line " + std::to_string(line) + ": '" + a.substr(start, end_a - start) + "' vs '" +
             (start < b.size() ? b.substr(start, end_b - start) : std::string()) + "'";
    }
    if (ca == '\n') {
      ++line;
      start = i + 1;
    }
  }
  return {};
}

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Encodes each structure and `trials_per_structure` randomly transformed
/// copies (each selected kind applied once, in random order) and counts
/// byte-identical sequences.
inline UniquenessReport verify_uniqueness(const std::vector<CorpusEntry>& corpus, int trials_per_structure,
                                          const std::vector<TransformKind>& kinds, std::uint64_t seed,
                                          const CanonicalizeOptions& options = {}) {
  struct Outcome {
    std::size_t successes = 0;
    std::vector<UniquenessFailure> failures;
  };
  std::vector<Outcome> outcomes(corpus.size());
  detail::parallel_for(corpus.size(), [&](std::size_t idx) {
    const auto& entry = corpus[idx];
    std::mt19937_64 rng(mix_seed(seed ^ mix_seed(idx)));
    std::string reference;
    std::string reference_error;
    try {
      reference = encode(canonicalize(entry.crystal, options)).text;
    } catch (const std::exception& e) {
      reference_error = e.what();
    }
    for (int trial = 0; trial < trials_per_structure; ++trial) {
      std::vector<TransformKind> order = kinds;
      std::shuffle(order.begin(), order.end(), rng);
      std::string chain;
      Crystal current = entry.crystal;
      for (auto kind : order) {
        current = apply_transform(current, kind, rng);
        chain += (chain.empty() ? "" : ">") + std::string(to_string(kind));
      }
      if (chain.empty()) chain = "identity";
      if (!reference_error.empty()) {
        outcomes[idx].failures.push_back({entry.id, chain, "error: " + reference_error});
        continue;
      }
      try {
        const std::string text = encode(canonicalize(current, options)).text;
        if (text == reference) {
          ++outcomes[idx].successes;
        } else {
          outcomes[idx].failures.push_back({entry.id, chain, detail::first_differing_line(reference, text)});
        }
      } catch (const std::exception& e) {
        outcomes[idx].failures.push_back({entry.id, chain, std::string("error: ") + e.what()});
      }
    }
  });
  UniquenessReport report;
  report.total = corpus.size() * static_cast<std::size_t>(std::max(trials_per_structure, 0));
  for (auto& o : outcomes) {
    report.successes += o.successes;
    for (auto& f : o.failures) report.failures.push_back(std::move(f));
  }
  report.rate = report.total ? static_cast<double>(report.successes) / static_cast<double>(report.total) : 1.0;
  return report;
}

}  // namespace mat2seq
