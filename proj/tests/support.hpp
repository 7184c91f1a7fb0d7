#pragma once

// Fixtures, generators and brute-force oracles shared by the test binaries.
// The oracles work from the raw order relation and never call the library
// routine they are used to check.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tangle_forge/tangle_forge.hpp"

namespace tftest {

using namespace tangle_forge;

// Ids of the chain fixture r < s.
inline constexpr SepId r_fwd = 0, r_back = 1, s_fwd = 2, s_back = 3;

inline SeparationSystem single_separation() {
  RawSystem raw;
  raw.m = 1;
  raw.inv = {{0, 1}};
  return SeparationSystem::from_raw(raw);
}

// ->r <= ->s, hence <-s <= <-r.
inline SeparationSystem chain_system() {
  RawSystem raw;
  raw.m = 2;
  raw.inv = {{r_fwd, r_back}, {s_fwd, s_back}};
  raw.leq = {{r_fwd, s_fwd}, {s_back, r_back}};
  raw.labels = {{r_fwd, "->r"}, {r_back, "<-r"}, {s_fwd, "->s"}, {s_back, "<-s"}};
  return SeparationSystem::from_raw(raw);
}

// {->r,->s}, {<-r,<-s}, {->r,<-s}
inline OrientationFamily chain_family() {
  return {{Orientation::from_string("11"), Orientation::from_string("00"),
           Orientation::from_string("10")}};
}

// Oriented subsets of a ground set ordered by inclusion, with complement as
// the involution. `sets` lists one orientation of each separation; the ids
// are 2i for sets[i] and 2i+1 for its complement.
inline SeparationSystem set_system(std::size_t ground, const std::vector<std::uint64_t>& sets) {
  const std::uint64_t full = (std::uint64_t{1} << ground) - 1;
  const std::size_t n = 2 * sets.size();
  std::vector<std::uint64_t> all(n);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    all[2 * i] = sets[i];
    all[2 * i + 1] = full & ~sets[i];
  }
  std::vector<SepId> inv(n);
  std::vector<Bitset> up(n, Bitset(n));
  for (SepId a = 0; a < n; ++a) {
    inv[a] = a ^ 1;
    for (SepId b = 0; b < n; ++b) {
      if ((all[a] & ~all[b]) == 0) up[a].set(b);
    }
  }
  return SeparationSystem::from_relation(std::move(inv), std::move(up));
}

// A random set system with up to m separations; corners may or may not be
// present.
inline SeparationSystem set_system(std::mt19937_64& rng, std::size_t ground,
                                   std::size_t m) {
  const std::uint64_t full = (std::uint64_t{1} << ground) - 1;
  std::vector<std::uint64_t> sets;
  std::uniform_int_distribution<std::uint64_t> pick(0, full);
  for (std::size_t tries = 0; sets.size() < m && tries < 1000; ++tries) {
    std::uint64_t x = pick(rng);
    bool seen = false;
    for (std::uint64_t y : sets) seen = seen || y == x || y == (full & ~x);
    if (!seen) sets.push_back(x);
  }
  return set_system(ground, sets);
}

// A random valid system: random generating pairs, closed under the
// involution and transitivity, retried until antisymmetric.
inline SeparationSystem random_system(std::mt19937_64& rng, std::size_t m,
                                      double density) {
  const std::size_t n = 2 * m;
  std::bernoulli_distribution coin(density);
  for (;;) {
    RawSystem raw;
    raw.m = m;
    for (SepId i = 0; i < m; ++i) raw.inv.push_back({2 * i, 2 * i + 1});
    for (SepId a = 0; a < n; ++a) {
      for (SepId b = 0; b < n; ++b) {
        if (a != b && (a ^ 1) != b && coin(rng)) {
          raw.leq.push_back({a, b});
          raw.leq.push_back({b ^ 1, a ^ 1});
        }
      }
    }
    RawSystem closed = transitive_closure(raw);
    if (validate(closed).ok()) return SeparationSystem::from_raw(closed);
  }
}

struct CorpusGraph {
  std::string name;
  Graph graph;
};

inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(std::size_t n) {
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline Graph star_graph(std::size_t leaves) {
  Graph g(leaves + 1);
  for (std::size_t i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

inline Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

// 2 rows by 3 columns, vertex r*3+c.
inline Graph grid_2x3() {
  Graph g(6);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (c + 1 < 3) g.add_edge(r * 3 + c, r * 3 + c + 1);
      if (r == 0) g.add_edge(c, 3 + c);
    }
  }
  return g;
}

inline std::vector<CorpusGraph> corpus_graphs() {
  std::vector<CorpusGraph> out;
  for (std::size_t n = 2; n <= 6; ++n) out.push_back({"P" + std::to_string(n), path_graph(n)});
  for (std::size_t n = 3; n <= 6; ++n) out.push_back({"C" + std::to_string(n), cycle_graph(n)});
  out.push_back({"K1,3", star_graph(3)});
  out.push_back({"K1,4", star_graph(4)});
  out.push_back({"K4", complete_graph(4)});
  out.push_back({"K5", complete_graph(5)});
  out.push_back({"grid2x3", grid_2x3()});
  return out;
}

// Profile enumeration in the corpus needs more separations than the default
// cap allows.
inline constexpr std::size_t corpus_profile_cap = 128;

// ---- oracles --------------------------------------------------------------

inline bool oracle_nested(const SeparationSystem& sys, SepId r, SepId s) {
  for (SepId x : {r, sys.inv(r)}) {
    for (SepId y : {s, sys.inv(s)}) {
      if (sys.leq(x, y)) return true;
    }
  }
  return false;
}

// Chosen oriented ids of the orientation with bit pattern `mask` (bit i set
// picks the lower id of the i-th separation).
inline std::vector<SepId> chosen_ids(const SeparationSystem& sys, std::uint64_t mask) {
  std::vector<SepId> out;
  std::size_t i = 0;
  for (SepId x = 0; x < sys.size(); ++x) {
    if (x > sys.inv(x)) continue;
    out.push_back(((mask >> i) & 1) ? x : sys.inv(x));
    ++i;
  }
  return out;
}

inline bool oracle_consistent(const SeparationSystem& sys, const std::vector<SepId>& o) {
  for (SepId x : o) {
    for (SepId y : o) {
      if (x != y && sys.leq(sys.inv(x), y)) return false;
    }
  }
  return true;
}

inline Orientation orientation_of(std::size_t m, std::uint64_t mask) {
  Bitset bits(m);
  for (std::size_t i = 0; i < m; ++i) bits[i] = (mask >> i) & 1;
  return Orientation(bits);
}

// All consistent orientations by filtering all 2^m candidates.
inline std::vector<std::uint64_t> oracle_consistent_masks(const SeparationSystem& sys) {
  std::vector<std::uint64_t> out;
  const std::size_t m = sys.unoriented_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (oracle_consistent(sys, chosen_ids(sys, mask))) out.push_back(mask);
  }
  return out;
}

// Property (P) checked with the corner computed from the vertex sets.
inline bool oracle_profile(const SkSystem& sk, const std::vector<SepId>& chosen) {
  auto in = [&](const GraphSeparation& g) {
    for (SepId x : chosen) {
      if (sk.separation(x) == g) return true;
    }
    return false;
  };
  for (SepId x : chosen) {
    for (SepId y : chosen) {
      const GraphSeparation rx = sk.separation(x).inverse();
      const GraphSeparation ry = sk.separation(y).inverse();
      if (in(GraphSeparation{rx.a & ry.a, rx.b | ry.b})) return false;
    }
  }
  return true;
}

inline std::optional<SepId> oracle_infimum(const SeparationSystem& sys,
                                           const std::vector<SepId>& set) {
  std::vector<SepId> lower;
  for (SepId g = 0; g < sys.size(); ++g) {
    bool below = true;
    for (SepId x : set) below = below && sys.leq(g, x);
    if (below) lower.push_back(g);
  }
  for (SepId g : lower) {
    bool greatest = true;
    for (SepId h : lower) greatest = greatest && sys.leq(h, g);
    if (greatest) return g;
  }
  return std::nullopt;
}

inline std::optional<SepId> oracle_supremum(const SeparationSystem& sys,
                                            const std::vector<SepId>& set) {
  std::vector<SepId> upper;
  for (SepId g = 0; g < sys.size(); ++g) {
    bool above = true;
    for (SepId x : set) above = above && sys.leq(x, g);
    if (above) upper.push_back(g);
  }
  for (SepId g : upper) {
    bool least = true;
    for (SepId h : upper) least = least && sys.leq(g, h);
    if (least) return g;
  }
  return std::nullopt;
}

inline bool member_holds(const SeparationSystem& sys, const Orientation& o, SepId x) {
  std::size_t slot = 0;
  for (SepId y = 0; y < sys.canonical(x); ++y) {
    if (y < sys.inv(y)) ++slot;
  }
  return static_cast<bool>(o.bits()[slot]) == (x < sys.inv(x));
}

// The family-submodularity definition evaluated literally.
inline bool oracle_p_submodular(const SeparationSystem& sys, const OrientationFamily& fam) {
  auto all_holding = [&](SepId a, SepId b, SepId c, bool want_inverse) {
    for (const Orientation& o : fam.members) {
      if (member_holds(sys, o, a) && member_holds(sys, o, b) &&
          !member_holds(sys, o, want_inverse ? sys.inv(c) : c)) {
        return false;
      }
    }
    return true;
  };
  for (SepId x = 0; x < sys.size(); ++x) {
    for (SepId y = 0; y < sys.size(); ++y) {
      if (oracle_nested(sys, x, y)) continue;
      auto sup = oracle_supremum(sys, {x, y});
      if (sup && all_holding(x, y, *sup, false)) continue;
      auto inf = oracle_infimum(sys, {x, y});
      if (inf && all_holding(sys.inv(x), sys.inv(y), *inf, true)) continue;
      return false;
    }
  }
  return true;
}

// Is there any set of separations that is pairwise nested and distinguishes
// every pair of members? Exhaustive over subsets; m must be small.
inline bool oracle_nested_distinguishing_exists(const SeparationSystem& sys,
                                                const OrientationFamily& fam) {
  std::vector<SepId> canon;
  for (SepId x = 0; x < sys.size(); ++x) {
    if (x < sys.inv(x)) canon.push_back(x);
  }
  const std::size_t m = canon.size();
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << m); ++sub) {
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      for (std::size_t j = i + 1; j < m && ok; ++j) {
        if (((sub >> i) & 1) && ((sub >> j) & 1)) ok = oracle_nested(sys, canon[i], canon[j]);
      }
    }
    for (std::size_t a = 0; a < fam.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < fam.size() && ok; ++b) {
        bool split = false;
        for (std::size_t i = 0; i < m; ++i) {
          if (((sub >> i) & 1) && fam.members[a].bits()[i] != fam.members[b].bits()[i]) {
            split = true;
          }
        }
        ok = split;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Calls visit(system) for every valid labelled system with m separations,
// paired as (2i, 2i+1). Backtracks over the orbits of oriented pairs under
// (x,y) -> (inv y, inv x), choosing incomparable, x < y or y < x for each,
// and prunes as soon as the decided part breaks transitivity.
template <typename Visit>
void for_each_system(std::size_t m, Visit visit) {
  const std::size_t n = 2 * m;
  // -1 undecided, 0 not below, 1 strictly below
  std::vector<std::vector<int>> lt(n, std::vector<int>(n, -1));
  for (std::size_t a = 0; a < n; ++a) lt[a][a] = 0;
  std::vector<std::pair<SepId, SepId>> orbits;
  std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
  for (SepId x = 0; x < n; ++x) {
    for (SepId y = x + 1; y < n; ++y) {
      if (seen[x][y]) continue;
      SepId p = y ^ 1, q = x ^ 1;
      if (p > q) std::swap(p, q);
      seen[x][y] = seen[p][q] = 1;
      orbits.push_back({x, y});
    }
  }
  auto transitive_so_far = [&] {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (lt[a][b] != 1) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (lt[b][c] == 1 && (a == c || lt[a][c] == 0)) return false;
        }
      }
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == orbits.size()) {
      std::vector<SepId> inv(n);
      std::vector<Bitset> up(n, Bitset(n));
      for (SepId a = 0; a < n; ++a) {
        inv[a] = a ^ 1;
        for (SepId b = 0; b < n; ++b) up[a][b] = a == b || lt[a][b] == 1;
      }
      visit(SeparationSystem::from_relation(std::move(inv), std::move(up)));
      return;
    }
    auto [x, y] = orbits[i];
    for (int c = 0; c < 3; ++c) {
      lt[x][y] = lt[y ^ 1][x ^ 1] = (c == 1);
      lt[y][x] = lt[x ^ 1][y ^ 1] = (c == 2);
      if (transitive_so_far()) self(self, i + 1);
    }
    lt[x][y] = lt[y ^ 1][x ^ 1] = lt[y][x] = lt[x ^ 1][y ^ 1] = -1;
  };
  rec(rec, 0);
}

}  // namespace tftest
