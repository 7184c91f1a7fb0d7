#pragma once

// Isomorphisms of separation systems and seeded random relabelings, used to
// test that constructions do not depend on how a system is presented.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tangle_forge/error.hpp"
#include "tangle_forge/orientations.hpp"
#include "tangle_forge/separation_system.hpp"

namespace tangle_forge {

// A bijection on oriented ids; map[x] is the image of x.
struct SepIso {
  std::vector<SepId> map;

  SepId operator()(SepId x) const { return map[x]; }
  std::size_t size() const { return map.size(); }

  friend bool operator==(const SepIso&, const SepIso&) = default;
};

inline SepIso identity_iso(std::size_t n) {
  SepIso phi;
  phi.map.resize(n);
  for (SepId x = 0; x < n; ++x) phi.map[x] = x;
  return phi;
}

inline SepIso inverse(const SepIso& phi) {
  SepIso out;
  out.map.assign(phi.size(), no_sep);
  for (SepId x = 0; x < phi.size(); ++x) out.map[phi.map[x]] = x;
  return out;
}

struct IsoViolation {
  SepId first = no_sep;
  SepId second = no_sep;
  std::string reason;
};

// Checks that phi is a bijection a -> b commuting with the involutions and
// preserving the order in both directions.
inline std::optional<IsoViolation> verify_iso(const SepIso& phi,
                                              const SeparationSystem& a,
                                              const SeparationSystem& b) {
  const std::size_t n = a.size();
  if (phi.size() != n || b.size() != n) {
    return IsoViolation{no_sep, no_sep, "sizes differ"};
  }
  std::vector<char> hit(n, 0);
  for (SepId x = 0; x < n; ++x) {
    if (phi(x) >= n || hit[phi(x)]) return IsoViolation{x, no_sep, "not a bijection"};
    hit[phi(x)] = 1;
  }
  for (SepId x = 0; x < n; ++x) {
    if (phi(a.inv(x)) != b.inv(phi(x))) {
      return IsoViolation{x, a.inv(x), "does not commute with the involution"};
    }
  }
  for (SepId x = 0; x < n; ++x) {
    for (SepId y = 0; y < n; ++y) {
      if (a.leq(x, y) != b.leq(phi(x), phi(y))) {
        return IsoViolation{x, y, "does not preserve the order"};
      }
    }
  }
  return std::nullopt;
}

inline Orientation apply_iso(const SepIso& phi, const SeparationSystem& a,
                             const SeparationSystem& b, const Orientation& o) {
  std::vector<SepId> image;
  for (SepId x : o.oriented(a)) image.push_back(phi(x));
  return Orientation::from_oriented(b, image);
}

// Image family {phi(P)}, member order kept. With `check`, asserts that the
// image members are consistent exactly when the originals are, and that
// family submodularity is preserved.
inline OrientationFamily apply_iso(const SepIso& phi, const SeparationSystem& a,
                                   const SeparationSystem& b,
                                   const OrientationFamily& fam,
                                   bool check = true) {
  OrientationFamily out;
  for (const Orientation& o : fam.members) {
    out.members.push_back(apply_iso(phi, a, b, o));
    if (check && is_consistent(a, o) != is_consistent(b, out.members.back())) {
      throw Error(ErrorKind::canonicity,
                  "isomorphism changed the consistency of a member");
    }
  }
  if (check && is_p_submodular(a, fam) != is_p_submodular(b, out)) {
    throw Error(ErrorKind::canonicity,
                "isomorphism changed family submodularity");
  }
  return out;
}

// Image of a set of unoriented separations, as ascending canonical ids of b.
inline std::vector<SepId> apply_iso(const SepIso& phi,
                                    const SeparationSystem& b,
                                    std::span<const SepId> separations) {
  std::vector<SepId> out;
  for (SepId s : separations) out.push_back(b.canonical(phi(s)));
  std::sort(out.begin(), out.end());
  return out;
}

struct Relabeling {
  SeparationSystem system;
  SepIso phi;
};

// The system with its ids permuted by phi: x in sys becomes phi(x).
inline SeparationSystem relabel(const SeparationSystem& sys, const SepIso& phi) {
  const std::size_t n = sys.size();
  std::vector<SepId> inv(n);
  std::vector<Bitset> up(n, Bitset(n));
  std::vector<std::string> labels(n);
  for (SepId x = 0; x < n; ++x) {
    inv[phi(x)] = phi(sys.inv(x));
    labels[phi(x)] = sys.label(x);
    for (SepId y = sys.up(x).find_first(); y != Bitset::npos;
         y = sys.up(x).find_next(y)) {
      up[phi(x)].set(phi(y));
    }
  }
  return SeparationSystem::from_relation(std::move(inv), std::move(up),
                                         std::move(labels));
}

// A uniformly random permutation of the ids, determined by `seed`. Seed 0
// gives the identity. Uses an explicit Fisher-Yates over mt19937_64 so that
// the permutation does not depend on the standard library in use.
inline SepIso random_permutation(std::size_t n, std::uint64_t seed) {
  SepIso phi = identity_iso(n);
  if (seed == 0) return phi;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(phi.map[i - 1], phi.map[rng() % i]);
  }
  return phi;
}

inline Relabeling random_relabeling(const SeparationSystem& sys,
                                    std::uint64_t seed) {
  SepIso phi = random_permutation(sys.size(), seed);
  SeparationSystem image = relabel(sys, phi);
  return {std::move(image), std::move(phi)};
}

}  // namespace tangle_forge
