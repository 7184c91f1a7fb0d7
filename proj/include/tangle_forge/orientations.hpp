#pragma once

// Orientations of separation systems, consistency, the profile property, and
// submodularity relative to a family of orientations.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tangle_forge/error.hpp"
#include "tangle_forge/graph_separations.hpp"
#include "tangle_forge/separation_system.hpp"

namespace tangle_forge {

inline constexpr std::size_t default_consistent_cap = 30;
inline constexpr std::size_t default_profile_cap = 20;

// One orientation per unoriented separation, stored as a bit per slot. A set
// bit selects the lower-id orientation (the canonical id) of that slot.
class Orientation {
 public:
  Orientation() = default;
  explicit Orientation(Bitset bits) : bits_(std::move(bits)) {}

  // Character i describes slot i; '1' selects the lower-id orientation.
  static Orientation from_string(std::string_view s) {
    Bitset bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        bits.set(i);
      } else if (s[i] != '0') {
        throw parse_error("orientation string has character '" +
                          std::string(1, s[i]) + "' at position " +
                          std::to_string(i));
      }
    }
    return Orientation(std::move(bits));
  }

  // From the set of chosen oriented ids; must pick exactly one per separation.
  static Orientation from_oriented(const SeparationSystem& sys,
                                   std::span<const SepId> chosen) {
    const std::size_t m = sys.unoriented_count();
    Bitset bits(m), seen(m);
    for (SepId x : chosen) {
      if (x >= sys.size()) {
        throw precondition_error("orientation names unknown id " +
                                 std::to_string(x));
      }
      const std::size_t slot = sys.slot(x);
      if (seen[slot]) {
        throw precondition_error("orientation picks separation " +
                                 std::to_string(sys.canonical(x)) + " twice");
      }
      seen.set(slot);
      if (x == sys.canonical(x)) bits.set(slot);
    }
    if (!seen.all()) {
      throw precondition_error("orientation misses separation " +
                               std::to_string(sys.unoriented()[(~seen).find_first()]));
    }
    return Orientation(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  const Bitset& bits() const { return bits_; }

  bool contains(const SeparationSystem& sys, SepId x) const {
    return bits_[sys.slot(x)] == (x == sys.canonical(x));
  }

  SepId chosen(const SeparationSystem& sys, std::size_t slot) const {
    const SepId low = sys.unoriented()[slot];
    return bits_[slot] ? low : sys.inv(low);
  }

  // Chosen oriented ids, ascending.
  std::vector<SepId> oriented(const SeparationSystem& sys) const {
    std::vector<SepId> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(chosen(sys, i));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Membership as a bitset over oriented ids.
  Bitset mask(const SeparationSystem& sys) const {
    Bitset out(sys.size());
    for (std::size_t i = 0; i < size(); ++i) out.set(chosen(sys, i));
    return out;
  }

  std::string to_string() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < size(); ++i) {
      if (bits_[i]) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const Orientation&, const Orientation&) = default;

  // Numeric order of the bit pattern, slot i carrying weight 2^i.
  friend bool operator<(const Orientation& a, const Orientation& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a.bits_[i] != b.bits_[i]) return b.bits_[i];
    }
    return false;
  }

 private:
  Bitset bits_;
};

struct OrientationFamily {
  std::vector<Orientation> members;

  std::size_t size() const { return members.size(); }
};

// For every oriented separation, the set of family members containing it.
class FamilyIndex {
 public:
  FamilyIndex(const SeparationSystem& sys, const OrientationFamily& fam)
      : holders_(sys.size(), Bitset(fam.size())) {
    for (std::size_t j = 0; j < fam.size(); ++j) {
      for (std::size_t i = 0; i < sys.unoriented_count(); ++i) {
        holders_[fam.members[j].chosen(sys, i)].set(j);
      }
    }
  }

  const Bitset& holders(SepId x) const { return holders_[x]; }
  std::size_t count(SepId x) const { return holders_[x].count(); }

 private:
  std::vector<Bitset> holders_;
};

// A pair of chosen elements x, y of distinct separations with x* <= y.
inline std::optional<std::pair<SepId, SepId>> inconsistency_witness(
    const SeparationSystem& sys, const Orientation& o) {
  const Bitset chosen = o.mask(sys);
  for (SepId x = chosen.find_first(); x != Bitset::npos;
       x = chosen.find_next(x)) {
    Bitset hits = sys.up(sys.inv(x)) & chosen;
    hits.reset(x);
    if (hits.any()) return std::make_pair(x, static_cast<SepId>(hits.find_first()));
  }
  return std::nullopt;
}

inline bool is_consistent(const SeparationSystem& sys, const Orientation& o) {
  return !inconsistency_witness(sys, o);
}

// A pair x, y in o whose universe meet x* ^ y* lies in S_k and in o.
inline std::optional<std::pair<SepId, SepId>> profile_violation(
    const SkSystem& sk, const Orientation& o) {
  const SeparationSystem& sys = sk.system();
  const std::vector<SepId> chosen = o.oriented(sys);
  for (SepId x : chosen) {
    for (SepId y : chosen) {
      auto w = sk.corner_id(sys.inv(x), sys.inv(y), Corner::meet);
      if (w && o.contains(sys, *w)) return std::make_pair(x, y);
    }
  }
  return std::nullopt;
}

inline bool is_profile(const SkSystem& sk, const Orientation& o) {
  return is_consistent(sk.system(), o) && !profile_violation(sk, o);
}

namespace detail {

inline void sort_orientations(std::vector<Orientation>& out) {
  std::sort(out.begin(), out.end());
}

inline void check_cap(std::size_t m, std::size_t cap, const char* what) {
  if (m > cap) {
    throw size_limit_error(std::string(what) + " over " + std::to_string(m) +
                           " separations, cap is " + std::to_string(cap));
  }
}

// Depth-first search over slots. `accept(slot, x, picked)` decides whether x
// may join the partial orientation `picked` (ids of slots < slot).
template <typename Accept>
std::vector<Orientation> search_orientations(const SeparationSystem& sys,
                                             Accept accept) {
  const std::size_t m = sys.unoriented_count();
  std::vector<Orientation> out;
  std::vector<SepId> picked;
  picked.reserve(m);
  auto rec = [&](auto& self, std::size_t slot) -> void {
    if (slot == m) {
      out.push_back(Orientation::from_oriented(sys, picked));
      return;
    }
    const SepId low = sys.unoriented()[slot];
    for (SepId x : {low, sys.inv(low)}) {
      if (!accept(slot, x, picked)) continue;
      picked.push_back(x);
      self(self, slot + 1);
      picked.pop_back();
    }
  };
  rec(rec, 0);
  sort_orientations(out);
  return out;
}

}  // namespace detail

// Every consistent orientation, in bit-pattern order.
inline std::vector<Orientation> enumerate_consistent(
    const SeparationSystem& sys, std::size_t cap = default_consistent_cap) {
  detail::check_cap(sys.unoriented_count(), cap, "consistent orientations");
  return detail::search_orientations(
      sys, [&](std::size_t, SepId x, const std::vector<SepId>& picked) {
        return std::none_of(picked.begin(), picked.end(), [&](SepId y) {
          return sys.leq(sys.inv(x), y) || sys.leq(sys.inv(y), x);
        });
      });
}

// Every profile of S_k, in bit-pattern order. The profile property is checked
// as soon as all three separations of a triple (x, y, x* ^ y*) are decided.
inline std::vector<Orientation> enumerate_profiles(
    const SkSystem& sk, std::size_t cap = default_profile_cap) {
  const SeparationSystem& sys = sk.system();
  detail::check_cap(sys.unoriented_count(), cap, "profiles");
  const std::size_t n = sys.size();
  // meet[x][y] = id of x* ^ y* in S_k, or no_sep
  std::vector<std::vector<SepId>> meet(n, std::vector<SepId>(n, no_sep));
  for (SepId x = 0; x < n; ++x) {
    for (SepId y = 0; y < n; ++y) {
      if (auto w = sk.corner_id(sys.inv(x), sys.inv(y), Corner::meet)) {
        meet[x][y] = *w;
      }
    }
  }
  Bitset in(n);
  return detail::search_orientations(
      sys, [&](std::size_t, SepId x, const std::vector<SepId>& picked) {
        for (SepId y : picked) {
          if (sys.leq(sys.inv(x), y) || sys.leq(sys.inv(y), x)) return false;
        }
        in.reset();
        for (SepId y : picked) in.set(y);
        in.set(x);
        auto is_in = [&](SepId w) { return w != no_sep && in[w]; };
        for (std::size_t i = 0; i < picked.size(); ++i) {
          const SepId y = picked[i];
          if (is_in(meet[x][y]) || is_in(meet[y][x])) return false;
          // x itself as the meet of two earlier choices
          for (std::size_t j = 0; j <= i; ++j) {
            if (meet[y][picked[j]] == x) return false;
          }
        }
        return true;
      });
}

// The supremum of x and y if every member containing both contains it.
inline std::optional<SepId> p_join(const SeparationSystem& sys,
                                   const FamilyIndex& index, SepId x, SepId y) {
  auto sup = sys.supremum(x, y);
  if (!sup) return std::nullopt;
  Bitset both = index.holders(x) & index.holders(y);
  if (!both.is_subset_of(index.holders(*sup))) return std::nullopt;
  return sup;
}

// The infimum of x and y if every member containing x* and y* contains its
// inverse.
inline std::optional<SepId> p_meet(const SeparationSystem& sys,
                                   const FamilyIndex& index, SepId x, SepId y) {
  auto inf = sys.infimum(x, y);
  if (!inf) return std::nullopt;
  Bitset both = index.holders(sys.inv(x)) & index.holders(sys.inv(y));
  if (!both.is_subset_of(index.holders(sys.inv(*inf)))) return std::nullopt;
  return inf;
}

// The first crossing oriented pair with neither a family-join nor a
// family-meet. Every orientation of every crossing pair is examined.
inline std::optional<std::pair<SepId, SepId>> p_submodularity_witness(
    const SeparationSystem& sys, const FamilyIndex& index) {
  const std::size_t n = sys.size();
  for (SepId x = 0; x < n; ++x) {
    for (SepId y = x + 1; y < n; ++y) {
      if (sys.nested(x, y)) continue;
      if (!p_join(sys, index, x, y) && !p_meet(sys, index, x, y)) {
        return std::make_pair(x, y);
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::pair<SepId, SepId>> p_submodularity_witness(
    const SeparationSystem& sys, const OrientationFamily& fam) {
  return p_submodularity_witness(sys, FamilyIndex(sys, fam));
}

inline bool is_p_submodular(const SeparationSystem& sys,
                            const OrientationFamily& fam) {
  return !p_submodularity_witness(sys, fam);
}

// Rejects families whose members have the wrong length, repeat, or are
// inconsistent.
inline void check_family(const SeparationSystem& sys,
                         const OrientationFamily& fam) {
  for (std::size_t j = 0; j < fam.size(); ++j) {
    const Orientation& o = fam.members[j];
    if (o.size() != sys.unoriented_count()) {
      throw precondition_error("member " + std::to_string(j) + " orients " +
                               std::to_string(o.size()) + " separations, system has " +
                               std::to_string(sys.unoriented_count()));
    }
    if (auto w = inconsistency_witness(sys, o)) {
      throw precondition_error("member " + std::to_string(j) +
                               " is inconsistent at (" + std::to_string(w->first) +
                               "," + std::to_string(w->second) + ")");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (fam.members[i] == o) {
        throw precondition_error("members " + std::to_string(i) + " and " +
                                 std::to_string(j) + " are equal");
      }
    }
  }
}

}  // namespace tangle_forge
