#pragma once

// Finite separation systems: a poset of oriented separations together with an
// order-reversing, fixed-point-free involution.
//
// Oriented separations are dense ids 0..2m-1. An unoriented separation is
// named by its canonical id, the smaller of its two orientations, and has a
// slot 0..m-1 given by the rank of that canonical id.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "tangle_forge/error.hpp"

namespace tangle_forge {

using SepId = std::size_t;
using Bitset = boost::dynamic_bitset<std::uint64_t>;

inline constexpr SepId no_sep = static_cast<SepId>(-1);

// Unvalidated input: a pairing and a relation given as pair lists, as found in
// the JSON interchange format. Reflexive pairs may be omitted.
struct RawSystem {
  std::size_t m = 0;
  std::vector<std::pair<SepId, SepId>> inv;
  std::vector<std::pair<SepId, SepId>> leq;
  std::map<SepId, std::string> labels;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool truncated = false;

  bool ok() const { return violations.empty(); }

  std::string summary() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) os << "; ";
      os << violations[i];
    }
    if (truncated) os << "; ...";
    return os.str();
  }
};

namespace detail {

inline constexpr std::size_t max_reported_violations = 64;

inline void report(ValidationReport& r, std::string msg) {
  if (r.violations.size() >= max_reported_violations) {
    r.truncated = true;
    return;
  }
  r.violations.push_back(std::move(msg));
}

// Checks the poset and involution axioms on a dense relation. `up[a][b]` means
// a <= b. The relation is taken as given; reflexivity must already hold.
inline void check_dense(const std::vector<SepId>& inv,
                        const std::vector<Bitset>& up, ValidationReport& r) {
  const std::size_t n = inv.size();
  for (SepId a = 0; a < n; ++a) {
    if (!up[a][a]) report(r, "reflexivity fails at " + std::to_string(a));
  }
  for (SepId a = 0; a < n; ++a) {
    for (SepId b = a + 1; b < n; ++b) {
      if (up[a][b] && up[b][a]) {
        report(r, "antisymmetry fails at (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
      }
    }
  }
  for (SepId a = 0; a < n; ++a) {
    for (SepId b = up[a].find_first(); b != Bitset::npos;
         b = up[a].find_next(b)) {
      if (b == a || up[b].is_subset_of(up[a])) continue;
      Bitset missing = up[b] - up[a];
      SepId c = missing.find_first();
      report(r, "transitivity fails at (" + std::to_string(a) + "," +
                    std::to_string(b) + "," + std::to_string(c) + ")");
    }
  }
  for (SepId a = 0; a < n; ++a) {
    for (SepId b = 0; b < n; ++b) {
      if (up[a][b] != up[inv[b]][inv[a]]) {
        report(r, "order reversal fails at (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
      }
    }
  }
}

// Resolves the pairing of a raw system. Returns the involution as a total
// map, with no_sep where it is undefined.
inline std::vector<SepId> resolve_pairing(const RawSystem& raw,
                                          ValidationReport& r) {
  const std::size_t n = 2 * raw.m;
  std::vector<SepId> inv(n, no_sep);
  for (auto [a, b] : raw.inv) {
    if (a >= n || b >= n) {
      report(r, "involution pair (" + std::to_string(a) + "," +
                    std::to_string(b) + ") out of range");
      continue;
    }
    if (a == b) {
      report(r, "involution fixed point at " + std::to_string(a));
      continue;
    }
    if (inv[a] != no_sep || inv[b] != no_sep) {
      report(r, "involution pair (" + std::to_string(a) + "," +
                    std::to_string(b) + ") overlaps an earlier pair");
      continue;
    }
    inv[a] = b;
    inv[b] = a;
  }
  for (SepId a = 0; a < n; ++a) {
    if (inv[a] == no_sep && std::none_of(raw.inv.begin(), raw.inv.end(),
                                         [&](auto p) {
                                           return p.first == a ||
                                                  p.second == a;
                                         })) {
      report(r, "no involution partner for " + std::to_string(a));
    }
  }
  return inv;
}

}  // namespace detail

// Checks every separation-system axiom on `raw` and lists the violations,
// each with a witness.
inline ValidationReport validate(const RawSystem& raw) {
  ValidationReport r;
  const std::size_t n = 2 * raw.m;
  std::vector<SepId> inv = detail::resolve_pairing(raw, r);

  std::vector<Bitset> up(n, Bitset(n));
  for (SepId a = 0; a < n; ++a) up[a].set(a);
  for (auto [a, b] : raw.leq) {
    if (a >= n || b >= n) {
      detail::report(r, "order pair (" + std::to_string(a) + "," +
                            std::to_string(b) + ") out of range");
      continue;
    }
    up[a].set(b);
  }
  for (const auto& [id, label] : raw.labels) {
    if (id >= n) detail::report(r, "label for unknown id " + std::to_string(id));
  }
  // Order reversal cannot be checked against an undefined involution.
  if (!r.ok()) return r;
  detail::check_dense(inv, up, r);
  return r;
}

// Closes the relation of `raw` transitively. Ids out of range are dropped and
// left for validate() to report on the original input.
inline RawSystem transitive_closure(const RawSystem& raw) {
  const std::size_t n = 2 * raw.m;
  std::vector<Bitset> up(n, Bitset(n));
  for (SepId a = 0; a < n; ++a) up[a].set(a);
  for (auto [a, b] : raw.leq) {
    if (a < n && b < n) up[a].set(b);
  }
  for (SepId k = 0; k < n; ++k) {
    for (SepId a = 0; a < n; ++a) {
      if (up[a][k]) up[a] |= up[k];
    }
  }
  RawSystem out = raw;
  out.leq.clear();
  for (SepId a = 0; a < n; ++a) {
    for (SepId b = up[a].find_first(); b != Bitset::npos;
         b = up[a].find_next(b)) {
      if (a != b) out.leq.emplace_back(a, b);
    }
  }
  return out;
}

// A subsystem together with the map from its ids to the ids of its parent.
struct SubSystem;

class SeparationSystem {
 public:
  SeparationSystem() = default;

  // Validates and builds. Throws an axiom error listing every violation.
  static SeparationSystem from_raw(const RawSystem& raw) {
    ValidationReport r = validate(raw);
    if (!r.ok()) throw axiom_error("invalid separation system: " + r.summary());
    const std::size_t n = 2 * raw.m;
    ValidationReport ignored;
    std::vector<SepId> inv = detail::resolve_pairing(raw, ignored);
    std::vector<Bitset> up(n, Bitset(n));
    for (SepId a = 0; a < n; ++a) up[a].set(a);
    for (auto [a, b] : raw.leq) up[a].set(b);
    std::vector<std::string> labels(n);
    for (const auto& [id, label] : raw.labels) labels[id] = label;
    return SeparationSystem(std::move(inv), std::move(up), std::move(labels));
  }

  // Builds from a dense relation; `up[a][b]` means a <= b and must be
  // reflexive. Validates and throws an axiom error on failure.
  static SeparationSystem from_relation(std::vector<SepId> inv,
                                        std::vector<Bitset> up,
                                        std::vector<std::string> labels = {}) {
    ValidationReport r;
    const std::size_t n = inv.size();
    if (n % 2 != 0) detail::report(r, "odd number of oriented separations");
    if (up.size() != n) detail::report(r, "relation size mismatch");
    for (SepId a = 0; a < n && r.ok(); ++a) {
      if (inv[a] >= n) {
        detail::report(r, "no involution partner for " + std::to_string(a));
      } else if (inv[a] == a) {
        detail::report(r, "involution fixed point at " + std::to_string(a));
      } else if (inv[inv[a]] != a) {
        detail::report(r, "involution is not an involution at " +
                              std::to_string(a));
      } else if (up[a].size() != n) {
        detail::report(r, "relation size mismatch");
      }
    }
    if (r.ok()) detail::check_dense(inv, up, r);
    if (!r.ok()) throw axiom_error("invalid separation system: " + r.summary());
    if (labels.empty()) labels.resize(n);
    return SeparationSystem(std::move(inv), std::move(up), std::move(labels));
  }

  std::size_t size() const { return inv_.size(); }
  std::size_t unoriented_count() const { return unoriented_.size(); }

  SepId inv(SepId x) const { return inv_[x]; }
  bool leq(SepId a, SepId b) const { return up_[a][b]; }
  bool lt(SepId a, SepId b) const { return a != b && up_[a][b]; }
  const Bitset& up(SepId a) const { return up_[a]; }
  const Bitset& down(SepId a) const { return down_[a]; }

  SepId canonical(SepId x) const { return std::min(x, inv_[x]); }
  std::size_t slot(SepId x) const { return slot_[x]; }
  // Canonical ids of the unoriented separations, ascending; index = slot.
  const std::vector<SepId>& unoriented() const { return unoriented_; }

  const std::string& label(SepId x) const { return labels_[x]; }
  std::string display(SepId x) const {
    return labels_[x].empty() ? std::to_string(x) : labels_[x];
  }
  const std::vector<std::string>& labels() const { return labels_; }

  bool comparable(SepId a, SepId b) const { return leq(a, b) || leq(b, a); }
  bool points_towards(SepId r, SepId s) const { return leq(r, inv_[s]); }
  bool points_away(SepId r, SepId s) const { return leq(inv_[r], s); }

  // Nestedness of the underlying separations; either orientation may be
  // passed for each.
  bool nested(SepId r, SepId s) const {
    return comparable(r, s) || points_towards(r, s) || points_away(r, s);
  }
  bool crosses(SepId r, SepId s) const { return !nested(r, s); }

  // Greatest common lower bound of `set` in the poset, if it exists. Elements
  // outside `within` (when given) are treated as absent from the poset.
  std::optional<SepId> infimum(std::span<const SepId> set,
                               const Bitset* within = nullptr) const {
    return extremum(set, within, down_, down_size_);
  }

  std::optional<SepId> supremum(std::span<const SepId> set,
                                const Bitset* within = nullptr) const {
    return extremum(set, within, up_, up_size_);
  }

  std::optional<SepId> infimum(SepId a, SepId b) const {
    const SepId pair[] = {a, b};
    return infimum(pair);
  }

  std::optional<SepId> supremum(SepId a, SepId b) const {
    const SepId pair[] = {a, b};
    return supremum(pair);
  }

  // The subsystem on `keep`, which must be closed under the involution. Ids
  // are renumbered densely in increasing order of parent id, so canonical ids
  // and slots keep their relative order.
  SubSystem induced(std::span<const SepId> keep) const;

  RawSystem to_raw() const {
    RawSystem raw;
    raw.m = unoriented_count();
    for (SepId c : unoriented_) raw.inv.emplace_back(c, inv_[c]);
    for (SepId a = 0; a < size(); ++a) {
      for (SepId b = up_[a].find_first(); b != Bitset::npos;
           b = up_[a].find_next(b)) {
        if (a != b) raw.leq.emplace_back(a, b);
      }
      if (!labels_[a].empty()) raw.labels[a] = labels_[a];
    }
    return raw;
  }

  friend bool operator==(const SeparationSystem& a, const SeparationSystem& b) {
    return a.inv_ == b.inv_ && a.up_ == b.up_;
  }

 private:
  SeparationSystem(std::vector<SepId> inv, std::vector<Bitset> up,
                   std::vector<std::string> labels)
      : inv_(std::move(inv)), up_(std::move(up)), labels_(std::move(labels)) {
    const std::size_t n = inv_.size();
    down_.assign(n, Bitset(n));
    for (SepId a = 0; a < n; ++a) {
      for (SepId b = up_[a].find_first(); b != Bitset::npos;
           b = up_[a].find_next(b)) {
        down_[b].set(a);
      }
    }
    up_size_.resize(n);
    down_size_.resize(n);
    slot_.resize(n);
    for (SepId a = 0; a < n; ++a) {
      up_size_[a] = up_[a].count();
      down_size_[a] = down_[a].count();
      if (a < inv_[a]) unoriented_.push_back(a);
    }
    for (std::size_t i = 0; i < unoriented_.size(); ++i) {
      slot_[unoriented_[i]] = i;
      slot_[inv_[unoriented_[i]]] = i;
    }
  }

  // Shared by infimum (toward = down) and supremum (toward = up). If a
  // greatest bound g exists, every other bound has a strictly smaller
  // toward-set, so g is the unique bound of maximal toward-set size.
  std::optional<SepId> extremum(std::span<const SepId> set,
                                const Bitset* within,
                                const std::vector<Bitset>& toward,
                                const std::vector<std::size_t>& toward_size)
      const {
    if (set.empty()) {
      throw precondition_error("infimum/supremum of an empty set");
    }
    Bitset bounds = toward[set.front()];
    for (SepId x : set.subspan(1)) bounds &= toward[x];
    if (within) bounds &= *within;
    SepId best = no_sep;
    for (SepId g = bounds.find_first(); g != Bitset::npos;
         g = bounds.find_next(g)) {
      if (best == no_sep || toward_size[g] > toward_size[best]) best = g;
    }
    if (best == no_sep || !bounds.is_subset_of(toward[best])) {
      return std::nullopt;
    }
    return best;
  }

  std::vector<SepId> inv_;
  std::vector<Bitset> up_;
  std::vector<Bitset> down_;
  std::vector<std::size_t> up_size_;
  std::vector<std::size_t> down_size_;
  std::vector<std::string> labels_;
  std::vector<SepId> unoriented_;
  std::vector<std::size_t> slot_;
};

struct SubSystem {
  SeparationSystem system;
  std::vector<SepId> to_parent;
};

inline SubSystem SeparationSystem::induced(std::span<const SepId> keep) const {
  const std::size_t n = size();
  std::vector<SepId> ids(keep.begin(), keep.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<SepId> local(n, no_sep);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= n) throw precondition_error("induced: id out of range");
    local[ids[i]] = i;
  }
  std::vector<SepId> inv(ids.size());
  std::vector<Bitset> up(ids.size(), Bitset(ids.size()));
  std::vector<std::string> labels(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    SepId partner = local[inv_[ids[i]]];
    if (partner == no_sep) {
      throw precondition_error("induced: id set not closed under involution at " +
                               std::to_string(ids[i]));
    }
    inv[i] = partner;
    labels[i] = labels_[ids[i]];
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (up_[ids[i]][ids[j]]) up[i].set(j);
    }
  }
  SubSystem sub{SeparationSystem(std::move(inv), std::move(up),
                                 std::move(labels)),
                std::move(ids)};
  return sub;
}

}  // namespace tangle_forge
