#pragma once

// Canonical nested sets distinguishing a family of consistent orientations.
//
// Each round takes, for every member P, the maximal separations that lie in P
// and in no other member (M_P), represents P by the infimum s_P of M_P, keeps
// only the separations nested with every M_P, and recurses on the members
// whose M_P was empty. Nothing in a round depends on how ids or members are
// numbered, so the union of the representatives commutes with isomorphisms.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tangle_forge/error.hpp"
#include "tangle_forge/orientations.hpp"
#include "tangle_forge/separation_system.hpp"

namespace tangle_forge {

inline constexpr std::size_t no_member = static_cast<std::size_t>(-1);

// How many members contain each oriented separation, and which one when it
// is exactly one.
class ExclusivityIndex {
 public:
  ExclusivityIndex(const SeparationSystem& sys, const FamilyIndex& index)
      : count_(sys.size()), owner_(sys.size(), no_member) {
    for (SepId x = 0; x < sys.size(); ++x) {
      count_[x] = index.count(x);
      if (count_[x] == 1) owner_[x] = index.holders(x).find_first();
    }
  }

  std::size_t count(SepId x) const { return count_[x]; }
  bool exclusive(SepId x) const { return count_[x] == 1; }
  // The member containing x if x is exclusive, else no_member.
  std::size_t owner(SepId x) const { return owner_[x]; }

 private:
  std::vector<std::size_t> count_;
  std::vector<std::size_t> owner_;
};

// For each member P, the maximal P-exclusive separations, ascending.
inline std::vector<std::vector<SepId>> compute_mp(
    const SeparationSystem& sys, const OrientationFamily& fam,
    const ExclusivityIndex& excl) {
  std::vector<Bitset> exclusive_in(fam.size(), Bitset(sys.size()));
  for (SepId x = 0; x < sys.size(); ++x) {
    if (excl.exclusive(x)) exclusive_in[excl.owner(x)].set(x);
  }
  std::vector<std::vector<SepId>> out(fam.size());
  for (std::size_t j = 0; j < fam.size(); ++j) {
    const Bitset& e = exclusive_in[j];
    for (SepId x = e.find_first(); x != Bitset::npos; x = e.find_next(x)) {
      if ((sys.up(x) & e).count() == 1) out[j].push_back(x);
    }
  }
  return out;
}

inline std::vector<std::vector<SepId>> compute_mp(const SeparationSystem& sys,
                                                  const OrientationFamily& fam) {
  return compute_mp(sys, fam, ExclusivityIndex(sys, FamilyIndex(sys, fam)));
}

// The infimum s_P of M_P for member `member`. Throws a precondition error if
// it does not exist, is not exclusive to the member, or (when
// `check_nesting`) some separation nested with all of M_P crosses it.
inline SepId infimum_sp(const SeparationSystem& sys,
                        const OrientationFamily& fam,
                        const ExclusivityIndex& excl, std::size_t member,
                        std::span<const SepId> mp, bool check_nesting = true) {
  const std::string who = "member " + std::to_string(member);
  if (mp.empty()) throw precondition_error("infimum_sp: M_P of " + who + " is empty");
  if (fam.size() < 2) throw precondition_error("infimum_sp: family has one member");
  auto inf = sys.infimum(mp);
  if (!inf) {
    throw precondition_error("maximal exclusive separations of " + who +
                             " have no infimum; the system is not submodular "
                             "for this family");
  }
  if (excl.owner(*inf) != member) {
    throw precondition_error("infimum " + std::to_string(*inf) + " of " + who +
                             " is not exclusive to it");
  }
  if (check_nesting) {
    for (SepId t = 0; t < sys.size(); ++t) {
      bool nested_with_all = std::all_of(
          mp.begin(), mp.end(), [&](SepId r) { return sys.nested(t, r); });
      if (nested_with_all && !sys.nested(t, *inf)) {
        throw precondition_error("separation " + std::to_string(t) +
                                 " is nested with M_P of " + who +
                                 " but crosses its infimum");
      }
    }
  }
  return *inf;
}

// S' (the separations nested with every M_P) and the members with empty M_P,
// restricted to S'.
struct Restriction {
  SubSystem sub;
  OrientationFamily family;
  std::vector<std::size_t> members;  // indices into the parent family
};

inline Restriction restrict_family(
    const SeparationSystem& sys, const OrientationFamily& fam,
    const std::vector<std::vector<SepId>>& mp) {
  std::vector<SepId> keep;
  for (SepId x = 0; x < sys.size(); ++x) {
    bool ok = true;
    for (const auto& m : mp) {
      for (SepId r : m) {
        if (!sys.nested(x, r)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) keep.push_back(x);
  }
  Restriction out{sys.induced(keep), {}, {}};
  const SeparationSystem& s2 = out.sub.system;
  for (std::size_t j = 0; j < fam.size(); ++j) {
    if (!mp[j].empty()) continue;
    Bitset bits(s2.unoriented_count());
    for (std::size_t i = 0; i < s2.unoriented_count(); ++i) {
      if (fam.members[j].contains(sys, out.sub.to_parent[s2.unoriented()[i]])) {
        bits.set(i);
      }
    }
    out.family.members.emplace_back(std::move(bits));
    out.members.push_back(j);
  }
  return out;
}

struct Certificate {
  std::size_t first = 0;
  std::size_t second = 0;
  SepId separation = no_sep;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct NestedSet {
  std::vector<SepId> separations;  // canonical ids, ascending
  std::vector<Certificate> certificates;
};

// One recursion step, in ids of the input system and indices of the input
// family.
struct RoundResult {
  std::vector<std::size_t> members;
  std::vector<std::pair<std::size_t, std::vector<SepId>>> mp;  // nonempty only
  std::vector<std::pair<std::size_t, SepId>> reps;
  std::vector<SepId> n1;
  std::vector<std::size_t> survivors;
  std::vector<SepId> surviving_separations;  // canonical ids of S'
};

// Number of times each structural property was asserted during a run.
struct RoundChecks {
  std::size_t rounds = 0;
  std::size_t some_mp_nonempty = 0;
  std::size_t cross_member_pairs = 0;
  std::size_t same_member_pairs = 0;
  std::size_t infima = 0;
  std::size_t infimum_nesting = 0;
  std::size_t n1_pairs = 0;
  std::size_t restrictions = 0;
};

struct TreeSetOptions {
  // Reject families for which the system is not submodular before starting.
  bool check_input = true;
  // Assert the per-round structural properties.
  bool check_rounds = true;
};

struct TreeSetResult {
  NestedSet nested;
  std::vector<RoundResult> rounds;
  RoundChecks checks;
};

namespace detail {

inline std::vector<Certificate> certify(const SeparationSystem& sys,
                                        const OrientationFamily& fam,
                                        const std::vector<SepId>& n) {
  std::vector<Certificate> out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      auto it = std::find_if(n.begin(), n.end(), [&](SepId s) {
        return fam.members[i].contains(sys, s) != fam.members[j].contains(sys, s);
      });
      if (it == n.end()) {
        throw precondition_error("members " + std::to_string(i) + " and " +
                                 std::to_string(j) + " are not distinguished");
      }
      out.push_back({i, j, *it});
    }
  }
  return out;
}

}  // namespace detail

inline TreeSetResult canonical_tree_set(const SeparationSystem& sys,
                                        const OrientationFamily& fam,
                                        TreeSetOptions options = {}) {
  check_family(sys, fam);
  if (options.check_input) {
    if (auto w = p_submodularity_witness(sys, fam)) {
      throw precondition_error(
          "system is not submodular for the family: crossing pair (" +
          std::to_string(w->first) + "," + std::to_string(w->second) +
          ") has neither a family-join nor a family-meet");
    }
  }

  TreeSetResult result;
  const bool asserting = options.check_rounds;
  SeparationSystem cur = sys;
  OrientationFamily cur_fam = fam;
  std::vector<SepId> to_orig(sys.size());
  for (SepId x = 0; x < sys.size(); ++x) to_orig[x] = x;
  std::vector<std::size_t> members(fam.size());
  for (std::size_t j = 0; j < fam.size(); ++j) members[j] = j;
  std::vector<SepId> n;

  while (cur_fam.size() >= 2) {
    RoundResult round;
    round.members = members;
    const FamilyIndex index(cur, cur_fam);
    const ExclusivityIndex excl(cur, index);
    const auto mp = compute_mp(cur, cur_fam, excl);

    ++result.checks.some_mp_nonempty;
    if (std::all_of(mp.begin(), mp.end(), [](const auto& m) { return m.empty(); })) {
      throw precondition_error("no member has an exclusive separation in round " +
                               std::to_string(result.rounds.size()));
    }
    if (asserting) {
      for (std::size_t p = 0; p < mp.size(); ++p) {
        for (std::size_t a = 0; a < mp[p].size(); ++a) {
          for (std::size_t b = a + 1; b < mp[p].size(); ++b) {
            ++result.checks.same_member_pairs;
            if (cur.nested(mp[p][a], mp[p][b])) {
              throw precondition_error("two maximal exclusive separations of member " +
                                       std::to_string(members[p]) + " are nested");
            }
          }
        }
        for (std::size_t q = p + 1; q < mp.size(); ++q) {
          for (SepId r : mp[p]) {
            for (SepId s : mp[q]) {
              ++result.checks.cross_member_pairs;
              if (!cur.nested(r, s)) {
                throw precondition_error(
                    "maximal exclusive separations of members " +
                    std::to_string(members[p]) + " and " +
                    std::to_string(members[q]) + " cross");
              }
            }
          }
        }
      }
    }

    std::vector<SepId> reps;
    for (std::size_t p = 0; p < mp.size(); ++p) {
      if (mp[p].empty()) continue;
      std::vector<SepId> orig_mp;
      for (SepId x : mp[p]) orig_mp.push_back(to_orig[x]);
      round.mp.emplace_back(members[p], std::move(orig_mp));
      ++result.checks.infima;
      if (asserting) ++result.checks.infimum_nesting;
      const SepId s = infimum_sp(cur, cur_fam, excl, p, mp[p], asserting);
      reps.push_back(s);
      round.reps.emplace_back(members[p], to_orig[s]);
    }
    if (asserting) {
      for (std::size_t a = 0; a < reps.size(); ++a) {
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
          ++result.checks.n1_pairs;
          if (!cur.nested(reps[a], reps[b])) {
            throw precondition_error("representatives " + std::to_string(to_orig[reps[a]]) +
                                     " and " + std::to_string(to_orig[reps[b]]) +
                                     " cross");
          }
        }
      }
    }
    for (SepId s : reps) round.n1.push_back(sys.canonical(to_orig[s]));
    std::sort(round.n1.begin(), round.n1.end());
    round.n1.erase(std::unique(round.n1.begin(), round.n1.end()), round.n1.end());
    n.insert(n.end(), round.n1.begin(), round.n1.end());

    Restriction next = restrict_family(cur, cur_fam, mp);
    const SeparationSystem& s2 = next.sub.system;
    std::vector<SepId> next_to_orig(s2.size());
    for (SepId x = 0; x < s2.size(); ++x) {
      next_to_orig[x] = to_orig[next.sub.to_parent[x]];
    }
    if (asserting) {
      ++result.checks.restrictions;
      for (SepId x = 0; x < s2.size(); ++x) {
        for (SepId s : reps) {
          if (!cur.nested(next.sub.to_parent[x], s)) {
            throw precondition_error("surviving separation " +
                                     std::to_string(next_to_orig[x]) +
                                     " crosses representative " +
                                     std::to_string(to_orig[s]));
          }
        }
      }
      if (auto w = p_submodularity_witness(s2, next.family)) {
        throw precondition_error(
            "restricted system is not submodular for the surviving members: (" +
            std::to_string(next_to_orig[w->first]) + "," +
            std::to_string(next_to_orig[w->second]) + ")");
      }
    }
    for (std::size_t a = 0; a < next.family.size(); ++a) {
      for (std::size_t b = a + 1; b < next.family.size(); ++b) {
        if (next.family.members[a] == next.family.members[b]) {
          throw precondition_error(
              "surviving members " + std::to_string(members[next.members[a]]) +
              " and " + std::to_string(members[next.members[b]]) +
              " are not distinguished by the restricted system");
        }
      }
    }

    std::vector<std::size_t> next_members;
    for (std::size_t j : next.members) next_members.push_back(members[j]);
    round.survivors = next_members;
    for (SepId c : s2.unoriented()) round.surviving_separations.push_back(next_to_orig[c]);
    std::sort(round.surviving_separations.begin(), round.surviving_separations.end());
    result.rounds.push_back(std::move(round));
    ++result.checks.rounds;

    cur = std::move(next.sub.system);
    cur_fam = std::move(next.family);
    to_orig = std::move(next_to_orig);
    members = std::move(next_members);
  }

  std::sort(n.begin(), n.end());
  n.erase(std::unique(n.begin(), n.end()), n.end());
  result.nested.certificates = detail::certify(sys, fam, n);
  result.nested.separations = std::move(n);
  return result;
}

struct VerificationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Re-checks a claimed output from the raw order relation alone: N c S, N
// nested, N a tree set, every pair of members distinguished, and every
// certificate genuine.
inline VerificationReport verify_nested_set(const SeparationSystem& sys,
                                            const OrientationFamily& fam,
                                            const NestedSet& nested) {
  VerificationReport rep;
  auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };
  const std::size_t n = sys.size();
  const auto& set = nested.separations;

  // slot of each canonical id, recomputed from the involution
  std::vector<SepId> canon;
  for (SepId x = 0; x < n; ++x) {
    if (x < sys.inv(x)) canon.push_back(x);
  }
  auto slot_of = [&](SepId c) {
    return static_cast<std::size_t>(
        std::lower_bound(canon.begin(), canon.end(), c) - canon.begin());
  };
  // member j holds the orientation `c` (canonical) of separation c?
  auto holds_low = [&](std::size_t j, SepId c) {
    return static_cast<bool>(fam.members[j].bits()[slot_of(c)]);
  };

  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] >= n) {
      fail("separation " + std::to_string(set[i]) + " is not in the system");
      return rep;
    }
    if (sys.inv(set[i]) < set[i]) {
      fail("separation " + std::to_string(set[i]) + " is not a canonical id");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (set[j] == set[i]) fail("separation " + std::to_string(set[i]) + " repeated");
    }
  }
  for (std::size_t j = 0; j < fam.size(); ++j) {
    if (fam.members[j].size() != canon.size()) {
      fail("member " + std::to_string(j) + " has the wrong length");
      return rep;
    }
  }

  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const SepId r = set[i], s = set[j];
      const SepId ro[] = {r, sys.inv(r)};
      const SepId so[] = {s, sys.inv(s)};
      bool nested = false;
      for (SepId x : ro) {
        for (SepId y : so) nested = nested || sys.leq(x, y);
      }
      if (!nested) {
        fail("separations " + std::to_string(r) + " and " + std::to_string(s) +
             " cross");
        continue;
      }
      // tree set: no orientation of one below both orientations of the other
      for (int flip = 0; flip < 2; ++flip) {
        const SepId* a = flip ? so : ro;
        const SepId* b = flip ? ro : so;
        for (int k = 0; k < 2; ++k) {
          if (sys.leq(a[k], b[0]) && sys.leq(a[k], b[1])) {
            fail("separations " + std::to_string(r) + " and " +
                 std::to_string(s) + " violate the tree-set condition");
          }
        }
      }
    }
  }

  auto distinguishes = [&](SepId s, std::size_t a, std::size_t b) {
    return holds_low(a, s) != holds_low(b, s);
  };
  for (std::size_t a = 0; a < fam.size(); ++a) {
    for (std::size_t b = a + 1; b < fam.size(); ++b) {
      bool found = std::any_of(set.begin(), set.end(),
                               [&](SepId s) { return distinguishes(s, a, b); });
      if (!found) {
        fail("members " + std::to_string(a) + " and " + std::to_string(b) +
             " are not distinguished (pair undistinguished)");
      }
    }
  }
  for (SepId s : set) {
    bool useful = false;
    for (std::size_t a = 0; a < fam.size() && !useful; ++a) {
      for (std::size_t b = a + 1; b < fam.size() && !useful; ++b) {
        useful = distinguishes(s, a, b);
      }
    }
    if (!useful) fail("separation " + std::to_string(s) + " distinguishes no pair");
  }
  for (const Certificate& c : nested.certificates) {
    if (c.first >= fam.size() || c.second >= fam.size() ||
        std::find(set.begin(), set.end(), c.separation) == set.end() ||
        !distinguishes(c.separation, c.first, c.second)) {
      fail("certificate (" + std::to_string(c.first) + "," +
           std::to_string(c.second) + "," + std::to_string(c.separation) +
           ") is not valid");
    }
  }
  return rep;
}

}  // namespace tangle_forge
