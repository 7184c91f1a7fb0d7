#pragma once

// Separations of finite graphs and the systems S_k built from them.
//
// A separation (A,B) has A u B = V and no edge between A\B and B\A. Vertex
// sets are bitmasks over vertex ids 0..n-1. The separations of a graph form a
// universe: (A,B) <= (C,D) iff A c C and B > D, (A,B)* = (B,A), with join
// (A u C, B n D) and meet (A n C, B u D).

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tangle_forge/error.hpp"
#include "tangle_forge/separation_system.hpp"

namespace tangle_forge {

using VertexSet = std::uint64_t;

inline constexpr std::size_t default_vertex_cap = 12;
inline constexpr std::size_t max_representable_vertices = 63;

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n, 0) {
    if (n > max_representable_vertices) {
      throw size_limit_error("graph has " + std::to_string(n) +
                             " vertices, at most " +
                             std::to_string(max_representable_vertices) +
                             " are representable");
    }
  }

  static Graph from_edges(std::size_t n,
                          std::span<const std::pair<std::size_t, std::size_t>>
                              edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  // Duplicate edges are ignored. Loops and out-of-range ids are rejected.
  void add_edge(std::size_t u, std::size_t v) {
    if (u >= n_ || v >= n_) {
      throw precondition_error("edge (" + std::to_string(u) + "," +
                               std::to_string(v) + ") out of range");
    }
    if (u == v) {
      throw precondition_error("self-loop at vertex " + std::to_string(u));
    }
    adj_[u] |= VertexSet{1} << v;
    adj_[v] |= VertexSet{1} << u;
  }

  std::size_t n() const { return n_; }
  VertexSet vertices() const {
    return n_ == 0 ? 0 : (~VertexSet{0} >> (64 - n_));
  }
  VertexSet neighbours(std::size_t v) const { return adj_[v]; }
  bool has_edge(std::size_t u, std::size_t v) const {
    return (adj_[u] >> v) & 1;
  }

  // Union of the neighbourhoods of the vertices in `s`.
  VertexSet neighbours_of(VertexSet s) const {
    VertexSet out = 0;
    for (; s; s &= s - 1) out |= adj_[std::countr_zero(s)];
    return out;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = u + 1; v < n_; ++v) {
        if (has_edge(u, v)) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<VertexSet> adj_;
};

struct GraphSeparation {
  VertexSet a = 0;
  VertexSet b = 0;

  std::size_t order() const { return std::popcount(a & b); }
  GraphSeparation inverse() const { return {b, a}; }
  bool leq(const GraphSeparation& o) const {
    return (a & ~o.a) == 0 && (o.b & ~b) == 0;
  }

  friend auto operator<=>(const GraphSeparation&,
                          const GraphSeparation&) = default;
};

inline bool is_separation(const Graph& g, const GraphSeparation& s) {
  const VertexSet v = g.vertices();
  if ((s.a | s.b) != v) return false;
  const VertexSet only_a = s.a & ~s.b;
  const VertexSet only_b = s.b & ~s.a;
  return (g.neighbours_of(only_a) & only_b) == 0;
}

enum class Corner { join, meet };

inline GraphSeparation corner(const GraphSeparation& r, const GraphSeparation& s,
                              Corner which) {
  if (which == Corner::join) return {r.a | s.a, r.b & s.b};
  return {r.a & s.a, r.b | s.b};
}

inline std::string vertex_set_string(VertexSet s) {
  std::string out = "{";
  bool first = true;
  for (; s; s &= s - 1) {
    if (!first) out += ",";
    out += std::to_string(std::countr_zero(s));
    first = false;
  }
  return out + "}";
}

inline std::string to_string(const GraphSeparation& s) {
  return vertex_set_string(s.a) + "|" + vertex_set_string(s.b);
}

// All separations of g, both orientations, sorted by (A,B).
inline std::vector<GraphSeparation> all_separations(
    const Graph& g, std::size_t vertex_cap = default_vertex_cap) {
  if (g.n() > vertex_cap) {
    throw size_limit_error("graph has " + std::to_string(g.n()) +
                           " vertices, cap is " + std::to_string(vertex_cap));
  }
  const VertexSet v = g.vertices();
  std::vector<GraphSeparation> out;
  // For fixed A, B = (V\A) u Z with Z c A, and A\Z may not touch V\A. So Z
  // must contain the boundary of A and is free on the rest of A.
  for (VertexSet a = 0;; a = (a - v) & v) {
    const VertexSet outside = v & ~a;
    const VertexSet must = a & g.neighbours_of(outside);
    const VertexSet free = a & ~must;
    for (VertexSet z = 0;; z = (z - free) & free) {
      out.push_back({a, outside | must | z});
      if (z == free) break;
    }
    if (a == v) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The separation system S_k of all separations of order < k, excluding the
// degenerate (V,V), with the poset ids assigned in (A,B) order.
class SkSystem {
 public:
  const Graph& graph() const { return graph_; }
  std::size_t k() const { return k_; }
  const SeparationSystem& system() const { return system_; }
  const GraphSeparation& separation(SepId id) const { return seps_[id]; }
  const std::vector<GraphSeparation>& separations() const { return seps_; }

  std::optional<SepId> find(const GraphSeparation& s) const {
    auto it = std::lower_bound(seps_.begin(), seps_.end(), s);
    if (it == seps_.end() || *it != s) return std::nullopt;
    return static_cast<SepId>(it - seps_.begin());
  }

  // Id of the universe corner of two elements, if it lies in S_k.
  std::optional<SepId> corner_id(SepId r, SepId s, Corner which) const {
    return find(corner(seps_[r], seps_[s], which));
  }

  friend SkSystem build_sk(const Graph& g, std::size_t k,
                           std::size_t vertex_cap);

 private:
  Graph graph_;
  std::size_t k_ = 0;
  std::vector<GraphSeparation> seps_;
  SeparationSystem system_;
};

inline SkSystem build_sk(const Graph& g, std::size_t k,
                         std::size_t vertex_cap = default_vertex_cap) {
  if (k < 1) throw precondition_error("k must be at least 1");
  SkSystem out;
  out.graph_ = g;
  out.k_ = k;
  for (const GraphSeparation& s : all_separations(g, vertex_cap)) {
    if (s.order() < k && s.a != s.b) out.seps_.push_back(s);
  }
  const std::size_t n = out.seps_.size();
  std::vector<SepId> inv(n);
  std::vector<Bitset> up(n, Bitset(n));
  std::vector<std::string> labels(n);
  for (SepId i = 0; i < n; ++i) {
    inv[i] = *out.find(out.seps_[i].inverse());
    labels[i] = to_string(out.seps_[i]);
    for (SepId j = 0; j < n; ++j) {
      if (out.seps_[i].leq(out.seps_[j])) up[i].set(j);
    }
  }
  out.system_ = SeparationSystem::from_relation(std::move(inv), std::move(up),
                                                std::move(labels));
  return out;
}

// A pair of separations in `subsystem` with neither corner in `subsystem`,
// if one exists. Corners are taken in the universe of all separations.
inline std::optional<std::pair<GraphSeparation, GraphSeparation>>
structural_submodularity_witness(std::span<const GraphSeparation> subsystem) {
  std::vector<GraphSeparation> sorted(subsystem.begin(), subsystem.end());
  std::sort(sorted.begin(), sorted.end());
  auto contains = [&](const GraphSeparation& s) {
    return std::binary_search(sorted.begin(), sorted.end(), s);
  };
  for (const GraphSeparation& r : sorted) {
    for (const GraphSeparation& s : sorted) {
      if (!contains(corner(r, s, Corner::join)) &&
          !contains(corner(r, s, Corner::meet))) {
        return std::make_pair(r, s);
      }
    }
  }
  return std::nullopt;
}

inline std::optional<std::pair<SepId, SepId>> structural_submodularity_witness(
    const SkSystem& sk) {
  const std::size_t n = sk.separations().size();
  for (SepId r = 0; r < n; ++r) {
    for (SepId s = r; s < n; ++s) {
      if (!sk.corner_id(r, s, Corner::join) &&
          !sk.corner_id(r, s, Corner::meet)) {
        return std::make_pair(r, s);
      }
    }
  }
  return std::nullopt;
}

}  // namespace tangle_forge
