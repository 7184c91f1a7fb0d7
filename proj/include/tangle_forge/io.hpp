#pragma once

// File formats: edge-list graphs, the JSON interchange format for systems,
// families and results, and DOT rendering of nested sets.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tangle_forge/canonical_tree.hpp"
#include "tangle_forge/error.hpp"
#include "tangle_forge/graph_separations.hpp"
#include "tangle_forge/orientations.hpp"
#include "tangle_forge/separation_system.hpp"

namespace tangle_forge {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

// Edge list: first line n, then one "u v" per line, 0-indexed. Blank lines and
// '#' comments are ignored; duplicate edges collapse.
inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_n = false;
  Graph g;
  auto fail = [&](const std::string& what) {
    return parse_error("line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<long long> nums;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw fail("expected an integer, got '" + tok + "'");
      }
      if (used != tok.size()) throw fail("expected an integer, got '" + tok + "'");
      if (v < 0) throw fail("negative number " + tok);
      nums.push_back(v);
    }
    if (nums.empty()) continue;
    if (!have_n) {
      if (nums.size() != 1) throw fail("expected the vertex count alone");
      if (nums[0] > static_cast<long long>(max_representable_vertices)) {
        throw fail("too many vertices (" + std::to_string(nums[0]) + ")");
      }
      g = Graph(static_cast<std::size_t>(nums[0]));
      have_n = true;
      continue;
    }
    if (nums.size() != 2) throw fail("expected an edge 'u v'");
    const auto n = static_cast<long long>(g.n());
    if (nums[0] >= n || nums[1] >= n) {
      throw fail("vertex id out of range (n = " + std::to_string(n) + ")");
    }
    if (nums[0] == nums[1]) throw fail("self-loop at vertex " + std::to_string(nums[0]));
    g.add_edge(static_cast<std::size_t>(nums[0]), static_cast<std::size_t>(nums[1]));
  }
  if (!have_n) throw parse_error("missing vertex count");
  return g;
}

inline Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

// Compact single-line JSON with a trailing newline; key order is sorted.
inline std::string dump_json(const json& j) { return j.dump() + "\n"; }

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(what + ": " + e.what());
  }
}

namespace detail {

inline std::size_t json_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw parse_error(path + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline std::vector<std::pair<SepId, SepId>> json_pairs(const json& j,
                                                       const std::string& path) {
  if (!j.is_array()) throw parse_error(path + ": expected an array of pairs");
  std::vector<std::pair<SepId, SepId>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) {
      throw parse_error(p + ": expected a pair");
    }
    out.emplace_back(json_index(j[i][0], p + "/0"), json_index(j[i][1], p + "/1"));
  }
  return out;
}

}  // namespace detail

// { "m": <count>, "inv": [[a,b],...], "leq": [[a,b],...], "labels": {...} }
inline RawSystem raw_system_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("/: expected an object");
  RawSystem raw;
  if (!j.contains("m")) throw parse_error("/m: missing");
  raw.m = detail::json_index(j["m"], "/m");
  if (!j.contains("inv")) throw parse_error("/inv: missing");
  raw.inv = detail::json_pairs(j["inv"], "/inv");
  if (j.contains("leq")) raw.leq = detail::json_pairs(j["leq"], "/leq");
  if (j.contains("labels")) {
    const json& l = j["labels"];
    if (!l.is_object()) throw parse_error("/labels: expected an object");
    for (const auto& [key, value] : l.items()) {
      const std::string p = "/labels/" + key;
      std::size_t used = 0;
      SepId id = 0;
      try {
        id = std::stoull(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != key.size()) throw parse_error(p + ": key is not an id");
      if (!value.is_string()) throw parse_error(p + ": expected a string");
      raw.labels[id] = value.get<std::string>();
    }
  }
  return raw;
}

inline SeparationSystem system_from_json(const json& j) {
  return SeparationSystem::from_raw(raw_system_from_json(j));
}

inline json system_to_json(const SeparationSystem& sys) {
  RawSystem raw = sys.to_raw();
  json j;
  j["m"] = raw.m;
  j["inv"] = json::array();
  for (auto [a, b] : raw.inv) j["inv"].push_back({a, b});
  j["leq"] = json::array();
  for (auto [a, b] : raw.leq) j["leq"].push_back({a, b});
  if (!raw.labels.empty()) {
    j["labels"] = json::object();
    for (const auto& [id, label] : raw.labels) j["labels"][std::to_string(id)] = label;
  }
  return j;
}

inline SeparationSystem load_system(const std::string& path) {
  return system_from_json(parse_json_text(read_file(path), path));
}

inline void save_system(const std::string& path, const SeparationSystem& sys) {
  write_file(path, dump_json(system_to_json(sys)));
}

// { "m": <count>, "orientations": ["0110", ... ] }. Entries may also be
// objects with a "bits" string, as written by the profiles command.
inline OrientationFamily family_from_json(const json& j, const SeparationSystem& sys) {
  if (!j.is_object()) throw parse_error("/: expected an object");
  if (j.contains("m") &&
      detail::json_index(j["m"], "/m") != sys.unoriented_count()) {
    throw parse_error("/m: family is for " + j["m"].dump() +
                      " separations, system has " +
                      std::to_string(sys.unoriented_count()));
  }
  if (!j.contains("orientations") || !j["orientations"].is_array()) {
    throw parse_error("/orientations: expected an array");
  }
  OrientationFamily fam;
  const json& arr = j["orientations"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "/orientations/" + std::to_string(i);
    const json* bits = &arr[i];
    if (bits->is_object()) {
      if (!bits->contains("bits")) throw parse_error(p + "/bits: missing");
      bits = &(*bits)["bits"];
    }
    if (!bits->is_string()) throw parse_error(p + ": expected a bit string");
    const std::string s = bits->get<std::string>();
    if (s.size() != sys.unoriented_count()) {
      throw parse_error(p + ": has " + std::to_string(s.size()) +
                        " bits, system has " +
                        std::to_string(sys.unoriented_count()) + " separations");
    }
    try {
      fam.members.push_back(Orientation::from_string(s));
    } catch (const Error& e) {
      throw parse_error(p + ": " + e.what());
    }
  }
  return fam;
}

inline json family_to_json(const OrientationFamily& fam, std::size_t m) {
  json j;
  j["m"] = m;
  j["orientations"] = json::array();
  for (const Orientation& o : fam.members) j["orientations"].push_back(o.to_string());
  return j;
}

inline OrientationFamily load_family(const std::string& path,
                                     const SeparationSystem& sys) {
  return family_from_json(parse_json_text(read_file(path), path), sys);
}

inline void save_family(const std::string& path, const OrientationFamily& fam,
                        std::size_t m) {
  write_file(path, dump_json(family_to_json(fam, m)));
}

inline json rounds_to_json(const std::vector<RoundResult>& rounds) {
  json out = json::array();
  for (const RoundResult& r : rounds) {
    json jr;
    jr["members"] = r.members;
    jr["representatives"] = json::array();
    for (std::size_t i = 0; i < r.mp.size(); ++i) {
      jr["representatives"].push_back(
          {{"member", r.mp[i].first}, {"M", r.mp[i].second}, {"s", r.reps[i].second}});
    }
    jr["N1"] = r.n1;
    jr["survivors"] = r.survivors;
    jr["surviving_separations"] = r.surviving_separations;
    out.push_back(std::move(jr));
  }
  return out;
}

// { "N": [...], "certificates": [[i,j,s],...], "rounds": [...] }
inline json tree_set_to_json(const SeparationSystem& sys, const TreeSetResult& res) {
  json j;
  j["N"] = res.nested.separations;
  j["certificates"] = json::array();
  for (const Certificate& c : res.nested.certificates) {
    j["certificates"].push_back({c.first, c.second, c.separation});
  }
  j["rounds"] = rounds_to_json(res.rounds);
  bool labelled = std::any_of(res.nested.separations.begin(),
                              res.nested.separations.end(),
                              [&](SepId s) { return !sys.label(s).empty(); });
  if (labelled) {
    j["N_labels"] = json::array();
    for (SepId s : res.nested.separations) j["N_labels"].push_back(sys.display(s));
  }
  return j;
}

inline NestedSet nested_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j["N"].is_array()) {
    throw parse_error("/N: expected an array");
  }
  NestedSet out;
  for (std::size_t i = 0; i < j["N"].size(); ++i) {
    out.separations.push_back(detail::json_index(j["N"][i], "/N/" + std::to_string(i)));
  }
  if (j.contains("certificates")) {
    const json& c = j["certificates"];
    if (!c.is_array()) throw parse_error("/certificates: expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string p = "/certificates/" + std::to_string(i);
      if (!c[i].is_array() || c[i].size() != 3) throw parse_error(p + ": expected a triple");
      out.certificates.push_back({detail::json_index(c[i][0], p + "/0"),
                                  detail::json_index(c[i][1], p + "/1"),
                                  detail::json_index(c[i][2], p + "/2")});
    }
  }
  return out;
}

inline void save_nested_set(const std::string& path, const SeparationSystem& sys,
                            const TreeSetResult& res) {
  write_file(path, dump_json(tree_set_to_json(sys, res)));
}

// Renders N as a tree. Nodes are the consistent orientations of N reachable
// from the members' orientations by reversing one separation at a time; the
// edge across s joins two nodes that differ only on s. Members label the
// nodes they orient to, other nodes are drawn as points.
inline std::string emit_dot(const SeparationSystem& sys, const OrientationFamily& fam,
                            const NestedSet& nested) {
  const auto& n = nested.separations;
  using Node = std::vector<bool>;  // bit i: node holds the canonical id n[i]
  auto pick = [&](const Node& v, std::size_t i) { return v[i] ? n[i] : sys.inv(n[i]); };
  auto consistent = [&](const Node& v) {
    for (std::size_t i = 0; i < n.size(); ++i) {
      for (std::size_t j = 0; j < n.size(); ++j) {
        if (i != j && sys.leq(sys.inv(pick(v, i)), pick(v, j))) return false;
      }
    }
    return true;
  };

  std::map<Node, std::size_t> id;
  std::vector<Node> nodes;
  std::vector<std::vector<std::size_t>> at(0);
  std::deque<std::size_t> queue;
  auto add = [&](const Node& v) {
    auto [it, fresh] = id.emplace(v, nodes.size());
    if (fresh) {
      nodes.push_back(v);
      at.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  for (std::size_t j = 0; j < fam.size(); ++j) {
    Node v(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) v[i] = fam.members[j].contains(sys, n[i]);
    at[add(v)].push_back(j);
  }
  if (nodes.empty()) add(Node(n.size()));

  const std::size_t node_cap = 4 * (n.size() + 1) + fam.size();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> edges;
  while (!queue.empty() && nodes.size() <= node_cap) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n.size(); ++i) {
      Node v = nodes[u];
      v[i] = !v[i];
      if (!id.count(v) && !consistent(v)) continue;
      const std::size_t w = add(v);
      if (u < w) edges.push_back({{u, w}, i});
    }
  }
  std::sort(edges.begin(), edges.end());

  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "graph tree_set {\n";
  for (std::size_t u = 0; u < nodes.size(); ++u) {
    os << "  n" << u;
    if (at[u].empty()) {
      os << " [shape=point];\n";
    } else {
      std::string label;
      for (std::size_t j : at[u]) label += (label.empty() ? "P" : ",P") + std::to_string(j);
      os << " [label=" << quote(label) << "];\n";
    }
  }
  for (const auto& [uv, i] : edges) {
    os << "  n" << uv.first << " -- n" << uv.second << " [label=" << quote(sys.display(n[i]))
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tangle_forge
