// tangle-forge: separation systems, profiles and canonical tree sets.
//
// Subcommands: sk, profiles, tree-set, check, canon-test. Exit codes: 0 on
// success, 2 parse, 3 axiom, 4 precondition or failed check, 5 canonicity,
// 1 I/O.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "tangle_forge/tangle_forge.hpp"

namespace tf = tangle_forge;

namespace {

struct RunConfig {
  std::string system_path;
  std::string family_arg;
  std::string graph_path;
  std::string nested_path;
  std::string out_path;
  std::string dot_path;
  std::size_t k = 0;
  std::size_t vertex_cap = tf::default_vertex_cap;
  std::optional<std::size_t> cap;
  std::uint64_t seeds = 20;
  bool unchecked = false;
  bool trace = false;
  bool all_consistent = false;
};

std::optional<std::size_t> env_cap() {
  const char* v = std::getenv("TANGLE_FORGE_CAP");
  if (!v || !*v) return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoull(v));
  } catch (const std::exception&) {
    throw tf::parse_error(std::string("TANGLE_FORGE_CAP is not a number: ") + v);
  }
}

std::size_t consistent_cap(const RunConfig& cfg) {
  if (cfg.cap) return *cfg.cap;
  return env_cap().value_or(tf::default_consistent_cap);
}

std::size_t profile_cap(const RunConfig& cfg) {
  if (cfg.cap) return *cfg.cap;
  return env_cap().value_or(tf::default_profile_cap);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    tf::write_file(path, text);
  }
}

// The system under study: built from the graph when one is given (and then
// required to match --system if that is given too), otherwise loaded.
struct Input {
  tf::SeparationSystem system;
  std::optional<tf::SkSystem> sk;
};

Input load_input(const RunConfig& cfg) {
  Input in;
  if (!cfg.graph_path.empty()) {
    if (cfg.k < 1) throw tf::precondition_error("-k is required with --graph");
    in.sk = tf::build_sk(tf::load_graph(cfg.graph_path), cfg.k, cfg.vertex_cap);
    in.system = in.sk->system();
    if (!cfg.system_path.empty() && !(tf::load_system(cfg.system_path) == in.system)) {
      throw tf::precondition_error("--system does not match the S_k built from --graph");
    }
    return in;
  }
  if (cfg.system_path.empty()) throw tf::precondition_error("--system or --graph is required");
  in.system = tf::load_system(cfg.system_path);
  return in;
}

tf::OrientationFamily load_family_arg(const RunConfig& cfg, const Input& in) {
  if (cfg.family_arg == "profiles") {
    if (!in.sk) throw tf::precondition_error("--family profiles needs --graph and -k");
    return {tf::enumerate_profiles(*in.sk, profile_cap(cfg))};
  }
  if (cfg.family_arg.empty()) throw tf::precondition_error("--family is required");
  return tf::load_family(cfg.family_arg, in.system);
}

int run_sk(const RunConfig& cfg) {
  if (cfg.k < 1) throw tf::precondition_error("-k must be at least 1");
  tf::SkSystem sk = tf::build_sk(tf::load_graph(cfg.graph_path), cfg.k, cfg.vertex_cap);
  emit(cfg.out_path, tf::dump_json(tf::system_to_json(sk.system())));
  return 0;
}

int run_profiles(const RunConfig& cfg) {
  Input in = load_input(cfg);
  const std::size_t m = in.system.unoriented_count();
  std::vector<tf::Orientation> list =
      (in.sk && !cfg.all_consistent) ? tf::enumerate_profiles(*in.sk, profile_cap(cfg))
                                     : tf::enumerate_consistent(in.system, consistent_cap(cfg));
  tf::json j;
  j["m"] = m;
  j["orientations"] = tf::json::array();
  for (const tf::Orientation& o : list) {
    tf::json entry;
    entry["bits"] = o.to_string();
    entry["consistent"] = true;
    entry["profile"] = in.sk ? tf::json(tf::is_profile(*in.sk, o)) : tf::json(nullptr);
    j["orientations"].push_back(std::move(entry));
  }
  emit(cfg.out_path, tf::dump_json(j));
  return 0;
}

int run_tree_set(const RunConfig& cfg) {
  Input in = load_input(cfg);
  tf::OrientationFamily fam = load_family_arg(cfg, in);
  tf::TreeSetOptions opts;
  opts.check_input = !cfg.unchecked;
  tf::TreeSetResult res = tf::canonical_tree_set(in.system, fam, opts);
  tf::VerificationReport rep = tf::verify_nested_set(in.system, fam, res.nested);
  if (!rep.ok()) {
    for (const auto& v : rep.violations) std::cerr << "verify: " << v << "\n";
    return 4;
  }
  emit(cfg.out_path, tf::dump_json(tf::tree_set_to_json(in.system, res)));
  if (!cfg.dot_path.empty()) emit(cfg.dot_path, tf::emit_dot(in.system, fam, res.nested));
  if (cfg.trace) std::cout << tf::dump_json(tf::rounds_to_json(res.rounds));
  return 0;
}

int run_check(const RunConfig& cfg) {
  if (cfg.graph_path.empty()) {
    if (cfg.system_path.empty()) throw tf::precondition_error("--system or --graph is required");
    tf::RawSystem raw = tf::raw_system_from_json(
        tf::parse_json_text(tf::read_file(cfg.system_path), cfg.system_path));
    tf::ValidationReport rep = tf::validate(raw);
    if (!rep.ok()) {
      std::cout << "system: invalid\n";
      for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
      if (rep.truncated) std::cout << "  ...\n";
      return 3;
    }
  }
  Input in = load_input(cfg);
  std::cout << "system: valid, " << in.system.unoriented_count() << " separations\n";
  if (in.sk) {
    auto w = tf::structural_submodularity_witness(*in.sk);
    std::cout << "structurally submodular: " << (w ? "no" : "yes") << "\n";
  }
  if (cfg.family_arg.empty()) return 0;

  tf::OrientationFamily fam = load_family_arg(cfg, in);
  int rc = 0;
  for (std::size_t j = 0; j < fam.size(); ++j) {
    auto w = tf::inconsistency_witness(in.system, fam.members[j]);
    std::cout << "member " << j << ": " << (w ? "inconsistent" : "consistent");
    if (w) {
      std::cout << " at (" << w->first << "," << w->second << ")";
      rc = 4;
    }
    if (in.sk) std::cout << ", " << (tf::is_profile(*in.sk, fam.members[j]) ? "profile" : "not a profile");
    std::cout << "\n";
  }
  auto w = tf::p_submodularity_witness(in.system, fam);
  std::cout << "submodular for the family: " << (w ? "no" : "yes");
  if (w) {
    std::cout << ", witness (" << w->first << "," << w->second << ")";
    rc = 4;
  }
  std::cout << "\n";
  if (!cfg.nested_path.empty()) {
    tf::NestedSet ns = tf::nested_set_from_json(
        tf::parse_json_text(tf::read_file(cfg.nested_path), cfg.nested_path));
    tf::VerificationReport rep = tf::verify_nested_set(in.system, fam, ns);
    std::cout << "nested set: " << (rep.ok() ? "verified" : "violations") << "\n";
    for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
    if (!rep.ok()) rc = 4;
  }
  return rc;
}

int run_canon_test(const RunConfig& cfg) {
  Input in = load_input(cfg);
  tf::OrientationFamily fam = load_family_arg(cfg, in);
  tf::TreeSetOptions opts;
  opts.check_input = !cfg.unchecked;
  const tf::NestedSet base = tf::canonical_tree_set(in.system, fam, opts).nested;
  for (std::uint64_t seed = 1; seed <= cfg.seeds; ++seed) {
    tf::Relabeling rl = tf::random_relabeling(in.system, seed);
    if (auto v = tf::verify_iso(rl.phi, in.system, rl.system)) {
      std::cerr << "seed " << seed << ": relabeling is not an isomorphism: " << v->reason << "\n";
      return 5;
    }
    tf::OrientationFamily image = tf::apply_iso(rl.phi, in.system, rl.system, fam);
    tf::SepIso order = tf::random_permutation(image.size(), seed);
    tf::OrientationFamily shuffled;
    shuffled.members.resize(image.size());
    for (std::size_t j = 0; j < image.size(); ++j) shuffled.members[order(j)] = image.members[j];
    const tf::NestedSet got = tf::canonical_tree_set(rl.system, shuffled, opts).nested;
    const auto expected = tf::apply_iso(rl.phi, rl.system, base.separations);
    if (got.separations != expected) {
      std::cerr << "canonicity violation: reproduce with seed " << seed << "\n";
      return 5;
    }
  }
  std::cout << "canonical under " << cfg.seeds << " relabelings: N has "
            << base.separations.size() << " separations\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separation systems, profiles and canonical tree sets"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_system = [&](CLI::App* sub) {
    sub->add_option("--system", cfg.system_path, "separation system JSON");
    sub->add_option("--graph", cfg.graph_path, "edge-list graph; builds S_k");
    sub->add_option("-k", cfg.k, "order bound for S_k");
    sub->add_option("--max-vertices", cfg.vertex_cap, "vertex cap for graph enumeration");
    sub->add_option("--cap", cfg.cap, "separation cap for orientation enumeration");
  };

  CLI::App* sk = app.add_subcommand("sk", "build S_k of a graph");
  sk->add_option("--graph", cfg.graph_path, "edge-list graph")->required();
  sk->add_option("-k", cfg.k, "order bound")->required();
  sk->add_option("--out", cfg.out_path, "output JSON (default stdout)");
  sk->add_option("--max-vertices", cfg.vertex_cap, "vertex cap");

  CLI::App* profiles = app.add_subcommand("profiles", "enumerate profiles or consistent orientations");
  add_system(profiles);
  profiles->add_option("--out", cfg.out_path, "output JSON (default stdout)");
  profiles->add_flag("--all-consistent", cfg.all_consistent,
                     "with --graph, list every consistent orientation");

  CLI::App* tree = app.add_subcommand("tree-set", "canonical nested set distinguishing a family");
  add_system(tree);
  tree->add_option("--family", cfg.family_arg, "family JSON, or 'profiles' with --graph");
  tree->add_option("--out", cfg.out_path, "output JSON (default stdout)");
  tree->add_option("--dot", cfg.dot_path, "DOT rendering of the nested set");
  tree->add_flag("--unchecked", cfg.unchecked, "skip the upfront submodularity check");
  tree->add_flag("--trace", cfg.trace, "print the per-round trace JSON");

  CLI::App* check = app.add_subcommand("check", "validate a system, family or nested set");
  add_system(check);
  check->add_option("--family", cfg.family_arg, "family JSON, or 'profiles' with --graph");
  check->add_option("--nested", cfg.nested_path, "tree-set output to verify");

  CLI::App* canon = app.add_subcommand("canon-test", "check invariance under random relabelings");
  add_system(canon);
  canon->add_option("--family", cfg.family_arg, "family JSON, or 'profiles' with --graph");
  canon->add_option("--seeds", cfg.seeds, "number of relabelings");
  canon->add_flag("--unchecked", cfg.unchecked, "skip the upfront submodularity check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sk)) return run_sk(cfg);
    if (app.got_subcommand(profiles)) return run_profiles(cfg);
    if (app.got_subcommand(tree)) return run_tree_set(cfg);
    if (app.got_subcommand(check)) return run_check(cfg);
    if (app.got_subcommand(canon)) return run_canon_test(cfg);
  } catch (const tf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tf::exit_code(e.kind());
  }
  return 1;
}
