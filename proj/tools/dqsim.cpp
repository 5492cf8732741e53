#include "bundled.hpp"
#include "dqs/diagram.hpp"
#include "dqs/dynamics.hpp"
#include "dqs/measure.hpp"
#include "dqs/sampling.hpp"
#include "dqs/scenario.hpp"
#include "dqs/transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace dqs;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // validation / equivalence failure
constexpr int kExitUsage = 2;

std::vector<AnchorSpec> parse_anchor_spec(const System& s,
                                          const std::string& spec) {
  std::vector<AnchorSpec> anchors(s.processes.size(), std::nullopt);
  if (spec.empty()) return anchors;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("anchor must look like PROC=ACTION: " + item);
    const std::string proc = item.substr(0, eq);
    const std::string act = item.substr(eq + 1);
    int pi = -1;
    for (std::size_t i = 0; i < s.processes.size(); ++i)
      if (s.processes[i].name == proc) pi = static_cast<int>(i);
    if (pi < 0) throw std::invalid_argument("unknown process: " + proc);
    if (act != "WHOLE") anchors[static_cast<std::size_t>(pi)] = act;
  }
  return anchors;
}

Schedule schedule_for(const Scenario& sc, const std::string& policy) {
  if (policy == "explicit") {
    if (sc.schedule_overrides.empty())
      throw std::invalid_argument(
          "explicit policy needs a schedule block in the scenario file");
    return make_explicit_schedule(sc.system, sc.schedule_overrides);
  }
  return make_schedule(sc.system, parse_policy(policy));
}

Rational default_horizon(const System& s) {
  Rational t = 0;
  for (const auto& p : s.processes)
    for (const auto& a : p.actions) t = std::max(t, a.interval.hi);
  return t;
}

void print_matrix(const CMat& m) {
  const double cutoff = 1e-12;
  for (long r = 0; r < m.rows(); ++r) {
    std::cout << "  ";
    for (long c = 0; c < m.cols(); ++c) {
      Complex v = m(r, c);
      if (std::abs(v.real()) < cutoff) v.real(0.0);
      if (std::abs(v.imag()) < cutoff) v.imag(0.0);
      std::cout << "(" << v.real() << (v.imag() < 0 ? "" : "+") << v.imag()
                << "i) ";
    }
    std::cout << "\n";
  }
}

int cmd_validate(const std::string& file) {
  Scenario sc;
  try {
    sc = load_scenario(file);
  } catch (const std::exception& e) {
    std::cout << "load failed: " << e.what() << "\n";
    return kExitFailure;
  }
  const auto rep = validate_system(sc.system);
  auto flag = [](bool b) { return b ? "pass" : "FAIL"; };
  for (std::size_t i = 0; i < rep.processes.size(); ++i) {
    const auto& pr = rep.processes[i];
    std::cout << "process " << sc.system.processes[i].name << ":\n"
              << "  rooted_tree       " << flag(pr.rooted_tree) << "\n"
              << "  sequentiality     " << flag(pr.sequentiality) << "\n"
              << "  branching         " << flag(pr.branching) << "\n"
              << "  trace_preserving  " << flag(pr.trace_preserving) << "\n"
              << "  aligned           " << flag(pr.aligned) << "\n";
  }
  std::cout << "environment_disjoint " << flag(rep.environment_disjoint)
            << "\n"
            << "ids_unique           " << flag(rep.ids_unique) << "\n";
  return rep.ok() ? kExitOk : kExitFailure;
}

int cmd_simulate(const std::string& file, const std::string& time_str,
                 const std::string& policy, const std::string& anchors_str,
                 const std::string& state_str, bool all_orders) {
  const Scenario sc = load_scenario(file);
  const Schedule sched = schedule_for(sc, policy);
  const auto anchors = parse_anchor_spec(sc.system, anchors_str);
  const PartialSystem part = partial(sc.system, anchors);
  const Rational t =
      time_str.empty() ? default_horizon(sc.system) : parse_rational(time_str);
  DensityOperator rho = sc.initial_state();
  if (!state_str.empty()) rho = basis_state(sc.qubits, state_str);

  if (all_orders) {
    const auto scan = evolve_all_orders(part, sched, t, rho);
    std::cout << "tie-break orders: " << scan.orders << "\n"
              << "max divergence:   " << scan.max_divergence << "\n";
    for (const auto& w : scan.results.front().warnings)
      std::cout << "warning: " << w << "\n";
    if (scan.max_divergence > 0) {
      std::cout << "state (first order):\n";
      print_matrix(scan.results.front().state.mat);
      std::cout << "state (last order):\n";
      print_matrix(scan.results.back().state.mat);
    } else {
      print_matrix(scan.results.front().state.mat);
    }
    return kExitOk;
  }

  const auto res = evolve(part, sched, t, rho);
  std::cout << "applied events (t=" << to_string(t)
            << ", policy=" << policy << "):\n";
  for (const auto& [id, tau] : res.applied)
    std::cout << "  " << to_string(tau) << "  " << id << "\n";
  for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "trace: " << trace(res.state) << "\n"
            << "state:\n";
  print_matrix(res.state.mat);
  return kExitOk;
}

int cmd_measure(const std::string& file, const std::string& policy,
                std::vector<std::string> anchor_specs, bool all_leaves,
                const std::string& states_str, const std::string& out_path) {
  const Scenario sc = load_scenario(file);
  const Schedule sched = schedule_for(sc, policy);

  std::vector<std::pair<std::string, PartialSystem>> events;
  for (const auto& spec : anchor_specs)
    events.emplace_back(spec.empty() ? "WHOLE" : spec,
                        partial(sc.system, parse_anchor_spec(sc.system, spec)));
  if (all_leaves) {
    std::vector<std::vector<int>> leaf_sets;
    for (const auto& p : sc.system.processes)
      leaf_sets.push_back(p.leaves_below(p.root));
    std::vector<std::size_t> pick(leaf_sets.size(), 0);
    while (true) {
      std::vector<AnchorSpec> anchors;
      std::string label;
      for (std::size_t i = 0; i < leaf_sets.size(); ++i) {
        const auto& p = sc.system.processes[i];
        const auto& id = p.actions[leaf_sets[i][pick[i]]].id;
        anchors.emplace_back(id);
        label += (i ? "," : "") + p.name + "=" + id;
      }
      events.emplace_back(label, partial(sc.system, anchors));
      std::size_t i = 0;
      for (; i < leaf_sets.size(); ++i) {
        if (++pick[i] < leaf_sets[i].size()) break;
        pick[i] = 0;
      }
      if (i == leaf_sets.size()) break;
    }
  }
  if (events.empty())
    events.emplace_back("WHOLE", whole_partial(sc.system));

  std::vector<std::pair<std::string, DensityOperator>> states;
  if (states_str.empty()) {
    states.emplace_back("initial", sc.initial_state());
  } else if (states_str == "basis") {
    const long dim = 1L << sc.qubits.size();
    for (long b = 0; b < dim; ++b) {
      std::string bits;
      for (long k = static_cast<long>(sc.qubits.size()) - 1; k >= 0; --k)
        bits += ((b >> k) & 1) ? '1' : '0';
      states.emplace_back(bits, basis_state(sc.qubits, bits));
    }
  } else {
    std::stringstream ss(states_str);
    std::string bits;
    while (std::getline(ss, bits, ','))
      states.emplace_back(bits, basis_state(sc.qubits, bits));
  }

  json summary;
  summary["scenario"] = sc.name;
  summary["policy"] = policy;
  summary["rows"] = json::array();
  std::cout << "event | state | probability\n";
  for (const auto& [label, part] : events) {
    for (const auto& [sname, rho] : states) {
      const double p = mu(rho, part, sched);
      std::cout << label << " | " << sname << " | " << p << "\n";
      summary["rows"].push_back(
          {{"event", label}, {"state", sname}, {"probability", p}});
    }
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << summary.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_atomize(const std::string& file, const std::string& out_path,
                std::string map_path) {
  const Scenario sc = load_scenario(file);
  const auto res = atomize(sc.system);
  for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";

  Scenario out = sc;
  out.name = sc.name + "_atomized";
  out.system = res.system;
  out.schedule_overrides.clear();  // intervals changed; old instants are void
  save_scenario(out_path, out);
  if (map_path.empty()) map_path = out_path + ".map.json";
  save_mapping(map_path, res.gamma);

  std::set<ActionId> locals;
  for (const auto& p : res.system.processes)
    for (const auto& a : p.actions)
      if (is_local(a.id, res.system)) locals.insert(a.id);
  std::cout << "atomized scenario written to " << out_path << "\n"
            << "mapping written to " << map_path << "\n"
            << "local actions atomic: "
            << (is_atomic(locals, res.system) ? "yes" : "NO") << "\n";
  return kExitOk;
}

int cmd_equiv(const std::string& file1, const std::string& file2,
              const std::string& map_path, int depth, int states, double tol,
              std::uint64_t seed, const std::string& policies_csv,
              const std::string& out_path) {
  const Scenario sc1 = load_scenario(file1);
  const Scenario sc2 = load_scenario(file2);
  Isomorphism m;
  if (map_path.empty()) {
    // Identity by action id; locate each root in the other system for the
    // process correspondence.
    m = identity_isomorphism(sc1.system);
    m.process_map.clear();
    for (const auto& p : sc1.system.processes) {
      const auto [pi, ai] = sc2.system.find_action(p.actions[p.root].id);
      if (pi < 0)
        throw std::invalid_argument(
            "no --map given and ids do not line up (missing " +
            p.actions[p.root].id + ")");
      m.process_map.push_back(pi);
    }
  } else {
    m = load_mapping(map_path, sc1.system, sc2.system);
  }
  EquivalenceConfig cfg;
  if (depth >= 0) cfg.depth = depth;
  cfg.states = states;
  cfg.tol = tol;
  cfg.seed = seed;
  if (!policies_csv.empty()) {
    cfg.policies.clear();
    std::stringstream ss(policies_csv);
    std::string name;
    while (std::getline(ss, name, ',')) cfg.policies.push_back(parse_policy(name));
  }
  const auto rep = equivalence_check(sc1.system, sc2.system, m, cfg);
  std::cout << "isomorphism: " << (rep.isomorphism_ok ? "ok" : "FAIL") << "\n"
            << "comparisons: " << rep.comparisons << "\n"
            << "max deviation: " << rep.max_deviation << "\n"
            << "result: " << (rep.pass ? "EQUIVALENT (within tol)" : "FAIL")
            << "\n";
  for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
  if (!out_path.empty()) {
    json j{{"pass", rep.pass},
           {"isomorphism_ok", rep.isomorphism_ok},
           {"max_deviation", rep.max_deviation},
           {"comparisons", rep.comparisons},
           {"failures", rep.failures}};
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
  return rep.pass ? kExitOk : kExitFailure;
}

int cmd_diagram(const std::string& file, const std::string& format,
                const std::string& out_path) {
  const Scenario sc = load_scenario(file);
  std::string rendered;
  if (format == "ascii") rendered = render_ascii(sc);
  else if (format == "svg") rendered = render_svg(sc);
  else throw std::invalid_argument("format must be ascii or svg");
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path);
    out << rendered;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and equivalence checker for timed distributed "
               "quantum systems"};
  app.require_subcommand(1);

  std::string file, file2, time_str, policy = "completion";
  std::string anchors_str, state_str, states_str, out_path, map_path;
  std::string format = "ascii", policies_csv;
  std::vector<std::string> anchor_specs;
  bool all_orders = false, all_leaves = false;
  int depth = -1, states = 4;
  double tol = 1e-9;
  std::uint64_t seed = 12345;

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("file", file)->required();

  auto* simulate = app.add_subcommand("simulate", "evolve and dump the state");
  simulate->add_option("file", file)->required();
  simulate->add_option("--time", time_str, "evolve up to this instant");
  simulate->add_option("--schedule", policy,
                       "completion|start|midpoint|explicit");
  simulate->add_option("--anchors", anchors_str, "PROC=ACTION[,...]");
  simulate->add_option("--state", state_str, "computational basis input");
  simulate->add_flag("--all-orders", all_orders,
                     "enumerate simultaneous-action orders");

  auto* measure = app.add_subcommand("measure", "event probability table");
  measure->add_option("file", file)->required();
  measure->add_option("--schedule", policy);
  measure->add_option("--anchors", anchor_specs,
                      "event anchor spec, repeatable");
  measure->add_flag("--all-leaves", all_leaves, "all outcome events");
  measure->add_option("--states", states_str, "'basis' or bitstrings");
  measure->add_option("-o,--out", out_path, "machine-readable summary");

  auto* atomize_cmd = app.add_subcommand("atomize", "make local actions atomic");
  atomize_cmd->add_option("file", file)->required();
  atomize_cmd->add_option("-o,--out", out_path)->required();
  atomize_cmd->add_option("--map-out", map_path);

  auto* equiv = app.add_subcommand("equiv", "observable equivalence check");
  equiv->add_option("file1", file)->required();
  equiv->add_option("file2", file2)->required();
  equiv->add_option("--map", map_path, "action mapping file");
  equiv->add_option("--depth", depth, "event depth bound");
  equiv->add_option("--states", states, "random test states");
  equiv->add_option("--tol", tol);
  equiv->add_option("--seed", seed);
  equiv->add_option("--policies", policies_csv, "comma-separated policies");
  equiv->add_option("-o,--out", out_path);

  auto* diagram = app.add_subcommand("diagram", "space-time diagram");
  diagram->add_option("file", file)->required();
  diagram->add_option("--format", format, "ascii|svg");
  diagram->add_option("-o,--out", out_path);

  std::string gen_dir = "scenarios";
  auto* gen = app.add_subcommand("gen-examples",
                                 "re-derive the bundled scenario files");
  gen->add_option("--dir", gen_dir);
  gen->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (simulate->parsed())
      return cmd_simulate(file, time_str, policy, anchors_str, state_str,
                          all_orders);
    if (measure->parsed())
      return cmd_measure(file, policy, anchor_specs, all_leaves, states_str,
                         out_path);
    if (atomize_cmd->parsed()) return cmd_atomize(file, out_path, map_path);
    if (equiv->parsed())
      return cmd_equiv(file, file2, map_path, depth, states, tol, seed,
                       policies_csv, out_path);
    if (diagram->parsed()) return cmd_diagram(file, format, out_path);
    if (gen->parsed()) {
      write_bundled_scenarios(gen_dir, seed);
      std::cout << "bundled scenarios written to " << gen_dir << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
