#include "dqs/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dqs {

using nlohmann::json;

namespace {

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("rational must be an integer or exact string");
}

json rational_to_json(const Rational& r) {
  const auto den = boost::multiprecision::denominator(r);
  const auto num = boost::multiprecision::numerator(r);
  if (den == 1 && num >= std::numeric_limits<long long>::min() &&
      num <= std::numeric_limits<long long>::max())
    return json(num.convert_to<long long>());
  return json(to_string(r));
}

CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix literal must be a nonempty array");
  const long rows = static_cast<long>(j.size());
  const long cols = static_cast<long>(j.at(0).size());
  CMat m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<long>(row.size()) != cols)
      throw std::invalid_argument("ragged matrix literal");
    for (long c = 0; c < cols; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix entry must be [re, im]");
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

QuantumOperation op_from_json(const json& j, const Register& reg) {
  if (j.contains("name")) {
    std::set<int> outcomes{0, 1};
    if (j.contains("outcomes")) {
      outcomes.clear();
      for (const auto& o : j.at("outcomes")) outcomes.insert(o.get<int>());
    }
    return standard_op(j.at("name").get<std::string>(), reg, outcomes);
  }
  if (!j.contains("kraus"))
    throw std::invalid_argument("op needs a name or a kraus list");
  std::vector<CMat> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  OpKind kind = OpKind::General;
  if (j.contains("kind")) {
    const auto k = j.at("kind").get<std::string>();
    if (k == "unitary") kind = OpKind::Unitary;
    else if (k == "partial-measurement") kind = OpKind::PartialMeasurement;
    else if (k == "general") kind = OpKind::General;
    else throw std::invalid_argument("unknown op kind: " + k);
  }
  // Imported Kraus data goes through the full validity check.
  return make_operation(reg, std::move(kraus), kind);
}

json op_to_json(const QuantumOperation& op) {
  json j;
  j["kraus"] = json::array();
  for (const auto& k : op.kraus) j["kraus"].push_back(matrix_to_json(k));
  switch (op.kind) {
    case OpKind::Unitary: j["kind"] = "unitary"; break;
    case OpKind::PartialMeasurement: j["kind"] = "partial-measurement"; break;
    case OpKind::General: j["kind"] = "general"; break;
  }
  return j;
}

Action action_from_json(const json& j) {
  Action a;
  a.id = j.at("id").get<std::string>();
  const auto& iv = j.at("interval");
  if (!iv.is_array() || iv.size() != 2)
    throw std::invalid_argument("interval must be [lo, hi] at " + a.id);
  a.interval = TimeInterval(rational_from_json(iv.at(0)),
                            rational_from_json(iv.at(1)));
  Register reg;
  for (const auto& q : j.at("register")) reg.push_back(q.get<std::string>());
  a.operation = op_from_json(j.at("op"), reg);
  if (j.contains("environment"))
    for (const auto& e : j.at("environment"))
      a.environment.insert(e.get<std::string>());
  if (a.operation.kind == OpKind::Unitary && !a.environment.empty())
    throw std::invalid_argument("unitary action with environment: " + a.id);
  return a;
}

void children_from_json(const json& j, ProcessBuilder& b,
                        const ActionId& parent) {
  if (!j.contains("children")) return;
  for (const auto& cj : j.at("children")) {
    Action a = action_from_json(cj);
    const ActionId id = a.id;
    b.child(parent, std::move(a));
    children_from_json(cj, b, id);
  }
}

json action_to_json(const Process& p, int idx) {
  const Action& a = p.actions[idx];
  json j;
  j["id"] = a.id;
  j["interval"] =
      json::array({rational_to_json(a.interval.lo),
                   rational_to_json(a.interval.hi)});
  j["register"] = a.operation.qubits;
  j["op"] = op_to_json(a.operation);
  if (!a.environment.empty()) j["environment"] = a.environment;
  if (!p.children[idx].empty()) {
    json kids = json::array();
    for (int c : p.children[idx]) kids.push_back(action_to_json(p, c));
    j["children"] = std::move(kids);
  }
  return j;
}

}  // namespace

DensityOperator Scenario::initial_state() const {
  if (initial.has_value()) return *initial;
  return basis_state(qubits, std::string(qubits.size(), '0'));
}

Scenario scenario_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  Scenario sc;
  sc.name = j.value("name", "");
  for (const auto& q : j.at("qubits")) sc.qubits.push_back(q.get<std::string>());

  for (const auto& pj : j.at("processes")) {
    ProcessBuilder b(pj.at("name").get<std::string>());
    Action root = action_from_json(pj.at("root"));
    const ActionId root_id = root.id;
    b.root(std::move(root));
    children_from_json(pj.at("root"), b, root_id);
    sc.system.processes.push_back(b.build());
  }

  if (j.contains("initial_state")) {
    const auto& st = j.at("initial_state");
    const auto kind = st.at("kind").get<std::string>();
    if (kind == "basis") {
      sc.initial = basis_state(sc.qubits, st.at("value").get<std::string>());
    } else if (kind == "amplitudes") {
      const auto& arr = st.at("value");
      CVec v(static_cast<long>(arr.size()));
      for (long i = 0; i < v.size(); ++i) {
        const auto& e = arr.at(static_cast<std::size_t>(i));
        v(i) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
      sc.initial = pure_state(sc.qubits, v);
    } else if (kind == "density") {
      sc.initial = make_density(sc.qubits, matrix_from_json(st.at("value")));
    } else {
      throw std::invalid_argument("unknown initial_state kind: " + kind);
    }
  }

  if (j.contains("schedule"))
    for (const auto& [id, v] : j.at("schedule").items())
      sc.schedule_overrides[id] = rational_from_json(v);

  // A scenario must describe a structurally valid system on its qubits.
  const auto rep = validate_system(sc.system);
  if (!rep.ok()) {
    std::string why = "scenario system fails validation:";
    for (std::size_t i = 0; i < rep.processes.size(); ++i) {
      const auto& pr = rep.processes[i];
      if (!pr.rooted_tree) why += " [" + std::to_string(i) + "] tree";
      if (!pr.sequentiality) why += " [" + std::to_string(i) + "] sequentiality";
      if (!pr.branching) why += " [" + std::to_string(i) + "] branching";
    }
    if (!rep.environment_disjoint) why += " environments overlap";
    if (!rep.ids_unique) why += " duplicate ids";
    throw std::invalid_argument(why);
  }
  if (!register_subset(sc.system.qubits(), sc.qubits))
    throw std::invalid_argument("actions use qubits not declared in scenario");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return scenario_from_json_text(buf.str());
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("parse error in " + path + ": " + e.what());
  }
}

std::string scenario_to_json_text(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["qubits"] = sc.qubits;
  j["processes"] = json::array();
  for (const auto& p : sc.system.processes) {
    json pj;
    pj["name"] = p.name;
    pj["root"] = action_to_json(p, p.root);
    j["processes"].push_back(std::move(pj));
  }
  if (sc.initial.has_value()) {
    json st;
    st["kind"] = "density";
    st["value"] = matrix_to_json(sc.initial->mat);
    j["initial_state"] = std::move(st);
  }
  if (!sc.schedule_overrides.empty()) {
    json sj;
    for (const auto& [id, t] : sc.schedule_overrides)
      sj[id] = rational_to_json(t);
    j["schedule"] = std::move(sj);
  }
  return j.dump(2) + "\n";
}

void save_scenario(const std::string& path, const Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write scenario file: " + path);
  out << scenario_to_json_text(sc);
}

Isomorphism load_mapping(const std::string& path, const System& s1,
                         const System& s2) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mapping file: " + path);
  json j;
  in >> j;
  Isomorphism m;
  for (const auto& pair : j.at("pairs")) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("mapping pairs must be [left, right]");
    m.action_map[pair.at(0).get<std::string>()] =
        pair.at(1).get<std::string>();
  }
  if (j.contains("processes")) {
    for (const auto& pp : j.at("processes"))
      m.process_map.push_back(pp.get<int>());
  } else {
    // Infer the process correspondence from the root images.
    for (const auto& p : s1.processes) {
      const auto it = m.action_map.find(p.actions[p.root].id);
      if (it == m.action_map.end())
        throw std::invalid_argument("mapping misses root of " + p.name);
      const auto [pi, ai] = s2.find_action(it->second);
      if (pi < 0)
        throw std::invalid_argument("mapped root not found: " + it->second);
      m.process_map.push_back(pi);
    }
  }
  return m;
}

void save_mapping(const std::string& path, const Isomorphism& m) {
  json j;
  j["pairs"] = json::array();
  for (const auto& [a, b] : m.action_map)
    j["pairs"].push_back(json::array({a, b}));
  j["processes"] = m.process_map;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write mapping file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dqs
