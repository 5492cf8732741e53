#include "bundled.hpp"

#include "dqs/sampling.hpp"

#include <stdexcept>

namespace dqs {

namespace {

Rational rat(const char* text) { return parse_rational(text); }

Action act(std::string id, const char* lo, const char* hi,
           QuantumOperation op, std::set<EnvLabel> env = {}) {
  return Action{std::move(id), TimeInterval(rat(lo), rat(hi)), std::move(op),
                std::move(env)};
}

QuantumOperation gate(const CMat& u, Register reg) {
  return QuantumOperation{std::move(reg), {u}, OpKind::Unitary};
}

struct GateSet {
  CMat a1, a2, b1, b2, b3;
};

GateSet draw_gates(std::uint64_t seed) {
  Rng rng(seed);
  GateSet g;
  g.a1 = haar_unitary(rng, 2);
  g.a2 = haar_unitary(rng, 2);
  g.b1 = haar_unitary(rng, 2);
  g.b2 = haar_unitary(rng, 2);
  g.b3 = haar_unitary(rng, 2);
  return g;
}

Scenario make_s1(const GateSet& g, bool async) {
  Scenario sc;
  sc.name = async ? "s1_async" : "s1";
  sc.qubits = {"q1", "q2"};
  ProcessBuilder a("A");
  a.root(act("A1", "1", "2", gate(g.a1, {"q1"})));
  a.child("A1", act("A2", "3", "4", gate(g.a2, {"q1"})));
  ProcessBuilder b("B");
  if (async)
    b.root(act("B1", "3/2", "7/2", gate(g.b1, {"q2"})));
  else
    b.root(act("B1", "1", "2", gate(g.b1, {"q2"})));
  sc.system.processes = {a.build(), b.build()};
  return sc;
}

Scenario make_s2(const GateSet& g, bool async) {
  Scenario sc = make_s1(g, async);
  sc.name = async ? "s2_async" : "s2";
  ProcessBuilder c("C");
  if (async)
    c.root(act("C1", "3/8", "7/8", epr_prep("q1", "q2")));
  else
    c.root(act("C1", "1/4", "3/4", epr_prep("q1", "q2")));
  sc.system.processes.push_back(c.build());
  return sc;
}

Scenario make_s3(const GateSet& g, bool async) {
  Scenario sc;
  sc.name = async ? "s3_async" : "s3";
  sc.qubits = {"q1", "q2", "q3"};

  ProcessBuilder a("A");
  ProcessBuilder b("B");
  ProcessBuilder c("C");
  if (async) {
    a.root(act("A1", "3/2", "5/2", gate(g.a1, {"q1"})));
    a.child("A1", act("A2", "7/2", "19/4", gate(g.a2, {"q1"})));
    b.root(act("B1", "1/2", "3/2", gate(g.b1, {"q2"})));
    b.child("B1", act("B2", "5/2", "15/4", gate(g.b2, {"q3"})));
    b.child("B2", act("B3", "9/2", "5", gate(g.b3, {"q2"})));
    c.root(act("C1", "7/4", "9/4", epr_prep("q2", "q3")));
    c.child("C1", act("C2", "11/4", "13/4", epr_prep("q1", "q2")));
    c.child("C2", act("C3", "4", "17/4", epr_prep("q2", "q3")));
  } else {
    a.root(act("A1", "2", "5/2", gate(g.a1, {"q1"})));
    a.child("A1", act("A2", "4", "9/2", gate(g.a2, {"q1"})));
    b.root(act("B1", "1", "3/2", gate(g.b1, {"q2"})));
    b.child("B1", act("B2", "3", "7/2", gate(g.b2, {"q3"})));
    b.child("B2", act("B3", "5", "11/2", gate(g.b3, {"q2"})));
    c.root(act("C1", "2", "5/2", epr_prep("q2", "q3")));
    c.child("C1", act("C2", "3", "7/2", epr_prep("q1", "q2")));
    c.child("C2", act("C3", "4", "9/2", epr_prep("q2", "q3")));
  }
  sc.system.processes = {a.build(), b.build(), c.build()};
  return sc;
}

Scenario make_s4(const GateSet& g, bool async) {
  Scenario sc;
  sc.name = async ? "s4_async" : "s4";
  sc.qubits = {"q1", "q2", "q3"};

  ProcessBuilder a("A");
  ProcessBuilder b("B");
  ProcessBuilder c("C");
  if (async) {
    a.root(act("A1", "3/2", "5/2", gate(g.a1, {"q1"})));
    a.child("A1", act("A2", "7/2", "19/4", gate(g.a2, {"q1"})));
    a.child("A2", act("D0", "5", "11/2", measure_z("q1", {0}), {"devD"}));
    a.child("A2", act("D1", "5", "11/2", measure_z("q1", {1}), {"devD"}));
    b.root(act("B1", "1/2", "3/2", gate(g.b1, {"q2"})));
    b.child("B1", act("B2", "5/2", "15/4", gate(g.b2, {"q3"})));
    b.child("B2", act("B3", "9/2", "5", gate(g.b3, {"q2"})));
    b.child("B3", act("E0", "21/4", "23/4", measure_z("q2", {0}), {"devE"}));
    b.child("B3", act("E1", "21/4", "23/4", measure_z("q2", {1}), {"devE"}));
    c.root(act("C1", "7/4", "9/4", epr_prep("q2", "q3")));
    c.child("C1", act("C2", "11/4", "13/4", epr_prep("q1", "q2")));
    c.child("C2", act("C3", "4", "17/4", epr_prep("q2", "q3")));
    c.child("C3", act("F0", "5", "6", measure_z("q3", {0}), {"devF"}));
    c.child("C3", act("F1", "5", "6", measure_z("q3", {1}), {"devF"}));
  } else {
    a.root(act("A1", "2", "5/2", gate(g.a1, {"q1"})));
    a.child("A1", act("A2", "4", "9/2", gate(g.a2, {"q1"})));
    a.child("A2", act("D0", "6", "13/2", measure_z("q1", {0}), {"devD"}));
    a.child("A2", act("D1", "6", "13/2", measure_z("q1", {1}), {"devD"}));
    b.root(act("B1", "1", "3/2", gate(g.b1, {"q2"})));
    b.child("B1", act("B2", "3", "7/2", gate(g.b2, {"q3"})));
    b.child("B2", act("B3", "5", "11/2", gate(g.b3, {"q2"})));
    b.child("B3", act("E0", "6", "13/2", measure_z("q2", {0}), {"devE"}));
    b.child("B3", act("E1", "6", "13/2", measure_z("q2", {1}), {"devE"}));
    c.root(act("C1", "2", "5/2", epr_prep("q2", "q3")));
    c.child("C1", act("C2", "3", "7/2", epr_prep("q1", "q2")));
    c.child("C2", act("C3", "4", "9/2", epr_prep("q2", "q3")));
    c.child("C3", act("F0", "6", "13/2", measure_z("q3", {0}), {"devF"}));
    c.child("C3", act("F1", "6", "13/2", measure_z("q3", {1}), {"devF"}));
  }
  sc.system.processes = {a.build(), b.build(), c.build()};
  return sc;
}

Scenario make_nonlocal_clash() {
  Scenario sc;
  sc.name = "nonlocal_clash";
  sc.qubits = {"q0"};
  CMat z(2, 2);
  z << 1, 0, 0, -1;
  ProcessBuilder p0("P0");
  p0.root(act("NL.H", "1", "3", hadamard("q0")));
  ProcessBuilder p1("P1");
  p1.root(act("NL.Z", "2", "3",
              QuantumOperation{{"q0"}, {z}, OpKind::Unitary}));
  sc.system.processes = {p0.build(), p1.build()};
  sc.schedule_overrides["NL.H"] = rat("5/2");
  sc.schedule_overrides["NL.Z"] = rat("5/2");
  return sc;
}

}  // namespace

std::map<std::string, Scenario> bundled_scenarios(std::uint64_t seed) {
  const GateSet g = draw_gates(seed);
  std::map<std::string, Scenario> out;
  for (bool async : {false, true}) {
    const Scenario s1 = make_s1(g, async);
    const Scenario s2 = make_s2(g, async);
    const Scenario s3 = make_s3(g, async);
    const Scenario s4 = make_s4(g, async);
    out[s1.name] = s1;
    out[s2.name] = s2;
    out[s3.name] = s3;
    out[s4.name] = s4;
  }
  const Scenario clash = make_nonlocal_clash();
  out[clash.name] = clash;
  return out;
}

void write_bundled_scenarios(const std::string& dir, std::uint64_t seed) {
  for (const auto& [name, sc] : bundled_scenarios(seed))
    save_scenario(dir + "/" + name + ".json", sc);
}

}  // namespace dqs
