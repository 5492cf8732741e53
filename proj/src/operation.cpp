#include "dqs/operation.hpp"

#include <algorithm>
#include <stdexcept>

namespace dqs {

namespace {

void check_kraus_dims(const QuantumOperation& op) {
  const long dim = 1L << op.qubits.size();
  if (op.kraus.empty())
    throw std::invalid_argument("operation needs at least one Kraus matrix");
  for (const auto& e : op.kraus)
    if (e.rows() != dim || e.cols() != dim)
      throw std::invalid_argument("Kraus matrix dimension mismatch");
  std::set<QubitId> uniq(op.qubits.begin(), op.qubits.end());
  if (uniq.size() != op.qubits.size())
    throw std::invalid_argument("register has duplicate qubits");
}

CVec vec_of(const CMat& m) {
  return Eigen::Map<const CVec>(m.data(), m.size());
}

}  // namespace

CMat kraus_sum(const QuantumOperation& op) {
  const long dim = 1L << op.qubits.size();
  CMat s = CMat::Zero(dim, dim);
  for (const auto& e : op.kraus) s += e.adjoint() * e;
  return s;
}

CMat choi_matrix(const QuantumOperation& op) {
  const long d2 = op.kraus.front().size();
  CMat choi = CMat::Zero(d2, d2);
  for (const auto& e : op.kraus) {
    const CVec v = vec_of(e);
    choi += v * v.adjoint();
  }
  return choi;
}

CMat superoperator(const QuantumOperation& op) {
  const long dim = op.kraus.front().rows();
  CMat s = CMat::Zero(dim * dim, dim * dim);
  // vec(E rho E^dag) = (conj(E) (x) E) vec(rho), column-major vec.
  for (const auto& e : op.kraus) s += kron(e.conjugate(), e);
  return s;
}

OperationReport check_validity(const QuantumOperation& op, double tol) {
  check_kraus_dims(op);
  OperationReport rep;
  const CMat s = kraus_sum(op);
  const CMat sym = (s + s.adjoint()) / 2.0;
  rep.trace_nonincreasing_ok =
      min_eigenvalue(sym) >= -tol && max_eigenvalue(sym) <= 1.0 + tol;
  const long dim = s.rows();
  rep.trace_preserving = max_abs(s - CMat::Identity(dim, dim)) <= tol;
  if (op.kraus.size() == 1) {
    const CMat& u = op.kraus.front();
    rep.unitary = max_abs(u.adjoint() * u - CMat::Identity(dim, dim)) <= tol;
  }
  const CMat choi = choi_matrix(op);
  rep.cp_ok = min_eigenvalue((choi + choi.adjoint()) / 2.0) >= -tol;
  return rep;
}

QuantumOperation make_operation(Register qubits, std::vector<CMat> kraus,
                                OpKind kind, double tol) {
  QuantumOperation op{std::move(qubits), std::move(kraus), kind};
  const auto rep = check_validity(op, tol);
  if (!rep.ok())
    throw std::invalid_argument(
        rep.cp_ok ? "Kraus sum exceeds identity (not trace-non-increasing)"
                  : "Choi matrix not positive semi-definite");
  if (kind == OpKind::Unitary && !rep.unitary)
    throw std::invalid_argument("declared unitary is not a single unitary");
  return op;
}

DensityOperator apply(const QuantumOperation& op, const DensityOperator& rho) {
  if (!register_subset(op.qubits, rho.qubits))
    throw std::invalid_argument("apply: operation register not in state");
  const long dim = 1L << rho.qubits.size();
  if (rho.mat.rows() != dim || rho.mat.cols() != dim)
    throw std::invalid_argument("apply: state dimension mismatch");
  CMat out = CMat::Zero(dim, dim);
  for (const auto& e : op.kraus) {
    const CMat emb = embed(e, op.qubits, rho.qubits);
    out += emb * rho.mat * emb.adjoint();
  }
  return DensityOperator{rho.qubits, std::move(out)};
}

QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b) {
  if (!registers_disjoint(a.qubits, b.qubits))
    throw std::invalid_argument("tensor: overlapping registers");
  Register reg = a.qubits;
  reg.insert(reg.end(), b.qubits.begin(), b.qubits.end());
  std::vector<CMat> kraus;
  kraus.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& ea : a.kraus)
    for (const auto& eb : b.kraus) kraus.push_back(kron(ea, eb));
  OpKind kind = OpKind::General;
  if (a.kind == OpKind::Unitary && b.kind == OpKind::Unitary)
    kind = OpKind::Unitary;
  else if (a.kind == OpKind::PartialMeasurement &&
           b.kind == OpKind::PartialMeasurement)
    kind = OpKind::PartialMeasurement;
  return QuantumOperation{std::move(reg), std::move(kraus), kind};
}

QuantumOperation compose(const QuantumOperation& second,
                         const QuantumOperation& first) {
  const Register reg = register_union(second.qubits, first.qubits);
  std::vector<CMat> fs, ss;
  for (const auto& e : first.kraus) fs.push_back(embed(e, first.qubits, reg));
  for (const auto& e : second.kraus) ss.push_back(embed(e, second.qubits, reg));
  std::vector<CMat> kraus;
  kraus.reserve(fs.size() * ss.size());
  for (const auto& s : ss)
    for (const auto& f : fs) kraus.push_back(s * f);
  const OpKind kind =
      (second.kind == OpKind::Unitary && first.kind == OpKind::Unitary)
          ? OpKind::Unitary
          : OpKind::General;
  return QuantumOperation{reg, std::move(kraus), kind};
}

QuantumOperation identity_op(Register qubits) {
  const long dim = 1L << qubits.size();
  return QuantumOperation{std::move(qubits),
                          {CMat::Identity(dim, dim)},
                          OpKind::Unitary};
}

QuantumOperation x_gate(QubitId q) {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  return QuantumOperation{{std::move(q)}, {std::move(x)}, OpKind::Unitary};
}

QuantumOperation hadamard(QubitId q) {
  const double s = 1.0 / std::sqrt(2.0);
  CMat h(2, 2);
  h << s, s, s, -s;
  return QuantumOperation{{std::move(q)}, {std::move(h)}, OpKind::Unitary};
}

QuantumOperation cnot(QubitId control, QubitId target) {
  CMat c = CMat::Zero(4, 4);
  c(0, 0) = 1;
  c(1, 1) = 1;
  c(2, 3) = 1;
  c(3, 2) = 1;
  return QuantumOperation{{std::move(control), std::move(target)},
                          {std::move(c)},
                          OpKind::Unitary};
}

QuantumOperation epr_prep(QubitId q1, QubitId q2) {
  // CNOT * (H (x) Id): maps |xy> to (|0,y> + (-1)^x |1,1-y>)/sqrt(2).
  const double s = 1.0 / std::sqrt(2.0);
  CMat h(2, 2);
  h << s, s, s, -s;
  CMat hi = kron(h, CMat::Identity(2, 2));
  CMat c = CMat::Zero(4, 4);
  c(0, 0) = 1;
  c(1, 1) = 1;
  c(2, 3) = 1;
  c(3, 2) = 1;
  return QuantumOperation{{std::move(q1), std::move(q2)},
                          {c * hi},
                          OpKind::Unitary};
}

QuantumOperation measure_z(QubitId q, const std::set<int>& outcomes) {
  if (outcomes.empty())
    throw std::invalid_argument("measurement needs at least one outcome");
  std::vector<CMat> kraus;
  for (int m : outcomes) {
    if (m != 0 && m != 1)
      throw std::invalid_argument("MEASURE_Z outcome must be 0 or 1");
    CMat p = CMat::Zero(2, 2);
    p(m, m) = 1;
    kraus.push_back(std::move(p));
  }
  return QuantumOperation{{std::move(q)},
                          std::move(kraus),
                          OpKind::PartialMeasurement};
}

QuantumOperation standard_op(const std::string& name, const Register& reg,
                             const std::set<int>& outcomes) {
  auto need = [&](std::size_t n) {
    if (reg.size() != n)
      throw std::invalid_argument(name + " expects " + std::to_string(n) +
                                  " qubit(s)");
  };
  if (name == "X") {
    need(1);
    return x_gate(reg[0]);
  }
  if (name == "H") {
    need(1);
    return hadamard(reg[0]);
  }
  if (name == "CNOT") {
    need(2);
    return cnot(reg[0], reg[1]);
  }
  if (name == "EPR_PREP") {
    need(2);
    return epr_prep(reg[0], reg[1]);
  }
  if (name == "MEASURE_Z") {
    need(1);
    return measure_z(reg[0], outcomes);
  }
  if (name == "I" || name == "ID") return identity_op(reg);
  throw std::invalid_argument("unknown operation name: " + name);
}

}  // namespace dqs
