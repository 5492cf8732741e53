#pragma once

#include "dqs/density.hpp"
#include "dqs/matrix.hpp"

#include <set>
#include <vector>

namespace dqs {

enum class OpKind { Unitary, PartialMeasurement, General };

/// Completely positive, trace-non-increasing map in Kraus form, acting on a
/// named register: rho -> sum_k E_k rho E_k^dag with 0 <= sum E_k^dag E_k <= Id.
struct QuantumOperation {
  Register qubits;
  std::vector<CMat> kraus;
  OpKind kind = OpKind::General;
};

struct OperationReport {
  bool cp_ok = false;
  bool trace_nonincreasing_ok = false;
  bool trace_preserving = false;
  bool unitary = false;

  /// A valid quantum operation needs CP and a trace-non-increasing Kraus sum.
  bool ok() const { return cp_ok && trace_nonincreasing_ok; }
};

/// Flags computed with tolerance `tol` on the max-entry norm / eigenvalues.
OperationReport check_validity(const QuantumOperation& op, double tol = 1e-9);

/// Validating constructor for imported Kraus data (runs the Choi CP check);
/// throws std::invalid_argument when the list is not a quantum operation.
QuantumOperation make_operation(Register qubits, std::vector<CMat> kraus,
                                OpKind kind = OpKind::General,
                                double tol = 1e-9);

/// sum_k E_k^dag E_k.
CMat kraus_sum(const QuantumOperation& op);

/// Choi matrix sum_k vec(E_k) vec(E_k)^dag (column-major vec).
CMat choi_matrix(const QuantumOperation& op);

/// Superoperator matrix S with vec(E(rho)) = S vec(rho), column-major vec.
/// Exact map comparison for small registers.
CMat superoperator(const QuantumOperation& op);

/// Applies op extended by the identity onto rho's register. Requires
/// op.qubits to be a subset of rho.qubits.
DensityOperator apply(const QuantumOperation& op, const DensityOperator& rho);

/// Kraus list of all pairwise tensor products; registers must be disjoint;
/// result register is the concatenation.
QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b);

/// Sequential composition: apply `first`, then `second`. Result lives on the
/// sorted union register; Kraus list is all products of embedded factors.
QuantumOperation compose(const QuantumOperation& second,
                         const QuantumOperation& first);

QuantumOperation identity_op(Register qubits);
QuantumOperation x_gate(QubitId q);
QuantumOperation hadamard(QubitId q);
/// CNOT with control = first listed qubit, target = second.
QuantumOperation cnot(QubitId control, QubitId target);
/// Two-qubit gate C with C|xy> = (|0,y> + (-1)^x |1,1-y>)/sqrt(2).
QuantumOperation epr_prep(QubitId q1, QubitId q2);
/// Computational-basis measurement restricted to an outcome subset of {0,1};
/// Kraus list {|m><m| : m in outcomes}.
QuantumOperation measure_z(QubitId q, const std::set<int>& outcomes);

/// Dispatch by name: X, H, CNOT, EPR_PREP, MEASURE_Z (the last takes the
/// outcome subset). Throws std::invalid_argument on unknown name or arity.
QuantumOperation standard_op(const std::string& name, const Register& reg,
                             const std::set<int>& outcomes = {0, 1});

}  // namespace dqs
