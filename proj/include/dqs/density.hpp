#pragma once

#include "dqs/matrix.hpp"

#include <string>

namespace dqs {

/// Subnormalized quantum state on a named register: positive semi-definite
/// within tolerance, trace in [0, 1].
struct DensityOperator {
  Register qubits;
  CMat mat;
};

struct DensityReport {
  bool dims_ok = false;
  bool hermitian = false;
  bool positive_semidefinite = false;
  bool trace_in_range = false;
  double trace = 0.0;

  bool ok() const {
    return dims_ok && hermitian && positive_semidefinite && trace_in_range;
  }
};

DensityReport check_density(const DensityOperator& rho, double tol = 1e-9);

/// Validating constructor; throws std::invalid_argument on a bad state.
DensityOperator make_density(Register qubits, CMat mat, double tol = 1e-9);

/// Sum of diagonal real parts.
double trace(const DensityOperator& rho);

/// |bits><bits| on the register, bits given big-endian over the register
/// order, e.g. "01".
DensityOperator basis_state(const Register& qubits, const std::string& bits);

/// |psi><psi| from an amplitude vector of length 2^n.
DensityOperator pure_state(const Register& qubits, const CVec& amplitudes);

}  // namespace dqs
