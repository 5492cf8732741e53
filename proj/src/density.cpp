#include "dqs/density.hpp"

#include <stdexcept>

namespace dqs {

DensityReport check_density(const DensityOperator& rho, double tol) {
  DensityReport rep;
  const long dim = 1L << rho.qubits.size();
  rep.dims_ok = rho.mat.rows() == dim && rho.mat.cols() == dim;
  if (!rep.dims_ok) return rep;
  rep.hermitian = is_hermitian(rho.mat, tol);
  if (rep.hermitian) {
    const CMat sym = (rho.mat + rho.mat.adjoint()) / 2.0;
    rep.positive_semidefinite = min_eigenvalue(sym) >= -tol;
  }
  rep.trace = rho.mat.trace().real();
  rep.trace_in_range = rep.trace >= -tol && rep.trace <= 1.0 + tol;
  return rep;
}

DensityOperator make_density(Register qubits, CMat mat, double tol) {
  DensityOperator rho{std::move(qubits), std::move(mat)};
  const auto rep = check_density(rho, tol);
  if (!rep.ok()) {
    std::string why;
    if (!rep.dims_ok) why = "dimension mismatch";
    else if (!rep.hermitian) why = "not Hermitian";
    else if (!rep.positive_semidefinite) why = "not positive semi-definite";
    else why = "trace outside [0,1]";
    throw std::invalid_argument("invalid density operator: " + why);
  }
  return rho;
}

double trace(const DensityOperator& rho) {
  double t = 0.0;
  for (long i = 0; i < rho.mat.rows(); ++i) t += rho.mat(i, i).real();
  return t;
}

DensityOperator basis_state(const Register& qubits, const std::string& bits) {
  if (bits.size() != qubits.size())
    throw std::invalid_argument("basis label length != register size");
  const long dim = 1L << qubits.size();
  long idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("basis label must be bits: " + bits);
    idx = (idx << 1) | (c == '1' ? 1 : 0);
  }
  CMat m = CMat::Zero(dim, dim);
  m(idx, idx) = 1.0;
  return DensityOperator{qubits, std::move(m)};
}

DensityOperator pure_state(const Register& qubits, const CVec& amplitudes) {
  const long dim = 1L << qubits.size();
  if (amplitudes.size() != dim)
    throw std::invalid_argument("amplitude vector length != 2^n");
  CMat m = amplitudes * amplitudes.adjoint();
  return DensityOperator{qubits, std::move(m)};
}

}  // namespace dqs
