#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace dqs {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Qubits are named; registers are ordered lists of names. The basis index
/// of a register is big-endian over the listed order (first qubit = most
/// significant bit).
using QubitId = std::string;
using Register = std::vector<QubitId>;

inline CMat dagger(const CMat& m) { return m.adjoint(); }

CMat kron(const CMat& a, const CMat& b);

/// Largest absolute entry; the max-entry norm used by all tolerances.
double max_abs(const CMat& m);

bool is_hermitian(const CMat& m, double tol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMat& hermitian);
double max_eigenvalue(const CMat& hermitian);

/// Embeds a 2^k x 2^k operator given on `from` into the register `to`
/// (identity on the extra qubits). `from` must be a subset of `to`; bit
/// positions follow `to`'s order, big-endian.
CMat embed(const CMat& op, const Register& from, const Register& to);

bool register_subset(const Register& sub, const Register& super);
bool registers_disjoint(const Register& a, const Register& b);
/// Union of two registers, sorted by qubit id.
Register register_union(const Register& a, const Register& b);
/// Set equality, ignoring order.
bool register_equal(const Register& a, const Register& b);

}  // namespace dqs
