#include "dqs/matrix.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dqs {

CMat kron(const CMat& a, const CMat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

double max_abs(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

double min_eigenvalue(const CMat& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian,
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const CMat& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian,
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool register_subset(const Register& sub, const Register& super) {
  for (const auto& q : sub)
    if (std::find(super.begin(), super.end(), q) == super.end()) return false;
  return true;
}

bool registers_disjoint(const Register& a, const Register& b) {
  for (const auto& q : a)
    if (std::find(b.begin(), b.end(), q) != b.end()) return false;
  return true;
}

Register register_union(const Register& a, const Register& b) {
  std::set<QubitId> u(a.begin(), a.end());
  u.insert(b.begin(), b.end());
  return Register(u.begin(), u.end());
}

bool register_equal(const Register& a, const Register& b) {
  if (a.size() != b.size()) return false;
  return register_subset(a, b) && register_subset(b, a);
}

CMat embed(const CMat& op, const Register& from, const Register& to) {
  const int k = static_cast<int>(from.size());
  const int m = static_cast<int>(to.size());
  const long dk = 1L << k;
  const long dm = 1L << m;
  if (op.rows() != dk || op.cols() != dk)
    throw std::invalid_argument("operator dimension does not match register");
  if (!register_subset(from, to))
    throw std::invalid_argument("embed: register is not a subset");
  if (from.size() == to.size() && from == to) return op;

  // Shift amount of each `to` qubit, big-endian over `to`'s order.
  std::vector<int> from_shift(k);
  std::vector<int> rest_shift;
  std::vector<bool> used(m, false);
  for (int i = 0; i < k; ++i) {
    auto it = std::find(to.begin(), to.end(), from[i]);
    const int pos = static_cast<int>(it - to.begin());
    from_shift[i] = m - 1 - pos;
    used[pos] = true;
  }
  for (int pos = 0; pos < m; ++pos)
    if (!used[pos]) rest_shift.push_back(m - 1 - pos);

  const long rest_count = 1L << (m - k);
  CMat out = CMat::Zero(dm, dm);
  for (long rest = 0; rest < rest_count; ++rest) {
    long base = 0;
    for (std::size_t j = 0; j < rest_shift.size(); ++j)
      if ((rest >> (rest_shift.size() - 1 - j)) & 1)
        base |= 1L << rest_shift[j];
    for (long r = 0; r < dk; ++r) {
      long row = base;
      for (int i = 0; i < k; ++i)
        if ((r >> (k - 1 - i)) & 1) row |= 1L << from_shift[i];
      for (long c = 0; c < dk; ++c) {
        const Complex v = op(r, c);
        if (v == Complex(0, 0)) continue;
        long col = base;
        for (int i = 0; i < k; ++i)
          if ((c >> (k - 1 - i)) & 1) col |= 1L << from_shift[i];
        out(row, col) = v;
      }
    }
  }
  return out;
}

}  // namespace dqs
