#include "dqs/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace dqs {

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(bits() % span);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

CMat haar_unitary(Rng& rng, long dim) {
  CMat g(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double a = std::abs(d);
    q.col(c) *= (a > 0 ? d / a : Complex(1, 0));
  }
  return q;
}

DensityOperator random_pure_state(Rng& rng, const Register& qubits) {
  const long dim = 1L << qubits.size();
  CVec v(dim);
  for (long i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v.normalize();
  return pure_state(qubits, v);
}

}  // namespace dqs
