#pragma once

#include "dqs/density.hpp"
#include "dqs/matrix.hpp"

#include <cstdint>
#include <random>

namespace dqs {

/// Deterministic random source. Raw bits come from mt19937_64 and are mapped
/// to doubles explicitly, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  double uniform() { return (bits() >> 11) * 0x1.0p-53; }
  int uniform_int(int lo, int hi);  // inclusive bounds
  double normal();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// phase convention fixed.
CMat haar_unitary(Rng& rng, long dim);

/// Haar-random pure state |psi><psi| on the register.
DensityOperator random_pure_state(Rng& rng, const Register& qubits);

}  // namespace dqs
