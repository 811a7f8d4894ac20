#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qswap/matrix.hpp"
#include "qswap/types.hpp"

namespace qswap {

// Seeded random source. All draws are derived from the standardized
// mt19937_64 output stream with fixed transforms, so a given seed produces
// the same numbers on every platform (the std distribution objects do not
// guarantee that).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

    // (0, 1]
    double uniform_pos() { return static_cast<double>((gen_() >> 11) + 1) * 0x1p-53; }

    double gaussian();

    Cx gaussian_cx() { return Cx(gaussian(), gaussian()); }

    // Haar-random normalized state vector of length d.
    std::vector<Cx> state(int d);

    // Haar-random unitary: QR of a complex Ginibre matrix via modified
    // Gram-Schmidt (positive diagonal R comes out of the normalization).
    Matrix haar_unitary(int d);

  private:
    std::mt19937_64 gen_;
};

}  // namespace qswap
