#include "qswap/rng.hpp"

#include <cmath>
#include <numbers>

namespace qswap {

double Rng::gaussian() {
    // Box-Muller; the sine partner is discarded to keep the stream layout simple.
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<Cx> Rng::state(int d) {
    std::vector<Cx> v(d);
    double n2 = 0.0;
    do {
        for (auto& x : v) x = gaussian_cx();
        n2 = 0.0;
        for (const auto& x : v) n2 += std::norm(x);
    } while (n2 < 1e-12);
    const double s = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= s;
    return v;
}

Matrix Rng::haar_unitary(int d) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = gaussian_cx();
    // Modified Gram-Schmidt on the columns.
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            Cx proj{};
            for (int i = 0; i < d; ++i) proj += std::conj(g(i, k)) * g(i, j);
            for (int i = 0; i < d; ++i) g(i, j) -= proj * g(i, k);
        }
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) n2 += std::norm(g(i, j));
        const double s = 1.0 / std::sqrt(n2);
        for (int i = 0; i < d; ++i) g(i, j) *= s;
    }
    return g;
}

}  // namespace qswap
