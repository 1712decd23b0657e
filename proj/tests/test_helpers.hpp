#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "eigenfit/linalg.hpp"
#include "eigenfit/problem.hpp"

namespace testhelp {

using eigenfit::Complex;
using eigenfit::ComplexMatrix;
using eigenfit::ComplexVector;
using eigenfit::GammaVector;
using eigenfit::ProblemSpec;
using eigenfit::RealVector;

// Deterministic draws decoupled from the standard library's distributions.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double normal() {
        const double u1 = std::max(uniform(), 0x1.0p-53);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }
    Complex cnormal() { return Complex(normal(), normal()); }
};

inline ComplexMatrix random_complex(int rows, int cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = rng.cnormal();
    }
    return m;
}

inline ComplexMatrix random_unitary(int n, Rng& rng) {
    ComplexMatrix m = random_complex(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline GammaVector random_gamma(int k, double scale, Rng& rng) {
    GammaVector g = GammaVector::zero(k);
    for (auto& v : g.first_diag) v = scale * rng.uniform();
    for (auto& v : g.upper) {
        const double radius = scale * std::sqrt(rng.uniform());
        const double angle = 6.283185307179586476925286766559 * rng.uniform();
        v = Complex(radius * std::cos(angle), radius * std::sin(angle));
    }
    return g;
}

// The 4x4 reference instance used across the suite: a real matrix with two
// large eigenvalues to keep and two to move onto a small repeated value.
inline ComplexMatrix reference_a() {
    ComplexMatrix a(4, 4);
    a << Complex(3), Complex(6), Complex(9), Complex(10),
         Complex(4), Complex(1), Complex(-1), Complex(-2),
         Complex(7), Complex(5), Complex(0), Complex(-4),
         Complex(4), Complex(-3), Complex(-1), Complex(6);
    return a;
}

inline std::vector<Complex> reference_lambdas() {
    return {Complex(12.9377), Complex(7.0550), Complex(1e-4), Complex(1e-4)};
}

inline ProblemSpec reference_spec() {
    ProblemSpec spec;
    spec.a = reference_a();
    spec.lambdas = reference_lambdas();
    return spec;
}

// A published 4-decimal stationary gamma for the reference instance.
inline GammaVector reference_gamma() {
    GammaVector g = GammaVector::zero(4);
    g.first_diag = {6.6686, 8.2009, 7.9580};
    g.upper = {Complex(0.5925, -0.0021), Complex(-2.3778, -0.0009),
               Complex(1.4475, -0.0009)};
    return g;
}

// The corresponding 4-decimal perturbation.
inline ComplexMatrix reference_delta() {
    ComplexMatrix d(4, 4);
    d << Complex(3.4650, -0.0011), Complex(-1.1376, -0.0004),
         Complex(1.2052, -0.0006), Complex(3.3916, -0.0025),
         Complex(0.2301, -0.0022), Complex(1.4468, -0.0012),
         Complex(-4.5382, -0.0019), Complex(1.8719, -0.0046),
         Complex(-0.2479, 0.0006), Complex(4.6130, -0.0005),
         Complex(1.9171, 0.0005), Complex(1.1181, 0.0035),
         Complex(-3.7579, 0.0001), Complex(-1.2664, -0.0010),
         Complex(0.7100, 0.0005), Complex(3.1641, 0.0018);
    return d;
}

// An exactly defective matrix: an integer similarity applied to a Jordan
// block of mu stacked over a diagonal tail. All arithmetic stays integral,
// so mu is a double-precision-exact repeated eigenvalue with a length-2
// chain.
inline ComplexMatrix defective_matrix(int n, double mu,
                                      const std::vector<Complex>& tail,
                                      Rng& rng) {
    ComplexMatrix j = ComplexMatrix::Zero(n, n);
    j(0, 0) = mu;
    j(0, 1) = 1.0;
    j(1, 1) = mu;
    for (int i = 2; i < n; ++i) j(i, i) = tail[i - 2];
    ComplexMatrix s = ComplexMatrix::Identity(n, n);
    ComplexMatrix nmat = ComplexMatrix::Zero(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = r + 1; c < n; ++c) {
            nmat(r, c) = Complex(std::floor(3.0 * rng.uniform()) - 1.0, 0.0);
        }
    }
    s += nmat;
    // Unimodular inverse: the Neumann series of a strictly triangular part
    // terminates.
    ComplexMatrix sinv = ComplexMatrix::Identity(n, n);
    ComplexMatrix power = nmat;
    double sign = -1.0;
    for (int p = 1; p < n; ++p) {
        sinv += sign * power;
        power = power * nmat;
        sign = -sign;
    }
    return s * j * sinv;
}

}  // namespace testhelp
