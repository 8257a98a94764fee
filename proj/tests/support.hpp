#pragma once

#include <glvkit/poisson.hpp>
#include <glvkit/rng.hpp>

// Shared fixtures: the 3D Lotka-Volterra instance of Nutku with parameters
// a = b = 1, c = -1, rho = 1, mu = 2, nu = mu*b - rho*a*b = 1, plus small
// deterministic generators for the property tests.
namespace fixtures {

using glv::GLVPFactorization;
using glv::GLVSystem;
using glv::RatMatrix;
using glv::Rational;

inline GLVSystem nutku() {
    return GLVSystem(RatMatrix::identity(3),
                     RatMatrix{{0, -1, 1}, {1, 0, 1}, {1, 1, 0}},
                     RatMatrix{{1}, {2}, {1}}, "nutku");
}

inline GLVPFactorization nutku_factorization() {
    GLVPFactorization f;
    f.K = RatMatrix{{0, -1, -1}, {1, 0, -1}, {1, 1, 0}};
    f.Ddiag = {1, 1, -1};
    f.L = RatMatrix{{0}, {1}, {-2}};
    return f;
}

// 2D predator-prey x' = x(1 - y), y' = y(-1 + x).
inline GLVSystem predator_prey() {
    return GLVSystem(RatMatrix::identity(2), RatMatrix{{0, -1}, {1, 0}},
                     RatMatrix{{1}, {-1}}, "predator-prey");
}

// 1D logistic x' = x(1 - x); rank(A) = 1 is odd, so not GLVP.
inline GLVSystem logistic1d() {
    return GLVSystem(RatMatrix{{1}}, RatMatrix{{-1}}, RatMatrix{{1}}, "logistic");
}

inline Rational random_rational(glv::DetRng& rng, int max_num = 4, int max_den = 3) {
    return Rational(rng.uniform_int(-max_num, max_num), rng.uniform_int(1, max_den));
}

inline RatMatrix random_matrix(glv::DetRng& rng, std::size_t rows, std::size_t cols,
                               int max_num = 4, int max_den = 3) {
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_rational(rng, max_num, max_den);
    return m;
}

inline RatMatrix random_invertible(glv::DetRng& rng, std::size_t n, int max_num = 3) {
    for (;;) {
        RatMatrix m = random_matrix(rng, n, n, max_num, 2);
        if (glv::rank(m) == n) return m;
    }
}

inline RatMatrix random_skew(glv::DetRng& rng, std::size_t n, int max_num = 3, int max_den = 2) {
    RatMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            k(i, j) = random_rational(rng, max_num, max_den);
            k(j, i) = -k(i, j);
        }
    return k;
}

} // namespace fixtures
