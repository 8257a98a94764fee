#pragma once

#include <variant>

#include "glvkit/glv_system.hpp"

namespace glv {

// The triple (K, D, L) certifying Poisson structure of a GLV system:
// lambda = K L and A = K B^T D with K skew-symmetric and D = diag(Ddiag)
// nonsingular. Plain data; verify_factorization is the validity check.
struct GLVPFactorization {
    RatMatrix K;                 // n x n skew-symmetric
    std::vector<Rational> Ddiag; // m nonzero entries
    RatMatrix L;                 // n x 1

    std::size_t n() const { return K.rows(); }
    std::size_t m() const { return Ddiag.size(); }
    RatMatrix D() const { return RatMatrix::diagonal(Ddiag); }
};

enum class Chart { PositiveOrthant, Log };

// Hamiltonian of a GLVP system. In the positive-orthant chart it reads
//   H(x) = sum_i c_i prod_k x_k^{e_ik} + sum_j L_j ln(x_j),
// and in the log chart (after y = ln x)
//   H(y) = sum_i c_i exp(<e_i, y>) + <L, y>.
struct HamiltonianExpr {
    struct Term {
        Rational coefficient;
        std::vector<Rational> exponents; // one entry per state variable
    };

    Chart chart = Chart::PositiveOrthant;
    std::vector<Term> terms;
    std::vector<Rational> linear; // log coefficients resp. linear coefficients

    std::size_t dim() const { return linear.size(); }

    double value(const std::vector<double>& point) const;
    std::vector<double> gradient(const std::vector<double>& point) const;

    // Exact gradient at a rational point in the positive-orthant chart;
    // requires integer exponents.
    std::vector<Rational> gradient_exact(const std::vector<Rational>& x) const;
};

// Casimir exponent vector N: the conserved quantity is
// phi_N = sum_j N_j ln(x_j), equivalently prod_j x_j^{N_j}.
struct Casimir {
    std::vector<Rational> exponents; // primitive integer vector

    double value(const std::vector<double>& point, Chart chart) const;
    std::vector<Rational> gradient_exact(const std::vector<Rational>& x) const;
};

// Structured "not a GLVP system" answer from the factorization solver.
struct NotGLVP {
    enum class Kind { RankObstruction, NoNonvanishingD, LambdaNotInImage };
    Kind kind;
    std::string message;
};

using SolveResult = std::variant<GLVPFactorization, NotGLVP>;

// Exact check of Eq-level identities: K skew, D_ii != 0, lambda = K L,
// A = K B^T D. Dimension mismatches throw; everything else is a verdict.
bool verify_factorization(const GLVSystem& sys, const GLVPFactorization& f);

// Decide GLVP structure. The bilinear system A = K B^T D is linearized in
// u_j = 1/D_jj: with R = A diag(u), K = R B (B^T B)^-1 is forced, and the
// consistency + skewness conditions are homogeneous linear constraints on u.
// A kernel vector with all entries nonzero yields (K, D); L then solves
// K L = lambda. The nonvanishing search tries basis vectors, pair sums, and
// seeded random integer combinations (bounded, deterministic).
SolveResult solve_factorization(const GLVSystem& sys, std::uint32_t seed = 0);

// H with monomial coefficients D_ii, exponent rows B_i and log coefficients L.
// Throws InvalidFactorization unless verify_factorization passes.
HamiltonianExpr hamiltonian(const GLVSystem& sys, const GLVPFactorization& f);

// J(x) = X K X with X = diag(x); entries as doubles.
std::vector<std::vector<double>> structure_matrix(const GLVPFactorization& f,
                                                  const std::vector<double>& x);

// Exact Jacobi residual of J = X K X over all distinct index triples at the
// given rational sample points (repeated-index triples are degenerate; n = 2
// has none at all). Zero exactly for every skew K.
Rational check_jacobi(const GLVPFactorization& f,
                      const std::vector<std::vector<Rational>>& samples);

// Default sample points: coordinates from {1/3, 1/2, 1, 2, 3}, seeded.
std::vector<std::vector<Rational>> default_jacobi_samples(std::size_t n, std::size_t count = 10,
                                                          std::uint32_t seed = 0);

// One Casimir per kernel dimension of K; count = n - rank(K).
std::vector<Casimir> casimirs(const GLVPFactorization& f);

// QMT transport: K' = C^-1 K C^-T, L' = C^T L, D' = D.
GLVPFactorization transform_factorization(const GLVPFactorization& f, const RatMatrix& C);

// Factorization of embed(sys, spec): K zero-padded, L extended by Lstar,
// D scaled by the embedding weights E.
GLVPFactorization embed_factorization(const GLVSystem& sys, const GLVPFactorization& f,
                                      const EmbeddingSpec& spec);

// Decouple p Casimir directions: transforms with a C whose inverse has kernel
// vectors of K as its last p rows (these rows of M vanish simultaneously),
// then restricts. Returns the reduced system, its factorization, and C.
struct DecoupleResult {
    GLVSystem system;
    GLVPFactorization factorization;
    RatMatrix C;
};
DecoupleResult decouple_factorization(const GLVSystem& sys, const GLVPFactorization& f,
                                      std::size_t p, const std::vector<Rational>& alpha);

} // namespace glv
