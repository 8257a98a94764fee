#pragma once

#include <string>
#include <variant>
#include <vector>

#include "glvkit/ratmat.hpp"

namespace glv {

// A Generalized Lotka-Volterra system on the positive orthant:
//
//   dx_i/dt = x_i (lambda_i + sum_j A_ij prod_k x_k^{B_jk})
//
// with n state variables and m quasimonomials, m >= n and B of maximal rank.
// The composite matrix M = (lambda | A) is always derived, never stored.
class GLVSystem {
public:
    GLVSystem(RatMatrix B, RatMatrix A, RatMatrix lambda, std::string name = "");

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    const RatMatrix& B() const { return B_; }
    const RatMatrix& A() const { return A_; }
    const RatMatrix& lambda() const { return lambda_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    // M = (lambda | A), n x (m+1).
    RatMatrix M() const;

    bool has_integer_exponents() const;

    bool operator==(const GLVSystem& other) const {
        return B_ == other.B_ && A_ == other.A_ && lambda_ == other.lambda_;
    }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    RatMatrix B_;      // m x n exponents
    RatMatrix A_;      // n x m coefficients
    RatMatrix lambda_; // n x 1
    std::string name_;
};

// QMT-invariant data of the (r, n, m)-class: rank of M plus the product B*M.
struct ClassSignature {
    std::size_t r = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    RatMatrix BM; // m x (m+1)

    bool operator==(const ClassSignature&) const = default;
};

// Parameters of a p-embedding: initial conditions of the added variables and
// the exponent completion B* (empty means: complete greedily with identity
// columns). Lstar extends L and is only consumed by the Poisson layer.
struct EmbeddingSpec {
    std::size_t p = 0;
    std::vector<Rational> alpha;        // p positive rationals
    std::optional<RatMatrix> Bstar;     // m x p, or auto when absent
    std::vector<Rational> Lstar;        // p entries, empty means zeros
};

// Right-hand side of the flow at a positive state (quasimonomials evaluated
// as exp(sum B_jk ln x_k)). Throws DomainError off the positive orthant.
std::vector<double> eval_vector_field(const GLVSystem& sys, const std::vector<double>& x);

// Exact right-hand side at a rational point; requires integer exponents.
std::vector<Rational> eval_vector_field_exact(const GLVSystem& sys, const std::vector<Rational>& x);

// Exact quasimonomial values q_j(x) = prod_k x_k^{B_jk}; integer exponents only.
std::vector<Rational> eval_quasimonomials_exact(const GLVSystem& sys, const std::vector<Rational>& x);

ClassSignature class_signature(const GLVSystem& sys);

// Quasimonomial change of variables x_i = prod_k y_k^{C_ik}. New matrices are
// B C, C^-1 A, C^-1 lambda; the class signature is untouched.
GLVSystem apply_qmt(const GLVSystem& sys, const RatMatrix& C);

// Add p frozen variables x_{n+i}(t) = alpha_i. The result is (n+p)-dimensional
// in the same (r, ., m) family.
GLVSystem embed(const GLVSystem& sys, const EmbeddingSpec& spec);

// Restrict a system whose last p rows of M vanish to its leading n-p
// variables, absorbing the frozen levels alpha into the coefficients.
// Throws NotDecoupledForm when a trailing row of M is nonzero.
GLVSystem decouple(const GLVSystem& sys, std::size_t p, const std::vector<Rational>& alpha);

// An invertible C such that apply_qmt(sys, C) has the last p rows of M zero:
// the last p rows of C^-1 are left-kernel vectors of M, the rest greedy
// identity rows. Throws InsufficientDegeneracy if p > n - rank(M).
RatMatrix prepare_decoupling(const GLVSystem& sys, std::size_t p);

// Exponent vectors N of the conserved quasimonomials prod_j x_j^{N_j}; one
// per dimension of the left kernel of M.
std::vector<std::vector<Rational>> quasimonomial_invariants(const GLVSystem& sys);

// The LV representative of the class: embed up to m variables if needed, then
// transform with C = B^-1 so the exponent matrix becomes the identity.
// Returns the LV system together with the QMT matrix used.
std::pair<GLVSystem, RatMatrix> lv_representative(const GLVSystem& sys);

// E = diag(e_j) with e_j = (prod_k alpha_k^{Bext_jk})^-1, where Bext holds the
// exponent columns of the added/frozen variables. Shared by embed/decouple.
std::vector<Rational> embedding_weights(const RatMatrix& Bext, const std::vector<Rational>& alpha);

} // namespace glv
