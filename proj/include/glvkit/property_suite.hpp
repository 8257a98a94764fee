#pragma once

#include "glvkit/dynamics.hpp"
#include "glvkit/rng.hpp"

namespace glv::propsuite {

// A GLVP system built from random certificate data (skew K, nonzero diagonal
// D, L, full-rank integer B) via lambda = K L, A = K B^T D. GLVP by
// construction, which makes it the reference generator for the rank-law,
// kernel and conservation properties.
struct GlvpInstance {
    GLVSystem system;
    GLVPFactorization factorization;
};

GlvpInstance random_glvp_system(DetRng& rng, std::size_t max_n = 6, std::size_t max_m = 8,
                                int max_entry = 2);

// A GLV system with no Poisson structure implied: integer full-rank B,
// small rational A and lambda.
GLVSystem random_glv_system(DetRng& rng, std::size_t max_n = 4, std::size_t max_m = 6);

// Invertible n x n matrix with small integer entries.
RatMatrix random_qmt(DetRng& rng, std::size_t n, int max_entry = 2);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::size_t count = 0;
    std::string details;
};

// Corollary-style rank law: rank M = rank A = rank K, and the left kernel of
// M equals the kernel of K as a subspace.
CheckResult check_rank_law(std::size_t count, std::uint32_t seed);

// Jacobi residual of J = X K X is exactly zero for skew K.
CheckResult check_jacobi_zero(std::size_t count, std::uint32_t seed);

// QMTs preserve the factorization, the class invariant B*M, and the
// embed -> decouple round trip restores matrices exactly.
CheckResult check_transformation_coherence(std::size_t count, std::uint32_t seed);

// grad H . xdot = 0 and grad phi_N . xdot = 0 as exact rational identities.
CheckResult check_exact_conservation(std::size_t count, std::uint32_t seed);

// solve_factorization succeeds on constructed GLVP systems and its output
// passes verification.
CheckResult check_solver_roundtrip(std::size_t count, std::uint32_t seed);

// Trajectories mapped through a QMT satisfy the transformed vector field
// pointwise (residual < 1e-5).
CheckResult check_flow_equivalence(std::size_t count, std::uint32_t seed);

// All three Darboux routes produce J = S(r, n-r) bit-exactly, agree with the
// original Hamiltonian through the chain (1e-12) and reproduce the original
// flow after pull-back (1e-6).
CheckResult check_darboux_routes(std::size_t count, std::uint32_t seed);

// The full suite at default scale.
std::vector<CheckResult> run_all(std::uint32_t seed, bool quick = false);

} // namespace glv::propsuite
