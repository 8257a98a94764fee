#pragma once

#include "glvkit/poisson.hpp"

namespace glv {

// One step of the coordinate chain a Darboux reduction records. Forward maps
// original positive-orthant states toward the Darboux chart; inverse walks
// back. A DecoupleStep drops frozen coordinates, so its inverse re-inserts
// the recorded levels (the map is a bijection onto that leaf).
struct QmtStep {
    RatMatrix C; // x_i = prod_k y_k^{C_ik}
};
struct DecoupleStep {
    std::size_t p = 0;
    std::vector<Rational> alpha;
};
struct LogStep {};
struct LinearStep {
    RatMatrix P; // w = P y in the log chart
};
using ChainStep = std::variant<QmtStep, DecoupleStep, LogStep, LinearStep>;

class TransformChain {
public:
    TransformChain() = default;
    explicit TransformChain(std::vector<ChainStep> steps) : steps_(std::move(steps)) {}

    const std::vector<ChainStep>& steps() const { return steps_; }
    void append(ChainStep step) { steps_.push_back(std::move(step)); }
    void append(const TransformChain& tail);

    // Positive-orthant state -> Darboux-chart state.
    std::vector<double> forward(std::vector<double> x) const;
    // Darboux-chart state -> positive-orthant state.
    std::vector<double> inverse(std::vector<double> y) const;

private:
    std::vector<ChainStep> steps_;
};

// A Poisson system in Darboux coordinates: constant structure matrix
// J = S(r, n-r) and a log-chart Hamiltonian. Coordinates beyond r are
// trivial Casimirs of the reduced bracket.
struct DarbouxSystem {
    std::size_t n = 0;
    std::size_t r = 0;
    RatMatrix J;        // equals S(r, n-r) exactly
    HamiltonianExpr H;  // log chart
    TransformChain chain;
};

// Route A: one QMT with C = P^-1 from the skew congruence canonicalization,
// then y = ln x. The structure matrix is constant from the QMT on.
DarbouxSystem darboux_general(const GLVSystem& sys, const GLVPFactorization& f);

// Route B: maximal decoupling to a symplectic (r,r,m) system first, then the
// general route on the reduced flow; J = S(r, 0).
DarbouxSystem darboux_via_decoupling(const GLVSystem& sys, const GLVPFactorization& f);

// Route C: log chart first (constant structure matrix K), then the linear
// change w = P y.
DarbouxSystem darboux_via_linear(const GLVSystem& sys, const GLVPFactorization& f);

} // namespace glv
