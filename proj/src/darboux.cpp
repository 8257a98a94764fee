#include "glvkit/darboux.hpp"

#include <cmath>

namespace glv {

namespace {

std::vector<double> apply_exponent_map(const RatMatrix& C, const std::vector<double>& x) {
    // y with x_i = prod_k y_k^{C_ik}  <=>  ln y = C^-1 ln x; callers pass the
    // matrix that multiplies ln x on the left.
    std::vector<double> logx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw DomainError("state leaves the positive orthant");
        logx[i] = std::log(x[i]);
    }
    std::vector<double> out(C.rows());
    for (std::size_t i = 0; i < C.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < C.cols(); ++k) s += to_double(C(i, k)) * logx[k];
        out[i] = std::exp(s);
    }
    return out;
}

std::vector<double> apply_linear(const RatMatrix& P, const std::vector<double>& y) {
    std::vector<double> out(P.rows());
    for (std::size_t i = 0; i < P.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < P.cols(); ++k) s += to_double(P(i, k)) * y[k];
        out[i] = s;
    }
    return out;
}

} // namespace

void TransformChain::append(const TransformChain& tail) {
    steps_.insert(steps_.end(), tail.steps_.begin(), tail.steps_.end());
}

std::vector<double> TransformChain::forward(std::vector<double> x) const {
    for (const auto& step : steps_) {
        if (const auto* q = std::get_if<QmtStep>(&step)) {
            x = apply_exponent_map(invert(q->C), x);
        } else if (const auto* d = std::get_if<DecoupleStep>(&step)) {
            x.resize(x.size() - d->p);
        } else if (std::get_if<LogStep>(&step)) {
            for (auto& v : x) {
                if (!(v > 0.0)) throw DomainError("state leaves the positive orthant");
                v = std::log(v);
            }
        } else if (const auto* l = std::get_if<LinearStep>(&step)) {
            x = apply_linear(l->P, x);
        }
    }
    return x;
}

std::vector<double> TransformChain::inverse(std::vector<double> y) const {
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        if (const auto* q = std::get_if<QmtStep>(&*it)) {
            y = apply_exponent_map(q->C, y);
        } else if (const auto* d = std::get_if<DecoupleStep>(&*it)) {
            for (const auto& a : d->alpha) y.push_back(to_double(a));
        } else if (std::get_if<LogStep>(&*it)) {
            for (auto& v : y) v = std::exp(v);
        } else if (const auto* l = std::get_if<LinearStep>(&*it)) {
            y = apply_linear(invert(l->P), y);
        }
    }
    return y;
}

namespace {

HamiltonianExpr log_chart_hamiltonian(const RatMatrix& exponents,
                                      const std::vector<Rational>& coeffs,
                                      const RatMatrix& linear) {
    HamiltonianExpr h;
    h.chart = Chart::Log;
    for (std::size_t i = 0; i < exponents.rows(); ++i)
        h.terms.push_back({coeffs[i], exponents.row(i)});
    h.linear = linear.col(0);
    return h;
}

} // namespace

DarbouxSystem darboux_general(const GLVSystem& sys, const GLVPFactorization& f) {
    if (!verify_factorization(sys, f))
        throw InvalidFactorization("factorization does not certify this system");
    const auto [P, r] = skew_congruence_canonicalize(f.K);
    const RatMatrix C = invert(P);
    const GLVSystem canon = apply_qmt(sys, C);
    const GLVPFactorization fc = transform_factorization(f, C);

    DarbouxSystem d;
    d.n = sys.n();
    d.r = r;
    d.J = fc.K; // equals S(r, n-r) by construction of P
    d.H = log_chart_hamiltonian(canon.B(), fc.Ddiag, fc.L);
    d.chain.append(QmtStep{C});
    d.chain.append(LogStep{});
    return d;
}

DarbouxSystem darboux_via_decoupling(const GLVSystem& sys, const GLVPFactorization& f) {
    if (!verify_factorization(sys, f))
        throw InvalidFactorization("factorization does not certify this system");
    const std::size_t r = rank(f.K);
    const std::size_t p = sys.n() - r;
    // nothing to decouple when already symplectic; with r = 0 a maximal
    // decoupling would empty the system, and the chart is canonical as-is
    if (p == 0 || r == 0) return darboux_general(sys, f);

    const std::vector<Rational> alpha(p, Rational(1));
    DecoupleResult dec = decouple_factorization(sys, f, p, alpha);
    DarbouxSystem d = darboux_general(dec.system, dec.factorization);

    TransformChain chain;
    chain.append(QmtStep{dec.C});
    chain.append(DecoupleStep{p, alpha});
    chain.append(d.chain);
    d.chain = std::move(chain);
    return d;
}

DarbouxSystem darboux_via_linear(const GLVSystem& sys, const GLVPFactorization& f) {
    if (!verify_factorization(sys, f))
        throw InvalidFactorization("factorization does not certify this system");
    const auto [P, r] = skew_congruence_canonicalize(f.K);
    const RatMatrix Pinv = invert(P);

    DarbouxSystem d;
    d.n = sys.n();
    d.r = r;
    d.J = P * f.K * P.transpose();
    // H''(w) = H'(P^-1 w): exponent rows B_j P^-1, linear part P^-T L
    d.H = log_chart_hamiltonian(sys.B() * Pinv, f.Ddiag, Pinv.transpose() * f.L);
    d.chain.append(LogStep{});
    d.chain.append(LinearStep{P});
    return d;
}

} // namespace glv
