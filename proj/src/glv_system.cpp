#include "glvkit/glv_system.hpp"

#include <cmath>

namespace glv {

GLVSystem::GLVSystem(RatMatrix B, RatMatrix A, RatMatrix lambda, std::string name)
    : B_(std::move(B)), A_(std::move(A)), lambda_(std::move(lambda)), name_(std::move(name)) {
    n_ = A_.rows();
    m_ = A_.cols();
    if (B_.rows() != m_ || B_.cols() != n_)
        throw InvalidSystem("B must be m x n = " + std::to_string(m_) + "x" + std::to_string(n_));
    if (lambda_.rows() != n_ || lambda_.cols() != 1)
        throw InvalidSystem("lambda must be n x 1");
    if (m_ < n_) throw InvalidSystem("m >= n is required (m=" + std::to_string(m_) +
                                     ", n=" + std::to_string(n_) + ")");
    if (rank(B_) != n_) throw InvalidSystem("B is not of maximal rank");
}

RatMatrix GLVSystem::M() const { return lambda_.hstack(A_); }

bool GLVSystem::has_integer_exponents() const {
    for (std::size_t j = 0; j < m_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
            if (!is_integer(B_(j, k))) return false;
    return true;
}

std::vector<double> eval_vector_field(const GLVSystem& sys, const std::vector<double>& x) {
    if (x.size() != sys.n()) throw DimensionMismatch("state size != n");
    std::vector<double> logx(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) {
        if (!(x[i] > 0.0)) throw DomainError("state leaves the positive orthant");
        logx[i] = std::log(x[i]);
    }
    std::vector<double> q(sys.m());
    for (std::size_t j = 0; j < sys.m(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < sys.n(); ++k) s += to_double(sys.B()(j, k)) * logx[k];
        q[j] = std::exp(s);
    }
    std::vector<double> out(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) {
        double s = to_double(sys.lambda()(i, 0));
        for (std::size_t j = 0; j < sys.m(); ++j) s += to_double(sys.A()(i, j)) * q[j];
        out[i] = x[i] * s;
    }
    return out;
}

std::vector<Rational> eval_quasimonomials_exact(const GLVSystem& sys, const std::vector<Rational>& x) {
    if (x.size() != sys.n()) throw DimensionMismatch("state size != n");
    if (!sys.has_integer_exponents())
        throw DomainError("exact evaluation needs integer exponents");
    for (const auto& xi : x)
        if (xi <= 0) throw DomainError("state leaves the positive orthant");
    std::vector<Rational> q(sys.m(), Rational(1));
    for (std::size_t j = 0; j < sys.m(); ++j)
        for (std::size_t k = 0; k < sys.n(); ++k)
            q[j] *= pow_int(x[k], num(sys.B()(j, k)));
    return q;
}

std::vector<Rational> eval_vector_field_exact(const GLVSystem& sys, const std::vector<Rational>& x) {
    const auto q = eval_quasimonomials_exact(sys, x);
    std::vector<Rational> out(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) {
        Rational s = sys.lambda()(i, 0);
        for (std::size_t j = 0; j < sys.m(); ++j) s += sys.A()(i, j) * q[j];
        out[i] = x[i] * s;
    }
    return out;
}

ClassSignature class_signature(const GLVSystem& sys) {
    RatMatrix m = sys.M();
    return ClassSignature{rank(m), sys.n(), sys.m(), sys.B() * m};
}

GLVSystem apply_qmt(const GLVSystem& sys, const RatMatrix& C) {
    if (!C.is_square() || C.rows() != sys.n())
        throw DimensionMismatch("QMT matrix must be n x n");
    RatMatrix Cinv = invert(C);
    return GLVSystem(sys.B() * C, Cinv * sys.A(), Cinv * sys.lambda(), sys.name());
}

std::vector<Rational> embedding_weights(const RatMatrix& Bext, const std::vector<Rational>& alpha) {
    if (Bext.cols() != alpha.size()) throw DimensionMismatch("alpha count != added columns");
    std::vector<Rational> e(Bext.rows());
    for (std::size_t j = 0; j < Bext.rows(); ++j) {
        Rational prod(1);
        for (std::size_t k = 0; k < alpha.size(); ++k)
            prod *= pow_exact(alpha[k], Bext(j, k));
        e[j] = Rational(1) / prod;
    }
    return e;
}

GLVSystem embed(const GLVSystem& sys, const EmbeddingSpec& spec) {
    const std::size_t n = sys.n(), m = sys.m(), p = spec.p;
    if (p < 1 || n + p > m)
        throw CannotComplete("p must satisfy 1 <= p <= m - n");
    if (spec.alpha.size() != p) throw DimensionMismatch("alpha count != p");
    for (const auto& a : spec.alpha)
        if (a <= 0) throw DomainError("embedding initial conditions must be positive");

    RatMatrix Bstar = spec.Bstar ? *spec.Bstar : complete_to_full_rank(sys.B(), p);
    if (Bstar.rows() != m || Bstar.cols() != p) throw DimensionMismatch("B* must be m x p");
    RatMatrix Bext = sys.B().hstack(Bstar);

    const auto e = embedding_weights(Bstar, spec.alpha);
    RatMatrix Aext(n + p, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) Aext(i, j) = sys.A()(i, j) * e[j];
    RatMatrix lext(n + p, 1);
    for (std::size_t i = 0; i < n; ++i) lext(i, 0) = sys.lambda()(i, 0);

    return GLVSystem(std::move(Bext), std::move(Aext), std::move(lext), sys.name());
}

GLVSystem decouple(const GLVSystem& sys, std::size_t p, const std::vector<Rational>& alpha) {
    const std::size_t n = sys.n(), m = sys.m();
    if (p == 0) return sys;
    if (p >= n) throw DomainError("p must be < n");
    if (alpha.size() != p) throw DimensionMismatch("alpha count != p");
    for (const auto& a : alpha)
        if (a <= 0) throw DomainError("decoupling levels must be positive");

    RatMatrix M = sys.M();
    for (std::size_t i = n - p; i < n; ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
            if (M(i, j) != 0)
                throw NotDecoupledForm("row " + std::to_string(i + 1) +
                                       " of M is nonzero; apply a QMT first");

    const std::size_t nr = n - p;
    RatMatrix Bhat = sys.B().block(0, m, 0, nr);
    RatMatrix Bdropped = sys.B().block(0, m, nr, n);
    const auto e = embedding_weights(Bdropped, alpha);

    RatMatrix Ahat(nr, m);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < m; ++j) Ahat(i, j) = sys.A()(i, j) / e[j];
    RatMatrix lhat = sys.lambda().block(0, nr, 0, 1);

    std::string label = sys.name() + " [decoupled p=" + std::to_string(p) + ", alpha=";
    for (std::size_t i = 0; i < p; ++i) label += (i ? "," : "") + to_string(alpha[i]);
    label += "]";
    return GLVSystem(std::move(Bhat), std::move(Ahat), std::move(lhat), std::move(label));
}

RatMatrix prepare_decoupling(const GLVSystem& sys, std::size_t p) {
    const std::size_t n = sys.n();
    if (p == 0) return RatMatrix::identity(n);
    const auto kernel = left_kernel_basis(sys.M());
    if (p > kernel.size())
        throw InsufficientDegeneracy("p = " + std::to_string(p) + " exceeds n - rank(M) = " +
                                     std::to_string(kernel.size()));

    // C^-1 carries the first p kernel rows at the bottom, completed greedily
    RatMatrix bottom(p, n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < n; ++j) bottom(i, j) = kernel[i][j];
    return invert(complete_rows_to_invertible(bottom));
}

std::vector<std::vector<Rational>> quasimonomial_invariants(const GLVSystem& sys) {
    return left_kernel_basis(sys.M());
}

std::pair<GLVSystem, RatMatrix> lv_representative(const GLVSystem& sys) {
    GLVSystem work = sys;
    if (sys.m() > sys.n()) {
        EmbeddingSpec spec;
        spec.p = sys.m() - sys.n();
        spec.alpha.assign(spec.p, Rational(1));
        work = embed(sys, spec);
    }
    RatMatrix C = invert(work.B()); // square of full rank by construction
    return {apply_qmt(work, C), C};
}

} // namespace glv
