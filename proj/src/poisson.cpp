#include "glvkit/poisson.hpp"

#include <cmath>

#include "glvkit/rng.hpp"

namespace glv {

double HamiltonianExpr::value(const std::vector<double>& point) const {
    if (point.size() != dim()) throw DimensionMismatch("point size != dim");
    std::vector<double> lin(point.size());
    if (chart == Chart::PositiveOrthant) {
        for (std::size_t j = 0; j < point.size(); ++j) {
            if (!(point[j] > 0.0)) throw DomainError("point leaves the positive orthant");
            lin[j] = std::log(point[j]);
        }
    } else {
        lin = point;
    }
    double h = 0.0;
    for (const auto& t : terms) {
        double s = 0.0;
        for (std::size_t k = 0; k < lin.size(); ++k) s += to_double(t.exponents[k]) * lin[k];
        h += to_double(t.coefficient) * std::exp(s);
    }
    for (std::size_t j = 0; j < lin.size(); ++j) h += to_double(linear[j]) * lin[j];
    return h;
}

std::vector<double> HamiltonianExpr::gradient(const std::vector<double>& point) const {
    if (point.size() != dim()) throw DimensionMismatch("point size != dim");
    std::vector<double> lin(point.size());
    if (chart == Chart::PositiveOrthant) {
        for (std::size_t j = 0; j < point.size(); ++j) {
            if (!(point[j] > 0.0)) throw DomainError("point leaves the positive orthant");
            lin[j] = std::log(point[j]);
        }
    } else {
        lin = point;
    }
    std::vector<double> g(point.size(), 0.0);
    for (const auto& t : terms) {
        double s = 0.0;
        for (std::size_t k = 0; k < lin.size(); ++k) s += to_double(t.exponents[k]) * lin[k];
        const double q = to_double(t.coefficient) * std::exp(s);
        for (std::size_t j = 0; j < point.size(); ++j) g[j] += to_double(t.exponents[j]) * q;
    }
    for (std::size_t j = 0; j < point.size(); ++j) g[j] += to_double(linear[j]);
    if (chart == Chart::PositiveOrthant)
        for (std::size_t j = 0; j < point.size(); ++j) g[j] /= point[j];
    return g;
}

std::vector<Rational> HamiltonianExpr::gradient_exact(const std::vector<Rational>& x) const {
    if (chart != Chart::PositiveOrthant)
        throw ChartMismatch("exact gradients are defined in the positive-orthant chart");
    if (x.size() != dim()) throw DimensionMismatch("point size != dim");
    for (const auto& xi : x)
        if (xi <= 0) throw DomainError("point leaves the positive orthant");
    std::vector<Rational> g(x.size());
    for (const auto& t : terms) {
        Rational q = t.coefficient;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (!is_integer(t.exponents[k]))
                throw DomainError("exact gradient needs integer exponents");
            q *= pow_int(x[k], num(t.exponents[k]));
        }
        for (std::size_t j = 0; j < x.size(); ++j)
            if (t.exponents[j] != 0) g[j] += t.exponents[j] * q / x[j];
    }
    for (std::size_t j = 0; j < x.size(); ++j) g[j] += linear[j] / x[j];
    return g;
}

double Casimir::value(const std::vector<double>& point, Chart chart) const {
    if (point.size() != exponents.size()) throw DimensionMismatch("point size != dim");
    double v = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
        if (chart == Chart::PositiveOrthant) {
            if (!(point[j] > 0.0)) throw DomainError("point leaves the positive orthant");
            v += to_double(exponents[j]) * std::log(point[j]);
        } else {
            v += to_double(exponents[j]) * point[j];
        }
    }
    return v;
}

std::vector<Rational> Casimir::gradient_exact(const std::vector<Rational>& x) const {
    if (x.size() != exponents.size()) throw DimensionMismatch("point size != dim");
    std::vector<Rational> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] <= 0) throw DomainError("point leaves the positive orthant");
        g[j] = exponents[j] / x[j];
    }
    return g;
}

bool verify_factorization(const GLVSystem& sys, const GLVPFactorization& f) {
    if (f.K.rows() != sys.n() || f.K.cols() != sys.n() || f.Ddiag.size() != sys.m() ||
        f.L.rows() != sys.n() || f.L.cols() != 1)
        throw DimensionMismatch("factorization shape does not match the system");
    if (!f.K.is_skew_symmetric()) return false;
    for (const auto& d : f.Ddiag)
        if (d == 0) return false;
    if (f.K * f.L != sys.lambda()) return false;
    return f.K * sys.B().transpose() * f.D() == sys.A();
}

namespace {

bool all_nonzero(const std::vector<Rational>& u) {
    for (const auto& x : u)
        if (x == 0) return false;
    return true;
}

} // namespace

SolveResult solve_factorization(const GLVSystem& sys, std::uint32_t seed) {
    const std::size_t n = sys.n(), m = sys.m();
    const std::size_t rank_a = rank(sys.A());
    const std::size_t rank_m = rank(sys.M());
    if (rank_a != rank_m)
        return NotGLVP{NotGLVP::Kind::RankObstruction,
                       "rank(A) = " + std::to_string(rank_a) + " differs from rank(M) = " +
                           std::to_string(rank_m)};
    if (rank_a % 2 != 0)
        return NotGLVP{NotGLVP::Kind::RankObstruction,
                       "rank(A) = " + std::to_string(rank_a) +
                           " is odd; skew-symmetric K forces an even rank"};

    // K = A diag(u) W is forced by K B^T = A diag(u); assemble the linear
    // constraints on u = 1/diag(D).
    const RatMatrix Bt = sys.B().transpose();
    const RatMatrix W = sys.B() * invert(Bt * sys.B()); // m x n
    const RatMatrix Proj = RatMatrix::identity(m) - W * Bt; // kills row space of B^T

    RatMatrix cons(n * m + n * (n + 1) / 2, m);
    std::size_t row = 0;
    // (i) rows of A diag(u) must lie in the row space of B^T
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < m; ++l, ++row)
            for (std::size_t j = 0; j < m; ++j) cons(row, j) = sys.A()(i, j) * Proj(j, l);
    // (ii) K + K^T = 0
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k, ++row)
            for (std::size_t j = 0; j < m; ++j)
                cons(row, j) = sys.A()(i, j) * W(j, k) + sys.A()(k, j) * W(j, i);

    const auto kernel = right_kernel_basis(cons);
    if (kernel.empty())
        return NotGLVP{NotGLVP::Kind::NoNonvanishingD,
                       "the constraint system on 1/D has only the trivial solution"};

    // look for a kernel vector with no zero entry: basis vectors, pair sums,
    // then seeded random integer combinations
    std::vector<Rational> u;
    bool found = false;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000;
    for (const auto& v : kernel) {
        ++attempts;
        if (all_nonzero(v)) {
            u = v;
            found = true;
            break;
        }
    }
    if (!found)
        for (std::size_t a = 0; a < kernel.size() && !found; ++a)
            for (std::size_t b = a + 1; b < kernel.size() && !found; ++b) {
                ++attempts;
                std::vector<Rational> w(m);
                for (std::size_t j = 0; j < m; ++j) w[j] = kernel[a][j] + kernel[b][j];
                if (all_nonzero(w)) {
                    u = std::move(w);
                    found = true;
                }
            }
    if (!found) {
        DetRng rng(seed);
        while (!found && attempts < max_attempts) {
            ++attempts;
            std::vector<Rational> w(m);
            for (const auto& v : kernel) {
                const int c = rng.nonzero_int(-5, 5);
                for (std::size_t j = 0; j < m; ++j) w[j] += c * v[j];
            }
            if (all_nonzero(w)) {
                u = std::move(w);
                found = true;
            }
        }
    }
    if (!found)
        return NotGLVP{NotGLVP::Kind::NoNonvanishingD,
                       "no kernel combination with all D_jj nonzero after " +
                           std::to_string(attempts) + " attempts (kernel dimension " +
                           std::to_string(kernel.size()) + ")"};

    u = normalize_primitive(std::move(u));
    RatMatrix R = sys.A();
    for (std::size_t j = 0; j < m; ++j) R.scale_col(j, u[j]);
    RatMatrix K = R * W;

    const auto L = solve_linear(K, sys.lambda().col(0));
    if (!L)
        return NotGLVP{NotGLVP::Kind::LambdaNotInImage,
                       "lambda is not in the image of the recovered K"};

    GLVPFactorization f;
    f.K = std::move(K);
    f.Ddiag.resize(m);
    for (std::size_t j = 0; j < m; ++j) f.Ddiag[j] = Rational(1) / u[j];
    f.L = RatMatrix::column(*L);
    return f;
}

HamiltonianExpr hamiltonian(const GLVSystem& sys, const GLVPFactorization& f) {
    if (!verify_factorization(sys, f))
        throw InvalidFactorization("factorization does not certify this system");
    HamiltonianExpr h;
    h.chart = Chart::PositiveOrthant;
    h.terms.reserve(sys.m());
    for (std::size_t i = 0; i < sys.m(); ++i)
        h.terms.push_back({f.Ddiag[i], sys.B().row(i)});
    h.linear = f.L.col(0);
    return h;
}

std::vector<std::vector<double>> structure_matrix(const GLVPFactorization& f,
                                                  const std::vector<double>& x) {
    const std::size_t n = f.n();
    if (x.size() != n) throw DimensionMismatch("point size != n");
    for (double xi : x)
        if (!(xi > 0.0)) throw DomainError("point leaves the positive orthant");
    std::vector<std::vector<double>> j(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) j[a][b] = x[a] * to_double(f.K(a, b)) * x[b];
    return j;
}

Rational check_jacobi(const GLVPFactorization& f,
                      const std::vector<std::vector<Rational>>& samples) {
    const std::size_t n = f.n();
    const RatMatrix& k = f.K;
    Rational worst(0);
    for (const auto& x : samples) {
        if (x.size() != n) throw DimensionMismatch("sample size != n");
        // J_ab = x_a K_ab x_b, d_l J_ab = delta_la K_ab x_b + delta_lb x_a K_ab
        auto J = [&](std::size_t a, std::size_t b) { return x[a] * k(a, b) * x[b]; };
        auto dJ = [&](std::size_t l, std::size_t a, std::size_t b) {
            Rational d(0);
            if (l == a) d += k(a, b) * x[b];
            if (l == b) d += x[a] * k(a, b);
            return d;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t kk = 0; kk < n; ++kk) {
                    // degenerate triples carry no content (n = 2 has none at all)
                    if (i == j || j == kk || i == kk) continue;
                    Rational s(0);
                    for (std::size_t l = 0; l < n; ++l)
                        s += J(l, i) * dJ(l, j, kk) + J(l, j) * dJ(l, kk, i) +
                             J(l, kk) * dJ(l, i, j);
                    if (s < 0) s = -s;
                    if (s > worst) worst = s;
                }
    }
    return worst;
}

std::vector<std::vector<Rational>> default_jacobi_samples(std::size_t n, std::size_t count,
                                                          std::uint32_t seed) {
    static const std::vector<Rational> pool = {Rational(1, 3), Rational(1, 2), Rational(1),
                                               Rational(2), Rational(3)};
    DetRng rng(seed);
    std::vector<std::vector<Rational>> samples(count);
    for (auto& s : samples) {
        s.resize(n);
        for (auto& c : s) c = rng.pick(pool);
    }
    return samples;
}

std::vector<Casimir> casimirs(const GLVPFactorization& f) {
    std::vector<Casimir> out;
    for (auto& v : right_kernel_basis(f.K)) out.push_back(Casimir{std::move(v)});
    return out;
}

GLVPFactorization transform_factorization(const GLVPFactorization& f, const RatMatrix& C) {
    if (!C.is_square() || C.rows() != f.n())
        throw DimensionMismatch("QMT matrix must be n x n");
    const RatMatrix Cinv = invert(C);
    GLVPFactorization out;
    out.K = Cinv * f.K * Cinv.transpose();
    out.L = C.transpose() * f.L;
    out.Ddiag = f.Ddiag;
    return out;
}

GLVPFactorization embed_factorization(const GLVSystem& sys, const GLVPFactorization& f,
                                      const EmbeddingSpec& spec) {
    const std::size_t n = sys.n(), m = sys.m(), p = spec.p;
    if (p < 1 || n + p > m) throw CannotComplete("p must satisfy 1 <= p <= m - n");
    if (!spec.Lstar.empty() && spec.Lstar.size() != p)
        throw DimensionMismatch("Lstar must have p entries");
    const RatMatrix Bstar = spec.Bstar ? *spec.Bstar : complete_to_full_rank(sys.B(), p);
    const auto e = embedding_weights(Bstar, spec.alpha);

    GLVPFactorization out;
    out.K = RatMatrix::zero(n + p, n + p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.K(i, j) = f.K(i, j);
    out.L = RatMatrix(n + p, 1);
    for (std::size_t i = 0; i < n; ++i) out.L(i, 0) = f.L(i, 0);
    for (std::size_t i = 0; i < p; ++i)
        out.L(n + i, 0) = spec.Lstar.empty() ? Rational(0) : spec.Lstar[i];
    out.Ddiag.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.Ddiag[j] = f.Ddiag[j] * e[j];
    return out;
}

DecoupleResult decouple_factorization(const GLVSystem& sys, const GLVPFactorization& f,
                                      std::size_t p, const std::vector<Rational>& alpha) {
    const std::size_t n = sys.n(), m = sys.m();
    if (!verify_factorization(sys, f))
        throw InvalidFactorization("factorization does not certify this system");
    if (p == 0) return {sys, f, RatMatrix::identity(n)};

    const auto kernel = right_kernel_basis(f.K);
    if (p > kernel.size())
        throw InsufficientDegeneracy("p = " + std::to_string(p) + " exceeds n - rank(K) = " +
                                     std::to_string(kernel.size()));

    // C^-1 with p kernel rows of K at the bottom; K transforms to a block
    // matrix with a zero p x p corner and the same rows of M vanish.
    RatMatrix bottom(p, n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < n; ++j) bottom(i, j) = kernel[i][j];
    const RatMatrix C = invert(complete_rows_to_invertible(bottom));

    const GLVSystem transformed = apply_qmt(sys, C);
    const GLVPFactorization ft = transform_factorization(f, C);
    GLVSystem reduced = decouple(transformed, p, alpha);

    const std::size_t nr = n - p;
    GLVPFactorization fr;
    fr.K = ft.K.block(0, nr, 0, nr);
    fr.L = ft.L.block(0, nr, 0, 1);
    const auto e = embedding_weights(transformed.B().block(0, m, nr, n), alpha);
    fr.Ddiag.resize(m);
    for (std::size_t j = 0; j < m; ++j) fr.Ddiag[j] = ft.Ddiag[j] / e[j];
    return {std::move(reduced), std::move(fr), C};
}

} // namespace glv
