#include <doctest.h>

#include <cmath>

#include <glvkit/poisson.hpp>
#include <glvkit/property_suite.hpp>

#include "support.hpp"

using namespace glv;
using fixtures::logistic1d;
using fixtures::nutku;
using fixtures::nutku_factorization;
using fixtures::predator_prey;

TEST_CASE("verify_factorization on the worked 3D instance") {
    const auto sys = nutku();
    const auto f = nutku_factorization();

    // the certificate identities hold entrywise
    CHECK(f.K * f.L == sys.lambda());
    CHECK(f.K * sys.B().transpose() * f.D() == sys.A());
    CHECK(verify_factorization(sys, f));

    SUBCASE("wrong L fails") {
        auto bad = f;
        bad.L = RatMatrix::zero(3, 1);
        CHECK(!verify_factorization(sys, bad));
    }
    SUBCASE("non-skew K fails before any product is checked") {
        auto bad = f;
        bad.K(0, 1) = bad.K(1, 0);
        CHECK(!verify_factorization(sys, bad));
    }
    SUBCASE("zero D entry fails") {
        auto bad = f;
        bad.Ddiag[1] = 0;
        CHECK(!verify_factorization(sys, bad));
    }
    SUBCASE("shape mismatch throws") {
        auto bad = f;
        bad.Ddiag.pop_back();
        CHECK_THROWS_AS(verify_factorization(sys, bad), DimensionMismatch);
    }
}

TEST_CASE("solve_factorization") {
    SUBCASE("the worked 3D instance") {
        const auto sys = nutku();
        const auto result = solve_factorization(sys);
        const auto* f = std::get_if<GLVPFactorization>(&result);
        REQUIRE(f != nullptr);
        CHECK(verify_factorization(sys, *f));
        CHECK(rank(f->K) == 2);
        const auto ker = right_kernel_basis(f->K);
        REQUIRE(ker.size() == 1);
        CHECK(ker[0] == std::vector<Rational>{1, -1, 1});
        // D is recovered proportional to the paper's diag(1, 1, -1)
        CHECK(f->Ddiag[1] / f->Ddiag[0] == 1);
        CHECK(f->Ddiag[2] / f->Ddiag[0] == -1);
    }
    SUBCASE("2D predator-prey") {
        const auto sys = predator_prey();
        const auto result = solve_factorization(sys);
        const auto* f = std::get_if<GLVPFactorization>(&result);
        REQUIRE(f != nullptr);
        CHECK(verify_factorization(sys, *f));
        CHECK(f->K == RatMatrix{{0, -1}, {1, 0}});
        CHECK(f->Ddiag == std::vector<Rational>{1, 1});
        CHECK(f->L == RatMatrix{{-1}, {-1}});
    }
    SUBCASE("odd rank(A) is a rank obstruction") {
        const auto result = solve_factorization(logistic1d());
        const auto* d = std::get_if<NotGLVP>(&result);
        REQUIRE(d != nullptr);
        CHECK(d->kind == NotGLVP::Kind::RankObstruction);
    }
    SUBCASE("a drift lambda with zero A is caught by the rank mismatch") {
        GLVSystem sys0(RatMatrix::identity(2), RatMatrix::zero(2, 2), RatMatrix{{1}, {0}},
                       "drift-only");
        const auto result = solve_factorization(sys0);
        const auto* d = std::get_if<NotGLVP>(&result);
        REQUIRE(d != nullptr);
        CHECK(d->kind == NotGLVP::Kind::RankObstruction); // rank M = 1 != 0 = rank A
    }
    SUBCASE("skewness can be unsatisfiable even with matching even ranks") {
        // x' = x(x), y' = y(y): forcing K = diag(u) skew kills every u
        GLVSystem sys0(RatMatrix::identity(2), RatMatrix::identity(2), RatMatrix::zero(2, 1),
                       "diagonal");
        const auto result = solve_factorization(sys0);
        const auto* d = std::get_if<NotGLVP>(&result);
        REQUIRE(d != nullptr);
        CHECK(d->kind == NotGLVP::Kind::NoNonvanishingD);
    }
}

TEST_CASE("hamiltonian of the worked 3D instance") {
    const auto sys = nutku();
    const auto f = nutku_factorization();
    const auto h = hamiltonian(sys, f);

    REQUIRE(h.terms.size() == 3);
    CHECK(h.terms[0].coefficient == 1);
    CHECK(h.terms[1].coefficient == 1);
    CHECK(h.terms[2].coefficient == -1);
    CHECK(h.linear == std::vector<Rational>{0, 1, -2});

    // H = x1 + x2 - x3 + ln x2 - 2 ln x3
    const double v = h.value({1.0, 2.0, 4.0});
    CHECK(v == doctest::Approx(1.0 + 2.0 - 4.0 + std::log(2.0) - 2.0 * std::log(4.0)).epsilon(1e-14));

    SUBCASE("gradient matches central finite differences to 1e-8") {
        const std::vector<double> x{1.0, 1.0, 1.0};
        const auto g = h.gradient(x);
        const double step = 1e-6;
        for (std::size_t j = 0; j < 3; ++j) {
            auto xp = x, xm = x;
            xp[j] += step;
            xm[j] -= step;
            const double fd = (h.value(xp) - h.value(xm)) / (2 * step);
            CHECK(std::abs(g[j] - fd) < 1e-8);
        }
    }
    SUBCASE("exact gradient at a rational point") {
        const auto g = h.gradient_exact({Rational(1), Rational(1), Rational(1)});
        CHECK(g == std::vector<Rational>{1, 2, -3});
    }
    SUBCASE("an invalid factorization is rejected") {
        auto bad = f;
        bad.L = RatMatrix::zero(3, 1);
        CHECK_THROWS_AS(hamiltonian(sys, bad), InvalidFactorization);
    }
}

TEST_CASE("structure matrix") {
    const auto f = nutku_factorization();

    SUBCASE("x = (1,1,1) gives K itself") {
        const auto j = structure_matrix(f, {1, 1, 1});
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) CHECK(j[a][b] == to_double(f.K(a, b)));
    }
    SUBCASE("entrywise products at (1,2,3)") {
        const auto j = structure_matrix(f, {1, 2, 3});
        CHECK(j[0][1] == -2.0);
        CHECK(j[0][2] == -3.0);
        CHECK(j[1][2] == -6.0);
        CHECK(j[1][0] == 2.0);
        CHECK(j[2][0] == 3.0);
        CHECK(j[2][1] == 6.0);
    }
    SUBCASE("matches the printed display J = [[0, c x1 x2, b c x1 x3], ...]") {
        const double c = -1, b = 1;
        const std::vector<double> x{0.7, 1.3, 2.1};
        const auto j = structure_matrix(f, x);
        CHECK(j[0][1] == doctest::Approx(c * x[0] * x[1]));
        CHECK(j[0][2] == doctest::Approx(b * c * x[0] * x[2]));
        CHECK(j[1][2] == doctest::Approx(-x[1] * x[2]));
    }
    SUBCASE("domain validation") {
        CHECK_THROWS_AS(structure_matrix(f, {1, 0, 1}), DomainError);
    }
}

namespace {

// independent numeric oracle: Jacobi residual with finite-difference partials
double jacobi_residual_fd(const RatMatrix& K, const std::vector<double>& x) {
    const std::size_t n = K.rows();
    auto Jat = [&](const std::vector<double>& p, std::size_t a, std::size_t b) {
        return p[a] * to_double(K(a, b)) * p[b];
    };
    const double h = 1e-6;
    auto dJ = [&](std::size_t l, std::size_t a, std::size_t b) {
        auto xp = x, xm = x;
        xp[l] += h;
        xm[l] -= h;
        return (Jat(xp, a, b) - Jat(xm, a, b)) / (2 * h);
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                double s = 0.0;
                for (std::size_t l = 0; l < n; ++l)
                    s += Jat(x, l, i) * dJ(l, j, k) + Jat(x, l, j) * dJ(l, k, i) +
                         Jat(x, l, k) * dJ(l, i, j);
                worst = std::max(worst, std::abs(s));
            }
    return worst;
}

} // namespace

TEST_CASE("check_jacobi") {
    SUBCASE("exactly zero for the worked instance") {
        const auto f = nutku_factorization();
        CHECK(check_jacobi(f, default_jacobi_samples(3)) == 0);
    }
    SUBCASE("any skew K vanishes, and the FD oracle agrees") {
        DetRng rng(41);
        const auto k = fixtures::random_skew(rng, 4);
        GLVPFactorization f{k, {1, 1, 1, 1}, RatMatrix::zero(4, 1)};
        CHECK(check_jacobi(f, default_jacobi_samples(4)) == 0);
        CHECK(jacobi_residual_fd(k, {1.0, 0.5, 2.0, 1.5}) < 1e-6);
    }
    SUBCASE("a non-skew K has a nonzero residual at a generic point") {
        GLVPFactorization f{RatMatrix{{0, 1, 1}, {1, 0, 0}, {0, 0, 1}}, {1, 1, 1},
                            RatMatrix::zero(3, 1)};
        const std::vector<Rational> pt{Rational(1), Rational(2), Rational(3)};
        const Rational exact = check_jacobi(f, {pt});
        CHECK(exact != 0);
        // FD oracle confirms the exact value
        const double fd = jacobi_residual_fd(f.K, {1.0, 2.0, 3.0});
        CHECK(fd == doctest::Approx(to_double(exact)).epsilon(1e-5));
    }
    SUBCASE("n = 2 is identically zero even for non-skew K") {
        GLVPFactorization f{RatMatrix{{1, 2}, {3, 4}}, {1, 1}, RatMatrix::zero(2, 1)};
        CHECK(check_jacobi(f, default_jacobi_samples(2)) == 0);
    }
}

TEST_CASE("casimirs") {
    SUBCASE("the worked instance has the single exponent vector (1,-1,1)") {
        const auto cs = casimirs(nutku_factorization());
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].exponents == std::vector<Rational>{1, -1, 1});
    }
    SUBCASE("symplectic factorizations have none") {
        GLVPFactorization f{RatMatrix{{0, -1}, {1, 0}}, {1, 1}, RatMatrix{{-1}, {-1}}};
        CHECK(casimirs(f).empty());
    }
    SUBCASE("Casimir exponents equal the quasimonomial invariants (500 random GLVP)") {
        DetRng rng(43);
        for (int it = 0; it < 500; ++it) {
            const auto inst = propsuite::random_glvp_system(rng);
            const auto qi = quasimonomial_invariants(inst.system);
            const auto cs = casimirs(inst.factorization);
            REQUIRE(qi.size() == cs.size());
            for (std::size_t i = 0; i < qi.size(); ++i) CHECK(qi[i] == cs[i].exponents);
        }
    }
}

TEST_CASE("transform_factorization") {
    const auto sys = nutku();
    const auto f = nutku_factorization();

    SUBCASE("identity") {
        const auto ft = transform_factorization(f, RatMatrix::identity(3));
        CHECK(ft.K == f.K);
        CHECK(ft.L == f.L);
        CHECK(ft.Ddiag == f.Ddiag);
    }
    SUBCASE("the worked 3D QMT") {
        const RatMatrix C{{-1, 0, 0}, {0, 1, 0}, {1, 1, -1}};
        const auto ft = transform_factorization(f, C);
        CHECK(ft.K == RatMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}});
        CHECK(ft.L == RatMatrix{{-2}, {-1}, {2}});
        CHECK(ft.Ddiag == f.Ddiag);
        CHECK(verify_factorization(apply_qmt(sys, C), ft));
    }
    SUBCASE("Casimir transport N' = C^T N lands in Ker K'") {
        const RatMatrix C{{-1, 0, 0}, {0, 1, 0}, {1, 1, -1}};
        const auto ft = transform_factorization(f, C);
        const auto n0 = casimirs(f)[0].exponents;
        const auto np = C.transpose().mul_vec(n0);
        const auto knp = ft.K.mul_vec(np);
        for (const auto& v : knp) CHECK(v == 0);
        const auto cs = casimirs(ft);
        REQUIRE(cs.size() == 1);
        CHECK(cs[0].exponents == normalize_primitive(np));
    }
}

TEST_CASE("embed_factorization") {
    DetRng rng(47);
    int tested = 0;
    while (tested < 50) {
        const auto inst = propsuite::random_glvp_system(rng, 4, 6);
        if (inst.system.m() == inst.system.n()) continue;
        EmbeddingSpec spec;
        spec.p = 1;
        spec.alpha = {Rational(1)};
        const auto fe = embed_factorization(inst.system, inst.factorization, spec);
        CHECK(fe.Ddiag == inst.factorization.Ddiag); // alpha = 1 keeps D
        const auto embedded = embed(inst.system, spec);
        CHECK(verify_factorization(embedded, fe));
        CHECK(casimirs(fe).size() == casimirs(inst.factorization).size() + 1);
        ++tested;
    }
}

TEST_CASE("decouple_factorization") {
    const auto sys = nutku();
    const auto f = nutku_factorization();

    SUBCASE("the worked instance reduces to a symplectic (2,2,3) system") {
        const auto res = decouple_factorization(sys, f, 1, {Rational(1)});
        CHECK(res.system.n() == 2);
        CHECK(res.system.m() == 3);
        const auto sig = class_signature(res.system);
        CHECK(sig.r == 2);
        CHECK(verify_factorization(res.system, res.factorization));
        CHECK(casimirs(res.factorization).empty());

        // one more congruence step lands on S(2,0)
        const auto [p2, r2] = skew_congruence_canonicalize(res.factorization.K);
        CHECK(r2 == 2);
        CHECK(p2 * res.factorization.K * p2.transpose() == RatMatrix{{0, 1}, {-1, 0}});
    }
    SUBCASE("p = 0 is the identity") {
        const auto res = decouple_factorization(sys, f, 0, {});
        CHECK(res.system == sys);
        CHECK(res.C == RatMatrix::identity(3));
    }
    SUBCASE("p beyond the kernel dimension") {
        CHECK_THROWS_AS(decouple_factorization(sys, f, 2, {Rational(1), Rational(1)}),
                        InsufficientDegeneracy);
    }
}

TEST_CASE("factorization invariants on solver output (200 random GLVP)") {
    DetRng rng(53);
    for (int it = 0; it < 200; ++it) {
        const auto inst = propsuite::random_glvp_system(rng, 5, 7);
        const auto result = solve_factorization(inst.system);
        const auto* f = std::get_if<GLVPFactorization>(&result);
        REQUIRE(f != nullptr);
        CHECK(f->K.is_skew_symmetric());
        CHECK(rank(f->K) % 2 == 0);
        for (const auto& d : f->Ddiag) CHECK(d != 0);
        CHECK(verify_factorization(inst.system, *f));
    }
}
