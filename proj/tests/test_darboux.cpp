#include <doctest.h>

#include <cmath>

#include <glvkit/darboux.hpp>
#include <glvkit/dynamics.hpp>
#include <glvkit/property_suite.hpp>

#include "support.hpp"

using namespace glv;
using fixtures::nutku;
using fixtures::nutku_factorization;
using fixtures::predator_prey;

namespace {

// H must be the same function through the chain: sample the Darboux chart,
// walk back to the orthant, compare against the original Hamiltonian.
void check_h_transport(const GLVSystem& sys, const GLVPFactorization& f, const DarbouxSystem& d,
                       std::uint32_t seed, int points = 100, double tol = 1e-12) {
    const auto h0 = hamiltonian(sys, f);
    DetRng rng(seed);
    for (int i = 0; i < points; ++i) {
        std::vector<double> y(d.n);
        for (auto& v : y) v = rng.uniform(-0.9, 0.9);
        const auto x = d.chain.inverse(y);
        const double hy = d.H.value(y);
        const double hx = h0.value(x);
        CHECK(std::abs(hy - hx) <= tol * std::max({1.0, std::abs(hx), std::abs(hy)}));
    }
}

} // namespace

TEST_CASE("general route on the worked 3D instance") {
    const auto sys = nutku();
    const auto f = nutku_factorization();
    const auto d = darboux_general(sys, f);

    CHECK(d.n == 3);
    CHECK(d.r == 2);
    CHECK(d.J == RatMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}});
    CHECK(d.H.chart == Chart::Log);
    REQUIRE(d.H.terms.size() == 3);
    // D carries over unchanged: three exponentials weighted 1, 1, -1
    CHECK(d.H.terms[0].coefficient == 1);
    CHECK(d.H.terms[1].coefficient == 1);
    CHECK(d.H.terms[2].coefficient == -1);
    CHECK(d.H.linear.size() == 3);
    REQUIRE(d.chain.steps().size() == 2);
    CHECK(std::holds_alternative<QmtStep>(d.chain.steps()[0]));
    CHECK(std::holds_alternative<LogStep>(d.chain.steps()[1]));

    check_h_transport(sys, f, d, 101);

    SUBCASE("chain round trip is the identity on the chart") {
        DetRng rng(59);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> y(3);
            for (auto& v : y) v = rng.uniform(-1.0, 1.0);
            const auto back = d.chain.forward(d.chain.inverse(y));
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(back[k] == doctest::Approx(y[k]).epsilon(1e-12));
        }
    }
    SUBCASE("invalid factorization is rejected") {
        auto bad = f;
        bad.L = RatMatrix::zero(3, 1);
        CHECK_THROWS_AS(darboux_general(sys, bad), InvalidFactorization);
    }
}

TEST_CASE("general route: already-canonical K gives an identity QMT") {
    // B integer, K = S(2,0): x' = x(1 + y), y' = y(-1 - x) has A = K B^T D
    // with D = diag(1,1), L = (-1, 1)... construct directly instead:
    GLVPFactorization f;
    f.K = RatMatrix{{0, 1}, {-1, 0}};
    f.Ddiag = {1, 1};
    f.L = RatMatrix{{1}, {1}};
    const RatMatrix B = RatMatrix::identity(2);
    const GLVSystem sys(B, f.K * B.transpose() * f.D(), f.K * f.L, "canonical");

    const auto d = darboux_general(sys, f);
    CHECK(d.J == f.K);
    const auto* q = std::get_if<QmtStep>(&d.chain.steps()[0]);
    REQUIRE(q != nullptr);
    CHECK(q->C == RatMatrix::identity(2));
}

TEST_CASE("general route: K = 0 gives a frozen chart") {
    GLVPFactorization f;
    f.K = RatMatrix::zero(2, 2);
    f.Ddiag = {1, 1};
    f.L = RatMatrix::zero(2, 1);
    const GLVSystem sys(RatMatrix::identity(2), RatMatrix::zero(2, 2), RatMatrix::zero(2, 1),
                        "still");
    const auto d = darboux_general(sys, f);
    CHECK(d.r == 0);
    CHECK(d.J == RatMatrix::zero(2, 2));
    const auto traj = integrate_darboux(d, {0.3, -0.2}, 5.0, 1e-9);
    for (const auto& state : traj.states) {
        CHECK(state[0] == 0.3);
        CHECK(state[1] == -0.2);
    }
}

TEST_CASE("decoupling route on the worked 3D instance") {
    const auto sys = nutku();
    const auto f = nutku_factorization();
    const auto d = darboux_via_decoupling(sys, f);

    CHECK(d.n == 2); // dimension drops to rank(K)
    CHECK(d.r == 2);
    CHECK(d.J == RatMatrix{{0, 1}, {-1, 0}});
    REQUIRE(d.H.terms.size() == 3);
    CHECK(d.H.terms[0].coefficient == 1);
    CHECK(d.H.terms[1].coefficient == 1);
    CHECK(d.H.terms[2].coefficient == -1);

    // the printed reduced Hamiltonian, reachable from ours by y -> -y (a
    // symplectic change): e^{-y1} + e^{y2} - e^{y1+y2} - 2 y1 - y2
    auto paper_h = [](double y1, double y2) {
        return std::exp(-y1) + std::exp(y2) - std::exp(y1 + y2) - 2 * y1 - y2;
    };
    CHECK(d.H.value({0.3, -0.4}) == doctest::Approx(paper_h(-0.3, 0.4)).epsilon(1e-12));

    check_h_transport(sys, f, d, 103);

    SUBCASE("symplectic input short-circuits to the general route") {
        GLVPFactorization fp;
        fp.K = RatMatrix{{0, -1}, {1, 0}};
        fp.Ddiag = {1, 1};
        fp.L = RatMatrix{{-1}, {-1}};
        const auto pp = predator_prey();
        REQUIRE(verify_factorization(pp, fp));
        const auto a = darboux_general(pp, fp);
        const auto b = darboux_via_decoupling(pp, fp);
        CHECK(a.J == b.J);
        CHECK(a.H.terms.size() == b.H.terms.size());
        CHECK(a.chain.steps().size() == b.chain.steps().size());
    }
}

TEST_CASE("linear route on the worked 3D instance") {
    const auto sys = nutku();
    const auto f = nutku_factorization();
    const auto d = darboux_via_linear(sys, f);

    CHECK(d.J == RatMatrix{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}});
    REQUIRE(d.chain.steps().size() == 2);
    CHECK(std::holds_alternative<LogStep>(d.chain.steps()[0]));
    CHECK(std::holds_alternative<LinearStep>(d.chain.steps()[1]));

    check_h_transport(sys, f, d, 107);

    SUBCASE("already-canonical K keeps the linear step trivial") {
        GLVPFactorization fc;
        fc.K = RatMatrix{{0, 1}, {-1, 0}};
        fc.Ddiag = {1, 1};
        fc.L = RatMatrix{{1}, {1}};
        const RatMatrix B = RatMatrix::identity(2);
        const GLVSystem cs(B, fc.K * B.transpose() * fc.D(), fc.K * fc.L, "canonical");
        const auto dc = darboux_via_linear(cs, fc);
        const auto* l = std::get_if<LinearStep>(&dc.chain.steps()[1]);
        REQUIRE(l != nullptr);
        CHECK(l->P == RatMatrix::identity(2));
    }
}

TEST_CASE("all three routes agree on the worked instance") {
    const auto sys = nutku();
    const auto f = nutku_factorization();
    const auto da = darboux_general(sys, f);
    const auto db = darboux_via_decoupling(sys, f);
    const auto dc = darboux_via_linear(sys, f);

    const auto S21 = skew_canonical_form(2, 3);
    CHECK(da.J == S21);
    CHECK(dc.J == S21);
    // route B lives on the reduced leaf; padding its J restores S(2,1)
    RatMatrix padded = RatMatrix::zero(3, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) padded(i, j) = db.J(i, j);
    CHECK(padded == S21);

    SUBCASE("H values agree along matched trajectories to 1e-9") {
        // start on route B's leaf so the decoupled chart sees the same orbit
        const std::vector<double> y0b{0.25, -0.35};
        const auto x0 = db.chain.inverse(y0b);
        std::vector<double> times; // short horizon: the flow escapes near t* ~ 0.4
        for (int k = 0; k <= 40; ++k) times.push_back(0.3 * k / 40.0);

        const auto tx = integrate_glv_sampled(sys, x0, times, 1e-10);
        const auto h0 = hamiltonian(sys, f);
        const double href = h0.value(x0);
        for (const DarbouxSystem* d : {&da, &db, &dc}) {
            const auto y0 = d->chain.forward(x0);
            const auto ty = integrate_darboux_sampled(*d, y0, times, 1e-10);
            for (std::size_t s = 0; s < times.size(); ++s) {
                const double hy = d->H.value(ty.states[s]);
                CHECK(std::abs(hy - href) <= 1e-9 * std::max(1.0, std::abs(href)));
            }
        }
        // and the positive-orthant Hamiltonian tracks the same constant
        for (std::size_t s = 0; s < times.size(); ++s)
            CHECK(std::abs(h0.value(tx.states[s]) - href) <= 1e-9 * std::max(1.0, std::abs(href)));
    }
}

TEST_CASE("trajectory pull-back reproduces the original flow") {
    const auto sys = nutku();
    const auto f = nutku_factorization();
    std::vector<double> times;
    for (int k = 0; k <= 50; ++k) times.push_back(0.3 * k / 50.0);

    for (auto route : {darboux_general, darboux_via_decoupling, darboux_via_linear}) {
        const auto d = route(sys, f);
        std::vector<double> y0(d.n, 0.2);
        const auto x0 = d.chain.inverse(y0);
        const auto ty = integrate_darboux_sampled(d, y0, times, 1e-10);
        const auto tx = integrate_glv_sampled(sys, x0, times, 1e-10);
        for (std::size_t s = 0; s < times.size(); ++s) {
            const auto back = d.chain.inverse(ty.states[s]);
            for (std::size_t i = 0; i < 3; ++i) {
                const double rel = std::abs(back[i] - tx.states[s][i]) /
                                   std::max(1.0, std::abs(tx.states[s][i]));
                CHECK(rel < 1e-6);
            }
        }
    }
}

TEST_CASE("trivial Casimir coordinates stay bitwise constant") {
    const auto d = darboux_general(nutku(), nutku_factorization());
    const std::vector<double> y0{0.1, -0.2, 0.7};
    const auto traj = integrate_darboux(d, y0, 0.42, 1e-9);
    for (const auto& state : traj.states) CHECK(state[2] == 0.7);
}

TEST_CASE("property: routes on random GLVP instances") {
    const auto res = propsuite::check_darboux_routes(5, 61);
    INFO(res.details);
    CHECK(res.pass);
}
