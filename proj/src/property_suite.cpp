#include "glvkit/property_suite.hpp"

#include <cmath>

namespace glv::propsuite {

namespace {

RatMatrix random_full_rank(DetRng& rng, std::size_t rows, std::size_t cols, int max_entry) {
    for (;;) {
        RatMatrix b(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) b(i, j) = rng.uniform_int(-max_entry, max_entry);
        if (rank(b) == std::min(rows, cols)) return b;
    }
}

std::vector<Rational> random_positive_point(DetRng& rng, std::size_t n) {
    static const std::vector<Rational> pool = {Rational(1, 3), Rational(1, 2), Rational(1),
                                               Rational(2), Rational(3)};
    std::vector<Rational> x(n);
    for (auto& c : x) c = rng.pick(pool);
    return x;
}

// subspace equality via stacked ranks
bool same_span(const std::vector<std::vector<Rational>>& a,
               const std::vector<std::vector<Rational>>& b, std::size_t width) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    RatMatrix stack(a.size() + b.size(), width);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) stack(i, j) = a[i][j];
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) stack(a.size() + i, j) = b[i][j];
    return rank(stack) == a.size();
}

CheckResult failure(std::string name, std::size_t at, std::string what) {
    return CheckResult{std::move(name), false, at, "instance " + std::to_string(at) + ": " + std::move(what)};
}

} // namespace

GlvpInstance random_glvp_system(DetRng& rng, std::size_t max_n, std::size_t max_m, int max_entry) {
    const std::size_t n = 2 + rng.uniform_int(0, static_cast<int>(max_n) - 2);
    const std::size_t m = n + rng.uniform_int(0, static_cast<int>(max_m - n));

    GLVPFactorization f;
    f.K = RatMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            f.K(i, j) = rng.uniform_int(-max_entry, max_entry);
            f.K(j, i) = -f.K(i, j);
        }
    f.Ddiag.resize(m);
    for (auto& d : f.Ddiag) d = rng.nonzero_int(-max_entry - 1, max_entry + 1);
    RatMatrix L(n, 1);
    for (std::size_t i = 0; i < n; ++i) L(i, 0) = rng.uniform_int(-max_entry, max_entry);
    f.L = L;

    RatMatrix B = random_full_rank(rng, m, n, max_entry);
    RatMatrix A = f.K * B.transpose() * f.D();
    RatMatrix lambda = f.K * L;
    return {GLVSystem(std::move(B), std::move(A), std::move(lambda), "random-glvp"), std::move(f)};
}

GLVSystem random_glv_system(DetRng& rng, std::size_t max_n, std::size_t max_m) {
    const std::size_t n = 1 + rng.uniform_int(0, static_cast<int>(max_n) - 1);
    const std::size_t m = n + rng.uniform_int(0, static_cast<int>(max_m - n));
    RatMatrix B = random_full_rank(rng, m, n, 2);
    RatMatrix A(n, m), lambda(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        lambda(i, 0) = Rational(rng.uniform_int(-2, 2), rng.uniform_int(1, 2));
        for (std::size_t j = 0; j < m; ++j)
            A(i, j) = Rational(rng.uniform_int(-2, 2), rng.uniform_int(1, 2));
    }
    return GLVSystem(std::move(B), std::move(A), std::move(lambda), "random-glv");
}

RatMatrix random_qmt(DetRng& rng, std::size_t n, int max_entry) {
    return random_full_rank(rng, n, n, max_entry);
}

CheckResult check_rank_law(std::size_t count, std::uint32_t seed) {
    const std::string name = "rank-law (rank M = rank A = rank K, Ker M^T = Ker K)";
    DetRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto inst = random_glvp_system(rng);
        const std::size_t rm = rank(inst.system.M());
        const std::size_t ra = rank(inst.system.A());
        const std::size_t rk = rank(inst.factorization.K);
        if (rm != ra || ra != rk)
            return failure(name, i, "ranks " + std::to_string(rm) + "/" + std::to_string(ra) +
                                        "/" + std::to_string(rk) + " differ");
        const auto lkm = left_kernel_basis(inst.system.M());
        const auto rkk = right_kernel_basis(inst.factorization.K);
        if (!same_span(lkm, rkk, inst.system.n()))
            return failure(name, i, "kernel spaces differ");
    }
    return {name, true, count, ""};
}

CheckResult check_jacobi_zero(std::size_t count, std::uint32_t seed) {
    const std::string name = "jacobi identity (residual exactly 0 for skew K)";
    DetRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t n = 2 + rng.uniform_int(0, 4);
        GLVPFactorization f;
        f.K = RatMatrix(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                f.K(a, b) = Rational(rng.uniform_int(-3, 3), rng.uniform_int(1, 2));
                f.K(b, a) = -f.K(a, b);
            }
        f.Ddiag.assign(n, Rational(1));
        f.L = RatMatrix::zero(n, 1);
        const auto samples = default_jacobi_samples(n, 10, rng.next());
        if (check_jacobi(f, samples) != 0) return failure(name, i, "nonzero residual");
    }
    return {name, true, count, ""};
}

CheckResult check_transformation_coherence(std::size_t count, std::uint32_t seed) {
    const std::string name = "transformation coherence (QMT transport, embed/decouple round trip)";
    DetRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto inst = random_glvp_system(rng, 5, 7);
        const auto C = random_qmt(rng, inst.system.n());
        const auto moved = apply_qmt(inst.system, C);
        const auto fmoved = transform_factorization(inst.factorization, C);
        if (!verify_factorization(moved, fmoved))
            return failure(name, i, "transported factorization fails verification");
        if (class_signature(moved).BM != class_signature(inst.system).BM)
            return failure(name, i, "B*M changed under a QMT");

        if (inst.system.m() > inst.system.n()) {
            EmbeddingSpec spec;
            spec.p = 1 + rng.uniform_int(0, static_cast<int>(inst.system.m() - inst.system.n()) - 1);
            static const std::vector<Rational> levels = {Rational(1, 2), Rational(1), Rational(2),
                                                         Rational(3)};
            for (std::size_t k = 0; k < spec.p; ++k) spec.alpha.push_back(rng.pick(levels));
            const auto embedded = embed(inst.system, spec);
            const auto back = decouple(embedded, spec.p, spec.alpha);
            if (!(back == inst.system))
                return failure(name, i, "embed -> decouple did not restore the system");

            const auto fe = embed_factorization(inst.system, inst.factorization, spec);
            if (!verify_factorization(embedded, fe))
                return failure(name, i, "embedded factorization fails verification");
            if (casimirs(fe).size() != casimirs(inst.factorization).size() + spec.p)
                return failure(name, i, "embedding did not add p Casimirs");
        }
    }
    return {name, true, count, ""};
}

CheckResult check_exact_conservation(std::size_t count, std::uint32_t seed) {
    const std::string name = "exact conservation (grad H . xdot = 0, grad phi_N . xdot = 0)";
    DetRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto inst = random_glvp_system(rng, 5, 7);
        const auto h = hamiltonian(inst.system, inst.factorization);
        const auto x = random_positive_point(rng, inst.system.n());
        const auto xdot = eval_vector_field_exact(inst.system, x);
        const auto gh = h.gradient_exact(x);
        Rational dot(0);
        for (std::size_t j = 0; j < x.size(); ++j) dot += gh[j] * xdot[j];
        if (dot != 0) return failure(name, i, "Hamiltonian is not exactly conserved");
        for (const auto& cas : casimirs(inst.factorization)) {
            const auto gc = cas.gradient_exact(x);
            Rational cdot(0);
            for (std::size_t j = 0; j < x.size(); ++j) cdot += gc[j] * xdot[j];
            if (cdot != 0) return failure(name, i, "Casimir is not exactly conserved");
        }
    }
    return {name, true, count, ""};
}

CheckResult check_solver_roundtrip(std::size_t count, std::uint32_t seed) {
    const std::string name = "factorization solver (solve then verify on GLVP instances)";
    DetRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const auto inst = random_glvp_system(rng, 5, 7);
        const auto result = solve_factorization(inst.system, seed);
        const auto* f = std::get_if<GLVPFactorization>(&result);
        if (!f) return failure(name, i, "NotGLVP returned for a constructed GLVP system: " +
                                            std::get<NotGLVP>(result).message);
        if (!verify_factorization(inst.system, *f))
            return failure(name, i, "solved factorization fails verification");
    }
    return {name, true, count, ""};
}

namespace {

// A trajectory usable for pointwise comparisons: bounded and not collapsed.
bool tame(const Trajectory& traj, double bound) {
    for (const auto& state : traj.states)
        for (double v : state)
            if (!(v > 1.0 / bound && v < bound)) return false;
    return true;
}

} // namespace

CheckResult check_flow_equivalence(std::size_t count, std::uint32_t seed) {
    const std::string name = "flow equivalence (mapped trajectory satisfies the transformed field)";
    DetRng rng(seed);
    std::size_t done = 0, guard = 0;
    while (done < count && ++guard < count * 200) {
        const auto sys = random_glv_system(rng, 4, 5);
        const auto C = random_qmt(rng, sys.n());
        std::vector<double> x0(sys.n());
        for (auto& v : x0) v = rng.uniform(0.6, 1.6);
        Trajectory traj;
        try {
            traj = integrate_glv(sys, x0, 3.0, 1e-9);
        } catch (const BlowUp&) {
            continue;
        } catch (const StepUnderflow&) {
            continue;
        }
        if (!tame(traj, 20.0)) continue; // keep roundoff below the residual tolerance

        const auto transformed = apply_qmt(sys, C);
        const auto mapped = map_trajectory(traj, C, MapDirection::Forward);
        if (!tame(mapped, 50.0)) continue;
        const RatMatrix Cinv = invert(C);
        std::vector<std::vector<double>> cinv(sys.n(), std::vector<double>(sys.n()));
        for (std::size_t i = 0; i < sys.n(); ++i)
            for (std::size_t j = 0; j < sys.n(); ++j) cinv[i][j] = to_double(Cinv(i, j));

        for (std::size_t s = 0; s < traj.size(); ++s) {
            const auto& x = traj.states[s];
            const auto& y = mapped.states[s];
            const auto xdot = eval_vector_field(sys, x);
            const auto field = eval_vector_field(transformed, y);
            for (std::size_t i = 0; i < sys.n(); ++i) {
                double chain = 0.0; // ydot_i = y_i * (C^-1 (xdot/x))_i
                for (std::size_t j = 0; j < sys.n(); ++j) chain += cinv[i][j] * xdot[j] / x[j];
                chain *= y[i];
                if (std::abs(chain - field[i]) >= 1e-5)
                    return failure(name, done, "pointwise residual " +
                                                   std::to_string(std::abs(chain - field[i])));
            }
        }
        ++done;
    }
    if (done < count) return {name, false, done, "could not assemble enough tame instances"};
    return {name, true, count, ""};
}

CheckResult check_darboux_routes(std::size_t count, std::uint32_t seed) {
    const std::string name = "darboux routes (J = S(r,n-r), H transport, flow pull-back)";
    DetRng rng(seed);
    std::size_t done = 0, guard = 0;
    while (done < count && ++guard < count * 200) {
        const auto inst = random_glvp_system(rng, 5, 6, 1);
        const auto& sys = inst.system;
        const auto& f = inst.factorization;
        const auto h0 = hamiltonian(sys, f);
        const std::size_t r = rank(f.K);

        const DarbouxSystem routes[3] = {darboux_general(sys, f), darboux_via_decoupling(sys, f),
                                         darboux_via_linear(sys, f)};
        if (routes[0].J != skew_canonical_form(r, sys.n()) ||
            routes[2].J != skew_canonical_form(r, sys.n()) ||
            routes[1].J != skew_canonical_form(r, r))
            return failure(name, done, "a route missed the canonical S(r, n-r)");

        bool skip = false;
        for (const auto& d : routes) {
            for (int trial = 0; trial < 5 && !skip; ++trial) {
                std::vector<double> y(d.n);
                for (auto& v : y) v = rng.uniform(-0.8, 0.8);
                std::vector<double> x;
                try {
                    x = d.chain.inverse(y);
                } catch (const DomainError&) {
                    skip = true;
                    break;
                }
                bool in_range = true;
                for (double v : x) in_range = in_range && v > 1e-4 && v < 1e4;
                if (!in_range) { skip = true; break; }
                const double hx = h0.value(x);
                const double hy = d.H.value(y);
                if (std::abs(hx - hy) > 1e-12 * std::max({1.0, std::abs(hx), std::abs(hy)}))
                    return failure(name, done, "H changed through the chain");
            }
            if (skip) break;

            // pull a short Darboux-chart trajectory back to the orthant
            std::vector<double> y0(d.n, 0.1);
            const std::vector<double> x0 = d.chain.inverse(y0);
            std::vector<double> times;
            for (int k = 0; k <= 20; ++k) times.push_back(2.0 * k / 20.0);
            Trajectory ty, tx;
            try {
                ty = integrate_darboux_sampled(d, y0, times, 1e-10);
                tx = integrate_glv_sampled(sys, x0, times, 1e-10);
            } catch (const BlowUp&) {
                skip = true;
                break;
            } catch (const StepUnderflow&) {
                skip = true;
                break;
            }
            if (!tame(tx, 1e3)) { skip = true; break; }
            for (std::size_t s = 0; s < times.size(); ++s) {
                const auto back = d.chain.inverse(ty.states[s]);
                for (std::size_t i = 0; i < sys.n(); ++i) {
                    const double rel = std::abs(back[i] - tx.states[s][i]) /
                                       std::max(1.0, std::abs(tx.states[s][i]));
                    if (rel >= 1e-6)
                        return failure(name, done, "pull-back deviates by " + std::to_string(rel));
                }
            }
        }
        if (skip) continue;
        ++done;
    }
    if (done < count) return {name, false, done, "could not assemble enough tame instances"};
    return {name, true, count, ""};
}

std::vector<CheckResult> run_all(std::uint32_t seed, bool quick) {
    const std::size_t big = quick ? 50 : 500;
    const std::size_t mid = quick ? 20 : 200;
    std::vector<CheckResult> results;
    results.push_back(check_rank_law(big, seed));
    results.push_back(check_jacobi_zero(big, seed + 1));
    results.push_back(check_transformation_coherence(mid, seed + 2));
    results.push_back(check_exact_conservation(quick ? 20 : 100, seed + 3));
    results.push_back(check_solver_roundtrip(quick ? 20 : 100, seed + 4));
    results.push_back(check_flow_equivalence(quick ? 5 : 20, seed + 5));
    results.push_back(check_darboux_routes(quick ? 3 : 10, seed + 6));
    return results;
}

} // namespace glv::propsuite
