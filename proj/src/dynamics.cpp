#include "glvkit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace glv {

namespace {

constexpr double kLogBound = 700.0; // below the double exp overflow threshold

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between the 5th and the embedded 4th order weights
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

using Rhs = std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Adaptive DOPRI5 loop. Calls `record` after the initial point and after
// every accepted step; when `targets` is nonempty the steps land exactly on
// those times and only they are recorded.
void dopri5(const Rhs& rhs, std::vector<double> y, double t_end, double rel_tol,
            const std::vector<double>& targets,
            const std::function<void(double, const std::vector<double>&)>& record) {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-3))
        throw DomainError("rel_tol must lie in [1e-12, 1e-3]");
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    const double abs_tol = rel_tol * 1e-3;
    const std::size_t n = y.size();

    auto check_bounds = [&](const std::vector<double>& v) {
        for (double vi : v) {
            if (!std::isfinite(vi) || std::abs(vi) > kLogBound)
                throw BlowUp("trajectory left the representable range");
        }
    };
    check_bounds(y);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
    double t = 0.0;
    // at least 200 accepted points when free-running
    const double h_max = targets.empty() ? t_end / 199.0 : t_end;
    double h = std::min(h_max, 0.01 * t_end);
    double err_old = 1.0;
    std::size_t next_target = 0;

    if (!targets.empty() && targets.front() == 0.0) {
        record(0.0, y);
        ++next_target;
    } else if (targets.empty()) {
        record(0.0, y);
    }

    rhs(y, k1);
    bool rejected = false;
    while (t < t_end * (1.0 - 1e-15)) {
        if (h < 1e-14 * std::max(1.0, t_end)) {
            // distinguish a finite-time escape (the usual reason the step
            // collapses here) from a genuine controller stall
            double speed = 0.0;
            for (double ki : k1) speed = std::max(speed, std::abs(ki));
            if (speed > 1e3)
                throw BlowUp("finite-time escape near t = " + std::to_string(t) +
                             " (|du/dt| ~ " + std::to_string(speed) + ")");
            throw StepUnderflow("step size collapsed at t = " + std::to_string(t));
        }
        bool hit_target = false;
        double step = std::min(h, t_end - t);
        if (next_target < targets.size() && t + step >= targets[next_target] - 1e-15 * t_end) {
            step = targets[next_target] - t;
            hit_target = true;
            if (step <= 0.0) { // coincident target (e.g. duplicate time)
                record(targets[next_target], y);
                ++next_target;
                continue;
            }
        }

        auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (const auto& [w, k] : terms) s += w * (*k)[i];
                out[i] = y[i] + step * s;
            }
        };
        stage(ytmp, {{a21, &k1}});
        rhs(ytmp, k2);
        stage(ytmp, {{a31, &k1}, {a32, &k2}});
        rhs(ytmp, k3);
        stage(ytmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        rhs(ytmp, k4);
        stage(ytmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        rhs(ytmp, k5);
        stage(ytmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        rhs(ytmp, k6);
        stage(ynew, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        rhs(ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
            const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!std::isfinite(err)) err = 2.0; // force rejection and a smaller step

        if (err <= 1.0) {
            t += step;
            y = ynew;
            k1 = k7; // FSAL
            check_bounds(y);
            if (hit_target) {
                record(t, y);
                ++next_target;
            } else if (targets.empty()) {
                record(t, y);
            }
            // PI controller (Hairer's dopri5 constants)
            const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.17) * std::pow(err_old, 0.04);
            h = step * std::min(rejected ? 1.0 : 5.0, std::max(0.2, fac));
            h = std::min(h, h_max);
            err_old = std::max(err, 1e-4);
            rejected = false;
        } else {
            h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
            rejected = true;
        }
    }
}

std::vector<double> to_doubles(const RatMatrix& m) {
    std::vector<double> out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(to_double(m(i, j)));
    return out;
}

Rhs glv_log_rhs(const GLVSystem& sys) {
    const std::size_t n = sys.n(), m = sys.m();
    auto A = to_doubles(sys.A());
    auto B = to_doubles(sys.B());
    auto lam = to_doubles(sys.lambda());
    return [n, m, A = std::move(A), B = std::move(B), lam = std::move(lam)](
               const std::vector<double>& u, std::vector<double>& du) {
        std::vector<double> q(m);
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += B[j * n + k] * u[k];
            q[j] = std::exp(s);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = lam[i];
            for (std::size_t j = 0; j < m; ++j) s += A[i * m + j] * q[j];
            du[i] = s;
        }
    };
}

Trajectory run_glv(const GLVSystem& sys, const std::vector<double>& x0,
                   const std::vector<double>& targets, double t_end, double rel_tol) {
    if (x0.size() != sys.n()) throw DimensionMismatch("x0 size != n");
    std::vector<double> u0(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
        if (!(x0[i] > 0.0)) throw DomainError("x0 leaves the positive orthant");
        u0[i] = std::log(x0[i]);
    }
    Trajectory traj;
    traj.chart = Chart::PositiveOrthant;
    dopri5(glv_log_rhs(sys), std::move(u0), t_end, rel_tol, targets,
           [&](double t, const std::vector<double>& u) {
               std::vector<double> x(u.size());
               for (std::size_t i = 0; i < u.size(); ++i) x[i] = std::exp(u[i]);
               traj.times.push_back(t);
               traj.states.push_back(std::move(x));
           });
    return traj;
}

Rhs darboux_rhs(const DarbouxSystem& d, const std::vector<double>& frozen_tail) {
    const std::size_t n = d.n, r = d.r;
    auto S = to_doubles(d.J);
    return [n, r, S = std::move(S), H = d.H, tail = frozen_tail](const std::vector<double>& y,
                                                                 std::vector<double>& dy) {
        std::vector<double> full(y.begin(), y.begin() + r);
        full.insert(full.end(), tail.begin(), tail.end());
        const auto g = H.gradient(full);
        for (std::size_t i = 0; i < r; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += S[i * n + j] * g[j];
            dy[i] = s;
        }
    };
}

Trajectory run_darboux(const DarbouxSystem& d, const std::vector<double>& y0,
                       const std::vector<double>& targets, double t_end, double rel_tol) {
    if (y0.size() != d.n) throw DimensionMismatch("y0 size != n");
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-3))
        throw DomainError("rel_tol must lie in [1e-12, 1e-3]");
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    const std::vector<double> tail(y0.begin() + d.r, y0.end());
    std::vector<double> head(y0.begin(), y0.begin() + d.r);

    Trajectory traj;
    traj.chart = Chart::Log;
    auto record = [&](double t, const std::vector<double>& yr) {
        std::vector<double> full(yr.begin(), yr.end());
        full.insert(full.end(), tail.begin(), tail.end());
        traj.times.push_back(t);
        traj.states.push_back(std::move(full));
    };
    if (d.r == 0) {
        // nothing evolves; emit the requested grid directly
        if (targets.empty()) {
            for (std::size_t i = 0; i < 200; ++i)
                record(t_end * static_cast<double>(i) / 199.0, {});
        } else {
            for (double t : targets) record(t, {});
        }
        return traj;
    }
    dopri5(darboux_rhs(d, tail), std::move(head), t_end, rel_tol, targets, record);
    return traj;
}

} // namespace

Trajectory integrate_glv(const GLVSystem& sys, const std::vector<double>& x0, double t_end,
                         double rel_tol) {
    return run_glv(sys, x0, {}, t_end, rel_tol);
}

Trajectory integrate_glv_sampled(const GLVSystem& sys, const std::vector<double>& x0,
                                 const std::vector<double>& times, double rel_tol) {
    if (times.empty()) throw DomainError("sample times must be nonempty");
    if (!std::is_sorted(times.begin(), times.end())) throw DomainError("sample times must increase");
    return run_glv(sys, x0, times, times.back(), rel_tol);
}

Trajectory integrate_darboux(const DarbouxSystem& d, const std::vector<double>& y0, double t_end,
                             double rel_tol) {
    return run_darboux(d, y0, {}, t_end, rel_tol);
}

Trajectory integrate_darboux_sampled(const DarbouxSystem& d, const std::vector<double>& y0,
                                     const std::vector<double>& times, double rel_tol) {
    if (times.empty()) throw DomainError("sample times must be nonempty");
    if (!std::is_sorted(times.begin(), times.end())) throw DomainError("sample times must increase");
    return run_darboux(d, y0, times, times.back(), rel_tol);
}

double Quantity::value(const std::vector<double>& state, Chart chart) const {
    if (const auto* h = std::get_if<HamiltonianExpr>(&observable)) {
        if (h->chart != chart)
            throw ChartMismatch("quantity '" + label + "' lives in a different chart");
        return h->value(state);
    }
    return std::get<Casimir>(observable).value(state, chart);
}

double ConservationReport::worst_rel_drift() const {
    double w = 0.0;
    for (const auto& e : entries) w = std::max(w, e.max_rel_drift);
    return w;
}

ConservationReport conservation_report(const Trajectory& traj, const std::vector<Quantity>& quantities) {
    if (traj.size() == 0) throw DomainError("empty trajectory");
    ConservationReport report;
    for (const auto& q : quantities) {
        QuantityReport entry;
        entry.label = q.label;
        entry.initial = q.value(traj.states.front(), traj.chart);
        for (const auto& state : traj.states) {
            const double v = q.value(state, traj.chart);
            entry.max_abs_drift = std::max(entry.max_abs_drift, std::abs(v - entry.initial));
        }
        entry.max_rel_drift = entry.max_abs_drift / std::max(std::abs(entry.initial), 1.0);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

Trajectory map_trajectory(const Trajectory& traj, const RatMatrix& C, MapDirection direction) {
    if (traj.chart != Chart::PositiveOrthant)
        throw ChartMismatch("QMTs act on positive-orthant trajectories");
    // forward: ln y = C^-1 ln x; inverse: ln x = C ln y
    const RatMatrix map = direction == MapDirection::Forward ? invert(C) : C;
    std::vector<std::vector<double>> mrows(map.rows(), std::vector<double>(map.cols()));
    for (std::size_t i = 0; i < map.rows(); ++i)
        for (std::size_t j = 0; j < map.cols(); ++j) mrows[i][j] = to_double(map(i, j));

    Trajectory out;
    out.chart = Chart::PositiveOrthant;
    out.times = traj.times;
    out.states.reserve(traj.states.size());
    for (const auto& x : traj.states) {
        std::vector<double> logx(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] > 0.0)) throw DomainError("state leaves the positive orthant");
            logx[i] = std::log(x[i]);
        }
        std::vector<double> y(map.rows());
        for (std::size_t i = 0; i < map.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < map.cols(); ++j) s += mrows[i][j] * logx[j];
            y[i] = std::exp(s);
        }
        out.states.push_back(std::move(y));
    }
    return out;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    out << "t";
    for (std::size_t i = 1; i <= traj.dim(); ++i) out << ",x" << i;
    out << "\n";
    char buf[32];
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[k]);
        out << buf;
        for (double v : traj.states[k]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
}

} // namespace glv
