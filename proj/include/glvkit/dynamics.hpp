#pragma once

#include <functional>
#include <iosfwd>

#include "glvkit/darboux.hpp"

namespace glv {

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    Chart chart = Chart::PositiveOrthant;

    std::size_t size() const { return times.size(); }
    std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }
};

// A labeled conserved quantity to track along a trajectory.
struct Quantity {
    std::string label;
    std::variant<HamiltonianExpr, Casimir> observable;

    double value(const std::vector<double>& state, Chart chart) const;
};

struct QuantityReport {
    std::string label;
    double initial = 0.0;
    double max_abs_drift = 0.0;
    // relative drift uses max(|initial|, 1) so zero-valued integrals survive
    double max_rel_drift = 0.0;
};

struct ConservationReport {
    std::vector<QuantityReport> entries;

    double worst_rel_drift() const;
};

// GLV flow integrated in u = ln x with a Dormand-Prince 5(4) pair and PI
// step control, so states stay in the positive orthant by construction.
// Output has at least 200 samples. Throws BlowUp past |u| = 700 and
// StepUnderflow when the controller stalls.
Trajectory integrate_glv(const GLVSystem& sys, const std::vector<double>& x0, double t_end,
                         double rel_tol);

// Same flow, but sampled exactly at the given increasing times (first entry
// must be 0).
Trajectory integrate_glv_sampled(const GLVSystem& sys, const std::vector<double>& x0,
                                 const std::vector<double>& times, double rel_tol);

// Darboux-chart flow dy = S(r, n-r) grad H dt. Coordinates beyond r have
// identically zero derivative and are not integrated at all.
Trajectory integrate_darboux(const DarbouxSystem& d, const std::vector<double>& y0, double t_end,
                             double rel_tol);

Trajectory integrate_darboux_sampled(const DarbouxSystem& d, const std::vector<double>& y0,
                                     const std::vector<double>& times, double rel_tol);

// Drift of each quantity along the trajectory.
ConservationReport conservation_report(const Trajectory& traj, const std::vector<Quantity>& quantities);

// Map a positive-orthant trajectory through a QMT (forward: old -> new
// variables, which needs C^-1) or back (inverse).
enum class MapDirection { Forward, Inverse };
Trajectory map_trajectory(const Trajectory& traj, const RatMatrix& C, MapDirection direction);

// CSV with header t,x1,...,xn and 17 significant digits per value.
void write_csv(const Trajectory& traj, std::ostream& out);

} // namespace glv
