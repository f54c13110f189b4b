#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geomflow/manifold.hpp"
#include "geomflow/operators.hpp"

namespace geomflow {

enum class DegenerateScheme { Regularized, FreezeDegenerate };

struct SolverConfig {
    double cfl_safety = 0.4;
    double eps_grad = 0.0;  // 0 -> default h_min^2
    double t_end = 0.1;
    double snapshot_every = 0.01;
    DegenerateScheme scheme = DegenerateScheme::Regularized;
    int workers = 1;

    double effective_eps(const ChartGrid& g) const {
        if (eps_grad > 0.0) return eps_grad;
        double h = g.min_spacing();
        return h * h;
    }
};

// Stable explicit time step for the current field; a pure function of the
// field so interrupted runs resume bit-exactly.
double stable_dt(const ScalarField& u, const MetricField& m, const CurvatureOperator& op,
                 const SolverConfig& cfg);

// One forward-Euler update; dt_cap bounds the step (snapshot alignment).
// Throws BlowUp on NaN or runaway values.
ScalarField step(const ScalarField& u, const MetricField& m, const CurvatureOperator& op,
                 const SolverConfig& cfg, double dt_cap);

struct Trajectory {
    std::vector<ScalarField> snapshots;
    std::optional<std::string> error;  // set when the run blew up

    bool ok() const { return !error.has_value(); }
};

// Steps from u0.time to cfg.t_end, snapshotting on the global cadence grid
// (multiples of snapshot_every) plus the endpoints. A u0 taken from a
// checkpoint on the cadence grid resumes bitwise identically.
Trajectory evolve(const ScalarField& u0, const MetricField& m, const CurvatureOperator& op,
                  const SolverConfig& cfg);

struct MaxPrincipleReport {
    bool passed = false;
    double worst_max_growth = 0.0;
    double worst_min_drop = 0.0;
    double slack = 0.0;
};

MaxPrincipleReport max_principle_check(const Trajectory& traj);

}  // namespace geomflow
