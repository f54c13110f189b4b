#include "geomflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace geomflow {

double stable_dt(const ScalarField& u, const MetricField& m, const CurvatureOperator& op,
                 const SolverConfig& cfg) {
    (void)u;
    (void)op;
    // Worst-case parabolic scale: largest eigenvalue of g^{-1} over the grid.
    double lam_max = 0.0;
    for (const NodeMetric& nm : m.nodes) {
        double tr = nm.ginv.trace(), det = nm.ginv.det();
        double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        lam_max = std::max(lam_max, tr / 2.0 + disc);
    }
    double h = u.grid.min_spacing();
    return cfg.cfl_safety * h * h / (4.0 * lam_max);
}

ScalarField step(const ScalarField& u, const MetricField& m, const CurvatureOperator& op,
                 const SolverConfig& cfg, double dt_cap) {
    const ChartGrid& g = u.grid;
    double dt = std::min(stable_dt(u, m, op, cfg), dt_cap);
    double eps = cfg.effective_eps(g);

    ScalarField out(g, 0.0, u.time + dt);
    auto update_rows = [&](int i_begin, int i_end) {
        for (int i = i_begin; i < i_end; ++i) {
            for (int j = 0; j < g.n[1]; ++j) {
                TangentData grad = gradient(u, m, i, j);
                const NodeMetric& nm = m.at(i, j);
                double nrm = std::sqrt(norm_sq_cov(nm, grad.zeta));
                double f;
                if (nrm < eps) {
                    if (cfg.scheme == DegenerateScheme::FreezeDegenerate) {
                        f = 0.0;
                    } else {
                        Jet jet{{g.coord(0, i), g.coord(1, j)},
                                grad.zeta,
                                covariant_hessian(u, m, i, j),
                                nm};
                        f = eval_F_regularized(op, jet, eps);
                    }
                } else {
                    Jet jet{{g.coord(0, i), g.coord(1, j)},
                            grad.zeta,
                            covariant_hessian(u, m, i, j),
                            nm};
                    f = eval_F_regularized(op, jet, 0.0);
                }
                out.at(i, j) = u.at(i, j) - dt * f;
            }
        }
    };

    int workers = std::max(1, cfg.workers);
    if (workers == 1 || g.n[0] < 2 * workers) {
        update_rows(0, g.n[0]);
    } else {
        std::vector<std::thread> pool;
        int chunk = (g.n[0] + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int b = w * chunk, e = std::min(g.n[0], b + chunk);
            if (b >= e) break;
            pool.emplace_back(update_rows, b, e);
        }
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            if (!std::isfinite(out.at(i, j)))
                throw BlowUpError("non-finite value during step", i, j, out.time);
    return out;
}

Trajectory evolve(const ScalarField& u0, const MetricField& m, const CurvatureOperator& op,
                  const SolverConfig& cfg) {
    Trajectory traj;
    traj.snapshots.push_back(u0);
    if (cfg.t_end <= u0.time) return traj;

    double u0_max = 0.0;
    for (double v : u0.values) u0_max = std::max(u0_max, std::fabs(v));
    double blow_limit = 1e6 * (u0_max + 1e-30);

    ScalarField u = u0;
    double snap = cfg.snapshot_every;
    try {
        while (u.time < cfg.t_end - 1e-14) {
            // Next cadence boundary strictly ahead of the current time.
            long k = static_cast<long>(std::floor(u.time / snap + 1e-9)) + 1;
            double target = std::min(k * snap, cfg.t_end);
            u = step(u, m, op, cfg, target - u.time);
            if (std::fabs(u.time - target) < 1e-12) {
                u.time = std::min(k * snap, cfg.t_end);
                traj.snapshots.push_back(u);
            }
            for (std::size_t id = 0; id < u.values.size(); ++id) {
                if (std::fabs(u.values[id]) > blow_limit) {
                    int i = static_cast<int>(id) / u.grid.n[1];
                    int j = static_cast<int>(id) % u.grid.n[1];
                    throw BlowUpError("field exceeded 1e6 x initial max", i, j, u.time);
                }
            }
        }
    } catch (const BlowUpError& e) {
        traj.error = std::string(e.what()) + " at node (" + std::to_string(e.node_i) + "," +
                     std::to_string(e.node_j) + "), t=" + std::to_string(e.at_time);
        return traj;
    }
    if (traj.snapshots.back().time < cfg.t_end - 1e-14) traj.snapshots.push_back(u);
    return traj;
}

MaxPrincipleReport max_principle_check(const Trajectory& traj) {
    MaxPrincipleReport rep;
    if (traj.snapshots.empty()) return rep;
    double h = traj.snapshots.front().grid.min_spacing();
    rep.passed = true;
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
        const ScalarField& a = traj.snapshots[k - 1];
        const ScalarField& b = traj.snapshots[k];
        auto minmax_a = std::minmax_element(a.values.begin(), a.values.end());
        auto minmax_b = std::minmax_element(b.values.begin(), b.values.end());
        double slack = 1e-8 + 10.0 * h * h * (b.time - a.time);
        rep.slack = slack;
        double growth = *minmax_b.second - *minmax_a.second;
        double drop = *minmax_a.first - *minmax_b.first;
        rep.worst_max_growth = std::max(rep.worst_max_growth, growth);
        rep.worst_min_drop = std::max(rep.worst_min_drop, drop);
        if (growth > slack || drop > slack) rep.passed = false;
    }
    return rep;
}

}  // namespace geomflow
