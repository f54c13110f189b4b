#include <doctest.h>

#include <cmath>

#include "geomflow/levelsets.hpp"
#include "geomflow/solver.hpp"

using namespace geomflow;

namespace {

ScalarField circle_field(const ChartGrid& g, double r0, bool inward_positive = true) {
    ScalarField u(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            double d = r0 - std::hypot(g.coord(0, i), g.coord(1, j));
            u.at(i, j) = inward_positive ? d : -d;
        }
    return u;
}

ChartGrid unit_square(int n) { return ChartGrid({-1.0, -1.0}, {1.0, 1.0}, {n, n}); }

}  // namespace

TEST_CASE("stable_dt follows the parabolic CFL scaling") {
    ChartGrid g = unit_square(64);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    ScalarField u = circle_field(g, 0.5);
    SolverConfig cfg;
    double h = g.min_spacing();
    double dt = stable_dt(u, m, CurvatureOperator::mean_curvature(), cfg);
    CHECK(dt == doctest::Approx(cfg.cfl_safety * h * h / 4.0).epsilon(1e-12));
    // Halving the spacing quarters the step.
    ChartGrid g2 = unit_square(127);
    MetricField m2 = build_metric(ManifoldSpec::euclidean(), g2);
    double dt2 = stable_dt(circle_field(g2, 0.5), m2, CurvatureOperator::mean_curvature(), cfg);
    CHECK(dt2 == doctest::Approx(dt / 4.0).epsilon(0.02));
}

TEST_CASE("metric anisotropy tightens the step") {
    // Hyperboloid g^{-1} eigenvalues dip below 1, never above on r >= 1.
    ChartGrid g({-1.0, -M_PI}, {1.0, M_PI}, {32, 32}, {false, true});
    MetricField flat = build_metric(ManifoldSpec::euclidean(), unit_square(32));
    MetricField hyp = build_metric(ManifoldSpec::hyperboloid(), g);
    SolverConfig cfg;
    auto op = CurvatureOperator::mean_curvature();
    double dt_hyp = stable_dt(circle_field(g, 0.5), hyp, op, cfg);
    double h = g.min_spacing();
    CHECK(dt_hyp >= cfg.cfl_safety * h * h / 4.0 - 1e-15);
}

TEST_CASE("constant and affine fields are stationary") {
    ChartGrid g = unit_square(32);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    SolverConfig cfg;
    auto op = CurvatureOperator::mean_curvature();

    ScalarField c(g, 3.7);
    ScalarField c1 = step(c, m, op, cfg, 1e-4);
    for (double v : c1.values) CHECK(v == 3.7);

    ScalarField lin(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            lin.at(i, j) = 0.3 * g.coord(0, i) - 0.8 * g.coord(1, j) + 0.1;
    ScalarField l1 = step(lin, m, op, cfg, 1e-4);
    for (std::size_t k = 0; k < l1.values.size(); ++k)
        CHECK(l1.values[k] == doctest::Approx(lin.values[k]).epsilon(1e-13));
}

TEST_CASE("shrinking circle tracks the curve-shortening ODE at coarse resolution") {
    ChartGrid g = unit_square(64);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    SolverConfig cfg;
    cfg.t_end = 0.06;
    cfg.snapshot_every = 0.02;
    Trajectory traj = evolve(circle_field(g, 0.5), m, CurvatureOperator::mean_curvature(), cfg);
    REQUIRE(traj.ok());
    for (const ScalarField& u : traj.snapshots) {
        Contour c = extract_contour(u);
        REQUIRE(!c.empty());
        double oracle = std::sqrt(0.25 - 2.0 * u.time);
        double acc = 0.0;
        auto vs = c.vertices();
        for (const Vec2& p : vs) acc += std::hypot(p[0], p[1]);
        CHECK(acc / vs.size() == doctest::Approx(oracle).epsilon(0.03));
    }
}

TEST_CASE("snapshots land exactly on the cadence grid") {
    ChartGrid g = unit_square(32);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    SolverConfig cfg;
    cfg.t_end = 0.03;
    cfg.snapshot_every = 0.01;
    Trajectory traj = evolve(circle_field(g, 0.5), m, CurvatureOperator::mean_curvature(), cfg);
    REQUIRE(traj.ok());
    REQUIRE(traj.snapshots.size() == 4);
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k)
        CHECK(traj.snapshots[k].time == doctest::Approx(0.01 * k).epsilon(1e-12));
}

TEST_CASE("resuming from a cadence checkpoint is bitwise identical") {
    ChartGrid g = unit_square(48);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    auto op = CurvatureOperator::mean_curvature();
    SolverConfig cfg;
    cfg.t_end = 0.02;
    cfg.snapshot_every = 0.005;
    Trajectory full = evolve(circle_field(g, 0.5), m, op, cfg);
    REQUIRE(full.ok());
    // Restart from the snapshot at t = 0.01.
    Trajectory tail = evolve(full.snapshots[2], m, op, cfg);
    REQUIRE(tail.ok());
    const ScalarField& a = full.snapshots.back();
    const ScalarField& b = tail.snapshots.back();
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(a.values[k] == b.values[k]);
}

TEST_CASE("worker count never changes the bits") {
    ChartGrid g = unit_square(48);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    auto op = CurvatureOperator::mean_curvature();
    SolverConfig one, four;
    one.t_end = four.t_end = 0.01;
    one.snapshot_every = four.snapshot_every = 0.005;
    four.workers = 4;
    Trajectory ta = evolve(circle_field(g, 0.5), m, op, one);
    Trajectory tb = evolve(circle_field(g, 0.5), m, op, four);
    REQUIRE(ta.ok());
    REQUIRE(tb.ok());
    for (std::size_t k = 0; k < ta.snapshots.back().values.size(); ++k)
        CHECK(ta.snapshots.back().values[k] == tb.snapshots.back().values[k]);
}

TEST_CASE("freeze scheme pins critical nodes, plateaus stay flat either way") {
    ChartGrid g = unit_square(32);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    auto op = CurvatureOperator::mean_curvature();
    ScalarField u(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            double d = 0.6 - std::hypot(g.coord(0, i), g.coord(1, j));
            u.at(i, j) = std::min(d, 0.25);  // flat cap around the center
        }
    for (auto scheme : {DegenerateScheme::Regularized, DegenerateScheme::FreezeDegenerate}) {
        SolverConfig cfg;
        cfg.scheme = scheme;
        ScalarField u1 = step(u, m, op, cfg, 1e-4);
        CHECK(u1.at(g.n[0] / 2, g.n[1] / 2) == 0.25);
    }
}

TEST_CASE("NaN input surfaces as a located blow-up") {
    ChartGrid g = unit_square(16);
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    ScalarField u = circle_field(g, 0.5);
    u.at(3, 4) = std::nan("");
    SolverConfig cfg;
    CHECK_THROWS_AS(step(u, m, CurvatureOperator::mean_curvature(), cfg, 1e-4), BlowUpError);
    Trajectory traj = evolve(u, m, CurvatureOperator::mean_curvature(), cfg);
    CHECK(!traj.ok());
    CHECK(!traj.error->empty());
}

TEST_CASE("max principle check accepts clean runs and catches injected drift") {
    ChartGrid g({-1.0, -M_PI}, {1.0, M_PI}, {32, 32}, {false, true});
    MetricField m = build_metric(ManifoldSpec::euclidean(), unit_square(32));
    SolverConfig cfg;
    cfg.t_end = 0.02;
    cfg.snapshot_every = 0.01;
    // A constant field is the textbook case: extremes frozen exactly.
    Trajectory traj = evolve(ScalarField(unit_square(32), 1.5), m,
                             CurvatureOperator::mean_curvature(), cfg);
    REQUIRE(traj.ok());
    MaxPrincipleReport ok = max_principle_check(traj);
    CHECK(ok.passed);
    CHECK(ok.worst_max_growth <= 1e-12);
    CHECK(ok.worst_min_drop <= 1e-12);

    Trajectory drifted = traj;
    for (double& v : drifted.snapshots.back().values) v += 10.0 * ok.slack + 1e-6;
    MaxPrincipleReport bad = max_principle_check(drifted);
    CHECK(!bad.passed);
    CHECK(bad.worst_max_growth > bad.slack);
}

TEST_CASE("eps_grad defaults to h^2 and can be overridden") {
    ChartGrid g = unit_square(101);
    SolverConfig cfg;
    double h = g.min_spacing();
    CHECK(cfg.effective_eps(g) == doctest::Approx(h * h));
    cfg.eps_grad = 1e-3;
    CHECK(cfg.effective_eps(g) == 1e-3);
}
