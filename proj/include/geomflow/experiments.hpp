#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geomflow/levelsets.hpp"
#include "geomflow/solver.hpp"

namespace geomflow {

struct Scenario {
    std::string name;
    ManifoldSpec manifold;
    ChartGrid grid;
    std::string initial;  // name in the initial-field registry
    CurvatureOperator op;
    SolverConfig solver;
    std::vector<std::string> checks;
    std::map<std::string, double> params;  // check parameters (r0, tolerances...)
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ScenarioReport {
    std::string scenario;
    bool passed = false;
    std::vector<CheckResult> checks;
    std::string error;
    std::vector<std::pair<double, double>> series;  // named per scenario
    std::string series_name;
};

// Named initial fields: "circle_sdf(R)", "equator_sdf", "lat_circle_sdf(s0)",
// "s_coordinate". Unknown names raise ConfigError.
ScalarField make_initial(const std::string& name, const ManifoldSpec& spec,
                         const ChartGrid& grid, const MetricField& m);

// arclength of the meridian between two parallels, int_{s0}^{s1} sqrt(r'^2+1).
double meridian_arc(const ManifoldSpec& spec, double s0, double s1);

const std::vector<std::string>& scenario_names();
Scenario scenario_by_name(const std::string& name);  // ConfigError if unknown

// Evolves, extracts contours, evaluates the scenario's checks, and (when
// output_dir is nonempty) writes fields, contours, time series and a JSON
// report there.
ScenarioReport run_scenario(const Scenario& sc, const std::string& output_dir = "");

// Runs sc from u0 and from theta(u0) and compares zero contours at each
// snapshot. Built-in relabelings: "cube" (r^3), "tanh", "poly" (2r + r^3),
// "identity".
ScenarioReport invariance_test(const Scenario& sc, const std::string& theta);

// Fixed hyperboloid two-front experiment; emits the distance time series.
ScenarioReport hyperboloid_distance_decay(const std::string& output_dir = "");

// Sign pattern of r'/(rv) * sign(s) for a profile over an s range.
struct SignPatternReport {
    std::string profile;
    bool mixed_sign = false;      // both signs occur on s > 0
    bool uniform_sign = false;    // single sign (or zero) everywhere
    double first_positive = 0.0;  // s where the pattern turns positive, if any
    std::vector<std::pair<double, double>> series;  // s -> r'/(rv)*sign(s)
};
SignPatternReport supersolution_sign_test(const std::string& profile_name,
                                          double s_max = 2.0, int samples = 400);

// Discrete viscosity residual probe on two consecutive snapshots.
struct ProbeReport {
    int sampled = 0;
    int violations = 0;
    double tolerance = 0.0;
    double pass_rate = 1.0;
    double worst = 0.0;
};
ProbeReport viscosity_probe(const ScalarField& prev, const ScalarField& next,
                            const MetricField& m, const CurvatureOperator& op,
                            int stride = 2);

// Discrete metric Lipschitz constant per snapshot.
std::vector<std::pair<double, double>> lipschitz_series(const Trajectory& traj,
                                                        const MetricField& m);
ScenarioReport lipschitz_tracking(const Scenario& sc);

// Monotone relabelings used by the invariance machinery.
double apply_theta(const std::string& theta, double r);

struct RunConfig {
    std::optional<std::string> scenario;  // named
    std::optional<Scenario> inline_scenario;
    std::string output_dir = "out";
    int checkpoint_every = 0;  // steps; 0 disables
    std::string log_level = "info";
    std::uint64_t seed = 42;
};

RunConfig parse_run_config(const std::string& path);
Scenario resolve_scenario(const RunConfig& rc);

}  // namespace geomflow
