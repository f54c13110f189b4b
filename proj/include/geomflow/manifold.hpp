#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geomflow/errors.hpp"
#include "geomflow/grid.hpp"
#include "geomflow/smallmat.hpp"

namespace geomflow {

enum class ManifoldKind { Euclidean, Revolution, Hyperboloid, Sphere };

enum class ProfileKind { OnePlusCos2, Hyperboloid, Constant };

// Profile r(s) of a surface of revolution, with closed-form derivatives.
struct Profile {
    ProfileKind kind = ProfileKind::Constant;
    double c = 1.0;  // Constant only

    double r(double s) const;
    double rp(double s) const;
    double rpp(double s) const;

    // Names accepted by config files: "one_plus_cos2", "hyperboloid",
    // "constant(c)".
    static Profile parse(const std::string& name);
    std::string name() const;
};

struct ManifoldSpec {
    ManifoldKind kind = ManifoldKind::Euclidean;
    Profile profile;       // Revolution / Hyperboloid
    double radius = 1.0;   // Sphere

    static ManifoldSpec euclidean();
    static ManifoldSpec revolution(Profile p);
    static ManifoldSpec hyperboloid();
    static ManifoldSpec sphere(double radius);

    bool is_revolution_like() const {
        return kind == ManifoldKind::Revolution || kind == ManifoldKind::Hyperboloid;
    }

    Mat2 metric_at(const Vec2& x) const;
    // gamma[k](i,j) = Gamma^k_ij, closed form.
    std::array<Mat2, 2> christoffel_at(const Vec2& x) const;
    // 4th-order central differences of the metric; validation cross-check.
    std::array<Mat2, 2> christoffel_fd(const Vec2& x, double h_fd) const;

    // Conservative radius within which exp/transport are trusted.
    double injectivity_budget(const ChartGrid& grid) const;

    std::string name() const;
};

// Per-node metric data: g, its inverse, and Christoffel symbols.
struct NodeMetric {
    Mat2 g = Mat2::identity();
    Mat2 ginv = Mat2::identity();
    std::array<Mat2, 2> gamma{};  // gamma[k](i,j)
};

enum class MetricProvenance { Analytic, FiniteDifference };

struct MetricField {
    ChartGrid grid;
    std::vector<NodeMetric> nodes;
    MetricProvenance provenance = MetricProvenance::Analytic;

    const NodeMetric& at(int i, int j) const { return nodes[grid.index(i, j)]; }
};

// First-order data at a point: covariant components zeta_i and the raised
// vector v^i = g^ij zeta_j.
struct TangentData {
    Vec2 point{0, 0};
    Vec2 zeta{0, 0};
    Vec2 vec{0, 0};
};

NodeMetric node_metric_at(const ManifoldSpec& spec, const Vec2& x);

inline Vec2 raise(const NodeMetric& m, const Vec2& zeta) { return m.ginv * zeta; }
inline Vec2 lower(const NodeMetric& m, const Vec2& v) { return m.g * v; }
inline double norm_sq_cov(const NodeMetric& m, const Vec2& zeta) {
    Vec2 v = m.ginv * zeta;
    return zeta[0] * v[0] + zeta[1] * v[1];
}
inline double norm_sq_vec(const NodeMetric& m, const Vec2& v) {
    Vec2 z = m.g * v;
    return v[0] * z[0] + v[1] * z[1];
}

MetricField build_metric(const ManifoldSpec& spec, const ChartGrid& grid,
                         MetricProvenance prov = MetricProvenance::Analytic);

// Centered first differences (one-sided second-order at non-periodic edges).
TangentData gradient(const ScalarField& u, const MetricField& m, int i, int j);

// H_ij = d_i d_j u - Gamma^k_ij d_k u.
Mat2 covariant_hessian(const ScalarField& u, const MetricField& m, int i, int j);

struct GeodesicState {
    Vec2 x{0, 0};
    Vec2 v{0, 0};
};

// Substep schedule of an integrated geodesic; transport re-integrates the
// joint system along the same schedule so stage values match exactly.
struct GeodesicPath {
    GeodesicState start;
    std::vector<double> dts;
    GeodesicState end;
};

GeodesicState geodesic_step(const ManifoldSpec& spec, const GeodesicState& s,
                            double dt, const ChartGrid& chart);

Vec2 exp_map(const ManifoldSpec& spec, const Vec2& x, const Vec2& v,
             const ChartGrid& chart, GeodesicPath* path_out = nullptr);

// Parallel transport of the vector w along the path; norm-preserving.
Vec2 parallel_transport(const ManifoldSpec& spec, const GeodesicPath& path,
                        const Vec2& w, const ChartGrid& chart);

ScalarField distance_field(const MetricField& m, const std::vector<Vec2>& seeds);

struct SakaiReport {
    int samples = 0;
    double worst_lower_margin = 0.0;  // most negative slack of the lower bound
    double worst_upper_margin = 0.0;  // most negative slack of the upper bound
    double worst_nullspace = 0.0;     // max |D2d(grad d, grad d)|
    double tolerance = 0.0;
    bool passed = false;
};

SakaiReport sakai_bounds_check(const ManifoldSpec& spec, const Vec2& x0, double r,
                               double delta, double Delta, int resolution = 192);

// s_delta / c_delta comparison functions.
double sakai_s(double delta, double t);
double sakai_c(double delta, double t);

}  // namespace geomflow
