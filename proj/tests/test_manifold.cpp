#include <doctest.h>

#include <cmath>

#include "geomflow/manifold.hpp"

using namespace geomflow;

namespace {

// Chart (u, theta) <-> unit-sphere 3-vector helpers for the holonomy oracle.
std::array<double, 3> sphere_point(double u, double th) {
    return {std::sin(u) * std::cos(th), std::sin(u) * std::sin(th), std::cos(u)};
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<double, 3> normalize3(std::array<double, 3> v) {
    double n = std::sqrt(dot3(v, v));
    for (double& x : v) x /= n;
    return v;
}

// Initial chart velocity of the great circle from p to q, scaled so that
// exp(p, v) = q.
Vec2 great_circle_velocity(const Vec2& p, const Vec2& q) {
    auto P = sphere_point(p[0], p[1]);
    auto Q = sphere_point(q[0], q[1]);
    double ang = std::acos(std::clamp(dot3(P, Q), -1.0, 1.0));
    std::array<double, 3> w{};
    for (int i = 0; i < 3; ++i) w[i] = Q[i] - dot3(P, Q) * P[i];
    w = normalize3(w);
    for (double& x : w) x *= ang;
    double u = p[0], th = p[1];
    std::array<double, 3> eu = {std::cos(u) * std::cos(th), std::cos(u) * std::sin(th),
                                -std::sin(u)};
    std::array<double, 3> eth = {-std::sin(u) * std::sin(th), std::sin(u) * std::cos(th),
                                 0.0};
    double su = std::sin(u);
    return {dot3(w, eu), dot3(w, eth) / (su * su)};
}

// Interior angle of the spherical triangle at vertex a (other vertices b, c).
double vertex_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    auto A = sphere_point(a[0], a[1]);
    auto B = sphere_point(b[0], b[1]);
    auto C = sphere_point(c[0], c[1]);
    std::array<double, 3> tb{}, tc{};
    for (int i = 0; i < 3; ++i) {
        tb[i] = B[i] - dot3(A, B) * A[i];
        tc[i] = C[i] - dot3(A, C) * A[i];
    }
    tb = normalize3(tb);
    tc = normalize3(tc);
    return std::acos(std::clamp(dot3(tb, tc), -1.0, 1.0));
}

}  // namespace

TEST_CASE("profile closed-form derivatives match central differences") {
    for (const char* name : {"one_plus_cos2", "hyperboloid", "constant(1.5)"}) {
        Profile p = Profile::parse(name);
        double h = 1e-5;
        for (double s : {-1.3, -0.4, 0.0, 0.7, 1.9}) {
            double rp_fd = (p.r(s + h) - p.r(s - h)) / (2 * h);
            double rpp_fd = (p.r(s + h) - 2 * p.r(s) + p.r(s - h)) / (h * h);
            CHECK(p.rp(s) == doctest::Approx(rp_fd).epsilon(1e-8));
            CHECK(p.rpp(s) == doctest::Approx(rpp_fd).epsilon(2e-5));
        }
    }
}

TEST_CASE("profile parse accepts known names and rejects junk") {
    CHECK(Profile::parse("one_plus_cos2").r(0.0) == doctest::Approx(2.0));
    CHECK(Profile::parse("hyperboloid").r(1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(Profile::parse("constant(2.5)").r(3.0) == doctest::Approx(2.5));
    CHECK_THROWS_AS(Profile::parse("wobbly"), ConfigError);
    CHECK_THROWS_AS(Profile::parse("constant(-1)"), ConfigError);
}

TEST_CASE("revolution metric is diag(r'^2+1, r^2)") {
    ManifoldSpec spec = ManifoldSpec::revolution(Profile::parse("one_plus_cos2"));
    for (double s : {-1.0, 0.3, 1.2}) {
        Mat2 g = spec.metric_at({s, 0.4});
        double rp = spec.profile.rp(s), r = spec.profile.r(s);
        CHECK(g(0, 0) == doctest::Approx(rp * rp + 1.0));
        CHECK(g(1, 1) == doctest::Approx(r * r));
        CHECK(g(0, 1) == 0.0);
    }
}

TEST_CASE("sphere metric is diag(R^2, R^2 sin^2 u)") {
    ManifoldSpec spec = ManifoldSpec::sphere(2.0);
    Mat2 g = spec.metric_at({0.8, 1.1});
    CHECK(g(0, 0) == doctest::Approx(4.0));
    CHECK(g(1, 1) == doctest::Approx(4.0 * std::sin(0.8) * std::sin(0.8)));
}

TEST_CASE("closed-form Christoffels agree with metric finite differences") {
    std::vector<ManifoldSpec> specs = {
        ManifoldSpec::revolution(Profile::parse("one_plus_cos2")),
        ManifoldSpec::hyperboloid(), ManifoldSpec::sphere(1.3)};
    for (const ManifoldSpec& spec : specs) {
        for (Vec2 x : {Vec2{0.9, 0.2}, Vec2{1.4, -0.7}}) {
            auto an = spec.christoffel_at(x);
            auto fd = spec.christoffel_fd(x, 1e-3);
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        CHECK(an[k](i, j) == doctest::Approx(fd[k](i, j)).epsilon(1e-8));
        }
    }
}

TEST_CASE("sphere Christoffels match cot/sin-cos closed forms") {
    ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    double u = 0.9;
    auto gam = spec.christoffel_at({u, 0.0});
    CHECK(gam[0](1, 1) == doctest::Approx(-std::sin(u) * std::cos(u)));
    CHECK(gam[1](0, 1) == doctest::Approx(std::cos(u) / std::sin(u)));
    CHECK(gam[0](0, 0) == doctest::Approx(0.0));
}

TEST_CASE("build_metric rejects degenerate geometry") {
    // Sphere chart touching the pole: g_{theta theta} -> 0.
    ChartGrid polar({0.0, -M_PI}, {1.0, M_PI}, {16, 16}, {false, true});
    CHECK_THROWS_AS(build_metric(ManifoldSpec::sphere(1.0), polar),
                    NonPositiveDefiniteError);
    ChartGrid g({-1.0, -1.0}, {1.0, 1.0}, {16, 16});
    CHECK_THROWS_AS(
        build_metric(ManifoldSpec::revolution(Profile::parse("constant(1e-9)")), g),
        ProfileTooSmallError);
}

TEST_CASE("finite-difference metric provenance reproduces analytic Christoffels") {
    ChartGrid g({0.5, -1.0}, {2.0, 1.0}, {12, 12});
    MetricField an = build_metric(ManifoldSpec::hyperboloid(), g);
    MetricField fd = build_metric(ManifoldSpec::hyperboloid(), g,
                                  MetricProvenance::FiniteDifference);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < 2; ++k)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        CHECK(an.at(i, j).gamma[k](a, b) ==
                              doctest::Approx(fd.at(i, j).gamma[k](a, b)).epsilon(1e-4));
}

TEST_CASE("gradient and covariant Hessian are exact on quadratics (flat chart)") {
    ChartGrid g({-1.0, -1.0}, {1.0, 1.0}, {33, 33});
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    ScalarField u(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            double x = g.coord(0, i), y = g.coord(1, j);
            u.at(i, j) = x * x + 3.0 * x * y - 2.0 * y * y + 0.5 * x;
        }
    for (auto [i, j] : {std::pair{16, 16}, std::pair{0, 5}, std::pair{32, 20}, std::pair{7, 0}}) {
        double x = g.coord(0, i), y = g.coord(1, j);
        TangentData td = gradient(u, m, i, j);
        CHECK(td.zeta[0] == doctest::Approx(2 * x + 3 * y + 0.5).epsilon(1e-10));
        CHECK(td.zeta[1] == doctest::Approx(3 * x - 4 * y).epsilon(1e-10));
        Mat2 h = covariant_hessian(u, m, i, j);
        CHECK(h(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(h(0, 1) == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(h(1, 1) == doctest::Approx(-4.0).epsilon(1e-9));
    }
}

TEST_CASE("covariant Hessian picks up the Christoffel correction") {
    // u = coordinate u on the sphere: dd u = 0, so H_ij = -Gamma^0_ij du/du.
    ChartGrid g({0.5, -M_PI}, {M_PI - 0.5, M_PI}, {64, 64}, {false, true});
    MetricField m = build_metric(ManifoldSpec::sphere(1.0), g);
    ScalarField f(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) f.at(i, j) = g.coord(0, i);
    int i = 20, j = 30;
    double uu = g.coord(0, i);
    Mat2 h = covariant_hessian(f, m, i, j);
    CHECK(h(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(h(1, 1) == doctest::Approx(std::sin(uu) * std::cos(uu)).epsilon(1e-9));
}

TEST_CASE("Euclidean exp map is a straight line") {
    ChartGrid g({-1.0, -1.0}, {1.0, 1.0}, {16, 16});
    Vec2 y = exp_map(ManifoldSpec::euclidean(), {0.1, -0.2}, {0.3, 0.5}, g);
    CHECK(y[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("sphere geodesics hit great-circle targets and preserve speed") {
    ChartGrid g({0.2, -M_PI}, {M_PI - 0.2, M_PI}, {64, 64}, {false, true});
    ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    Vec2 a{1.2, 0.2}, b{1.3, 1.0};
    GeodesicPath path;
    Vec2 hit = exp_map(spec, a, great_circle_velocity(a, b), g, &path);
    CHECK(hit[0] == doctest::Approx(b[0]).epsilon(1e-7));
    CHECK(hit[1] == doctest::Approx(b[1]).epsilon(1e-7));
    double v0 = norm_sq_vec(node_metric_at(spec, path.start.x), path.start.v);
    double v1 = norm_sq_vec(node_metric_at(spec, path.end.x), path.end.v);
    CHECK(v0 == doctest::Approx(v1).epsilon(1e-9));
}

TEST_CASE("exp map refuses to leave the chart") {
    ChartGrid g({-1.0, -1.0}, {1.0, 1.0}, {16, 16});
    CHECK_THROWS_AS(exp_map(ManifoldSpec::euclidean(), {0.9, 0.0}, {5.0, 0.0}, g),
                    ChartExitError);
}

TEST_CASE("holonomy around a geodesic triangle equals the spherical excess") {
    ChartGrid g({0.2, -M_PI}, {M_PI - 0.2, M_PI}, {64, 64}, {false, true});
    ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    Vec2 A{1.2, 0.2}, B{1.3, 1.0}, C{0.7, 0.6};
    double excess = vertex_angle(A, B, C) + vertex_angle(B, C, A) +
                    vertex_angle(C, A, B) - M_PI;
    REQUIRE(excess > 0.01);  // nondegenerate triangle

    Vec2 w = great_circle_velocity(A, B);  // transport the initial side tangent
    Vec2 w0 = w;
    double n0 = norm_sq_vec(node_metric_at(spec, A), w0);
    for (auto [p, q] : {std::pair{A, B}, std::pair{B, C}, std::pair{C, A}}) {
        GeodesicPath path;
        exp_map(spec, p, great_circle_velocity(p, q), g, &path);
        w = parallel_transport(spec, path, w, g);
    }
    double n1 = norm_sq_vec(node_metric_at(spec, A), w);
    CHECK(n1 == doctest::Approx(n0).epsilon(1e-8));
    NodeMetric mA = node_metric_at(spec, A);
    double cosang = (w0[0] * (mA.g * w)[0] + w0[1] * (mA.g * w)[1]) / std::sqrt(n0 * n1);
    double angle = std::acos(std::clamp(cosang, -1.0, 1.0));
    CHECK(angle == doctest::Approx(excess).epsilon(1e-3));
}

TEST_CASE("distance field matches |x| up to 8-neighbor metrication error") {
    ChartGrid g({-1.0, -1.0}, {1.0, 1.0}, {81, 81});
    MetricField m = build_metric(ManifoldSpec::euclidean(), g);
    ScalarField d = distance_field(m, {{0.0, 0.0}});
    double h = g.min_spacing();
    for (auto [i, j] : {std::pair{60, 40}, std::pair{70, 65}, std::pair{10, 55}}) {
        double exact = std::hypot(g.coord(0, i), g.coord(1, j));
        CHECK(d.at(i, j) >= exact - 2.5 * h);
        CHECK(d.at(i, j) <= exact * 1.085 + 2.5 * h);  // sec(pi/8) overshoot cap
    }
    CHECK_THROWS_AS(distance_field(m, {}), EmptySeedsError);
}

TEST_CASE("sphere distance field tracks the great-circle distance") {
    ChartGrid g({0.4, -M_PI}, {M_PI - 0.4, M_PI}, {96, 96}, {false, true});
    MetricField m = build_metric(ManifoldSpec::sphere(1.0), g);
    Vec2 seed{M_PI / 2, 0.0};
    ScalarField d = distance_field(m, {seed});
    auto P = sphere_point(seed[0], seed[1]);
    for (auto [i, j] : {std::pair{48, 20}, std::pair{30, 60}}) {
        auto Q = sphere_point(g.coord(0, i), g.coord(1, j));
        double exact = std::acos(std::clamp(dot3(P, Q), -1.0, 1.0));
        CHECK(d.at(i, j) == doctest::Approx(exact).epsilon(0.1));
    }
}

TEST_CASE("sakai comparison functions reduce to sin, sinh and linear branches") {
    CHECK(sakai_s(1.0, 0.7) == doctest::Approx(std::sin(0.7)));
    CHECK(sakai_c(1.0, 0.7) == doctest::Approx(std::cos(0.7)));
    CHECK(sakai_s(0.0, 0.7) == doctest::Approx(0.7));
    CHECK(sakai_c(0.0, 0.7) == doctest::Approx(1.0));
    CHECK(sakai_s(-4.0, 0.3) == doctest::Approx(std::sinh(0.6) / 2.0));
    CHECK(sakai_c(-4.0, 0.3) == doctest::Approx(std::cosh(0.6)));
    // delta = Delta = 1: both Hessian bounds collapse to cot(d).
    for (double d : {0.2, 0.5, 1.0})
        CHECK(sakai_c(1.0, d) / sakai_s(1.0, d) ==
              doctest::Approx(1.0 / std::tan(d)).epsilon(1e-12));
}

TEST_CASE("sakai bounds hold for flat and round geometry") {
    SakaiReport flat = sakai_bounds_check(ManifoldSpec::euclidean(), {0.0, 0.0}, 0.5,
                                          0.0, 0.0);
    CHECK(flat.passed);
    CHECK(flat.samples > 0);
    SakaiReport round = sakai_bounds_check(ManifoldSpec::sphere(1.0), {M_PI / 2, 0.0},
                                           0.8, 1.0, 1.0);
    CHECK(round.passed);
    CHECK(round.worst_nullspace <= round.tolerance);
}

TEST_CASE("sakai check validates its radius against the injectivity budget") {
    CHECK_THROWS_AS(sakai_bounds_check(ManifoldSpec::sphere(1.0), {M_PI / 2, 0.0}, 50.0,
                                       1.0, 1.0),
                    RadiusTooLargeError);
}

TEST_CASE("injectivity budget orders as flat > sphere-with-large-R shrinking") {
    ChartGrid g({-1.0, -1.0}, {1.0, 1.0}, {16, 16});
    CHECK(ManifoldSpec::euclidean().injectivity_budget(g) >
          ManifoldSpec::sphere(0.5).injectivity_budget(g));
    CHECK(ManifoldSpec::sphere(0.5).injectivity_budget(g) ==
          doctest::Approx(0.95 * M_PI * 0.5));
}
