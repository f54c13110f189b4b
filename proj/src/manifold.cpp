#include "geomflow/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace geomflow {

// ---------------------------------------------------------------- profiles

double Profile::r(double s) const {
    switch (kind) {
        case ProfileKind::OnePlusCos2: {
            double cs = std::cos(s);
            return 1.0 + cs * cs;
        }
        case ProfileKind::Hyperboloid:
            return std::sqrt(1.0 + s * s);
        case ProfileKind::Constant:
            return c;
    }
    return c;
}

double Profile::rp(double s) const {
    switch (kind) {
        case ProfileKind::OnePlusCos2:
            return -std::sin(2.0 * s);
        case ProfileKind::Hyperboloid:
            return s / std::sqrt(1.0 + s * s);
        case ProfileKind::Constant:
            return 0.0;
    }
    return 0.0;
}

double Profile::rpp(double s) const {
    switch (kind) {
        case ProfileKind::OnePlusCos2:
            return -2.0 * std::cos(2.0 * s);
        case ProfileKind::Hyperboloid:
            return std::pow(1.0 + s * s, -1.5);
        case ProfileKind::Constant:
            return 0.0;
    }
    return 0.0;
}

Profile Profile::parse(const std::string& name) {
    if (name == "one_plus_cos2") return {ProfileKind::OnePlusCos2, 0.0};
    if (name == "hyperboloid") return {ProfileKind::Hyperboloid, 0.0};
    if (name.rfind("constant(", 0) == 0 && name.back() == ')') {
        double c = std::stod(name.substr(9, name.size() - 10));
        if (!(c > 0.0)) throw ConfigError("profile constant(c) requires c > 0: " + name);
        return {ProfileKind::Constant, c};
    }
    throw ConfigError("unknown profile name: '" + name + "'");
}

std::string Profile::name() const {
    switch (kind) {
        case ProfileKind::OnePlusCos2: return "one_plus_cos2";
        case ProfileKind::Hyperboloid: return "hyperboloid";
        case ProfileKind::Constant: return "constant(" + std::to_string(c) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- manifolds

ManifoldSpec ManifoldSpec::euclidean() { return {ManifoldKind::Euclidean, {}, 1.0}; }
ManifoldSpec ManifoldSpec::revolution(Profile p) {
    return {ManifoldKind::Revolution, p, 1.0};
}
ManifoldSpec ManifoldSpec::hyperboloid() {
    return {ManifoldKind::Hyperboloid, {ProfileKind::Hyperboloid, 0.0}, 1.0};
}
ManifoldSpec ManifoldSpec::sphere(double radius) {
    if (!(radius > 0.0)) throw ConfigError("sphere radius must be positive");
    return {ManifoldKind::Sphere, {}, radius};
}

std::string ManifoldSpec::name() const {
    switch (kind) {
        case ManifoldKind::Euclidean: return "euclidean";
        case ManifoldKind::Revolution: return "revolution:" + profile.name();
        case ManifoldKind::Hyperboloid: return "hyperboloid";
        case ManifoldKind::Sphere: return "sphere";
    }
    return "?";
}

Mat2 ManifoldSpec::metric_at(const Vec2& x) const {
    switch (kind) {
        case ManifoldKind::Euclidean:
            return Mat2::identity();
        case ManifoldKind::Revolution:
        case ManifoldKind::Hyperboloid: {
            double rp = profile.rp(x[0]);
            double r = profile.r(x[0]);
            return {{rp * rp + 1.0, 0.0, 0.0, r * r}};
        }
        case ManifoldKind::Sphere: {
            double su = std::sin(x[0]);
            return {{radius * radius, 0.0, 0.0, radius * radius * su * su}};
        }
    }
    return Mat2::identity();
}

std::array<Mat2, 2> ManifoldSpec::christoffel_at(const Vec2& x) const {
    std::array<Mat2, 2> gma{};
    switch (kind) {
        case ManifoldKind::Euclidean:
            break;
        case ManifoldKind::Revolution:
        case ManifoldKind::Hyperboloid: {
            double s = x[0];
            double r = profile.r(s), rp = profile.rp(s), rpp = profile.rpp(s);
            double e = rp * rp + 1.0;
            gma[0](0, 0) = rp * rpp / e;
            gma[0](1, 1) = -r * rp / e;
            gma[1](0, 1) = gma[1](1, 0) = rp / r;
            break;
        }
        case ManifoldKind::Sphere: {
            double u = x[0];
            gma[0](1, 1) = -std::sin(u) * std::cos(u);
            gma[1](0, 1) = gma[1](1, 0) = std::cos(u) / std::sin(u);
            break;
        }
    }
    return gma;
}

std::array<Mat2, 2> ManifoldSpec::christoffel_fd(const Vec2& x, double h_fd) const {
    // dg[l](i,j) = d_l g_ij, 4th-order central differences.
    std::array<Mat2, 2> dg{};
    for (int l = 0; l < 2; ++l) {
        Vec2 xp = x, xm = x, xp2 = x, xm2 = x;
        xp[l] += h_fd;
        xm[l] -= h_fd;
        xp2[l] += 2.0 * h_fd;
        xm2[l] -= 2.0 * h_fd;
        Mat2 gp = metric_at(xp), gm = metric_at(xm);
        Mat2 gp2 = metric_at(xp2), gm2 = metric_at(xm2);
        for (int a = 0; a < 4; ++a)
            dg[l].m[a] =
                (-gp2.m[a] + 8.0 * gp.m[a] - 8.0 * gm.m[a] + gm2.m[a]) / (12.0 * h_fd);
    }
    Mat2 ginv = metric_at(x).inverse();
    std::array<Mat2, 2> gma{};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double sum = 0.0;
                for (int l = 0; l < 2; ++l)
                    sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gma[k](i, j) = 0.5 * sum;
            }
    return gma;
}

double ManifoldSpec::injectivity_budget(const ChartGrid& grid) const {
    switch (kind) {
        case ManifoldKind::Euclidean:
            return std::numeric_limits<double>::infinity();
        case ManifoldKind::Sphere:
            return 0.95 * M_PI * radius;
        case ManifoldKind::Revolution:
        case ManifoldKind::Hyperboloid: {
            double rmin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < grid.n[0]; ++i)
                rmin = std::min(rmin, profile.r(grid.coord(0, i)));
            double margin = 0.5 * (grid.hi[0] - grid.lo[0]);
            return std::min(margin, 0.95 * M_PI * rmin);
        }
    }
    return 0.0;
}

NodeMetric node_metric_at(const ManifoldSpec& spec, const Vec2& x) {
    NodeMetric nm;
    nm.g = spec.metric_at(x);
    nm.ginv = nm.g.inverse();
    nm.gamma = spec.christoffel_at(x);
    return nm;
}

MetricField build_metric(const ManifoldSpec& spec, const ChartGrid& grid,
                         MetricProvenance prov) {
    if (spec.is_revolution_like()) {
        double rmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < grid.n[0]; ++i)
            rmin = std::min(rmin, spec.profile.r(grid.coord(0, i)));
        if (rmin < 1e-6)
            throw ProfileTooSmallError("revolution profile r(s) dips below 1e-6 on the grid");
    }
    MetricField mf;
    mf.grid = grid;
    mf.provenance = prov;
    mf.nodes.resize(grid.size());
    double h_fd = grid.min_spacing();
    for (int i = 0; i < grid.n[0]; ++i) {
        for (int j = 0; j < grid.n[1]; ++j) {
            Vec2 x{grid.coord(0, i), grid.coord(1, j)};
            NodeMetric nm;
            nm.g = spec.metric_at(x);
            double tr = nm.g.trace(), det = nm.g.det();
            double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
            double lam_min = tr / 2.0 - disc;
            if (!(lam_min > 1e-12))
                throw NonPositiveDefiniteError("metric not positive definite at node (" +
                                               std::to_string(i) + "," + std::to_string(j) +
                                               ")");
            nm.ginv = nm.g.inverse();
            nm.gamma = prov == MetricProvenance::Analytic ? spec.christoffel_at(x)
                                                          : spec.christoffel_fd(x, h_fd);
            mf.nodes[grid.index(i, j)] = nm;
        }
    }
    return mf;
}

// ---------------------------------------------------------------- stencils

namespace {

struct Stencil {
    int off[4];
    double w[4];
    int m = 0;
};

Stencil d1_stencil(const ChartGrid& g, int ax, int i) {
    double h = g.spacing(ax);
    if (g.interior(ax, i))
        return {{-1, 1}, {-0.5 / h, 0.5 / h}, 2};
    if (i == 0)
        return {{0, 1, 2}, {-1.5 / h, 2.0 / h, -0.5 / h}, 3};
    return {{0, -1, -2}, {1.5 / h, -2.0 / h, 0.5 / h}, 3};
}

Stencil d2_stencil(const ChartGrid& g, int ax, int i) {
    double h2 = g.spacing(ax) * g.spacing(ax);
    if (g.interior(ax, i))
        return {{-1, 0, 1}, {1.0 / h2, -2.0 / h2, 1.0 / h2}, 3};
    if (i == 0)
        return {{0, 1, 2, 3}, {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2}, 4};
    return {{0, -1, -2, -3}, {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2}, 4};
}

double apply1(const ScalarField& u, const Stencil& st, int ax, int i, int j) {
    const ChartGrid& g = u.grid;
    double acc = 0.0;
    for (int k = 0; k < st.m; ++k) {
        int ii = ax == 0 ? g.wrap(0, i + st.off[k]) : i;
        int jj = ax == 1 ? g.wrap(1, j + st.off[k]) : j;
        acc += st.w[k] * u.at(ii, jj);
    }
    return acc;
}

}  // namespace

TangentData gradient(const ScalarField& u, const MetricField& m, int i, int j) {
    const ChartGrid& g = u.grid;
    TangentData td;
    td.point = {g.coord(0, i), g.coord(1, j)};
    td.zeta = {apply1(u, d1_stencil(g, 0, i), 0, i, j),
               apply1(u, d1_stencil(g, 1, j), 1, i, j)};
    td.vec = raise(m.at(i, j), td.zeta);
    return td;
}

Mat2 covariant_hessian(const ScalarField& u, const MetricField& m, int i, int j) {
    const ChartGrid& g = u.grid;
    double dss = apply1(u, d2_stencil(g, 0, i), 0, i, j);
    double dtt = apply1(u, d2_stencil(g, 1, j), 1, i, j);
    // Mixed derivative as the tensor product of the two 1-D stencils.
    Stencil s0 = d1_stencil(g, 0, i), s1 = d1_stencil(g, 1, j);
    double dst = 0.0;
    for (int a = 0; a < s0.m; ++a)
        for (int b = 0; b < s1.m; ++b)
            dst += s0.w[a] * s1.w[b] *
                   u.at(g.wrap(0, i + s0.off[a]), g.wrap(1, j + s1.off[b]));
    const NodeMetric& nm = m.at(i, j);
    Vec2 du{apply1(u, d1_stencil(g, 0, i), 0, i, j),
            apply1(u, d1_stencil(g, 1, j), 1, i, j)};
    Mat2 h;
    h(0, 0) = dss - nm.gamma[0](0, 0) * du[0] - nm.gamma[1](0, 0) * du[1];
    h(1, 1) = dtt - nm.gamma[0](1, 1) * du[0] - nm.gamma[1](1, 1) * du[1];
    h(0, 1) = h(1, 0) = dst - nm.gamma[0](0, 1) * du[0] - nm.gamma[1](0, 1) * du[1];
    return h;
}

// ---------------------------------------------------------------- geodesics

namespace {

void geodesic_rhs(const ManifoldSpec& spec, const GeodesicState& s, Vec2& dx, Vec2& dv) {
    auto gma = spec.christoffel_at(s.x);
    dx = s.v;
    for (int k = 0; k < 2; ++k) {
        double acc = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) acc += gma[k](i, j) * s.v[i] * s.v[j];
        dv[k] = -acc;
    }
}

void enforce_chart(const ChartGrid& chart, Vec2& x) {
    for (int ax = 0; ax < 2; ++ax) {
        if (chart.periodic[ax]) {
            double len = chart.hi[ax] - chart.lo[ax];
            while (x[ax] >= chart.hi[ax]) x[ax] -= len;
            while (x[ax] < chart.lo[ax]) x[ax] += len;
        } else if (x[ax] < chart.lo[ax] || x[ax] > chart.hi[ax]) {
            throw ChartExitError("geodesic left the chart on axis " + std::to_string(ax));
        }
    }
}

}  // namespace

GeodesicState geodesic_step(const ManifoldSpec& spec, const GeodesicState& s, double dt,
                            const ChartGrid& chart) {
    Vec2 k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    geodesic_rhs(spec, s, k1x, k1v);
    GeodesicState s2{{s.x[0] + 0.5 * dt * k1x[0], s.x[1] + 0.5 * dt * k1x[1]},
                     {s.v[0] + 0.5 * dt * k1v[0], s.v[1] + 0.5 * dt * k1v[1]}};
    geodesic_rhs(spec, s2, k2x, k2v);
    GeodesicState s3{{s.x[0] + 0.5 * dt * k2x[0], s.x[1] + 0.5 * dt * k2x[1]},
                     {s.v[0] + 0.5 * dt * k2v[0], s.v[1] + 0.5 * dt * k2v[1]}};
    geodesic_rhs(spec, s3, k3x, k3v);
    GeodesicState s4{{s.x[0] + dt * k3x[0], s.x[1] + dt * k3x[1]},
                     {s.v[0] + dt * k3v[0], s.v[1] + dt * k3v[1]}};
    geodesic_rhs(spec, s4, k4x, k4v);
    GeodesicState out;
    for (int a = 0; a < 2; ++a) {
        out.x[a] = s.x[a] + dt / 6.0 * (k1x[a] + 2.0 * k2x[a] + 2.0 * k3x[a] + k4x[a]);
        out.v[a] = s.v[a] + dt / 6.0 * (k1v[a] + 2.0 * k2v[a] + 2.0 * k3v[a] + k4v[a]);
    }
    enforce_chart(chart, out.x);
    return out;
}

Vec2 exp_map(const ManifoldSpec& spec, const Vec2& x, const Vec2& v, const ChartGrid& chart,
             GeodesicPath* path_out) {
    NodeMetric nm = node_metric_at(spec, x);
    double speed = std::sqrt(norm_sq_vec(nm, v));
    if (speed == 0.0) {
        if (path_out) *path_out = {{x, v}, {}, {x, v}};
        return x;
    }
    // Affine parameter runs over [0,1]; per-step arc target min(h)/4.
    double dt_base = chart.min_spacing() / (4.0 * speed);
    GeodesicState s{x, v};
    std::vector<double> dts;
    double t = 0.0;
    while (t < 1.0 - 1e-15) {
        double dt = std::min(dt_base, 1.0 - t);
        s = geodesic_step(spec, s, dt, chart);
        dts.push_back(dt);
        t += dt;
    }
    if (path_out) *path_out = {{x, v}, std::move(dts), s};
    return s.x;
}

Vec2 parallel_transport(const ManifoldSpec& spec, const GeodesicPath& path, const Vec2& w,
                        const ChartGrid& chart) {
    GeodesicState s = path.start;
    Vec2 wt = w;
    auto rhs_w = [&](const GeodesicState& st, const Vec2& ww) {
        auto gma = spec.christoffel_at(st.x);
        Vec2 dw;
        for (int k = 0; k < 2; ++k) {
            double acc = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) acc += gma[k](i, j) * st.v[i] * ww[j];
            dw[k] = -acc;
        }
        return dw;
    };
    for (double dt : path.dts) {
        // RK4 on the joint system (x, v, w); x/v stages match geodesic_step.
        Vec2 k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
        geodesic_rhs(spec, s, k1x, k1v);
        Vec2 k1w = rhs_w(s, wt);
        GeodesicState s2{{s.x[0] + 0.5 * dt * k1x[0], s.x[1] + 0.5 * dt * k1x[1]},
                         {s.v[0] + 0.5 * dt * k1v[0], s.v[1] + 0.5 * dt * k1v[1]}};
        Vec2 w2{wt[0] + 0.5 * dt * k1w[0], wt[1] + 0.5 * dt * k1w[1]};
        geodesic_rhs(spec, s2, k2x, k2v);
        Vec2 k2w = rhs_w(s2, w2);
        GeodesicState s3{{s.x[0] + 0.5 * dt * k2x[0], s.x[1] + 0.5 * dt * k2x[1]},
                         {s.v[0] + 0.5 * dt * k2v[0], s.v[1] + 0.5 * dt * k2v[1]}};
        Vec2 w3{wt[0] + 0.5 * dt * k2w[0], wt[1] + 0.5 * dt * k2w[1]};
        geodesic_rhs(spec, s3, k3x, k3v);
        Vec2 k3w = rhs_w(s3, w3);
        GeodesicState s4{{s.x[0] + dt * k3x[0], s.x[1] + dt * k3x[1]},
                         {s.v[0] + dt * k3v[0], s.v[1] + dt * k3v[1]}};
        Vec2 w4{wt[0] + dt * k3w[0], wt[1] + dt * k3w[1]};
        geodesic_rhs(spec, s4, k4x, k4v);
        Vec2 k4w = rhs_w(s4, w4);
        for (int a = 0; a < 2; ++a) {
            s.x[a] += dt / 6.0 * (k1x[a] + 2.0 * k2x[a] + 2.0 * k3x[a] + k4x[a]);
            s.v[a] += dt / 6.0 * (k1v[a] + 2.0 * k2v[a] + 2.0 * k3v[a] + k4v[a]);
            wt[a] += dt / 6.0 * (k1w[a] + 2.0 * k2w[a] + 2.0 * k3w[a] + k4w[a]);
        }
        enforce_chart(chart, s.x);
    }
    return wt;
}

// ---------------------------------------------------------------- distance

ScalarField distance_field(const MetricField& m, const std::vector<Vec2>& seeds) {
    if (seeds.empty()) throw EmptySeedsError("distance_field: empty seed set");
    const ChartGrid& g = m.grid;
    const double inf = std::numeric_limits<double>::infinity();
    ScalarField d(g, inf);

    auto seg_len = [&](const Mat2& ga, const Mat2& gb, double dx0, double dx1) {
        // Midpoint-rule metric length of a straight chart segment; the
        // midpoint metric is approximated by the endpoint average.
        double g00 = 0.5 * (ga(0, 0) + gb(0, 0));
        double g01 = 0.5 * (ga(0, 1) + gb(0, 1));
        double g11 = 0.5 * (ga(1, 1) + gb(1, 1));
        return std::sqrt(g00 * dx0 * dx0 + 2.0 * g01 * dx0 * dx1 + g11 * dx1 * dx1);
    };

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;

    for (const Vec2& s : seeds) {
        double fi = (s[0] - g.lo[0]) / g.spacing(0);
        double fj = (s[1] - g.lo[1]) / g.spacing(1);
        int i0 = static_cast<int>(std::floor(fi));
        int j0 = static_cast<int>(std::floor(fj));
        for (int di = 0; di <= 1; ++di) {
            for (int dj = 0; dj <= 1; ++dj) {
                int i = i0 + di, j = j0 + dj;
                if (g.periodic[0]) i = g.wrap(0, i);
                if (g.periodic[1]) j = g.wrap(1, j);
                if (i < 0 || i >= g.n[0] || j < 0 || j >= g.n[1]) continue;
                Vec2 node{g.coord(0, i0 + di), g.coord(1, j0 + dj)};
                const Mat2& gn = m.at(i, j).g;
                double w = seg_len(gn, gn, node[0] - s[0], node[1] - s[1]);
                std::size_t id = g.index(i, j);
                if (w < d.values[id]) {
                    d.values[id] = w;
                    pq.push({w, id});
                }
            }
        }
    }
    if (pq.empty()) throw EmptySeedsError("distance_field: no seed lies inside the grid");

    const int offs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                            {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    while (!pq.empty()) {
        auto [dist, id] = pq.top();
        pq.pop();
        if (dist > d.values[id]) continue;
        int i = static_cast<int>(id) / g.n[1];
        int j = static_cast<int>(id) % g.n[1];
        for (const auto& o : offs) {
            int ni = i + o[0], nj = j + o[1];
            if (g.periodic[0]) ni = g.wrap(0, ni);
            if (g.periodic[1]) nj = g.wrap(1, nj);
            if (ni < 0 || ni >= g.n[0] || nj < 0 || nj >= g.n[1]) continue;
            double w = seg_len(m.at(i, j).g, m.at(ni, nj).g, o[0] * g.spacing(0),
                               o[1] * g.spacing(1));
            std::size_t nid = g.index(ni, nj);
            double cand = dist + w;
            if (cand < d.values[nid]) {
                d.values[nid] = cand;
                pq.push({cand, nid});
            }
        }
    }
    return d;
}

// ---------------------------------------------------------------- Sakai

double sakai_s(double delta, double t) {
    if (delta > 0.0) return std::sin(std::sqrt(delta) * t) / std::sqrt(delta);
    if (delta < 0.0) return std::sinh(std::sqrt(-delta) * t) / std::sqrt(-delta);
    return t;
}

double sakai_c(double delta, double t) {
    if (delta > 0.0) return std::cos(std::sqrt(delta) * t);
    if (delta < 0.0) return std::cosh(std::sqrt(-delta) * t);
    return 1.0;
}

SakaiReport sakai_bounds_check(const ManifoldSpec& spec, const Vec2& x0, double r,
                               double delta, double Delta, int resolution) {
    double budget = spec.kind == ManifoldKind::Sphere
                        ? 0.95 * M_PI * spec.radius
                        : std::numeric_limits<double>::infinity();
    double cap = Delta > 0.0 ? M_PI / (2.0 * std::sqrt(Delta)) : budget;
    if (!(r > 0.0) || r >= std::min(budget, cap))
        throw RadiusTooLargeError("sakai_bounds_check: radius outside the valid range");

    // Closed-form distance to x0, sampled on a local chart grid. Only the
    // manifolds with a closed form are supported here.
    auto dist = [&](const Vec2& x) -> double {
        switch (spec.kind) {
            case ManifoldKind::Euclidean:
                return std::hypot(x[0] - x0[0], x[1] - x0[1]);
            case ManifoldKind::Sphere: {
                double cd = std::cos(x[0]) * std::cos(x0[0]) +
                            std::sin(x[0]) * std::sin(x0[0]) * std::cos(x[1] - x0[1]);
                cd = std::clamp(cd, -1.0, 1.0);
                return spec.radius * std::acos(cd);
            }
            default:
                throw std::invalid_argument(
                    "sakai_bounds_check: closed-form distance available only for "
                    "euclidean and sphere");
        }
    };

    double ext0 = r, ext1 = r;
    if (spec.kind == ManifoldKind::Sphere) {
        ext0 = 1.1 * r / spec.radius;
        ext1 = 1.1 * r / (spec.radius * std::max(0.2, std::sin(x0[0])));
    } else {
        ext0 = ext1 = 1.1 * r;
    }
    ChartGrid local({x0[0] - ext0, x0[1] - ext1}, {x0[0] + ext0, x0[1] + ext1},
                    {resolution, resolution});
    MetricField mf = build_metric(spec, local);
    ScalarField d(local);
    for (int i = 0; i < local.n[0]; ++i)
        for (int j = 0; j < local.n[1]; ++j)
            d.at(i, j) = dist({local.coord(0, i), local.coord(1, j)});

    SakaiReport rep;
    rep.tolerance = 5.0 * local.min_spacing();
    rep.worst_lower_margin = rep.worst_upper_margin = std::numeric_limits<double>::infinity();
    for (int i = 2; i < local.n[0] - 2; ++i) {
        for (int j = 2; j < local.n[1] - 2; ++j) {
            double dv = d.at(i, j);
            if (dv < 0.25 * r || dv > 0.95 * r) continue;
            const NodeMetric& nm = mf.at(i, j);
            TangentData grad = gradient(d, mf, i, j);
            Mat2 h = covariant_hessian(d, mf, i, j);
            // v with zeta(v)=0 is tangent to the distance sphere.
            Vec2 v{-grad.zeta[1], grad.zeta[0]};
            double vv = norm_sq_vec(nm, v);
            if (vv < 1e-14) continue;
            double hvv = (h(0, 0) * v[0] * v[0] + 2.0 * h(0, 1) * v[0] * v[1] +
                          h(1, 1) * v[1] * v[1]) /
                         vv;
            double lo = sakai_c(Delta, dv) / sakai_s(Delta, dv);
            double hi = sakai_c(delta, dv) / sakai_s(delta, dv);
            rep.worst_lower_margin = std::min(rep.worst_lower_margin, hvv - lo);
            rep.worst_upper_margin = std::min(rep.worst_upper_margin, hi - hvv);
            double gg = norm_sq_vec(nm, grad.vec);
            if (gg > 1e-14) {
                double hgg = std::fabs(h(0, 0) * grad.vec[0] * grad.vec[0] +
                                       2.0 * h(0, 1) * grad.vec[0] * grad.vec[1] +
                                       h(1, 1) * grad.vec[1] * grad.vec[1]) /
                             gg;
                rep.worst_nullspace = std::max(rep.worst_nullspace, hgg);
            }
            ++rep.samples;
        }
    }
    rep.passed = rep.samples > 0 && rep.worst_lower_margin > -rep.tolerance &&
                 rep.worst_upper_margin > -rep.tolerance &&
                 rep.worst_nullspace <= rep.tolerance;
    return rep;
}

}  // namespace geomflow
