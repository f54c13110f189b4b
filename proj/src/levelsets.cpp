#include "geomflow/levelsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace geomflow {

std::vector<Vec2> Contour::vertices() const {
    std::vector<Vec2> out;
    for (const auto& ch : chains) {
        std::size_t n = ch.pts.size();
        if (ch.closed && n > 0) --n;  // skip the repeated closing vertex
        for (std::size_t k = 0; k < n; ++k) out.push_back(ch.pts[k]);
    }
    return out;
}

namespace {

// Grid edge id: axis-0 edges go from (i,j) to (i+1,j), axis-1 edges from
// (i,j) to (i,j+1). Indices are wrapped on periodic axes.
struct EdgeKey {
    int axis, i, j;
    bool operator<(const EdgeKey& o) const {
        if (axis != o.axis) return axis < o.axis;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
    bool operator==(const EdgeKey& o) const = default;
};

struct Segment {
    EdgeKey a, b;
};

}  // namespace

Contour extract_contour(const ScalarField& u, double level) {
    const ChartGrid& g = u.grid;
    Contour out;
    out.level = level;
    out.source_time = u.time;

    auto val = [&](int i, int j) { return u.at(g.wrap(0, i), g.wrap(1, j)) - level; };
    auto inside = [&](double v) { return v >= 0.0; };

    int nc0 = g.periodic[0] ? g.n[0] : g.n[0] - 1;
    int nc1 = g.periodic[1] ? g.n[1] : g.n[1] - 1;

    std::map<EdgeKey, Vec2> verts;
    std::vector<Segment> segs;

    auto edge_vertex = [&](int axis, int i, int j) -> EdgeKey {
        EdgeKey k{axis, g.wrap(0, i), g.wrap(1, j)};
        if (verts.count(k)) return k;
        double va = val(i, j);
        double vb = axis == 0 ? val(i + 1, j) : val(i, j + 1);
        double t = va / (va - vb);
        Vec2 p{g.coord(0, i), g.coord(1, j)};
        p[axis] += t * g.spacing(axis);
        verts[k] = p;
        return k;
    };

    for (int i = 0; i < nc0; ++i) {
        for (int j = 0; j < nc1; ++j) {
            double v00 = val(i, j), v10 = val(i + 1, j);
            double v01 = val(i, j + 1), v11 = val(i + 1, j + 1);
            int code = (inside(v00) ? 1 : 0) | (inside(v10) ? 2 : 0) |
                       (inside(v11) ? 4 : 0) | (inside(v01) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            // Cell edges: B = bottom (axis0 at j), T = top (axis0 at j+1),
            // L = left (axis1 at i), R = right (axis1 at i+1).
            auto B = [&] { return edge_vertex(0, i, j); };
            auto T = [&] { return edge_vertex(0, i, j + 1); };
            auto L = [&] { return edge_vertex(1, i, j); };
            auto R = [&] { return edge_vertex(1, i + 1, j); };
            switch (code) {
                case 1: case 14: segs.push_back({B(), L()}); break;
                case 2: case 13: segs.push_back({B(), R()}); break;
                case 4: case 11: segs.push_back({R(), T()}); break;
                case 8: case 7:  segs.push_back({T(), L()}); break;
                case 3: case 12: segs.push_back({L(), R()}); break;
                case 6: case 9:  segs.push_back({B(), T()}); break;
                case 5: case 10: {
                    // Saddle: pair the crossings so the center's sign region
                    // stays connected.
                    bool center_in = inside(0.25 * (v00 + v10 + v01 + v11));
                    bool corners_in = code == 5;  // v00 & v11 inside
                    if (center_in == corners_in) {
                        segs.push_back({B(), R()});
                        segs.push_back({T(), L()});
                    } else {
                        segs.push_back({B(), L()});
                        segs.push_back({T(), R()});
                    }
                    break;
                }
            }
        }
    }

    if (segs.empty()) return out;

    std::map<EdgeKey, std::vector<int>> incident;
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
        incident[segs[s].a].push_back(s);
        incident[segs[s].b].push_back(s);
    }

    std::vector<bool> used(segs.size(), false);
    auto walk = [&](int s0, EdgeKey start) {
        Contour::Chain chain;
        chain.pts.push_back(verts[start]);
        EdgeKey cur = start;
        int s = s0;
        while (true) {
            used[s] = true;
            EdgeKey next = segs[s].a == cur ? segs[s].b : segs[s].a;
            chain.pts.push_back(verts[next]);
            cur = next;
            if (cur == start) {
                chain.closed = true;
                break;
            }
            int nxt = -1;
            for (int cand : incident[cur])
                if (!used[cand]) { nxt = cand; break; }
            if (nxt < 0) break;
            s = nxt;
        }
        return chain;
    };

    // Open chains first (edges with a single incident segment), then loops.
    for (const auto& [key, inc] : incident) {
        if (inc.size() != 1 || used[inc[0]]) continue;
        out.chains.push_back(walk(inc[0], key));
    }
    for (int s = 0; s < static_cast<int>(segs.size()); ++s)
        if (!used[s]) out.chains.push_back(walk(s, segs[s].a));
    return out;
}

ScalarField signed_distance(const ScalarField& u, const MetricField& m) {
    Contour c = extract_contour(u, 0.0);
    if (c.empty()) throw EmptyContourError("signed_distance: field has no zero contour");
    ScalarField d = distance_field(m, c.vertices());
    for (std::size_t id = 0; id < d.values.size(); ++id)
        if (u.values[id] < 0.0) d.values[id] = -d.values[id];
    return d;
}

namespace {

double interp(const ScalarField& f, const Vec2& p) {
    const ChartGrid& g = f.grid;
    double fi = (p[0] - g.lo[0]) / g.spacing(0);
    double fj = (p[1] - g.lo[1]) / g.spacing(1);
    int i0 = static_cast<int>(std::floor(fi));
    int j0 = static_cast<int>(std::floor(fj));
    double ti = fi - i0, tj = fj - j0;
    if (!g.periodic[0]) i0 = std::clamp(i0, 0, g.n[0] - 2);
    if (!g.periodic[1]) j0 = std::clamp(j0, 0, g.n[1] - 2);
    auto v = [&](int di, int dj) { return f.at(g.wrap(0, i0 + di), g.wrap(1, j0 + dj)); };
    return (1 - ti) * (1 - tj) * v(0, 0) + ti * (1 - tj) * v(1, 0) +
           (1 - ti) * tj * v(0, 1) + ti * tj * v(1, 1);
}

}  // namespace

double front_distance(const Contour& c1, const Contour& c2, const MetricField& m,
                      FrontDistanceMode mode) {
    if (c1.empty() || c2.empty())
        throw EmptyContourError("front_distance: empty contour");
    ScalarField d2 = distance_field(m, c2.vertices());
    ScalarField d1 = distance_field(m, c1.vertices());
    double min12 = std::numeric_limits<double>::infinity(), sup12 = 0.0;
    for (const Vec2& p : c1.vertices()) {
        double d = interp(d2, p);
        min12 = std::min(min12, d);
        sup12 = std::max(sup12, d);
    }
    double min21 = std::numeric_limits<double>::infinity(), sup21 = 0.0;
    for (const Vec2& p : c2.vertices()) {
        double d = interp(d1, p);
        min21 = std::min(min21, d);
        sup21 = std::max(sup21, d);
    }
    if (mode == FrontDistanceMode::Min) return std::min(min12, min21);
    return std::max(sup12, sup21);
}

double contour_hausdorff_chart(const Contour& c1, const Contour& c2, const ChartGrid& g) {
    auto pdist = [&](const Vec2& a, const Vec2& b) {
        double dx0 = a[0] - b[0], dx1 = a[1] - b[1];
        if (g.periodic[0]) {
            double len = g.hi[0] - g.lo[0];
            dx0 = std::fabs(dx0);
            dx0 = std::min(dx0, len - dx0);
        }
        if (g.periodic[1]) {
            double len = g.hi[1] - g.lo[1];
            dx1 = std::fabs(dx1);
            dx1 = std::min(dx1, len - dx1);
        }
        return std::hypot(dx0, dx1);
    };
    auto directed = [&](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
        double sup = 0.0;
        for (const Vec2& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec2& q : to) best = std::min(best, pdist(p, q));
            sup = std::max(sup, best);
        }
        return sup;
    };
    auto v1 = c1.vertices(), v2 = c2.vertices();
    if (v1.empty() || v2.empty())
        throw EmptyContourError("contour_hausdorff_chart: empty contour");
    return std::max(directed(v1, v2), directed(v2, v1));
}

double mean_curvature_of_distance(const ManifoldSpec& spec, double s) {
    if (!spec.is_revolution_like())
        throw std::invalid_argument("mean_curvature_of_distance needs a revolution manifold");
    double r = spec.profile.r(s), rp = spec.profile.rp(s);
    double v = std::sqrt(rp * rp + 1.0);
    Jet jet;
    jet.point = {s, 0.0};
    jet.metric = node_metric_at(spec, jet.point);
    jet.zeta = {v, 0.0};  // d_s of the equator signed distance
    jet.a = Mat2{};       // covariant Hessian of d: only the theta-theta entry
    jet.a(1, 1) = r * rp / v;
    CurvatureOperator mce = CurvatureOperator::mean_curvature(1e-12);
    return -eval_F(mce, jet);
}

}  // namespace geomflow
