#include "geomflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace geomflow {

double AdmissibleF::value(double t) const { return std::pow(t, power); }
double AdmissibleF::deriv(double t) const { return power * std::pow(t, power - 1); }

std::string CurvatureOperator::name() const {
    switch (kind) {
        case OperatorKind::MeanCurvature: return "mce";
        case OperatorKind::GaussPositive: return "gce_plus";
        case OperatorKind::CodimK: return "codim_" + std::to_string(codim);
    }
    return "?";
}

namespace {

void require_symmetric(const Mat2& a) {
    if (std::fabs(a(0, 1) - a(1, 0)) > 1e-12)
        throw NonSymmetricError("jet form A is not symmetric");
}

// Shared evaluation; eps > 0 regularizes every |zeta| denominator.
double eval_core(const CurvatureOperator& op, const Jet& jet, double eps) {
    require_symmetric(jet.a);
    const NodeMetric& m = jet.metric;
    double n2 = norm_sq_cov(m, jet.zeta);
    double nrm = std::sqrt(n2);
    double den = std::sqrt(n2 + eps * eps);
    Mat2 ahat = m.ginv * jet.a;
    Vec2 zvec = raise(m, jet.zeta);
    Vec2 nu{zvec[0] / den, zvec[1] / den};
    Vec2 nub{jet.zeta[0] / den, jet.zeta[1] / den};
    Mat2 proj = Mat2::identity() - outer(nu, nub);
    switch (op.kind) {
        case OperatorKind::MeanCurvature:
            return -(proj * ahat).trace();
        case OperatorKind::GaussPositive: {
            Mat2 b = (proj * ahat).scaled(1.0 / den) + outer(nu, nub);
            auto lam = eigenvalues2(b);
            return -nrm * std::max(lam[0], 0.0) * std::max(lam[1], 0.0);
        }
        case OperatorKind::CodimK: {
            // n = 2 restriction: the single tangential eigenvalue of
            // S A S is its trace (the normal eigenvalue vanishes).
            Mat2 q = proj * ahat * proj;
            return -q.trace();
        }
    }
    return 0.0;
}

}  // namespace

double eval_F(const CurvatureOperator& op, const Jet& jet) {
    double nrm = std::sqrt(norm_sq_cov(jet.metric, jet.zeta));
    if (nrm < op.eps_grad)
        throw DegenerateGradientError("eval_F: |zeta| below eps_grad");
    return eval_core(op, jet, 0.0);
}

double eval_F_regularized(const CurvatureOperator& op, const Jet& jet, double eps) {
    return eval_core(op, jet, eps);
}

double eval_F_from_G(const GFunc& g, const Jet& jet) {
    require_symmetric(jet.a);
    const NodeMetric& m = jet.metric;
    double nrm = std::sqrt(norm_sq_cov(m, jet.zeta));
    if (nrm == 0.0) throw DegenerateGradientError("eval_F_from_G: zero gradient");
    Mat2 ahat = m.ginv * jet.a;
    Vec2 zvec = raise(m, jet.zeta);
    Vec2 nu{zvec[0] / nrm, zvec[1] / nrm};
    Vec2 nub{jet.zeta[0] / nrm, jet.zeta[1] / nrm};
    Mat2 proj = Mat2::identity() - outer(nu, nub);
    return nrm * g(nu, (proj * ahat).scaled(1.0 / nrm));
}

double eval_codim_euclidean(const std::vector<double>& zeta, const std::vector<double>& a,
                            int n, int k) {
    if (k < 1 || k > n - 1) throw std::invalid_argument("codim k must be in [1, n-1]");
    double n2 = 0.0;
    for (double z : zeta) n2 += z * z;
    if (n2 == 0.0) throw DegenerateGradientError("eval_codim_euclidean: zero gradient");
    std::vector<double> s(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s[i * n + j] = (i == j ? 1.0 : 0.0) - zeta[i] * zeta[j] / n2;
    auto mul = [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> r(n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                for (int j = 0; j < n; ++j) r[i * n + j] += x[i * n + l] * y[l * n + j];
        return r;
    };
    std::vector<double> q = mul(mul(s, a), s);
    std::vector<double> ev = jacobi_eigenvalues(q, n);
    std::sort(ev.begin(), ev.end(), [](double x, double y) {
        return std::fabs(x) < std::fabs(y);
    });
    // Drop the trivial zero eigenvalue along zeta, then sum the n-k smallest.
    ev.erase(ev.begin());
    std::sort(ev.begin(), ev.end());
    double sum = 0.0;
    for (int i = 0; i < n - k; ++i) sum += ev[i];
    return -sum;
}

// ---------------------------------------------------------------- checks

namespace {

struct JetSampler {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> u{-1.0, 1.0};

    explicit JetSampler(std::uint64_t seed) : rng(seed) {}

    NodeMetric metric() {
        Mat2 r;
        for (auto& e : r.m) e = u(rng);
        Mat2 g = r.transposed() * r + Mat2::identity().scaled(0.5);
        NodeMetric nm;
        nm.g = g;
        nm.ginv = g.inverse();
        return nm;
    }
    Mat2 sym() {
        Mat2 a;
        a(0, 0) = 2.0 * u(rng);
        a(1, 1) = 2.0 * u(rng);
        a(0, 1) = a(1, 0) = 2.0 * u(rng);
        return a;
    }
    Mat2 psd() {
        Mat2 r;
        for (auto& e : r.m) e = u(rng);
        return r.transposed() * r;
    }
    Jet jet() {
        Jet j;
        j.metric = metric();
        do {
            j.zeta = {u(rng), u(rng)};
        } while (norm_sq_cov(j.metric, j.zeta) < 0.01);
        j.a = sym();
        return j;
    }
};

}  // namespace

std::string PropertyReport::to_json() const {
    std::ostringstream os;
    os << "{\"check\":\"" << check << "\",\"operator\":\"" << op
       << "\",\"trials\":" << trials << ",\"violations\":" << violations
       << ",\"worst\":" << worst << ",\"tolerance\":" << tolerance
       << ",\"passed\":" << (passed() ? "true" : "false") << "}";
    return os.str();
}

PropertyReport check_elliptic(const CurvatureOperator& op, int trials, std::uint64_t seed) {
    PropertyReport rep{"elliptic", op.name(), trials, 0, 0.0, 1e-10};
    JetSampler smp(seed);
    for (int t = 0; t < trials; ++t) {
        Jet j = smp.jet();
        Mat2 s = smp.psd();
        Jet j2 = j;
        j2.a = j.a + s;
        double diff = eval_F(op, j2) - eval_F(op, j);
        if (diff > rep.tolerance) {
            ++rep.violations;
            rep.worst = std::max(rep.worst, diff);
        }
    }
    return rep;
}

PropertyReport check_geometric(const CurvatureOperator& op, int trials, std::uint64_t seed) {
    PropertyReport rep{"geometric", op.name(), trials, 0, 0.0, 1e-8};
    JetSampler smp(seed);
    std::uniform_real_distribution<double> lam_d(0.25, 4.0), mu_d(-3.0, 3.0);
    for (int t = 0; t < trials; ++t) {
        Jet j = smp.jet();
        double lam = lam_d(smp.rng), mu = mu_d(smp.rng);
        Jet j2 = j;
        j2.zeta = {lam * j.zeta[0], lam * j.zeta[1]};
        j2.a = j.a.scaled(lam) + outer(j.zeta, j.zeta).scaled(mu);
        double rhs = lam * eval_F(op, j);
        double err = std::fabs(eval_F(op, j2) - rhs);
        double tol = rep.tolerance * (1.0 + std::fabs(rhs));
        if (err > tol) {
            ++rep.violations;
            rep.worst = std::max(rep.worst, err);
        }
    }
    return rep;
}

PropertyReport check_translation_invariant(const CurvatureOperator& op,
                                           const ManifoldSpec& spec, const ChartGrid& grid,
                                           int trials, std::uint64_t seed) {
    PropertyReport rep{"translation_invariant", op.name(), trials, 0, 0.0, 1e-6};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), u01(0.0, 1.0);
    double budget = spec.injectivity_budget(grid);

    int done = 0, attempts = 0;
    while (done < trials && attempts < 50 * trials) {
        ++attempts;
        // Sample x in the inner part of the chart.
        Vec2 x;
        for (int ax = 0; ax < 2; ++ax) {
            double lo = grid.lo[ax], hi = grid.hi[ax];
            if (!grid.periodic[ax]) {
                double m = 0.25 * (hi - lo);
                lo += m;
                hi -= m;
            }
            x[ax] = lo + u01(rng) * (hi - lo);
        }
        NodeMetric mx = node_metric_at(spec, x);
        Vec2 dir{u(rng), u(rng)};
        double dn = std::sqrt(norm_sq_vec(mx, dir));
        if (dn < 1e-3) continue;
        double len = u01(rng) * std::min(0.3 * budget, 0.2 * (grid.hi[0] - grid.lo[0]));
        Vec2 v{dir[0] / dn * len, dir[1] / dn * len};

        GeodesicPath path;
        Vec2 y;
        try {
            y = exp_map(spec, x, v, grid, &path);
        } catch (const ChartExitError&) {
            continue;
        }
        NodeMetric my = node_metric_at(spec, y);

        Vec2 zeta{u(rng), u(rng)};
        if (norm_sq_cov(mx, zeta) < 0.01) continue;
        Mat2 a;
        a(0, 0) = 2.0 * u(rng);
        a(1, 1) = 2.0 * u(rng);
        a(0, 1) = a(1, 0) = 2.0 * u(rng);

        // L_xy zeta: raise at x, transport, lower at y.
        Vec2 zx = raise(mx, zeta);
        Vec2 zy;
        Vec2 t0, t1;  // transported chart basis
        try {
            zy = parallel_transport(spec, path, zx, grid);
            t0 = parallel_transport(spec, path, {1.0, 0.0}, grid);
            t1 = parallel_transport(spec, path, {0.0, 1.0}, grid);
        } catch (const ChartExitError&) {
            continue;
        }
        Vec2 zeta_y = lower(my, zy);

        // (L_yx A)(e_i, e_j) = A(L_xy e_i, L_xy e_j).
        auto a_of = [&](const Vec2& p, const Vec2& q) {
            return a(0, 0) * p[0] * q[0] + a(0, 1) * p[0] * q[1] +
                   a(1, 0) * p[1] * q[0] + a(1, 1) * p[1] * q[1];
        };
        Mat2 b;
        b(0, 0) = a_of(t0, t0);
        b(1, 1) = a_of(t1, t1);
        b(0, 1) = b(1, 0) = 0.5 * (a_of(t0, t1) + a_of(t1, t0));

        double f_y = eval_F(op, Jet{y, zeta_y, a, my});
        double f_x = eval_F(op, Jet{x, zeta, b, mx});
        double err = std::fabs(f_y - f_x);
        double tol = rep.tolerance * (1.0 + std::fabs(f_x));
        if (err > tol) {
            ++rep.violations;
            rep.worst = std::max(rep.worst, err);
        }
        ++done;
    }
    rep.trials = done;
    return rep;
}

PropertyReport check_f_class(const CurvatureOperator& op) {
    PropertyReport rep{"f_class_decay", op.name(), 0, 0, 0.0, 1e-4};
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    NodeMetric flat;
    double prev = std::numeric_limits<double>::infinity();
    for (int e = 1; e <= 6; ++e) {
        double t = std::pow(10.0, -e);
        double worst = 0.0;
        for (int trial = 0; trial < 16; ++trial) {
            double th = ang(rng);
            Jet j;
            j.metric = flat;
            j.zeta = {t * std::cos(th), t * std::sin(th)};
            for (double sign : {2.0, -2.0}) {
                j.a = Mat2::identity().scaled(sign);
                double val = std::fabs(op.f.deriv(t) / t * eval_core(op, j, 0.0));
                worst = std::max(worst, val);
            }
        }
        ++rep.trials;
        if (worst > prev * (1.0 + 1e-9)) {
            ++rep.violations;  // decay must be monotone along the sequence
            rep.worst = std::max(rep.worst, worst);
        }
        prev = worst;
        if (e == 6 && worst > rep.tolerance) {
            ++rep.violations;
            rep.worst = std::max(rep.worst, worst);
        }
    }
    return rep;
}

}  // namespace geomflow
