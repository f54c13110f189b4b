#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geomflow/manifold.hpp"
#include "geomflow/smallmat.hpp"

namespace geomflow {

// Second-order data of a function at a point: covector zeta and symmetric
// bilinear form A, both in covariant chart components, plus the metric data
// used for index raising.
struct Jet {
    Vec2 point{0, 0};
    Vec2 zeta{0, 0};
    Mat2 a{};  // must be symmetric
    NodeMetric metric{};
};

enum class OperatorKind { MeanCurvature, GaussPositive, CodimK };

// Admissible f from the operator's test-function class; the two built-ins
// are powers t^4 and t^{2n}.
struct AdmissibleF {
    int power = 4;
    double value(double t) const;
    double deriv(double t) const;
};

struct CurvatureOperator {
    OperatorKind kind = OperatorKind::MeanCurvature;
    int codim = 1;           // CodimK only; 1 <= k <= n-1
    double eps_grad = 1e-6;  // singular-branch threshold for eval_F
    AdmissibleF f{4};

    static CurvatureOperator mean_curvature(double eps = 1e-6) {
        return {OperatorKind::MeanCurvature, 1, eps, {4}};
    }
    static CurvatureOperator gauss_positive(double eps = 1e-6) {
        return {OperatorKind::GaussPositive, 1, eps, {4}};  // t^{2n}, n=2
    }
    static CurvatureOperator codim_k(int k, double eps = 1e-6) {
        return {OperatorKind::CodimK, k, eps, {4}};
    }
    std::string name() const;
};

// F(zeta, A). Throws DegenerateGradient below eps_grad and NonSymmetric if
// A fails symmetry by more than 1e-12.
double eval_F(const CurvatureOperator& op, const Jet& jet);

// Same evaluation with |zeta| replaced by sqrt(|zeta|^2 + eps^2) in every
// denominator; the solver's regularized branch. eps = 0 reproduces eval_F
// without the degenerate-gradient guard.
double eval_F_regularized(const CurvatureOperator& op, const Jet& jet, double eps);

// G(nu, projected shape data) formulation; nu is the contravariant unit
// normal and the second argument the endomorphism (1/|zeta|) P A^sharp.
using GFunc = std::function<double(const Vec2& nu, const Mat2& projected)>;
double eval_F_from_G(const GFunc& g, const Jet& jet);

// Euclidean ambient-dimension evaluation of the codimension-k operator on
// synthetic jets (row-major symmetric a, n x n).
double eval_codim_euclidean(const std::vector<double>& zeta, const std::vector<double>& a,
                            int n, int k);

struct PropertyReport {
    std::string check;
    std::string op;
    int trials = 0;
    int violations = 0;
    double worst = 0.0;  // largest violation magnitude observed
    double tolerance = 0.0;
    bool passed() const { return violations == 0; }
    std::string to_json() const;
};

PropertyReport check_elliptic(const CurvatureOperator& op, int trials, std::uint64_t seed);
PropertyReport check_geometric(const CurvatureOperator& op, int trials, std::uint64_t seed);
PropertyReport check_translation_invariant(const CurvatureOperator& op,
                                           const ManifoldSpec& spec, const ChartGrid& grid,
                                           int trials, std::uint64_t seed);
PropertyReport check_f_class(const CurvatureOperator& op);

}  // namespace geomflow
