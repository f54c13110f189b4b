#pragma once

#include <string>
#include <vector>

#include "geomflow/manifold.hpp"
#include "geomflow/operators.hpp"

namespace geomflow {

// Isocontour as chart-space polyline chains. Closed chains repeat their
// first vertex at the end.
struct Contour {
    struct Chain {
        std::vector<Vec2> pts;
        bool closed = false;
    };
    std::vector<Chain> chains;
    double level = 0.0;
    double source_time = 0.0;

    bool empty() const { return chains.empty(); }
    std::vector<Vec2> vertices() const;
};

// Marching squares with linear edge interpolation; saddle cells resolved by
// the sign of the cell average.
Contour extract_contour(const ScalarField& u, double level = 0.0);

// Geodesic distance to the zero contour, signed by the sign of u.
ScalarField signed_distance(const ScalarField& u, const MetricField& m);

enum class FrontDistanceMode { Min, Hausdorff };

double front_distance(const Contour& c1, const Contour& c2, const MetricField& m,
                      FrontDistanceMode mode);

// Hausdorff distance of the vertex sets in raw chart coordinates, with
// periodic wrap on the grid's periodic axes.
double contour_hausdorff_chart(const Contour& c1, const Contour& c2, const ChartGrid& g);

// Mean curvature of the level circles {s = const} of a surface of
// revolution, evaluated through the operator pipeline on the analytic
// signed-distance jet. Equals r'(s) / (r(s) v(s)) with v = sqrt(r'^2 + 1).
double mean_curvature_of_distance(const ManifoldSpec& spec, double s);

}  // namespace geomflow
