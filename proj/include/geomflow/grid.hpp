#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace geomflow {

// Rectangular 2-D chart grid. Axis 0 is the profile/first coordinate (s),
// axis 1 the angular/second coordinate (theta). A periodic axis stores n
// distinct nodes and identifies index n with index 0.
struct ChartGrid {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
    std::array<int, 2> n{8, 8};
    std::array<bool, 2> periodic{false, false};

    ChartGrid() = default;
    ChartGrid(std::array<double, 2> lo_, std::array<double, 2> hi_,
              std::array<int, 2> n_, std::array<bool, 2> per = {false, false})
        : lo(lo_), hi(hi_), n(n_), periodic(per) {
        for (int ax = 0; ax < 2; ++ax) {
            if (n[ax] < 8) throw std::invalid_argument("ChartGrid: resolution must be >= 8");
            if (!(spacing(ax) > 0.0)) throw std::invalid_argument("ChartGrid: nonpositive spacing");
        }
    }

    double spacing(int ax) const {
        double len = hi[ax] - lo[ax];
        return periodic[ax] ? len / n[ax] : len / (n[ax] - 1);
    }
    double min_spacing() const { return spacing(0) < spacing(1) ? spacing(0) : spacing(1); }
    double coord(int ax, int i) const { return lo[ax] + spacing(ax) * i; }

    std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1]; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n[1] + j; }

    // Wraps a periodic index; clamping is never done silently on
    // non-periodic axes, callers use one-sided stencils there.
    int wrap(int ax, int i) const {
        if (!periodic[ax]) return i;
        int m = i % n[ax];
        return m < 0 ? m + n[ax] : m;
    }
    bool interior(int ax, int i) const {
        return periodic[ax] || (i > 0 && i < n[ax] - 1);
    }

    bool operator==(const ChartGrid&) const = default;
};

// Scalar field sampled on a ChartGrid, time-stamped.
struct ScalarField {
    ChartGrid grid;
    std::vector<double> values;
    double time = 0.0;

    ScalarField() = default;
    explicit ScalarField(const ChartGrid& g, double fill = 0.0, double t = 0.0)
        : grid(g), values(g.size(), fill), time(t) {}

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

}  // namespace geomflow
