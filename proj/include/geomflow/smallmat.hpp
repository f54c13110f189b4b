#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace geomflow {

using Vec2 = std::array<double, 2>;

// Dense 2x2 matrix, row major.
struct Mat2 {
    std::array<double, 4> m{0, 0, 0, 0};

    static Mat2 identity() { return {{1, 0, 0, 1}}; }
    double& operator()(int i, int j) { return m[2 * i + j]; }
    double operator()(int i, int j) const { return m[2 * i + j]; }

    Mat2 operator*(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
        return r;
    }
    Vec2 operator*(const Vec2& v) const {
        return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    }
    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int k = 0; k < 4; ++k) r.m[k] = m[k] + o.m[k];
        return r;
    }
    Mat2 operator-(const Mat2& o) const {
        Mat2 r;
        for (int k = 0; k < 4; ++k) r.m[k] = m[k] - o.m[k];
        return r;
    }
    Mat2 scaled(double c) const {
        Mat2 r;
        for (int k = 0; k < 4; ++k) r.m[k] = c * m[k];
        return r;
    }
    double trace() const { return m[0] + m[3]; }
    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    Mat2 inverse() const {
        double d = det();
        return Mat2{{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
    }
    Mat2 transposed() const { return {{m[0], m[2], m[1], m[3]}}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]}};
}

// Eigenvalues of a general real 2x2 with real spectrum; tiny negative
// discriminants from roundoff are clamped to zero.
inline std::array<double, 2> eigenvalues2(const Mat2& a) {
    double tr = a.trace();
    double disc = tr * tr - 4.0 * a.det();
    if (disc < 0.0) disc = 0.0;
    double rad = std::sqrt(disc);
    return {0.5 * (tr - rad), 0.5 * (tr + rad)};
}

// Symmetric NxN eigenvalues by cyclic Jacobi. Used only for the
// ambient-dimension codimension-k unit checks; tolerance 1e-12.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n,
                                       double tol = 1e-12);

}  // namespace geomflow
