#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace carleson {

inline constexpr int kMaxDim = 4;

// Fixed-capacity point, dimension <= kMaxDim. Used for torus points,
// Euclidean points and directions alike.
struct Point {
    int dim = 1;
    std::array<double, kMaxDim> c{};

    Point() = default;
    explicit Point(double x) : dim(1) { c[0] = x; }
    Point(double x, double y) : dim(2) { c[0] = x; c[1] = y; }
    Point(double x, double y, double z) : dim(3) { c[0] = x; c[1] = y; c[2] = z; }
    static Point zero(int d) { Point p; p.dim = d; return p; }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    double norm2() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += c[i] * c[i];
        return std::sqrt(s);
    }
    double norm_inf() const {
        double m = 0;
        for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(c[i]));
        return m;
    }
};

inline Point operator+(Point a, const Point& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < a.dim; ++i) a.c[i] += b.c[i];
    return a;
}
inline Point operator-(Point a, const Point& b) {
    assert(a.dim == b.dim);
    for (int i = 0; i < a.dim; ++i) a.c[i] -= b.c[i];
    return a;
}
inline Point operator*(double s, Point a) {
    for (int i = 0; i < a.dim; ++i) a.c[i] *= s;
    return a;
}

inline double dot(const Point& a, const Point& b) {
    assert(a.dim == b.dim);
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
    return s;
}

// x mod 1 in [0,1)
inline double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guard against floor rounding at integers
    return f;
}

inline double sq(double x) { return x * x; }

// Distance on T^d with the per-coordinate wrap metric.
inline double torus_dist2(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) {
        double d = std::abs(a.c[i] - b.c[i]);
        d = std::min(d, 1.0 - d);
        s += d * d;
    }
    return s;
}

inline double eucl_dist2(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += sq(a.c[i] - b.c[i]);
    return s;
}

// Axis-aligned cube of given side (the paper's Q(x, l) convention: side l).
struct Cube {
    Point center;
    double side = 0;
    bool open = false;

    bool contains(const Point& p) const {
        double h = side / 2;
        for (int i = 0; i < center.dim; ++i) {
            double d = std::abs(p[i] - center[i]);
            if (open ? (d >= h) : (d > h)) return false;
        }
        return true;
    }
    double lo(int i) const { return center[i] - side / 2; }
    double hi(int i) const { return center[i] + side / 2; }
    double volume() const {
        double v = 1;
        for (int i = 0; i < center.dim; ++i) v *= side;
        return v;
    }
};

// Integers m with lo < m*step < hi (open interval), as lattice values m*step.
// The strictness matches the paper's time windows (a, a+R) etc.
inline std::vector<double> lattice_in_open_interval(double step, double lo, double hi,
                                                    std::size_t cap = 100'000'000) {
    if (step <= 0) throw std::invalid_argument("lattice step must be positive");
    std::vector<double> out;
    long long m0 = static_cast<long long>(std::floor(lo / step)) + 1;
    long long m1 = static_cast<long long>(std::ceil(hi / step)) - 1;
    // float-rounding fixups at the endpoints
    while (static_cast<double>(m0) * step <= lo) ++m0;
    while (static_cast<double>(m0 - 1) * step > lo) --m0;
    while (static_cast<double>(m1) * step >= hi) --m1;
    while (static_cast<double>(m1 + 1) * step < hi) ++m1;
    if (m1 < m0) return out;
    auto count = static_cast<std::size_t>(m1 - m0 + 1);
    if (count > cap) throw std::runtime_error("sample budget: lattice count " +
                                              std::to_string(count) + " exceeds cap");
    out.reserve(count);
    for (long long m = m0; m <= m1; ++m) out.push_back(static_cast<double>(m) * step);
    return out;
}

// Count of integers m with |m*step| <= radius (closed ball in 1D).
inline long long lattice_count_in_closed_ball_1d(double step, double radius) {
    if (radius < 0) return 0;
    return 2 * static_cast<long long>(std::floor(radius / step)) + 1;
}

// Enumerates lattice points of step*Z^d with Euclidean norm <= radius.
inline std::vector<Point> lattice_in_closed_ball(double step, double radius, int d,
                                                 std::size_t cap = 100'000'000) {
    long long kmax = static_cast<long long>(std::floor(radius / step));
    std::vector<Point> out;
    double r2 = radius * radius;
    std::array<long long, kMaxDim> idx{};
    // odometer over [-kmax, kmax]^d with ball filter
    auto push = [&]() {
        Point p = Point::zero(d);
        double s = 0;
        for (int i = 0; i < d; ++i) {
            p[i] = static_cast<double>(idx[i]) * step;
            s += p[i] * p[i];
        }
        if (s <= r2) {
            if (out.size() >= cap) throw std::runtime_error("sample budget: lattice ball cap");
            out.push_back(p);
        }
    };
    for (int i = 0; i < d; ++i) idx[i] = -kmax;
    while (true) {
        push();
        int i = 0;
        while (i < d && ++idx[i] > kmax) { idx[i] = -kmax; ++i; }
        if (i == d) break;
    }
    return out;
}

} // namespace carleson
