#pragma once

#include <complex>
#include <vector>

#include "carleson/geometry.hpp"

namespace carleson {

using Complex = std::complex<double>;

// One frequency box: amplitude * indicator of the axis-aligned box with the
// given center and per-coordinate half-widths.
struct BandPiece {
    Complex amplitude{1.0, 0.0};
    Point center;
    std::array<double, kMaxDim> half{};

    double volume() const {
        double v = 1;
        for (int i = 0; i < center.dim; ++i) v *= 2 * half[static_cast<std::size_t>(i)];
        return v;
    }
    double lo(int i) const { return center[i] - half[static_cast<std::size_t>(i)]; }
    double hi(int i) const { return center[i] + half[static_cast<std::size_t>(i)]; }
};

// Data with piecewise-constant Fourier transform on disjoint boxes, under the
// convention u(x,t) = (2pi)^{-n/2} ∫ û(ξ) e^{i x·ξ - i t|ξ|^2} dξ.
struct BandData {
    int dim = 1;
    std::vector<BandPiece> pieces;

    // Plancherel: Σ |amplitude|^2 vol(box). Exact.
    double l2_norm_sq() const {
        double s = 0;
        for (const auto& p : pieces) s += std::norm(p.amplitude) * p.volume();
        return s;
    }

    // Boxes must be pairwise disjoint; overlap is a construction error.
    void check_disjoint() const;

    // Frequency translation (Galilean boost e^{i shift·x} on the physical side).
    BandData translated(const Point& shift) const;
};

// ψ with ψ = 1 on [-1,1], ψ = 0 outside [-2,2]; Ψ(ξ) = Π ψ(ξ_j). The
// smoothstep kind ramps with 1 - (3u^2 - 2u^3), u = clamp(|r|-1, 0, 1); the
// sharp kind cuts hard at |r| = 1.
struct CutoffProfile {
    enum class Kind { sharp, smoothstep };
    Kind kind = Kind::smoothstep;

    double operator()(double r) const {
        double a = std::abs(r);
        if (kind == Kind::sharp) return a <= 1.0 ? 1.0 : 0.0;
        if (a <= 1.0) return 1.0;
        if (a >= 2.0) return 0.0;
        double u = a - 1.0;
        return 1.0 - (3 * u * u - 2 * u * u * u);
    }
};

} // namespace carleson
