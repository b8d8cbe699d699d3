#pragma once

#include <vector>

#include "carleson/band_data.hpp"
#include "carleson/params.hpp"
#include "carleson/torus_flow.hpp"

namespace carleson {

// A frequency comb: kept lattice points in the (n-1) tangential coordinates,
// each carrying a small box. Shifting by the modulation pi*R*(1,theta) happens
// when the comb is assembled into data.
struct FrequencyComb {
    int level = 0;  // 0 = single-scale (§3), j >= 1 = multi-scale level
    int n = 2;
    double lattice_step = 0;
    std::vector<Point> points;  // dim n-1, unshifted
    double box_half = 0;        // per-coordinate half-width

    double measure() const {
        double v = 1;
        for (int i = 0; i < n - 1; ++i) v *= 2 * box_half;
        return static_cast<double>(points.size()) * v;
    }
};

// { ξ̄ in 2π R^{1-σ} Z^{n-1} : |ξ̄| <= R } with boxes of half-width rho.
FrequencyComb build_omega(double R, double sigma, int n, double rho,
                          std::size_t budget = 200'000);

// Level-j comb: per coordinate 2π λ^{j(1-σ)} Z with λ^j <= |ξ_m| < λ^{j+1},
// product over the n-1 coordinates, boxes Q(0, eps1/sqrt(n-1)) (side, not
// half-width). Throws "scale too small" when a coordinate range is empty.
FrequencyComb build_omega_j(int j, double lambda, double sigma, int n, double eps1,
                            std::size_t budget = 200'000);

struct DataBundle {
    BandData band;                      // the full data
    std::vector<BandData> level_bands;  // multi-scale: pieces per level (1-based order)
    std::vector<FrequencyComb> combs;
    std::vector<Point> thetas;          // per level, dim n-1
    ExperimentParams params;
    bool multi_scale = false;

    // closed-form L2 masses (Plancherel on disjoint boxes)
    double l2_norm_sq() const { return band.l2_norm_sq(); }
    std::vector<double> level_l2_sq() const;
};

// §3 data: f(x) = e^{iπR(1,θ)·x} φ(R^{1/2}x1) g(x̄), φ̂ = χ_(-ρ,ρ), ĝ = χ_Ω.
DataBundle build_f(double R, double sigma, const Point& theta, int n, double rho);

// §4 data truncated to J levels:
// u0 = Σ_j e^{iπλ^j(1,θ_j)·x} φ(λ^{j/2}x1) g_j(x̄), φ̂ = χ_(-ε1,ε1),
// ĝ_j = λ^{jδ} |Ω^j|^{-1} χ_{Ω^j}.
DataBundle build_u0(const ExperimentParams& params, const std::vector<Point>& thetas);

// ∫ (1+|ξ|^2)^s |û|^2 dξ by per-box quadrature (relative error <= tol).
double hs_norm_sq(const BandData& data, double s, double tol = 1e-10);
inline double hs_norm(const BandData& data, double s, double tol = 1e-10) {
    return std::sqrt(hs_norm_sq(data, s, tol));
}

// H^s membership threshold (n-1)σ/2 + 1/4 - δ of the multi-scale data.
inline double hs_threshold(int n, double sigma, double delta_w) {
    return (n - 1) * sigma / 2 + 0.25 - delta_w;
}

struct ThetaCert {
    int level = 0;
    Point theta;
    bool certified = false;
    DensityCertificate cert;  // last/best certificate for the level
};

// Per level j: direction for the Corollary-3 certification at R = λ^j,
// d = n-1, γ = α-1, ε = ε2, over an x1-panel in (0, 1/2). d=1 searches the
// constructive family θ = (1+u)/ceil(λ^{j(1/2-σ)}).
// With require_certified, a level that fails to certify throws; otherwise the
// constructive θ is returned with certified = false (low levels genuinely
// fail at desk scale - the paper needs j large).
std::vector<ThetaCert> select_thetas(const ExperimentParams& params, int levels,
                                     bool require_certified = false, int a_panel = 10);

} // namespace carleson
