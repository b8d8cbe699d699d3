#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carleson/band_data.hpp"
#include "carleson/exec.hpp"

namespace carleson {

inline constexpr double kDefaultTol = 1e-10;

// ∫_{c-h}^{c+h} e^{i x ξ - i a ξ^2} dξ to absolute error tol. Closed form for
// a = 0; otherwise adaptive bisection with fixed-order Gauss panels, evaluated
// in the center-shifted variable so the oscillatory phase stays conditioned.
Complex band_integral_1d(double x, double a, double c, double h, double tol = kDefaultTol);

// Same integrand multiplied by psi(ξ/N).
Complex band_integral_1d_cut(double x, double a, double c, double h, double N,
                             const CutoffProfile& psi, double tol = kDefaultTol);

// e^{itΔ} data at position x: Σ amp (2π)^{-n/2} Π_j ∫_box_j e^{i x_j ξ - i t ξ^2} dξ.
Complex evolve(const BandData& data, const Point& x, double t, double tol = kDefaultTol);

// S_N: integrand multiplied by Ψ(ξ/N); equals evolve when all boxes lie in
// [-N, N]^n.
Complex evolve_truncated(const BandData& data, const Point& x, double t, double N,
                         const CutoffProfile& psi, double tol = kDefaultTol);

// Batch evaluation over points; Exec::parallel is OpenMP over the points.
void evolve_grid(const BandData& data, std::span<const Point> xs, std::span<const double> ts,
                 std::span<Complex> out, double tol = kDefaultTol, Exec exec = Exec::parallel);

// |e^{i t/(2πR) Δ} f_dk(x1)| = (2π)^{-1/2} |∫_{-ρ}^{ρ} e^{i R^{1/2}(x1-t) y - i t y^2/(2π)} dy|.
// >= 0.9 (2π)^{-1/2} 2ρ throughout |t| <= 1, |x1 - t| <= R^{-1/2} at default ρ.
double dk_factor(double x1, double t, double R, double rho, double tol = kDefaultTol);

// | |evolve(f_θ, x̄, t/2πR)| - |evolve(g, x̄ - tθ, t/2πR)| | where f_θ is g
// boosted by πRθ. Exact identity; the residual measures quadrature only.
double galilean_residual(const BandData& g, const Point& theta, double R, const Point& xbar,
                         double t, double tol = kDefaultTol);

struct PhaseSample {
    Point xbar;
    double t;
    double ratio;  // |u| / ((2π)^{-(n-1)/2} |Ω|)
};

struct PhaseCertificate {
    double c = 0.5;          // required lower bound for the normalized ratio
    double min_ratio = 0;
    bool pass = false;
    std::size_t samples = 0;
    PhaseSample witness;     // the minimizing sample (a violation when !pass)
    double omega_measure = 0;
};

// Samples (x̄, t) from X_0 × R^{2σ-1}Z ∩ (0,1), X_0 the lattice R^{σ-1}Z^{n-1}
// ∩ {|x̄|<=2} with B(0, εR^{-1}) offsets, and certifies the no-cancellation
// ratio |e^{i t/(2πR)Δ} g(x̄)| >= c · (2π)^{-(n-1)/2}|Ω| with c = 0.5.
// g must be the §3 comb data (built by the counterexample builder).
PhaseCertificate phase1_check(const BandData& g, double R, double sigma, double eps,
                              int n, int sample_budget, std::uint64_t seed,
                              double c = 0.5, double tol = kDefaultTol);

} // namespace carleson
