#pragma once

#include <optional>
#include <vector>

#include "carleson/geometry.hpp"
#include "carleson/params.hpp"

namespace carleson {

// T^j_{x1} = { t in λ^{j(2σ-1)} Z : x1 < t < x1 + λ^{-j/2} }
struct TimeLattice {
    int level = 1;
    double x1 = 0;
    double step = 0;
    double window_len = 0;
    std::vector<double> members;
};

TimeLattice build_T(int j, double x1, double lambda, double sigma);

struct CubeList {
    std::vector<Point> centers;
    double side = 0;
    bool open = false;
};

// X^j_{tθ_j}: open cubes of side ε2 λ^{-j} at (lattice λ^{j(σ-1)}Z^{n-1} ∩
// {|x̄|<=2}) + tθ_j.
CubeList build_X(int j, double t, const Point& theta_j, const ExperimentParams& p);

// X^{k,δ}: closed cubes of side ε2 λ^{-k(1-2δ)} on the unbounded lattice
// λ^{k(σ-1)}Z^{n-1} + λ^{k-j} t θ_k, enumerated within `region`.
CubeList build_X_hole(int k, int j, double t, const Point& theta_k,
                      const ExperimentParams& p, const Cube& region,
                      std::size_t budget = 5'000'000);

// One arithmetic family of holes (symbolic; never rasterized).
struct HoleFamily {
    int k = 0;
    double lattice_step = 0;
    Point shift;   // λ^{k-j} t θ_k
    double side = 0;
};

struct TimeSlab {
    double t = 0;
    Point xshift;  // t θ_j
    std::vector<HoleFamily> holes;
};

// Γ^j_{x1} = U_t ( X^j_{tθ_j} \ U_{j<k<=2j} X^{k,δ}_{λ^{k-j}tθ_k} ),
// stored symbolically. Membership is O(#slabs · #hole-levels).
struct PseudoCubeSet {
    int level = 1;
    int n = 2;
    double x1 = 0;
    double cube_side = 0;     // ε2 λ^{-j}
    double lattice_step = 0;  // λ^{j(σ-1)}
    double center_cap = 2.0;  // lattice centers restricted to |·|_2 <= cap
    std::vector<TimeSlab> slabs;

    bool contains(const Point& xbar) const { return witness_slab(xbar) >= 0; }
    // index of a slab whose punched cube contains xbar, -1 if none
    int witness_slab(const Point& xbar) const;
    // the open-cube center of slab `slab` nearest to xbar, if xbar is in it
    std::optional<Point> cube_center(const Point& xbar, int slab) const;
};

// Requires thetas for levels 1..2j ("need thetas up to 2j").
PseudoCubeSet build_gamma_j(double x1, int j, const ExperimentParams& p,
                            const std::vector<Point>& thetas);

// Open-cube centers of the set within [lo,hi]^{n-1} (dim n-1 odometer),
// deduplicated across slabs only by exact equality of centers.
std::vector<Point> gamma_cube_centers_in(const PseudoCubeSet& set, double lo, double hi,
                                         std::size_t cap = 10'000'000);

// For each ȳ in B(0,1/2) ∩ spacing·Z^{n-1} selects the nearest center with
// |x̄ - ȳ| <= spacing (ties lexicographic); errors: "density violated" with a
// witness when some ȳ has no center in range, "duplicate assignment" when two
// targets claim one center.
std::vector<Point> quasi_lattice(const std::vector<Point>& centers, double spacing, int dim);

} // namespace carleson
