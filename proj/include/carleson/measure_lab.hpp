#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "carleson/lattice_geometry.hpp"

namespace carleson {

// Arithmetic progression of disjoint intervals [offset + m*step +- width/2].
struct IntervalFamily {
    double step = 1;
    double offset = 0;
    double width = 0;
};

// Exact measure of the single family's union within [a, b] (closed form:
// full-interval count plus at most two edge partials; requires width <= step).
double family_measure_in(const IntervalFamily& f, double a, double b);

// Exact measure of the union of the families within [a, b], by
// inclusion-exclusion; multi-family intersections enumerate the sparsest
// member family in the window.
double families_union_measure(std::span<const IntervalFamily> fams, double a, double b);

// Exact Lebesgue measure of outer \ U(hole families), dimension d = n-1 <= 2.
// Holes of one family are lattice-aligned equal cubes; families may overlap
// each other (handled by inclusion-exclusion).
double pseudo_cube_measure(const Cube& outer, std::span<const HoleFamily> holes, int d);

// Exact measure model for a Γ^j_{x1} slice (n = 2): all slab cubes in the
// region sorted by position, every point assigned to the nearest covering
// cube, punched by that cube's hole families. Equals the set measure exactly
// when consecutive slab cubes do not overlap (shift >= side); otherwise it is
// a certified subset (reported via subset_model()).
class GammaSliceModel {
public:
    GammaSliceModel(const PseudoCubeSet& set, double lo, double hi);

    double total() const { return total_; }
    double measure(double a, double b) const;  // mu(model ∩ [a,b])
    bool subset_model() const { return subset_model_; }
    double cube_side() const { return side_; }
    double smallest_feature() const { return smallest_feature_; }
    double region_lo() const { return lo_; }
    double region_hi() const { return hi_; }
    double extent() const { return hi_ - lo_; }
    std::size_t cube_count() const { return cells_.size(); }

private:
    struct Cell {
        double cube_center;
        double cell_lo, cell_hi;  // assigned region (within the cube)
        double meas;              // exact measure of (cube ∩ cell) \ holes
        const TimeSlab* slab;
    };
    std::vector<Cell> cells_;  // sorted by cube_center
    std::vector<double> prefix_;
    double lo_, hi_, side_, total_ = 0, smallest_feature_ = 0;
    bool subset_model_ = false;
    int dim_ = 1;

    double cell_measure_clipped(const Cell& c, double a, double b) const;
};

struct GammaMeasureCertificate {
    double measure = 0;
    double region_volume = 0;
    double c = 0.25;
    bool pass = false;
    bool subset_model = false;
};

// Σ pseudo-cube measures of Γ^j_{x1} within B(0,1/2) (α = n mode), certified
// against c * vol(B(0,1/2)) with c = 0.25. n = 2 only.
GammaMeasureCertificate gamma_total_measure(double x1, int j, const ExperimentParams& p,
                                            const std::vector<Point>& thetas);

enum class CoverSpec { single_cube, per_pseudo_cube };

// Σ δ_i^β for the canonical covers of the set restricted to [lo, hi] (n = 2).
double content_upper(const PseudoCubeSet& set, double beta, CoverSpec spec, double lo,
                     double hi);
// Explicit interval cover; containment verified, error carries a witness point.
double content_upper_explicit(const PseudoCubeSet& set, double beta,
                              std::span<const Cube> cover, double lo, double hi);

struct MassProbeRow {
    double r;
    double x;
    double mass;
    double ratio;  // mass / r^beta
};

struct MassDistributionResult {
    double beta = 0;
    double total_mass = 0;
    double C = 0;       // max probed mass(Q(x,r)) / r^beta
    double lower = 0;   // total_mass / C
    double r_min = 0, r_max = 0;
    std::vector<MassProbeRow> rows;
};

// Mass-distribution lower bound for H^β_∞ of the modelled set: uniform mass
// proportional to Lebesgue measure, C maximized over probed cubes Q(x, r) at
// dyadic r from the region size down to the smallest feature (or max_scales
// halvings), centers on a complete r/2 grid, plus the density bound r^{1-β}
// below the finest probed scale.
MassDistributionResult content_lower_mass(const GammaSliceModel& model, double beta,
                                          int max_scales = 12);

struct FalconerCell {
    int j = 0;
    Cube query;
    double lower = 0;   // content_lower_mass of Γ^j ∩ Q
    double c_emp = 0;   // lower / side^beta
    bool subset_model = false;
};

struct FalconerCertificate {
    double beta = 0;
    bool pass = false;
    std::vector<FalconerCell> table;
    std::string failure;  // witness description when !pass
};

// Density check behind the Falconer argument: for each query cube and level,
// empirical c = H^β-mass lower bound / δ^β; pass iff for every cube the
// minimum over the two largest j stays within 2x of the panel median.
FalconerCertificate falconer_density_check(double x1, double beta, const ExperimentParams& p,
                                           const std::vector<Point>& thetas,
                                           std::span<const int> j_panel,
                                           std::span<const Cube> query_cubes,
                                           std::uint64_t seed = 1);

struct CoverCostReport {
    std::vector<int> j_panel;
    std::vector<double> log_ratio;  // ln of (per-pseudo-cube cover cost / δ^β)
    double fitted_slope = 0;        // should equal (α-1-β) ln λ
    double expected_slope = 0;
    int monotone = 0;  // +1 increasing, -1 decreasing, 0 constant
};

// Cost ratio ε2^β δ^{n-1} λ^{j(α-1-β)} / δ^β across the panel, with the
// fitted exponent compared against (α-1-β) ln λ.
CoverCostReport cover_cost_compare(std::span<const int> j_panel, double delta, double beta,
                                   const ExperimentParams& p);

} // namespace carleson
