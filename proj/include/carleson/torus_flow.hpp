#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carleson/exec.hpp"
#include "carleson/geometry.hpp"

namespace carleson {

enum class Metric { torus, euclidean };

// Finite point set on T^d (coordinates reduced mod 1) or inside a Euclidean
// ball, together with the ambient region used for covering-radius queries.
struct TorusPointSet {
    int dim = 1;
    Metric metric = Metric::torus;
    Point ball_center = Point::zero(1);  // ambient for the euclidean case
    double ball_radius = 0.5;
    std::vector<Point> points;

    static TorusPointSet on_torus(int d) {
        TorusPointSet s;
        s.dim = d;
        s.ball_center = Point::zero(d);
        return s;
    }
    static TorusPointSet in_ball(int d, Point center, double radius) {
        TorusPointSet s;
        s.dim = d;
        s.metric = Metric::euclidean;
        s.ball_center = center;
        s.ball_radius = radius;
        return s;
    }
    void add(Point p);  // torus points reduced mod 1
};

struct ErgParams {
    double R = 1024;     // scale, > 1
    double delta_t = 0.3;  // spacing exponent
    double kappa = 0.6;  // density exponent, > 1/(d+1)
    double eps = 0.5;    // density constant
    int d = 1;
    double a = 0;        // window offset; times in R^delta Z ∩ (a, a+R)
    Point theta = Point(0.0);  // scalar in (0,1) for d=1, unit vector for d>=2
    std::uint64_t seed = 1;
    std::size_t sample_cap = 50'000'000;

    void validate(bool require_theta = true) const;
    double target_radius() const;  // eps * R^{(kappa-1)/d}
};

// Max over a probe grid (spacing <= probe_resolution) of the distance to the
// set; every ambient point is within (returned + probe_resolution*sqrt(d)) of
// the set. Exec::serial is the brute O(points x probes) reference; the
// parallel path uses a nearest-point index and OpenMP over probes.
double covering_radius(const TorusPointSet& set, double probe_resolution,
                       Exec exec = Exec::parallel);

// Exact oracles (1D): half the maximal circular gap, resp. the maximum over
// [lo,hi] of the distance to the points.
double covering_radius_exact_circle(std::vector<double> xs);
double covering_radius_exact_interval(std::vector<double> pts, double lo, double hi);

// { t*theta mod Z^d : t in R^delta Z ∩ (a, a+R) }
TorusPointSet flow_samples(const ErgParams& p);

struct DensityCertificate {
    Point theta;
    std::vector<double> a_panel;
    std::vector<double> radii_by_a;
    double target_radius = 0;
    double probe_resolution = 0;
    bool pass = false;
    int attempts_used = 0;
    std::string method;  // "probe-scan" | "exact-gaps-1d" | "exact-gaps-1d+probe"
};

// Searches for a direction certified eps*R^{(kappa-1)/d}-dense over a panel of
// window offsets. d=1 uses the constructive family theta = (1+u)/ceil(R);
// d>=2 draws seeded low-discrepancy directions on S^{d-1}. Throws
// "search exhausted" if no candidate certifies within `attempts`.
DensityCertificate erg_search_theta(const ErgParams& base, int attempts,
                                    int a_panel_size = 10);

struct CorollaryParams {
    double delta_t;
    double kappa;
};

// delta = sigma/(1/2-sigma), kappa with (kappa-1)/d = (1-sigma)/(1/2-sigma)
//   - gamma/(d(1/2-sigma)); the Lemma-2 parameters matching Corollary 3.
CorollaryParams corollary_param_map(double sigma, double gamma, int d);

// Builds  U_{t in R^{2s-1}Z ∩ (a,a+R^{-1/2})} { x in R^{s-1}Z^d : |x|<=2 } + t*theta
// and certifies its covering radius restricted to B(0,1/2) against
// eps*R^{-gamma/d}. For d=1 the radius is computed exactly from the residue
// gaps (and cross-checked by a probe scan when it fits the probe budget).
DensityCertificate verify_gamma_density(const Point& theta, double sigma, double gamma,
                                        double eps, double R, double a, int d,
                                        std::size_t probe_budget = 20'000'000);

// Seeded low-discrepancy directions on S^{d-1} (d = 2 or 3).
Point sphere_direction(int d, int index, std::uint64_t seed);

} // namespace carleson
