#include "carleson/torus_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "carleson/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carleson {

void TorusPointSet::add(Point p) {
    if (p.dim != dim) throw std::invalid_argument("point dimension mismatch");
    for (int i = 0; i < dim; ++i) {
        if (!std::isfinite(p[i])) throw std::invalid_argument("non-finite coordinate");
        if (metric == Metric::torus) p[i] = frac01(p[i]);
    }
    points.push_back(p);
}

void ErgParams::validate(bool require_theta) const {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("erg: d out of range");
    if (!(R > 1)) throw std::invalid_argument("erg: R must be > 1");
    if (!(delta_t > 0 && delta_t < 1)) throw std::invalid_argument("erg: delta outside (0,1)");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("erg: eps outside (0,1)");
    if (!(kappa > 1.0 / (d + 1))) throw std::invalid_argument("erg: kappa must exceed 1/(d+1)");
    if (!(delta_t < kappa)) throw std::invalid_argument("erg: requires delta < kappa");
    if (require_theta) {
        if (d == 1) {
            if (!(theta[0] > 0 && theta[0] < 1))
                throw std::invalid_argument("erg: theta must lie in (0,1) for d=1");
        } else {
            if (theta.dim != d || std::abs(theta.norm2() - 1.0) > 1e-9)
                throw std::invalid_argument("erg: theta must be a unit vector");
        }
    }
}

double ErgParams::target_radius() const {
    return eps * std::pow(R, (kappa - 1) / d);
}

// ---------------------------------------------------------------------------
// nearest-point index (parallel path)
// ---------------------------------------------------------------------------

namespace {

class NearestIndex {
public:
    explicit NearestIndex(const TorusPointSet& s) : set_(s) {
        if (s.dim == 1) {
            sorted_.reserve(s.points.size());
            for (const auto& p : s.points) sorted_.push_back(p[0]);
            std::sort(sorted_.begin(), sorted_.end());
        } else {
            build_grid();
        }
    }

    double dist(const Point& q) const {
        if (set_.dim == 1) return dist_1d(q[0]);
        return std::sqrt(dist2_grid(q));
    }

private:
    const TorusPointSet& set_;
    std::vector<double> sorted_;

    // uniform cell grid for d >= 2
    int ncell_ = 1;
    double cell_lo_ = 0, cell_w_ = 1;
    std::vector<std::vector<int>> cells_;

    double dist_1d(double x) const {
        if (set_.metric == Metric::torus) x = frac01(x);
        auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
        double best = std::numeric_limits<double>::infinity();
        if (it != sorted_.end()) best = std::min(best, std::abs(*it - x));
        if (it != sorted_.begin()) best = std::min(best, std::abs(*(it - 1) - x));
        if (set_.metric == Metric::torus) {
            best = std::min(best, x + 1.0 - sorted_.back());
            best = std::min(best, sorted_.front() + 1.0 - x);
        }
        return best;
    }

    int cell_of(double x) const {
        int i = static_cast<int>(std::floor((x - cell_lo_) / cell_w_));
        if (set_.metric == Metric::torus) {
            i %= ncell_;
            if (i < 0) i += ncell_;
        } else {
            i = std::clamp(i, 0, ncell_ - 1);
        }
        return i;
    }

    void build_grid() {
        int d = set_.dim;
        if (set_.metric == Metric::torus) {
            cell_lo_ = 0;
            ncell_ = std::max(1, static_cast<int>(std::floor(
                         std::pow(static_cast<double>(set_.points.size()), 1.0 / d))));
            cell_w_ = 1.0 / ncell_;
        } else {
            cell_lo_ = set_.ball_center[0] - set_.ball_radius;
            for (int i = 1; i < d; ++i)
                cell_lo_ = std::min(cell_lo_, set_.ball_center[i] - set_.ball_radius);
            double hi = set_.ball_center[0] + set_.ball_radius;
            for (int i = 1; i < d; ++i)
                hi = std::max(hi, set_.ball_center[i] + set_.ball_radius);
            // points may spill outside the ambient ball; widen to cover them
            for (const auto& p : set_.points)
                for (int i = 0; i < d; ++i) {
                    cell_lo_ = std::min(cell_lo_, p[i]);
                    hi = std::max(hi, p[i]);
                }
            ncell_ = std::max(1, static_cast<int>(std::floor(
                         std::pow(static_cast<double>(set_.points.size()), 1.0 / d))));
            cell_w_ = (hi - cell_lo_) / ncell_ + 1e-300;
        }
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(ncell_);
        cells_.assign(total, {});
        for (int k = 0; k < static_cast<int>(set_.points.size()); ++k) {
            const auto& p = set_.points[static_cast<std::size_t>(k)];
            std::size_t idx = 0;
            for (int i = 0; i < d; ++i)
                idx = idx * static_cast<std::size_t>(ncell_) +
                      static_cast<std::size_t>(cell_of(p[i]));
            cells_[idx].push_back(k);
        }
    }

    double point_dist2(const Point& q, int k) const {
        const auto& p = set_.points[static_cast<std::size_t>(k)];
        return set_.metric == Metric::torus ? torus_dist2(q, p) : eucl_dist2(q, p);
    }

    double dist2_grid(const Point& q) const {
        int d = set_.dim;
        std::array<int, kMaxDim> qc{};
        for (int i = 0; i < d; ++i) qc[i] = cell_of(q[i]);
        double best = std::numeric_limits<double>::infinity();
        int max_ring = set_.metric == Metric::torus ? (ncell_ / 2 + 1) : ncell_;
        for (int ring = 0; ring <= max_ring; ++ring) {
            // cells whose Chebyshev distance from qc equals ring
            double ring_min = (ring - 1) * cell_w_;
            if (ring > 0 && best <= ring_min * ring_min) break;
            std::array<int, kMaxDim> off{};
            for (int i = 0; i < d; ++i) off[i] = -ring;
            while (true) {
                bool on_shell = false;
                for (int i = 0; i < d; ++i)
                    if (std::abs(off[i]) == ring) on_shell = true;
                if (on_shell || ring == 0) {
                    std::size_t idx = 0;
                    bool ok = true;
                    for (int i = 0; i < d; ++i) {
                        int ci = qc[i] + off[i];
                        if (set_.metric == Metric::torus) {
                            ci %= ncell_;
                            if (ci < 0) ci += ncell_;
                        } else if (ci < 0 || ci >= ncell_) {
                            ok = false;
                            break;
                        }
                        idx = idx * static_cast<std::size_t>(ncell_) +
                              static_cast<std::size_t>(ci);
                    }
                    if (ok)
                        for (int k : cells_[idx]) best = std::min(best, point_dist2(q, k));
                }
                int i = 0;
                while (i < d && ++off[i] > ring) { off[i] = -ring; ++i; }
                if (i == d) break;
            }
            if (std::isfinite(best) && set_.metric == Metric::euclidean && ring >= ncell_)
                break;
        }
        return best;
    }
};

double brute_dist(const TorusPointSet& s, const Point& q) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : s.points) {
        double d2 = s.metric == Metric::torus ? torus_dist2(q, p) : eucl_dist2(q, p);
        best = std::min(best, d2);
    }
    return std::sqrt(best);
}

// Odometer over the probe grid; returns false when exhausted.
struct ProbeGrid {
    int d;
    std::array<long long, kMaxDim> n{};
    std::array<double, kMaxDim> lo{};
    double step;
    long long total = 1;

    Point at(long long flat) const {
        Point p = Point::zero(d);
        for (int i = d - 1; i >= 0; --i) {
            p[i] = lo[i] + static_cast<double>(flat % n[i]) * step;
            flat /= n[i];
        }
        return p;
    }
};

ProbeGrid make_grid(const TorusPointSet& s, double res) {
    ProbeGrid g;
    g.d = s.dim;
    if (s.metric == Metric::torus) {
        long long per = std::max<long long>(1, static_cast<long long>(std::ceil(1.0 / res)));
        g.step = 1.0 / static_cast<double>(per);
        for (int i = 0; i < g.d; ++i) { g.n[i] = per; g.lo[i] = 0; }
    } else {
        g.step = res;
        for (int i = 0; i < g.d; ++i) {
            g.lo[i] = s.ball_center[i] - s.ball_radius;
            g.n[i] = std::max<long long>(
                2, static_cast<long long>(std::floor(2 * s.ball_radius / res)) + 1);
        }
    }
    for (int i = 0; i < g.d; ++i) g.total *= g.n[i];
    return g;
}

} // namespace

double covering_radius(const TorusPointSet& set, double probe_resolution, Exec exec) {
    if (set.points.empty()) throw std::invalid_argument("no points");
    if (!(probe_resolution > 0)) throw std::invalid_argument("probe resolution must be > 0");
    ProbeGrid grid = make_grid(set, probe_resolution);
    const bool ball = set.metric == Metric::euclidean;
    const double r2 = set.ball_radius * set.ball_radius;

    double worst = 0;
    if (exec == Exec::serial) {
        for (long long f = 0; f < grid.total; ++f) {
            Point q = grid.at(f);
            if (ball && eucl_dist2(q, set.ball_center) > r2) continue;
            worst = std::max(worst, brute_dist(set, q));
        }
    } else {
        NearestIndex index(set);
#pragma omp parallel for reduction(max : worst) schedule(static)
        for (long long f = 0; f < grid.total; ++f) {
            Point q = grid.at(f);
            if (ball && eucl_dist2(q, set.ball_center) > r2) continue;
            worst = std::max(worst, index.dist(q));
        }
    }
    return worst;
}

double covering_radius_exact_circle(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("no points");
    for (auto& x : xs) x = frac01(x);
    std::sort(xs.begin(), xs.end());
    double max_gap = xs.front() + 1.0 - xs.back();
    for (std::size_t i = 1; i < xs.size(); ++i)
        max_gap = std::max(max_gap, xs[i] - xs[i - 1]);
    return max_gap / 2;
}

double covering_radius_exact_interval(std::vector<double> pts, double lo, double hi) {
    if (pts.empty()) throw std::invalid_argument("no points");
    std::sort(pts.begin(), pts.end());
    auto dist_to = [&](double x) {
        auto it = std::lower_bound(pts.begin(), pts.end(), x);
        double best = std::numeric_limits<double>::infinity();
        if (it != pts.end()) best = std::min(best, std::abs(*it - x));
        if (it != pts.begin()) best = std::min(best, std::abs(*(it - 1) - x));
        return best;
    };
    double worst = std::max(dist_to(lo), dist_to(hi));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double mid = (pts[i - 1] + pts[i]) / 2;
        if (mid > lo && mid < hi) worst = std::max(worst, (pts[i] - pts[i - 1]) / 2);
    }
    return worst;
}

TorusPointSet flow_samples(const ErgParams& p) {
    p.validate();
    double step = std::pow(p.R, p.delta_t);
    auto ts = lattice_in_open_interval(step, p.a, p.a + p.R, p.sample_cap);
    TorusPointSet s = TorusPointSet::on_torus(p.d);
    s.points.reserve(ts.size());
    for (double t : ts) {
        Point q = Point::zero(p.d);
        if (p.d == 1) {
            q[0] = frac01(t * p.theta[0]);
        } else {
            for (int i = 0; i < p.d; ++i) q[i] = frac01(t * p.theta[i]);
        }
        s.points.push_back(q);
    }
    return s;
}

Point sphere_direction(int d, int index, std::uint64_t seed) {
    std::uint64_t st = seed * 0x9e3779b97f4a7c15ULL + 0x1234567ULL;
    double u1 = rng_u01(st), u2 = rng_u01(st);
    if (d == 2) {
        double ang = 2 * M_PI * frac01(index * kGolden1 + u1);
        return Point(std::cos(ang), std::sin(ang));
    }
    if (d == 3) {
        double z = 1.0 - 2.0 * frac01(index * kR2b + u2);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double ang = 2 * M_PI * frac01(index * kR2a + u1);
        return Point(r * std::cos(ang), r * std::sin(ang), z);
    }
    throw std::invalid_argument("sphere_direction: d must be 2 or 3");
}

namespace {

DensityCertificate certify_over_panel(const ErgParams& base, const Point& theta,
                                      int a_panel_size) {
    DensityCertificate cert;
    cert.theta = theta;
    cert.target_radius = base.target_radius();
    cert.probe_resolution = cert.target_radius / 8;
    cert.method = "probe-scan";
    cert.pass = true;
    for (int i = 0; i < a_panel_size; ++i) {
        double a = base.a + base.R * static_cast<double>(i) / a_panel_size;
        ErgParams p = base;
        p.a = a;
        p.theta = theta;
        double r = covering_radius(flow_samples(p), cert.probe_resolution);
        cert.a_panel.push_back(a);
        cert.radii_by_a.push_back(r);
        if (!(r <= cert.target_radius)) cert.pass = false;
    }
    return cert;
}

} // namespace

DensityCertificate erg_search_theta(const ErgParams& base, int attempts, int a_panel_size) {
    base.validate(/*require_theta=*/false);
    std::uint64_t st = base.seed;
    DensityCertificate last;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Point theta;
        if (base.d == 1) {
            // constructive family near 1/R: theta = (1+u)/ceil(R)
            static constexpr double kFixedU[] = {0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0};
            double u = attempt < 8 ? kFixedU[attempt] : 2 * rng_u01(st) - 1;
            theta = Point((1.0 + u) / std::ceil(base.R));
        } else {
            theta = sphere_direction(base.d, attempt, base.seed);
        }
        DensityCertificate cert = certify_over_panel(base, theta, a_panel_size);
        cert.attempts_used = attempt + 1;
        if (cert.pass) return cert;
        last = cert;
    }
    throw std::runtime_error("search exhausted: no direction certified in " +
                             std::to_string(attempts) + " attempts");
}

CorollaryParams corollary_param_map(double sigma, double gamma, int d) {
    if (d < 1) throw std::invalid_argument("corollary: d must be >= 1");
    if (!(gamma >= 0.75 * d - 1e-12 && gamma <= d + 1e-12))
        throw std::invalid_argument("corollary: gamma outside [3d/4, d]");
    double sigma_max = (1 + 2 * (d - gamma)) / (2.0 * (d + 2));
    if (!(sigma > 0 && sigma < sigma_max))
        throw std::invalid_argument("corollary: sigma outside (0, (1+2(d-gamma))/(2(d+2)))");
    CorollaryParams cp;
    double half = 0.5 - sigma;
    cp.delta_t = sigma / half;
    cp.kappa = 1.0 + (d * (1.0 - sigma) - gamma) / half;
    // ensured by the ranges above; keep as hard checks
    if (!(cp.delta_t > 0 && cp.delta_t < 1 && cp.delta_t < cp.kappa &&
          cp.kappa > 1.0 / (d + 1)))
        throw std::logic_error("corollary: derived (delta, kappa) violate Lemma-2 ranges");
    return cp;
}

DensityCertificate verify_gamma_density(const Point& theta, double sigma, double gamma,
                                        double eps, double R, double a, int d,
                                        std::size_t probe_budget) {
    double t_step = std::pow(R, 2 * sigma - 1);
    double window = std::pow(R, -0.5);
    auto ts = lattice_in_open_interval(t_step, a, a + window);
    if (ts.empty()) throw std::runtime_error("empty time lattice");  // sigma >= 1/4 regime
    CorollaryParams cp = corollary_param_map(sigma, gamma, d);  // range checks
    (void)cp;

    DensityCertificate cert;
    cert.theta = theta;
    cert.a_panel = {a};
    cert.target_radius = eps * std::pow(R, -gamma / d);
    cert.probe_resolution = cert.target_radius / 8;

    double L = std::pow(R, sigma - 1.0);  // spatial lattice step
    double radius;
    bool have_exact = false;
    if (d == 1) {
        // residues of t*theta within one lattice cell; exact circular gaps
        std::vector<double> residues;
        residues.reserve(ts.size());
        for (double t : ts) residues.push_back(frac01(t * theta[0] / L));
        radius = covering_radius_exact_circle(residues) * L;
        cert.method = "exact-gaps-1d";
        have_exact = true;
    } else {
        radius = std::numeric_limits<double>::quiet_NaN();
    }

    // probe scan when it fits the budget (always for d >= 2)
    double probes_per_dim = 1.0 / cert.probe_resolution;
    double probes = std::pow(probes_per_dim, d);
    double set_size = static_cast<double>(ts.size());
    for (int i = 0; i < d; ++i) set_size *= 2 * std::floor(2.0 / L) + 1;
    if (probes <= static_cast<double>(probe_budget) &&
        set_size <= static_cast<double>(probe_budget)) {
        TorusPointSet s = TorusPointSet::in_ball(d, Point::zero(d), 0.5);
        auto lattice = lattice_in_closed_ball(L, 2.0, d);
        s.points.reserve(lattice.size() * ts.size());
        for (double t : ts)
            for (const auto& x : lattice) {
                Point q = x;
                for (int i = 0; i < d; ++i) q[i] += t * theta[i];
                s.points.push_back(q);
            }
        double probed = covering_radius(s, cert.probe_resolution);
        if (have_exact) {
            cert.method = "exact-gaps-1d+probe";
            // probe scan can under-see the true radius by at most its slack
            if (probed > radius + 1e-12)
                throw std::logic_error("verify_gamma_density: probe scan exceeds exact radius");
        } else {
            radius = probed;
            cert.method = "probe-scan";
        }
    } else if (!have_exact) {
        throw std::runtime_error("sample budget: probe grid too fine for d >= 2");
    }

    cert.radii_by_a = {radius};
    cert.pass = radius <= cert.target_radius;
    return cert;
}

} // namespace carleson
