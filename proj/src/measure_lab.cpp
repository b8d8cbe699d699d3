#include "carleson/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace carleson {

namespace {

struct Overlap {
    double lo, hi;
    double len() const { return std::max(0.0, hi - lo); }
};

Overlap clip(double lo, double hi, double a, double b) {
    return {std::max(lo, a), std::min(hi, b)};
}

long long first_touch(const IntervalFamily& f, double a) {
    return static_cast<long long>(std::ceil((a - f.offset - f.width / 2) / f.step - 1e-12));
}
long long last_touch(const IntervalFamily& f, double b) {
    return static_cast<long long>(std::floor((b - f.offset + f.width / 2) / f.step + 1e-12));
}

} // namespace

double family_measure_in(const IntervalFamily& f, double a, double b) {
    if (!(b > a) || f.width <= 0) return 0;
    if (f.width >= f.step) return b - a;  // intervals merge into the whole line
    long long m0 = first_touch(f, a), m1 = last_touch(f, b);
    if (m1 < m0) return 0;
    auto overlap_len = [&](long long m) {
        double c = f.offset + static_cast<double>(m) * f.step;
        return clip(c - f.width / 2, c + f.width / 2, a, b).len();
    };
    if (m1 - m0 <= 3) {
        double s = 0;
        for (long long m = m0; m <= m1; ++m) s += overlap_len(m);
        return s;
    }
    // interior intervals are fully inside (width <= step)
    return static_cast<double>(m1 - m0 - 1) * f.width + overlap_len(m0) + overlap_len(m1);
}

namespace {

constexpr std::size_t kEnumCap = 4'000'000;

// exact |∩ fams ∩ [a,b]| by enumerating the sparsest family
double families_intersection_measure(std::vector<IntervalFamily> fams, double a, double b) {
    if (!(b > a)) return 0;
    if (fams.size() == 1) return family_measure_in(fams[0], a, b);
    std::size_t sp = 0;
    for (std::size_t i = 1; i < fams.size(); ++i)
        if (fams[i].step > fams[sp].step) sp = i;
    IntervalFamily f = fams[sp];
    fams.erase(fams.begin() + static_cast<std::ptrdiff_t>(sp));
    if (f.width >= f.step) return families_intersection_measure(std::move(fams), a, b);
    long long m0 = first_touch(f, a), m1 = last_touch(f, b);
    if (m1 < m0) return 0;
    if (static_cast<std::size_t>(m1 - m0 + 1) > kEnumCap)
        throw std::runtime_error("sample budget: interval-family enumeration exceeds cap");
    double s = 0;
    for (long long m = m0; m <= m1; ++m) {
        double c = f.offset + static_cast<double>(m) * f.step;
        Overlap w = clip(c - f.width / 2, c + f.width / 2, a, b);
        if (w.len() > 0) s += families_intersection_measure(fams, w.lo, w.hi);
    }
    return s;
}

} // namespace

double families_union_measure(std::span<const IntervalFamily> fams, double a, double b) {
    if (!(b > a) || fams.empty()) return 0;
    if (fams.size() > 16) throw std::invalid_argument("families_union_measure: too many families");
    double total = 0;
    unsigned full = (1u << fams.size()) - 1;
    for (unsigned mask = 1; mask <= full; ++mask) {
        std::vector<IntervalFamily> sub;
        for (std::size_t i = 0; i < fams.size(); ++i)
            if (mask & (1u << i)) sub.push_back(fams[i]);
        double m = sub.size() == 1 ? family_measure_in(sub[0], a, b)
                                   : families_intersection_measure(std::move(sub), a, b);
        total += (__builtin_popcount(mask) % 2 ? 1.0 : -1.0) * m;
    }
    return std::clamp(total, 0.0, b - a);
}

namespace {

IntervalFamily axis_view(const HoleFamily& hf, int axis) {
    return {hf.lattice_step, hf.shift[axis], hf.side};
}

} // namespace

double pseudo_cube_measure(const Cube& outer, std::span<const HoleFamily> holes, int d) {
    if (d > 2) throw std::invalid_argument("exact arithmetic unsupported for dimension > 2");
    if (d < 1) throw std::invalid_argument("pseudo_cube_measure: dimension must be >= 1");
    if (d == 1) {
        std::vector<IntervalFamily> fams;
        fams.reserve(holes.size());
        for (const auto& h : holes) fams.push_back(axis_view(h, 0));
        double len = outer.side;
        return len - families_union_measure(fams, outer.lo(0), outer.hi(0));
    }
    // d == 2: product families; the union is inclusion-excluded with
    // per-subset measures factorizing across the axes
    if (holes.size() > 16) throw std::invalid_argument("pseudo_cube_measure: too many families");
    double holes_measure = 0;
    unsigned full = (1u << holes.size()) - 1;
    for (unsigned mask = 1; mask <= full; ++mask) {
        double prod = 1;
        for (int axis = 0; axis < 2 && prod != 0; ++axis) {
            std::vector<IntervalFamily> sub;
            for (std::size_t i = 0; i < holes.size(); ++i)
                if (mask & (1u << i)) sub.push_back(axis_view(holes[i], axis));
            prod *= sub.size() == 1
                        ? family_measure_in(sub[0], outer.lo(axis), outer.hi(axis))
                        : families_intersection_measure(std::move(sub), outer.lo(axis),
                                                        outer.hi(axis));
        }
        holes_measure += (__builtin_popcount(mask) % 2 ? 1.0 : -1.0) * prod;
    }
    double vol = outer.side * outer.side;
    return vol - std::clamp(holes_measure, 0.0, vol);
}

// ---------------------------------------------------------------------------
// GammaSliceModel
// ---------------------------------------------------------------------------

GammaSliceModel::GammaSliceModel(const PseudoCubeSet& set, double lo, double hi)
    : lo_(lo), hi_(hi), side_(set.cube_side), dim_(set.n - 1) {
    if (dim_ != 1)
        throw std::invalid_argument("exact arithmetic unsupported: slice model needs n = 2");
    struct Entry {
        double pos;
        const TimeSlab* slab;
    };
    std::vector<Entry> entries;
    double margin = side_;
    for (const auto& slab : set.slabs) {
        auto m0 = static_cast<long long>(std::ceil((lo - margin - slab.xshift[0]) /
                                                   set.lattice_step));
        auto m1 = static_cast<long long>(std::floor((hi + margin - slab.xshift[0]) /
                                                    set.lattice_step));
        for (long long m = m0; m <= m1; ++m) {
            double latt = static_cast<double>(m) * set.lattice_step;
            if (std::abs(latt) > set.center_cap) continue;
            entries.push_back({latt + slab.xshift[0], &slab});
        }
        for (const auto& h : slab.holes)
            smallest_feature_ = smallest_feature_ == 0 ? h.side
                                                       : std::min(smallest_feature_, h.side);
    }
    if (smallest_feature_ == 0) smallest_feature_ = side_;
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.pos < b.pos; });

    cells_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        double cube_lo = entries[i].pos - side_ / 2, cube_hi = entries[i].pos + side_ / 2;
        if (i > 0) {
            double mid = 0.5 * (entries[i - 1].pos + entries[i].pos);
            if (mid > cube_lo) {
                cube_lo = mid;
                subset_model_ = true;  // consecutive cubes overlap; nearest-cube partition
            }
        }
        if (i + 1 < entries.size()) {
            double mid = 0.5 * (entries[i].pos + entries[i + 1].pos);
            if (mid < cube_hi) cube_hi = mid;
        }
        Cell c;
        c.cube_center = entries[i].pos;
        c.cell_lo = std::max(cube_lo, lo_);
        c.cell_hi = std::min(cube_hi, hi_);
        c.slab = entries[i].slab;
        if (c.cell_hi <= c.cell_lo) continue;
        std::vector<IntervalFamily> fams;
        for (const auto& h : c.slab->holes) fams.push_back(axis_view(h, 0));
        c.meas = (c.cell_hi - c.cell_lo) - families_union_measure(fams, c.cell_lo, c.cell_hi);
        cells_.push_back(c);
    }
    prefix_.resize(cells_.size() + 1, 0.0);
    for (std::size_t i = 0; i < cells_.size(); ++i) prefix_[i + 1] = prefix_[i] + cells_[i].meas;
    total_ = prefix_.empty() ? 0.0 : prefix_.back();
}

double GammaSliceModel::cell_measure_clipped(const Cell& c, double a, double b) const {
    double wa = std::max(c.cell_lo, a), wb = std::min(c.cell_hi, b);
    if (wb <= wa) return 0;
    if (wa == c.cell_lo && wb == c.cell_hi) return c.meas;
    std::vector<IntervalFamily> fams;
    for (const auto& h : c.slab->holes) fams.push_back(axis_view(h, 0));
    return (wb - wa) - families_union_measure(fams, wa, wb);
}

double GammaSliceModel::measure(double a, double b) const {
    if (cells_.empty() || !(b > a)) return 0;
    // cells are disjoint and ordered; locate the touched range
    auto lo_it = std::partition_point(cells_.begin(), cells_.end(),
                                      [&](const Cell& c) { return c.cell_hi <= a; });
    auto hi_it = std::partition_point(cells_.begin(), cells_.end(),
                                      [&](const Cell& c) { return c.cell_lo < b; });
    if (lo_it >= hi_it) return 0;
    std::size_t i0 = static_cast<std::size_t>(lo_it - cells_.begin());
    std::size_t i1 = static_cast<std::size_t>(hi_it - cells_.begin());  // exclusive
    // interior cells fully inside [a,b]
    std::size_t f0 = i0, f1 = i1;
    double edges = 0;
    if (f0 < f1 && (cells_[f0].cell_lo < a)) {
        edges += cell_measure_clipped(cells_[f0], a, b);
        ++f0;
    }
    if (f1 > f0 && (cells_[f1 - 1].cell_hi > b)) {
        edges += cell_measure_clipped(cells_[f1 - 1], a, b);
        --f1;
    }
    return edges + (prefix_[f1] - prefix_[f0]);
}


GammaMeasureCertificate gamma_total_measure(double x1, int j, const ExperimentParams& p,
                                            const std::vector<Point>& thetas) {
    if (p.n != 2)
        throw std::invalid_argument("exact arithmetic unsupported: gamma_total_measure needs n = 2");
    PseudoCubeSet set = build_gamma_j(x1, j, p, thetas);
    GammaSliceModel model(set, -0.5, 0.5);
    GammaMeasureCertificate cert;
    cert.measure = model.total();
    cert.region_volume = 1.0;
    cert.subset_model = model.subset_model();
    cert.pass = cert.measure >= cert.c * cert.region_volume;
    return cert;
}

double content_upper(const PseudoCubeSet& set, double beta, CoverSpec spec, double lo,
                     double hi) {
    if (spec == CoverSpec::single_cube) return std::pow(hi - lo, beta);
    auto centers = gamma_cube_centers_in(set, lo - set.cube_side / 2, hi + set.cube_side / 2);
    // distinct covering cubes: dedupe identical centers across slabs
    std::vector<double> xs;
    xs.reserve(centers.size());
    for (const auto& c : centers) xs.push_back(c[0]);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double a, double b) { return std::abs(a - b) < 1e-18; }),
             xs.end());
    return static_cast<double>(xs.size()) * std::pow(set.cube_side, beta);
}

double content_upper_explicit(const PseudoCubeSet& set, double beta,
                              std::span<const Cube> cover, double lo, double hi) {
    // merged cover intervals
    std::vector<std::pair<double, double>> iv;
    for (const auto& q : cover) iv.emplace_back(q.lo(0), q.hi(0));
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (auto& p : iv) {
        if (!merged.empty() && p.first <= merged.back().second + 1e-18)
            merged.back().second = std::max(merged.back().second, p.second);
        else
            merged.push_back(p);
    }
    auto covered = [&](double a, double b) -> double {  // returns uncovered witness or NaN
        for (const auto& m : merged)
            if (m.first <= a + 1e-15 && m.second >= b - 1e-15) return std::nan("");
        // find a gap point inside [a,b]
        double probe = a;
        for (const auto& m : merged) {
            if (m.first > probe) break;
            probe = std::max(probe, m.second);
        }
        return probe <= b ? std::min(std::max(probe + 1e-18, a), b) : std::nan("");
    };
    auto centers = gamma_cube_centers_in(set, lo - set.cube_side / 2, hi + set.cube_side / 2);
    for (const auto& c : centers) {
        double a = std::max(c[0] - set.cube_side / 2, lo);
        double b = std::min(c[0] + set.cube_side / 2, hi);
        if (b <= a) continue;
        double w = covered(a, b);
        if (!std::isnan(w)) {
            std::ostringstream msg;
            msg << "cover fails containment: witness point " << w;
            throw std::runtime_error(msg.str());
        }
    }
    double cost = 0;
    for (const auto& q : cover) cost += std::pow(q.side, beta);
    return cost;
}

MassDistributionResult content_lower_mass(const GammaSliceModel& model, double beta,
                                          int max_scales) {
    if (!(beta > 0)) throw std::invalid_argument("content_lower_mass: beta must be > 0");
    MassDistributionResult res;
    res.beta = beta;
    res.total_mass = model.total();
    if (res.total_mass <= 0) return res;  // zero mass -> lower bound 0

    double extent = model.extent();
    res.r_max = extent;
    double C = 0;
    double r = extent;
    for (int scale = 0; scale < max_scales; ++scale) {
        auto grid_n = static_cast<long long>(std::floor(2 * extent / r)) + 1;
        double best_here = 0, best_x = model.region_lo();
        for (long long i = 0; i <= grid_n; ++i) {
            double x = model.region_lo() + static_cast<double>(i) * r / 2;
            double mass = model.measure(x - r / 2, x + r / 2);
            double ratio = mass / std::pow(r, beta);
            if (ratio > best_here) {
                best_here = ratio;
                best_x = x;
            }
        }
        res.rows.push_back({r, best_x, best_here * std::pow(r, beta), best_here});
        C = std::max(C, best_here);
        res.r_min = r;
        // holes are the smallest feature: below them the max cannot move when
        // beta <= n-1; for beta above the dimension the ratio keeps growing
        // and the probes must keep shrinking to show the degradation
        if (beta <= 1.0 && r <= model.smallest_feature()) break;
        r /= 2;
    }
    // below the finest probed scale the density bound mu(Q) <= r caps the
    // ratio by r^{1-beta} (divergent as r -> 0 when beta > n-1)
    C = std::max(C, std::pow(res.r_min, 1.0 - beta));
    res.C = C;
    res.lower = C > 0 ? res.total_mass / C : 0;
    return res;
}

FalconerCertificate falconer_density_check(double x1, double beta, const ExperimentParams& p,
                                           const std::vector<Point>& thetas,
                                           std::span<const int> j_panel,
                                           std::span<const Cube> query_cubes,
                                           std::uint64_t seed) {
    if (p.n != 2)
        throw std::invalid_argument("exact arithmetic unsupported: falconer check needs n = 2");
    double blo = (p.n - 1) * (2 * p.alpha + 1) / (2.0 * (p.n + 1));
    double bhi = p.alpha - 1;
    if (!(beta > blo && beta < bhi))
        throw std::invalid_argument("falconer: beta outside ((n-1)(2a+1)/(2(n+1)), a-1)");
    for (const auto& q : query_cubes)
        if (std::abs(q.center[0]) + q.side / 2 > 0.5)
            throw std::invalid_argument("falconer: query cube outside B(0,1/2)");

    (void)seed;  // probe grids are deterministic; seed kept for API stability
    FalconerCertificate cert;
    cert.beta = beta;
    cert.pass = true;
    int jmax = *std::max_element(j_panel.begin(), j_panel.end());
    for (const auto& q : query_cubes) {
        std::vector<double> cs;
        for (int j : j_panel) {
            PseudoCubeSet set = build_gamma_j(x1, j, p, thetas);
            GammaSliceModel model(set, q.lo(0), q.hi(0));
            FalconerCell cell;
            cell.j = j;
            cell.query = q;
            cell.subset_model = model.subset_model();
            if (model.total() <= 0) {
                cell.lower = 0;
                cell.c_emp = 0;
                if (j == jmax) {
                    cert.pass = false;
                    std::ostringstream msg;
                    msg << "empty intersection at level " << j << " in cube at "
                        << q.center[0];
                    cert.failure = msg.str();
                }
            } else {
                MassDistributionResult mdr = content_lower_mass(model, beta);
                cell.lower = mdr.lower;
                cell.c_emp = mdr.lower / std::pow(q.side, beta);
            }
            cs.push_back(cell.c_emp);
            cert.table.push_back(cell);
        }
        // liminf proxy: min over the two largest j within 2x of the panel median
        std::vector<double> sorted_c = cs;
        std::sort(sorted_c.begin(), sorted_c.end());
        double median = sorted_c[sorted_c.size() / 2];
        double min_top2 = std::min(cs[cs.size() - 1], cs[cs.size() - 2]);
        if (!(min_top2 >= median / 2)) {
            cert.pass = false;
            if (cert.failure.empty()) {
                std::ostringstream msg;
                msg << "density drop at cube " << q.center[0] << ": min of top two levels "
                    << min_top2 << " < median/2 = " << median / 2;
                cert.failure = msg.str();
            }
        }
    }
    return cert;
}

CoverCostReport cover_cost_compare(std::span<const int> j_panel, double delta, double beta,
                                   const ExperimentParams& p) {
    CoverCostReport rep;
    rep.expected_slope = (p.alpha - 1 - beta) * std::log(p.lambda);
    for (int j : j_panel) {
        rep.j_panel.push_back(j);
        double cost = std::pow(p.eps2, beta) * std::pow(delta, p.n - 1) *
                      std::pow(p.lambda, j * (p.alpha - 1 - beta));
        rep.log_ratio.push_back(std::log(cost / std::pow(delta, beta)));
    }
    // least squares slope over the panel
    double n = static_cast<double>(rep.j_panel.size());
    double jbar = 0, ybar = 0;
    for (std::size_t i = 0; i < rep.j_panel.size(); ++i) {
        jbar += rep.j_panel[i];
        ybar += rep.log_ratio[i];
    }
    jbar /= n;
    ybar /= n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < rep.j_panel.size(); ++i) {
        num += (rep.j_panel[i] - jbar) * (rep.log_ratio[i] - ybar);
        den += sq(rep.j_panel[i] - jbar);
    }
    rep.fitted_slope = den > 0 ? num / den : 0;
    rep.monotone = rep.expected_slope > 1e-15 ? 1 : (rep.expected_slope < -1e-15 ? -1 : 0);
    return rep;
}

} // namespace carleson
