#include "carleson/lattice_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace carleson {

TimeLattice build_T(int j, double x1, double lambda, double sigma) {
    if (j < 1) throw std::invalid_argument("build_T: j must be >= 1");
    if (!(sigma > 0 && sigma < 0.25))
        throw std::invalid_argument("build_T: requires sigma in (0, 1/4)");
    TimeLattice tl;
    tl.level = j;
    tl.x1 = x1;
    tl.step = std::pow(lambda, j * (2 * sigma - 1));
    tl.window_len = std::pow(lambda, -0.5 * j);
    tl.members = lattice_in_open_interval(tl.step, x1, x1 + tl.window_len);
    if (tl.members.empty())
        throw std::runtime_error("sigma too large for level: empty time lattice at level " +
                                 std::to_string(j));
    return tl;
}

CubeList build_X(int j, double t, const Point& theta_j, const ExperimentParams& p) {
    if (j < 1) throw std::invalid_argument("build_X: j must be >= 1");
    int d = p.n - 1;
    if (theta_j.dim != d) throw std::invalid_argument("build_X: theta dimension mismatch");
    CubeList cl;
    cl.side = p.eps2 * std::pow(p.lambda, -j);
    cl.open = true;
    double step = std::pow(p.lambda, j * (p.sigma - 1.0));
    cl.centers = lattice_in_closed_ball(step, 2.0, d);
    for (auto& c : cl.centers) c = c + t * theta_j;
    return cl;
}

CubeList build_X_hole(int k, int j, double t, const Point& theta_k,
                      const ExperimentParams& p, const Cube& region, std::size_t budget) {
    if (!(k > j && k <= 2 * j))
        throw std::invalid_argument("build_X_hole: k must lie in (j, 2j]");
    int d = p.n - 1;
    if (theta_k.dim != d) throw std::invalid_argument("build_X_hole: theta dimension mismatch");
    CubeList cl;
    cl.side = p.eps2 * std::pow(p.lambda, -k * (1.0 - 2 * p.delta_w));
    cl.open = false;
    double step = std::pow(p.lambda, k * (p.sigma - 1.0));
    Point shift = std::pow(p.lambda, k - j) * t * theta_k;

    std::array<long long, kMaxDim> m0{}, m1{};
    double count = 1;
    for (int i = 0; i < d; ++i) {
        m0[static_cast<std::size_t>(i)] =
            static_cast<long long>(std::ceil((region.lo(i) - shift[i]) / step));
        m1[static_cast<std::size_t>(i)] =
            static_cast<long long>(std::floor((region.hi(i) - shift[i]) / step));
        count *= std::max(0.0, static_cast<double>(m1[static_cast<std::size_t>(i)] -
                                                   m0[static_cast<std::size_t>(i)] + 1));
    }
    if (count > static_cast<double>(budget))
        throw std::runtime_error("sample budget: hole enumeration exceeds cap");
    if (count <= 0) return cl;
    std::array<long long, kMaxDim> idx = m0;
    while (true) {
        Point c = shift;
        for (int i = 0; i < d; ++i)
            c[i] += static_cast<double>(idx[static_cast<std::size_t>(i)]) * step;
        cl.centers.push_back(c);
        int i = 0;
        while (i < d && ++idx[static_cast<std::size_t>(i)] > m1[static_cast<std::size_t>(i)]) {
            idx[static_cast<std::size_t>(i)] = m0[static_cast<std::size_t>(i)];
            ++i;
        }
        if (i == d) break;
    }
    return cl;
}

int PseudoCubeSet::witness_slab(const Point& xbar) const {
    int d = n - 1;
    for (int s = 0; s < static_cast<int>(slabs.size()); ++s) {
        const auto& slab = slabs[static_cast<std::size_t>(s)];
        bool in_cube = true;
        double cap2 = 0;
        for (int i = 0; i < d; ++i) {
            double u = xbar[i] - slab.xshift[i];
            double m = std::round(u / lattice_step);
            if (std::abs(u - m * lattice_step) >= cube_side / 2) {  // open cube
                in_cube = false;
                break;
            }
            cap2 += sq(m * lattice_step);
        }
        if (!in_cube || cap2 > center_cap * center_cap) continue;
        bool in_hole = false;
        for (const auto& hf : slab.holes) {
            bool inside = true;
            for (int i = 0; i < d; ++i) {
                double v = xbar[i] - hf.shift[i];
                double m = std::round(v / hf.lattice_step);
                if (std::abs(v - m * hf.lattice_step) > hf.side / 2) {  // closed cube
                    inside = false;
                    break;
                }
            }
            if (inside) {
                in_hole = true;
                break;
            }
        }
        if (!in_hole) return s;
    }
    return -1;
}

std::optional<Point> PseudoCubeSet::cube_center(const Point& xbar, int slab_idx) const {
    if (slab_idx < 0 || slab_idx >= static_cast<int>(slabs.size())) return std::nullopt;
    const auto& slab = slabs[static_cast<std::size_t>(slab_idx)];
    int d = n - 1;
    Point c = Point::zero(d);
    for (int i = 0; i < d; ++i) {
        double u = xbar[i] - slab.xshift[i];
        double m = std::round(u / lattice_step);
        if (std::abs(u - m * lattice_step) >= cube_side / 2) return std::nullopt;
        c[i] = m * lattice_step + slab.xshift[i];
    }
    return c;
}

PseudoCubeSet build_gamma_j(double x1, int j, const ExperimentParams& p,
                            const std::vector<Point>& thetas) {
    if (static_cast<int>(thetas.size()) < 2 * j)
        throw std::invalid_argument("need thetas up to 2j (have " +
                                    std::to_string(thetas.size()) + ", level " +
                                    std::to_string(j) + ")");
    TimeLattice tl = build_T(j, x1, p.lambda, p.sigma);
    PseudoCubeSet set;
    set.level = j;
    set.n = p.n;
    set.x1 = x1;
    set.cube_side = p.eps2 * std::pow(p.lambda, -j);
    set.lattice_step = std::pow(p.lambda, j * (p.sigma - 1.0));
    for (double t : tl.members) {
        TimeSlab slab;
        slab.t = t;
        slab.xshift = t * thetas[static_cast<std::size_t>(j - 1)];
        for (int k = j + 1; k <= 2 * j; ++k) {
            HoleFamily hf;
            hf.k = k;
            hf.lattice_step = std::pow(p.lambda, k * (p.sigma - 1.0));
            hf.shift = std::pow(p.lambda, k - j) * t * thetas[static_cast<std::size_t>(k - 1)];
            hf.side = p.eps2 * std::pow(p.lambda, -k * (1.0 - 2 * p.delta_w));
            slab.holes.push_back(hf);
        }
        set.slabs.push_back(std::move(slab));
    }
    return set;
}

std::vector<Point> gamma_cube_centers_in(const PseudoCubeSet& set, double lo, double hi,
                                         std::size_t cap) {
    int d = set.n - 1;
    std::vector<Point> out;
    for (const auto& slab : set.slabs) {
        std::array<long long, kMaxDim> m0{}, m1{};
        double count = 1;
        for (int i = 0; i < d; ++i) {
            m0[static_cast<std::size_t>(i)] =
                static_cast<long long>(std::ceil((lo - slab.xshift[i]) / set.lattice_step));
            m1[static_cast<std::size_t>(i)] =
                static_cast<long long>(std::floor((hi - slab.xshift[i]) / set.lattice_step));
            count *= std::max(0.0, static_cast<double>(m1[static_cast<std::size_t>(i)] -
                                                       m0[static_cast<std::size_t>(i)] + 1));
        }
        if (count <= 0) continue;
        if (static_cast<double>(out.size()) + count > static_cast<double>(cap))
            throw std::runtime_error("sample budget: cube enumeration exceeds cap");
        std::array<long long, kMaxDim> idx = m0;
        while (true) {
            Point c = slab.xshift;
            double cap2 = 0;
            for (int i = 0; i < d; ++i) {
                double latt = static_cast<double>(idx[static_cast<std::size_t>(i)]) *
                              set.lattice_step;
                c[i] += latt;
                cap2 += latt * latt;
            }
            if (cap2 <= set.center_cap * set.center_cap) out.push_back(c);
            int i = 0;
            while (i < d &&
                   ++idx[static_cast<std::size_t>(i)] > m1[static_cast<std::size_t>(i)]) {
                idx[static_cast<std::size_t>(i)] = m0[static_cast<std::size_t>(i)];
                ++i;
            }
            if (i == d) break;
        }
    }
    return out;
}

std::vector<Point> quasi_lattice(const std::vector<Point>& centers, double spacing, int dim) {
    if (!(spacing > 0)) throw std::invalid_argument("quasi_lattice: spacing must be > 0");
    auto lex_less = [dim](const Point& a, const Point& b) {
        for (int i = 0; i < dim; ++i) {
            if (a[i] < b[i]) return true;
            if (a[i] > b[i]) return false;
        }
        return false;
    };
    auto targets = lattice_in_closed_ball(spacing, 0.5, dim);
    // pass 1: nearest center per target; a target with no center in range is
    // the density violation and is reported before uniqueness is enforced
    std::vector<const Point*> assigned;
    for (const auto& y : targets) {
        const Point* best = nullptr;
        double best_d2 = spacing * spacing * (1 + 1e-12);
        for (const auto& c : centers) {
            double d2 = eucl_dist2(c, y);
            if (d2 < best_d2 - 1e-18 ||
                (std::abs(d2 - best_d2) <= 1e-18 && best && lex_less(c, *best))) {
                best = &c;
                best_d2 = d2;
            }
        }
        if (!best) {
            std::ostringstream msg;
            msg << "density violated: no center within spacing of y = (";
            for (int i = 0; i < dim; ++i) msg << (i ? "," : "") << y[i];
            msg << ")";
            throw std::runtime_error(msg.str());
        }
        assigned.push_back(best);
    }
    // pass 2: assignments must be distinct
    std::vector<Point> selected;
    std::map<std::vector<double>, std::size_t> used;
    for (const Point* best : assigned) {
        std::vector<double> key(best->c.begin(), best->c.begin() + dim);
        if (!used.emplace(key, selected.size()).second)
            throw std::runtime_error("duplicate assignment in quasi-lattice selection");
        selected.push_back(*best);
    }
    return selected;
}

} // namespace carleson
