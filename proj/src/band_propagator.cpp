#include "carleson/band_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "carleson/rng.hpp"

namespace carleson {

void BandData::check_disjoint() const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            bool overlap = true;
            for (int k = 0; k < dim; ++k) {
                if (pieces[i].hi(k) <= pieces[j].lo(k) + 1e-15 ||
                    pieces[j].hi(k) <= pieces[i].lo(k) + 1e-15) {
                    overlap = false;
                    break;
                }
            }
            if (overlap) throw std::invalid_argument("band data: boxes overlap");
        }
}

BandData BandData::translated(const Point& shift) const {
    if (shift.dim != dim) throw std::invalid_argument("band data: shift dimension mismatch");
    BandData out = *this;
    for (auto& p : out.pieces) p.center = p.center + shift;
    return out;
}

namespace {

// Gauss-Legendre 15 on [-1, 1]
constexpr int kGaussN = 15;
constexpr double kGx[kGaussN] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGw[kGaussN] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

template <typename F>
Complex gauss15(const F& f, double a, double b) {
    double mid = 0.5 * (a + b), halflen = 0.5 * (b - a);
    Complex s{0, 0};
    for (int i = 0; i < kGaussN; ++i) s += kGw[i] * f(mid + halflen * kGx[i]);
    return halflen * s;
}

template <typename F>
Complex adaptive_panel(const F& f, double a, double b, Complex whole, double tol, int depth) {
    double mid = 0.5 * (a + b);
    Complex left = gauss15(f, a, mid);
    Complex right = gauss15(f, mid, b);
    Complex sum = left + right;
    if (std::abs(sum - whole) <= tol) return sum;
    if (depth >= 40) throw std::runtime_error("quadrature depth");
    return adaptive_panel(f, a, mid, left, tol / 2, depth + 1) +
           adaptive_panel(f, mid, b, right, tol / 2, depth + 1);
}

// ∫_a^b f with |error| <= tol; pre-splits so each panel sees a bounded phase swing.
template <typename F>
Complex adaptive_integral(const F& f, double a, double b, double tol, double phase_swing) {
    int panels = static_cast<int>(std::clamp(std::ceil(phase_swing / 4.0), 1.0, 4096.0));
    Complex total{0, 0};
    double step = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        double pa = a + i * step, pb = i + 1 == panels ? b : a + (i + 1) * step;
        total += adaptive_panel(f, pa, pb, gauss15(f, pa, pb), tol / (2 * panels), 0);
    }
    return total;
}

Complex cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

} // namespace

Complex band_integral_1d(double x, double a, double c, double h, double tol) {
    if (!(h > 0)) throw std::invalid_argument("band integral: half-width must be > 0");
    if (!(tol > 0)) throw std::invalid_argument("band integral: tol must be > 0");
    if (a == 0.0) {
        if (x == 0.0) return {2 * h, 0};
        return cis(x * c) * (2 * std::sin(h * x) / x);
    }
    // center shift: e^{i(xc - a c^2)} ∫_{-h}^{h} e^{i x' y - i a y^2} dy, x' = x - 2ac
    double xp = x - 2 * a * c;
    auto f = [&](double y) { return cis(xp * y - a * y * y); };
    double swing = (std::abs(xp) + 2 * std::abs(a) * h) * 2 * h;
    return cis(x * c - a * c * c) * adaptive_integral(f, -h, h, tol, swing);
}

Complex band_integral_1d_cut(double x, double a, double c, double h, double N,
                             const CutoffProfile& psi, double tol) {
    if (!(N > 0)) throw std::invalid_argument("band integral: N must be > 0");
    double lo = c - h, hi = c + h;
    if (psi.kind == CutoffProfile::Kind::sharp) {
        double clo = std::max(lo, -N), chi = std::min(hi, N);
        if (clo >= chi) return {0, 0};
        double cc = 0.5 * (clo + chi), ch = 0.5 * (chi - clo);
        return band_integral_1d(x, a, cc, ch, tol);
    }
    // split at the psi breakpoints: +-2N, +-N
    std::array<double, 6> cuts = {lo, -2 * N, -N, N, 2 * N, hi};
    std::sort(cuts.begin(), cuts.end());
    Complex total{0, 0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double sa = std::max(lo, cuts[i]), sb = std::min(hi, cuts[i + 1]);
        if (sa >= sb) continue;
        double midpt = 0.5 * (sa + sb);
        double pv = psi(midpt / N);
        if (pv == 0.0) continue;
        if (pv == 1.0 && psi(sa / N) == 1.0 && psi(sb / N) == 1.0) {
            double cc = 0.5 * (sa + sb), ch = 0.5 * (sb - sa);
            total += band_integral_1d(x, a, cc, ch, tol / 5);
        } else {
            // ramp region, psi folded into the integrand (center-shifted)
            double cc = 0.5 * (sa + sb), ch = 0.5 * (sb - sa);
            double xp = x - 2 * a * cc;
            auto f = [&](double y) {
                return psi((cc + y) / N) * cis(xp * y - a * y * y);
            };
            double swing = (std::abs(xp) + 2 * std::abs(a) * ch) * 2 * ch + 4;
            total += cis(x * cc - a * cc * cc) *
                     adaptive_integral(f, -ch, ch, tol / 5, swing);
        }
    }
    return total;
}

namespace {

double norm_factor(int n) { return std::pow(2 * M_PI, -0.5 * n); }

} // namespace

Complex evolve(const BandData& data, const Point& x, double t, double tol) {
    if (x.dim != data.dim) throw std::invalid_argument("evolve: point dimension mismatch");
    Complex total{0, 0};
    double dim_tol = tol / std::max<std::size_t>(1, data.pieces.size());
    for (const auto& p : data.pieces) {
        Complex prod = p.amplitude;
        for (int j = 0; j < data.dim; ++j)
            prod *= band_integral_1d(x[j], t, p.center[j], p.half[static_cast<std::size_t>(j)],
                                     dim_tol);
        total += prod;
    }
    return norm_factor(data.dim) * total;
}

Complex evolve_truncated(const BandData& data, const Point& x, double t, double N,
                         const CutoffProfile& psi, double tol) {
    if (!(N > 0)) throw std::invalid_argument("evolve_truncated: N must be > 0");
    Complex total{0, 0};
    double dim_tol = tol / std::max<std::size_t>(1, data.pieces.size());
    for (const auto& p : data.pieces) {
        bool inside = true, outside = false;
        for (int j = 0; j < data.dim; ++j) {
            if (p.lo(j) < -N || p.hi(j) > N) inside = false;
            if (p.hi(j) <= -2 * N || p.lo(j) >= 2 * N) outside = true;
        }
        if (outside) continue;
        Complex prod = p.amplitude;
        for (int j = 0; j < data.dim; ++j) {
            double hj = p.half[static_cast<std::size_t>(j)];
            prod *= inside ? band_integral_1d(x[j], t, p.center[j], hj, dim_tol)
                           : band_integral_1d_cut(x[j], t, p.center[j], hj, N, psi, dim_tol);
        }
        total += prod;
    }
    return norm_factor(data.dim) * total;
}

void evolve_grid(const BandData& data, std::span<const Point> xs, std::span<const double> ts,
                 std::span<Complex> out, double tol, Exec exec) {
    if (xs.size() != ts.size() || out.size() != xs.size())
        throw std::invalid_argument("evolve_grid: span size mismatch");
    auto m = static_cast<long long>(xs.size());
    if (exec == Exec::serial) {
        for (long long i = 0; i < m; ++i)
            out[static_cast<std::size_t>(i)] =
                evolve(data, xs[static_cast<std::size_t>(i)], ts[static_cast<std::size_t>(i)], tol);
    } else {
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < m; ++i)
            out[static_cast<std::size_t>(i)] =
                evolve(data, xs[static_cast<std::size_t>(i)], ts[static_cast<std::size_t>(i)], tol);
    }
}

double dk_factor(double x1, double t, double R, double rho, double tol) {
    if (!(R > 4)) throw std::invalid_argument("dk_factor: R must be > 4");
    double xp = std::sqrt(R) * (x1 - t);
    return std::abs(band_integral_1d(xp, t / (2 * M_PI), 0.0, rho, tol)) / std::sqrt(2 * M_PI);
}

double galilean_residual(const BandData& g, const Point& theta, double R, const Point& xbar,
                         double t, double tol) {
    BandData f_theta = g.translated(M_PI * R * theta);
    double a = t / (2 * M_PI * R);
    double lhs = std::abs(evolve(f_theta, xbar, a, tol));
    double rhs = std::abs(evolve(g, xbar - t * theta, a, tol));
    return std::abs(lhs - rhs);
}

PhaseCertificate phase1_check(const BandData& g, double R, double sigma, double eps, int n,
                              int sample_budget, std::uint64_t seed, double c, double tol) {
    int d = n - 1;
    if (d < 1 || d > 2) throw std::invalid_argument("phase1_check: supports n = 2 or 3");
    if (g.dim != d) throw std::invalid_argument("phase1_check: data dimension != n-1");

    PhaseCertificate cert;
    cert.c = c;
    for (const auto& p : g.pieces) cert.omega_measure += p.volume();
    double ideal = std::pow(2 * M_PI, -0.5 * d) * cert.omega_measure;

    double L = std::pow(R, sigma - 1.0);
    auto kmax = static_cast<long long>(std::floor(2.0 / L));
    double t_step = std::pow(R, 2 * sigma - 1);
    auto tmax = static_cast<long long>(std::ceil(1.0 / t_step)) - 1;
    while (static_cast<double>(tmax) * t_step >= 1.0) --tmax;
    if (tmax < 1) throw std::runtime_error("empty time lattice");
    double off_r = eps / R;

    std::uint64_t st = seed;
    cert.min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sample_budget; ++i) {
        Point xb = Point::zero(d);
        while (true) {
            double s2 = 0;
            for (int j = 0; j < d; ++j) {
                auto k = static_cast<long long>(std::floor(rng_u01(st) * (2 * kmax + 1))) - kmax;
                xb[j] = static_cast<double>(k) * L;
                s2 += xb[j] * xb[j];
            }
            if (s2 <= 4.0) break;
        }
        // offset within the ball B(0, eps/R)
        while (true) {
            Point off = Point::zero(d);
            double s2 = 0;
            for (int j = 0; j < d; ++j) {
                off[j] = (2 * rng_u01(st) - 1) * off_r;
                s2 += off[j] * off[j];
            }
            if (s2 <= off_r * off_r) {
                xb = xb + off;
                break;
            }
        }
        auto q = 1 + static_cast<long long>(std::floor(rng_u01(st) * static_cast<double>(tmax)));
        double t = static_cast<double>(q) * t_step;
        double ratio = std::abs(evolve(g, xb, t / (2 * M_PI * R), tol)) / ideal;
        ++cert.samples;
        if (ratio < cert.min_ratio) {
            cert.min_ratio = ratio;
            cert.witness = {xb, t, ratio};
        }
    }
    cert.pass = cert.min_ratio >= c;
    return cert;
}

} // namespace carleson
