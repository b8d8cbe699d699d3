#include "carleson/builder.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carleson {

FrequencyComb build_omega(double R, double sigma, int n, double rho, std::size_t budget) {
    if (!(R > 4)) throw std::invalid_argument("build_omega: R must be > 4");
    if (n < 2) throw std::invalid_argument("build_omega: n must be >= 2");
    FrequencyComb comb;
    comb.level = 0;
    comb.n = n;
    comb.lattice_step = 2 * M_PI * std::pow(R, 1.0 - sigma);
    comb.box_half = rho;
    comb.points = lattice_in_closed_ball(comb.lattice_step, R, n - 1, budget);
    return comb;
}

FrequencyComb build_omega_j(int j, double lambda, double sigma, int n, double eps1,
                            std::size_t budget) {
    if (j < 1) throw std::invalid_argument("build_omega_j: j must be >= 1");
    if (n < 2) throw std::invalid_argument("build_omega_j: n must be >= 2");
    FrequencyComb comb;
    comb.level = j;
    comb.n = n;
    comb.lattice_step = 2 * M_PI * std::pow(lambda, j * (1.0 - sigma));
    comb.box_half = eps1 / (2 * std::sqrt(static_cast<double>(n - 1)));

    double lo = std::pow(lambda, j), hi = std::pow(lambda, j + 1);
    auto kmin = static_cast<long long>(std::ceil(lo / comb.lattice_step));
    if (kmin < 1) kmin = 1;
    auto kmax = static_cast<long long>(std::floor(hi / comb.lattice_step));
    while (static_cast<double>(kmax) * comb.lattice_step >= hi) --kmax;  // strict upper bound
    while (static_cast<double>(kmin) * comb.lattice_step < lo) ++kmin;
    if (kmax < kmin) {
        // smallest admissible M: level-j range must reach the first lattice point
        double lam_min = std::pow(2 * M_PI, 1.0 / (j * sigma + 1));
        int m_min = static_cast<int>(std::ceil((1.0 - sigma) * std::log2(lam_min)));
        std::ostringstream msg;
        msg << "scale too small: level " << j << " comb empty; need lambda >= " << lam_min
            << " (M >= " << m_min << ")";
        throw std::runtime_error(msg.str());
    }
    std::vector<double> coord;
    for (long long k = kmax; k >= kmin; --k) coord.push_back(-static_cast<double>(k) * comb.lattice_step);
    for (long long k = kmin; k <= kmax; ++k) coord.push_back(static_cast<double>(k) * comb.lattice_step);

    int d = n - 1;
    double total = std::pow(static_cast<double>(coord.size()), d);
    if (total > static_cast<double>(budget))
        throw std::runtime_error("sample budget: comb point count exceeds cap");
    std::array<std::size_t, kMaxDim> idx{};
    while (true) {
        Point p = Point::zero(d);
        for (int i = 0; i < d; ++i) p[i] = coord[idx[static_cast<std::size_t>(i)]];
        comb.points.push_back(p);
        int i = 0;
        while (i < d && ++idx[static_cast<std::size_t>(i)] >= coord.size()) {
            idx[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == d) break;
    }
    return comb;
}

namespace {

// assembles one level: ξ1 box (center mod1, half h1, amplitude amp) tensored
// with the comb boxes shifted by mod_bar
BandData assemble_level(const FrequencyComb& comb, double mod1, double h1, double amp1,
                        const Point& mod_bar, double comb_amp) {
    BandData band;
    band.dim = comb.n;
    band.pieces.reserve(comb.points.size());
    for (const auto& pt : comb.points) {
        BandPiece piece;
        piece.amplitude = Complex{amp1 * comb_amp, 0};
        piece.center = Point::zero(comb.n);
        piece.center[0] = mod1;
        for (int i = 0; i < comb.n - 1; ++i) piece.center[i + 1] = pt[i] + mod_bar[i];
        piece.half[0] = h1;
        for (int i = 1; i < comb.n; ++i) piece.half[static_cast<std::size_t>(i)] = comb.box_half;
        band.pieces.push_back(piece);
    }
    return band;
}

} // namespace

DataBundle build_f(double R, double sigma, const Point& theta, int n, double rho) {
    if (theta.dim != n - 1) throw std::invalid_argument("build_f: theta must have dim n-1");
    DataBundle b;
    b.multi_scale = false;
    b.combs.push_back(build_omega(R, sigma, n, rho));
    b.thetas.push_back(theta);
    b.band = assemble_level(b.combs[0], M_PI * R, rho * std::sqrt(R), std::pow(R, -0.5),
                            M_PI * R * theta, 1.0);
    b.band.check_disjoint();
    b.params.n = n;
    b.params.R = R;
    b.params.sigma = sigma;
    b.params.rho = rho;
    return b;
}

DataBundle build_u0(const ExperimentParams& params, const std::vector<Point>& thetas) {
    params.validate_multi_scale();
    if (static_cast<int>(thetas.size()) < params.J)
        throw std::invalid_argument("build_u0: need a theta per level");
    DataBundle b;
    b.multi_scale = true;
    b.params = params;
    b.band.dim = params.n;
    double prev_hi = 0;
    for (int j = 1; j <= params.J; ++j) {
        FrequencyComb comb =
            build_omega_j(j, params.lambda, params.sigma, params.n, params.eps1);
        double lamj = std::pow(params.lambda, j);
        double amp_comb = std::pow(params.lambda, j * params.delta_w) / comb.measure();
        BandData level =
            assemble_level(comb, M_PI * lamj, params.eps1 * std::sqrt(lamj),
                           std::pow(lamj, -0.5),
                           M_PI * lamj * thetas[static_cast<std::size_t>(j - 1)], amp_comb);
        // levels must be separated in ξ1 (supports would collide otherwise)
        double lo1 = M_PI * lamj - params.eps1 * std::sqrt(lamj);
        if (lo1 <= prev_hi) throw std::runtime_error("level collision: lambda too small");
        prev_hi = M_PI * lamj + params.eps1 * std::sqrt(lamj);
        b.combs.push_back(comb);
        b.thetas.push_back(thetas[static_cast<std::size_t>(j - 1)]);
        b.level_bands.push_back(level);
        for (const auto& piece : level.pieces) b.band.pieces.push_back(piece);
    }
    b.band.check_disjoint();
    return b;
}

std::vector<double> DataBundle::level_l2_sq() const {
    std::vector<double> out;
    for (const auto& lb : level_bands) out.push_back(lb.l2_norm_sq());
    return out;
}

namespace {

// ∫_box (1+|ξ|^2)^s dξ by tensor Gauss panels, panel count doubled until the
// relative change drops below tol.
double box_weight_integral(const BandPiece& p, int dim, double s, double rel_tol) {
    static constexpr int kN = 15;
    static constexpr double kX[kN] = {
        -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
        -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
        -0.2011940939974345, 0.0,                 0.2011940939974345,
        0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
        0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
    static constexpr double kW[kN] = {
        0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
        0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
        0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
        0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
        0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

    auto weight = [&](const Point& xi) {
        double q = 1;
        for (int i = 0; i < dim; ++i) q += xi[i] * xi[i];
        return std::pow(q, s);
    };

    double prev = 0;
    for (int panels = 1; panels <= 64; panels *= 2) {
        // iterate tensor product of (panels * kN) nodes per dimension
        std::array<int, kMaxDim> pi{}, ni{};
        double total = 0;
        while (true) {
            Point xi = Point::zero(dim);
            double w = 1;
            for (int i = 0; i < dim; ++i) {
                double h = p.half[static_cast<std::size_t>(i)];
                double plen = 2 * h / panels;
                double lo = p.center[i] - h + pi[static_cast<std::size_t>(i)] * plen;
                xi[i] = lo + 0.5 * plen * (1.0 + kX[ni[static_cast<std::size_t>(i)]]);
                w *= 0.5 * plen * kW[ni[static_cast<std::size_t>(i)]];
            }
            total += w * weight(xi);
            int i = 0;
            while (i < dim) {
                if (++ni[static_cast<std::size_t>(i)] < kN) break;
                ni[static_cast<std::size_t>(i)] = 0;
                if (++pi[static_cast<std::size_t>(i)] < panels) break;
                pi[static_cast<std::size_t>(i)] = 0;
                ++i;
            }
            if (i == dim) break;
        }
        if (panels > 1 && std::abs(total - prev) <= rel_tol * std::abs(total)) return total;
        prev = total;
    }
    return prev;
}

} // namespace

double hs_norm_sq(const BandData& data, double s, double tol) {
    if (s < 0) throw std::invalid_argument("hs_norm: s must be >= 0");
    double sum = 0;
    for (const auto& p : data.pieces)
        sum += std::norm(p.amplitude) * box_weight_integral(p, data.dim, s, tol);
    return sum;
}

std::vector<ThetaCert> select_thetas(const ExperimentParams& params, int levels,
                                     bool require_certified, int a_panel) {
    params.validate_multi_scale();
    int d = params.n - 1;
    double gamma = params.alpha - 1;
    std::vector<ThetaCert> out;
    for (int j = 1; j <= levels; ++j) {
        double Rj = std::pow(params.lambda, j);
        ThetaCert tc;
        tc.level = j;
        bool found = false;
        auto try_theta = [&](const Point& theta) {
            DensityCertificate agg;
            agg.theta = theta;
            agg.pass = true;
            for (int i = 0; i < a_panel; ++i) {
                double a = 0.5 * (i + 0.5) / a_panel;  // x1 panel in (0, 1/2)
                DensityCertificate c =
                    verify_gamma_density(theta, params.sigma, gamma, params.eps2, Rj, a, d);
                agg.a_panel.push_back(a);
                agg.radii_by_a.push_back(c.radii_by_a[0]);
                agg.target_radius = c.target_radius;
                agg.probe_resolution = c.probe_resolution;
                agg.method = c.method;
                if (!c.pass) agg.pass = false;
            }
            tc.cert = agg;
            return agg.pass;
        };
        if (d == 1) {
            double base = std::ceil(std::pow(Rj, 0.5 - params.sigma));
            static constexpr double kU[] = {0,     0.04, -0.04, 0.08,  -0.08, 0.12, -0.12,
                                            0.16,  -0.16, 0.2,  -0.2,  0.3,  -0.3, 0.4,
                                            -0.4,  0.5,  -0.5,  0.7,   -0.7, 0.9,  -0.9};
            for (double u : kU) {
                Point theta((1.0 + u) / base);
                if (!(theta[0] > 0 && theta[0] < 1)) continue;
                if (try_theta(theta)) {
                    tc.theta = theta;
                    tc.certified = true;
                    found = true;
                    break;
                }
                if (tc.theta.dim == 0 || u == 0) tc.theta = theta;  // constructive fallback
            }
        } else {
            for (int attempt = 0; attempt < 32; ++attempt) {
                Point theta = sphere_direction(d, attempt, params.seed + static_cast<std::uint64_t>(j));
                if (attempt == 0) tc.theta = theta;
                if (try_theta(theta)) {
                    tc.theta = theta;
                    tc.certified = true;
                    found = true;
                    break;
                }
            }
        }
        if (!found && require_certified)
            throw std::runtime_error("theta certification failed at level " + std::to_string(j));
        out.push_back(tc);
    }
    return out;
}

} // namespace carleson
