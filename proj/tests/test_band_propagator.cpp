#include <doctest.h>

#include <cmath>

#include "carleson/band_propagator.hpp"
#include "carleson/builder.hpp"
#include "carleson/rng.hpp"

using namespace carleson;

namespace {

// composite-Simpson Riemann oracle for ∫_{c-h}^{c+h} psi_factor(ξ) e^{ixξ - iaξ²} dξ
Complex riemann_band_integral(double x, double a, double c, double h, int steps,
                              const CutoffProfile* psi = nullptr, double N = 0) {
    if (steps % 2) ++steps;
    double lo = c - h, wid = 2 * h / steps;
    auto f = [&](double xi) {
        Complex v = Complex{std::cos(x * xi - a * xi * xi), std::sin(x * xi - a * xi * xi)};
        if (psi) v *= (*psi)(xi / N);
        return v;
    };
    Complex s = f(lo) + f(lo + 2 * h);
    for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * wid);
    return s * (wid / 3.0);
}

} // namespace

TEST_CASE("band integral closed forms") {
    // constant integrand
    Complex v = band_integral_1d(0.0, 0.0, 0.0, 0.05);
    CHECK(v.real() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(0.0));
    // pure modulation: e^{6i} 2 sin(0.15)/3
    Complex w = band_integral_1d(3.0, 0.0, 2.0, 0.05);
    Complex expect = Complex{std::cos(6.0), std::sin(6.0)} * (2 * std::sin(0.15) / 3.0);
    CHECK(std::abs(w - expect) < 1e-14);
}

TEST_CASE("band integral vs Riemann oracle, far-off-center Fresnel case") {
    Complex got = band_integral_1d(5.0, 0.37, 100.0, 0.05, 1e-12);
    Complex oracle = riemann_band_integral(5.0, 0.37, 100.0, 0.05, 20000);
    CHECK(std::abs(got - oracle) < 1e-8);
}

TEST_CASE("band integral vs Riemann oracle on a 50-case seeded panel") {
    std::uint64_t st = 2024;
    for (int i = 0; i < 50; ++i) {
        double x = (2 * rng_u01(st) - 1) * 10;
        double a = (2 * rng_u01(st) - 1) * 1.0;
        double c = (2 * rng_u01(st) - 1) * 100;
        double h = 0.01 + 2 * rng_u01(st);
        Complex got = band_integral_1d(x, a, c, h, 1e-10);
        // oracle resolution tied to the oscillation scale
        double rate = std::abs(x - 2 * a * c) + 2 * std::abs(a) * h + 1;
        int steps = static_cast<int>(std::min(400000.0, 2000 * (1 + rate * h)));
        Complex oracle = riemann_band_integral(x, a, c, h, steps);
        CHECK(std::abs(got - oracle) < 1e-8);
    }
}

TEST_CASE("quadrature depth error surfaces") {
    // extreme oscillation with an absurd tolerance cannot converge
    CHECK_THROWS_WITH_AS(band_integral_1d(1e9, 1e7, 0.0, 2.0, 1e-300), "quadrature depth",
                         std::runtime_error);
}

TEST_CASE("evolve basics") {
    BandData d;
    d.dim = 2;
    BandPiece p;
    p.amplitude = {1.5, 0.0};
    p.center = Point(0.0, 0.0);
    p.half = {0.3, 0.2};
    d.pieces.push_back(p);

    SUBCASE("t=0 at x=0: (2π)^{-n/2} amp Π 2h") {
        Complex v = evolve(d, Point(0.0, 0.0), 0.0);
        CHECK(v.real() == doctest::Approx(1.5 * 0.6 * 0.4 / (2 * M_PI)).epsilon(1e-13));
        CHECK(std::abs(v.imag()) < 1e-15);
    }
    SUBCASE("t=0 equals the sinc-product closed form") {
        Point x(0.7, -1.3);
        Complex v = evolve(d, x, 0.0);
        Complex expect = 1.5 / (2 * M_PI) * (2 * std::sin(0.3 * 0.7) / 0.7) *
                         (2 * std::sin(0.2 * -1.3) / -1.3);
        CHECK(std::abs(v - expect) < 1e-13);
    }
}

TEST_CASE("evolve vs 2D Riemann oracle, n=1") {
    BandData d;
    d.dim = 1;
    BandPiece p;
    p.amplitude = {1.0, 0.0};
    p.center = Point(2.0);
    p.half = {0.4};
    d.pieces.push_back(p);
    Complex got = evolve(d, Point(0.7), 0.2, 1e-12);
    Complex oracle = riemann_band_integral(0.7, 0.2, 2.0, 0.4, 40000) / std::sqrt(2 * M_PI);
    CHECK(std::abs(got - oracle) < 1e-7);
}

TEST_CASE("evolve linearity on random piece sets") {
    std::uint64_t st = 5;
    BandData d1, d2;
    d1.dim = d2.dim = 1;
    for (int i = 0; i < 3; ++i) {
        BandPiece p;
        p.amplitude = {rng_u01(st), rng_u01(st)};
        p.center = Point(-6.0 + 4 * i + rng_u01(st));
        p.half = {0.2 + 0.3 * rng_u01(st)};
        (i % 2 ? d1 : d2).pieces.push_back(p);
    }
    BandData sum;
    sum.dim = 1;
    Complex a{0.7, -0.2}, b{1.3, 0.4};
    for (auto p : d1.pieces) {
        p.amplitude *= a;
        sum.pieces.push_back(p);
    }
    for (auto p : d2.pieces) {
        p.amplitude *= b;
        sum.pieces.push_back(p);
    }
    Point x(0.31);
    double t = 0.17;
    Complex lhs = evolve(sum, x, t);
    Complex rhs = a * evolve(d1, x, t) + b * evolve(d2, x, t);
    CHECK(std::abs(lhs - rhs) < 1e-9);
}

TEST_CASE("Plancherel: position-space quadrature matches the Fourier-side norm") {
    // bandlimited data; |u(x,0)|^2 integrated far enough that the 1/(π h X)
    // tail bound is below the 1% budget
    BandData d;
    d.dim = 1;
    BandPiece p;
    p.amplitude = {1.0, 0.0};
    p.center = Point(3.0);
    p.half = {0.7};
    d.pieces.push_back(p);
    double exact = d.l2_norm_sq();  // 1.4
    double X = 300, step = 0.01, sum = 0;
    for (double x = -X; x <= X; x += step) {
        double v = std::abs(evolve(d, Point(x), 0.0, 1e-9));
        sum += v * v * step;
    }
    CHECK(sum == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("modulus conservation in time (L2 quadrature at t=0 and t=0.1)") {
    BandData d;
    d.dim = 1;
    BandPiece p;
    p.amplitude = {1.0, 0.0};
    p.center = Point(-1.0);
    p.half = {0.5};
    d.pieces.push_back(p);
    BandPiece q;
    q.amplitude = {0.0, 0.8};
    q.center = Point(2.0);
    q.half = {0.3};
    d.pieces.push_back(q);
    double exact = d.l2_norm_sq();
    for (double t : {0.0, 0.1}) {
        double X = 400, step = 0.02, sum = 0;
        for (double x = -X; x <= X; x += step) {
            double v = std::abs(evolve(d, Point(x), t, 1e-8));
            sum += v * v * step;
        }
        CHECK(sum == doctest::Approx(exact).epsilon(0.01));
    }
}

TEST_CASE("truncated evolution") {
    BandData d;
    d.dim = 1;
    BandPiece p;
    p.amplitude = {1.0, 0.0};
    p.center = Point(4.0);
    p.half = {0.5};
    d.pieces.push_back(p);
    CutoffProfile psi;

    SUBCASE("boxes inside [-N,N]: equals evolve exactly") {
        Complex a = evolve_truncated(d, Point(0.4), 0.1, 10.0, psi);
        Complex b = evolve(d, Point(0.4), 0.1);
        CHECK(std::abs(a - b) == 0.0);  // same code path by detection
    }
    SUBCASE("box beyond 2N contributes zero") {
        Complex a = evolve_truncated(d, Point(0.4), 0.1, 1.5, psi);
        CHECK(std::abs(a) == 0.0);
    }
    SUBCASE("box straddling the ramp matches the Riemann oracle with psi sampled") {
        double N = 4.0;  // box [3.5, 4.5] straddles N
        Complex got = evolve_truncated(d, Point(0.4), 0.1, N, psi, 1e-10);
        Complex oracle =
            riemann_band_integral(0.4, 0.1, 4.0, 0.5, 40000, &psi, N) / std::sqrt(2 * M_PI);
        CHECK(std::abs(got - oracle) < 1e-6);
    }
    SUBCASE("sharp profile clips the box") {
        CutoffProfile sharp{CutoffProfile::Kind::sharp};
        double N = 4.0;  // keeps [3.5, 4.0]
        Complex got = evolve_truncated(d, Point(0.4), 0.1, N, sharp, 1e-12);
        Complex oracle = riemann_band_integral(0.4, 0.1, 3.75, 0.25, 40000);
        CHECK(std::abs(got - oracle / std::sqrt(2 * M_PI)) < 1e-7);
    }
}

TEST_CASE("cutoff profile shape") {
    CutoffProfile psi;
    CHECK(psi(0.3) == 1.0);
    CHECK(psi(-1.0) == 1.0);
    CHECK(psi(2.0) == 0.0);
    CHECK(psi(1.5) == doctest::Approx(0.5));
    CHECK(psi(1.2) == psi(-1.2));
    for (double r = 1.0; r < 2.0; r += 0.1) CHECK(psi(r + 0.05) <= psi(r) + 1e-15);
}

TEST_CASE("dk factor") {
    double R = 4096, rho = 0.05;
    double ideal = 2 * rho / std::sqrt(2 * M_PI);
    SUBCASE("x1=t=0 gives exactly (2π)^{-1/2} 2ρ") {
        CHECK(dk_factor(0.0, 0.0, R, rho) == doctest::Approx(ideal).epsilon(1e-12));
    }
    SUBCASE("x1=t=0.5: phase bound t y²/2π keeps 99%") {
        CHECK(dk_factor(0.5, 0.5, R, rho) >= 0.99 * ideal);
    }
    SUBCASE("certified window |x1-t| <= R^{-1/2}, |t| <= 1") {
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 5; ++k) {
                double t = -1.0 + 2.0 * i / 4;
                double x1 = t + (2.0 * k / 4 - 1) / std::sqrt(R);
                CHECK(dk_factor(x1, t, R, rho) >= 0.9 * ideal);
            }
    }
    SUBCASE("decay outside the window (oracle-computed values)") {
        // at offset 10 R^{-1/2} the magnitude is sinc(10ρ) of the peak:
        // sin(0.5)/0.5 = 0.9589 - still large; the 0.5 drop needs ~38 R^{-1/2}
        double r10 = dk_factor(10.0 / std::sqrt(R), 0.0, R, rho);
        CHECK(r10 == doctest::Approx(ideal * std::sin(0.5) / 0.5).epsilon(1e-6));
        // at 80 R^{-1/2}: |sin(4)/4| = 0.189 of the peak, below 0.5
        double r80 = dk_factor(80.0 / std::sqrt(R), 0.0, R, rho);
        CHECK(r80 == doctest::Approx(ideal * std::abs(std::sin(4.0)) / 4.0).epsilon(1e-6));
        CHECK(r80 < 0.5 * ideal);
    }
}

TEST_CASE("galilean identity") {
    // synthetic comb in one tangential dimension
    BandData g;
    g.dim = 1;
    for (int k = -1; k <= 1; ++k) {
        BandPiece p;
        p.amplitude = {1.0, 0.0};
        p.center = Point(40.0 * k);
        p.half = {0.05};
        g.pieces.push_back(p);
    }
    double R = 256;
    SUBCASE("t=0 residual vanishes") {
        CHECK(galilean_residual(g, Point(0.61), R, Point(0.7), 0.0) < 1e-12);
    }
    SUBCASE("theta=0 residual vanishes") {
        CHECK(galilean_residual(g, Point(0.0), R, Point(0.7), 0.37) < 1e-12);
    }
    SUBCASE("random panel, seed=3: residual < 1e-7") {
        std::uint64_t st = 3;
        for (int i = 0; i < 20; ++i) {
            Point xb(2 * rng_u01(st) - 1);
            double t = rng_u01(st);
            CHECK(galilean_residual(g, Point(0.61), R, xb, t, 1e-10) < 1e-7);
        }
    }
}

TEST_CASE("phase1 no-cancellation certificate") {
    // moderate scale keeps the test quick; comb built by the §3 builder
    double R = 65536, sigma = 0.3;
    int n = 2;
    DataBundle f = build_f(R, sigma, Point(0.37), n, 0.05);
    // unshifted comb data g: rebuild from the comb (amplitude 1 boxes)
    BandData g;
    g.dim = n - 1;
    for (const auto& pt : f.combs[0].points) {
        BandPiece p;
        p.amplitude = {1.0, 0.0};
        p.center = pt;
        p.half[0] = f.combs[0].box_half;
        g.pieces.push_back(p);
    }
    auto cert = phase1_check(g, R, sigma, 0.05, n, 60, 11);
    CHECK(cert.pass);
    CHECK(cert.min_ratio >= 0.9);  // exact lattice points with tiny offsets stay near 1

    SUBCASE("midway points can drop below the certified set's bound (no claim there)") {
        double L = std::pow(R, sigma - 1.0);
        double ideal = cert.omega_measure / std::sqrt(2 * M_PI);
        double t = std::pow(R, 2 * sigma - 1) * 3;
        double worst = 1;
        for (int k = 0; k < 8; ++k) {
            Point mid(L * (k + 0.5));
            worst = std::min(worst, std::abs(evolve(g, mid, t / (2 * M_PI * R))) / ideal);
        }
        CHECK(worst < 0.5);
    }
}
