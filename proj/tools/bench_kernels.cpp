// Times the OpenMP kernels against their serial reference implementations and
// checks that the results agree.

#include <chrono>
#include <cstdio>
#include <vector>

#include "carleson/band_propagator.hpp"
#include "carleson/builder.hpp"
#include "carleson/rng.hpp"
#include "carleson/torus_flow.hpp"

using namespace carleson;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void row(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%-6.2f max|diff| %.3g\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, max_diff);
}

} // namespace

int main() {
    std::printf("%-28s %13s %13s   %-8s\n", "kernel", "serial", "openmp", "speedup");

    {
        // covering radius: brute reference vs indexed scan
        auto s = TorusPointSet::on_torus(2);
        std::uint64_t st = 1;
        for (int i = 0; i < 2000; ++i) s.add(Point(rng_u01(st), rng_u01(st)));
        double res = 0.002;
        double r_ser = 0, r_par = 0;
        double t_ser = time_ms([&] { r_ser = covering_radius(s, res, Exec::serial); });
        double t_par = time_ms([&] { r_par = covering_radius(s, res, Exec::parallel); });
        row("covering_radius T^2", t_ser, t_par, std::abs(r_ser - r_par));
    }
    {
        // propagator grid scan on the single-scale data
        DataBundle f = build_f(65536.0, 0.3, Point(0.41), 2, 0.05);
        std::uint64_t st = 2;
        std::vector<Point> xs;
        std::vector<double> ts;
        for (int i = 0; i < 600; ++i) {
            Point x = Point::zero(2);
            x[0] = rng_u01(st);
            x[1] = 2 * rng_u01(st) - 1;
            xs.push_back(x);
            ts.push_back(rng_u01(st) / (2 * M_PI * 65536.0));
        }
        std::vector<Complex> out_ser(xs.size()), out_par(xs.size());
        double t_ser = time_ms([&] { evolve_grid(f.band, xs, ts, out_ser, 1e-10, Exec::serial); });
        double t_par =
            time_ms([&] { evolve_grid(f.band, xs, ts, out_par, 1e-10, Exec::parallel); });
        double diff = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            diff = std::max(diff, std::abs(out_ser[i] - out_par[i]));
        row("evolve_grid 600 pts", t_ser, t_par, diff);
    }
    {
        // euclidean covering radius with a fine probe grid (1D sorted index)
        auto s = TorusPointSet::in_ball(1, Point(0.0), 0.5);
        std::uint64_t st = 3;
        for (int i = 0; i < 30000; ++i) s.add(Point(rng_u01(st) - 0.5));
        double res = 2e-6;
        double r_ser = 0, r_par = 0;
        double t_ser = time_ms([&] { r_ser = covering_radius(s, res, Exec::serial); });
        double t_par = time_ms([&] { r_par = covering_radius(s, res, Exec::parallel); });
        row("covering_radius ball 1D", t_ser, t_par, std::abs(r_ser - r_par));
    }
    return 0;
}
