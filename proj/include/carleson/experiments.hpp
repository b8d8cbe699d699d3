#pragma once

#include <string>
#include <vector>

#include "carleson/report.hpp"

namespace carleson {

struct MaximalScanOptions {
    int n = 2;
    double sigma = 0.3;
    std::vector<double> R_list = {16384, 65536, 262144, 1048576};
    double rho = 0.05;
    double theta = 0.41421356237309515;  // fixed deterministic direction
    bool erg_theta = false;              // per-R erg certification; failures skip the R
    int t_samples = 12;
    int x1_per_t = 2;
    int xbar_per_x1 = 10;
    double slope_margin = 0.05;
    std::uint64_t seed = 1;
    double tol = 1e-10;
};

// Theorem-4 shadow: per R builds f, maximizes |e^{i t/(2πR)Δ} f| over the
// certified lattice times in (x1, x1+R^{-1/2}) on the certified point
// families, and fits the growth exponent of Q(R) = ||M||_{L2 sampled}/||f||_2.
// Contract: fitted slope >= 1/4 + (n-1)σ/2 - slope_margin.
ProbeReport maximal_scan(const MaximalScanOptions& opts);

// Target slope of the maximal-estimate experiment.
inline double maximal_slope_target(int n, double sigma) {
    return 0.25 + (n - 1) * sigma / 2;
}

struct DivergenceOptions {
    ExperimentParams params;
    int x_samples = 200;     // candidate points drawn from Γ^2 ∩ ... ∩ Γ^J
    int min_certified = 20;  // points that must pass every per-point gate
    int probe_levels_from = 2;
    double tol = 1e-9;
    int oracle_points = 3;  // dense-time-grid cross-checks
};

// Theorem-1 shadow: at sampled x in the common pseudo-cube sets, per level j
// finds t_j(x) maximizing |S_N u0|, certifies the own-term lower bound, the
// measured A1/A2 triangle ledger own - A1 - A2 > 0.25 own, and the
// consecutive-level growth band [λ^δ/2, 2λ^δ].
ProbeReport divergence_probe(const DivergenceOptions& opts);

struct RunResult {
    std::vector<ProbeReport> reports;
    std::string out_dir;
    bool all_pass = true;
};

// Dispatches the experiments named in the config (key `experiments`), writes
// one report JSON per experiment plus a manifest under the run directory.
// Identical config + seed produce byte-identical report files; wall-clock and
// timestamps live in the manifest.
RunResult run_config(const std::string& config_path, const std::string& out_dir_override = "");

} // namespace carleson
