// carleson-lab: experiment driver CLI.
// Exit codes: 0 = all certificates pass, 1 = a certificate failed, 2 = usage
// or configuration error.

#include <CLI11.hpp>

#include "carleson/rng.hpp"
#include <iostream>
#include <optional>
#include <sstream>

#include "carleson/experiments.hpp"
#include "carleson/lattice_geometry.hpp"

using namespace carleson;

namespace {

struct GridSpec {
    double lo = 0, hi = 0;
    int count = 1;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' || g.count < 1)
        throw CLI::ValidationError("grid spec must be lo:hi:count");
    return g;
}

double grid_at(const GridSpec& g, int i) {
    if (g.count == 1) return g.lo;
    return g.lo + (g.hi - g.lo) * i / (g.count - 1);
}

ExperimentParams load_params(const std::string& config) {
    ExperimentParams p;
    if (!config.empty()) apply_config(p, parse_config_file(config));
    return p;
}

std::vector<Point> thetas_for(const ExperimentParams& p, int levels) {
    auto certs = select_thetas(p, levels);
    std::vector<Point> out;
    for (auto& c : certs) out.push_back(c.theta);
    return out;
}

int report_exit(const ProbeReport& rep, const std::string& out) {
    if (out.empty())
        std::cout << rep.dump();
    else
        write_text_file(out, rep.dump());
    return rep.pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"carleson-lab: desk-scale laboratory for Schrodinger divergence sets"};
    app.require_subcommand(1);

    std::string config, out, csv_out;

    // run
    auto* run = app.add_subcommand("run", "run the experiments listed in a config file");
    std::string run_config_path, run_out_dir;
    run->add_option("config", run_config_path, "config file")->required();
    run->add_option("--out-dir", run_out_dir, "run directory (default from config)");

    // erg-search
    auto* erg = app.add_subcommand("erg-search", "search and certify an ergodic direction");
    ErgParams ep;
    int attempts = 64, a_panel = 10;
    erg->add_option("--R", ep.R, "scale")->required();
    erg->add_option("--d", ep.d, "dimension");
    erg->add_option("--delta", ep.delta_t, "spacing exponent");
    erg->add_option("--kappa", ep.kappa, "density exponent");
    erg->add_option("--eps", ep.eps, "density constant");
    erg->add_option("--a", ep.a, "window offset");
    erg->add_option("--seed", ep.seed, "rng seed");
    erg->add_option("--attempts", attempts, "candidate budget");
    erg->add_option("--a-panel", a_panel, "window offsets certified");
    erg->add_option("--out", out, "write certificate JSON here (default stdout)");

    // evolve-dump
    auto* ed = app.add_subcommand("evolve-dump", "CSV of the evolved field on a grid");
    std::string data_kind = "f", x1_spec = "0:0:1", xbar_spec = "0:0:1", t_spec = "0:0:1";
    double ncut = 0;
    ed->add_option("--config", config, "config file");
    ed->add_option("--data", data_kind, "f (single-scale) or u0 (multi-scale)");
    ed->add_option("--x1", x1_spec, "x1 grid lo:hi:count");
    ed->add_option("--xbar", xbar_spec, "xbar grid lo:hi:count");
    ed->add_option("--t", t_spec, "time grid lo:hi:count");
    ed->add_option("--ncut", ncut, "apply the S_N cutoff at this N");
    ed->add_option("--out", out, "output CSV path (default stdout)");

    // build-dump
    auto* bd = app.add_subcommand("build-dump", "dump the data bundle as JSON");
    bd->add_option("--config", config, "config file");
    bd->add_option("--data", data_kind, "f or u0");
    bd->add_option("--out", out, "output path (default stdout)");

    // geometry-dump
    auto* gd = app.add_subcommand("geometry-dump", "cube inventory of a Gamma^j slice");
    int gj = 2;
    double gx1 = 0.2, glo = -0.5, ghi = 0.5;
    gd->add_option("--config", config, "config file");
    gd->add_option("--j", gj, "level");
    gd->add_option("--x1", gx1, "slice anchor");
    gd->add_option("--lo", glo, "region lower end");
    gd->add_option("--hi", ghi, "region upper end");
    gd->add_option("--out", out, "output path (default stdout)");

    // member
    auto* mem = app.add_subcommand("member", "0/1 membership of stdin points in Gamma^j_x1");
    mem->add_option("--config", config, "config file");
    mem->add_option("--j", gj, "level");
    mem->add_option("--x1", gx1, "slice anchor");

    // content-check
    auto* cc = app.add_subcommand("content-check", "Hausdorff-content certificates");
    std::string j_panel_spec = "2,3,4,5";
    int n_cubes = 5;
    std::optional<double> beta_opt;
    cc->add_option("--config", config, "config file");
    cc->add_option("--beta", beta_opt, "content exponent (default mid-interval)");
    cc->add_option("--j-panel", j_panel_spec, "comma-separated levels");
    cc->add_option("--cubes", n_cubes, "number of query cubes");
    cc->add_option("--csv", csv_out, "write per-cube mass ratios CSV here");
    cc->add_option("--out", out, "output path (default stdout)");

    // maximal-scan
    auto* ms = app.add_subcommand("maximal-scan", "maximal-estimate blow-up rate");
    MaximalScanOptions mopts;
    std::string r_list_spec;
    ms->add_option("--config", config, "config file");
    ms->add_option("--R-list", r_list_spec, "comma-separated R values");
    ms->add_option("--theta", mopts.theta, "fixed direction");
    ms->add_option("--t-samples", mopts.t_samples, "lattice times sampled per R");
    ms->add_option("--xbar-per-x1", mopts.xbar_per_x1, "tangential samples per slice");
    ms->add_option("--out", out, "report path (default stdout)");

    // diverge-probe
    auto* dp = app.add_subcommand("diverge-probe", "multi-scale divergence growth probe");
    DivergenceOptions dopts;
    dp->add_option("--config", config, "config file");
    dp->add_option("--x-samples", dopts.x_samples, "candidate points");
    dp->add_option("--min-certified", dopts.min_certified, "points required to pass");
    dp->add_option("--out", out, "report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            RunResult r = run_config(run_config_path, run_out_dir);
            for (const auto& rep : r.reports)
                std::cout << rep.experiment << ": " << (rep.pass() ? "pass" : "FAIL") << "\n";
            std::cout << "reports in " << r.out_dir << "\n";
            return r.all_pass ? 0 : 1;
        }
        if (erg->parsed()) {
            DensityCertificate cert = erg_search_theta(ep, attempts, a_panel);
            Json j = json_density_cert(cert);
            std::string text = j.dump(2) + "\n";
            if (out.empty())
                std::cout << text;
            else
                write_text_file(out, text);
            return cert.pass ? 0 : 1;
        }
        if (ed->parsed()) {
            ExperimentParams p = load_params(config);
            DataBundle bundle =
                data_kind == "u0"
                    ? build_u0(p, thetas_for(p, 2 * p.J))
                    : build_f(p.R, p.sigma, Point(0.41421356237309515), p.n, p.rho);
            GridSpec gx = parse_grid(x1_spec), gb = parse_grid(xbar_spec),
                     gt = parse_grid(t_spec);
            std::ostringstream csv;
            csv << "x1,xbar,t,re,im,abs\n";
            CutoffProfile psi;
            for (int i = 0; i < gx.count; ++i)
                for (int k = 0; k < gb.count; ++k)
                    for (int m = 0; m < gt.count; ++m) {
                        Point x = Point::zero(2);
                        x[0] = grid_at(gx, i);
                        x[1] = grid_at(gb, k);
                        double t = grid_at(gt, m);
                        Complex v = ncut > 0
                                        ? evolve_truncated(bundle.band, x, t, ncut, psi)
                                        : evolve(bundle.band, x, t);
                        csv << x[0] << "," << x[1] << "," << t << "," << v.real() << ","
                            << v.imag() << "," << std::abs(v) << "\n";
                    }
            if (out.empty())
                std::cout << csv.str();
            else
                write_text_file(out, csv.str());
            return 0;
        }
        if (bd->parsed()) {
            ExperimentParams p = load_params(config);
            DataBundle bundle =
                data_kind == "u0"
                    ? build_u0(p, thetas_for(p, 2 * p.J))
                    : build_f(p.R, p.sigma, Point(0.41421356237309515), p.n, p.rho);
            std::string text = json_bundle(bundle).dump(2) + "\n";
            if (out.empty())
                std::cout << text;
            else
                write_text_file(out, text);
            return 0;
        }
        if (gd->parsed()) {
            ExperimentParams p = load_params(config);
            auto thetas = thetas_for(p, 2 * gj);
            PseudoCubeSet set = build_gamma_j(gx1, gj, p, thetas);
            Json j;
            j["level"] = gj;
            j["x1"] = gx1;
            j["cube_side"] = set.cube_side;
            j["lattice_step"] = set.lattice_step;
            Json slabs = Json::array();
            for (const auto& s : set.slabs) {
                Json sj;
                sj["t"] = s.t;
                sj["xshift"] = s.xshift[0];
                Json holes = Json::array();
                for (const auto& h : s.holes) {
                    Json hj;
                    hj["k"] = h.k;
                    hj["lattice_step"] = h.lattice_step;
                    hj["shift"] = h.shift[0];
                    hj["side"] = h.side;
                    holes.push_back(hj);
                }
                sj["holes"] = holes;
                slabs.push_back(sj);
            }
            j["slabs"] = slabs;
            auto centers = gamma_cube_centers_in(set, glo, ghi);
            Json cj = Json::array();
            for (const auto& c : centers) cj.push_back(c[0]);
            j["open_cube_centers"] = cj;
            std::string text = j.dump(2) + "\n";
            if (out.empty())
                std::cout << text;
            else
                write_text_file(out, text);
            return 0;
        }
        if (mem->parsed()) {
            ExperimentParams p = load_params(config);
            auto thetas = thetas_for(p, 2 * gj);
            PseudoCubeSet set = build_gamma_j(gx1, gj, p, thetas);
            std::string line;
            while (std::getline(std::cin, line)) {
                if (line.empty()) continue;
                std::istringstream in(line);
                Point x = Point::zero(p.n - 1);
                for (int i = 0; i < p.n - 1; ++i) in >> x[i];
                std::cout << (set.contains(x) ? 1 : 0) << "\n";
            }
            return 0;
        }
        if (cc->parsed()) {
            ExperimentParams p = load_params(config);
            if (beta_opt) {
                p.beta = *beta_opt;
                p.beta_set = true;
            }
            std::vector<int> panel;
            {
                std::stringstream ss(j_panel_spec);
                std::string item;
                while (std::getline(ss, item, ',')) panel.push_back(std::stoi(item));
            }
            int jmax = *std::max_element(panel.begin(), panel.end());
            auto thetas = thetas_for(p, 2 * jmax);
            double beta = p.beta_set ? p.beta
                                     : 0.5 * ((p.n - 1) * (2 * p.alpha + 1) / (2.0 * (p.n + 1)) +
                                              p.alpha - 1);
            std::uint64_t st = p.seed * 31ULL + 7ULL;
            std::vector<Cube> cubes;
            for (int i = 0; i < n_cubes; ++i) {
                Cube q;
                q.center = Point(0.0);
                q.side = 0.06 + 0.06 * rng_u01(st);
                q.center[0] = (2 * rng_u01(st) - 1) * (0.5 - q.side / 2 - 0.01);
                cubes.push_back(q);
            }
            FalconerCertificate fc =
                falconer_density_check(0.21, beta, p, thetas, panel, cubes, p.seed);
            CoverCostReport ccr = cover_cost_compare(panel, 0.1, beta, p);
            Json j;
            j["beta"] = beta;
            j["falconer"] = json_falconer(fc);
            j["cover_cost"] = json_cover_cost(ccr);
            std::string text = j.dump(2) + "\n";
            if (out.empty())
                std::cout << text;
            else
                write_text_file(out, text);
            if (!csv_out.empty()) {
                std::ostringstream csv;
                csv << "j,cube_center,cube_side,lower,c_emp\n";
                for (const auto& cell : fc.table)
                    csv << cell.j << "," << cell.query.center[0] << "," << cell.query.side
                        << "," << cell.lower << "," << cell.c_emp << "\n";
                write_text_file(csv_out, csv.str());
            }
            return fc.pass ? 0 : 1;
        }
        if (ms->parsed()) {
            ExperimentParams p = load_params(config);
            mopts.n = p.n;
            mopts.sigma = p.sigma;
            mopts.rho = p.rho;
            mopts.seed = p.seed;
            if (!r_list_spec.empty()) {
                mopts.R_list.clear();
                std::stringstream ss(r_list_spec);
                std::string item;
                while (std::getline(ss, item, ',')) mopts.R_list.push_back(std::stod(item));
            }
            return report_exit(maximal_scan(mopts), out);
        }
        if (dp->parsed()) {
            dopts.params = load_params(config);
            return report_exit(divergence_probe(dopts), out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
