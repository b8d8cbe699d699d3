#include "carleson/report.hpp"

#include <fstream>
#include <sstream>

namespace carleson {

namespace {

Json json_point(const Point& p) {
    Json a = Json::array();
    for (int i = 0; i < p.dim; ++i) a.push_back(p[i]);
    return a;
}

} // namespace

Json json_params(const ExperimentParams& p) {
    Json j;
    j["n"] = p.n;
    j["R"] = p.R;
    j["sigma"] = p.sigma;
    j["delta_w"] = p.delta_w;
    j["M"] = p.M;
    j["lambda"] = p.lambda;
    j["J"] = p.J;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["rho"] = p.rho;
    j["eps1"] = p.eps1;
    j["eps2"] = p.eps2;
    j["s"] = p.s;
    j["N_cut"] = p.effective_N_cut();
    j["seed"] = p.seed;
    return j;
}

Json json_density_cert(const DensityCertificate& c) {
    Json j;
    j["theta"] = c.theta.dim == 1 ? Json(c.theta[0]) : json_point(c.theta);
    j["radii_by_a"] = c.radii_by_a;
    j["target_radius"] = c.target_radius;
    j["pass"] = c.pass;
    j["a_panel"] = c.a_panel;
    j["probe_resolution"] = c.probe_resolution;
    j["method"] = c.method;
    j["attempts_used"] = c.attempts_used;
    return j;
}

Json json_phase_cert(const PhaseCertificate& c) {
    Json j;
    j["c"] = c.c;
    j["min_ratio"] = c.min_ratio;
    j["pass"] = c.pass;
    j["samples"] = c.samples;
    j["omega_measure"] = c.omega_measure;
    j["normalization"] = "(2pi)^{-(n-1)/2} |Omega|";
    Json w;
    w["xbar"] = json_point(c.witness.xbar);
    w["t"] = c.witness.t;
    w["ratio"] = c.witness.ratio;
    j["witness"] = w;
    return j;
}

Json json_theta_cert(const ThetaCert& c) {
    Json j;
    j["level"] = c.level;
    j["theta"] = c.theta.dim == 1 ? Json(c.theta[0]) : json_point(c.theta);
    j["certified"] = c.certified;
    j["certificate"] = json_density_cert(c.cert);
    return j;
}

Json json_bundle(const DataBundle& b) {
    Json j;
    j["multi_scale"] = b.multi_scale;
    j["params"] = json_params(b.params);
    Json combs = Json::array();
    for (const auto& c : b.combs) {
        Json cj;
        cj["level"] = c.level;
        cj["lattice_step"] = c.lattice_step;
        cj["box_half"] = c.box_half;
        cj["count"] = c.points.size();
        cj["measure"] = c.measure();
        combs.push_back(cj);
    }
    j["combs"] = combs;
    Json thetas = Json::array();
    for (const auto& t : b.thetas) thetas.push_back(t.dim == 1 ? Json(t[0]) : json_point(t));
    j["thetas"] = thetas;
    Json pieces = Json::array();
    for (const auto& p : b.band.pieces) {
        Json pj;
        pj["amp_re"] = p.amplitude.real();
        pj["amp_im"] = p.amplitude.imag();
        pj["center"] = json_point(p.center);
        Json half = Json::array();
        for (int i = 0; i < p.center.dim; ++i) half.push_back(p.half[static_cast<std::size_t>(i)]);
        pj["half"] = half;
        pieces.push_back(pj);
    }
    j["pieces"] = pieces;
    j["l2_norm_sq"] = b.band.l2_norm_sq();
    Json lv = Json::array();
    for (double v : b.level_l2_sq()) lv.push_back(v);
    j["level_l2_sq"] = lv;
    return j;
}

Json json_falconer(const FalconerCertificate& c) {
    Json j;
    j["beta"] = c.beta;
    j["pass"] = c.pass;
    if (!c.failure.empty()) j["failure"] = c.failure;
    Json table = Json::array();
    for (const auto& cell : c.table) {
        Json cj;
        cj["j"] = cell.j;
        cj["cube_center"] = cell.query.center[0];
        cj["cube_side"] = cell.query.side;
        cj["lower"] = cell.lower;
        cj["c_emp"] = cell.c_emp;
        cj["subset_model"] = cell.subset_model;
        table.push_back(cj);
    }
    j["table"] = table;
    return j;
}

Json json_cover_cost(const CoverCostReport& r) {
    Json j;
    j["j_panel"] = r.j_panel;
    j["log_ratio"] = r.log_ratio;
    j["fitted_slope"] = r.fitted_slope;
    j["expected_slope"] = r.expected_slope;
    j["monotone"] = r.monotone;
    return j;
}

Json json_mass_result(const MassDistributionResult& r) {
    Json j;
    j["beta"] = r.beta;
    j["total_mass"] = r.total_mass;
    j["C"] = r.C;
    j["lower"] = r.lower;
    j["r_min"] = r.r_min;
    j["r_max"] = r.r_max;
    j["probes"] = r.rows.size();
    return j;
}

void ProbeReport::add_certificate(const std::string& name, bool pass_flag, Json details) {
    Json c;
    c["name"] = name;
    c["pass"] = pass_flag;
    c["details"] = std::move(details);
    certificates.push_back(std::move(c));
}

bool ProbeReport::pass() const {
    for (const auto& c : certificates)
        if (!c.at("pass").get<bool>()) return false;
    return true;
}

Json ProbeReport::to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["params"] = params;
    j["records"] = records;
    j["fits"] = fits;
    j["certificates"] = certificates;
    j["pass"] = pass();
    return j;
}

ProbeReport ProbeReport::from_json(const Json& j) {
    ProbeReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = j.at("params");
    r.records = j.at("records");
    r.fits = j.at("fits");
    r.certificates = j.at("certificates");
    return r;
}

std::string ProbeReport::dump() const { return to_json().dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace carleson
