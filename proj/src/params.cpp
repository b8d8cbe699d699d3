#include "carleson/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace carleson {

Rat sharp_exponent(int n) {
    if (n < 1) throw std::invalid_argument("sharp_exponent: n must be >= 1");
    return Rat(n, 2 * (n + 1));
}

Rat theorem1_threshold(int n, const Rat& alpha) {
    if (n < 1) throw std::invalid_argument("theorem1_threshold: n must be >= 1");
    if (alpha < Rat(3 * n + 1, 4) || alpha > Rat(n))
        throw std::invalid_argument("theorem1_threshold: alpha outside [(3n+1)/4, n]");
    return Rat(n, 2 * (n + 1)) + Rat(n - 1, 2 * (n + 1)) * (Rat(n) - alpha);
}

Rat dimension_lower_bound(int n, const Rat& s) {
    if (n < 1) throw std::invalid_argument("dimension_lower_bound: n must be >= 1");
    if (s < Rat(0) || s > Rat(n, 2))
        throw std::invalid_argument("dimension_lower_bound: s outside [0, n/2]");
    const Rat s1(n, 2 * (n + 1));   // branch 1/2 boundary
    const Rat s2(n + 1, 8);         // branch 2/3 boundary (the 1/(2n) jump)
    const Rat s3(n, 4);             // branch 3/4 boundary
    if (n == 1) {
        // central intervals are empty; the dimension jumps by 1/2 at s = 1/4
        if (s < Rat(1, 4)) return Rat(1);
        return Rat(1) - 2 * s;
    }
    if (s < s1) return Rat(n);
    if (s < s2) return Rat(n) + Rat(n, n - 1) - Rat(2 * (n + 1), n - 1) * s;
    if (s < s3) return Rat(n + 1) - Rat(2 * (n + 2), n) * s;
    return Rat(n) - 2 * s;
}

void ExperimentParams::validate_single_scale() const {
    if (n < 1) throw std::invalid_argument("params: n must be >= 1");
    if (!(R > 4)) throw std::invalid_argument("params: R must be > 4");
    if (!(sigma > 0 && sigma < 0.5))
        throw std::invalid_argument("params: sigma must lie in (0, 1/2)");
    if (!(rho > 0)) throw std::invalid_argument("params: rho must be positive");
    if (!(eps1 > 0 && eps2 > 0))
        throw std::invalid_argument("params: eps1, eps2 must be positive");
}

void ExperimentParams::validate_multi_scale() const {
    validate_single_scale();
    if (!(alpha >= (3.0 * n + 1) / 4.0 - 1e-12 && alpha <= n + 1e-12))
        throw std::invalid_argument("params: alpha outside [(3n+1)/4, n]");
    double sigma_max = (1 + 2 * (n - alpha)) / (2.0 * (n + 1));
    if (!(sigma < sigma_max))
        throw std::invalid_argument("params: sigma must be < (1+2(n-alpha))/(2(n+1))");
    if (!(delta_w > 0 && delta_w < sigma / 4))
        throw std::invalid_argument("params: delta_w must lie in (0, sigma/4)");
    if (!(lambda > 1)) throw std::invalid_argument("params: lambda must be > 1");
    if (!lambda_explicit) {
        double expect = std::exp2(static_cast<double>(M) / (1.0 - sigma));
        if (std::abs(lambda - expect) > 1e-9 * expect)
            throw std::invalid_argument("params: lambda != 2^{M/(1-sigma)}");
    }
    if (J < 1) throw std::invalid_argument("params: J must be >= 1");
    if (beta_set && alpha < n) {
        double lo = (n - 1) * (2 * alpha + 1) / (2.0 * (n + 1));
        double hi = alpha - 1;
        if (!(beta > lo && beta < hi))
            throw std::invalid_argument("params: beta outside ((n-1)(2a+1)/(2(n+1)), a-1)");
    }
    double d = n - 1;
    if (d >= 1 && !(gamma >= 0.75 * d - 1e-12 && gamma <= d + 1e-12))
        throw std::invalid_argument("params: gamma outside [3d/4, d]");
}

double ExperimentParams::effective_N_cut() const {
    if (N_cut > 0) return N_cut;
    return 2 * M_PI * std::pow(lambda, 2.0 * J);
}

std::string ExperimentParams::multi_scale_warnings() const {
    std::ostringstream w;
    // per-coordinate comb count at level 1: frequencies 2π λ^{1-σ} k in [λ, λ²)
    double step = 2 * M_PI * std::pow(lambda, 1.0 - sigma);
    long long kmax = static_cast<long long>(std::floor(std::nextafter(lambda * lambda / step, 0.0)));
    long long kmin = static_cast<long long>(std::ceil(lambda / step));
    if (kmin < 1) kmin = 1;
    long long cnt = kmax >= kmin ? 2 * (kmax - kmin + 1) : 0;
    if (cnt < 3) w << "comb too sparse for density experiments (level-1 count " << cnt << ")";
    return w.str();
}

std::vector<ConfigEntry> parse_config_text(const std::string& text, const std::string& origin) {
    std::vector<ConfigEntry> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        if (line[b] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected `key = value`");
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t z = s.find_last_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            return s.substr(a, z - a + 1);
        };
        ConfigEntry e;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty())
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ConfigEntry> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

namespace {

double parse_double(const ConfigEntry& e) {
    std::size_t pos = 0;
    double v = std::stod(e.value, &pos);
    if (pos != e.value.size())
        throw std::runtime_error("config line " + std::to_string(e.line) +
                                 ": bad numeric value for " + e.key);
    return v;
}

long long parse_int(const ConfigEntry& e) {
    std::size_t pos = 0;
    long long v = std::stoll(e.value, &pos);
    if (pos != e.value.size())
        throw std::runtime_error("config line " + std::to_string(e.line) +
                                 ": bad integer value for " + e.key);
    return v;
}

} // namespace

std::map<std::string, std::string> apply_config(ExperimentParams& p,
                                                const std::vector<ConfigEntry>& entries,
                                                const std::vector<std::string>& extra_keys) {
    std::set<std::string> extra(extra_keys.begin(), extra_keys.end());
    std::map<std::string, std::string> passthrough;
    bool m_set = false;
    for (const auto& e : entries) {
        if (extra.count(e.key)) {
            passthrough[e.key] = e.value;
        } else if (e.key == "n") {
            p.n = static_cast<int>(parse_int(e));
        } else if (e.key == "R") {
            p.R = parse_double(e);
        } else if (e.key == "sigma") {
            p.sigma = parse_double(e);
        } else if (e.key == "delta_w") {
            p.delta_w = parse_double(e);
        } else if (e.key == "M") {
            p.M = static_cast<int>(parse_int(e));
            m_set = true;
        } else if (e.key == "lambda") {
            p.lambda = parse_double(e);
            p.lambda_explicit = true;
        } else if (e.key == "J") {
            p.J = static_cast<int>(parse_int(e));
        } else if (e.key == "alpha") {
            p.alpha = parse_double(e);
            p.alpha_set = true;
        } else if (e.key == "beta") {
            p.beta = parse_double(e);
            p.beta_set = true;
        } else if (e.key == "gamma") {
            p.gamma = parse_double(e);
        } else if (e.key == "rho") {
            p.rho = parse_double(e);
        } else if (e.key == "eps1") {
            p.eps1 = parse_double(e);
        } else if (e.key == "eps2") {
            p.eps2 = parse_double(e);
        } else if (e.key == "s") {
            p.s = parse_double(e);
        } else if (e.key == "N_cut") {
            p.N_cut = parse_double(e);
        } else if (e.key == "seed") {
            p.seed = static_cast<std::uint64_t>(parse_int(e));
        } else {
            throw std::runtime_error("config line " + std::to_string(e.line) +
                                     ": unknown key `" + e.key + "`");
        }
    }
    if (m_set && !p.lambda_explicit) {
        p.lambda = std::exp2(static_cast<double>(p.M) / (1.0 - p.sigma));
    } else if (p.lambda_explicit) {
        if (m_set) {
            double expect = std::exp2(static_cast<double>(p.M) / (1.0 - p.sigma));
            if (std::abs(p.lambda - expect) > 1e-9 * expect)
                throw std::runtime_error("config: lambda and M are inconsistent");
        } else {
            p.M = static_cast<int>(std::lround(std::log2(p.lambda) * (1.0 - p.sigma)));
        }
    }
    return passthrough;
}

ExperimentParams params_from_config(const std::string& path) {
    ExperimentParams p;
    apply_config(p, parse_config_file(path));
    return p;
}

} // namespace carleson
