#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace carleson {

using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// s = n/(2(n+1)), the sharp regularity of the Lebesgue-measure problem.
Rat sharp_exponent(int n);

// s = n/(2(n+1)) + (n-1)(n-alpha)/(2(n+1)), valid for (3n+1)/4 <= alpha <= n.
Rat theorem1_threshold(int n, const Rat& alpha);

// Lower bound for the Hausdorff dimension of the divergence set at
// regularity s, the four-branch piecewise function. For n=1 only the outer
// branches apply: value 1 for s < 1/4 and 1-2s for 1/4 <= s <= 1/2.
Rat dimension_lower_bound(int n, const Rat& s);

// All scalar parameters of the construction. lambda is tied to M via
// lambda = 2^{M/(1-sigma)} when M is configured; configuring lambda directly
// waives the integrality of M (M then stores the rounded value).
struct ExperimentParams {
    int n = 2;                 // spatial dimension
    double R = 1048576.0;      // frequency scale (> 4), single-scale runs
    double sigma = 0.1;        // lattice exponent
    double delta_w = 0.02;     // weight exponent, 0 < delta_w < sigma/4
    int M = 4;                 // scale step
    double lambda = 16.0;      // scale base
    int J = 3;                 // number of scales kept
    double alpha = 2.0;        // Hausdorff exponent, (3n+1)/4 <= alpha <= n
    double beta = 0.85;        // content exponent (fractal case)
    double gamma = 1.0;        // density exponent, [3d/4, d]
    double rho = 0.05;         // ξ1 box half-width constant
    double eps1 = 0.05;        // comb box constant
    double eps2 = 0.1;         // pseudo-cube side constant
    double s = 0.25;           // Sobolev regularity
    double N_cut = 0;          // truncation frequency; 0 = derive 2π·λ^{2J}
    std::uint64_t seed = 1;

    bool lambda_explicit = false;  // lambda set directly (M integrality waived)
    bool alpha_set = false;
    bool beta_set = false;

    // §3 runs: no alpha in play. Checks n, R, sigma in (0,1/2), rho > 0.
    void validate_single_scale() const;
    // §4 runs: full constraint set, in particular
    // sigma < (1+2(n-alpha))/(2(n+1)) (hence sigma < 1/4 as alpha >= (3n+1)/4),
    // 0 < delta_w < sigma/4, alpha in [(3n+1)/4, n], and when beta is set,
    // beta in ((n-1)(2alpha+1)/(2(n+1)), alpha-1).
    void validate_multi_scale() const;

    double effective_N_cut() const;
    std::string multi_scale_warnings() const;  // e.g. comb sparsity
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

// Line-oriented `key = value` file. Blank lines and lines starting with '#'
// are skipped; a line without '=' is a parse error naming the line number.
std::vector<ConfigEntry> parse_config_file(const std::string& path);
std::vector<ConfigEntry> parse_config_text(const std::string& text,
                                           const std::string& origin = "<config>");

// Applies entries to params. Keys must be ExperimentParams field names unless
// listed in extra_keys (those are returned to the caller). Unknown keys are
// an error.
std::map<std::string, std::string> apply_config(
    ExperimentParams& p, const std::vector<ConfigEntry>& entries,
    const std::vector<std::string>& extra_keys = {});

ExperimentParams params_from_config(const std::string& path);

} // namespace carleson
