#pragma once

#include <json.hpp>
#include <string>

#include "carleson/band_propagator.hpp"
#include "carleson/builder.hpp"
#include "carleson/measure_lab.hpp"
#include "carleson/params.hpp"
#include "carleson/torus_flow.hpp"

namespace carleson {

// insertion-ordered keys: serialized reports are deterministic and
// serialize -> parse -> serialize is byte-stable
using Json = nlohmann::ordered_json;

Json json_params(const ExperimentParams& p);
Json json_density_cert(const DensityCertificate& c);
Json json_phase_cert(const PhaseCertificate& c);
Json json_theta_cert(const ThetaCert& c);
Json json_bundle(const DataBundle& b);
Json json_falconer(const FalconerCertificate& c);
Json json_cover_cost(const CoverCostReport& r);
Json json_mass_result(const MassDistributionResult& r);

struct ProbeReport {
    std::string experiment;
    Json params = Json::object();
    Json records = Json::array();
    Json fits = Json::object();
    Json certificates = Json::array();  // [{name, pass, ...details}]
    std::uint64_t seed = 0;
    double wall_ms = 0;  // serialized into the run manifest only

    void add_certificate(const std::string& name, bool pass, Json details = Json::object());
    bool pass() const;

    Json to_json() const;  // excludes wall_ms (rerun determinism)
    static ProbeReport from_json(const Json& j);
    std::string dump() const;  // canonical: 2-space indent, trailing newline
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace carleson
