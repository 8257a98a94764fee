#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "glvkit/darboux.hpp"
#include "glvkit/dynamics.hpp"

namespace glv {

using Json = nlohmann::json;

// On-disk system document: the (B, A, lambda) triple plus an optional
// factorization. Rationals serialize as bare integers when possible and as
// "p/q" strings otherwise; JSON floats are rejected.
struct SystemFile {
    GLVSystem system;
    std::optional<GLVPFactorization> factorization;
};

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const Json& j, const std::string& where);

SystemFile system_from_json(const Json& j);
SystemFile load_system_file(const std::string& path);
Json system_to_json(const SystemFile& sf);

Json hamiltonian_to_json(const HamiltonianExpr& h);
Json conservation_report_to_json(const ConservationReport& report);
Json chain_to_json(const TransformChain& chain);
Json darboux_report_to_json(const DarbouxSystem& d, const std::string& method);

} // namespace glv
