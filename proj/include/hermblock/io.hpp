#pragma once

#include "hermblock/block.hpp"
#include "hermblock/certify.hpp"
#include "hermblock/decompose.hpp"
#include "hermblock/generate.hpp"
#include "hermblock/report.hpp"
#include "hermblock/structured.hpp"

#include <json.hpp>

#include <string>

namespace hermblock {

using Json = nlohmann::ordered_json;

// Matrix schema: {"rows": R, "cols": C, "data": [[re, im], ...]} row-major.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// Block form: {"beta": b, "n": n, "matrix": {...}}; validated on read.
Json block_to_json(const BlockMatrix& h);
BlockMatrix block_from_json(const Json& j);

Json spectrum_to_json(const Spectrum& s);

Json report_to_json(const CertificateReport& r);

Json family_to_json(const CommutingFamily& f);
CommutingFamily family_from_json(const Json& j);

Json state_to_json(const SeparableState& z);
SeparableState state_from_json(const Json& j);

Json structured_to_json(const StructuredOperator& op);
StructuredOperator structured_from_json(const Json& j);

Json decomposition_to_json(const WeightedIsometryDecomposition& d,
                           const std::string& kind);
WeightedIsometryDecomposition decomposition_from_json(const Json& j);

GeneratorConfig config_from_json(const Json& j);
Json config_to_json(const GeneratorConfig& cfg);

// FNV-1a hex digest of the serialized form; used as the input digest in
// run reports.
std::string digest_hex(const std::string& bytes);
std::string json_digest(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace hermblock
