#pragma once

// JSON encoding of the library types. Complex numbers are [re, im] pairs,
// matrices are row-major nested arrays of such pairs. Non-finite doubles are
// written as the strings "inf" / "-inf" and NaN as null.

#include <string>

#include <nlohmann/json.hpp>

#include "robtherm/channels.hpp"
#include "robtherm/free_sets.hpp"
#include "robtherm/linalg.hpp"
#include "robtherm/robustness.hpp"
#include "robtherm/thermo.hpp"

namespace robtherm {

using Json = nlohmann::ordered_json;

/// Parse failure carrying the JSON path of the offending field.
class InputError : public ValidationError {
public:
    InputError(const std::string& path, const std::string& message)
        : ValidationError(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

Json number_to_json(double v);
double number_from_json(const Json& j, const std::string& path);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& path);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& path);

Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j, const std::string& path);

/// A number, or "inf" for zero temperature.
Json beta_to_json(Beta beta);
Beta beta_from_json(const Json& j, const std::string& path);

Json to_json(const RobustnessResult& r, bool with_certificates = true);
Json to_json(const CertificateCheck& c);
Json to_json(const BoundReport& r);
Json to_json(const ProtocolTrace& t);
Json to_json(const Rank1Witness& w);

/// Extreme points as state vectors (pure sets) or density matrices.
Json free_set_to_json(const FreeSetSpec& spec);

}  // namespace robtherm
