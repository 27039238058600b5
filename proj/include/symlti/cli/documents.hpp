#pragma once

// JSON documents read and written by the command-line tool.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "symlti/certify.hpp"
#include "symlti/geometry.hpp"

namespace symlti::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or inconsistent input; maps to exit code 2.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemDocument {
  std::string name;
  StateSpaceSystem system;
  Json metadata;  ///< object or null
  std::optional<Certificate> ground_truth;
};

SystemDocument parse_system_document(const Json& j);
Json system_document_json(const SystemDocument& doc);

/// One of "basis" (2n x k, columns span), "graph" (n x n, e = S f),
/// "cograph" (n x n, f = S e) or "product" (n x k, K x K^perp).
struct SubspaceDocument {
  std::string name;
  LinearSubspace subspace;
};
SubspaceDocument parse_subspace_document(const Json& j);

/// Row-major nested arrays of finite doubles.
Matrix matrix_from_json(const Json& j, const std::string& field);
Json matrix_json(const Matrix& m);
Json vector_json(const Vector& v);
Json certificate_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);
Json tolerances_json(const Tolerances& tol);

/// Reads the whole input; "-" is standard input.
Json read_json_input(const std::string& path);
/// Pretty-printed JSON with every double written as %.17g.
std::string render(const Json& j);

}  // namespace symlti::cli
