#include "symlti/cli/documents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace symlti::cli {

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw DocumentError(field + ": expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw DocumentError(field + ": rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DocumentError(field + ": ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw DocumentError(field + ": non-numeric entry");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw DocumentError(field + ": non-finite entry");
      m(i, k) = x;
    }
  }
  return m;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json certificate_json(const Certificate& c) {
  Json j;
  j["kind"] = std::string(to_string(c.kind));
  j["matrix"] = matrix_json(c.matrix);
  j["algebraic_residual"] = c.algebraic_residual;
  j["frequency_residual"] = c.frequency_residual;
  if (c.definiteness) j["definiteness"] = std::string(to_string(*c.definiteness));
  return j;
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("matrix")) {
    throw DocumentError("certificate needs kind and matrix");
  }
  Certificate c;
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  bool found = false;
  for (CertificateKind k : {CertificateKind::Reciprocal, CertificateKind::IOHamiltonian,
                            CertificateKind::SignedTimeReversible, CertificateKind::TimeReversible,
                            CertificateKind::CycloLossless}) {
    if (kind == to_string(k)) {
      c.kind = k;
      found = true;
    }
  }
  if (!found) throw DocumentError("unknown certificate kind '" + kind + "'");
  c.matrix = matrix_from_json(j["matrix"], "certificate.matrix");
  return c;
}

Json tolerances_json(const Tolerances& tol) {
  Json j;
  j["feas_tol"] = tol.feas_tol;
  j["null_tol"] = tol.null_tol;
  j["sym_tol"] = tol.sym_tol;
  return j;
}

SystemDocument parse_system_document(const Json& j) {
  if (!j.is_object()) throw DocumentError("system document must be a JSON object");
  for (const char* key : {"A", "B", "C"}) {
    if (!j.contains(key)) throw DocumentError(std::string("missing field ") + key);
  }
  SystemDocument doc;
  doc.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "unnamed";
  const Matrix a = matrix_from_json(j["A"], "A");
  const Matrix b = matrix_from_json(j["B"], "B");
  const Matrix c = matrix_from_json(j["C"], "C");
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) throw DocumentError("A must be a nonempty square matrix");
  if (b.rows() != n || b.cols() == 0) throw DocumentError("B must have n rows and at least one column");
  const Eigen::Index m = b.cols();
  if (c.rows() != m) throw DocumentError("number of outputs differs from number of inputs");
  if (c.cols() != n) throw DocumentError("C must have n columns");
  Matrix d = Matrix::Zero(m, m);
  if (j.contains("D")) {
    d = matrix_from_json(j["D"], "D");
    if (d.rows() != m || d.cols() != m) throw DocumentError("D must be m x m");
  }
  Vector sigma = Vector::Ones(m);
  if (j.contains("sigma")) {
    const Json& s = j["sigma"];
    if (!s.is_array() || static_cast<Eigen::Index>(s.size()) != m) throw DocumentError("sigma must have m entries");
    for (Eigen::Index i = 0; i < m; ++i) {
      const Json& v = s[static_cast<std::size_t>(i)];
      if (!v.is_number()) throw DocumentError("sigma entries must be numbers");
      const double x = v.get<double>();
      if (x != 1.0 && x != -1.0) throw DocumentError("sigma entries must be +1 or -1");
      sigma(i) = x;
    }
  }
  try {
    doc.system = StateSpaceSystem(a, b, c, d, sigma);
  } catch (const Error& e) {
    throw DocumentError(e.what());
  }
  doc.metadata = j.contains("metadata") ? j["metadata"] : Json();
  if (j.contains("ground_truth") && !j["ground_truth"].is_null()) {
    doc.ground_truth = certificate_from_json(j["ground_truth"]);
  }
  return doc;
}

Json system_document_json(const SystemDocument& doc) {
  Json j;
  j["name"] = doc.name;
  j["A"] = matrix_json(doc.system.A);
  j["B"] = matrix_json(doc.system.B);
  j["C"] = matrix_json(doc.system.C);
  j["D"] = matrix_json(doc.system.D);
  j["sigma"] = vector_json(doc.system.sigma);
  if (!doc.metadata.is_null()) j["metadata"] = doc.metadata;
  if (doc.ground_truth) {
    Json g;
    g["kind"] = std::string(to_string(doc.ground_truth->kind));
    g["matrix"] = matrix_json(doc.ground_truth->matrix);
    j["ground_truth"] = g;
  }
  return j;
}

SubspaceDocument parse_subspace_document(const Json& j) {
  if (!j.is_object()) throw DocumentError("subspace document must be a JSON object");
  SubspaceDocument doc;
  doc.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "unnamed";
  try {
    if (j.contains("basis")) {
      const Matrix b = matrix_from_json(j["basis"], "basis");
      if (b.rows() == 0 || b.rows() % 2 != 0) throw DocumentError("basis must have 2n rows");
      doc.subspace = LinearSubspace::span(b);
    } else if (j.contains("graph") || j.contains("cograph")) {
      const bool co = !j.contains("graph");
      const Matrix s = matrix_from_json(j[co ? "cograph" : "graph"], co ? "cograph" : "graph");
      if (s.rows() == 0 || s.rows() != s.cols()) throw DocumentError("graph map must be square and nonempty");
      doc.subspace = co ? LinearSubspace::cograph(s) : LinearSubspace::graph(s);
    } else if (j.contains("product")) {
      const Matrix k = matrix_from_json(j["product"], "product");
      if (k.rows() == 0) throw DocumentError("product needs n rows");
      doc.subspace = LinearSubspace::product_with_annihilator(k);
    } else {
      throw DocumentError("subspace document needs basis, graph, cograph or product");
    }
  } catch (const Error& e) {
    throw DocumentError(e.what());
  }
  return doc;
}

Json read_json_input(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) throw DocumentError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
}

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void render_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
      out += "null";
      return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    out += buf;
  } else if (is_scalar(j)) {
    out += j.dump();
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    // Arrays of scalars (matrix rows) stay on one line.
    const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
    out += "[";
    bool first = true;
    for (const Json& v : j) {
      out += first ? "" : ",";
      if (flat) {
        out += first ? "" : " ";
      } else {
        out += "\n" + pad;
      }
      render_into(v, out, indent + 2);
      first = false;
    }
    if (!flat) out += "\n" + std::string(static_cast<std::size_t>(indent), ' ');
    out += "]";
  } else {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out += first ? "\n" : ",\n";
      out += pad + Json(it.key()).dump() + ": ";
      render_into(it.value(), out, indent + 2);
      first = false;
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  }
}

}  // namespace

std::string render(const Json& j) {
  std::string out;
  render_into(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace symlti::cli
