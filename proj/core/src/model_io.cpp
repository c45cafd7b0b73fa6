#include "specsel/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "specsel/errors.hpp"
#include "specsel/gaussian.hpp"
#include "specsel/version.hpp"

namespace specsel {

namespace {

using nlohmann::json;

std::string format_hex(double value) {
  if (!std::isfinite(value)) throw NonFinite("model field is not finite");
  char buf[48];
  const int len = std::snprintf(buf, sizeof buf, "%a", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_hex(const std::string& text) {
  std::string_view sv = text;
  bool negative = false;
  if (!sv.empty() && (sv.front() == '+' || sv.front() == '-')) {
    negative = sv.front() == '-';
    sv.remove_prefix(1);
  }
  if (sv.size() > 2 && sv[0] == '0' && (sv[1] == 'x' || sv[1] == 'X')) sv.remove_prefix(2);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(sv.data(), sv.data() + sv.size(), value, std::chars_format::hex);
  if (ec != std::errc() || ptr != sv.data() + sv.size()) {
    throw SchemaError("bad float literal '" + text + "'");
  }
  return negative ? -value : value;
}

json encode_vector(const Vector& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(format_hex(v(i)));
  return out;
}

json encode_matrix(const Matrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(format_hex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector decode_vector(const json& j) {
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<long>(i)) = parse_hex(j.at(i).get<std::string>());
  }
  return v;
}

Matrix decode_matrix(const json& j) {
  const long rows = static_cast<long>(j.size());
  const long cols = rows > 0 ? static_cast<long>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<long>(row.size()) != cols) throw SchemaError("ragged matrix rows");
    for (long c = 0; c < cols; ++c) {
      m(i, c) = parse_hex(row.at(static_cast<std::size_t>(c)).get<std::string>());
    }
  }
  return m;
}

}  // namespace

std::string mask_digest(const Mask& kept) {
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a offset basis
  for (std::uint8_t bit : kept) {
    hash ^= bit;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf, 16);
}

ModelArtifact make_artifact(const TrimmedFit& fit, const std::vector<int>& selected,
                            const std::vector<double>& selected_wavelengths,
                            WavelengthUnit unit, const std::vector<std::string>& class_names,
                            std::string manifest_json) {
  ModelArtifact artifact;
  artifact.params = fit.params;
  artifact.selected = selected;
  artifact.selected_wavelengths = selected_wavelengths;
  artifact.unit = unit;
  artifact.class_names = class_names;
  artifact.gamma = fit.gamma;
  artifact.n_star = fit.n_star;
  artifact.kept_digest = mask_digest(fit.kept);
  artifact.tool_version = kToolVersion;
  artifact.manifest_json = std::move(manifest_json);
  return artifact;
}

void save_model(const ModelArtifact& artifact, const std::string& path) {
  const int g = artifact.params.classes();
  const int p = artifact.params.dim();
  if (static_cast<int>(artifact.selected.size()) != p ||
      artifact.selected_wavelengths.size() != artifact.selected.size() ||
      static_cast<int>(artifact.class_names.size()) != g) {
    throw DimensionMismatch("save_model: artifact fields are inconsistent");
  }

  json doc;
  doc["schema"] = kModelSchemaVersion;
  doc["tool"] = kToolName;
  doc["version"] = artifact.tool_version.empty() ? kToolVersion : artifact.tool_version;
  doc["family"] = std::string(family_code(artifact.params.family));
  doc["gamma"] = format_hex(artifact.gamma);
  doc["n_star"] = artifact.n_star;
  doc["unit"] = unit_name(artifact.unit);
  doc["selected"] = artifact.selected;
  json wl = json::array();
  for (double w : artifact.selected_wavelengths) wl.push_back(format_hex(w));
  doc["wavelengths"] = std::move(wl);
  doc["classes"] = artifact.class_names;
  json tau = json::array();
  for (double t : artifact.params.tau) tau.push_back(format_hex(t));
  doc["tau"] = std::move(tau);
  json mu = json::array();
  for (const Vector& m : artifact.params.mu) mu.push_back(encode_vector(m));
  doc["mu"] = std::move(mu);
  json sigma = json::array();
  for (const Matrix& s : artifact.params.sigma) sigma.push_back(encode_matrix(s));
  doc["sigma"] = std::move(sigma);
  doc["kept_digest"] = artifact.kept_digest;
  doc["manifest"] =
      artifact.manifest_json.empty() ? json::object() : json::parse(artifact.manifest_json);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

ModelArtifact load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }

  try {
    if (!doc.contains("schema") || !doc.contains("tool")) {
      throw SchemaError("'" + path + "': missing schema marker");
    }
    if (doc.at("tool").get<std::string>() != kToolName) {
      throw SchemaError("'" + path + "': not a model document");
    }
    if (doc.at("schema").get<int>() != kModelSchemaVersion) {
      throw VersionMismatch("'" + path + "': schema " +
                            doc.at("schema").dump() + ", tool expects " +
                            std::to_string(kModelSchemaVersion));
    }

    ModelArtifact artifact;
    const auto family = parse_family(doc.at("family").get<std::string>());
    if (!family) throw SchemaError("'" + path + "': unknown family code");
    artifact.params.family = *family;
    artifact.gamma = parse_hex(doc.at("gamma").get<std::string>());
    artifact.n_star = doc.at("n_star").get<long>();
    artifact.unit = parse_unit(doc.at("unit").get<std::string>());
    artifact.selected = doc.at("selected").get<std::vector<int>>();
    for (const auto& w : doc.at("wavelengths")) {
      artifact.selected_wavelengths.push_back(parse_hex(w.get<std::string>()));
    }
    artifact.class_names = doc.at("classes").get<std::vector<std::string>>();
    for (const auto& t : doc.at("tau")) {
      artifact.params.tau.push_back(parse_hex(t.get<std::string>()));
    }
    for (const auto& m : doc.at("mu")) artifact.params.mu.push_back(decode_vector(m));
    for (const auto& s : doc.at("sigma")) artifact.params.sigma.push_back(decode_matrix(s));
    artifact.kept_digest = doc.at("kept_digest").get<std::string>();
    artifact.tool_version = doc.at("version").get<std::string>();
    artifact.manifest_json = doc.at("manifest").dump();

    const int g = static_cast<int>(artifact.params.tau.size());
    const int p = static_cast<int>(artifact.selected.size());
    if (static_cast<int>(artifact.params.mu.size()) != g ||
        static_cast<int>(artifact.params.sigma.size()) != g ||
        static_cast<int>(artifact.class_names.size()) != g) {
      throw SchemaError("'" + path + "': class-indexed fields disagree on G");
    }
    for (const Vector& m : artifact.params.mu) {
      if (m.size() != p) throw SchemaError("'" + path + "': mean dimension mismatch");
    }
    for (const Matrix& s : artifact.params.sigma) {
      if (s.rows() != p || s.cols() != p) {
        throw SchemaError("'" + path + "': covariance dimension mismatch");
      }
      artifact.params.chol.push_back(factor_with_ridge(s));
    }
    if (artifact.selected_wavelengths.size() != artifact.selected.size()) {
      throw SchemaError("'" + path + "': wavelength list length mismatch");
    }
    return artifact;
  } catch (const json::exception& e) {
    throw SchemaError("'" + path + "': " + e.what());
  }
}

}  // namespace specsel
