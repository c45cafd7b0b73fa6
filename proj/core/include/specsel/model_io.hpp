#pragma once

#include <string>
#include <vector>

#include "specsel/family.hpp"
#include "specsel/redda.hpp"
#include "specsel/spectra.hpp"

namespace specsel {

// Everything needed to reuse a trained model: the class parameters on the
// selected variables, how to locate those variables in a full-spectrum file,
// and an echo of the run configuration. Serialized as a schema-versioned
// JSON document with hexadecimal float literals, so numeric fields survive
// save/load bit-for-bit.
struct ModelArtifact {
  GaussianClassParams params;
  std::vector<int> selected;                 // training-file column indices
  std::vector<double> selected_wavelengths;  // axis values of those columns
  WavelengthUnit unit = WavelengthUnit::Index;
  std::vector<std::string> class_names;
  double gamma = 0.0;
  long n_star = 0;
  std::string kept_digest;    // 64-bit FNV-1a of the training kept mask, hex
  std::string tool_version;
  std::string manifest_json;  // run configuration, a JSON object as text
};

// FNV-1a 64-bit fingerprint, 16 hex characters.
std::string mask_digest(const Mask& kept);

ModelArtifact make_artifact(const TrimmedFit& fit, const std::vector<int>& selected,
                            const std::vector<double>& selected_wavelengths,
                            WavelengthUnit unit, const std::vector<std::string>& class_names,
                            std::string manifest_json);

// save -> load -> save produces identical bytes; loading rebuilds the
// Cholesky factors from the stored covariances.
void save_model(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_model(const std::string& path);

}  // namespace specsel
