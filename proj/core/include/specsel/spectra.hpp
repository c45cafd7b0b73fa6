#pragma once

#include <string>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

enum class WavelengthUnit { Index, Nanometer, Wavenumber };

const char* unit_name(WavelengthUnit unit);          // "index" | "nm" | "cm-1"
WavelengthUnit parse_unit(const std::string& name);  // throws SchemaError

// A spectra table: one row per observation, one column per channel.
// Labels are stored as 0-based positions into class_names; files carry the
// names themselves. An empty `labels` marks an unlabeled (test) set.
struct LabeledSpectra {
  Matrix absorbance;                     // N x P, finite
  std::vector<int> labels;               // size N or empty
  std::vector<std::string> class_names;  // size G, sorted
  std::vector<double> wavelengths;       // size P; strictly monotone unless Index
  WavelengthUnit unit = WavelengthUnit::Index;

  long rows() const { return absorbance.rows(); }
  long cols() const { return absorbance.cols(); }
  int n_classes() const { return static_cast<int>(class_names.size()); }
  bool has_labels() const { return !labels.empty(); }

  // Enforces the field invariants above; throws on violation.
  void validate() const;
};

struct CsvSchema {
  std::string label_column = "class";
  char delimiter = ',';
  // Tag attached to a numeric wavelength header; non-numeric headers always
  // fall back to positional indices.
  WavelengthUnit unit = WavelengthUnit::Index;
};

// Header row = wavelengths (numeric) or arbitrary names (positional axis),
// plus an optional label column matched by name. Values must be finite;
// labels must be non-empty. Errors carry 1-based row/column locations.
LabeledSpectra load_csv(const std::string& path, const CsvSchema& schema = {});

// Shortest round-trip formatting, so load(save(x)) is bit-identical.
void save_csv(const LabeledSpectra& spectra, const std::string& path,
              const CsvSchema& schema = {});

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace specsel
