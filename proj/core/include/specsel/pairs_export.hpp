#pragma once

#include <string>
#include <vector>

#include "specsel/spectra.hpp"

namespace specsel {

struct PairsExport {
  std::string table_path;     // long-format CSV: row,variable,wavelength,value,class
  std::string manifest_path;  // JSON: selected variables + the C(k,2) panel pairs
  long n_pairs = 0;
};

// Writes the data behind a pairs plot of the selected variables: one long
// table with every (row, variable) value and a manifest enumerating the
// unordered variable pairs, one per scatter panel. Any plotting tool can
// consume the two files; no rendering happens here.
PairsExport export_pairs_data(const LabeledSpectra& data, const std::vector<int>& selected,
                              const std::string& out_dir);

}  // namespace specsel
