#include "specsel/pairs_export.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "specsel/errors.hpp"
#include "specsel/version.hpp"

namespace specsel {

PairsExport export_pairs_data(const LabeledSpectra& data, const std::vector<int>& selected,
                              const std::string& out_dir) {
  if (selected.empty()) throw Infeasible("export_pairs_data: no variables selected");
  data.validate();
  for (int v : selected) {
    if (v < 0 || v >= data.cols()) {
      throw DimensionMismatch("export_pairs_data: variable index " + std::to_string(v) +
                              " out of range");
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

  PairsExport result;
  result.table_path = (std::filesystem::path(out_dir) / "pairs_data.csv").string();
  result.manifest_path = (std::filesystem::path(out_dir) / "pairs_manifest.json").string();

  {
    std::ofstream table(result.table_path, std::ios::binary);
    if (!table) throw IoError("cannot write '" + result.table_path + "'");
    table << "row,variable,wavelength,value,class\n";
    for (long i = 0; i < data.rows(); ++i) {
      for (int v : selected) {
        table << i << ',' << v << ','
              << format_double(data.wavelengths[static_cast<std::size_t>(v)]) << ','
              << format_double(data.absorbance(i, v)) << ',';
        if (data.has_labels()) {
          table << data.class_names[static_cast<std::size_t>(
              data.labels[static_cast<std::size_t>(i)])];
        }
        table << '\n';
      }
    }
    if (!table) throw IoError("write failed for '" + result.table_path + "'");
  }

  nlohmann::json manifest;
  manifest["table"] = "pairs_data.csv";
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["unit"] = unit_name(data.unit);
  manifest["variables"] = selected;
  nlohmann::json wl = nlohmann::json::array();
  for (int v : selected) wl.push_back(data.wavelengths[static_cast<std::size_t>(v)]);
  manifest["wavelengths"] = std::move(wl);
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t a = 0; a < selected.size(); ++a) {
    for (std::size_t b = a + 1; b < selected.size(); ++b) {
      pairs.push_back({selected[a], selected[b]});
      ++result.n_pairs;
    }
  }
  manifest["pairs"] = std::move(pairs);

  std::ofstream mf(result.manifest_path, std::ios::binary);
  if (!mf) throw IoError("cannot write '" + result.manifest_path + "'");
  mf << manifest.dump(2) << '\n';
  if (!mf) throw IoError("write failed for '" + result.manifest_path + "'");
  return result;
}

}  // namespace specsel
