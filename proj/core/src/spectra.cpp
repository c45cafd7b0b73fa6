#include "specsel/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "specsel/errors.hpp"

namespace specsel {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool parse_double(std::string_view cell, double& out) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string cell_location(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

bool strictly_monotone(const std::vector<double>& v) {
  if (v.size() < 2) return true;
  const bool up = v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (up ? v[i] <= v[i - 1] : v[i] >= v[i - 1]) return false;
  }
  return true;
}

}  // namespace

const char* unit_name(WavelengthUnit unit) {
  switch (unit) {
    case WavelengthUnit::Nanometer: return "nm";
    case WavelengthUnit::Wavenumber: return "cm-1";
    case WavelengthUnit::Index: break;
  }
  return "index";
}

WavelengthUnit parse_unit(const std::string& name) {
  if (name == "nm") return WavelengthUnit::Nanometer;
  if (name == "cm-1") return WavelengthUnit::Wavenumber;
  if (name == "index") return WavelengthUnit::Index;
  throw SchemaError("unknown wavelength unit '" + name + "'");
}

void LabeledSpectra::validate() const {
  if (wavelengths.size() != static_cast<std::size_t>(cols())) {
    throw DimensionMismatch("spectra: wavelength axis length differs from column count");
  }
  if (has_labels() && labels.size() != static_cast<std::size_t>(rows())) {
    throw DimensionMismatch("spectra: label count differs from row count");
  }
  if (!absorbance.allFinite()) throw NonFinite("spectra: non-finite absorbance value");
  for (int label : labels) {
    if (label < 0 || label >= n_classes()) {
      throw UnknownLabel("spectra: label index " + std::to_string(label) + " out of range");
    }
  }
  if (unit != WavelengthUnit::Index && !strictly_monotone(wavelengths)) {
    throw SchemaError("spectra: wavelength axis is not strictly monotone");
  }
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

LabeledSpectra load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::vector<std::string_view> lines;
  {
    std::string_view rest = text;
    while (!rest.empty()) {
      const std::size_t pos = rest.find('\n');
      const std::string_view line =
          pos == std::string_view::npos ? rest : rest.substr(0, pos);
      if (!trim(line).empty()) lines.push_back(line);
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
  }
  if (lines.size() < 2) throw ParseError("'" + path + "': need a header row and data rows");

  const std::vector<std::string_view> header = split(lines[0], schema.delimiter);
  const std::size_t n_cols = header.size();

  long label_col = -1;
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (header[j] == schema.label_column) {
      label_col = static_cast<long>(j);
      break;
    }
  }

  LabeledSpectra out;
  const long p = static_cast<long>(n_cols) - (label_col >= 0 ? 1 : 0);
  if (p < 1) throw ParseError("'" + path + "': no spectral columns");

  // Numeric headers carry the axis; otherwise columns are numbered 0..P-1.
  out.wavelengths.reserve(static_cast<std::size_t>(p));
  bool numeric_header = true;
  for (std::size_t j = 0; j < n_cols && numeric_header; ++j) {
    if (static_cast<long>(j) == label_col) continue;
    double w;
    numeric_header = parse_double(header[j], w);
    if (numeric_header) out.wavelengths.push_back(w);
  }
  if (!numeric_header) {
    out.wavelengths.clear();
    for (long j = 0; j < p; ++j) out.wavelengths.push_back(static_cast<double>(j));
    out.unit = WavelengthUnit::Index;
  } else {
    out.unit = schema.unit;
  }

  const long n = static_cast<long>(lines.size()) - 1;
  out.absorbance.resize(n, p);
  std::vector<std::string> raw_labels;
  if (label_col >= 0) raw_labels.reserve(static_cast<std::size_t>(n));

  for (long i = 0; i < n; ++i) {
    const std::size_t file_row = static_cast<std::size_t>(i) + 2;  // 1-based, after header
    const std::vector<std::string_view> cells =
        split(lines[static_cast<std::size_t>(i) + 1], schema.delimiter);
    if (cells.size() != n_cols) {
      throw ParseError("'" + path + "': row " + std::to_string(file_row) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(n_cols));
    }
    long col = 0;
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (static_cast<long>(j) == label_col) {
        if (cells[j].empty()) {
          throw UnknownLabel("'" + path + "': empty label at row " + std::to_string(file_row));
        }
        raw_labels.emplace_back(cells[j]);
        continue;
      }
      const std::string loc = cell_location(file_row, j + 1);
      if (cells[j].empty()) throw NonFinite("'" + path + "': empty cell at " + loc);
      double value;
      if (!parse_double(cells[j], value)) {
        throw ParseError("'" + path + "': cannot parse '" + std::string(cells[j]) + "' at " + loc);
      }
      if (!std::isfinite(value)) throw NonFinite("'" + path + "': non-finite value at " + loc);
      out.absorbance(i, col++) = value;
    }
  }

  if (label_col >= 0) {
    std::map<std::string, int> index;  // sorted, so class order is row-order independent
    for (const std::string& name : raw_labels) index.emplace(name, 0);
    int next = 0;
    for (auto& [name, idx] : index) idx = next++;
    out.class_names.reserve(index.size());
    for (const auto& [name, idx] : index) out.class_names.push_back(name);
    out.labels.reserve(raw_labels.size());
    for (const std::string& name : raw_labels) out.labels.push_back(index.at(name));
  }

  out.validate();
  return out;
}

void save_csv(const LabeledSpectra& spectra, const std::string& path, const CsvSchema& schema) {
  spectra.validate();
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw IoError("cannot write '" + path + "'");

  const long p = spectra.cols();
  for (long j = 0; j < p; ++j) {
    if (j > 0) outf << schema.delimiter;
    outf << format_double(spectra.wavelengths[static_cast<std::size_t>(j)]);
  }
  if (spectra.has_labels()) outf << schema.delimiter << schema.label_column;
  outf << '\n';

  for (long i = 0; i < spectra.rows(); ++i) {
    for (long j = 0; j < p; ++j) {
      if (j > 0) outf << schema.delimiter;
      outf << format_double(spectra.absorbance(i, j));
    }
    if (spectra.has_labels()) {
      outf << schema.delimiter
           << spectra.class_names[static_cast<std::size_t>(
                  spectra.labels[static_cast<std::size_t>(i)])];
    }
    outf << '\n';
  }
  if (!outf) throw IoError("write failed for '" + path + "'");
}

}  // namespace specsel
