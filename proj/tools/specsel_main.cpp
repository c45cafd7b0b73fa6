// Command-line front end: select / train / predict / outliers / simulate /
// pairs. Every run writes a manifest echoing its arguments so results can be
// reproduced exactly; numeric outputs are byte-stable for a fixed seed.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "specsel/errors.hpp"
#include "specsel/family.hpp"
#include "specsel/model_io.hpp"
#include "specsel/pairs_export.hpp"
#include "specsel/parallel.hpp"
#include "specsel/redda.hpp"
#include "specsel/simulate.hpp"
#include "specsel/spectra.hpp"
#include "specsel/stepwise.hpp"
#include "specsel/version.hpp"

namespace {

using json = nlohmann::json;
using namespace specsel;

std::string single_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return text;
}

Matrix take_columns(const Matrix& from, const std::vector<int>& cols) {
  Matrix out(from.rows(), static_cast<long>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<long>(j)) = from.col(cols[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// shared flag groups

struct IoOpts {
  std::string input;
  std::string label_column = "class";
  std::string delimiter = ",";
  std::string unit = "index";
};

void add_io_flags(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--input", io.input, "Input CSV (wavelength header + label column)")
      ->required();
  cmd->add_option("--label", io.label_column, "Label column name")
      ->capture_default_str();
  cmd->add_option("--delimiter", io.delimiter, "CSV delimiter (use 'tab' for tabs)")
      ->capture_default_str();
  cmd->add_option("--unit", io.unit, "Wavelength axis unit of numeric headers")
      ->check(CLI::IsMember({"index", "nm", "cm-1"}))
      ->capture_default_str();
}

CsvSchema schema_of(const IoOpts& io) {
  CsvSchema schema;
  schema.label_column = io.label_column;
  schema.delimiter = (io.delimiter == "tab" || io.delimiter == "\\t") ? '\t' : io.delimiter.at(0);
  schema.unit = parse_unit(io.unit);
  return schema;
}

struct FitOpts {
  double gamma = 0.0;
  std::string family = "EEI";
  int restarts = 10;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = all available
};

void add_fit_flags(CLI::App* cmd, FitOpts& fit) {
  cmd->add_option("--gamma", fit.gamma, "Trimming level, fraction of rows discarded")
      ->check(CLI::Range(0.0, 0.4999))
      ->capture_default_str();
  cmd->add_option("--family", fit.family, "Covariance family, or 'auto' to choose by score")
      ->check(CLI::IsMember({"EII", "VII", "EEI", "VVI", "EEE", "VVV", "auto"}))
      ->capture_default_str();
  cmd->add_option("--restarts", fit.restarts, "Concentration restarts")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  cmd->add_option("--seed", fit.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", fit.threads, "Worker threads (0 = all available)")
      ->check(CLI::Range(0, 4096))
      ->capture_default_str();
}

FitConfig fit_config(const FitOpts& opts) {
  FitConfig config;
  config.n_restarts = opts.restarts;
  config.seed = opts.seed;
  config.threads = opts.threads > 0 ? opts.threads : default_threads();
  return config;
}

// ---------------------------------------------------------------------------
// manifests

// The worker count is an execution detail, not configuration: results do not
// depend on it, and artifacts must match byte for byte across worker counts.
// Drop it from the echoed command line so manifests stay comparable.
std::vector<std::string> strip_thread_args(const std::vector<std::string>& argv) {
  std::vector<std::string> out;
  out.reserve(argv.size());
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--threads") {
      ++i;  // skip the value as well
      continue;
    }
    if (argv[i].rfind("--threads=", 0) == 0) continue;
    out.push_back(argv[i]);
  }
  return out;
}

json base_manifest(const std::string& command, const std::vector<std::string>& argv) {
  json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["schema"] = kModelSchemaVersion;
  m["command"] = command;
  m["argv"] = strip_thread_args(argv);
  return m;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// shared steps

LabeledSpectra load_reported(const std::string& path, const CsvSchema& schema) {
  LabeledSpectra data = load_csv(path, schema);
  std::cout << "loaded '" << path << "': " << data.rows() << " rows, " << data.cols()
            << " channels, "
            << (data.has_labels() ? std::to_string(data.n_classes()) + " classes" : "unlabeled")
            << "\n";
  return data;
}

void require_labels(const LabeledSpectra& data, const IoOpts& io) {
  if (!data.has_labels()) {
    throw SchemaError("label column '" + io.label_column + "' not found in '" + io.input + "'");
  }
}

// 'auto' family: screen channels one at a time with the most general family,
// then score all six families on the strongest few channels together.
CovarianceFamily resolve_family(const std::string& requested, const LabeledSpectra& data,
                                double gamma, const FitConfig& fit, json& manifest) {
  if (requested != "auto") return *parse_family(requested);

  StepwiseConfig screen;
  screen.family = CovarianceFamily::VVV;
  screen.gamma = gamma;
  screen.fit = fit;
  screen.fit.threads = 1;

  const long p = data.cols();
  const std::vector<int> none;
  std::vector<double> diff(static_cast<std::size_t>(p));
  parallel_for(static_cast<std::size_t>(p), fit.threads, [&](std::size_t j) {
    diff[j] = evaluate_candidate(data.absorbance, data.labels, data.n_classes(), none,
                                 StepDirection::Add, static_cast<int>(j), screen);
  });

  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return diff[static_cast<std::size_t>(a)] > diff[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(std::min<long>(p, 10)));
  std::sort(order.begin(), order.end());

  const Matrix sub = take_columns(data.absorbance, order);
  const CovarianceFamily family = select_family(sub, data.labels, data.n_classes(), gamma,
                                                kAllFamilies, fit);
  manifest["family_screen_channels"] = order;
  std::cout << "family 'auto' resolved to " << family_code(family) << "\n";
  return family;
}

// Accept either exactly the model's variables or any file wide enough to be
// projected through the stored column indices.
Matrix project_for_model(const LabeledSpectra& data, const ModelArtifact& model) {
  const long p = static_cast<long>(model.selected.size());
  if (data.cols() == p) return data.absorbance;
  const int max_index =
      model.selected.empty() ? 0 : *std::max_element(model.selected.begin(), model.selected.end());
  if (data.cols() > max_index) return take_columns(data.absorbance, model.selected);
  throw DimensionMismatch("input has " + std::to_string(data.cols()) +
                          " columns; model expects " + std::to_string(p) +
                          " selected columns or at least " + std::to_string(max_index + 1) +
                          " for index projection");
}

ModelArtifact load_model_reported(const std::string& path) {
  ModelArtifact model = load_model(path);
  std::cout << "loaded model '" << path << "': " << model.selected.size() << " variables, "
            << model.class_names.size() << " classes, family "
            << family_code(model.params.family) << "\n";
  return model;
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  IoOpts io;
  FitOpts fit;
  double min_diff = 0.0;
  long max_steps = 0;
  std::string out;
  std::string log_path;
};

void run_select(const SelectArgs& args, const std::vector<std::string>& argv) {
  const CsvSchema schema = schema_of(args.io);
  const LabeledSpectra data = load_reported(args.io.input, schema);
  require_labels(data, args.io);

  const FitConfig fit = fit_config(args.fit);
  json manifest = base_manifest("select", argv);
  manifest["input"] = args.io.input;
  manifest["gamma"] = args.fit.gamma;
  manifest["seed"] = args.fit.seed;
  manifest["restarts"] = fit.n_restarts;
  manifest["min_diff"] = args.min_diff;
  manifest["max_steps"] = args.max_steps;
  manifest["family_requested"] = args.fit.family;

  const CovarianceFamily family =
      resolve_family(args.fit.family, data, args.fit.gamma, fit, manifest);
  manifest["family"] = std::string(family_code(family));

  StepwiseConfig config;
  config.family = family;
  config.gamma = args.fit.gamma;
  config.min_diff = args.min_diff;
  config.max_steps = args.max_steps;
  config.fit = fit;
  config.wavelengths = &data.wavelengths;

  const std::string log_path = args.log_path.empty() ? args.out + ".steps.tsv" : args.log_path;
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw IoError("cannot write '" + log_path + "'");
  config.step_log = &log;

  SelectionState state =
      run_stepwise(data.absorbance, data.labels, data.n_classes(), config);
  std::sort(state.included.begin(), state.included.end());

  manifest["selected"] = state.included;
  manifest["steps"] = state.history.size();
  manifest["terminated"] = state.terminated;
  write_json(args.out + ".manifest.json", manifest);
  std::cout << "step log: " << log_path << "\n";

  if (state.included.empty()) {
    throw Infeasible("selection is empty; no model written (see " + log_path + ")");
  }

  std::cout << "selected " << state.included.size() << " variables:";
  std::vector<double> wavelengths;
  for (int v : state.included) {
    wavelengths.push_back(data.wavelengths[static_cast<std::size_t>(v)]);
    std::cout << ' ' << v << " (" << format_double(wavelengths.back()) << ")";
  }
  std::cout << "\n";

  const Matrix sub = take_columns(data.absorbance, state.included);
  const TrimmedFit final_fit =
      fit_redda(sub, data.labels, data.n_classes(), family, args.fit.gamma, fit);
  const ModelArtifact artifact = make_artifact(final_fit, state.included, wavelengths,
                                               data.unit, data.class_names, manifest.dump());
  save_model(artifact, args.out);
  std::cout << "wrote model: " << args.out << " (trimmed loglik "
            << format_double(final_fit.trimmed_loglik) << ", kept " << final_fit.n_star << " of "
            << data.rows() << ")\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  IoOpts io;
  FitOpts fit;
  std::vector<int> vars;
  std::string out;
};

void run_train(const TrainArgs& args, const std::vector<std::string>& argv) {
  const CsvSchema schema = schema_of(args.io);
  const LabeledSpectra data = load_reported(args.io.input, schema);
  require_labels(data, args.io);

  std::vector<int> vars = args.vars;
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
    throw DimensionMismatch("--vars contains duplicate indices");
  }
  for (int v : vars) {
    if (v < 0 || v >= data.cols()) {
      throw DimensionMismatch("--vars index " + std::to_string(v) + " out of range [0, " +
                              std::to_string(data.cols()) + ")");
    }
  }

  const FitConfig fit = fit_config(args.fit);
  json manifest = base_manifest("train", argv);
  manifest["input"] = args.io.input;
  manifest["gamma"] = args.fit.gamma;
  manifest["seed"] = args.fit.seed;
  manifest["restarts"] = fit.n_restarts;
  manifest["family_requested"] = args.fit.family;
  manifest["vars"] = vars;

  CovarianceFamily family;
  if (args.fit.family == "auto") {
    const Matrix sub = take_columns(data.absorbance, vars);
    family = select_family(sub, data.labels, data.n_classes(), args.fit.gamma, kAllFamilies, fit);
    std::cout << "family 'auto' resolved to " << family_code(family) << "\n";
  } else {
    family = *parse_family(args.fit.family);
  }
  manifest["family"] = std::string(family_code(family));

  const Matrix sub = take_columns(data.absorbance, vars);
  const TrimmedFit final_fit =
      fit_redda(sub, data.labels, data.n_classes(), family, args.fit.gamma, fit);

  std::vector<double> wavelengths;
  for (int v : vars) wavelengths.push_back(data.wavelengths[static_cast<std::size_t>(v)]);
  write_json(args.out + ".manifest.json", manifest);
  const ModelArtifact artifact = make_artifact(final_fit, vars, wavelengths, data.unit,
                                               data.class_names, manifest.dump());
  save_model(artifact, args.out);
  std::cout << "wrote model: " << args.out << " (trimmed loglik "
            << format_double(final_fit.trimmed_loglik) << ", kept " << final_fit.n_star << " of "
            << data.rows() << ")\n";
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  IoOpts io;
  std::string model_path;
  std::string out;
};

void run_predict(const PredictArgs& args, const std::vector<std::string>& argv) {
  const ModelArtifact model = load_model_reported(args.model_path);
  const LabeledSpectra data = load_reported(args.io.input, schema_of(args.io));
  const Matrix projected = project_for_model(data, model);

  const Prediction prediction = predict_map(model.params, projected);

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw IoError("cannot write '" + args.out + "'");
  out << "row,label";
  for (const std::string& name : model.class_names) out << ",p_" << name;
  out << '\n';
  for (long i = 0; i < projected.rows(); ++i) {
    out << i << ','
        << model.class_names[static_cast<std::size_t>(
               prediction.labels[static_cast<std::size_t>(i)])];
    for (long g = 0; g < prediction.posterior.cols(); ++g) {
      out << ',' << format_double(prediction.posterior(i, g));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + args.out + "'");
  std::cout << "wrote predictions: " << args.out << "\n";

  if (data.has_labels()) {
    // Score only when every test label names a model class.
    std::vector<int> to_model(data.class_names.size(), -1);
    bool resolvable = true;
    for (std::size_t c = 0; c < data.class_names.size(); ++c) {
      const auto it = std::find(model.class_names.begin(), model.class_names.end(),
                                data.class_names[c]);
      if (it == model.class_names.end()) {
        resolvable = false;
        break;
      }
      to_model[c] = static_cast<int>(it - model.class_names.begin());
    }
    if (resolvable) {
      long correct = 0;
      for (long i = 0; i < projected.rows(); ++i) {
        if (prediction.labels[static_cast<std::size_t>(i)] ==
            to_model[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])]) {
          ++correct;
        }
      }
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.1f", 100.0 * static_cast<double>(correct) /
                                                 static_cast<double>(projected.rows()));
      std::cout << "accuracy: " << correct << " of " << projected.rows() << " correct (" << pct
                << "%)\n";
    } else {
      std::cout << "input labels do not match the model's classes; skipping accuracy\n";
    }
  }

  json manifest = base_manifest("predict", argv);
  manifest["input"] = args.io.input;
  manifest["model"] = args.model_path;
  manifest["rows"] = projected.rows();
  write_json(args.out + ".manifest.json", manifest);
}

// ---------------------------------------------------------------------------
// outliers

struct OutlierArgs {
  IoOpts io;
  std::string model_path;
  std::string out;
  int top = 5;
};

void run_outliers(const OutlierArgs& args, const std::vector<std::string>& argv) {
  const ModelArtifact model = load_model_reported(args.model_path);
  const LabeledSpectra data = load_reported(args.io.input, schema_of(args.io));
  const Matrix projected = project_for_model(data, model);

  const OutlierReport report = marginal_log_density(model.params, projected);

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw IoError("cannot write '" + args.out + "'");
  out << "row,log_density,rank\n";
  for (long i = 0; i < projected.rows(); ++i) {
    out << i << ',' << format_double(report.log_density[static_cast<std::size_t>(i)]) << ','
        << report.rank[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw IoError("write failed for '" + args.out + "'");
  std::cout << "wrote outlier scores: " << args.out << "\n";

  const int top = std::min<int>(args.top, static_cast<int>(projected.rows()));
  if (top > 0) {
    std::vector<long> row_of_rank(static_cast<std::size_t>(projected.rows()));
    for (long i = 0; i < projected.rows(); ++i) {
      row_of_rank[static_cast<std::size_t>(report.rank[static_cast<std::size_t>(i)] - 1)] = i;
    }
    std::cout << "lowest marginal densities:\n";
    for (int r = 0; r < top; ++r) {
      const long row = row_of_rank[static_cast<std::size_t>(r)];
      std::cout << "  rank " << (r + 1) << ": row " << row << " log-density "
                << format_double(report.log_density[static_cast<std::size_t>(row)]) << "\n";
    }
  }

  json manifest = base_manifest("outliers", argv);
  manifest["input"] = args.io.input;
  manifest["model"] = args.model_path;
  manifest["top"] = args.top;
  manifest["rows"] = projected.rows();
  write_json(args.out + ".manifest.json", manifest);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string out_dir;
  int classes = 3;
  long train_rows = 300;
  long test_rows = 150;
  int channels = 30;
  int relevant = 4;
  double separation = 3.0;
  std::string family = "VVI";
  double label_noise = 0.0;
  std::vector<std::string> recipes;
  int spike_channel = -1;
  int outlier_class = 0;
  int correlated = 0;
  double noise_rho = 0.6;
  std::uint64_t seed = 0;
};

void run_simulate(const SimulateArgs& args, const std::vector<std::string>& argv) {
  SimConfig config;
  config.n_classes = args.classes;
  config.n_train = args.train_rows;
  config.n_test = args.test_rows;
  config.n_channels = args.channels;
  config.n_relevant = args.relevant;
  config.separation = args.separation;
  config.family = *parse_family(args.family);
  config.n_correlated = args.correlated;
  config.noise_correlation = args.noise_rho;
  config.contamination.label_noise_rate = args.label_noise;
  config.seed = args.seed;
  for (const std::string& token : args.recipes) {
    OutlierRecipe recipe;
    if (token == "shift") {
      recipe.kind = RecipeKind::Shift;
    } else if (token == "noise") {
      recipe.kind = RecipeKind::WhiteNoise;
    } else if (token == "spike") {
      recipe.kind = RecipeKind::Spike;
      recipe.channel = args.spike_channel;
    } else if (token == "slope") {
      recipe.kind = RecipeKind::Slope;
    } else {
      throw Infeasible("unknown recipe '" + token + "' (use shift|noise|spike|slope)");
    }
    recipe.source_class = args.outlier_class;
    config.contamination.recipes.push_back(recipe);
  }

  const SimulatedData sim = simulate_contaminated(config);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) throw IoError("cannot create '" + args.out_dir + "': " + ec.message());
  const auto in_dir = [&](const char* name) {
    return (std::filesystem::path(args.out_dir) / name).string();
  };

  save_csv(sim.train, in_dir("train.csv"));
  save_csv(sim.test, in_dir("test.csv"));

  json truth;
  truth["relevant"] = sim.truth.relevant;
  truth["noisy_rows"] = sim.truth.noisy_rows;
  truth["original_labels"] = sim.truth.original_labels;
  truth["outlier_rows"] = sim.truth.outlier_rows;
  truth["outlier_kinds"] = sim.truth.outlier_kinds;
  truth["spike_channels"] = sim.truth.spike_channels;
  write_json(in_dir("truth.json"), truth);

  json manifest = base_manifest("simulate", argv);
  manifest["seed"] = args.seed;
  manifest["classes"] = args.classes;
  manifest["train_rows"] = args.train_rows;
  manifest["test_rows"] = args.test_rows;
  manifest["channels"] = args.channels;
  manifest["relevant"] = args.relevant;
  manifest["separation"] = args.separation;
  manifest["family"] = args.family;
  manifest["label_noise"] = args.label_noise;
  manifest["recipes"] = args.recipes;
  write_json(in_dir("run_manifest.json"), manifest);

  std::cout << "wrote " << in_dir("train.csv") << " (" << sim.train.rows() << " rows), "
            << in_dir("test.csv") << " (" << sim.test.rows() << " rows)\n";
  std::cout << "informative channels:";
  for (int v : sim.truth.relevant) std::cout << ' ' << v;
  std::cout << "; flipped labels: " << sim.truth.noisy_rows.size()
            << "; adulterated rows: " << sim.truth.outlier_rows.size() << "\n";
}

// ---------------------------------------------------------------------------
// pairs

struct PairsArgs {
  IoOpts io;
  std::string model_path;
  std::vector<int> vars;
  std::string out_dir;
};

void run_pairs(const PairsArgs& args, const std::vector<std::string>& argv) {
  const LabeledSpectra data = load_reported(args.io.input, schema_of(args.io));

  std::vector<int> selected = args.vars;
  if (!args.model_path.empty()) {
    const ModelArtifact model = load_model_reported(args.model_path);
    selected = model.selected;
  }

  const PairsExport result = export_pairs_data(data, selected, args.out_dir);
  std::cout << "wrote " << result.table_path << " and " << result.manifest_path << " ("
            << result.n_pairs << " pairs)\n";

  json manifest = base_manifest("pairs", argv);
  manifest["input"] = args.io.input;
  manifest["variables"] = selected;
  write_json((std::filesystem::path(args.out_dir) / "run_manifest.json").string(), manifest);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> argv_echo(argv, argv + argc);

  CLI::App app{"Robust stepwise wavelength selection and classification for spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  SelectArgs select_args;
  CLI::App* select_cmd =
      app.add_subcommand("select", "Pick discriminative wavelengths, then train a model");
  add_io_flags(select_cmd, select_args.io);
  add_fit_flags(select_cmd, select_args.fit);
  select_cmd->add_option("--min-diff", select_args.min_diff,
                         "Evidence threshold a step must exceed")
      ->capture_default_str();
  select_cmd->add_option("--max-steps", select_args.max_steps, "Sweep limit (0 = twice P)")
      ->check(CLI::Range(0L, 1000000L))
      ->capture_default_str();
  select_cmd->add_option("--out", select_args.out, "Model output path")->required();
  select_cmd->add_option("--log", select_args.log_path,
                         "Step log path (default: <out>.steps.tsv)");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "Train on a fixed variable list");
  add_io_flags(train_cmd, train_args.io);
  add_fit_flags(train_cmd, train_args.fit);
  train_cmd->add_option("--vars", train_args.vars, "Column indices to train on")
      ->delimiter(',')
      ->required();
  train_cmd->add_option("--out", train_args.out, "Model output path")->required();

  PredictArgs predict_args;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Classify rows with a trained model");
  add_io_flags(predict_cmd, predict_args.io);
  predict_cmd->add_option("--model", predict_args.model_path, "Model file")->required();
  predict_cmd->add_option("--out", predict_args.out, "Prediction CSV path")->required();

  OutlierArgs outlier_args;
  CLI::App* outlier_cmd =
      app.add_subcommand("outliers", "Rank rows by marginal density under a model");
  add_io_flags(outlier_cmd, outlier_args.io);
  outlier_cmd->add_option("--model", outlier_args.model_path, "Model file")->required();
  outlier_cmd->add_option("--out", outlier_args.out, "Score CSV path")->required();
  outlier_cmd->add_option("--top", outlier_args.top, "How many lowest-density rows to list")
      ->check(CLI::Range(0, 1000000))
      ->capture_default_str();

  SimulateArgs sim_args;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Generate contaminated spectra with ground truth");
  sim_cmd->add_option("--out-dir", sim_args.out_dir, "Output directory")->required();
  sim_cmd->add_option("--classes", sim_args.classes)->capture_default_str();
  sim_cmd->add_option("--train-rows", sim_args.train_rows)->capture_default_str();
  sim_cmd->add_option("--test-rows", sim_args.test_rows)->capture_default_str();
  sim_cmd->add_option("--channels", sim_args.channels)->capture_default_str();
  sim_cmd->add_option("--relevant", sim_args.relevant, "Class-informative channel count")
      ->capture_default_str();
  sim_cmd->add_option("--separation", sim_args.separation, "Class-mean gap in sigma units")
      ->capture_default_str();
  sim_cmd->add_option("--family", sim_args.family, "Generator covariance flavor")
      ->check(CLI::IsMember({"EII", "VII", "EEI", "VVI", "EEE", "VVV"}))
      ->capture_default_str();
  sim_cmd->add_option("--label-noise", sim_args.label_noise, "Fraction of training labels flipped")
      ->check(CLI::Range(0.0, 0.9999))
      ->capture_default_str();
  sim_cmd->add_option("--recipes", sim_args.recipes,
                      "Adulterations to append: shift|noise|spike|slope")
      ->delimiter(',');
  sim_cmd->add_option("--spike-channel", sim_args.spike_channel,
                      "Spike target channel (-1 = first informative)")
      ->capture_default_str();
  sim_cmd->add_option("--outlier-class", sim_args.outlier_class,
                      "Class whose spectra get adulterated")
      ->capture_default_str();
  sim_cmd->add_option("--correlated", sim_args.correlated,
                      "Channels noise-correlated with the first informative one")
      ->capture_default_str();
  sim_cmd->add_option("--noise-rho", sim_args.noise_rho, "Noise correlation coefficient")
      ->check(CLI::Range(-0.9999, 0.9999))
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();

  PairsArgs pairs_args;
  CLI::App* pairs_cmd =
      app.add_subcommand("pairs", "Export pairwise plot data for chosen variables");
  add_io_flags(pairs_cmd, pairs_args.io);
  CLI::Option* pairs_model = pairs_cmd->add_option("--model", pairs_args.model_path,
                                                   "Take the variable list from this model");
  pairs_cmd->add_option("--vars", pairs_args.vars, "Explicit column indices")
      ->delimiter(',')
      ->excludes(pairs_model);
  pairs_cmd->add_option("--out-dir", pairs_args.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "specsel: usage error: " << single_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (select_cmd->parsed()) {
      run_select(select_args, argv_echo);
    } else if (train_cmd->parsed()) {
      run_train(train_args, argv_echo);
    } else if (predict_cmd->parsed()) {
      run_predict(predict_args, argv_echo);
    } else if (outlier_cmd->parsed()) {
      run_outliers(outlier_args, argv_echo);
    } else if (sim_cmd->parsed()) {
      run_simulate(sim_args, argv_echo);
    } else if (pairs_cmd->parsed()) {
      run_pairs(pairs_args, argv_echo);
    }
  } catch (const Error& e) {
    std::cerr << "specsel: error: " << e.kind() << ": " << single_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "specsel: error: internal: " << single_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
