#include "cropyield/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "cropyield/digest.hpp"
#include "cropyield/model_io.hpp"
#include "cropyield/preprocess.hpp"
#include "cropyield/report.hpp"

namespace cropyield {

namespace {

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void add_figure(FileSet& files, const FigureDoc& fig) { files[fig.file_name()] = fig.svg; }

struct Fitted {
  TrainedModel model;
  EvalReport report;
};

Fitted fit_and_evaluate(ModelKind kind, const Matrix& X_train, std::span<const int> y_train,
                        const Matrix& X_test, std::span<const int> y_test, int k,
                        const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = fit(kind, X_train, y_train, cfg.model, cfg.seed);
  const auto t1 = std::chrono::steady_clock::now();
  auto report = evaluate_model(model, X_test, y_test, k);
  report.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
  return {std::move(model), std::move(report)};
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::ValidationFailed: return kExitValidation;
    case Errc::InvalidConfig: return kExitConfig;
    default: return kExitInput;
  }
}

std::string error_record(const std::exception& e) {
  nlohmann::ordered_json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = std::string(to_string(err->code()));
    j["exit_code"] = exit_code_for(err->code());
  } else {
    j["error"] = "Internal";
    j["exit_code"] = kExitInput;
  }
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["message"] = err->detail();
  } else {
    j["message"] = e.what();
  }
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["row"] = pe->row();
    j["column"] = pe->column();
    j["token"] = pe->token();
  }
  return j.dump();
}

InspectResult inspect_file(const std::filesystem::path& input, const ValidationOptions& options) {
  const auto d = read_dataset(input);
  InspectResult r;
  r.summary = summarize(d);
  r.validation = validate(d, options);
  r.json["input_sha256"] = d.source_digest;
  r.json["summary"] = to_json(r.summary);
  r.json["validation"] = to_json(r.validation);
  return r;
}

RunResult execute_run(const RunConfig& cfg) {
  check_config(cfg);
  RunResult out;
  FileSet& files = out.files;

  auto data = read_dataset(cfg.input);
  ValidationOptions vopt;
  vopt.strict = cfg.strict;
  out.validation = validate(data, vopt);
  files["validation.json"] = dump(to_json(out.validation));
  if (!out.validation.violations.empty()) {
    if (!cfg.drop_invalid) {
      throw Error(Errc::ValidationFailed, std::to_string(out.validation.violations.size()) +
                                              " rows violate the schema (first at row " +
                                              std::to_string(out.validation.violations.front().row) +
                                              ": " + out.validation.violations.front().message + ")");
    }
    const auto digest = data.source_digest;
    data = drop_invalid_rows(data, out.validation);
    data.source_digest = digest;
  }
  if (cfg.strict && !out.validation.warnings.empty()) {
    throw Error(Errc::ValidationFailed, std::to_string(out.validation.warnings.size()) +
                                            " soft warnings in strict mode");
  }
  if (data.empty()) throw Error(Errc::EmptyDataset, "no rows left after validation");
  out.rows_used = data.size();
  files["summary.json"] = dump(to_json(summarize(data)));

  auto nd = label_yield_classes(normalize_yield_per_crop(data), {cfg.classes, cfg.per_crop_quartiles});
  files["normalized.csv"] = to_csv(nd);
  const auto& y = *nd.labels;

  const auto fm = build_feature_matrix(data, {cfg.features});
  const auto parts = split(y, {cfg.train_fraction, cfg.seed, cfg.stratified});
  const auto scaler = fit_scaler(fm.values.select_rows(parts.train));
  const auto X_train = apply_scaler(scaler, fm.values.select_rows(parts.train));
  const auto X_test = apply_scaler(scaler, fm.values.select_rows(parts.test));
  LabelVector y_train, y_test;
  for (auto i : parts.train) y_train.push_back(y[i]);
  for (auto i : parts.test) y_test.push_back(y[i]);

  std::vector<std::optional<Fitted>> fitted(cfg.models.size());
  if (cfg.parallel && cfg.models.size() > 1) {
    std::vector<std::exception_ptr> errors(cfg.models.size());
    {
      std::vector<std::jthread> workers;
      for (std::size_t m = 0; m < cfg.models.size(); ++m) {
        workers.emplace_back([&, m] {
          try {
            fitted[m] = fit_and_evaluate(cfg.models[m], X_train, y_train, X_test, y_test, cfg.classes, cfg);
          } catch (...) {
            errors[m] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
      fitted[m] = fit_and_evaluate(cfg.models[m], X_train, y_train, X_test, y_test, cfg.classes, cfg);
    }
  }

  const auto names = class_names(cfg.classes);
  std::vector<ComparisonRow> rows;
  for (std::size_t m = 0; m < cfg.models.size(); ++m) {
    const std::string name(model_name(cfg.models[m]));
    files["model_" + name + ".json"] = serialize_model(fitted[m]->model);
    add_figure(files, render_confusion_heatmap(fitted[m]->report.confusion, name, names));
    rows.push_back({name, std::move(fitted[m]->report)});
  }
  out.table = compare_models(std::move(rows));
  files["comparison.json"] = dump(to_json(out.table));
  files["comparison.csv"] = to_csv(out.table);
  add_figure(files, render_metric_bars(out.table));

  for (auto f : kSynthFields) {
    const auto figs = render_distributions(data, field_key(f));
    add_figure(files, figs.histogram);
    add_figure(files, figs.density);
    add_figure(files, figs.boxplot);
  }
  ScatterOptions scatter;
  scatter.max_points = cfg.max_scatter_points;
  scatter.seed = cfg.seed;
  add_figure(files, render_scatter_matrix(data, scatter));

  const auto pesticide = aggregate_pesticide_by_crop_year(data);
  files["pesticide_by_crop_year.csv"] = to_csv(pesticide);
  add_figure(files, render_pesticide_bars(pesticide));
  add_figure(files, render_yield_boxplots(nd, YieldBoxMode::Raw));
  add_figure(files, render_yield_boxplots(nd, YieldBoxMode::Normalized));
  add_figure(files, render_yield_boxplots(nd, YieldBoxMode::ByClass));

  files["resolved_config.txt"] = to_text(cfg);
  files["manifest.json"] = build_manifest(files, data.source_digest);
  return out;
}

std::string build_manifest(const FileSet& files, const std::string& input_digest) {
  nlohmann::ordered_json j;
  j["input_sha256"] = input_digest;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, bytes] : files) {
    if (name == "manifest.json") continue;
    j["files"].push_back({{"path", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  return dump(j);
}

void write_files(const std::filesystem::path& outdir, const FileSet& files) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create '" + outdir.string() + "': " + ec.message());
  for (const auto& [name, bytes] : files) {
    const auto path = outdir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(Errc::IoError, "cannot write '" + path.string() + "'");
  }
}

SynthData synth_to_file(const std::filesystem::path& spec_path, const std::filesystem::path& output) {
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read spec '" + spec_path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("spec is not valid JSON: ") + e.what());
  }
  const auto spec = spec_from_json(j);
  auto data = generate(spec);

  auto truth = output;
  truth.replace_filename(output.stem().string() + ".truth.json");
  FileSet files;
  files[output.filename().string()] = to_csv(data.dataset);
  files[truth.filename().string()] = dump(truth_json(spec, data.labels));
  write_files(output.has_parent_path() ? output.parent_path() : std::filesystem::path("."), files);
  return data;
}

}  // namespace cropyield
