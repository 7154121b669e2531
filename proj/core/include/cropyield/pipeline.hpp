#pragma once

#include <exception>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "cropyield/config.hpp"
#include "cropyield/error.hpp"
#include "cropyield/eval.hpp"
#include "cropyield/ingest.hpp"
#include "cropyield/synth.hpp"

namespace cropyield {

/// Stable process exit codes.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitValidation = 2, kExitConfig = 3 };

int exit_code_for(Errc code) noexcept;

/// One-line JSON description of a failure: {"error": code, "message": ...}
/// plus row/column/token for parse errors.
std::string error_record(const std::exception& e);

struct InspectResult {
  SummaryStats summary;
  ValidationReport validation;
  nlohmann::ordered_json json;  // {"summary": ..., "validation": ...}
};

InspectResult inspect_file(const std::filesystem::path& input, const ValidationOptions& options = {});

/// Output file name -> bytes. Ordered, so writing and hashing are deterministic.
using FileSet = std::map<std::string, std::string>;

struct RunResult {
  ComparisonTable table;  // with timings
  ValidationReport validation;
  std::size_t rows_used = 0;
  FileSet files;  // includes manifest.json
};

/// ingest, validate, label, split, fit, evaluate and render, all in memory.
/// Throws Error(ValidationFailed) when validation blocks the run.
RunResult execute_run(const RunConfig& cfg);

/// `{"input_sha256": ..., "files": [{"path", "bytes", "sha256"}, ...]}` over
/// every file but the manifest itself, sorted by path.
std::string build_manifest(const FileSet& files, const std::string& input_digest);

/// Creates `outdir` and writes every file.
void write_files(const std::filesystem::path& outdir, const FileSet& files);

/// Reads a JSON generator spec, writes the CSV to `output` and the generator spec plus true
/// labels to `<stem>.truth.json` next to it.
SynthData synth_to_file(const std::filesystem::path& spec_path, const std::filesystem::path& output);

}  // namespace cropyield
