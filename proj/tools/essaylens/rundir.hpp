#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace essaylens::cli {

inline constexpr const char* kVersion = "essaylens 0.1.0";

// Fixed file names inside a run directory.
namespace files {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kTruth = "truth.csv";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kHumanRefs = "refs/human.jsonl";
inline constexpr const char* kLlmRefs = "refs/llm.jsonl";
inline constexpr const char* kGenerationLog = "refs/generation_log.json";
inline constexpr const char* kHoldoutHuman = "refs/holdout_human.jsonl";
inline constexpr const char* kHoldoutLlm = "refs/holdout_llm.jsonl";
inline constexpr const char* kModel = "reference_model.json";
inline constexpr const char* kScores = "scores.csv";
inline constexpr const char* kThresholds = "thresholds.json";
inline constexpr const char* kCalibration = "calibration.csv";
}  // namespace files

class RunDir {
 public:
  explicit RunDir(std::filesystem::path root);
  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(const std::string& rel) const { return root_ / rel; }
  bool exists(const std::string& rel) const;
  /// Absolute path of an artifact; InputError naming the producing command
  /// when it is absent.
  std::filesystem::path require(const std::string& rel, const std::string& produced_by) const;

 private:
  std::filesystem::path root_;
};

/// Records what a command read and wrote. Written last, to
/// manifests/<name>.json, with paths relative to the run directory where
/// possible and no timestamps.
class Manifest {
 public:
  Manifest(const RunDir& dir, std::string name, const RunConfig& config);

  void input(const std::filesystem::path& p);
  /// Writes a file (creating parent directories) and records it.
  void write(const std::string& rel, const std::string& content);
  /// Records a file some library call already wrote.
  void wrote(const std::string& rel);
  void note(const std::string& key, nlohmann::ordered_json value);
  void commit();

 private:
  std::string display(const std::filesystem::path& p) const;

  const RunDir& dir_;
  std::string name_;
  nlohmann::ordered_json doc_;
};

std::string read_file(const std::filesystem::path& p);

}  // namespace essaylens::cli
