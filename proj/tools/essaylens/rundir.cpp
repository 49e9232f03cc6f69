#include "rundir.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "essaylens/digest.hpp"
#include "essaylens/error.hpp"

namespace essaylens::cli {

namespace fs = std::filesystem;

RunDir::RunDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

bool RunDir::exists(const std::string& rel) const { return fs::exists(path(rel)); }

fs::path RunDir::require(const std::string& rel, const std::string& produced_by) const {
  const auto p = path(rel);
  if (!fs::exists(p))
    throw InputError(fmt::format("missing {} in run directory '{}'; run `essaylens {}` first", rel, root_.string(),
                                 produced_by));
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Manifest::Manifest(const RunDir& dir, std::string name, const RunConfig& config) : dir_(dir), name_(std::move(name)) {
  doc_["command"] = name_;
  doc_["version"] = kVersion;
  doc_["config_hash"] = config.hash();
  doc_["seed"] = config.seed ? nlohmann::ordered_json(*config.seed) : nlohmann::ordered_json(nullptr);
  doc_["inputs"] = nlohmann::ordered_json::array();
  doc_["outputs"] = nlohmann::ordered_json::array();
}

std::string Manifest::display(const fs::path& p) const {
  const auto rel = fs::weakly_canonical(p).lexically_relative(fs::weakly_canonical(dir_.root()));
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

void Manifest::input(const fs::path& p) {
  doc_["inputs"].push_back({{"path", display(p)}, {"sha256", sha256_file(p.string())}});
}

void Manifest::write(const std::string& rel, const std::string& content) {
  const auto p = dir_.path(rel);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", p.string()));
  out << content;
  out.close();
  wrote(rel);
}

void Manifest::wrote(const std::string& rel) {
  const auto p = dir_.path(rel);
  doc_["outputs"].push_back({{"path", rel}, {"sha256", sha256_file(p.string())}, {"bytes", fs::file_size(p)}});
}

void Manifest::note(const std::string& key, nlohmann::ordered_json value) { doc_[key] = std::move(value); }

void Manifest::commit() {
  const auto p = dir_.path("manifests/" + name_ + ".json");
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << doc_.dump(2) << "\n";
}

}  // namespace essaylens::cli
