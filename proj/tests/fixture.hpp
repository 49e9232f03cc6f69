#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "essaylens/econo.hpp"
#include "essaylens/econo_report.hpp"
#include "essaylens/simlab.hpp"

// Deterministic analysis inputs and the full set of report tables built from
// them. Shared by the report unit tests and the acceptance suite.
namespace fixture {

using namespace essaylens;

/// Paper-shaped population at the given scale, true alpha as the estimate,
/// and synthetic feature vectors that drift with alpha.
inline econo::AnalysisData analysis_data(double scale = 0.3, std::uint64_t seed = 17) {
  auto s = simlab::preset("paper-shaped");
  for (auto& c : s.cells) {
    c.n_higher = std::size_t(std::llround(double(c.n_higher) * scale));
    c.n_lower = std::size_t(std::llround(double(c.n_lower) * scale));
  }
  s.seed = seed;
  auto sim = simlab::simulate(s);
  econo::AnalysisData d;
  d.era = s.era;
  d.records = std::move(sim.records);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const double base[11] = {420, 380, 210, 4.6, 19, 0.55, 0.018, 85, 80, 110, -50};
  const double slope[11] = {30, 25, 20, 0.4, -3, 0.05, -0.002, 10, 3, -15, 12};
  const double sd[11] = {60, 55, 30, 0.2, 4, 0.05, 0.002, 15, 3, 20, 10};
  for (const auto& t : sim.truth) {
    d.alpha_hat.push_back(t.true_alpha);
    stylometry::FeatureVector f;
    double v[11];
    for (int k = 0; k < 11; ++k) v[k] = base[k] + slope[k] * t.true_alpha + sd[k] * z(rng);
    f.n_tokens = v[0];
    f.n_words = v[1];
    f.n_types = v[2];
    f.avg_word_len = v[3];
    f.avg_sentence_len = v[4];
    f.ttr = v[5];
    f.maas_ttr = v[6];
    f.mtld = v[7];
    f.hdd = v[8];
    f.yules_k = v[9];
    f.complexity = v[10];
    d.features.push_back(f);
  }
  return d;
}

/// Every report table, in report order.
inline std::vector<TextTable> all_tables(const econo::AnalysisData& d, std::size_t n_sims = 50) {
  const auto did_c = econo::covariates_did();
  const auto full_c = econo::covariates_full();
  std::vector<TextTable> out;
  const auto desc = econo::descriptives(d, {0.07, 0.13});
  out.push_back(econo::table_descriptives(desc));
  out.push_back(econo::table_usage(desc));
  out.push_back(econo::table_did(econo::did(d, did_c)));
  out.push_back(econo::table_interaction(econo::interaction(d, full_c)));
  econo::MediationOptions mo;
  mo.n_sims = n_sims;
  mo.seed = 3;
  std::vector<std::string> feats;
  for (auto k : stylometry::feature_keys()) feats.emplace_back(k);
  out.push_back(econo::table_mediation(econo::mediation(d, feats, full_c, mo)));
  out.push_back(econo::table_event_study(econo::event_study(d, 2023, did_c)));
  out.push_back(econo::table_placebo(econo::placebo_timing(d, {2021, 2022, 2023}, did_c)));
  out.push_back(econo::table_covid(econo::covid_interaction(d, {2020, 2021}, did_c)));
  out.push_back(econo::table_rolling(econo::rolling_window(d, did_c)));
  out.push_back(econo::table_donut(econo::donut_hole(d, econo::donut_presets(), did_c)));
  out.push_back(econo::table_covstab(econo::covariate_stability(d, econo::covariate_presets())));
  out.push_back(econo::table_stratified(econo::stratified(d, full_c)));
  return out;
}

inline std::string golden_path(const std::string& id) {
  return std::string(ESSAYLENS_GOLDEN_DIR) + "/" + id + ".txt";
}

inline std::string read_golden(const std::string& id) {
  std::ifstream in(golden_path(id), std::ios::binary);
  if (!in) return {};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// With ESSAYLENS_UPDATE_GOLDEN set, rewrites the golden files instead.
inline bool update_requested() { return std::getenv("ESSAYLENS_UPDATE_GOLDEN") != nullptr; }

inline void write_golden(const TextTable& t) {
  std::filesystem::create_directories(ESSAYLENS_GOLDEN_DIR);
  std::ofstream(golden_path(t.id), std::ios::binary) << t.structure();
}

}  // namespace fixture
