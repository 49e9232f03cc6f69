#include <fmt/format.h>

#include "essaylens/econo.hpp"
#include "essaylens/error.hpp"

namespace essaylens::econo {

AnalysisData AnalysisData::post_era() const {
  return filter([&](const corpus::EssayRecord& r) { return era.is_post(r.cycle_year); });
}

AnalysisData AnalysisData::pre_era() const {
  return filter([&](const corpus::EssayRecord& r) { return era.pre_years.count(r.cycle_year) > 0; });
}

std::set<int> AnalysisData::years() const {
  std::set<int> y;
  for (const auto& r : records) y.insert(r.cycle_year);
  return y;
}

stats::Frame to_frame(const AnalysisData& data) {
  const auto n = data.records.size();
  if (!data.alpha_hat.empty() && data.alpha_hat.size() != n)
    throw InputError(fmt::format("alpha estimates ({}) do not match records ({})", data.alpha_hat.size(), n));
  if (!data.features.empty() && data.features.size() != n)
    throw InputError(fmt::format("feature rows ({}) do not match records ({})", data.features.size(), n));

  stats::Frame::Numeric admit(n), ses(n), post(n), alpha(n), gpa(n), sat_rw(n), sat_math(n), act_c(n), act_m(n), honors(n);
  stats::Frame::Factor year(n), sex(n), first_gen(n), school(n);
  std::vector<stats::Frame::Numeric> feats(stylometry::FeatureVector::kSize, stats::Frame::Numeric(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = data.records[i];
    const auto& c = r.covariates;
    admit[i] = corpus::binary_outcome(r) ? 1.0 : 0.0;
    ses[i] = r.fee_waiver ? 1.0 : 0.0;
    if (data.era.is_post(r.cycle_year))
      post[i] = 1.0;
    else if (data.era.pre_years.count(r.cycle_year))
      post[i] = 0.0;
    year[i] = std::to_string(r.cycle_year);
    if (!data.alpha_hat.empty()) alpha[i] = data.alpha_hat[i];
    sex[i] = std::string(corpus::to_string(c.sex));
    first_gen[i] = std::string(corpus::to_string(c.first_gen));
    school[i] = std::string(corpus::to_string(c.school_type));
    gpa[i] = c.gpa_scaled;
    sat_rw[i] = c.sat_rw;
    sat_math[i] = c.sat_math;
    act_c[i] = c.act_composite;
    act_m[i] = c.act_math;
    honors[i] = c.honors ? 1.0 : 0.0;
    if (!data.features.empty() && data.features[i]) {
      const auto v = data.features[i]->values();
      for (std::size_t k = 0; k < v.size(); ++k) feats[k][i] = v[k];
    }
  }
  stats::Frame f;
  f.add_numeric(kAdmit, std::move(admit));
  f.add_numeric(kSes, std::move(ses));
  f.add_numeric(kPost, std::move(post));
  f.add_factor("year", std::move(year));
  f.add_numeric(kAlpha, std::move(alpha));
  f.add_factor("sex", std::move(sex));
  f.add_factor("first_gen", std::move(first_gen));
  f.add_factor("school_type", std::move(school));
  f.add_numeric("gpa", std::move(gpa));
  f.add_numeric("sat_rw", std::move(sat_rw));
  f.add_numeric("sat_math", std::move(sat_math));
  f.add_numeric("act_composite", std::move(act_c));
  f.add_numeric("act_math", std::move(act_m));
  f.add_numeric("honors", std::move(honors));
  const auto& keys = stylometry::feature_keys();
  for (std::size_t k = 0; k < keys.size(); ++k) f.add_numeric(std::string(keys[k]), std::move(feats[k]));
  return f;
}

stats::ModelSpec with_references(stats::ModelSpec spec) {
  spec.reference("sex", "Female").reference("first_gen", "FirstGen").reference("school_type", "Home");
  return spec;
}

std::vector<std::string> covariates_none() { return {}; }

std::vector<std::string> covariates_first4() { return {"sex", "first_gen", "gpa", "sat_rw"}; }

std::vector<std::string> covariates_did() {
  return {"sex", "first_gen", "gpa", "sat_rw", "sat_math", "act_composite", "act_math", "honors"};
}

std::vector<std::string> covariates_full() {
  return {"sex", "first_gen", "school_type", "gpa", "sat_rw", "sat_math", "act_composite", "act_math", "honors"};
}

std::vector<std::string> covariate_set(const std::string& name) {
  if (name == "none") return covariates_none();
  if (name == "first4") return covariates_first4();
  if (name == "did") return covariates_did();
  if (name == "full") return covariates_full();
  throw InputError(fmt::format("unknown covariate set '{}' (expected none, first4, did or full)", name));
}

std::string format_years(const std::set<int>& years) {
  std::string out;
  auto it = years.begin();
  while (it != years.end()) {
    const int start = *it;
    int end = start;
    auto next = std::next(it);
    while (next != years.end() && *next == end + 1) {
      end = *next;
      ++next;
    }
    if (!out.empty()) out += ", ";
    out += start == end ? std::to_string(start) : fmt::format("{}-{}", start, end);
    it = next;
  }
  return out;
}

}  // namespace essaylens::econo
