#pragma once

#include <json.hpp>

#include "essaylens/econo.hpp"
#include "essaylens/table.hpp"

// Paper-layout tables and machine-readable JSON for every analysis result.
namespace essaylens::econo {

std::string fmt_coef(double coef, double p);  ///< "-0.170*"
std::string fmt_p(double p);                  ///< "<0.001" or "0.025"
std::string fmt_or(const stats::CoefRow& r);  ///< "0.844 [0.727, 0.979]"
std::string fmt_ci(double lo, double hi);     ///< "[-0.318, -0.021]"

TextTable table_descriptives(const DescriptivesResult& r);  ///< Table 1
TextTable table_usage(const DescriptivesResult& r);         ///< usage shares and tests
TextTable table_did(const DiDResult& r);                    ///< Table 2
TextTable table_interaction(const InteractionResult& r);    ///< Table 3
TextTable table_mediation(const MediationReport& r);        ///< Table 4
TextTable table_event_study(const EventStudyResult& r);     ///< Table C1
TextTable table_placebo(const std::vector<PlaceboRow>& rows);
TextTable table_covid(const std::vector<CovidRow>& rows);
TextTable table_rolling(const std::vector<RollingRow>& rows);
TextTable table_donut(const std::vector<DonutRow>& rows);
TextTable table_covstab(const CovstabResult& r);
TextTable table_stratified(const StratifiedResult& r);      ///< Table D1

nlohmann::ordered_json to_json(const stats::CoefRow& r);
nlohmann::ordered_json to_json(const stats::ModelFit& f);
nlohmann::ordered_json to_json(const stats::TestResult& t);
nlohmann::ordered_json to_json(const DescriptivesResult& r);
nlohmann::ordered_json to_json(const DiDResult& r);
nlohmann::ordered_json to_json(const InteractionResult& r);
nlohmann::ordered_json to_json(const MediationReport& r);
nlohmann::ordered_json to_json(const EventStudyResult& r);
nlohmann::ordered_json to_json(const std::vector<PlaceboRow>& rows);
nlohmann::ordered_json to_json(const std::vector<CovidRow>& rows);
nlohmann::ordered_json to_json(const std::vector<RollingRow>& rows);
nlohmann::ordered_json to_json(const std::vector<DonutRow>& rows);
nlohmann::ordered_json to_json(const CovstabResult& r);
nlohmann::ordered_json to_json(const StratifiedResult& r);

}  // namespace essaylens::econo
