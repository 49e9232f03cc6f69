#pragma once

#include <string>

#include "config.hpp"

namespace essaylens::cli {

void cmd_ingest(const RunConfig& c);
void cmd_features(const RunConfig& c);
void cmd_gen_refs(const RunConfig& c);
void cmd_fit_refs(const RunConfig& c);
void cmd_score(const RunConfig& c);
void cmd_calibrate(const RunConfig& c);
void cmd_simulate(const RunConfig& c);
/// One of analysis_names(), or "all" for every enabled analysis.
void cmd_analyze(const RunConfig& c, const std::string& name);
void cmd_report(const RunConfig& c);

}  // namespace essaylens::cli
