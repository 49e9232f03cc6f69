#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "essaylens/stats/model.hpp"

namespace essaylens::stats {

/// "", "*", "**" or "***" for p < 0.05, 0.01, 0.001.
std::string_view stars(double p);

double mean(std::span<const double> x);
/// Sample SD with n-1 denominator.
double sd(std::span<const double> x);

/// Pooled-variance two-sample t test of mean(x) - mean(y), df = n1 + n2 - 2,
/// with Cohen's d on the pooled SD.
TestResult two_sample_t(std::span<const double> x, std::span<const double> y);

/// Pearson chi-square test of independence on a contingency table.
TestResult chi_square_independence(const Eigen::MatrixXd& table);

struct DescriptiveRow {
  std::string label;
  double mean1 = 0, sd1 = 0, mean2 = 0, sd2 = 0;
  double diff = 0;      ///< mean2 - mean1
  double pct_diff = 0;  ///< 100 * diff / mean1
  double t = 0, p_value = 1;
};

struct DescriptiveTable {
  std::string group1, group2;
  std::vector<DescriptiveRow> rows;
  std::size_t n1 = 0, n2 = 0;
};

/// Per-feature comparison of two groups: columns of g1/g2 are features,
/// rows are observations.
DescriptiveTable group_descriptives(const std::vector<std::string>& labels, const Eigen::MatrixXd& g1,
                                    const Eigen::MatrixXd& g2, std::string group1 = "Group 1",
                                    std::string group2 = "Group 2");

}  // namespace essaylens::stats
