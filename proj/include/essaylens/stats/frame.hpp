#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace essaylens::stats {

/// Column store with explicit missingness. Numeric and factor columns share
/// one row count; names are unique and keep insertion order.
class Frame {
 public:
  using Numeric = std::vector<std::optional<double>>;
  using Factor = std::vector<std::optional<std::string>>;

  Frame() = default;

  void add_numeric(std::string name, Numeric values);
  void add_numeric(std::string name, const std::vector<double>& values);
  void add_factor(std::string name, Factor values);

  std::size_t rows() const { return rows_; }
  bool has(std::string_view name) const;
  bool is_factor(std::string_view name) const;
  const Numeric& numeric(std::string_view name) const;
  const Factor& factor(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

  /// Rows in the given order (duplicates allowed).
  Frame take(const std::vector<std::size_t>& rows) const;

 private:
  using Column = std::variant<Numeric, Factor>;
  void add(std::string name, Column col, std::size_t n);
  const Column& column(std::string_view name) const;

  std::size_t rows_ = 0;
  std::vector<std::string> names_;
  std::vector<Column> columns_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// One model term: a main effect (one variable) or a product of variables.
struct Term {
  std::vector<std::string> vars;
  bool standalone = false;  ///< interaction allowed without its main effects

  std::string label() const;  ///< "a" or "a:b"
  bool operator==(const Term&) const = default;
};

struct ModelSpec {
  std::string outcome;
  std::vector<Term> terms;
  std::map<std::string, std::string> reference_levels;  ///< factor -> reference level
  bool intercept = true;

  ModelSpec& add(std::string var);
  ModelSpec& add_interaction(std::string a, std::string b, bool standalone = false);
  ModelSpec& reference(std::string factor, std::string level);

  /// Throws InputError on duplicate terms, empty terms or interactions
  /// whose variables are not declared main effects (unless standalone).
  void validate() const;
};

/// Numeric design after complete-case filtering and dummy coding.
struct Design {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> columns;   ///< "(Intercept)", "x", "f[level]", "a:b"
  std::vector<std::size_t> rows;      ///< frame rows kept, ascending
  std::size_t dropped = 0;            ///< rows lost to missing values
};

/// Factor columns are treatment coded: one dummy per observed non-reference
/// level, levels sorted. The reference is the declared level or else the
/// first sorted level.
Design build_design(const Frame& frame, const ModelSpec& spec);

/// Intercept column name.
inline constexpr std::string_view kIntercept = "(Intercept)";

/// Column name of a factor dummy.
std::string dummy_name(std::string_view factor, std::string_view level);

}  // namespace essaylens::stats
