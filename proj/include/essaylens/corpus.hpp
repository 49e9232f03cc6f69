#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace essaylens::corpus {

enum class Decision { Admitted, ConditionalAdmit, Waitlisted, Rejected };
enum class Sex { Female, Male, Other };
enum class FirstGen { FirstGen, MultiGen };
enum class SchoolType { Home, Private, Public, Unknown };
enum class SourceLabel { Human, LLM };

std::string_view to_string(Decision d);
std::string_view to_string(Sex s);
std::string_view to_string(FirstGen f);
std::string_view to_string(SchoolType s);
std::string_view to_string(SourceLabel s);

/// Parsers accept the canonical names case-insensitively plus a few common
/// spellings; they return nullopt on anything else.
std::optional<Decision> parse_decision(std::string_view s);
std::optional<Sex> parse_sex(std::string_view s);
std::optional<FirstGen> parse_first_gen(std::string_view s);
std::optional<SchoolType> parse_school_type(std::string_view s);
std::optional<SourceLabel> parse_source_label(std::string_view s);

struct CovariateVector {
  Sex sex = Sex::Female;
  FirstGen first_gen = FirstGen::FirstGen;
  SchoolType school_type = SchoolType::Public;
  double gpa_scaled = 0;
  std::optional<double> sat_rw;
  std::optional<double> sat_math;
  std::optional<double> act_composite;
  std::optional<double> act_math;
  bool honors = false;
  bool standardized = false;  ///< continuous fields are z-scores

  bool operator==(const CovariateVector&) const = default;
};

struct EssayRecord {
  std::string id;
  int cycle_year = 0;
  std::string essay_text;
  bool fee_waiver = false;
  Decision decision = Decision::Rejected;
  CovariateVector covariates;

  bool operator==(const EssayRecord&) const = default;
};

/// Admitted, conditionally admitted and waitlisted are positive outcomes.
constexpr bool binary_outcome(Decision d) { return d != Decision::Rejected; }
inline bool binary_outcome(const EssayRecord& r) { return binary_outcome(r.decision); }

/// Maps record fields to input column names. Unmapped fields use the field
/// name itself as the column name.
struct Schema {
  std::map<std::string, std::string> columns;

  static const std::vector<std::string>& field_names();
  static const std::vector<std::string>& required_fields();
  std::string column_for(const std::string& field) const;
  static Schema from_json_file(const std::string& path);
};

struct IngestOptions {
  std::size_t min_words = 250;
  int min_year = 2000;
  int max_year = 2100;
};

struct Reject {
  std::size_t row = 0;  ///< 1-based data row
  std::string id;
  std::string reason;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t accepted = 0;
  std::vector<Reject> rejects;
  std::map<std::string, std::size_t> reject_counts;
};

struct IngestResult {
  std::vector<EssayRecord> records;
  IngestReport report;
};

inline constexpr std::string_view kReasonShort = "below 250 words";

/// Reads CSV (header row, RFC 4180 quoting) or JSONL, decided by extension
/// (.csv / .jsonl / .json). Rows that fail validation land in the report;
/// unreadable files, absent schema columns and duplicate ids throw.
IngestResult ingest(const std::string& path, const Schema& schema = {}, const IngestOptions& opts = {});
IngestResult ingest_csv(std::istream& in, const Schema& schema = {}, const IngestOptions& opts = {});
IngestResult ingest_jsonl(std::istream& in, const Schema& schema = {}, const IngestOptions& opts = {});

/// Canonical JSONL: one record per line, fixed key order.
std::string to_jsonl_line(const EssayRecord& r);
void write_jsonl(std::ostream& out, const std::vector<EssayRecord>& records);
void write_jsonl(const std::string& path, const std::vector<EssayRecord>& records);
std::vector<EssayRecord> read_jsonl(const std::string& path);

/// Essays without applicant data (reference corpora). Stored with the same
/// key names as applicant records, limited to id, essay_text, source_label.
struct ReferenceEssay {
  std::string id;
  std::string essay_text;
  SourceLabel source_label = SourceLabel::Human;
  std::string question;
};
void write_reference_jsonl(const std::string& path, const std::vector<ReferenceEssay>& essays);
/// Reads id + essay_text (+ source_label if present) from any corpus JSONL.
std::vector<ReferenceEssay> read_reference_jsonl(const std::string& path);

/// Parses RFC 4180 CSV into rows of fields.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
/// Quotes a field when needed.
std::string csv_escape(std::string_view field);

struct EraPartition {
  std::set<int> pre_years;
  std::set<int> post_years;
  std::string cutoff_rationale;

  /// 2020-2023 pre, 2024 post.
  static EraPartition paper_default();
  /// Throws InputError if a set is empty or the sets overlap.
  void validate() const;
  bool is_post(int year) const { return post_years.count(year) > 0; }
  bool contains(int year) const { return pre_years.count(year) > 0 || post_years.count(year) > 0; }
};

struct Partitioned {
  std::vector<EssayRecord> pre;
  std::vector<EssayRecord> post;
  std::vector<EssayRecord> outside;
};

Partitioned partition(const std::vector<EssayRecord>& records, const EraPartition& era);

struct FieldScaling {
  std::string field;
  double mean = 0;
  double sd = 0;  ///< n-1 denominator
};

/// Continuous covariates that can be standardized.
const std::vector<std::string>& continuous_fields();

/// Z-scores the named continuous covariates in place over non-missing values.
std::vector<FieldScaling> standardize(std::vector<EssayRecord>& records, const std::vector<std::string>& fields);

/// Drops records below the word threshold. Idempotent.
std::vector<EssayRecord> filter_min_words(const std::vector<EssayRecord>& records, std::size_t min_words = 250);

}  // namespace essaylens::corpus
