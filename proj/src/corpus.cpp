#include "essaylens/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_set>

#include "essaylens/error.hpp"
#include "essaylens/textproc.hpp"

namespace essaylens::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string strip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string norm_key(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// A raw row is a map from column name to its textual value; nullopt means the
// cell was null/empty.
using RawRow = std::map<std::string, std::optional<std::string>>;

struct RowError {
  std::string reason;
};

const std::optional<std::string>& cell(const RawRow& row, const std::string& column) {
  static const std::optional<std::string> kNone;
  const auto it = row.find(column);
  return it == row.end() ? kNone : it->second;
}

bool is_missing_token(const std::string& s) {
  const std::string l = lower(strip(s));
  return l.empty() || l == "na" || l == "n/a" || l == "nan" || l == "null" || l == "none";
}

std::optional<double> parse_optional_number(const std::optional<std::string>& v, const std::string& field) {
  if (!v || is_missing_token(*v)) return std::nullopt;
  const std::string s = strip(*v);
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw RowError{"bad value: " + field};
  }
  if (used != s.size() || !std::isfinite(x)) throw RowError{"bad value: " + field};
  return x;
}

bool parse_bool(const std::optional<std::string>& v, const std::string& field) {
  if (!v) throw RowError{"missing value: " + field};
  const std::string l = lower(strip(*v));
  if (l == "1" || l == "true" || l == "yes" || l == "y" || l == "t") return true;
  if (l == "0" || l == "false" || l == "no" || l == "n" || l == "f") return false;
  throw RowError{"bad value: " + field};
}

template <typename E>
E parse_enum(const std::optional<std::string>& v, const std::string& field, std::optional<E> (*parser)(std::string_view)) {
  if (!v || is_missing_token(*v)) throw RowError{"bad enum: " + field};
  const auto e = parser(strip(*v));
  if (!e) throw RowError{"bad enum: " + field};
  return *e;
}

EssayRecord build_record(const RawRow& row, const Schema& schema, const IngestOptions& opts) {
  auto col = [&](const char* field) -> const std::optional<std::string>& { return cell(row, schema.column_for(field)); };
  EssayRecord r;
  const auto& id = col("id");
  if (!id || strip(*id).empty()) throw RowError{"missing id"};
  r.id = strip(*id);

  const auto year = parse_optional_number(col("cycle_year"), "cycle_year");
  if (!year || std::floor(*year) != *year) throw RowError{"bad value: cycle_year"};
  r.cycle_year = static_cast<int>(*year);
  if (r.cycle_year < opts.min_year || r.cycle_year > opts.max_year) throw RowError{"cycle_year out of range"};

  const auto& text = col("essay_text");
  r.essay_text = text.value_or("");
  if (textproc::word_count(r.essay_text) < opts.min_words)
    throw RowError{"below " + std::to_string(opts.min_words) + " words"};

  r.fee_waiver = parse_bool(col("fee_waiver"), "fee_waiver");
  r.decision = parse_enum<Decision>(col("decision"), "decision", &parse_decision);

  auto& cv = r.covariates;
  cv.sex = parse_enum<Sex>(col("sex"), "sex", &parse_sex);
  cv.first_gen = parse_enum<FirstGen>(col("first_gen"), "first_gen", &parse_first_gen);
  cv.school_type = parse_enum<SchoolType>(col("school_type"), "school_type", &parse_school_type);
  const auto gpa = parse_optional_number(col("gpa_scaled"), "gpa_scaled");
  if (!gpa) throw RowError{"missing value: gpa_scaled"};
  cv.gpa_scaled = *gpa;
  cv.sat_rw = parse_optional_number(col("sat_rw"), "sat_rw");
  cv.sat_math = parse_optional_number(col("sat_math"), "sat_math");
  cv.act_composite = parse_optional_number(col("act_composite"), "act_composite");
  cv.act_math = parse_optional_number(col("act_math"), "act_math");
  cv.honors = parse_bool(col("honors"), "honors");
  const auto& stdz = col("standardized");
  cv.standardized = stdz && !is_missing_token(*stdz) ? parse_bool(stdz, "standardized") : false;
  return r;
}

void require_columns(const std::vector<std::string>& present, const Schema& schema) {
  std::unordered_set<std::string> have(present.begin(), present.end());
  for (const auto& field : Schema::required_fields()) {
    const auto column = schema.column_for(field);
    if (!have.count(column)) throw InputError("schema column absent: " + column + " (field " + field + ")");
  }
}

class Collector {
 public:
  Collector(const Schema& schema, const IngestOptions& opts) : schema_(schema), opts_(opts) {}

  void add(const RawRow& row) {
    ++result_.report.rows_read;
    try {
      EssayRecord r = build_record(row, schema_, opts_);
      if (!seen_.insert(r.id).second) throw InputError("duplicate id: " + r.id);
      result_.records.push_back(std::move(r));
      ++result_.report.accepted;
    } catch (const RowError& e) {
      const auto& id = cell(row, schema_.column_for("id"));
      result_.report.rejects.push_back({result_.report.rows_read, id ? strip(*id) : std::string{}, e.reason});
      ++result_.report.reject_counts[e.reason];
    }
  }

  IngestResult take() { return std::move(result_); }

 private:
  const Schema& schema_;
  const IngestOptions& opts_;
  IngestResult result_;
  std::unordered_set<std::string> seen_;
};

std::optional<double> json_optional_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Admitted: return "Admitted";
    case Decision::ConditionalAdmit: return "ConditionalAdmit";
    case Decision::Waitlisted: return "Waitlisted";
    case Decision::Rejected: return "Rejected";
  }
  return "Rejected";
}

std::string_view to_string(Sex s) {
  switch (s) {
    case Sex::Female: return "Female";
    case Sex::Male: return "Male";
    case Sex::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(FirstGen f) { return f == FirstGen::FirstGen ? "FirstGen" : "MultiGen"; }

std::string_view to_string(SchoolType s) {
  switch (s) {
    case SchoolType::Home: return "Home";
    case SchoolType::Private: return "Private";
    case SchoolType::Public: return "Public";
    case SchoolType::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(SourceLabel s) { return s == SourceLabel::Human ? "Human" : "LLM"; }

std::optional<Decision> parse_decision(std::string_view s) {
  const auto k = norm_key(s);
  if (k == "admitted" || k == "admit") return Decision::Admitted;
  if (k == "conditionaladmit" || k == "conditionallyadmitted" || k == "conditionaladmission") return Decision::ConditionalAdmit;
  if (k == "waitlisted" || k == "waitlist") return Decision::Waitlisted;
  if (k == "rejected" || k == "reject" || k == "denied") return Decision::Rejected;
  return std::nullopt;
}

std::optional<Sex> parse_sex(std::string_view s) {
  const auto k = norm_key(s);
  if (k == "female" || k == "f") return Sex::Female;
  if (k == "male" || k == "m") return Sex::Male;
  if (k == "other") return Sex::Other;
  return std::nullopt;
}

std::optional<FirstGen> parse_first_gen(std::string_view s) {
  const auto k = norm_key(s);
  if (k == "firstgen" || k == "firstgeneration" || k == "1" || k == "true" || k == "yes") return FirstGen::FirstGen;
  if (k == "multigen" || k == "multigeneration" || k == "0" || k == "false" || k == "no") return FirstGen::MultiGen;
  return std::nullopt;
}

std::optional<SchoolType> parse_school_type(std::string_view s) {
  const auto k = norm_key(s);
  if (k == "home" || k == "homeschool") return SchoolType::Home;
  if (k == "private") return SchoolType::Private;
  if (k == "public") return SchoolType::Public;
  if (k == "unknown") return SchoolType::Unknown;
  return std::nullopt;
}

std::optional<SourceLabel> parse_source_label(std::string_view s) {
  const auto k = norm_key(s);
  if (k == "human") return SourceLabel::Human;
  if (k == "llm") return SourceLabel::LLM;
  return std::nullopt;
}

const std::vector<std::string>& Schema::field_names() {
  static const std::vector<std::string> names = {
      "id",     "cycle_year", "essay_text", "fee_waiver",    "decision", "sex",     "first_gen", "school_type",
      "gpa_scaled", "sat_rw", "sat_math",   "act_composite", "act_math", "honors", "standardized"};
  return names;
}

const std::vector<std::string>& Schema::required_fields() {
  static const std::vector<std::string> names = {"id",        "cycle_year",  "essay_text", "fee_waiver", "decision",
                                                 "sex",       "first_gen",   "school_type", "gpa_scaled", "honors"};
  return names;
}

std::string Schema::column_for(const std::string& field) const {
  const auto it = columns.find(field);
  return it == columns.end() ? field : it->second;
}

Schema Schema::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read schema file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("schema file is not valid JSON: " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("schema must be a JSON object mapping field -> column");
  Schema s;
  const auto& known = field_names();
  for (const auto& [field, col] : j.items()) {
    if (std::find(known.begin(), known.end(), field) == known.end()) throw InputError("unknown schema field: " + field);
    s.columns[field] = col.get<std::string>();
  }
  return s;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  char c = 0;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw InputError("CSV ends inside a quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

IngestResult ingest_csv(std::istream& in, const Schema& schema, const IngestOptions& opts) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw InputError("CSV input has no header row");
  const auto& header = rows.front();
  require_columns(header, schema);
  Collector collector(schema, opts);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    RawRow raw;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c < rows[r].size()) raw[header[c]] = rows[r][c];
      else raw[header[c]] = std::nullopt;
    }
    collector.add(raw);
  }
  return collector.take();
}

IngestResult ingest_jsonl(std::istream& in, const Schema& schema, const IngestOptions& opts) {
  Collector collector(schema, opts);
  std::string line;
  std::size_t line_no = 0;
  bool checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError("JSONL line " + std::to_string(line_no) + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError("JSONL line " + std::to_string(line_no) + " is not an object");
    if (!checked) {
      std::vector<std::string> keys;
      for (const auto& [k, _] : j.items()) keys.push_back(k);
      require_columns(keys, schema);
      checked = true;
    }
    RawRow raw;
    for (const auto& [k, v] : j.items()) {
      if (v.is_null()) raw[k] = std::nullopt;
      else if (v.is_string()) raw[k] = v.get<std::string>();
      else if (v.is_boolean()) raw[k] = v.get<bool>() ? "true" : "false";
      else if (v.is_number_integer()) raw[k] = std::to_string(v.get<long long>());
      else if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        raw[k] = os.str();
      } else raw[k] = v.dump();
    }
    collector.add(raw);
  }
  return collector.take();
}

IngestResult ingest(const std::string& path, const Schema& schema, const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read input file: " + path);
  const std::string l = lower(path);
  if (ends_with(l, ".csv")) return ingest_csv(in, schema, opts);
  if (ends_with(l, ".jsonl") || ends_with(l, ".json")) return ingest_jsonl(in, schema, opts);
  throw InputError("unsupported input format (expected .csv or .jsonl): " + path);
}

std::string to_jsonl_line(const EssayRecord& r) {
  ordered_json j;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  j["id"] = r.id;
  j["cycle_year"] = r.cycle_year;
  j["essay_text"] = r.essay_text;
  j["fee_waiver"] = r.fee_waiver;
  j["decision"] = to_string(r.decision);
  j["sex"] = to_string(r.covariates.sex);
  j["first_gen"] = to_string(r.covariates.first_gen);
  j["school_type"] = to_string(r.covariates.school_type);
  j["gpa_scaled"] = r.covariates.gpa_scaled;
  j["sat_rw"] = opt(r.covariates.sat_rw);
  j["sat_math"] = opt(r.covariates.sat_math);
  j["act_composite"] = opt(r.covariates.act_composite);
  j["act_math"] = opt(r.covariates.act_math);
  j["honors"] = r.covariates.honors;
  j["standardized"] = r.covariates.standardized;
  return j.dump();
}

void write_jsonl(std::ostream& out, const std::vector<EssayRecord>& records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

void write_jsonl(const std::string& path, const std::vector<EssayRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  write_jsonl(out, records);
}

std::vector<EssayRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file: " + path);
  std::vector<EssayRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    try {
      const json j = json::parse(line);
      EssayRecord r;
      r.id = j.at("id").get<std::string>();
      r.cycle_year = j.at("cycle_year").get<int>();
      r.essay_text = j.at("essay_text").get<std::string>();
      r.fee_waiver = j.at("fee_waiver").get<bool>();
      auto need = [&](auto parsed, const char* key) {
        if (!parsed) throw InputError(std::string("bad enum in ") + key);
        return *parsed;
      };
      r.decision = need(parse_decision(j.at("decision").get<std::string>()), "decision");
      r.covariates.sex = need(parse_sex(j.at("sex").get<std::string>()), "sex");
      r.covariates.first_gen = need(parse_first_gen(j.at("first_gen").get<std::string>()), "first_gen");
      r.covariates.school_type = need(parse_school_type(j.at("school_type").get<std::string>()), "school_type");
      r.covariates.gpa_scaled = j.at("gpa_scaled").get<double>();
      r.covariates.sat_rw = json_optional_number(j, "sat_rw");
      r.covariates.sat_math = json_optional_number(j, "sat_math");
      r.covariates.act_composite = json_optional_number(j, "act_composite");
      r.covariates.act_math = json_optional_number(j, "act_math");
      r.covariates.honors = j.at("honors").get<bool>();
      r.covariates.standardized = j.value("standardized", false);
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_reference_jsonl(const std::string& path, const std::vector<ReferenceEssay>& essays) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  for (const auto& e : essays) {
    ordered_json j;
    j["id"] = e.id;
    j["essay_text"] = e.essay_text;
    j["source_label"] = to_string(e.source_label);
    j["question"] = e.question;
    out << j.dump() << '\n';
  }
}

std::vector<ReferenceEssay> read_reference_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file: " + path);
  std::vector<ReferenceEssay> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    try {
      const json j = json::parse(line);
      ReferenceEssay e;
      e.id = j.at("id").get<std::string>();
      e.essay_text = j.at("essay_text").get<std::string>();
      if (const auto it = j.find("source_label"); it != j.end() && it->is_string()) {
        const auto lbl = parse_source_label(it->get<std::string>());
        if (!lbl) throw InputError(path + ":" + std::to_string(line_no) + ": bad source_label");
        e.source_label = *lbl;
      }
      if (const auto it = j.find("question"); it != j.end() && it->is_string()) e.question = it->get<std::string>();
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw InputError(path + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

EraPartition EraPartition::paper_default() {
  return {{2020, 2021, 2022, 2023}, {2024}, "2023 cycle deadline fell one month after public chatbot release"};
}

void EraPartition::validate() const {
  if (pre_years.empty() || post_years.empty()) throw InputError("era partition: pre and post year sets must be nonempty");
  for (int y : pre_years) {
    if (post_years.count(y)) throw InputError("era partition: year " + std::to_string(y) + " is in both eras");
  }
}

Partitioned partition(const std::vector<EssayRecord>& records, const EraPartition& era) {
  era.validate();
  Partitioned out;
  for (const auto& r : records) {
    if (era.pre_years.count(r.cycle_year)) out.pre.push_back(r);
    else if (era.post_years.count(r.cycle_year)) out.post.push_back(r);
    else out.outside.push_back(r);
  }
  return out;
}

const std::vector<std::string>& continuous_fields() {
  static const std::vector<std::string> f = {"gpa_scaled", "sat_rw", "sat_math", "act_composite", "act_math"};
  return f;
}

namespace {

std::optional<double>* field_ptr(CovariateVector& cv, const std::string& field, double*& plain) {
  plain = nullptr;
  if (field == "gpa_scaled") {
    plain = &cv.gpa_scaled;
    return nullptr;
  }
  if (field == "sat_rw") return &cv.sat_rw;
  if (field == "sat_math") return &cv.sat_math;
  if (field == "act_composite") return &cv.act_composite;
  if (field == "act_math") return &cv.act_math;
  throw InputError("not a continuous covariate: " + field);
}

}  // namespace

std::vector<FieldScaling> standardize(std::vector<EssayRecord>& records, const std::vector<std::string>& fields) {
  std::vector<FieldScaling> out;
  for (const auto& field : fields) {
    std::vector<double> values;
    for (auto& r : records) {
      double* plain = nullptr;
      auto* opt = field_ptr(r.covariates, field, plain);
      if (plain) values.push_back(*plain);
      else if (opt->has_value()) values.push_back(**opt);
    }
    if (values.size() < 2) throw InputError("standardize: field " + field + " has fewer than 2 non-missing values");
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    if (!(sd > 0)) throw InputError("standardize: field " + field + " has zero variance");
    for (auto& r : records) {
      double* plain = nullptr;
      auto* opt = field_ptr(r.covariates, field, plain);
      if (plain) *plain = (*plain - mean) / sd;
      else if (opt->has_value()) **opt = (**opt - mean) / sd;
    }
    out.push_back({field, mean, sd});
  }
  if (!fields.empty()) {
    for (auto& r : records) r.covariates.standardized = true;
  }
  return out;
}

std::vector<EssayRecord> filter_min_words(const std::vector<EssayRecord>& records, std::size_t min_words) {
  std::vector<EssayRecord> out;
  for (const auto& r : records) {
    if (textproc::word_count(r.essay_text) >= min_words) out.push_back(r);
  }
  return out;
}

}  // namespace essaylens::corpus
