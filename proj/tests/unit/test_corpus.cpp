#include <doctest.h>

#include <cmath>
#include <sstream>

#include "essaylens/corpus.hpp"
#include "essaylens/error.hpp"
#include "support.hpp"

using namespace essaylens;
using namespace essaylens::corpus;

namespace {

const char* kHeader =
    "id,cycle_year,essay_text,fee_waiver,decision,sex,first_gen,school_type,gpa_scaled,sat_rw,sat_math,act_composite,"
    "act_math,honors\n";

std::string row(const std::string& id, int year, const std::string& text, const std::string& decision = "Admitted",
                const std::string& sat = "1200") {
  return id + "," + std::to_string(year) + ",\"" + text + "\",1," + decision + ",Female,FirstGen,Public,3.5," + sat +
         ",700,,,0\n";
}

IngestResult ingest_text(const std::string& csv, IngestOptions opts = {}) {
  std::istringstream in(csv);
  return ingest_csv(in, {}, opts);
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("one 300-word essay row is accepted") {
    const auto r = ingest_text(std::string(kHeader) + row("a1", 2021, testsupport::filler(300)));
    CHECK(r.records.size() == 1);
    CHECK(r.report.rejects.empty());
    CHECK(r.records[0].covariates.sat_rw == 1200.0);
    CHECK_FALSE(r.records[0].covariates.act_composite.has_value());
  }

  TEST_CASE("a 100-word essay is rejected with the length reason") {
    const auto r = ingest_text(std::string(kHeader) + row("a1", 2021, testsupport::filler(100)));
    CHECK(r.records.empty());
    REQUIRE(r.report.rejects.size() == 1);
    CHECK(r.report.rejects[0].reason == kReasonShort);
    CHECK(r.report.reject_counts.at(std::string(kReasonShort)) == 1);
  }

  TEST_CASE("bad enum and missing id are reported, not thrown") {
    const auto r = ingest_text(std::string(kHeader) + row("a1", 2021, testsupport::filler(300), "Maybe") +
                               row("", 2021, testsupport::filler(300)) + row("a3", 2021, testsupport::filler(300)));
    CHECK(r.records.size() == 1);
    CHECK(r.report.rejects.size() == 2);
    CHECK(r.report.rows_read == 3);
  }

  TEST_CASE("duplicate ids and absent columns throw") {
    CHECK_THROWS_AS(ingest_text(std::string(kHeader) + row("a1", 2021, testsupport::filler(300)) +
                                row("a1", 2022, testsupport::filler(300))),
                    InputError);
    CHECK_THROWS_AS(ingest_text("id,cycle_year\nx,2020\n"), InputError);
    CHECK_THROWS_AS(ingest("/nonexistent/file.csv"), InputError);
  }

  TEST_CASE("cycle year outside the configured range is rejected") {
    IngestOptions o;
    o.min_year = 2020;
    o.max_year = 2024;
    const auto r = ingest_text(std::string(kHeader) + row("a1", 2019, testsupport::filler(300)), o);
    CHECK(r.records.empty());
    CHECK(r.report.rejects.size() == 1);
  }

  TEST_CASE("binary outcome mapping") {
    CHECK(binary_outcome(Decision::Admitted));
    CHECK(binary_outcome(Decision::ConditionalAdmit));
    CHECK(binary_outcome(Decision::Waitlisted));
    CHECK_FALSE(binary_outcome(Decision::Rejected));
    const auto r = ingest_text(std::string(kHeader) + row("w", 2021, testsupport::filler(300), "Waitlisted"));
    REQUIRE(r.records.size() == 1);
    CHECK(binary_outcome(r.records[0]));
  }

  TEST_CASE("partition into eras") {
    const auto era = EraPartition::paper_default();
    std::vector<EssayRecord> recs(3);
    recs[0].cycle_year = 2024;
    recs[1].cycle_year = 2019;
    recs[2].cycle_year = 2021;
    const auto p = partition(recs, era);
    CHECK(p.post.size() == 1);
    CHECK(p.outside.size() == 1);
    CHECK(p.pre.size() == 1);
    const auto e = partition({}, era);
    CHECK(e.pre.empty());
    CHECK(e.post.empty());
    CHECK_THROWS_AS((EraPartition{{2020, 2021}, {2021}, ""}.validate()), InputError);
    CHECK_THROWS_AS((EraPartition{{}, {2024}, ""}.validate()), InputError);
  }

  TEST_CASE("standardize") {
    std::vector<EssayRecord> recs(3);
    for (int i = 0; i < 3; ++i) recs[i].covariates.sat_rw = double(i + 1);
    const auto s = standardize(recs, {"sat_rw"});
    REQUIRE(s.size() == 1);
    CHECK(s[0].mean == doctest::Approx(2.0));
    CHECK(s[0].sd == doctest::Approx(1.0));
    CHECK(*recs[0].covariates.sat_rw == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(*recs[1].covariates.sat_rw == doctest::Approx(0.0));
    CHECK(*recs[2].covariates.sat_rw == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<EssayRecord> constant(3);
    for (auto& r : constant) r.covariates.sat_rw = 5.0;
    CHECK_THROWS_AS(standardize(constant, {"sat_rw"}), InputError);
    std::vector<EssayRecord> one(1);
    one[0].covariates.sat_rw = 5.0;
    CHECK_THROWS_AS(standardize(one, {"sat_rw"}), InputError);
  }

  TEST_CASE("standardize: moments, missing kept, ranks preserved") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(500, 80);
    std::vector<EssayRecord> recs(200);
    for (std::size_t i = 0; i < recs.size(); ++i)
      if (i % 7 != 0) recs[i].covariates.sat_math = nd(rng);
    const auto before = recs;
    standardize(recs, {"sat_math"});
    double sum = 0, ss = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(recs[i].covariates.sat_math.has_value() == before[i].covariates.sat_math.has_value());
      if (!recs[i].covariates.sat_math) continue;
      sum += *recs[i].covariates.sat_math;
      ++n;
    }
    const double m = sum / double(n);
    for (const auto& r : recs)
      if (r.covariates.sat_math) ss += (*r.covariates.sat_math - m) * (*r.covariates.sat_math - m);
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(ss / double(n - 1)) - 1) < 1e-9);
    for (std::size_t i = 0; i < recs.size(); ++i)
      for (std::size_t j = 0; j < recs.size(); ++j)
        if (before[i].covariates.sat_math && before[j].covariates.sat_math)
          CHECK((*before[i].covariates.sat_math < *before[j].covariates.sat_math) ==
                (*recs[i].covariates.sat_math < *recs[j].covariates.sat_math));
  }

  TEST_CASE("JSONL round trip is exact") {
    EssayRecord r;
    r.id = "x\"1";
    r.cycle_year = 2022;
    r.essay_text = "Line one,\n\"quoted\" caf\xc3\xa9 \xe2\x80\x94 end. " + testsupport::filler(260);
    r.fee_waiver = true;
    r.decision = Decision::ConditionalAdmit;
    r.covariates.sex = Sex::Other;
    r.covariates.first_gen = FirstGen::MultiGen;
    r.covariates.school_type = SchoolType::Home;
    r.covariates.gpa_scaled = 0.1 + 0.2;
    r.covariates.sat_rw = 1.0 / 3.0;
    r.covariates.act_math = -2.5e-7;
    r.covariates.honors = true;
    const auto dir = testsupport::scratch("corpus-roundtrip");
    const auto path = (dir / "c.jsonl").string();
    write_jsonl(path, {r});
    const auto back = read_jsonl(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == r);
    const auto again = ingest(path);
    REQUIRE(again.records.size() == 1);
    CHECK(again.records[0] == r);
  }

  TEST_CASE("word filter is idempotent") {
    std::vector<EssayRecord> recs(4);
    for (std::size_t i = 0; i < recs.size(); ++i) recs[i].essay_text = testsupport::filler(150 + 50 * i);
    const auto once = filter_min_words(recs);
    const auto twice = filter_min_words(once);
    CHECK(once.size() == 2);
    CHECK(once == twice);
  }

  TEST_CASE("csv escaping round trips through the parser") {
    const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_escape(fields[i]);
    std::istringstream in(line + "\n");
    const auto rows = parse_csv(in);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == fields);
  }
}
