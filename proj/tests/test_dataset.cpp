#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "citedyn/dataset.hpp"
#include "citedyn/types.hpp"
#include "doctest.h"

using namespace citedyn;
namespace fs = std::filesystem;

namespace {

/// Materialize `content` under a unique name in the temp directory.
std::string temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "citedyn-dataset-tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("events CSV loads and round-trips byte-identically") {
  const std::string content =
      "paper_id,pub_date,cite_date\n"
      "a,2000-01-01,2000-03-01\n"
      "a,2000-01-01,2001-01-01\n"
      "b,1999-06-15,1999-06-15\n";
  const auto path = temp_file("events.csv", content);

  const auto ds = load_dataset(path, DatasetFormat::events_csv);
  REQUIRE(ds.papers.size() == 2);
  CHECK(ds.papers[0].paper_id() == "a");
  CHECK(ds.papers[1].paper_id() == "b");
  CHECK_FALSE(ds.papers[0].is_yearly());
  // 2000 is a leap year: Jan 1 -> Mar 1 is 60 days; Jan 1 -> next Jan 1 is 366
  REQUIRE(ds.papers[0].events().size() == 2);
  CHECK(ds.papers[0].events()[0] == 60.0);
  CHECK(ds.papers[0].events()[1] == 366.0);
  CHECK(ds.papers[0].publication_date() == "2000-01-01");
  // a same-day citation is event time zero
  CHECK(ds.papers[1].events() == std::vector<double>{0.0});
  // events CSV derives the cohort year from the publication date
  REQUIRE(ds.meta[0].cohort_year.has_value());
  CHECK(*ds.meta[0].cohort_year == 2000);
  CHECK(ds.meta[0].journal.empty());

  const auto out = temp_file("events-out.csv", "");
  save_dataset(ds, out, DatasetFormat::events_csv);
  CHECK(slurp(out) == content);
}

TEST_CASE("yearly CSV loads, zero-fills gaps, and round-trips") {
  SUBCASE("explicit offsets round-trip byte-identically") {
    const std::string content =
        "paper_id,pub_year,year_offset,count\n"
        "p1,1995,1,3\n"
        "p1,1995,2,0\n"
        "p1,1995,3,2.5\n"
        "p2,2001,1,0\n"
        "p2,2001,2,4\n";
    const auto path = temp_file("yearly.csv", content);
    const auto ds = load_dataset(path, DatasetFormat::yearly_csv);
    REQUIRE(ds.papers.size() == 2);
    CHECK(ds.papers[0].is_yearly());
    CHECK(ds.papers[0].yearly_counts() == std::vector<double>{3.0, 0.0, 2.5});
    CHECK(*ds.meta[0].cohort_year == 1995);
    CHECK(*ds.meta[1].cohort_year == 2001);

    const auto out = temp_file("yearly-out.csv", "");
    save_dataset(ds, out, DatasetFormat::yearly_csv);
    CHECK(slurp(out) == content);
  }

  SUBCASE("missing offsets are zero years") {
    const std::string content =
        "paper_id,pub_year,year_offset,count\n"
        "p,1990,3,7\n";
    const auto ds = load_dataset(temp_file("gaps.csv", content), DatasetFormat::yearly_csv);
    REQUIRE(ds.papers.size() == 1);
    CHECK(ds.papers[0].yearly_counts() == std::vector<double>{0.0, 0.0, 7.0});
  }
}

TEST_CASE("JSON carries all metadata and round-trips byte-identically") {
  Dataset ds;
  ds.papers.push_back(
      CitationHistory::from_events("ev", {10.0, 250.5, 900.0}, "2003-05-01"));
  ds.papers.push_back(CitationHistory::from_yearly_counts("yr", {1.0, 4.0, 2.0}));
  PaperMeta m0;
  m0.journal = "alpha";
  m0.cohort_year = 2003;
  ds.meta.push_back(m0);
  ds.meta.push_back(PaperMeta{});

  const auto path = temp_file("ds.json", "");
  save_dataset(ds, path, DatasetFormat::json);

  const auto back = load_dataset(path, DatasetFormat::json);
  REQUIRE(back.papers.size() == 2);
  CHECK(back.papers[0].events() == ds.papers[0].events());
  CHECK(back.papers[0].publication_date() == "2003-05-01");
  CHECK(back.papers[1].yearly_counts() == ds.papers[1].yearly_counts());
  CHECK(back.meta[0].journal == "alpha");
  CHECK(*back.meta[0].cohort_year == 2003);
  CHECK(back.meta[1] == PaperMeta{});

  const auto again = temp_file("ds2.json", "");
  save_dataset(back, again, DatasetFormat::json);
  CHECK(slurp(again) == slurp(path));
}

TEST_CASE("parse errors carry path and line number") {
  SUBCASE("wrong header") {
    const auto path = temp_file("badheader.csv", "id,when\nx,2000-01-01\n");
    const auto msg = message_of(
        [&] { load_dataset(path, DatasetFormat::events_csv); });
    CHECK(msg.find(path + ":1:") != std::string::npos);
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::events_csv), ParseError);
  }

  SUBCASE("wrong field count") {
    const auto path = temp_file("fields.csv",
                                "paper_id,pub_date,cite_date\n"
                                "a,2000-01-01\n");
    const auto msg = message_of(
        [&] { load_dataset(path, DatasetFormat::events_csv); });
    CHECK(msg.find(":2:") != std::string::npos);
  }

  SUBCASE("malformed date") {
    const auto path = temp_file("date.csv",
                                "paper_id,pub_date,cite_date\n"
                                "a,2000-01-01,2000-13-40\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::events_csv), ParseError);
  }

  SUBCASE("malformed count") {
    const auto path = temp_file("count.csv",
                                "paper_id,pub_year,year_offset,count\n"
                                "p,1990,1,abc\n");
    const auto msg = message_of(
        [&] { load_dataset(path, DatasetFormat::yearly_csv); });
    CHECK(msg.find(":2:") != std::string::npos);
    CHECK(msg.find("abc") != std::string::npos);
  }

  SUBCASE("malformed JSON") {
    const auto path = temp_file("broken.json", "{ not json");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::json), ParseError);
  }

  SUBCASE("JSON without a papers array") {
    const auto path = temp_file("nopapers.json", "{\"foo\": 1}\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::json), ParseError);
  }
}

TEST_CASE("semantic violations are validation errors") {
  SUBCASE("citation before publication names the paper") {
    const auto path = temp_file("early.csv",
                                "paper_id,pub_date,cite_date\n"
                                "late,2005-01-01,2004-12-31\n");
    const auto msg = message_of(
        [&] { load_dataset(path, DatasetFormat::events_csv); });
    CHECK(msg.find("late") != std::string::npos);
    CHECK(msg.find(":2:") != std::string::npos);
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::events_csv), ValidationError);
  }

  SUBCASE("conflicting publication dates") {
    const auto path = temp_file("conflict.csv",
                                "paper_id,pub_date,cite_date\n"
                                "a,2000-01-01,2000-02-01\n"
                                "a,2000-01-02,2000-03-01\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::events_csv), ValidationError);
  }

  SUBCASE("conflicting pub_year") {
    const auto path = temp_file("conflictyear.csv",
                                "paper_id,pub_year,year_offset,count\n"
                                "a,1990,1,1\n"
                                "a,1991,2,1\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::yearly_csv), ValidationError);
  }

  SUBCASE("duplicate year offset") {
    const auto path = temp_file("dupoffset.csv",
                                "paper_id,pub_year,year_offset,count\n"
                                "a,1990,1,1\n"
                                "a,1990,1,2\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::yearly_csv), ValidationError);
  }

  SUBCASE("bad offset and negative count") {
    const auto zero = temp_file("offset0.csv",
                                "paper_id,pub_year,year_offset,count\n"
                                "a,1990,0,1\n");
    CHECK_THROWS_AS(load_dataset(zero, DatasetFormat::yearly_csv), ValidationError);
    const auto neg = temp_file("negcount.csv",
                               "paper_id,pub_year,year_offset,count\n"
                               "a,1990,1,-2\n");
    CHECK_THROWS_AS(load_dataset(neg, DatasetFormat::yearly_csv), ValidationError);
  }
}

TEST_CASE("an empty file is an empty dataset with a warning") {
  const auto path = temp_file("empty.csv", "");
  const auto ds = load_dataset(path, DatasetFormat::auto_detect);
  CHECK(ds.papers.empty());
  REQUIRE(ds.warnings.size() == 1);
  CHECK(ds.warnings[0].find("empty") != std::string::npos);
}

TEST_CASE("format auto-detection") {
  const std::string events =
      "paper_id,pub_date,cite_date\n"
      "a,2000-01-01,2000-03-01\n";
  const std::string yearly =
      "paper_id,pub_year,year_offset,count\n"
      "a,1990,1,1\n";

  CHECK_FALSE(load_dataset(temp_file("auto-ev.csv", events)).papers[0].is_yearly());
  CHECK(load_dataset(temp_file("auto-yr.csv", yearly)).papers[0].is_yearly());

  // .json extension wins; extension-less JSON is sniffed from the body
  const std::string json = "{\"papers\": [{\"paper_id\": \"j\", \"yearly_counts\": [1]}]}\n";
  CHECK(load_dataset(temp_file("auto.json", json)).papers.size() == 1);
  CHECK(load_dataset(temp_file("extensionless", json)).papers.size() == 1);

  // an unrecognized CSV header cannot be inferred
  const auto odd = temp_file("odd.csv", "who,what\n1,2\n");
  CHECK_THROWS_AS(load_dataset(odd), ParseError);
  // an extension-less non-JSON file cannot be inferred at all
  const auto opaque = temp_file("opaque", "who,what\n1,2\n");
  CHECK_THROWS_AS(load_dataset(opaque), InputError);

  CHECK(parse_dataset_format("events-csv") == DatasetFormat::events_csv);
  CHECK(parse_dataset_format("yearly-csv") == DatasetFormat::yearly_csv);
  CHECK(parse_dataset_format("json") == DatasetFormat::json);
  CHECK(parse_dataset_format("auto") == DatasetFormat::auto_detect);
  CHECK_THROWS_AS(parse_dataset_format("xml"), InputError);
}

TEST_CASE("dataset validation") {
  Dataset ds;
  ds.papers.push_back(CitationHistory::from_yearly_counts("same", {1.0}));
  ds.papers.push_back(CitationHistory::from_yearly_counts("same", {2.0}));
  ds.meta.resize(2);
  CHECK_THROWS_AS(ds.validate(), ValidationError);

  Dataset skewed;
  skewed.papers.push_back(CitationHistory::from_yearly_counts("a", {1.0}));
  CHECK_THROWS_AS(skewed.validate(), ValidationError);

  // duplicate ids in a file are rejected at load time too
  const auto path = temp_file("dup.json",
                              "{\"papers\": ["
                              "{\"paper_id\": \"d\", \"yearly_counts\": [1]},"
                              "{\"paper_id\": \"d\", \"events_days\": [5]}]}\n");
  CHECK_THROWS_AS(load_dataset(path), ValidationError);

  CHECK(ds.find("same") != nullptr);
  CHECK(ds.find("missing") == nullptr);
}

TEST_CASE("save-time format restrictions") {
  Dataset yearly_only;
  yearly_only.papers.push_back(CitationHistory::from_yearly_counts("y", {1.0, 2.0}));
  yearly_only.meta.resize(1);

  const auto path = temp_file("nosave.csv", "");
  CHECK_THROWS_AS(save_dataset(yearly_only, path, DatasetFormat::events_csv), InputError);
  CHECK_THROWS_AS(save_dataset(yearly_only, path, DatasetFormat::auto_detect), InputError);

  // event papers without a publication date cannot go to events-csv either
  Dataset dateless;
  dateless.papers.push_back(CitationHistory::from_events("e", {5.0, 10.0}));
  dateless.meta.resize(1);
  CHECK_THROWS_AS(save_dataset(dateless, path, DatasetFormat::events_csv), InputError);

  // but yearly-csv converts events on the fly
  Dataset mixed;
  mixed.papers.push_back(CitationHistory::from_events("e", {5.0, 400.0}, "2000-01-01"));
  mixed.meta.resize(1);
  const auto out = temp_file("mixed.csv", "");
  save_dataset(mixed, out, DatasetFormat::yearly_csv);
  const auto back = load_dataset(out, DatasetFormat::yearly_csv);
  REQUIRE(back.papers.size() == 1);
  CHECK(back.papers[0].yearly_counts() == std::vector<double>{1.0, 1.0});
  // the cohort year falls back to the publication date's year
  CHECK(*back.meta[0].cohort_year == 2000);
}

TEST_CASE("missing files are input errors") {
  CHECK_THROWS_AS(load_dataset("/nonexistent/nowhere.csv"), InputError);
}
