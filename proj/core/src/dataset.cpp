#include "citedyn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "citedyn/format.hpp"

namespace citedyn {

namespace {

using ordered_json = nlohmann::ordered_json;
using sys_days = std::chrono::sys_days;

constexpr const char* kEventsHeader = "paper_id,pub_date,cite_date";
constexpr const char* kYearlyHeader = "paper_id,pub_year,year_offset,count";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError("failed reading '" + path + "'");
  return ss.str();
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

[[noreturn]] void validation_fail(const std::string& path, std::size_t line_no,
                                  const std::string& what) {
  throw ValidationError(path + ":" + std::to_string(line_no) + ": " + what);
}

int parse_int_field(const std::string& s, const std::string& path, std::size_t line_no,
                    const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    parse_fail(path, line_no, std::string("invalid ") + what + " '" + s + "'");
  }
  return value;
}

double parse_double_field(const std::string& s, const std::string& path,
                          std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    parse_fail(path, line_no, std::string("invalid ") + what + " '" + s + "'");
  }
  return value;
}

sys_days parse_date_field(const std::string& s, const std::string& path,
                          std::size_t line_no, const char* what) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    parse_fail(path, line_no,
               std::string("invalid ") + what + " '" + s + "' (expected YYYY-MM-DD)");
  }
  const int y = parse_int_field(s.substr(0, 4), path, line_no, what);
  const int m = parse_int_field(s.substr(5, 2), path, line_no, what);
  const int d = parse_int_field(s.substr(8, 2), path, line_no, what);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) {
    parse_fail(path, line_no, std::string("invalid ") + what + " '" + s + "'");
  }
  return sys_days{ymd};
}

std::string format_date(sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

void expect_header(const std::string& got, const char* want, const std::string& path) {
  if (strip_cr(got) != want) {
    parse_fail(path, 1, std::string("expected header '") + want + "', got '" +
                            strip_cr(got) + "'");
  }
}

Dataset load_events_csv(const std::string& content, const std::string& path) {
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;

  std::getline(in, line);
  ++line_no;
  expect_header(line, kEventsHeader, path);

  struct Accum {
    sys_days pub{};
    std::string pub_str;
    std::vector<double> events;
  };
  std::vector<std::string> order;
  std::map<std::string, Accum> by_id;

  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;
    const auto f = split_fields(line);
    if (f.size() != 3) parse_fail(path, line_no, "expected 3 fields");
    if (f[0].empty()) validation_fail(path, line_no, "empty paper_id");
    const sys_days pub = parse_date_field(f[1], path, line_no, "pub_date");
    const sys_days cite = parse_date_field(f[2], path, line_no, "cite_date");
    if (cite < pub) {
      validation_fail(path, line_no, "citation dated before publication for paper '" +
                                         f[0] + "'");
    }
    auto [it, fresh] = by_id.try_emplace(f[0]);
    if (fresh) {
      order.push_back(f[0]);
      it->second.pub = pub;
      it->second.pub_str = strip_cr(f[1]);
    } else if (it->second.pub != pub) {
      validation_fail(path, line_no,
                      "conflicting publication dates for paper '" + f[0] + "'");
    }
    it->second.events.push_back(static_cast<double>((cite - pub).count()));
  }

  Dataset ds;
  ds.source_path = path;
  for (const std::string& id : order) {
    Accum& a = by_id[id];
    ds.papers.push_back(
        CitationHistory::from_events(id, std::move(a.events), a.pub_str));
    PaperMeta meta;
    meta.cohort_year = int(std::chrono::year_month_day{a.pub}.year());
    ds.meta.push_back(std::move(meta));
  }
  return ds;
}

Dataset load_yearly_csv(const std::string& content, const std::string& path) {
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;

  std::getline(in, line);
  ++line_no;
  expect_header(line, kYearlyHeader, path);

  struct Accum {
    int pub_year = 0;
    std::map<int, double> counts;  // offset -> count
  };
  std::vector<std::string> order;
  std::map<std::string, Accum> by_id;

  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;
    const auto f = split_fields(line);
    if (f.size() != 4) parse_fail(path, line_no, "expected 4 fields");
    if (f[0].empty()) validation_fail(path, line_no, "empty paper_id");
    const int pub_year = parse_int_field(f[1], path, line_no, "pub_year");
    const int offset = parse_int_field(f[2], path, line_no, "year_offset");
    const double count = parse_double_field(f[3], path, line_no, "count");
    if (offset < 1) validation_fail(path, line_no, "year_offset must be >= 1");
    if (count < 0.0) validation_fail(path, line_no, "count must be >= 0");

    auto [it, fresh] = by_id.try_emplace(f[0]);
    if (fresh) {
      order.push_back(f[0]);
      it->second.pub_year = pub_year;
    } else if (it->second.pub_year != pub_year) {
      validation_fail(path, line_no,
                      "conflicting pub_year for paper '" + f[0] + "'");
    }
    if (!it->second.counts.emplace(offset, count).second) {
      validation_fail(path, line_no, "duplicate year_offset " + std::to_string(offset) +
                                         " for paper '" + f[0] + "'");
    }
  }

  Dataset ds;
  ds.source_path = path;
  for (const std::string& id : order) {
    const Accum& a = by_id[id];
    std::vector<double> counts(static_cast<std::size_t>(a.counts.rbegin()->first), 0.0);
    for (const auto& [offset, count] : a.counts) {
      counts[static_cast<std::size_t>(offset) - 1] = count;
    }
    ds.papers.push_back(CitationHistory::from_yearly_counts(id, std::move(counts)));
    PaperMeta meta;
    meta.cohort_year = a.pub_year;
    ds.meta.push_back(std::move(meta));
  }
  return ds;
}

Dataset load_json(const std::string& content, const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("papers") || !j["papers"].is_array()) {
    throw ParseError(path + ": expected a top-level object with a 'papers' array");
  }

  Dataset ds;
  ds.source_path = path;
  std::size_t idx = 0;
  for (const auto& jp : j["papers"]) {
    ++idx;
    const std::string where = path + ": papers[" + std::to_string(idx - 1) + "]";
    if (!jp.is_object() || !jp.contains("paper_id") || !jp["paper_id"].is_string()) {
      throw ParseError(where + ": expected an object with a string 'paper_id'");
    }
    const std::string id = jp["paper_id"].get<std::string>();
    const bool has_events = jp.contains("events_days");
    const bool has_yearly = jp.contains("yearly_counts");
    if (has_events == has_yearly) {
      throw ValidationError(where + ": need exactly one of events_days, yearly_counts");
    }

    std::string pub_date;
    if (jp.contains("publication_date")) {
      if (!jp["publication_date"].is_string()) {
        throw ParseError(where + ": publication_date must be a string");
      }
      pub_date = jp["publication_date"].get<std::string>();
    }

    std::vector<double> values;
    const auto& arr = has_events ? jp["events_days"] : jp["yearly_counts"];
    if (!arr.is_array()) throw ParseError(where + ": expected an array of numbers");
    for (const auto& v : arr) {
      if (!v.is_number()) throw ParseError(where + ": expected an array of numbers");
      values.push_back(v.get<double>());
    }
    try {
      ds.papers.push_back(has_events
                              ? CitationHistory::from_events(id, std::move(values), pub_date)
                              : CitationHistory::from_yearly_counts(id, std::move(values),
                                                                    pub_date));
    } catch (const InputError& e) {
      throw ValidationError(where + ": " + e.what());
    }

    PaperMeta meta;
    if (jp.contains("journal")) {
      if (!jp["journal"].is_string()) throw ParseError(where + ": journal must be a string");
      meta.journal = jp["journal"].get<std::string>();
    }
    if (jp.contains("cohort_year")) {
      if (!jp["cohort_year"].is_number_integer()) {
        throw ParseError(where + ": cohort_year must be an integer");
      }
      meta.cohort_year = jp["cohort_year"].get<int>();
    }
    ds.meta.push_back(std::move(meta));
  }
  return ds;
}

DatasetFormat detect_format(const std::string& path, const std::string& content) {
  const auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  if (ext == ".json") return DatasetFormat::json;
  if (ext == ".csv") {
    std::istringstream in(content);
    std::string first;
    std::getline(in, first);
    first = strip_cr(first);
    if (first == kEventsHeader) return DatasetFormat::events_csv;
    if (first == kYearlyHeader) return DatasetFormat::yearly_csv;
    parse_fail(path, 1, "cannot infer CSV schema from header '" + first + "'");
  }
  const auto pos = content.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && content[pos] == '{') return DatasetFormat::json;
  throw InputError("cannot infer dataset format of '" + path +
                   "'; pass the format explicitly");
}

int pub_year_for_save(const CitationHistory& h, const PaperMeta& meta) {
  if (meta.cohort_year) return *meta.cohort_year;
  const std::string& d = h.publication_date();
  if (d.size() >= 4) {
    int y = 0;
    const auto [ptr, ec] = std::from_chars(d.data(), d.data() + 4, y);
    if (ec == std::errc{} && ptr == d.data() + 4) return y;
  }
  return 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string save_events_csv(const Dataset& ds) {
  std::string out = kEventsHeader;
  out += '\n';
  for (std::size_t i = 0; i < ds.papers.size(); ++i) {
    const CitationHistory& h = ds.papers[i];
    if (h.is_yearly()) {
      throw InputError("save_dataset: paper '" + h.paper_id() +
                       "' has yearly counts; the events-csv format needs event times");
    }
    if (h.publication_date().empty()) {
      throw InputError("save_dataset: paper '" + h.paper_id() +
                       "' has no publication date; required by events-csv");
    }
    const sys_days pub = parse_date_field(h.publication_date(), "<dataset>", 0, "pub_date");
    for (double t : h.events()) {
      const sys_days cite = pub + std::chrono::days{std::llround(t)};
      out += h.paper_id();
      out += ',';
      out += h.publication_date();
      out += ',';
      out += format_date(cite);
      out += '\n';
    }
  }
  return out;
}

std::string save_yearly_csv(const Dataset& ds) {
  std::string out = kYearlyHeader;
  out += '\n';
  for (std::size_t i = 0; i < ds.papers.size(); ++i) {
    const CitationHistory& h = ds.papers[i];
    const int pub_year = pub_year_for_save(h, ds.meta[i]);
    const std::vector<double> counts =
        h.is_yearly() ? h.yearly_counts()
                      : h.to_yearly(static_cast<std::size_t>(
                            std::ceil(h.last_time() / kDaysPerYear - 1e-9)));
    for (std::size_t k = 0; k < counts.size(); ++k) {
      out += h.paper_id();
      out += ',';
      out += std::to_string(pub_year);
      out += ',';
      out += std::to_string(k + 1);
      out += ',';
      out += format_sig6(counts[k]);
      out += '\n';
    }
  }
  return out;
}

std::string save_json(const Dataset& ds) {
  ordered_json root;
  root["papers"] = ordered_json::array();
  for (std::size_t i = 0; i < ds.papers.size(); ++i) {
    const CitationHistory& h = ds.papers[i];
    ordered_json jp;
    jp["paper_id"] = h.paper_id();
    if (!h.publication_date().empty()) jp["publication_date"] = h.publication_date();
    if (!ds.meta[i].journal.empty()) jp["journal"] = ds.meta[i].journal;
    if (ds.meta[i].cohort_year) jp["cohort_year"] = *ds.meta[i].cohort_year;
    if (h.is_yearly()) {
      jp["yearly_counts"] = h.yearly_counts();
    } else {
      jp["events_days"] = h.events();
    }
    root["papers"].push_back(std::move(jp));
  }
  return root.dump(2) + "\n";
}

}  // namespace

const CitationHistory* Dataset::find(std::string_view paper_id) const {
  for (const CitationHistory& h : papers) {
    if (h.paper_id() == paper_id) return &h;
  }
  return nullptr;
}

void Dataset::validate() const {
  if (papers.size() != meta.size()) {
    throw ValidationError("Dataset: papers and meta are not parallel");
  }
  std::vector<std::string_view> ids;
  ids.reserve(papers.size());
  for (const CitationHistory& h : papers) ids.push_back(h.paper_id());
  std::sort(ids.begin(), ids.end());
  const auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw ValidationError("Dataset: duplicate paper_id '" + std::string(*dup) + "'");
  }
}

DatasetFormat parse_dataset_format(const std::string& token) {
  if (token == "events-csv") return DatasetFormat::events_csv;
  if (token == "yearly-csv") return DatasetFormat::yearly_csv;
  if (token == "json") return DatasetFormat::json;
  if (token == "auto") return DatasetFormat::auto_detect;
  throw InputError("unknown dataset format: '" + token +
                   "' (expected events-csv, yearly-csv, json, or auto)");
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
  const std::string content = read_file(path);
  if (is_blank(content)) {
    Dataset ds;
    ds.source_path = path;
    ds.warnings.push_back("'" + path + "' is empty; loaded an empty dataset");
    return ds;
  }
  if (format == DatasetFormat::auto_detect) format = detect_format(path, content);

  Dataset ds;
  switch (format) {
    case DatasetFormat::events_csv: ds = load_events_csv(content, path); break;
    case DatasetFormat::yearly_csv: ds = load_yearly_csv(content, path); break;
    case DatasetFormat::json: ds = load_json(content, path); break;
    case DatasetFormat::auto_detect: throw InputError("unresolved dataset format");
  }
  ds.validate();
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format) {
  ds.validate();
  switch (format) {
    case DatasetFormat::events_csv: write_file(path, save_events_csv(ds)); break;
    case DatasetFormat::yearly_csv: write_file(path, save_yearly_csv(ds)); break;
    case DatasetFormat::json: write_file(path, save_json(ds)); break;
    case DatasetFormat::auto_detect:
      throw InputError("save_dataset: pass an explicit format");
  }
}

}  // namespace citedyn
