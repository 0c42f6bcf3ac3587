#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citedyn/history.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

/// Journal/year tags attached to a paper. Only the JSON format and the
/// yearly CSV's pub_year column carry metadata; plain event CSVs leave it
/// empty.
struct PaperMeta {
  std::string journal;
  std::optional<int> cohort_year;

  bool operator==(const PaperMeta&) const = default;
};

/// A collection of citation histories with per-paper metadata. `meta` always
/// parallels `papers`.
struct Dataset {
  std::vector<CitationHistory> papers;
  std::vector<PaperMeta> meta;
  std::string source_path;              ///< where this was loaded from, if anywhere
  std::vector<std::string> warnings;    ///< non-fatal loader notes

  const CitationHistory* find(std::string_view paper_id) const;
  /// Unique paper ids, meta parallel to papers. Throws ValidationError.
  void validate() const;
};

enum class DatasetFormat { events_csv, yearly_csv, json, auto_detect };

/// Parse "events-csv" | "yearly-csv" | "json" | "auto". Throws InputError.
DatasetFormat parse_dataset_format(const std::string& token);

/// Read a dataset.
///
/// events-csv: header `paper_id,pub_date,cite_date`, one citation event per
/// row, ISO-8601 dates, event time = whole days between the dates. A paper's
/// pub_date must agree across its rows; a citation dated before publication
/// is a ValidationError naming the line.
///
/// yearly-csv: header `paper_id,pub_year,year_offset,count`; year_offset is
/// 1-based (offset k covers ((k-1)*365.25, k*365.25] days); missing offsets
/// are zero years; counts are non-negative reals; pub_year becomes the
/// paper's cohort year.
///
/// json: mirrors Dataset (see save_dataset), full precision, carries all
/// metadata.
///
/// auto_detect resolves by extension and, for .csv, by the header row.
/// An empty file yields an empty Dataset with a warning. Malformed content
/// raises ParseError with a line number; semantic violations raise
/// ValidationError.
Dataset load_dataset(const std::string& path,
                     DatasetFormat format = DatasetFormat::auto_detect);

/// Write a dataset. events-csv requires every paper to be event-based with a
/// publication date (event times are rounded to whole days, the format's
/// granularity); yearly-csv accepts both representations, converting events
/// to yearly counts; json round-trips everything exactly. Deterministic
/// output: equal datasets serialize byte-identically.
void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format);

}  // namespace citedyn
