#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "citedyn/types.hpp"

namespace citedyn {

/// One point of a cumulative citation record: the total number of citations
/// accumulated up to (and including) time t_days after publication.
struct Observation {
  double t_days = 0.0;
  double cumulative = 0.0;
};

/// Where a year's citations are placed when a yearly history is expanded to
/// individual event times.
enum class YearPlacement { midpoint, year_end };

/// A single paper's citation record. Exactly one of two representations is
/// held: an ordered list of citation event times (days since publication),
/// or per-year citation counts (year i covers ((i-1)*365.25, i*365.25] days).
/// Yearly counts are real-valued so that exact curve samples and cohort-mean
/// curves can flow through the same machinery as integer census data.
class CitationHistory {
public:
  CitationHistory() = default;

  static CitationHistory from_events(std::string paper_id,
                                     std::vector<double> event_days,
                                     std::string publication_date = {});
  static CitationHistory from_yearly_counts(std::string paper_id,
                                            std::vector<double> counts,
                                            std::string publication_date = {});

  const std::string& paper_id() const { return paper_id_; }
  const std::string& publication_date() const { return publication_date_; }
  void set_paper_id(std::string id) { paper_id_ = std::move(id); }
  void set_publication_date(std::string iso) { publication_date_ = std::move(iso); }

  bool is_yearly() const { return yearly_; }
  bool empty() const;

  /// Event times in days, ascending. Only valid for event histories.
  const std::vector<double>& events() const;
  /// Per-year counts. Only valid for yearly histories.
  const std::vector<double>& yearly_counts() const;

  /// Final cumulative citation count.
  double total() const;
  /// Time of the last observation in days (events: last event time;
  /// yearly: the last year boundary).
  double last_time() const;

  /// Cumulative citations at time t. For yearly histories the count steps at
  /// year boundaries.
  double cumulative_at(double t_days) const;

  /// The canonical (t, cumulative) grid used by fitting, rescaling, and
  /// goodness-of-fit: year boundaries for yearly data, distinct event times
  /// for event data (thinned uniformly in log t down to max_points).
  /// Times at t <= 0 never appear as grid points.
  std::vector<Observation> observation_grid(std::size_t max_points = 512) const;

  /// Event-time view. Yearly histories are expanded by placing each year's
  /// citations at the year's midpoint (or year end). Fractional counts round
  /// with a carried remainder so the expanded total matches the rounded total.
  std::vector<double> to_events(YearPlacement placement = YearPlacement::midpoint) const;

  /// Counts per year over years 1..n_years.
  std::vector<double> to_yearly(std::size_t n_years) const;

  /// The prefix of this history up to t_days: events at times <= t_days, or
  /// the complete years ending at or before t_days.
  CitationHistory truncated(double t_days) const;

private:
  std::string paper_id_;
  std::string publication_date_;  // ISO-8601 date or empty
  bool yearly_ = false;
  std::vector<double> events_;        // sorted ascending, all >= 0
  std::vector<double> yearly_counts_; // all >= 0, finite
};

}  // namespace citedyn
