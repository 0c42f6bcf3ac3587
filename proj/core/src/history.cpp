#include "citedyn/history.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace citedyn {

namespace {
// Tolerance for "is this time at/inside a year boundary" comparisons.
constexpr double kBoundaryEps = 1e-9;
}  // namespace

CitationHistory CitationHistory::from_events(std::string paper_id,
                                             std::vector<double> event_days,
                                             std::string publication_date) {
  for (double t : event_days) {
    if (!std::isfinite(t) || t < 0.0) {
      throw ValidationError("CitationHistory: event times must be finite and >= 0");
    }
  }
  if (!std::is_sorted(event_days.begin(), event_days.end())) {
    std::sort(event_days.begin(), event_days.end());
  }
  CitationHistory h;
  h.paper_id_ = std::move(paper_id);
  h.publication_date_ = std::move(publication_date);
  h.yearly_ = false;
  h.events_ = std::move(event_days);
  return h;
}

CitationHistory CitationHistory::from_yearly_counts(std::string paper_id,
                                                    std::vector<double> counts,
                                                    std::string publication_date) {
  for (double c : counts) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError("CitationHistory: yearly counts must be finite and >= 0");
    }
  }
  CitationHistory h;
  h.paper_id_ = std::move(paper_id);
  h.publication_date_ = std::move(publication_date);
  h.yearly_ = true;
  h.yearly_counts_ = std::move(counts);
  return h;
}

bool CitationHistory::empty() const {
  return yearly_ ? yearly_counts_.empty() : events_.empty();
}

const std::vector<double>& CitationHistory::events() const {
  if (yearly_) throw InputError("CitationHistory: not an event history");
  return events_;
}

const std::vector<double>& CitationHistory::yearly_counts() const {
  if (!yearly_) throw InputError("CitationHistory: not a yearly history");
  return yearly_counts_;
}

double CitationHistory::total() const {
  if (yearly_) {
    return std::accumulate(yearly_counts_.begin(), yearly_counts_.end(), 0.0);
  }
  return static_cast<double>(events_.size());
}

double CitationHistory::last_time() const {
  if (yearly_) return static_cast<double>(yearly_counts_.size()) * kDaysPerYear;
  return events_.empty() ? 0.0 : events_.back();
}

double CitationHistory::cumulative_at(double t_days) const {
  if (yearly_) {
    double sum = 0.0;
    for (std::size_t i = 0; i < yearly_counts_.size(); ++i) {
      const double boundary = static_cast<double>(i + 1) * kDaysPerYear;
      if (boundary <= t_days + kBoundaryEps) {
        sum += yearly_counts_[i];
      } else {
        break;
      }
    }
    return sum;
  }
  const auto it = std::upper_bound(events_.begin(), events_.end(), t_days);
  return static_cast<double>(it - events_.begin());
}

std::vector<Observation> CitationHistory::observation_grid(std::size_t max_points) const {
  std::vector<Observation> grid;
  if (yearly_) {
    grid.reserve(yearly_counts_.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < yearly_counts_.size(); ++i) {
      cum += yearly_counts_[i];
      grid.push_back({static_cast<double>(i + 1) * kDaysPerYear, cum});
    }
    return grid;
  }

  // Distinct positive event times with their cumulative counts.
  std::vector<Observation> full;
  std::size_t i = 0;
  while (i < events_.size()) {
    const double t = events_[i];
    std::size_t j = i;
    while (j < events_.size() && events_[j] == t) ++j;
    if (t > 0.0) full.push_back({t, static_cast<double>(j)});
    i = j;
  }
  if (max_points == 0 || full.size() <= max_points) return full;

  // Thin to max_points by snapping a log-uniform time grid onto the data,
  // always keeping the first and last observation.
  grid.reserve(max_points);
  const double lo = std::log(full.front().t_days);
  const double hi = std::log(full.back().t_days);
  std::size_t prev = static_cast<std::size_t>(-1);
  for (std::size_t k = 0; k < max_points; ++k) {
    const double target =
        lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(max_points - 1);
    // nearest observation in log time
    const double tt = std::exp(target);
    auto it = std::lower_bound(full.begin(), full.end(), tt,
                               [](const Observation& o, double v) { return o.t_days < v; });
    std::size_t idx;
    if (it == full.begin()) {
      idx = 0;
    } else if (it == full.end()) {
      idx = full.size() - 1;
    } else {
      const std::size_t hi_idx = static_cast<std::size_t>(it - full.begin());
      const std::size_t lo_idx = hi_idx - 1;
      const double dhi = std::log(full[hi_idx].t_days) - target;
      const double dlo = target - std::log(full[lo_idx].t_days);
      idx = (dlo <= dhi) ? lo_idx : hi_idx;
    }
    if (idx != prev) {
      grid.push_back(full[idx]);
      prev = idx;
    }
  }
  if (grid.back().t_days != full.back().t_days) grid.push_back(full.back());
  return grid;
}

std::vector<double> CitationHistory::to_events(YearPlacement placement) const {
  if (!yearly_) return events_;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(total()) + 1);
  double carry = 0.0;
  for (std::size_t i = 0; i < yearly_counts_.size(); ++i) {
    const double want = yearly_counts_[i] + carry;
    const double n = std::floor(want + 0.5);
    carry = want - n;
    const double t = (placement == YearPlacement::midpoint)
                         ? (static_cast<double>(i) + 0.5) * kDaysPerYear
                         : static_cast<double>(i + 1) * kDaysPerYear;
    for (long k = 0; k < static_cast<long>(n); ++k) out.push_back(t);
  }
  return out;
}

std::vector<double> CitationHistory::to_yearly(std::size_t n_years) const {
  std::vector<double> counts(n_years, 0.0);
  if (yearly_) {
    for (std::size_t i = 0; i < yearly_counts_.size() && i < n_years; ++i) {
      counts[i] = yearly_counts_[i];
    }
    return counts;
  }
  for (double t : events_) {
    // year index: event at t belongs to year ceil(t / 365.25), events at
    // t = 0 count toward the first year
    std::size_t year = (t <= 0.0) ? 1
                                  : static_cast<std::size_t>(
                                        std::ceil(t / kDaysPerYear - kBoundaryEps));
    if (year == 0) year = 1;
    if (year <= n_years) counts[year - 1] += 1.0;
  }
  return counts;
}

CitationHistory CitationHistory::truncated(double t_days) const {
  if (t_days < 0.0) throw InputError("CitationHistory: truncation time must be >= 0");
  CitationHistory h = *this;
  if (yearly_) {
    const std::size_t keep = static_cast<std::size_t>(
        std::max(0.0, std::floor(t_days / kDaysPerYear + kBoundaryEps)));
    if (keep < h.yearly_counts_.size()) h.yearly_counts_.resize(keep);
    return h;
  }
  const auto it = std::upper_bound(h.events_.begin(), h.events_.end(), t_days);
  h.events_.erase(it, h.events_.end());
  return h;
}

}  // namespace citedyn
