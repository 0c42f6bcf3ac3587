#include <cmath>
#include <vector>

#include "citedyn/history.hpp"
#include "citedyn/types.hpp"
#include "doctest.h"

using namespace citedyn;

TEST_CASE("event history basics") {
  auto h = CitationHistory::from_events("p1", {30.0, 10.0, 400.0, 10.0});
  CHECK_FALSE(h.is_yearly());
  CHECK(h.total() == 4.0);
  CHECK(h.last_time() == 400.0);
  // events are sorted on construction
  CHECK(h.events() == std::vector<double>{10.0, 10.0, 30.0, 400.0});
  CHECK(h.cumulative_at(9.9) == 0.0);
  CHECK(h.cumulative_at(10.0) == 2.0);
  CHECK(h.cumulative_at(1e9) == 4.0);
  CHECK_THROWS_AS(h.yearly_counts(), InputError);
}

TEST_CASE("yearly history basics") {
  auto h = CitationHistory::from_yearly_counts("p2", {3.0, 0.0, 5.0});
  CHECK(h.is_yearly());
  CHECK(h.total() == 8.0);
  CHECK(h.last_time() == doctest::Approx(3.0 * kDaysPerYear));
  CHECK(h.cumulative_at(0.0) == 0.0);
  CHECK(h.cumulative_at(kDaysPerYear) == 3.0);          // boundary included
  CHECK(h.cumulative_at(kDaysPerYear - 1.0) == 0.0);    // counts step at boundaries
  CHECK(h.cumulative_at(2.5 * kDaysPerYear) == 3.0);
  CHECK(h.cumulative_at(100.0 * kDaysPerYear) == 8.0);
  CHECK_THROWS_AS(h.events(), InputError);
}

TEST_CASE("history construction rejects bad values") {
  CHECK_THROWS_AS(CitationHistory::from_events("x", {-1.0}), ValidationError);
  CHECK_THROWS_AS(CitationHistory::from_events("x", {std::nan("")}), ValidationError);
  CHECK_THROWS_AS(CitationHistory::from_yearly_counts("x", {-0.5}), ValidationError);
}

TEST_CASE("observation grid for yearly data is the year boundaries") {
  auto h = CitationHistory::from_yearly_counts("p", {2.0, 1.0, 0.0, 4.0});
  const auto grid = h.observation_grid();
  REQUIRE(grid.size() == 4);
  CHECK(grid[0].t_days == doctest::Approx(kDaysPerYear));
  CHECK(grid[0].cumulative == 2.0);
  CHECK(grid[3].t_days == doctest::Approx(4.0 * kDaysPerYear));
  CHECK(grid[3].cumulative == 7.0);
}

TEST_CASE("observation grid for events collapses ties and drops t = 0") {
  auto h = CitationHistory::from_events("p", {0.0, 5.0, 5.0, 9.0});
  const auto grid = h.observation_grid();
  REQUIRE(grid.size() == 2);
  CHECK(grid[0].t_days == 5.0);
  CHECK(grid[0].cumulative == 3.0);  // includes the t = 0 event
  CHECK(grid[1].t_days == 9.0);
  CHECK(grid[1].cumulative == 4.0);
}

TEST_CASE("observation grid thinning keeps endpoints and stays sorted") {
  std::vector<double> ev;
  for (int i = 1; i <= 5000; ++i) ev.push_back(static_cast<double>(i));
  auto h = CitationHistory::from_events("p", std::move(ev));
  const auto grid = h.observation_grid(64);
  CHECK(grid.size() <= 65);
  CHECK(grid.size() >= 32);
  CHECK(grid.front().t_days == 1.0);
  CHECK(grid.back().t_days == 5000.0);
  CHECK(grid.back().cumulative == 5000.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i].t_days > grid[i - 1].t_days);
    CHECK(grid[i].cumulative > grid[i - 1].cumulative);
  }
}

TEST_CASE("yearly to events placement and carry rounding") {
  auto h = CitationHistory::from_yearly_counts("p", {1.5, 1.5, 1.0});
  const auto mid = h.to_events(YearPlacement::midpoint);
  // 1.5 -> 2 (round half up), carry -0.5; 1.5 - 0.5 = 1.0 -> 1; 1.0 -> 1
  REQUIRE(mid.size() == 4);
  CHECK(mid[0] == doctest::Approx(0.5 * kDaysPerYear));
  CHECK(mid[1] == doctest::Approx(0.5 * kDaysPerYear));
  CHECK(mid[2] == doctest::Approx(1.5 * kDaysPerYear));
  CHECK(mid[3] == doctest::Approx(2.5 * kDaysPerYear));

  const auto end = h.to_events(YearPlacement::year_end);
  REQUIRE(end.size() == 4);
  CHECK(end[0] == doctest::Approx(kDaysPerYear));
  CHECK(end[3] == doctest::Approx(3.0 * kDaysPerYear));
}

TEST_CASE("carry rounding conserves the rounded total") {
  // 10 years of 0.3 citations: naive per-year rounding gives 0, carry gives 3
  auto h = CitationHistory::from_yearly_counts("p", std::vector<double>(10, 0.3));
  CHECK(h.to_events().size() == 3);
}

TEST_CASE("events to yearly maps boundary events to the earlier year") {
  auto h = CitationHistory::from_events(
      "p", {0.0, 100.0, kDaysPerYear, kDaysPerYear + 1.0, 5.0 * kDaysPerYear});
  const auto counts = h.to_yearly(5);
  REQUIRE(counts.size() == 5);
  CHECK(counts[0] == 3.0);  // t=0, t=100, t=365.25 (boundary belongs to year 1)
  CHECK(counts[1] == 1.0);
  CHECK(counts[2] == 0.0);
  CHECK(counts[4] == 1.0);
}

TEST_CASE("to_yearly pads and truncates to the requested span") {
  auto h = CitationHistory::from_yearly_counts("p", {1.0, 2.0});
  const auto longer = h.to_yearly(4);
  CHECK(longer == std::vector<double>{1.0, 2.0, 0.0, 0.0});
  const auto shorter = h.to_yearly(1);
  CHECK(shorter == std::vector<double>{1.0});
}

TEST_CASE("truncation takes a prefix") {
  auto ev = CitationHistory::from_events("p", {1.0, 10.0, 100.0, 1000.0});
  CHECK(ev.truncated(100.0).total() == 3.0);
  CHECK(ev.truncated(0.5).total() == 0.0);

  auto yr = CitationHistory::from_yearly_counts("p", {1.0, 2.0, 3.0});
  const auto t = yr.truncated(2.0 * kDaysPerYear);
  CHECK(t.is_yearly());
  CHECK(t.total() == 3.0);
  // a partial year is dropped, not prorated
  CHECK(yr.truncated(2.9 * kDaysPerYear).total() == 3.0);
}

TEST_CASE("empty history") {
  CitationHistory h;
  CHECK(h.empty());
  CHECK(h.total() == 0.0);
  CHECK(h.observation_grid().empty());
}
