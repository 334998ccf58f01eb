#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lorenzlab/interval.hpp"

namespace lorenzlab {

struct NiceInterval {
  Interval interval;
  std::size_t horizon = 0;
  bool nice = false;
  // A boundary orbit hit c before the horizon, so niceness is open.
  bool undetermined = false;
  std::optional<std::size_t> period_a;
  std::optional<std::size_t> period_b;
  std::string reason;
};

struct ReturnMapBranch {
  Interval domain;
  std::size_t return_time = 0;
  Interval image;
  bool is_full = false;
  bool touches_c = false;
  // Return time matched at three interior samples.
  bool return_time_verified = false;
};

struct ReturnMapRec {
  Interval J;
  std::vector<ReturnMapBranch> branches;
  double uncovered_measure = 0.0;
  std::size_t horizon = 0;
  std::size_t resolution = 0;
  // Branches narrower than 1e-8 |J| cannot be resolved in double precision;
  // they are dropped and counted into uncovered_measure.
  std::size_t dropped_branches = 0;
  // The branch laws assume J nice; a non-nice J is still scanned.
  bool nice = true;
  std::string note;
};

struct GapRecord {
  Interval gap;
  std::size_t order = 0;
  bool image_is_J = false;
  // The gap shares an endpoint with J.
  bool shares_boundary = false;
};

struct GapList {
  std::vector<GapRecord> gaps;
  bool partial = false;
  std::size_t max_order = 0;
  bool nice = true;
};

struct PhobicEstimate {
  Interval J;
  std::size_t n = 0;
  std::size_t grid = 0;
  double surviving_measure = 0.0;
  std::vector<std::size_t> surviving_cells;
};

}  // namespace lorenzlab
