#pragma once

#include <map>
#include <utility>
#include <vector>

#include "chronolex/mds.hpp"

namespace chronolex {

struct GridPoint {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

struct GridSize {
  int width = 1000;
  int height = 1000;
};

inline constexpr double kDefaultMargin = 0.05;

/// Fits the bounding box of `coords` into the grid minus a margin on each
/// side, with one scale factor for both axes, centered. A zero-size box maps
/// to the grid center. Throws Errc::Empty / Errc::InvalidArgument.
std::map<PointKey, GridPoint> quantize(const std::map<PointKey, Point2>& coords, GridSize grid,
                                       double margin_fraction = kDefaultMargin);

/// Integer line from p0 to p1 inclusive, max(|dx|, |dy|) + 1 points. When the
/// decision variable is exactly zero the minor axis does not step.
std::vector<GridPoint> bresenham(GridPoint p0, GridPoint p1);

struct Keyframe {
  int slice_index = 0;
  GridPoint point;
};

struct Trajectory {
  int word_index = 0;
  std::vector<Keyframe> keyframes;
  std::vector<GridPoint> frames;
  /// frames[segment_offsets[j]] == keyframes[j].point
  std::vector<std::size_t> segment_offsets;

  bool empty() const noexcept { return keyframes.empty(); }
};

/// One trajectory per word: keyframes in slice order joined by Bresenham
/// segments, skipping over missing slices.
std::vector<Trajectory> build_trajectories(const std::map<PointKey, GridPoint>& quantized,
                                           int word_count, int slice_count);

}  // namespace chronolex
