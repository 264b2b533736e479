#include "chronolex/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "chronolex/error.hpp"

namespace chronolex {

namespace {

int round_half_away(double v) { return static_cast<int>(std::round(v)); }

}  // namespace

std::map<PointKey, GridPoint> quantize(const std::map<PointKey, Point2>& coords, GridSize grid,
                                       double margin_fraction) {
  if (coords.empty()) throw Error(Errc::Empty, "nothing to quantize");
  if (grid.width < 2 || grid.height < 2)
    throw Error(Errc::InvalidArgument, "grid must be at least 2x2");
  if (!(margin_fraction >= 0.0 && margin_fraction < 0.5))
    throw Error(Errc::InvalidArgument, "margin fraction must be in [0, 0.5)");

  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& [key, p] : coords) {
    min_x = std::min(min_x, p[0]);
    max_x = std::max(max_x, p[0]);
    min_y = std::min(min_y, p[1]);
    max_y = std::max(max_y, p[1]);
  }
  const double box_w = max_x - min_x;
  const double box_h = max_y - min_y;
  const double avail_w = (1.0 - 2.0 * margin_fraction) * grid.width;
  const double avail_h = (1.0 - 2.0 * margin_fraction) * grid.height;

  double scale = 0.0;
  if (box_w > 0.0 && box_h > 0.0)
    scale = std::min(avail_w / box_w, avail_h / box_h);
  else if (box_w > 0.0)
    scale = avail_w / box_w;
  else if (box_h > 0.0)
    scale = avail_h / box_h;

  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);
  const double gx = 0.5 * grid.width;
  const double gy = 0.5 * grid.height;

  std::map<PointKey, GridPoint> out;
  for (const auto& [key, p] : coords) {
    GridPoint g{round_half_away(gx + scale * (p[0] - cx)), round_half_away(gy + scale * (p[1] - cy))};
    g.x = std::clamp(g.x, 0, grid.width - 1);
    g.y = std::clamp(g.y, 0, grid.height - 1);
    out.emplace_hint(out.end(), key, g);
  }
  return out;
}

std::vector<GridPoint> bresenham(GridPoint p0, GridPoint p1) {
  const int dx = std::abs(p1.x - p0.x);
  const int dy = std::abs(p1.y - p0.y);
  const int sx = p1.x >= p0.x ? 1 : -1;
  const int sy = p1.y >= p0.y ? 1 : -1;
  const bool x_major = dx >= dy;
  const int major = x_major ? dx : dy;
  const int minor = x_major ? dy : dx;

  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(major) + 1);
  GridPoint p = p0;
  long long decision = 2LL * minor - major;
  out.push_back(p);
  for (int i = 0; i < major; ++i) {
    if (decision > 0) {
      if (x_major)
        p.y += sy;
      else
        p.x += sx;
      decision -= 2LL * major;
    }
    decision += 2LL * minor;
    if (x_major)
      p.x += sx;
    else
      p.y += sy;
    out.push_back(p);
  }
  return out;
}

std::vector<Trajectory> build_trajectories(const std::map<PointKey, GridPoint>& quantized,
                                           int word_count, int slice_count) {
  std::vector<Trajectory> out(static_cast<std::size_t>(std::max(word_count, 0)));
  for (int w = 0; w < word_count; ++w) out[static_cast<std::size_t>(w)].word_index = w;

  for (const auto& [key, point] : quantized) {
    if (key.word_index < 0 || key.word_index >= word_count || key.slice_index < 0 ||
        key.slice_index >= slice_count)
      throw Error(Errc::KeyMismatch, "quantized key outside the query grid");
    // std::map order is word-major then slice, so keyframes arrive sorted.
    out[static_cast<std::size_t>(key.word_index)].keyframes.push_back({key.slice_index, point});
  }

  for (auto& traj : out) {
    for (std::size_t j = 0; j < traj.keyframes.size(); ++j) {
      const GridPoint& kp = traj.keyframes[j].point;
      if (j == 0) {
        traj.frames.push_back(kp);
      } else {
        auto seg = bresenham(traj.keyframes[j - 1].point, kp);
        traj.frames.insert(traj.frames.end(), seg.begin() + 1, seg.end());
      }
      traj.segment_offsets.push_back(traj.frames.size() - 1);
    }
  }
  return out;
}

}  // namespace chronolex
