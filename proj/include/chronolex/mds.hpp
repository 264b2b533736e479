#pragma once

#include <Eigen/Core>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace chronolex {

/// Identifies the point for query word `word_index` in slice `slice_index`.
/// Ordering is word-major, matching flat index word_index * |T| + slice_index.
struct PointKey {
  int word_index = 0;
  int slice_index = 0;

  friend auto operator<=>(const PointKey&, const PointKey&) = default;
};

struct LabeledPoint {
  PointKey key;
  std::vector<double> vector;
};

/// Symmetric matrix of pairwise Euclidean distances over the present points.
struct DistanceMatrix {
  std::vector<PointKey> keys;
  Eigen::MatrixXd values;

  std::size_t size() const noexcept { return keys.size(); }
};

/// A = ||v_a - v_b||_2 for every pair. Throws Errc::Empty for no points and
/// Errc::DimensionMismatch when vector lengths differ.
DistanceMatrix distance_matrix(std::span<const LabeledPoint> points);

/// Writes A as TSV: a header row of keys, then one row per key.
void write_distance_tsv(std::ostream& out, const DistanceMatrix& a,
                        std::span<const std::string> word_labels);

using Point2 = std::array<double, 2>;

struct ProjectionResult {
  std::vector<PointKey> keys;
  /// One row per key, target_dim columns.
  Eigen::MatrixXd coords;
  /// Leading target_dim eigenvalues of the double-centered matrix, descending,
  /// before clamping.
  std::vector<double> eigenvalues;
  /// Largest and smallest eigenvalue of the double-centered matrix before clamping.
  double max_eigenvalue = 0.0;
  double min_eigenvalue = 0.0;
  /// Query points without data, excluded from the projection.
  std::vector<PointKey> missing;
  /// Squared-residual stress summed over ordered pairs.
  double stress = 0.0;

  std::optional<Point2> coord(const PointKey& key) const;
  /// Key -> (x, y) view of a two-dimensional projection.
  std::map<PointKey, Point2> planar_coords() const;
};

/// Torgerson scaling: double-center the squared distances, keep the top
/// target_dim eigenpairs (negative eigenvalues clamped to zero) and scale the
/// eigenvectors by sqrt(eigenvalue). Each axis is oriented so its first
/// non-negligible loading is positive.
ProjectionResult classical_mds(const DistanceMatrix& a, int target_dim = 2);

/// Sum over ordered pairs (a != b) of (||x_a - x_b|| - A_ab)^2. `keys` must be
/// a permutation of a.keys (Errc::KeyMismatch otherwise).
double evaluate_stress(std::span<const PointKey> keys, const Eigen::MatrixXd& coords,
                       const DistanceMatrix& a);

/// Same sum over unordered pairs; exactly half of evaluate_stress.
double evaluate_stress_unordered(std::span<const PointKey> keys,
                                 const Eigen::MatrixXd& coords, const DistanceMatrix& a);

}  // namespace chronolex
