#include "chronolex/mds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "chronolex/error.hpp"

namespace chronolex {

DistanceMatrix distance_matrix(std::span<const LabeledPoint> points) {
  if (points.empty()) throw Error(Errc::Empty, "distance matrix over zero points");
  const std::size_t len = points.front().vector.size();
  for (const auto& p : points)
    if (p.vector.size() != len)
      throw Error(Errc::DimensionMismatch, "point vectors have differing lengths " +
                                               std::to_string(len) + " and " +
                                               std::to_string(p.vector.size()));

  const auto m = static_cast<Eigen::Index>(points.size());
  DistanceMatrix a;
  a.keys.reserve(points.size());
  for (const auto& p : points) a.keys.push_back(p.key);
  a.values = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& vi = points[static_cast<std::size_t>(i)].vector;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const auto& vj = points[static_cast<std::size_t>(j)].vector;
      double sq = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const double diff = vi[k] - vj[k];
        sq += diff * diff;
      }
      const double d = std::sqrt(sq);
      a.values(i, j) = d;
      a.values(j, i) = d;
    }
  }
  return a;
}

void write_distance_tsv(std::ostream& out, const DistanceMatrix& a,
                        std::span<const std::string> word_labels) {
  auto label = [&](const PointKey& k) {
    std::string w = k.word_index >= 0 && static_cast<std::size_t>(k.word_index) < word_labels.size()
                        ? word_labels[static_cast<std::size_t>(k.word_index)]
                        : std::to_string(k.word_index);
    return w + "@" + std::to_string(k.slice_index);
  };
  out << "key";
  for (const auto& k : a.keys) out << '\t' << label(k);
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < a.size(); ++i) {
    out << label(a.keys[i]);
    for (std::size_t j = 0; j < a.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out << '\t' << buf;
    }
    out << '\n';
  }
}

std::optional<Point2> ProjectionResult::coord(const PointKey& key) const {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == key) {
      const auto r = static_cast<Eigen::Index>(i);
      return Point2{coords.cols() > 0 ? coords(r, 0) : 0.0, coords.cols() > 1 ? coords(r, 1) : 0.0};
    }
  }
  return std::nullopt;
}

std::map<PointKey, Point2> ProjectionResult::planar_coords() const {
  std::map<PointKey, Point2> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out.emplace(keys[i], Point2{coords.cols() > 0 ? coords(r, 0) : 0.0,
                                coords.cols() > 1 ? coords(r, 1) : 0.0});
  }
  return out;
}

ProjectionResult classical_mds(const DistanceMatrix& a, int target_dim) {
  if (a.size() == 0) throw Error(Errc::Empty, "classical MDS over zero points");
  if (target_dim < 1) throw Error(Errc::InvalidArgument, "target dimension must be positive");
  const auto m = static_cast<Eigen::Index>(a.size());
  if (a.values.rows() != m || a.values.cols() != m)
    throw Error(Errc::DimensionMismatch, "distance matrix shape does not match its keys");

  const Eigen::MatrixXd sq = a.values.cwiseProduct(a.values);
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const double grand_mean = row_mean.mean();

  // B = -1/2 J A^2 J, written out elementwise and mirrored for exact symmetry.
  Eigen::MatrixXd b(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = j; i < m; ++i) {
      const double v = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand_mean);
      b(i, j) = v;
      b(j, i) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::NumericalFailure, "eigensolver did not converge");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  ProjectionResult out;
  out.keys = a.keys;
  out.max_eigenvalue = evals(m - 1);
  out.min_eigenvalue = evals(0);
  out.coords = Eigen::MatrixXd::Zero(m, target_dim);

  // Eigenvalues within rounding of zero relative to the spectrum are treated
  // as zero so that degenerate configurations come out exactly flat.
  const double scale = std::max(std::abs(evals(0)), std::abs(evals(m - 1)));
  const double rank_tol = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * scale;

  for (int c = 0; c < target_dim; ++c) {
    const Eigen::Index idx = m - 1 - c;
    if (idx < 0) break;
    const double lambda = evals(idx);
    out.eigenvalues.push_back(lambda);
    if (!(lambda > rank_tol)) continue;

    Eigen::VectorXd v = evecs.col(idx);
    const double vmax = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(v(i)) > 1e-9 * vmax) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.coords.col(c) = v * std::sqrt(lambda);
  }
  out.stress = evaluate_stress(out.keys, out.coords, a);
  return out;
}

namespace {

std::vector<Eigen::Index> align_keys(std::span<const PointKey> keys, const DistanceMatrix& a) {
  if (keys.size() != a.size())
    throw Error(Errc::KeyMismatch, "coordinate and distance key counts differ");
  std::map<PointKey, Eigen::Index> pos;
  for (std::size_t i = 0; i < a.keys.size(); ++i)
    pos.emplace(a.keys[i], static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> map(keys.size());
  std::vector<bool> used(keys.size(), false);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto it = pos.find(keys[i]);
    if (it == pos.end() || used[static_cast<std::size_t>(it->second)])
      throw Error(Errc::KeyMismatch, "coordinate keys do not match distance matrix keys");
    used[static_cast<std::size_t>(it->second)] = true;
    map[i] = it->second;
  }
  return map;
}

}  // namespace

double evaluate_stress_unordered(std::span<const PointKey> keys, const Eigen::MatrixXd& coords,
                                 const DistanceMatrix& a) {
  const auto map = align_keys(keys, a);
  if (coords.rows() != static_cast<Eigen::Index>(keys.size()))
    throw Error(Errc::KeyMismatch, "coordinate rows do not match key count");
  double total = 0.0;
  const auto m = static_cast<Eigen::Index>(keys.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d = (coords.row(i) - coords.row(j)).norm();
      const double r = d - a.values(map[static_cast<std::size_t>(i)],
                                    map[static_cast<std::size_t>(j)]);
      total += r * r;
    }
  }
  return total;
}

double evaluate_stress(std::span<const PointKey> keys, const Eigen::MatrixXd& coords,
                       const DistanceMatrix& a) {
  return 2.0 * evaluate_stress_unordered(keys, coords, a);
}

}  // namespace chronolex
