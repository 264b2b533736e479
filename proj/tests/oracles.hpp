// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "chronolex/corpus.hpp"
#include "chronolex/embedding_store.hpp"
#include "chronolex/temporal.hpp"
#include "chronolex/trajectory.hpp"

namespace oracle {

using Key = std::pair<int, std::string>;

struct TwoPassResult {
  std::map<Key, std::uint64_t> totals;
  std::map<Key, std::vector<double>> vectors;
  std::map<Key, double> weight_sums;
};

/// Context combination written out positionally: the middle word is skipped,
/// every other position is looked up and either added or appended.
inline std::vector<double> context_of(const chronolex::NgramRecord& r,
                                      const chronolex::StaticEmbeddingTable& table,
                                      chronolex::ContextOperator op) {
  const std::size_t n = r.words.size();
  const std::size_t d = table.dim();
  std::vector<double> out;
  if (op == chronolex::ContextOperator::sum) out.assign(d, 0.0);
  for (std::size_t pos = 1; pos <= n; ++pos) {
    if (pos == (n + 1) / 2) continue;
    auto v = table.lookup(r.words[pos - 1]);
    for (std::size_t j = 0; j < d; ++j) {
      if (op == chronolex::ContextOperator::sum)
        out[j] += v[j];
      else
        out.push_back(v[j]);
    }
  }
  return out;
}

/// Normalizers first, then the count-weighted sum with explicit c/N weights.
inline TwoPassResult two_pass_temporal(const std::vector<chronolex::SlicedRecord>& records,
                                       const chronolex::StaticEmbeddingTable& table,
                                       chronolex::ContextOperator op) {
  TwoPassResult res;
  for (const auto& sr : records) {
    const auto& r = sr.record;
    res.totals[{sr.slice, r.words[(r.words.size() + 1) / 2 - 1]}] += r.count;
  }
  for (const auto& sr : records) {
    const auto& r = sr.record;
    Key key{sr.slice, r.words[(r.words.size() + 1) / 2 - 1]};
    const double weight = static_cast<double>(r.count) / static_cast<double>(res.totals[key]);
    auto ctx = context_of(r, table, op);
    auto& acc = res.vectors[key];
    if (acc.empty()) acc.assign(ctx.size(), 0.0);
    for (std::size_t j = 0; j < ctx.size(); ++j) acc[j] += weight * ctx[j];
    res.weight_sums[key] += weight;
  }
  return res;
}

/// Rasterization by enumeration: at each major-axis step choose the minor
/// offset whose scaled distance to the ideal line is smallest, preferring the
/// smaller offset on a tie.
inline std::vector<chronolex::GridPoint> brute_force_line(chronolex::GridPoint a,
                                                          chronolex::GridPoint b) {
  const long dx = b.x - a.x, dy = b.y - a.y;
  const bool x_major = std::labs(dx) >= std::labs(dy);
  const long major = x_major ? std::labs(dx) : std::labs(dy);
  const long minor = x_major ? std::labs(dy) : std::labs(dx);
  const int smaj = (x_major ? dx : dy) >= 0 ? 1 : -1;
  const int smin = (x_major ? dy : dx) >= 0 ? 1 : -1;
  std::vector<chronolex::GridPoint> out;
  for (long i = 0; i <= major; ++i) {
    long best = 0;
    long best_err = -1;
    for (long j = 0; j <= minor; ++j) {
      const long err = std::labs(j * major - i * minor);
      if (best_err < 0 || err < best_err) {
        best = j;
        best_err = err;
      }
    }
    const int mj = static_cast<int>(smaj * i);
    const int mn = static_cast<int>(smin * best);
    out.push_back(x_major ? chronolex::GridPoint{a.x + mj, a.y + mn}
                          : chronolex::GridPoint{a.x + mn, a.y + mj});
  }
  return out;
}

/// Explicit J * A^2 * J / -2 with J = I - 11^T/m.
inline Eigen::MatrixXd double_center(const Eigen::MatrixXd& a) {
  const auto m = a.rows();
  const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(m, m) -
                            Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  return -0.5 * j * a.array().square().matrix() * j;
}

/// Largest eigenvalue by power iteration (matrix assumed PSD).
inline double power_iteration_top(const Eigen::MatrixXd& b, int iters = 5000) {
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(b.rows(), 1.0, 2.0);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd w = b * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    lambda = v.dot(b * v);
  }
  return lambda;
}

/// RMSE after the best orthogonal (rotation or reflection) + translation fit
/// of `x` onto `y`. Rows are points.
inline double procrustes_rmse(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xc.transpose() * yc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::MatrixXd diff = xc * r - yc;
  return std::sqrt(diff.squaredNorm() / static_cast<double>(x.rows()));
}

inline double diameter(const Eigen::MatrixXd& pts) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j)
      best = std::max(best, (pts.row(i) - pts.row(j)).norm());
  return best;
}

/// Random table of `vocab` words ("w0".."w{vocab-1}") plus a few OOV words
/// that corpora may use but the table lacks.
inline chronolex::StaticEmbeddingTable random_table(std::mt19937_64& rng, int vocab, int dim,
                                                    bool unknown_nonzero) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<std::string> words;
  std::vector<std::vector<float>> vecs;
  for (int i = 0; i < vocab; ++i) {
    words.push_back("w" + std::to_string(i));
    std::vector<float> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = u(rng);
    vecs.push_back(std::move(v));
  }
  std::vector<float> unk(static_cast<std::size_t>(dim), 0.0f);
  if (unknown_nonzero)
    for (auto& x : unk) x = u(rng);
  return chronolex::StaticEmbeddingTable(static_cast<std::size_t>(dim), std::move(words),
                                         std::move(vecs), std::move(unk));
}

/// Random corpus over words w0..w{vocab+4} (the last 5 are out of vocabulary).
inline std::vector<chronolex::SlicedRecord> random_corpus(std::mt19937_64& rng, int records,
                                                          int vocab,
                                                          const chronolex::TimeSliceConfig& cfg,
                                                          int n = 5) {
  std::uniform_int_distribution<int> word(0, vocab + 4);
  // Few middle words so keys collect many records.
  std::uniform_int_distribution<int> middle(0, std::max(1, vocab / 10));
  std::uniform_int_distribution<int> year(cfg.start_year, cfg.end_year);
  std::uniform_int_distribution<std::uint64_t> count(1, 1000);
  std::vector<chronolex::SlicedRecord> out;
  out.reserve(static_cast<std::size_t>(records));
  for (int i = 0; i < records; ++i) {
    chronolex::SlicedRecord sr;
    for (int p = 0; p < n; ++p)
      sr.record.words.push_back("w" + std::to_string(p == n / 2 ? middle(rng) : word(rng)));
    sr.record.year = year(rng);
    sr.record.count = count(rng);
    sr.slice = (sr.record.year - cfg.start_year) / cfg.width_years;
    out.push_back(std::move(sr));
  }
  return out;
}

}  // namespace oracle
