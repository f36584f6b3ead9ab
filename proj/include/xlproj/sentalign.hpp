#ifndef XLPROJ_SENTALIGN_HPP_
#define XLPROJ_SENTALIGN_HPP_

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "xlproj/error.hpp"

// Monotone sentence alignment over sentence embeddings. Inputs are matrices
// with one embedding per row.
namespace xlproj {

struct AlignParams {
  int max_bead = 2;
  double null_penalty = 0.3;
  double size_penalty = 0.05;  // per sentence beyond a 1-1 bead

  void validate() const {
    if (max_bead < 1) throw Error(ErrorCode::kConfig, "align.max_bead must be >= 1");
    if (null_penalty < 0 || size_penalty < 0) {
      throw Error(ErrorCode::kConfig, "alignment penalties must be >= 0");
    }
  }
};

// Half-open index range.
struct Range {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool operator==(const Range&) const = default;
};

struct Bead {
  Range src;
  Range tgt;
  double score = 0;

  bool operator==(const Bead&) const = default;
};

namespace detail {

// Unit-normalized sum of the rows; zero when the rows cancel or are absent.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> normalized_sum(
    const Eigen::MatrixBase<Derived>& rows) {
  Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> sum = rows.colwise().sum();
  auto norm = sum.norm();
  if (norm > 0) sum /= norm;
  return sum;
}

}  // namespace detail

// -null_penalty for a bead with an empty side; otherwise the cosine of the two
// summed sides minus size_penalty * (|src| + |tgt| - 2).
template <typename DerivedS, typename DerivedT>
double bead_score(const Eigen::MatrixBase<DerivedS>& src_vecs,
                  const Eigen::MatrixBase<DerivedT>& tgt_vecs, const AlignParams& params = {}) {
  if (src_vecs.rows() == 0 && tgt_vecs.rows() == 0) {
    throw Error(ErrorCode::kInvalidAnnotation, "bead with two empty sides");
  }
  if (src_vecs.rows() == 0 || tgt_vecs.rows() == 0) return -params.null_penalty;
  if (src_vecs.cols() != tgt_vecs.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sentence vectors differ in dimension");
  }
  auto extra = static_cast<double>(src_vecs.rows() + tgt_vecs.rows() - 2);
  double cosine = static_cast<double>(
      detail::normalized_sum(src_vecs).dot(detail::normalized_sum(tgt_vecs)));
  return cosine - params.size_penalty * extra;
}

// Highest-scoring monotone partition of both sentence sequences into beads of
// at most max_bead sentences per side, null beads holding exactly one
// sentence. Ties prefer fewer beads, then the lexicographically earliest bead
// sequence.
template <typename DerivedS, typename DerivedT>
std::vector<Bead> align_sentences(const Eigen::MatrixBase<DerivedS>& src_vecs,
                                  const Eigen::MatrixBase<DerivedT>& tgt_vecs,
                                  const AlignParams& params = {}) {
  params.validate();
  const auto n = static_cast<size_t>(src_vecs.rows());
  const auto m = static_cast<size_t>(tgt_vecs.rows());
  if (n > 0 && m > 0 && src_vecs.cols() != tgt_vecs.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "sentence vectors differ in dimension");
  }
  const auto k = static_cast<size_t>(params.max_bead);

  // Normalized window sums: src_win[a - 1][i] covers rows [i, i + a).
  using RowVec = Eigen::Matrix<typename DerivedS::Scalar, 1, Eigen::Dynamic>;
  auto windows = [k](const auto& vecs, size_t len) {
    std::vector<std::vector<RowVec>> win(k);
    for (size_t a = 1; a <= k; ++a) {
      for (size_t i = 0; i + a <= len; ++i) {
        win[a - 1].push_back(detail::normalized_sum(
            vecs.middleRows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a))));
      }
    }
    return win;
  };
  const auto src_win = windows(src_vecs, n);
  const auto tgt_win = windows(tgt_vecs, m);

  struct Cell {
    double score = -std::numeric_limits<double>::infinity();
    double bead = 0;
    size_t beads = 0;
    size_t a = 0;
    size_t b = 0;
  };
  // best[i][j]: optimal alignment of the suffixes starting at (i, j). Solving
  // suffixes lets the lexicographic tie-break be decided at the first bead.
  std::vector<std::vector<Cell>> best(n + 1, std::vector<Cell>(m + 1));
  best[n][m] = {0.0, 0.0, 0, 0, 0};
  for (size_t i = n + 1; i-- > 0;) {
    for (size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) continue;
      Cell& cell = best[i][j];
      // Shapes in lexicographic order of the resulting bead.
      for (size_t a = 0; a <= k; ++a) {
        for (size_t b = 0; b <= k; ++b) {
          if ((a == 0 && b != 1) || (b == 0 && a != 1)) continue;
          if (i + a > n || j + b > m) continue;
          const Cell& rest = best[i + a][j + b];
          if (rest.score == -std::numeric_limits<double>::infinity()) continue;
          double s;
          if (a == 0 || b == 0) {
            s = -params.null_penalty;
          } else {
            s = static_cast<double>(src_win[a - 1][i].dot(tgt_win[b - 1][j])) -
                params.size_penalty * static_cast<double>(a + b - 2);
          }
          double total = s + rest.score;
          if (total > cell.score || (total == cell.score && rest.beads + 1 < cell.beads)) {
            cell = {total, s, rest.beads + 1, a, b};
          }
        }
      }
    }
  }

  std::vector<Bead> beads;
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    const Cell& cell = best[i][j];
    beads.push_back({{i, i + cell.a}, {j, j + cell.b}, cell.bead});
    i += cell.a;
    j += cell.b;
  }
  return beads;
}

// Sum of bead scores.
inline double total_score(const std::vector<Bead>& beads) {
  double total = 0;
  for (const auto& b : beads) total += b.score;
  return total;
}

}  // namespace xlproj

#endif  // XLPROJ_SENTALIGN_HPP_
