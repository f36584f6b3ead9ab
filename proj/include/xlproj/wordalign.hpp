#ifndef XLPROJ_WORDALIGN_HPP_
#define XLPROJ_WORDALIGN_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xlproj/error.hpp"

// Bidirectional nearest-neighbour word alignment: every source token links to
// its most similar target token and vice versa; the edge set is the union.
namespace xlproj {

enum class Direction { kForward, kBackward, kBoth };

std::string_view direction_name(Direction d);

struct Edge {
  size_t src = 0;
  size_t tgt = 0;
  double score = 0;
  Direction direction = Direction::kBoth;

  bool operator==(const Edge&) const = default;
};

struct WordAlignParams {
  // Edges scoring below this are dropped. The default keeps every edge.
  double min_score = -1.0;
};

// Edges sorted by (src, tgt).
struct EdgeSet {
  std::vector<Edge> edges;
};

// Row-wise cosine similarities, clamped to [-1, 1]; zero rows score 0.
template <typename DerivedS, typename DerivedT>
Eigen::Matrix<typename DerivedS::Scalar, Eigen::Dynamic, Eigen::Dynamic> cosine_matrix(
    const Eigen::MatrixBase<DerivedS>& src, const Eigen::MatrixBase<DerivedT>& tgt) {
  using Scalar = typename DerivedS::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  auto normalize = [](Dense m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Scalar norm = m.row(r).norm();
      if (norm > 0) m.row(r) /= norm;
    }
    return m;
  };
  Dense sim = normalize(src) * normalize(tgt).transpose();
  return sim.cwiseMax(Scalar(-1)).cwiseMin(Scalar(1));
}

// Equal similarities are resolved by the smaller relative-position distance
// |i/|S| - j/|T||, then by the smaller index on the searched side.
template <typename DerivedS, typename DerivedT>
EdgeSet align_words(const Eigen::MatrixBase<DerivedS>& src_vecs,
                    const Eigen::MatrixBase<DerivedT>& tgt_vecs,
                    const WordAlignParams& params = {}) {
  EdgeSet out;
  const auto n = static_cast<size_t>(src_vecs.rows());
  const auto m = static_cast<size_t>(tgt_vecs.rows());
  if (n == 0 || m == 0) return out;
  if (src_vecs.cols() != tgt_vecs.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "token vectors differ in dimension");
  }
  const auto sim = cosine_matrix(src_vecs, tgt_vecs);

  // |i/n - j/m| compared exactly as |i*m - j*n|.
  auto distance = [n, m](size_t i, size_t j) {
    auto d = static_cast<long long>(i * m) - static_cast<long long>(j * n);
    return d < 0 ? -d : d;
  };

  std::vector<size_t> forward(n);
  for (size_t i = 0; i < n; ++i) {
    size_t best = 0;
    for (size_t j = 1; j < m; ++j) {
      auto s = sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      auto b = sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(best));
      if (s > b || (s == b && distance(i, j) < distance(i, best))) best = j;
    }
    forward[i] = best;
  }
  std::vector<size_t> backward(m);
  for (size_t j = 0; j < m; ++j) {
    size_t best = 0;
    for (size_t i = 1; i < n; ++i) {
      auto s = sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      auto b = sim(static_cast<Eigen::Index>(best), static_cast<Eigen::Index>(j));
      if (s > b || (s == b && distance(i, j) < distance(best, j))) best = i;
    }
    backward[j] = best;
  }

  for (size_t i = 0; i < n; ++i) {
    bool both = backward[forward[i]] == i;
    out.edges.push_back({i, forward[i], 0.0, both ? Direction::kBoth : Direction::kForward});
  }
  for (size_t j = 0; j < m; ++j) {
    if (forward[backward[j]] != j) out.edges.push_back({backward[j], j, 0.0, Direction::kBackward});
  }
  for (auto& e : out.edges) {
    e.score = static_cast<double>(
        sim(static_cast<Eigen::Index>(e.src), static_cast<Eigen::Index>(e.tgt)));
  }
  std::erase_if(out.edges, [&](const Edge& e) { return e.score < params.min_score; });
  std::sort(out.edges.begin(), out.edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.tgt < b.tgt;
  });
  return out;
}

}  // namespace xlproj

#endif  // XLPROJ_WORDALIGN_HPP_
