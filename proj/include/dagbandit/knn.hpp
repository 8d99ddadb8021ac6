#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dagbandit/dataset.hpp"
#include "dagbandit/oracle.hpp"
#include "dagbandit/state_key.hpp"

namespace dagbandit {

/// Neighbors are ordered by (squared distance, example index).
struct Neighbor {
  double dist2;
  std::uint32_t index;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Dataset columns restricted to a feature subset, packed row-major.
class ProjectedPoints {
 public:
  ProjectedPoints(const Dataset& data, std::span<const Feature> features);

  std::size_t size() const { return rows_; }
  std::size_t dims() const { return dims_; }
  const double* row(std::size_t i) const { return coords_.data() + i * dims_; }
  double dist2(std::size_t a, std::size_t b) const;

 private:
  std::size_t rows_;
  std::size_t dims_;
  std::vector<double> coords_;
};

/// k nearest examples to `query` (itself excluded) by linear scan.
std::vector<Neighbor> brute_force_neighbors(const ProjectedPoints& points, std::size_t query, std::size_t k);

/// Exact k-d tree over a ProjectedPoints. Returns the same neighbor lists as
/// brute_force_neighbors, including the index tie-break.
class KdTree {
 public:
  explicit KdTree(const ProjectedPoints& points, std::size_t leaf_size = 32);

  std::vector<Neighbor> query(std::size_t query, std::size_t k) const;

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const double* q, std::size_t self, std::size_t k,
              std::vector<Neighbor>& heap) const;
  double box_dist2(std::int32_t node, const double* q) const;

  const ProjectedPoints* points_;
  std::size_t leaf_size_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::vector<double> boxes_;  // per node: (lo, hi) for each dimension
};

/// Spatial index is used up to this many selected features.
inline constexpr std::size_t kMaxIndexedDims = 12;

/// s_F(x) for each query: positive labels among its k nearest neighbors in
/// the full dataset under the Euclidean metric on `features`.
std::vector<int> neighbor_scores(const Dataset& data, std::span<const Feature> features,
                                 std::span<const std::uint32_t> queries, std::size_t k);

/// |{(x,x'): s(x) < s(x'), y < y'}| / |{(x,x'): y < y'}|. Ties earn nothing.
double strict_pair_auc(std::span<const int> scores, std::span<const std::uint8_t> labels);

/// Draws `m` distinct example indices containing both classes. m == rows
/// returns every index in order without consuming randomness.
std::vector<std::uint32_t> draw_subsample(const Dataset& data, std::size_t m, Rng& rng);

/// AUC of the k-NN positive-count scorer on a size-m subsample.
double knn_auc(std::span<const Feature> features, std::size_t m, const Dataset& data, std::size_t k, Rng& rng);

}  // namespace dagbandit
