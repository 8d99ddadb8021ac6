#include "dagbandit/knn.hpp"

#include <algorithm>
#include <numeric>

#include "dagbandit/errors.hpp"

namespace dagbandit {

ProjectedPoints::ProjectedPoints(const Dataset& data, std::span<const Feature> features)
    : rows_(data.rows), dims_(features.size()), coords_(data.rows * features.size()) {
  for (Feature f : features) {
    if (f >= data.cols) throw InputError("feature index out of range");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t d = 0; d < dims_; ++d) coords_[r * dims_ + d] = data.at(r, features[d]);
  }
}

double ProjectedPoints::dist2(std::size_t a, std::size_t b) const {
  const double* pa = row(a);
  const double* pb = row(b);
  double sum = 0.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    const double diff = pa[d] - pb[d];
    sum += diff * diff;
  }
  return sum;
}

namespace {

// Keeps the k smallest neighbors in a max-heap (worst on top).
void offer(std::vector<Neighbor>& heap, std::size_t k, Neighbor candidate) {
  if (heap.size() < k) {
    heap.push_back(candidate);
    std::push_heap(heap.begin(), heap.end());
  } else if (candidate < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = candidate;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace

std::vector<Neighbor> brute_force_neighbors(const ProjectedPoints& points, std::size_t query, std::size_t k) {
  if (k >= points.size()) throw InputError("k must be smaller than the number of examples");
  std::vector<Neighbor> heap;
  heap.reserve(k);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == query) continue;
    offer(heap, k, {points.dist2(query, i), static_cast<std::uint32_t>(i)});
  }
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

KdTree::KdTree(const ProjectedPoints& points, std::size_t leaf_size)
    : points_(&points), leaf_size_(std::max<std::size_t>(leaf_size, 1)), order_(points.size()) {
  std::iota(order_.begin(), order_.end(), 0u);
  if (!order_.empty()) build(0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end});
  const std::size_t dims = points_->dims();
  const std::size_t box = boxes_.size();
  boxes_.resize(box + 2 * dims);

  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < dims; ++d) {
    double lo = points_->row(order_[begin])[d];
    double hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      const double v = points_->row(order_[i])[d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    boxes_[box + 2 * d] = lo;
    boxes_[box + 2 * d + 1] = hi;
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  if (end - begin <= leaf_size_ || dims == 0 || best_spread <= 0.0) return id;

  // Split on the dimension with the widest spread, at the median.
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_->row(a)[best_dim] < points_->row(b)[best_dim];
                   });
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::box_dist2(std::int32_t node_id, const double* q) const {
  const std::size_t dims = points_->dims();
  const double* box = boxes_.data() + static_cast<std::size_t>(node_id) * 2 * dims;
  double sum = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    const double lo = box[2 * d];
    const double hi = box[2 * d + 1];
    const double gap = q[d] < lo ? lo - q[d] : (q[d] > hi ? q[d] - hi : 0.0);
    sum += gap * gap;
  }
  return sum;
}

void KdTree::search(std::int32_t node_id, const double* q, std::size_t self, std::size_t k,
                    std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      if (idx == self) continue;
      offer(heap, k, {points_->dist2(self, idx), idx});
    }
    return;
  }
  const double dl = box_dist2(node.left, q);
  const double dr = box_dist2(node.right, q);
  const bool left_first = dl <= dr;
  const std::int32_t near = left_first ? node.left : node.right;
  const std::int32_t far = left_first ? node.right : node.left;
  // Equal distances are still explored: a tie may carry a smaller index.
  if (heap.size() < k || std::min(dl, dr) <= heap.front().dist2) search(near, q, self, k, heap);
  if (heap.size() < k || std::max(dl, dr) <= heap.front().dist2) search(far, q, self, k, heap);
}

std::vector<Neighbor> KdTree::query(std::size_t query, std::size_t k) const {
  if (k >= points_->size()) throw InputError("k must be smaller than the number of examples");
  std::vector<Neighbor> heap;
  heap.reserve(k + 1);
  if (!nodes_.empty()) search(0, points_->row(query), query, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

std::vector<int> neighbor_scores(const Dataset& data, std::span<const Feature> features,
                                 std::span<const std::uint32_t> queries, std::size_t k) {
  if (features.empty()) throw InputError("k-NN scoring needs at least one feature");
  if (k == 0 || k >= data.rows) throw InputError("k must lie in [1, n-1]");
  const ProjectedPoints points(data, features);
  std::vector<int> scores;
  scores.reserve(queries.size());
  auto count_positive = [&](const std::vector<Neighbor>& nbrs) {
    int s = 0;
    for (const auto& nb : nbrs) s += data.labels[nb.index];
    return s;
  };
  if (features.size() <= kMaxIndexedDims) {
    const KdTree tree(points);
    for (auto q : queries) scores.push_back(count_positive(tree.query(q, k)));
  } else {
    for (auto q : queries) scores.push_back(count_positive(brute_force_neighbors(points, q, k)));
  }
  return scores;
}

double strict_pair_auc(std::span<const int> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw InputError("score/label length mismatch");
  // Pair count via a sort on scores: each positive is concordant with every
  // negative holding a strictly smaller score.
  std::vector<std::pair<int, std::uint8_t>> items;
  items.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) items.emplace_back(scores[i], labels[i]);
  std::sort(items.begin(), items.end());

  std::uint64_t negatives_below = 0;
  std::uint64_t concordant = 0;
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::uint64_t group_neg = 0;
    std::uint64_t group_pos = 0;
    while (j < items.size() && items[j].first == items[i].first) {
      (items[j].second ? group_pos : group_neg) += 1;
      ++j;
    }
    concordant += group_pos * negatives_below;
    negatives_below += group_neg;
    n_pos += group_pos;
    n_neg += group_neg;
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) throw EvaluationError("AUC needs both classes");
  return static_cast<double>(concordant) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::vector<std::uint32_t> draw_subsample(const Dataset& data, std::size_t m, Rng& rng) {
  if (m < 2 || m > data.rows) throw InputError("subsample size must lie in [2, n]");
  std::vector<std::uint32_t> all(data.rows);
  std::iota(all.begin(), all.end(), 0u);
  if (m == data.rows) return all;

  auto has_both = [&](const std::vector<std::uint32_t>& idx) {
    std::size_t pos = 0;
    for (auto i : idx) pos += data.labels[i];
    return pos > 0 && pos < idx.size();
  };
  std::vector<std::uint32_t> picked;
  for (int attempt = 0; attempt < 10; ++attempt) {
    picked.clear();
    std::sample(all.begin(), all.end(), std::back_inserter(picked), m, rng);
    if (has_both(picked)) return picked;
  }

  // Stratified fallback: one example of each class, the rest uniform.
  std::vector<std::uint32_t> pos;
  std::vector<std::uint32_t> neg;
  for (auto i : all) (data.labels[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw EvaluationError("dataset has a single class");
  std::uniform_int_distribution<std::size_t> pick_pos(0, pos.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_neg(0, neg.size() - 1);
  const std::uint32_t p = pos[pick_pos(rng)];
  const std::uint32_t n = neg[pick_neg(rng)];
  std::vector<std::uint32_t> rest;
  for (auto i : all) {
    if (i != p && i != n) rest.push_back(i);
  }
  picked = {std::min(p, n), std::max(p, n)};
  std::sample(rest.begin(), rest.end(), std::back_inserter(picked), m - 2, rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

double knn_auc(std::span<const Feature> features, std::size_t m, const Dataset& data, std::size_t k, Rng& rng) {
  if (k == 0 || k >= data.rows) throw InputError("k must lie in [1, n-1]");
  if (data.positives() == 0 || data.positives() == data.rows) {
    throw EvaluationError("dataset has a single class");
  }
  const auto queries = draw_subsample(data, m, rng);
  const auto scores = neighbor_scores(data, features, queries, k);
  std::vector<std::uint8_t> labels;
  labels.reserve(queries.size());
  for (auto q : queries) labels.push_back(data.labels[q]);
  return strict_pair_auc(scores, labels);
}

}  // namespace dagbandit
