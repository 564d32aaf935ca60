#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "margin_guard/geometry.hpp"

namespace margin_guard {

/// A partition of the index set {0, ..., n-1}.
///
/// Always held in canonical form: elements ascending within each block and
/// blocks ordered by their smallest element. Equality of partitions is
/// therefore equality of the stored blocks. Serialized forms are 1-based.
class Partition {
 public:
  /// Validates that `blocks` are nonempty, disjoint, and cover [0, n).
  Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks);

  /// Groups indices with equal `block_ids` (any integer tags, e.g. labels).
  static Partition from_block_ids(std::span<const std::size_t> block_ids);

  std::size_t size() const noexcept { return n_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }

  /// Dense block id per index, numbered in canonical block order.
  const std::vector<std::size_t>& block_ids() const noexcept { return block_of_; }

  bool same_block(std::size_t i, std::size_t j) const noexcept {
    return block_of_[i] == block_of_[j];
  }

  bool operator==(const Partition& other) const { return n_ == other.n_ && blocks_ == other.blocks_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

/// Same-block indicators over the C(n,2) unordered pairs (i < j), stored in
/// lexicographic pair order.
class PairRelation {
 public:
  explicit PairRelation(const Partition& p);

  /// Throws InputError if the size is not C(n,2) or the relation is not
  /// transitive.
  PairRelation(std::size_t n, std::vector<bool> indicators);

  std::size_t size() const noexcept { return n_; }
  bool same_block(std::size_t i, std::size_t j) const;
  const std::vector<bool>& indicators() const noexcept { return same_; }

  Partition to_partition() const;

 private:
  std::size_t pair_index(std::size_t i, std::size_t j) const noexcept;

  std::size_t n_ = 0;
  std::vector<bool> same_;
};

/// Partition of the point indices induced by shared labels.
Partition induced_partition(const Assignment& assignment);

/// Fraction of the C(n,2) pairs on which the two partitions disagree about
/// co-membership. Direct O(n^2) pair enumeration.
double partition_distance(const Partition& p, const Partition& q);

/// Number of disagreeing pairs (the numerator of partition_distance).
std::size_t disagreeing_pairs(const Partition& p, const Partition& q);

/// Same count from the block-overlap contingency table, O(n + blocks):
/// sum_P C(a,2) + sum_Q C(b,2) - 2 sum C(n_ab,2). Accepts any integer tags
/// (e.g. raw center labels) so callers can skip building partitions.
std::size_t disagreeing_pairs_by_contingency(std::span<const std::size_t> tags_p,
                                             std::span<const std::size_t> tags_q);

/// Dense variant for center labels known to lie in [0, label_count).
std::size_t disagreeing_pairs_by_contingency(std::span<const std::size_t> labels_p,
                                             std::span<const std::size_t> labels_q,
                                             std::size_t label_count);

/// min(1, 2m/(n-1)): worst-case distance when at most m indices switch labels.
double switched_index_distance_bound(std::size_t m, std::size_t n);

}  // namespace margin_guard
