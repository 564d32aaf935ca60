#include "margin_guard/partition.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "margin_guard/errors.hpp"

namespace margin_guard {

namespace {

std::size_t choose2(std::size_t a) { return a < 2 ? 0 : a * (a - 1) / 2; }

}  // namespace

Partition::Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  if (n_ == 0) {
    throw InputError("partition: empty ground set");
  }
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n_, kUnset);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) {
      throw InputError("partition: empty block");
    }
    for (std::size_t i : blocks_[b]) {
      if (i >= n_) {
        throw InputError("partition: index " + std::to_string(i + 1) + " outside [1, " +
                         std::to_string(n_) + "]");
      }
      if (owner[i] != kUnset) {
        throw InputError("partition: index " + std::to_string(i + 1) + " appears twice");
      }
      owner[i] = b;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (owner[i] == kUnset) {
      throw InputError("partition: index " + std::to_string(i + 1) + " is not covered");
    }
  }
  for (auto& block : blocks_) {
    std::sort(block.begin(), block.end());
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  block_of_.resize(n_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t i : blocks_[b]) {
      block_of_[i] = b;
    }
  }
}

Partition Partition::from_block_ids(std::span<const std::size_t> block_ids) {
  // First-occurrence order is already canonical: blocks are discovered in
  // order of their smallest element.
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < block_ids.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(block_ids[i], blocks.size());
    if (inserted) {
      blocks.emplace_back();
    }
    blocks[it->second].push_back(i);
  }
  return Partition(block_ids.size(), std::move(blocks));
}

PairRelation::PairRelation(const Partition& p) : n_(p.size()), same_(choose2(n_)) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      same_[k++] = p.same_block(i, j);
    }
  }
}

PairRelation::PairRelation(std::size_t n, std::vector<bool> indicators)
    : n_(n), same_(std::move(indicators)) {
  if (n_ < 2) {
    throw InputError("pair relation: need n >= 2");
  }
  if (same_.size() != choose2(n_)) {
    throw InputError("pair relation: expected " + std::to_string(choose2(n_)) +
                     " indicators, got " + std::to_string(same_.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i || !same_block(i, j)) continue;
      for (std::size_t k = 0; k < n_; ++k) {
        if (k != i && k != j && same_block(j, k) && !same_block(i, k)) {
          throw InputError("pair relation: not transitive at (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
        }
      }
    }
  }
}

std::size_t PairRelation::pair_index(std::size_t i, std::size_t j) const noexcept {
  if (i > j) std::swap(i, j);
  // Pairs (0,1..n-1), (1,2..n-1), ... laid out consecutively.
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

bool PairRelation::same_block(std::size_t i, std::size_t j) const {
  if (i == j) return true;
  return same_[pair_index(i, j)];
}

Partition PairRelation::to_partition() const {
  std::vector<std::size_t> ids(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    ids[i] = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (same_block(j, i)) {
        ids[i] = ids[j];
        break;
      }
    }
  }
  return Partition::from_block_ids(ids);
}

Partition induced_partition(const Assignment& assignment) {
  if (assignment.size() < 2) {
    throw InputError("induced partition: need at least 2 labels");
  }
  return Partition::from_block_ids(assignment.labels);
}

std::size_t disagreeing_pairs(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) {
    throw InputError("partition distance: ground sets differ (" + std::to_string(p.size()) +
                     " vs " + std::to_string(q.size()) + ")");
  }
  const auto& bp = p.block_ids();
  const auto& bq = q.block_ids();
  std::size_t count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if ((bp[i] == bp[j]) != (bq[i] == bq[j])) {
        ++count;
      }
    }
  }
  return count;
}

double partition_distance(const Partition& p, const Partition& q) {
  if (p.size() < 2) {
    throw InputError("partition distance: need n >= 2");
  }
  const std::size_t diff = disagreeing_pairs(p, q);
  return static_cast<double>(diff) / static_cast<double>(choose2(p.size()));
}

std::size_t disagreeing_pairs_by_contingency(std::span<const std::size_t> tags_p,
                                             std::span<const std::size_t> tags_q) {
  if (tags_p.size() != tags_q.size()) {
    throw InputError("partition distance: ground sets differ");
  }
  std::map<std::size_t, std::size_t> size_p;
  std::map<std::size_t, std::size_t> size_q;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> overlap;
  for (std::size_t i = 0; i < tags_p.size(); ++i) {
    ++size_p[tags_p[i]];
    ++size_q[tags_q[i]];
    ++overlap[{tags_p[i], tags_q[i]}];
  }
  std::size_t together_p = 0;
  std::size_t together_q = 0;
  std::size_t together_both = 0;
  for (const auto& [_, a] : size_p) together_p += choose2(a);
  for (const auto& [_, b] : size_q) together_q += choose2(b);
  for (const auto& [_, c] : overlap) together_both += choose2(c);
  return together_p + together_q - 2 * together_both;
}

std::size_t disagreeing_pairs_by_contingency(std::span<const std::size_t> labels_p,
                                             std::span<const std::size_t> labels_q,
                                             std::size_t label_count) {
  if (labels_p.size() != labels_q.size()) {
    throw InputError("partition distance: ground sets differ");
  }
  std::vector<std::size_t> size_p(label_count, 0);
  std::vector<std::size_t> size_q(label_count, 0);
  std::vector<std::size_t> overlap(label_count * label_count, 0);
  for (std::size_t i = 0; i < labels_p.size(); ++i) {
    const std::size_t a = labels_p[i];
    const std::size_t b = labels_q[i];
    if (a >= label_count || b >= label_count) {
      throw InputError("partition distance: label out of range");
    }
    ++size_p[a];
    ++size_q[b];
    ++overlap[a * label_count + b];
  }
  std::size_t together = 0;
  for (std::size_t a = 0; a < label_count; ++a) {
    together += choose2(size_p[a]) + choose2(size_q[a]);
  }
  std::size_t together_both = 0;
  for (std::size_t c : overlap) together_both += choose2(c);
  return together - 2 * together_both;
}

double switched_index_distance_bound(std::size_t m, std::size_t n) {
  if (n < 2) {
    throw InputError("distance bound: need n >= 2");
  }
  if (m > n) {
    throw InputError("distance bound: m = " + std::to_string(m) + " exceeds n = " +
                     std::to_string(n));
  }
  return std::min(1.0, 2.0 * static_cast<double>(m) / static_cast<double>(n - 1));
}

}  // namespace margin_guard
