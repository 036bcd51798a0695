#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "mlbase/error.hpp"

namespace mlbase {

/// A subset of the label indices [0, q) of a fixed q-label space.
///
/// Backed by a packed bit vector so the set operations the evaluation
/// measures need (intersection/union/symmetric-difference cardinalities)
/// are popcounts over a handful of words. The empty set is a valid value:
/// some corpora contain unlabeled instances.
class label_set {
 public:
  label_set() = default;

  explicit label_set(std::size_t label_space)
      : q_(label_space), blocks_((label_space + 63) / 64, 0) {}

  label_set(std::size_t label_space, std::initializer_list<std::size_t> indices)
      : label_set(label_space) {
    for (std::size_t index : indices) insert(index);
  }

  /// q, the size of the label space this set lives in.
  std::size_t label_space() const noexcept { return q_; }

  bool contains(std::size_t index) const {
    check_index(index);
    return (blocks_[index / 64] >> (index % 64)) & 1u;
  }

  void insert(std::size_t index) {
    check_index(index);
    blocks_[index / 64] |= std::uint64_t{1} << (index % 64);
  }

  void erase(std::size_t index) {
    check_index(index);
    blocks_[index / 64] &= ~(std::uint64_t{1} << (index % 64));
  }

  /// Number of member labels.
  std::size_t count() const noexcept {
    std::size_t total = 0;
    for (std::uint64_t block : blocks_) total += static_cast<std::size_t>(std::popcount(block));
    return total;
  }

  bool empty() const noexcept { return count() == 0; }

  /// Member indices in ascending order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t index = 0; index < q_; ++index) {
      if ((blocks_[index / 64] >> (index % 64)) & 1u) out.push_back(index);
    }
    return out;
  }

  label_set complement() const {
    label_set flipped(q_);
    for (std::size_t block = 0; block < blocks_.size(); ++block) {
      flipped.blocks_[block] = ~blocks_[block];
    }
    flipped.mask_tail();
    return flipped;
  }

  friend std::size_t intersection_count(const label_set& a, const label_set& b) {
    check_same_space(a, b);
    std::size_t total = 0;
    for (std::size_t block = 0; block < a.blocks_.size(); ++block) {
      total += static_cast<std::size_t>(std::popcount(a.blocks_[block] & b.blocks_[block]));
    }
    return total;
  }

  friend std::size_t union_count(const label_set& a, const label_set& b) {
    check_same_space(a, b);
    std::size_t total = 0;
    for (std::size_t block = 0; block < a.blocks_.size(); ++block) {
      total += static_cast<std::size_t>(std::popcount(a.blocks_[block] | b.blocks_[block]));
    }
    return total;
  }

  friend std::size_t symmetric_difference_count(const label_set& a, const label_set& b) {
    check_same_space(a, b);
    std::size_t total = 0;
    for (std::size_t block = 0; block < a.blocks_.size(); ++block) {
      total += static_cast<std::size_t>(std::popcount(a.blocks_[block] ^ b.blocks_[block]));
    }
    return total;
  }

  friend bool operator==(const label_set&, const label_set&) = default;
  friend auto operator<=>(const label_set&, const label_set&) = default;

 private:
  void check_index(std::size_t index) const {
    if (index >= q_) {
      throw argument_error("label index " + std::to_string(index) +
                           " outside label space of size " + std::to_string(q_));
    }
  }

  static void check_same_space(const label_set& a, const label_set& b) {
    if (a.q_ != b.q_) {
      throw argument_error("label sets live in different label spaces (" +
                           std::to_string(a.q_) + " vs " + std::to_string(b.q_) + ")");
    }
  }

  void mask_tail() {
    if (q_ % 64 != 0 && !blocks_.empty()) {
      blocks_.back() &= (std::uint64_t{1} << (q_ % 64)) - 1;
    }
  }

  std::size_t q_ = 0;
  std::vector<std::uint64_t> blocks_;
};

}  // namespace mlbase
