#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "walk2sat/rng.hpp"

namespace walk2sat {

/// Subset of {0, ..., universe-1} with O(1) insert, erase, membership and
/// uniform sampling. Members live in a dense array; erase swaps the last
/// member into the vacated slot.
class IndexSet {
 public:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  IndexSet() = default;
  explicit IndexSet(std::size_t universe) : position_(universe, npos) {}

  std::size_t universe() const noexcept { return position_.size(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(std::uint32_t i) const noexcept { return position_[i] != npos; }
  std::span<const std::uint32_t> members() const noexcept { return members_; }

  // returns true if the set changed
  bool insert(std::uint32_t i) {
    if (contains(i)) return false;
    position_[i] = static_cast<std::uint32_t>(members_.size());
    members_.push_back(i);
    return true;
  }

  bool erase(std::uint32_t i) {
    const std::uint32_t slot = position_[i];
    if (slot == npos) return false;
    const std::uint32_t last = members_.back();
    members_[slot] = last;
    position_[last] = slot;
    members_.pop_back();
    position_[i] = npos;
    return true;
  }

  void clear() noexcept {
    for (auto i : members_) position_[i] = npos;
    members_.clear();
  }

  std::uint32_t sample(Stream& rng) const {
    if (members_.empty()) throw std::logic_error("sample from empty IndexSet");
    return members_[rng.below(members_.size())];
  }

 private:
  std::vector<std::uint32_t> members_;
  std::vector<std::uint32_t> position_;
};

}  // namespace walk2sat
