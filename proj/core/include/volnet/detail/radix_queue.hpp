#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

namespace volnet::detail {

// Monotone priority queue over 64-bit keys (radix heap). Every pushed key
// must be at least the last popped key, which holds for Dijkstra with
// nonnegative edge weights. Entries with equal keys pop in LIFO order.
class RadixQueue {
 public:
  using Entry = std::pair<std::uint64_t, std::uint32_t>;

  void clear() {
    for (auto& b : buckets_) b.clear();
    occupied_ = 0;
    size_ = 0;
    last_ = 0;
  }
  bool empty() const { return size_ == 0; }

  void push(std::uint64_t key, std::uint32_t value) {
    insert({key, value});
    ++size_;
  }

  // Requires !empty().
  Entry pop() {
    if (buckets_[0].empty()) {
      // Buckets 1..64 are tracked by bits 0..63 of occupied_.
      const auto i = static_cast<std::size_t>(std::countr_zero(occupied_)) + 1;
      std::vector<Entry>& source = buckets_[i];
      std::uint64_t lowest = source.front().first;
      for (const Entry& e : source) lowest = e.first < lowest ? e.first : lowest;
      last_ = lowest;
      occupied_ &= ~(std::uint64_t{1} << (i - 1));
      for (const Entry& e : source) insert(e);
      source.clear();
    }
    const Entry e = buckets_[0].back();
    buckets_[0].pop_back();
    --size_;
    return e;
  }

 private:
  void insert(const Entry& e) {
    if (e.first == last_) {
      buckets_[0].push_back(e);
      return;
    }
    const auto i = static_cast<std::size_t>(64 - std::countl_zero(e.first ^ last_));
    buckets_[i].push_back(e);
    occupied_ |= std::uint64_t{1} << (i - 1);
  }

  std::array<std::vector<Entry>, 65> buckets_;
  std::uint64_t occupied_ = 0;
  std::size_t size_ = 0;
  std::uint64_t last_ = 0;
};

}  // namespace volnet::detail
