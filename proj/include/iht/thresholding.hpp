#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "iht/linalg.hpp"

namespace iht {

// Strictly increasing coordinate list.
class Support {
 public:
  Support() = default;
  // Sorts and validates; duplicates are rejected.
  explicit Support(std::vector<std::size_t> indices);

  static Support of(const Vector& v);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t i) const;
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  // "0;3;7", the CSV form used by trace and record files.
  std::string to_string() const;
  static Support parse(const std::string& text);

  friend bool operator==(const Support&, const Support&) = default;
  friend auto operator<=>(const Support&, const Support&) = default;

 private:
  std::vector<std::size_t> indices_;
};

// A vector that is zero off its support, with at most `budget` nonzeros.
struct SparseVector {
  Vector dense;
  Support support;
  std::size_t budget = 0;

  // Wraps `v`; throws InvalidArgument when ‖v‖₀ > budget.
  static SparseVector from_dense(Vector v, std::size_t budget);
};

// H_s: keeps the s largest-magnitude entries and zeroes the rest. On equal
// magnitude the smaller index wins. Entries that are already zero never
// enter the support, so a vector with fewer than s nonzeros is returned
// unchanged. Throws InvalidArgument unless 1 <= s <= v.size().
SparseVector hard_threshold(const Vector& v, std::size_t s);

// Binomial coefficient C(n, s) for 1 <= s < n; OverflowError past 2^64 - 1.
std::uint64_t support_count(std::uint64_t n, std::uint64_t s);

// Smallest |v_i| over nonzero entries; InvalidArgument for an all-zero vector.
double min_abs_nonzero(const Vector& v);

}  // namespace iht
