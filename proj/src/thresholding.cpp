#include "iht/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "iht/errors.hpp"

namespace iht {

Support::Support(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw InvalidArgument("Support: duplicate index");
  }
}

Support Support::of(const Vector& v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) idx.push_back(i);
  Support out;
  out.indices_ = std::move(idx);
  return out;
}

bool Support::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::string Support::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(indices_[k]);
  }
  return out;
}

Support Support::parse(const std::string& text) {
  std::vector<std::size_t> idx;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("Support::parse: bad index '" + item + "'");
    }
    if (pos != item.size()) throw InvalidArgument("Support::parse: bad index '" + item + "'");
    idx.push_back(static_cast<std::size_t>(value));
  }
  return Support(std::move(idx));
}

SparseVector SparseVector::from_dense(Vector v, std::size_t budget) {
  Support support = Support::of(v);
  if (support.size() > budget) {
    throw InvalidArgument("SparseVector: " + std::to_string(support.size()) + " nonzeros exceed budget " +
                          std::to_string(budget));
  }
  return SparseVector{std::move(v), std::move(support), budget};
}

SparseVector hard_threshold(const Vector& v, std::size_t s) {
  if (s < 1 || s > v.size()) {
    throw InvalidArgument("hard_threshold: s=" + std::to_string(s) + " outside [1, " + std::to_string(v.size()) +
                          "]");
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Magnitude descending, index ascending on ties.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s), order.end(),
                    [&v](std::size_t a, std::size_t b) {
                      const double ma = std::abs(v[a]);
                      const double mb = std::abs(v[b]);
                      return ma != mb ? ma > mb : a < b;
                    });
  Vector out(v.size());
  std::vector<std::size_t> kept;
  kept.reserve(s);
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t i = order[k];
    if (v[i] == 0.0) break;
    out[i] = v[i];
    kept.push_back(i);
  }
  return SparseVector{std::move(out), Support(std::move(kept)), s};
}

std::uint64_t support_count(std::uint64_t n, std::uint64_t s) {
  if (s < 1 || s >= n) {
    throw InvalidArgument("support_count: need 1 <= s < n (n=" + std::to_string(n) + ", s=" + std::to_string(s) +
                          ")");
  }
  const std::uint64_t k = std::min(s, n - s);
  // C(n, i) = C(n, i-1) * (n-k+i) / i; every partial product is an exact binomial.
  __extension__ using Wide = unsigned __int128;
  Wide acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw OverflowError("support_count: C(" + std::to_string(n) + ", " + std::to_string(s) +
                          ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

double min_abs_nonzero(const Vector& v) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x != 0.0) best = std::min(best, std::abs(x));
  if (std::isinf(best)) throw InvalidArgument("min_abs_nonzero: vector has no nonzero entry");
  return best;
}

}  // namespace iht
