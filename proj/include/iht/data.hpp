#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

#include "iht/linalg.hpp"
#include "iht/objectives.hpp"

namespace iht {

inline constexpr std::size_t kIrisRows = 150;
inline constexpr std::size_t kIrisFeatures = 4;
inline constexpr std::size_t kIrisClasses = 3;
inline constexpr std::size_t kTrainRows = 120;
inline constexpr std::size_t kTestRows = 30;

struct Dataset {
  Matrix features;          // rows × 4
  std::vector<int> labels;  // 0 setosa, 1 versicolor, 2 virginica
  bool standardized = false;
  std::vector<double> mean;  // per feature, set once standardized
  std::vector<double> std;   // population standard deviation

  std::size_t size() const noexcept { return labels.size(); }
  Batch batch() const { return Batch{features, labels}; }
  std::array<std::size_t, kIrisClasses> class_counts() const;
};

struct Split {
  std::vector<std::size_t> train;  // row indices into the source dataset
  std::vector<std::size_t> test;
  std::uint64_t data_seed = 0;
};

struct SplitData {
  Dataset train;
  Dataset test;
  Split split;
};

// Four numeric columns then a class column. The class is a name ("setosa",
// "Iris-setosa", ...) or an index 0..2. A first line whose first cell is not
// numeric is treated as a header; blank lines are skipped. Requires exactly
// 150 rows, 50 per class. Throws ParseError naming the offending row.
Dataset parse_iris(std::istream& in);
Dataset load_iris(const std::filesystem::path& path);
// Built-in copy of the canonical table.
Dataset load_iris();
std::string_view embedded_iris_csv();

// Seeded uniform shuffle, first 120 rows train and the remaining 30 test.
// Standardisation statistics (mean, population std) come from the training
// rows only and are applied to both splits.
SplitData split_and_standardize(const Dataset& d, std::uint64_t data_seed);

}  // namespace iht
