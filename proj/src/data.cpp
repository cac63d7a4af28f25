#include "iht/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "iht/errors.hpp"
#include "iht/format.hpp"
#include "iht/rng.hpp"

namespace iht {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool looks_numeric(const std::string& cell) {
  try {
    (void)parse_real(cell);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

int parse_label(std::string cell, std::size_t row) {
  cell = lower(trim(cell));
  if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
  if (cell.rfind("iris-", 0) == 0) cell = cell.substr(5);
  if (cell == "setosa" || cell == "0") return 0;
  if (cell == "versicolor" || cell == "versicolour" || cell == "1") return 1;
  if (cell == "virginica" || cell == "2") return 2;
  throw ParseError(row, "unknown class label '" + cell + "'");
}

}  // namespace

std::array<std::size_t, kIrisClasses> Dataset::class_counts() const {
  std::array<std::size_t, kIrisClasses> counts{};
  for (int y : labels) ++counts.at(static_cast<std::size_t>(y));
  return counts;
}

Dataset parse_iris(std::istream& in) {
  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (first_content) {
      first_content = false;
      if (!looks_numeric(trim(cells.front()))) continue;  // header
    }
    if (cells.size() != kIrisFeatures + 1) {
      throw ParseError(line_no, "expected " + std::to_string(kIrisFeatures + 1) + " columns, found " +
                                    std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < kIrisFeatures; ++c) {
      double v = 0.0;
      try {
        v = parse_real(trim(cells[c]));
      } catch (const InvalidArgument&) {
        throw ParseError(line_no, "column " + std::to_string(c + 1) + " is not numeric: '" + cells[c] + "'");
      }
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite feature value");
      values.push_back(v);
    }
    labels.push_back(parse_label(cells[kIrisFeatures], line_no));
  }
  if (labels.empty()) throw ParseError(line_no, "no data rows");
  if (labels.size() != kIrisRows) {
    throw ParseError(line_no, "expected " + std::to_string(kIrisRows) + " data rows, found " +
                                  std::to_string(labels.size()));
  }

  Dataset d;
  d.features = Matrix(labels.size(), kIrisFeatures);
  for (std::size_t r = 0; r < labels.size(); ++r)
    for (std::size_t c = 0; c < kIrisFeatures; ++c) d.features(r, c) = values[r * kIrisFeatures + c];
  d.labels = std::move(labels);
  for (std::size_t count : d.class_counts()) {
    if (count != kIrisRows / kIrisClasses) throw ParseError(line_no, "class counts are not 50/50/50");
  }
  return d;
}

Dataset load_iris(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path.string() + "'");
  return parse_iris(in);
}

Dataset load_iris() {
  std::istringstream in{std::string(embedded_iris_csv())};
  return parse_iris(in);
}

SplitData split_and_standardize(const Dataset& d, std::uint64_t data_seed) {
  if (d.size() != kTrainRows + kTestRows) {
    throw InvalidArgument("split_and_standardize: expected " + std::to_string(kTrainRows + kTestRows) + " rows");
  }
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(data_seed, {kStreamData}));
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);
  }

  SplitData out;
  out.split.data_seed = data_seed;
  out.split.train.assign(order.begin(), order.begin() + kTrainRows);
  out.split.test.assign(order.begin() + kTrainRows, order.end());

  const std::size_t f = d.features.cols();
  std::vector<double> mean(f, 0.0), sd(f, 0.0);
  for (std::size_t r : out.split.train)
    for (std::size_t c = 0; c < f; ++c) mean[c] += d.features(r, c);
  for (double& m : mean) m /= static_cast<double>(kTrainRows);
  for (std::size_t r : out.split.train)
    for (std::size_t c = 0; c < f; ++c) sd[c] += (d.features(r, c) - mean[c]) * (d.features(r, c) - mean[c]);
  for (double& s : sd) {
    s = std::sqrt(s / static_cast<double>(kTrainRows));
    if (s == 0.0) s = 1.0;  // constant column: centre only
  }

  const auto take = [&](const std::vector<std::size_t>& rows) {
    Dataset part;
    part.features = Matrix(rows.size(), f);
    part.labels.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      for (std::size_t c = 0; c < f; ++c) part.features(k, c) = (d.features(rows[k], c) - mean[c]) / sd[c];
      part.labels.push_back(d.labels[rows[k]]);
    }
    part.standardized = true;
    part.mean = mean;
    part.std = sd;
    return part;
  };
  out.train = take(out.split.train);
  out.test = take(out.split.test);
  return out;
}

}  // namespace iht
