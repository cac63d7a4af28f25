#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "iht/data.hpp"
#include "iht/errors.hpp"

using namespace iht;

namespace {

std::string iris_text() { return std::string(embedded_iris_csv()); }

std::size_t parse_error_row(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)parse_iris(in);
  } catch (const ParseError& e) {
    return e.row();
  }
  FAIL("expected ParseError");
  return 0;
}

std::string replace_line(const std::string& text, std::size_t line_no, const std::string& replacement) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  for (std::size_t k = 1; std::getline(in, line); ++k) out << (k == line_no ? replacement : line) << '\n';
  return out.str();
}

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("embedded copy has 150 rows, 50 per class") {
    const Dataset d = load_iris();
    CHECK(d.size() == 150);
    CHECK(d.features.cols() == 4);
    CHECK(d.class_counts() == std::array<std::size_t, 3>{50, 50, 50});
    CHECK(d.features(0, 0) == 5.1);
    CHECK(d.labels.front() == 0);
    CHECK(d.labels.back() == 2);
  }

  TEST_CASE("file and embedded copies agree") {
    const Dataset a = load_iris(IHT_DATA_DIR "/iris.csv");
    const Dataset b = load_iris();
    CHECK(a.labels == b.labels);
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t c = 0; c < 4; ++c) CHECK(a.features(r, c) == b.features(r, c));
  }

  TEST_CASE("label spellings") {
    const std::string text = iris_text();
    std::string prefixed = text;
    for (const char* name : {"setosa", "versicolor", "virginica"}) {
      const std::string from = std::string(",") + name;
      const std::string to = std::string(",Iris-") + name;
      for (std::size_t p = prefixed.find(from); p != std::string::npos; p = prefixed.find(from, p + to.size()))
        prefixed.replace(p, from.size(), to);
    }
    std::istringstream in(prefixed);
    CHECK(parse_iris(in).labels == load_iris().labels);
  }

  TEST_CASE("malformed input is rejected with the offending row") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_iris(empty), ParseError);
    const std::string text = iris_text();
    CHECK(parse_error_row(replace_line(text, 5, "5.0,3.6,1.4,0.2,tulip")) == 5);
    CHECK(parse_error_row(replace_line(text, 7, "5.0,3.6,1.4,setosa")) == 7);
    CHECK(parse_error_row(replace_line(text, 9, "5.0,abc,1.4,0.2,setosa")) == 9);
    CHECK_THROWS_AS(load_iris("/nonexistent/iris.csv"), ParseError);
  }

  TEST_CASE("row count and class balance are enforced") {
    const std::string text = iris_text();
    std::istringstream truncated(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    CHECK_THROWS_AS(parse_iris(truncated), ParseError);
    std::istringstream unbalanced(replace_line(text, 2, "5.1,3.5,1.4,0.2,virginica"));
    CHECK_THROWS_AS(parse_iris(unbalanced), ParseError);
  }

  TEST_CASE("split partitions the rows 120/30") {
    const Dataset d = load_iris();
    for (std::uint64_t seed : {0u, 1u, 42u, 12345u}) {
      const SplitData sd = split_and_standardize(d, seed);
      CHECK(sd.train.size() == 120);
      CHECK(sd.test.size() == 30);
      std::set<std::size_t> all(sd.split.train.begin(), sd.split.train.end());
      all.insert(sd.split.test.begin(), sd.split.test.end());
      CHECK(all.size() == 150);
      for (std::size_t k = 0; k < 120; ++k) CHECK(sd.train.labels[k] == d.labels[sd.split.train[k]]);
    }
  }

  TEST_CASE("training columns have mean 0 and population std 1") {
    const SplitData sd = split_and_standardize(load_iris(), 42);
    CHECK(sd.train.standardized);
    for (std::size_t c = 0; c < 4; ++c) {
      double mean = 0.0, var = 0.0;
      for (std::size_t r = 0; r < 120; ++r) mean += sd.train.features(r, c);
      mean /= 120.0;
      for (std::size_t r = 0; r < 120; ++r) var += (sd.train.features(r, c) - mean) * (sd.train.features(r, c) - mean);
      CHECK(std::abs(mean) < 1e-9);
      CHECK(std::abs(std::sqrt(var / 120.0) - 1.0) < 1e-9);
    }
  }

  TEST_CASE("test rows do not influence the statistics") {
    const Dataset d = load_iris();
    const SplitData base = split_and_standardize(d, 7);
    Dataset poisoned = d;
    for (std::size_t r : base.split.test)
      for (std::size_t c = 0; c < 4; ++c) poisoned.features(r, c) = 1e6;
    const SplitData other = split_and_standardize(poisoned, 7);
    CHECK(other.train.mean == base.train.mean);
    CHECK(other.train.std == base.train.std);
  }

  TEST_CASE("split is deterministic and seed-dependent") {
    const Dataset d = load_iris();
    const SplitData a = split_and_standardize(d, 0), b = split_and_standardize(d, 0);
    CHECK(a.split.train == b.split.train);
    CHECK(a.split.test == b.split.test);
    CHECK(split_and_standardize(d, 1).split.train != a.split.train);
  }

  TEST_CASE("wrong row count is rejected") {
    Dataset d = load_iris();
    d.labels.pop_back();
    CHECK_THROWS_AS(split_and_standardize(d, 0), InvalidArgument);
  }
}
