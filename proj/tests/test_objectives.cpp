#include <doctest.h>

#include <cmath>
#include <random>

#include "iht/errors.hpp"
#include "iht/objectives.hpp"
#include "oracles.hpp"

using namespace iht;

namespace {

Batch random_batch(std::mt19937_64& gen, std::size_t m) {
  std::uniform_int_distribution<int> label(0, 2);
  Batch b{oracle::gaussian_matrix(gen, m, 4), {}};
  for (std::size_t r = 0; r < m; ++r) b.labels.push_back(label(gen));
  return b;
}

}  // namespace

TEST_SUITE("objectives") {
  TEST_CASE("quadratic value and gradient examples") {
    const QuadraticObjective q(Matrix::identity(2), Vector{1, 0});
    ValueGrad vg = q.value_grad(Vector{1, 0});
    CHECK(vg.value == 0.0);
    CHECK(vg.gradient == Vector{0, 0});
    vg = q.value_grad(Vector{0, 0});
    CHECK(vg.value == 0.5);
    CHECK(vg.gradient == Vector{-1, 0});
    CHECK_THROWS_AS(q.value_grad(Vector{1, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(QuadraticObjective(Matrix(3, 2), Vector{1, 2}), InvalidArgument);
  }

  TEST_CASE("quadratic gradient agrees with central differences") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 20; ++trial) {
      const QuadraticObjective q(oracle::gaussian_matrix(gen, 4, 3), oracle::gaussian_vector(gen, 4));
      const Vector theta = oracle::gaussian_vector(gen, 3);
      // f is quadratic, so central differences are exact up to rounding.
      CHECK(oracle::relative_error(finite_diff_gradient(q, theta, 1e-5), q.gradient(theta)) < 1e-8);
    }
  }

  TEST_CASE("quadratic gradient is lambda_max-Lipschitz") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix x = oracle::gaussian_matrix(gen, 6, 4);
      const QuadraticObjective q(x, oracle::gaussian_vector(gen, 6));
      const double lip = oracle::jacobi_eigenvalues(oracle::to_rows(gram(x))).back();
      const Vector a = oracle::gaussian_vector(gen, 4), b = oracle::gaussian_vector(gen, 4);
      CHECK(norm2(q.gradient(a) - q.gradient(b)) <= lip * norm2(a - b) * (1 + 1e-12));
    }
  }

  TEST_CASE("finite differences of a constant are zero") {
    const QuadraticObjective flat(Matrix(3, 2), Vector{1, 2, 3});
    CHECK(finite_diff_gradient(flat, Vector{0.3, -4}) == Vector{0, 0});
    CHECK_THROWS_AS(finite_diff_gradient(flat, Vector{0, 0}, 0.0), InvalidArgument);
  }

  TEST_CASE("classifier layout") {
    const OneLayerClassifier model;
    CHECK(model.param_count() == 15);
    CHECK(model.weight_index(0, 0) == 0);
    CHECK(model.weight_index(3, 2) == 11);
    CHECK(model.bias_index(0) == 12);
    const auto names = model.param_names();
    CHECK(names.front() == "w11");
    CHECK(names[5] == "w23");
    CHECK(names.back() == "b3");
  }

  TEST_CASE("classifier at zero is uniform: ln 3") {
    std::mt19937_64 gen(1);
    const OneLayerClassifier model;
    for (std::size_t m : {1, 5, 40}) {
      const Batch b = random_batch(gen, m);
      CHECK(model.value_grad(Vector(15), b).value == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    }
  }

  TEST_CASE("classifier saturated correct prediction") {
    const OneLayerClassifier model;
    Batch b{Matrix{{1, 0, 0, 0}}, {1}};
    Vector theta(15);
    theta[model.bias_index(1)] = 50.0;
    const ValueGrad vg = model.value_grad(theta, b);
    CHECK(vg.value >= 0.0);
    CHECK(vg.value < 1e-20);
    CHECK(norm2(vg.gradient) < 1e-20);
  }

  TEST_CASE("classifier gradient agrees with central differences") {
    std::mt19937_64 gen(31);
    const OneLayerClassifier model;
    for (int trial = 0; trial < 20; ++trial) {
      const ClassifierObjective obj(model, random_batch(gen, 8));
      const Vector theta = oracle::gaussian_vector(gen, 15);
      CHECK(oracle::relative_error(obj.gradient(theta), finite_diff_gradient(obj, theta, 1e-5)) < 1e-6);
    }
  }

  TEST_CASE("classifier value matches the textbook formula") {
    std::mt19937_64 gen(37);
    const OneLayerClassifier model;
    for (int trial = 0; trial < 20; ++trial) {
      const Batch b = random_batch(gen, 10);
      const Vector theta = oracle::gaussian_vector(gen, 15);
      CHECK(model.value_grad(theta, b).value == doctest::Approx(oracle::naive_cross_entropy(theta.values(), b)).epsilon(1e-12));
    }
  }

  TEST_CASE("classifier loss survives huge logits") {
    const OneLayerClassifier model;
    Batch b{Matrix{{1, 0, 0, 0}}, {0}};
    Vector theta(15);
    theta[model.bias_index(1)] = 1000.0;  // wrong class dominates
    const ValueGrad vg = model.value_grad(theta, b);
    CHECK(vg.value == doctest::Approx(1000.0));
    CHECK(vg.gradient.all_finite());
  }

  TEST_CASE("classifier input validation") {
    const OneLayerClassifier model;
    CHECK_THROWS_AS(model.value_grad(Vector(15), Batch{Matrix(0, 4), {}}), InvalidArgument);
    CHECK_THROWS_AS(model.value_grad(Vector(15), Batch{Matrix(1, 4), {3}}), InvalidArgument);
    CHECK_THROWS_AS(model.value_grad(Vector(15), Batch{Matrix(1, 4), {-1}}), InvalidArgument);
    CHECK_THROWS_AS(model.value_grad(Vector(14), Batch{Matrix(1, 4), {0}}), InvalidArgument);
    CHECK_THROWS_AS(model.accuracy(Vector(15), Batch{Matrix(0, 4), {}}), InvalidArgument);
  }

  TEST_CASE("accuracy") {
    const OneLayerClassifier model;
    Batch b{Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 1, 1, 1}}, {0, 1, 2, 0}};
    // All-zero logits tie; the smallest class index wins, so only label-0 rows count.
    CHECK(model.accuracy(Vector(15), b) == 0.5);

    Vector sep(15);
    sep[model.weight_index(0, 0)] = 1;
    sep[model.weight_index(1, 1)] = 1;
    sep[model.weight_index(2, 2)] = 1;
    Batch three{Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}, {0, 1, 2}};
    CHECK(model.accuracy(sep, three) == 1.0);

    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 20; ++trial) {
      const Batch rb = random_batch(gen, 30);
      const Vector theta = oracle::gaussian_vector(gen, 15);
      CHECK(model.accuracy(theta, rb) == oracle::naive_accuracy(theta.values(), rb));
    }
  }
}
