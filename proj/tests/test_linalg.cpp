#include <doctest.h>

#include <cmath>
#include <random>

#include "iht/errors.hpp"
#include "iht/linalg.hpp"
#include "oracles.hpp"

using namespace iht;

TEST_SUITE("linalg") {
  TEST_CASE("matvec examples") {
    CHECK(matvec(Matrix::identity(2), Vector{3, 4}) == Vector{3, 4});
    CHECK(matvec(Matrix{{1, 2}, {3, 4}}, Vector{1, 1}) == Vector{3, 7});
    CHECK(matvec(Matrix(3, 2), Vector{5, -2}) == Vector{0, 0, 0});
    CHECK_THROWS_AS(matvec(Matrix(2, 3), Vector{1, 2}), InvalidArgument);
    CHECK_THROWS_AS(matvec_transposed(Matrix(2, 3), Vector{1, 2, 3}), InvalidArgument);
  }

  TEST_CASE("matvec is linear") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix a = oracle::gaussian_matrix(gen, 5, 4);
      const Vector u = oracle::gaussian_vector(gen, 4), v = oracle::gaussian_vector(gen, 4);
      const double alpha = coef(gen), beta = coef(gen);
      const Vector lhs = matvec(a, alpha * u + beta * v);
      const Vector rhs = alpha * matvec(a, u) + beta * matvec(a, v);
      CHECK(oracle::relative_error(lhs, rhs) < 1e-12);
    }
  }

  TEST_CASE("gram examples") {
    CHECK(gram(Matrix{{1, 1}, {1, 1}}) == Matrix{{2, 2}, {2, 2}});
    CHECK(gram(Matrix::identity(3)) == Matrix::identity(3));
    const double d[] = {1, 2, 3};
    const double d2[] = {1, 4, 9};
    CHECK(gram(Matrix::diagonal(d)) == Matrix::diagonal(d2));
    Matrix bad(1, 1);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(gram(bad), InvalidArgument);
  }

  TEST_CASE("gram is exactly symmetric with non-negative Rayleigh quotients") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix g = gram(oracle::gaussian_matrix(gen, 7, 5));
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(g(i, j) == g(j, i));
      const Vector v = oracle::gaussian_vector(gen, 5);
      CHECK(dot(v, matvec(g, v)) >= 0.0);
    }
  }

  TEST_CASE("max_eigenvalue examples") {
    const double d[] = {1, 4, 9};
    CHECK(max_eigenvalue(Matrix::diagonal(d)) == doctest::Approx(9).epsilon(1e-12));
    CHECK(max_eigenvalue(Matrix{{2, 2}, {2, 2}}) == doctest::Approx(4).epsilon(1e-12));
    CHECK(max_eigenvalue(Matrix(3, 3)) == 0.0);
  }

  TEST_CASE("max_eigenvalue matches a Jacobi eigensolve on random PSD matrices") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix s = gram(oracle::gaussian_matrix(gen, 6, 5));
      const double want = oracle::jacobi_eigenvalues(oracle::to_rows(s)).back();
      CHECK(max_eigenvalue(s, 1e-12) == doctest::Approx(want).epsilon(1e-10));
    }
  }

  TEST_CASE("max_eigenvalue handles nearly degenerate top eigenvalues") {
    const double d[] = {1.0, 1.0 - 1e-9, 0.5, 0.25};
    CHECK(max_eigenvalue(Matrix::diagonal(d)) == doctest::Approx(1.0).epsilon(1e-12));
    const double e[] = {3.0, 2.999, 2.998, 0.1};
    CHECK(max_eigenvalue(Matrix::diagonal(e)) == doctest::Approx(3.0).epsilon(1e-12));
  }

  TEST_CASE("max_eigenvalue dominates Rayleigh quotients") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix s = gram(oracle::gaussian_matrix(gen, 4, 4));
      const double lmax = max_eigenvalue(s, 1e-12);
      for (int k = 0; k < 20; ++k) {
        const Vector v = oracle::gaussian_vector(gen, 4);
        CHECK(dot(v, matvec(s, v)) / dot(v, v) <= lmax * (1 + 1e-12));
      }
    }
  }

  TEST_CASE("max_eigenvalue rejects bad input") {
    CHECK_THROWS_AS(max_eigenvalue(Matrix{{1, 2}, {0, 1}}), InvalidArgument);
    CHECK_THROWS_AS(max_eigenvalue(Matrix(2, 3)), InvalidArgument);
    CHECK_THROWS_AS(max_eigenvalue(Matrix::identity(2), 0.0), InvalidArgument);
  }

  TEST_CASE("max_eigenvalue is deterministic") {
    std::mt19937_64 gen(3);
    const Matrix s = gram(oracle::gaussian_matrix(gen, 9, 9));
    CHECK(max_eigenvalue(s) == max_eigenvalue(s));
  }

  TEST_CASE("norm2 survives extreme scales") {
    CHECK(norm2(Vector{3e200, 4e200}) == doctest::Approx(5e200));
    CHECK(norm2(Vector{3e-200, 4e-200}) == doctest::Approx(5e-200));
    CHECK(norm2(Vector(4)) == 0.0);
  }
}
