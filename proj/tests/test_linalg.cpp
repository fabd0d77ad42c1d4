#include <doctest.h>

#include <cmath>
#include <random>

#include "kcontract/linalg.hpp"
#include "kcontract/tolerances.hpp"
#include "oracles.hpp"

using namespace kcontract;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = scale * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
    }
  }
  return m;
}

Vector random_vector(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = scale * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
  }
  return v;
}

const NormKind kAllNorms[] = {NormKind::L1, NormKind::L2, NormKind::Linf};

}  // namespace

TEST_CASE("vector_norm examples") {
  CHECK(vector_norm(Vector{3.0, 4.0}, NormKind::L2) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(vector_norm(Vector{1.0, -2.0, 3.0}, NormKind::L1) == 6.0);
  CHECK(vector_norm(Vector{1.0, -2.0, 3.0}, NormKind::Linf) == 3.0);
  for (NormKind k : kAllNorms) {
    CHECK(vector_norm(Vector(4), k) == 0.0);
  }
}

TEST_CASE("vector_norm monotonicity, subadditivity, homogeneity") {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 200; ++it) {
    const std::size_t dim = 1 + rng() % 7;
    const Vector w = random_vector(rng, dim, 2.0);
    Vector v = w;
    for (std::size_t i = 0; i < dim; ++i) {
      v[i] *= static_cast<double>(rng() >> 11) * 0x1.0p-53;  // shrink componentwise
    }
    const Vector u = random_vector(rng, dim, 2.0);
    const double c = 4.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 2.0;
    for (NormKind k : kAllNorms) {
      CHECK(vector_norm(v, k) <= vector_norm(w, k) + 1e-15);
      CHECK(vector_norm(u + w, k) <= vector_norm(u, k) + vector_norm(w, k) + 1e-12);
      CHECK(vector_norm(u * c, k) ==
            doctest::Approx(std::abs(c) * vector_norm(u, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-finite entries are rejected at construction") {
  CHECK_THROWS_AS((Vector{1.0, std::nan("")}), InvalidInput);
  CHECK_THROWS_AS(Matrix(1, 2, std::vector<double>{1.0, std::numeric_limits<double>::infinity()}),
                  InvalidInput);
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1.0, 2.0, 3.0}), InvalidInput);
}

TEST_CASE("sym_eigenvalues on fixed matrices") {
  const Vector ev = sym_eigenvalues(Matrix{{3.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}});
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ev[2] == doctest::Approx(3.0).epsilon(1e-14));

  const Vector flip = sym_eigenvalues(Matrix{{0.0, 1.0}, {1.0, 0.0}});
  CHECK(flip[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(flip[1] == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(sym_eigenvalues(Matrix{{0.0, 1.0}, {2.0, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(sym_eigenvalues(Matrix(2, 3)), InvalidInput);
}

TEST_CASE("sym_eigen matches the bisection oracle and reconstructs") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 10; ++it) {
    Matrix a = random_matrix(rng, 5, 5);
    a += a.transposed();  // symmetric

    const SymEigen eig = sym_eigen(a);
    const auto oracle = oracles::sym_eigenvalues_bisection(a);
    REQUIRE(oracle.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(eig.values[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    }

    // ||Q L Q^T - A||_F <= 1e-10 ||A||_F
    Matrix recon(5, 5);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < 5; ++c) {
          acc += eig.vectors(i, c) * eig.values[c] * eig.vectors(j, c);
        }
        recon(i, j) = acc;
      }
    }
    CHECK(frobenius_norm(recon - a) <= 1e-10 * frobenius_norm(a));

    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      trace += a(i, i);
      sum += eig.values[i];
    }
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
  }
}

TEST_CASE("matrix_measure fixed values") {
  for (NormKind k : kAllNorms) {
    Matrix neg_id(4, 4);
    for (std::size_t i = 0; i < 4; ++i) neg_id(i, i) = -1.0;
    CHECK(matrix_measure(neg_id, k) == doctest::Approx(-1.0).epsilon(1e-14));
  }

  // Hopf Jacobian: mu_2(J(x)) = 1 - x1^2 - x2^2.
  std::mt19937_64 rng(11);
  for (int it = 0; it < 20; ++it) {
    const double x1 = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    const double x2 = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    const Matrix j{{1.0 - 3.0 * x1 * x1 - x2 * x2, -2.0 * x1 * x2 - 1.0},
                   {-2.0 * x1 * x2 + 1.0, 1.0 - x1 * x1 - 3.0 * x2 * x2}};
    CHECK(matrix_measure(j, NormKind::L2) ==
          doctest::Approx(1.0 - x1 * x1 - x2 * x2).epsilon(1e-12));
  }
}

TEST_CASE("matrix_measure agrees with the limit-definition oracle") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 20; ++it) {
    const Matrix a = random_matrix(rng, 4, 4);
    CHECK(matrix_measure(a, NormKind::L1) ==
          doctest::Approx(oracles::measure_limit(a, NormKind::L1)).epsilon(1e-5));
    CHECK(matrix_measure(a, NormKind::Linf) ==
          doctest::Approx(oracles::measure_limit(a, NormKind::Linf)).epsilon(1e-5));
  }
}

TEST_CASE("matrix_measure translation property") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 20; ++it) {
    const Matrix a = random_matrix(rng, 4, 4);
    const double c = 6.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 3.0;
    Matrix shifted = a;
    for (std::size_t i = 0; i < 4; ++i) shifted(i, i) += c;
    for (NormKind k : kAllNorms) {
      CHECK(matrix_measure(shifted, k) ==
            doctest::Approx(matrix_measure(a, k) + c).epsilon(1e-12));
    }
  }
}

TEST_CASE("mu_2 dominates the real spectrum (known-spectrum rotations)") {
  // Block-diagonal 2x2 rotation blocks a_i I + b_i J have spectrum a_i +- i b_i;
  // an orthogonal conjugation changes neither mu_2 nor the spectrum.
  std::mt19937_64 rng(19);
  for (int it = 0; it < 10; ++it) {
    double a1 = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
    double a2 = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
    double b1 = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
    double b2 = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4.0 - 2.0;
    Matrix blocks(4, 4);
    blocks(0, 0) = a1; blocks(0, 1) = -b1; blocks(1, 0) = b1; blocks(1, 1) = a1;
    blocks(2, 2) = a2; blocks(2, 3) = -b2; blocks(3, 2) = b2; blocks(3, 3) = a2;

    // Orthonormalize a random matrix (Gram-Schmidt) for the conjugation.
    Matrix q = random_matrix(rng, 4, 4);
    for (std::size_t col = 0; col < 4; ++col) {
      for (std::size_t prev = 0; prev < col; ++prev) {
        double dot = 0.0;
        for (std::size_t i = 0; i < 4; ++i) dot += q(i, col) * q(i, prev);
        for (std::size_t i = 0; i < 4; ++i) q(i, col) -= dot * q(i, prev);
      }
      double len = 0.0;
      for (std::size_t i = 0; i < 4; ++i) len += q(i, col) * q(i, col);
      len = std::sqrt(len);
      for (std::size_t i = 0; i < 4; ++i) q(i, col) /= len;
    }
    const Matrix a = q * blocks * q.transposed();
    const double max_re = std::max(a1, a2);
    CHECK(matrix_measure(a, NormKind::L2) >= max_re - 1e-10);
    CHECK(matrix_measure(a, NormKind::L2) == doctest::Approx(max_re).epsilon(1e-10));
  }
}

TEST_CASE("solve_small examples and residual property") {
  const Vector x = solve_small(Matrix::identity(3), Vector{1.0, 2.0, 3.0});
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
  CHECK(x[2] == 3.0);

  const Vector d = solve_small(Matrix{{2.0, 0.0}, {0.0, 4.0}}, Vector{2.0, 8.0});
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(23);
  for (int it = 0; it < 20; ++it) {
    Matrix a = random_matrix(rng, 6, 6);
    for (std::size_t i = 0; i < 6; ++i) a(i, i) += 4.0;  // keep it well conditioned
    const Vector b = random_vector(rng, 6, 3.0);
    const Vector sol = solve_small(a, b);
    const Vector resid = a * sol - b;
    const double bound = 1e-9 * (frobenius_norm(a) * vector_norm(sol, NormKind::L2) +
                                 vector_norm(b, NormKind::L2));
    CHECK(vector_norm(resid, NormKind::L2) <= bound);
  }

  Matrix singular(2, 2);
  singular(0, 0) = 1.0;
  singular(0, 1) = 2.0;
  singular(1, 0) = 2.0;
  singular(1, 1) = 4.0;
  CHECK_THROWS_AS(solve_small(singular, Vector{1.0, 1.0}), SingularMatrix);
}

TEST_CASE("inverse round trip") {
  std::mt19937_64 rng(29);
  Matrix a = random_matrix(rng, 5, 5);
  for (std::size_t i = 0; i < 5; ++i) a(i, i) += 3.0;
  const Matrix inv = inverse(a);
  CHECK(frobenius_norm(a * inv - Matrix::identity(5)) <= 1e-10);
}
