#include <cmath>

#include "doctest.h"

#include "kore/matrix.hpp"
#include "kore/svd.hpp"

#include "support/oracles.hpp"

using kore::Matrix;
using kore::SvdResult;
namespace ts = testsupport;

namespace {

double orthogonality_defect(const SvdResult& r) {
  const Matrix utu = kore::matmul(kore::transpose(r.u), r.u);
  const Matrix vvt = kore::matmul(r.vt, kore::transpose(r.vt));
  const Matrix eye = Matrix::identity(r.sigma.size());
  return std::max(kore::frobenius(utu - eye), kore::frobenius(vvt - eye));
}

void check_contract(const Matrix& m, double tol = 1e-10) {
  const SvdResult r = kore::svd(m);
  for (std::size_t i = 0; i + 1 < r.sigma.size(); ++i) {
    CHECK(r.sigma[i] >= r.sigma[i + 1]);
  }
  for (double s : r.sigma) CHECK(s >= 0.0);
  CHECK(orthogonality_defect(r) <= tol);
  const double denom = kore::frobenius(m);
  const double recon = kore::frobenius(m - kore::svd_reconstruct(r));
  CHECK(recon <= tol * (denom > 0.0 ? denom : 1.0));
  // Sign convention: the largest-magnitude entry of every u column is
  // non-negative, ties resolved toward the lowest row.
  for (std::size_t j = 0; j < r.u.cols(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < r.u.rows(); ++i) {
      if (std::fabs(r.u(i, j)) > best) {
        best = std::fabs(r.u(i, j));
        arg = i;
      }
    }
    CHECK(r.u(arg, j) >= 0.0);
  }
}

}  // namespace

TEST_SUITE_BEGIN("svd");

TEST_CASE("identity has unit spectrum") {
  const SvdResult r = kore::svd(Matrix::identity(3));
  REQUIRE(r.sigma.size() == 3);
  for (double s : r.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("diagonal case keeps the axes") {
  const Matrix m = Matrix::from_rows({{3, 0}, {0, 1}});
  const SvdResult r = kore::svd(m);
  CHECK(r.sigma[0] == doctest::Approx(3.0));
  CHECK(r.sigma[1] == doctest::Approx(1.0));
  CHECK(ts::rel_diff(r.u, Matrix::identity(2)) < 1e-12);
  CHECK(ts::rel_diff(r.vt, Matrix::identity(2)) < 1e-12);
}

TEST_CASE("seeded 4x3 reconstructs and matches the eigenvalue oracle") {
  kore::Rng rng(23);
  const Matrix m = ts::random_matrix(rng, 4, 3);
  const SvdResult r = kore::svd(m);
  CHECK(ts::rel_diff(m, kore::svd_reconstruct(r)) <= 1e-10);

  // sigma^2 must agree with the eigenvalues of m^T m.
  const ts::EigResult eig = ts::jacobi_eig(kore::matmul(kore::transpose(m), m));
  REQUIRE(eig.values.size() == r.sigma.size());
  for (std::size_t i = 0; i < r.sigma.size(); ++i) {
    CHECK(r.sigma[i] == doctest::Approx(std::sqrt(std::max(0.0, eig.values[i]))).epsilon(1e-9));
  }
}

TEST_CASE("svd is deterministic to the bit") {
  kore::Rng rng(31);
  const Matrix m = ts::random_matrix(rng, 8, 5);
  const SvdResult a = kore::svd(m);
  const SvdResult b = kore::svd(m);
  CHECK(ts::bits_equal(a.u, b.u));
  CHECK(ts::bits_equal(a.vt, b.vt));
  for (std::size_t i = 0; i < a.sigma.size(); ++i) CHECK(a.sigma[i] == b.sigma[i]);
}

TEST_CASE("contract holds over seeded shapes including rank deficiency") {
  kore::Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 1 + rng.next_index(32);
    const std::size_t cols = 1 + rng.next_index(32);
    Matrix m(0, 0);
    if (trial % 3 == 0) {
      const std::size_t inner = 1 + rng.next_index(std::min(rows, cols));
      m = kore::matmul(ts::random_matrix(rng, rows, inner),
                       ts::random_matrix(rng, inner, cols));
    } else {
      m = ts::random_matrix(rng, rows, cols);
    }
    check_contract(m);
  }
}

TEST_CASE("symmetric PSD input: sigma equals eigenvalues and u matches v") {
  kore::Rng rng(53);
  const Matrix c = ts::psd_with_spectrum(rng, {9.0, 4.0, 1.0, 0.25});
  const SvdResult r = kore::svd(c);
  const ts::EigResult eig = ts::jacobi_eig(c);
  for (std::size_t i = 0; i < r.sigma.size(); ++i) {
    CHECK(r.sigma[i] == doctest::Approx(eig.values[i]).epsilon(1e-9));
  }
  // u and v agree columnwise up to sign.
  const Matrix v = kore::transpose(r.vt);
  for (std::size_t j = 0; j < r.u.cols(); ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < r.u.rows(); ++i) dot += r.u(i, j) * v(i, j);
    CHECK(std::fabs(dot) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("zero columns produce a completed orthonormal basis") {
  Matrix m(4, 3);
  m(0, 0) = 2.0;  // rank 1: two zero singular values
  check_contract(m);
  const SvdResult r = kore::svd(m);
  CHECK(r.sigma[0] == doctest::Approx(2.0));
  CHECK(r.sigma[1] == 0.0);
  CHECK(r.sigma[2] == 0.0);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(kore::svd(Matrix()), kore::ContractError);
}

TEST_SUITE_END();
