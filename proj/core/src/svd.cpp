#include "kore/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kore {

namespace {

constexpr double kPairTol = 1e-12;
constexpr int kMaxSweeps = 100;

// One-sided Jacobi on a tall-or-square matrix (rows >= cols). Orthogonalizes
// the columns of `b` in place while accumulating the rotations into `v`.
int jacobi_orthogonalize(Matrix& b, Matrix& v) {
  const std::size_t m = b.rows();
  const std::size_t n = b.cols();
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = b(i, p);
          const double bq = b(i, q);
          app += bp * bp;
          aqq += bq * bq;
          apq += bp * bq;
        }
        if (app == 0.0 || aqq == 0.0) continue;
        if (std::fabs(apq) <= kPairTol * std::sqrt(app * aqq)) continue;
        converged = false;

        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = b(i, p);
          const double bq = b(i, q);
          b(i, p) = c * bp - s * bq;
          b(i, q) = s * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (converged) return sweep;
  }
  throw NumericError("svd: Jacobi sweeps did not converge", kMaxSweeps);
}

// Fills u column `col` with a unit vector orthogonal to all columns in
// `fixed` (indices < col are already valid). Candidates are the canonical
// basis vectors, so the completion is deterministic.
void complete_column(Matrix& u, std::size_t col) {
  const std::size_t m = u.rows();
  for (std::size_t cand = 0; cand < m; ++cand) {
    std::vector<double> w(m, 0.0);
    w[cand] = 1.0;
    // Two rounds of Gram-Schmidt keep the residual orthogonal.
    for (int round = 0; round < 2; ++round) {
      for (std::size_t j = 0; j < col; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += w[i] * u(i, j);
        for (std::size_t i = 0; i < m; ++i) w[i] -= dot * u(i, j);
      }
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.5) {
      for (std::size_t i = 0; i < m; ++i) u(i, col) = w[i] / norm;
      return;
    }
  }
  throw NumericError("svd: failed to complete orthonormal basis");
}

void apply_sign_convention(Matrix& u, Matrix& vt) {
  const std::size_t k = u.cols();
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
      const double a = std::fabs(u(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
      for (std::size_t i = 0; i < vt.cols(); ++i) vt(j, i) = -vt(j, i);
    }
  }
}

SvdResult svd_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix b = a;
  Matrix v = Matrix::identity(n);
  jacobi_orthogonalize(b, v);

  std::vector<double> norms(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += b(i, j) * b(i, j);
    norms[j] = std::sqrt(s);
  }

  // Stable descending order keeps equal singular values deterministic.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Matrix u(m, n);
  Matrix vt(n, n);
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sigma[j] = norms[src];
    if (sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = b(i, src) / sigma[j];
    }
    for (std::size_t i = 0; i < n; ++i) vt(j, i) = v(i, src);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma[j] == 0.0) complete_column(u, j);
  }

  apply_sign_convention(u, vt);
  return SvdResult{std::move(u), std::move(sigma), std::move(vt)};
}

}  // namespace

SvdResult svd(const Matrix& a) {
  if (a.empty()) throw ContractError("svd: matrix is empty");
  a.check_finite();
  if (a.rows() >= a.cols()) return svd_tall(a);

  // Wide input: decompose the transpose and swap the factors.
  SvdResult t = svd_tall(transpose(a));
  SvdResult r;
  r.sigma = std::move(t.sigma);
  r.u = transpose(t.vt);
  r.vt = transpose(t.u);
  // The convention is defined on u, so it must be re-applied after the swap.
  apply_sign_convention(r.u, r.vt);
  return r;
}

Matrix svd_reconstruct(const SvdResult& r) {
  Matrix us = r.u;
  for (std::size_t j = 0; j < r.sigma.size(); ++j) {
    for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= r.sigma[j];
  }
  return matmul(us, r.vt);
}

}  // namespace kore
