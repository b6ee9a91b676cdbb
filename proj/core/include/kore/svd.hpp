#pragma once

#include <vector>

#include "kore/matrix.hpp"

namespace kore {

/// Full thin SVD: m = u * diag(sigma) * vt with k = min(rows, cols).
/// sigma is descending and non-negative; u is rows x k, vt is k x cols.
/// Sign convention: in every column of u the entry of largest magnitude
/// (ties broken by lowest row index) is non-negative.
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix vt;
};

/// One-sided Jacobi SVD. Deterministic: identical input bits produce
/// identical output bits. Convergence threshold 1e-12 on the scaled
/// off-diagonal mass, capped at 100 sweeps (NumericError past the cap,
/// carrying the sweep count).
SvdResult svd(const Matrix& m);

/// u * diag(sigma) * vt, the reconstruction of an SvdResult.
Matrix svd_reconstruct(const SvdResult& r);

}  // namespace kore
