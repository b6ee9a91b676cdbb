#pragma once

#include <cstddef>
#include <vector>

#include "kore/matrix.hpp"

namespace kore {

/// Basis of the (approximate) null space of an activation covariance:
/// the r left singular directions with the smallest singular values.
/// `sigmas` is ascending. `exact_null_dim` counts the singular values at
/// or below eps * sigma_max of the full spectrum.
struct NullBasis {
  Matrix u_hat;                // d_in x r, orthonormal columns
  std::vector<double> sigmas;  // ascending, length r
  std::size_t exact_null_dim = 0;
};

/// Orthogonal projector p = u_hat * u_hat^T onto the null basis.
struct Projector {
  Matrix p;
};

/// Low-rank adapter factors. `a` (r x d_in) is frozen at initialization;
/// `b` (d_out x r) is the trainable factor.
struct AdapterPair {
  Matrix a;
  Matrix b;
  std::size_t rank = 0;
};

struct AdapterInit {
  AdapterPair pair;
  Matrix w0_prime;  // residual-adjusted base, w0 - b*a
};

struct TheoremReport {
  double ac_rel = 0.0;          // |a*c|_F / (|a|_F * |c|_F)
  double rowspace_resid = 0.0;  // |a - a*p|_F / |a|_F
  std::size_t exact_null_dim = 0;
  std::size_t rank = 0;
  bool advisory = false;  // true when the exact null space is smaller than rank
  bool pass = false;
};

constexpr double kDefaultNullEps = 1e-10;
constexpr double kDefaultTheoremTol = 1e-8;

/// Extracts the r smallest singular directions of a symmetric PSD matrix.
/// eps is the relative threshold (vs sigma_max) below which a singular
/// value counts as exactly zero. ShapeError when r is out of [1, d_in];
/// ContractError when c is not symmetric within 1e-8.
NullBasis null_basis(const Matrix& c, std::size_t r, double eps = kDefaultNullEps);

Projector make_projector(const NullBasis& nb);

/// Factorizes w0 projected onto the null space: svd(w0*p) truncated to the
/// projector rank gives b = u*sqrt(sigma), a = sqrt(sigma)*vt, and the base
/// is adjusted so that w0_prime + b*a reproduces w0. When the rank exceeds
/// min(d_out, d_in) the extra factor columns/rows are zero.
AdapterInit init_adapter(const Matrix& w0, const Projector& p);

/// w0_prime + b*a, the deployable weight.
Matrix merge_adapter(const Matrix& w0_prime, const AdapterPair& pair);

/// Measures the constraint residuals. pass requires both residuals at or
/// below tol and an exact null space at least as large as the rank;
/// otherwise the report is advisory with the measured values.
TheoremReport verify_theorems(const AdapterPair& pair, const Matrix& c,
                              const NullBasis& nb, double tol = kDefaultTheoremTol);

}  // namespace kore
