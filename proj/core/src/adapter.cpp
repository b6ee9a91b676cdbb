#include "kore/adapter.hpp"

#include <algorithm>
#include <cmath>

#include "kore/svd.hpp"

namespace kore {

NullBasis null_basis(const Matrix& c, std::size_t r, double eps) {
  if (c.rows() != c.cols()) throw ShapeError("null_basis: matrix not square");
  const std::size_t d = c.rows();
  if (r < 1 || r > d) throw ShapeError("null_basis: rank out of range [1, d_in]");

  const Matrix ct = transpose(c);
  const double asym = frobenius(c - ct);
  if (asym > 1e-8 * std::max(1.0, frobenius(c))) {
    throw ContractError("null_basis: input not symmetric within 1e-8");
  }

  const SvdResult dec = svd(c);
  const double sigma_max = dec.sigma.empty() ? 0.0 : dec.sigma.front();

  NullBasis nb;
  nb.u_hat = Matrix(d, r);
  nb.sigmas.resize(r);
  // Columns ordered by ascending singular value: smallest direction first.
  for (std::size_t j = 0; j < r; ++j) {
    const std::size_t src = d - 1 - j;
    nb.sigmas[j] = dec.sigma[src];
    for (std::size_t i = 0; i < d; ++i) nb.u_hat(i, j) = dec.u(i, src);
  }
  nb.exact_null_dim = 0;
  for (double s : dec.sigma) {
    if (s <= eps * sigma_max) ++nb.exact_null_dim;
  }
  return nb;
}

Projector make_projector(const NullBasis& nb) {
  return Projector{matmul(nb.u_hat, transpose(nb.u_hat))};
}

AdapterInit init_adapter(const Matrix& w0, const Projector& p) {
  if (w0.cols() != p.p.rows()) {
    throw ShapeError("init_adapter: w0 columns do not match projector dimension");
  }
  const std::size_t rank = static_cast<std::size_t>(std::llround(trace(p.p)));
  if (rank < 1) throw ContractError("init_adapter: projector rank is zero");

  const std::size_t d_out = w0.rows();
  const std::size_t d_in = w0.cols();
  const SvdResult dec = svd(matmul(w0, p.p));
  const std::size_t k = std::min(rank, dec.sigma.size());

  Matrix b(d_out, rank);
  Matrix a(rank, d_in);
  for (std::size_t j = 0; j < k; ++j) {
    const double root = std::sqrt(dec.sigma[j]);
    for (std::size_t i = 0; i < d_out; ++i) b(i, j) = dec.u(i, j) * root;
    for (std::size_t i = 0; i < d_in; ++i) a(j, i) = root * dec.vt(j, i);
  }

  AdapterInit init;
  init.pair = AdapterPair{std::move(a), std::move(b), rank};
  init.w0_prime = w0 - matmul(init.pair.b, init.pair.a);
  return init;
}

Matrix merge_adapter(const Matrix& w0_prime, const AdapterPair& pair) {
  return w0_prime + matmul(pair.b, pair.a);
}

TheoremReport verify_theorems(const AdapterPair& pair, const Matrix& c,
                              const NullBasis& nb, double tol) {
  TheoremReport rep;
  rep.rank = pair.rank;
  rep.exact_null_dim = nb.exact_null_dim;

  const double a_norm = frobenius(pair.a);
  const double c_norm = frobenius(c);
  rep.ac_rel = frobenius(matmul(pair.a, c)) / (a_norm * c_norm + 1e-300);

  const Matrix p = matmul(nb.u_hat, transpose(nb.u_hat));
  rep.rowspace_resid = frobenius(pair.a - matmul(pair.a, p)) / (a_norm + 1e-300);

  rep.advisory = nb.exact_null_dim < pair.rank;
  rep.pass = !rep.advisory && rep.ac_rel <= tol && rep.rowspace_resid <= tol;
  return rep;
}

}  // namespace kore
