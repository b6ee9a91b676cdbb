#include "kore/cosvd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "kore/svd.hpp"

namespace kore {

namespace {

Matrix truncate_reconstruct(const SvdResult& dec, std::size_t keep) {
  SvdResult kept = dec;
  for (std::size_t j = keep; j < kept.sigma.size(); ++j) kept.sigma[j] = 0.0;
  return svd_reconstruct(kept);
}

void check_k(const Matrix& w, std::size_t k) {
  const std::size_t min_dim = std::min(w.rows(), w.cols());
  if (k >= min_dim) {
    throw ContractError("truncate: k must be smaller than min(d_out, d_in)");
  }
}

}  // namespace

std::string trunc_method_name(TruncMethod m) {
  switch (m) {
    case TruncMethod::plain: return "plain";
    case TruncMethod::asvd: return "asvd";
    case TruncMethod::cosvd: return "cosvd";
  }
  return "plain";
}

TruncMethod trunc_method_from_name(const std::string& name) {
  if (name == "plain") return TruncMethod::plain;
  if (name == "asvd") return TruncMethod::asvd;
  if (name == "cosvd") return TruncMethod::cosvd;
  throw FormatError("unknown truncation method: " + name);
}

TruncationResult plain_truncate(const Matrix& w, std::size_t k) {
  check_k(w, k);
  const SvdResult dec = svd(w);
  TruncationResult res;
  res.method = TruncMethod::plain;
  res.discarded = k;
  res.w_tilde = truncate_reconstruct(dec, dec.sigma.size() - k);
  const Matrix diff = w - res.w_tilde;
  res.recon_err = frobenius(diff) / (frobenius(w) + 1e-300);
  res.weighted_err = frobenius(diff);
  return res;
}

TruncationResult asvd_truncate(const Matrix& w, std::span<const double> act_scale,
                               std::size_t k, double alpha) {
  check_k(w, k);
  if (act_scale.size() != w.cols()) {
    throw ShapeError("asvd_truncate: act_scale length must equal w columns");
  }
  std::vector<double> s(act_scale.size());
  for (std::size_t i = 0; i < act_scale.size(); ++i) {
    if (!(act_scale[i] > 0.0)) {
      throw ContractError("asvd_truncate: activation scales must be positive");
    }
    s[i] = std::pow(act_scale[i], alpha);
  }

  Matrix ws = w;
  for (std::size_t i = 0; i < ws.rows(); ++i) {
    for (std::size_t j = 0; j < ws.cols(); ++j) ws(i, j) *= s[j];
  }
  const SvdResult dec = svd(ws);
  Matrix trunc = truncate_reconstruct(dec, dec.sigma.size() - k);
  for (std::size_t i = 0; i < trunc.rows(); ++i) {
    for (std::size_t j = 0; j < trunc.cols(); ++j) trunc(i, j) /= s[j];
  }

  TruncationResult res;
  res.method = TruncMethod::asvd;
  res.discarded = k;
  res.w_tilde = std::move(trunc);
  res.recon_err = frobenius(w - res.w_tilde) / (frobenius(w) + 1e-300);
  Matrix weighted_diff = w - res.w_tilde;
  for (std::size_t i = 0; i < weighted_diff.rows(); ++i) {
    for (std::size_t j = 0; j < weighted_diff.cols(); ++j) weighted_diff(i, j) *= s[j];
  }
  res.weighted_err = frobenius(weighted_diff);
  return res;
}

double default_ridge(const CovAccumulator& c, double factor) {
  const double d = static_cast<double>(c.dim > 0 ? c.dim : 1);
  return factor * trace(c.normalized()) / d;
}

TruncationResult cosvd_truncate(const Matrix& w, const CovAccumulator& c,
                                std::size_t k, double ridge) {
  check_k(w, k);
  if (c.dim != w.cols()) {
    throw ShapeError("cosvd_truncate: covariance dim must equal w columns");
  }
  Matrix c_hat = c.normalized();
  for (std::size_t i = 0; i < c_hat.rows(); ++i) c_hat(i, i) += ridge;

  Matrix c_inv;
  try {
    c_inv = inverse(c_hat);
  } catch (const NumericError&) {
    throw NumericError("cosvd_truncate: covariance singular after ridge");
  }

  const Matrix wc = matmul(w, c_hat);
  const SvdResult dec = svd(wc);
  const Matrix trunc = truncate_reconstruct(dec, dec.sigma.size() - k);

  TruncationResult res;
  res.method = TruncMethod::cosvd;
  res.discarded = k;
  res.w_tilde = matmul(trunc, c_inv);
  res.recon_err = frobenius(w - res.w_tilde) / (frobenius(w) + 1e-300);
  res.weighted_err = frobenius(matmul(w - res.w_tilde, c_hat));
  return res;
}

double RetentionReport::loss_of(TruncMethod method, std::size_t k,
                                const std::string& set) const {
  for (const auto& e : entries) {
    if (e.method == method && e.k == k && e.set == set) return e.loss;
  }
  throw Error("retention report: no entry for " + trunc_method_name(method) + "/k=" +
              std::to_string(k) + "/" + set);
}

RetentionReport retention_report(const ToyModel& model,
                                 const std::map<std::string, CovAccumulator>& covs,
                                 const RetentionConfig& cfg,
                                 std::span<const EvalSet> eval_sets) {
  if (eval_sets.empty()) throw ContractError("retention_report: no eval sets");
  model.validate();

  RetentionReport report;
  for (const TruncMethod method : cfg.methods) {
    for (const std::size_t k : cfg.ks) {
      // Rebuild the model with every linear weight truncated. Adapters are
      // merged into the weight first, so truncation sees the deployed W*.
      ToyModel truncated = model;
      for (auto& layer : truncated.layers) {
        const Matrix w_eff = layer.effective_weight();
        layer.adapter.reset();
        const auto cov_of = [&]() -> const CovAccumulator& {
          const auto it = covs.find(layer.layer_id);
          if (it == covs.end()) {
            throw Error("retention_report: no covariance for layer " + layer.layer_id);
          }
          return it->second;
        };
        switch (method) {
          case TruncMethod::plain:
            layer.w = plain_truncate(w_eff, k).w_tilde;
            break;
          case TruncMethod::asvd: {
            const CovAccumulator& acc = cov_of();
            const double ridge = default_ridge(acc, cfg.ridge_factor);
            const Matrix norm = acc.normalized();
            std::vector<double> scale(acc.dim);
            for (std::size_t i = 0; i < acc.dim; ++i) {
              scale[i] = std::sqrt(norm(i, i) + ridge);
            }
            layer.w = asvd_truncate(w_eff, scale, k, cfg.alpha).w_tilde;
            break;
          }
          case TruncMethod::cosvd: {
            const CovAccumulator& acc = cov_of();
            layer.w =
                cosvd_truncate(w_eff, acc, k, default_ridge(acc, cfg.ridge_factor)).w_tilde;
            break;
          }
        }
      }

      for (const EvalSet& set : eval_sets) {
        double total = 0.0;
        for (const TrainSample& sample : set.data) {
          total += loss_value(cfg.loss, forward(truncated, sample.input), sample.target);
        }
        report.entries.push_back(RetentionEntry{method, k, set.name, total});
      }
    }
  }

  if (!cfg.ks.empty() && !cfg.covariance_set.empty()) {
    const auto has = [&](TruncMethod m) {
      return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
    };
    const std::size_t max_k = *std::max_element(cfg.ks.begin(), cfg.ks.end());
    if (has(TruncMethod::plain) && has(TruncMethod::cosvd) && max_k > 0) {
      report.cosvd_beats_plain_at_max_k =
          report.loss_of(TruncMethod::cosvd, max_k, cfg.covariance_set) <
          report.loss_of(TruncMethod::plain, max_k, cfg.covariance_set);
    }
  }
  return report;
}

Matrix covariance_heatmap(const Matrix& c, std::size_t out_dim) {
  const std::size_t d = c.rows();
  const std::size_t t = std::min(out_dim, d);
  if (t == 0) throw ContractError("covariance_heatmap: empty matrix");
  Matrix heat(t, t);
  for (std::size_t bi = 0; bi < t; ++bi) {
    const std::size_t r0 = bi * d / t;
    const std::size_t r1 = (bi + 1) * d / t;
    for (std::size_t bj = 0; bj < t; ++bj) {
      const std::size_t c0 = bj * d / t;
      const std::size_t c1 = (bj + 1) * d / t;
      double sum = 0.0;
      for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = c0; j < c1; ++j) sum += std::fabs(c(i, j));
      }
      heat(bi, bj) = sum / static_cast<double>((r1 - r0) * (c1 - c0));
    }
  }
  return heat;
}

void write_heatmap_csv(const Matrix& heat, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write heatmap: " + path.string());
  char buf[64];
  for (std::size_t i = 0; i < heat.rows(); ++i) {
    for (std::size_t j = 0; j < heat.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", heat(i, j));
      out << buf;
      if (j + 1 < heat.cols()) out << ",";
    }
    out << "\n";
  }
}

}  // namespace kore
