#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kore/covariance.hpp"
#include "kore/model.hpp"
#include "kore/trainer.hpp"

namespace kore {

enum class TruncMethod { plain, asvd, cosvd };

std::string trunc_method_name(TruncMethod m);
TruncMethod trunc_method_from_name(const std::string& name);

struct TruncationResult {
  TruncMethod method = TruncMethod::plain;
  std::size_t discarded = 0;
  Matrix w_tilde;
  double recon_err = 0.0;     // |w - w_tilde|_F / |w|_F
  double weighted_err = 0.0;  // |(w - w_tilde) * S|_F in the method's weighting
};

/// Drops the k smallest singular triplets of w and reconstructs.
TruncationResult plain_truncate(const Matrix& w, std::size_t k);

/// Activation-aware variant: truncate svd(w * diag(scale^alpha)) and map
/// back through the inverse scaling. ContractError on non-positive scales.
TruncationResult asvd_truncate(const Matrix& w, std::span<const double> act_scale,
                               std::size_t k, double alpha);

constexpr double kDefaultRidgeFactor = 1e-6;

/// Covariance-weighted variant: truncate svd(w * c_hat) with
/// c_hat = C/tokens + ridge*I and map back through c_hat^-1.
/// NumericError when c_hat is singular after the ridge.
TruncationResult cosvd_truncate(const Matrix& w, const CovAccumulator& c,
                                std::size_t k, double ridge);

/// ridge = factor * trace(C/tokens) / dim, the default conditioning ridge.
double default_ridge(const CovAccumulator& c, double factor = kDefaultRidgeFactor);

struct EvalSet {
  std::string name;
  std::vector<TrainSample> data;
};

struct RetentionConfig {
  std::vector<TruncMethod> methods;
  std::vector<std::size_t> ks;
  double alpha = 0.5;
  double ridge_factor = kDefaultRidgeFactor;
  Loss loss = Loss::mse;
  /// Eval set whose activations produced the covariance; the directional
  /// finding compares cosvd against plain on this set at the largest k.
  std::string covariance_set;
};

struct RetentionEntry {
  TruncMethod method;
  std::size_t k = 0;
  std::string set;
  double loss = 0.0;
};

struct RetentionReport {
  std::vector<RetentionEntry> entries;
  /// True when cosvd with the task covariance retains the task's loss
  /// strictly better than plain SVD at the largest discard level.
  bool cosvd_beats_plain_at_max_k = false;

  double loss_of(TruncMethod method, std::size_t k, const std::string& set) const;
};

/// Replaces every linear weight by its truncation (adapters merged first)
/// and records the eval loss per set for each method and discard level.
RetentionReport retention_report(const ToyModel& model,
                                 const std::map<std::string, CovAccumulator>& covs,
                                 const RetentionConfig& cfg,
                                 std::span<const EvalSet> eval_sets);

/// Non-overlapping block means of |C|, at most out_dim x out_dim.
Matrix covariance_heatmap(const Matrix& c, std::size_t out_dim = 32);

/// Row-major CSV, one row per line.
void write_heatmap_csv(const Matrix& heat, const std::filesystem::path& path);

}  // namespace kore
