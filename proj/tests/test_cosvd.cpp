#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "kore/cosvd.hpp"
#include "kore/svd.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using kore::CovAccumulator;
using kore::Matrix;
namespace ts = testsupport;

TEST_SUITE_BEGIN("cosvd");

TEST_CASE("plain_truncate") {
  kore::Rng rng(3);

  SUBCASE("k = 0 is a no-op") {
    const Matrix w = ts::random_matrix(rng, 5, 5);
    const auto res = kore::plain_truncate(w, 0);
    CHECK(ts::rel_diff(w, res.w_tilde) <= 1e-10);
    CHECK(res.recon_err <= 1e-10);
  }
  SUBCASE("diagonal case drops the smaller value") {
    const Matrix w = Matrix::from_rows({{3, 0}, {0, 1}});
    const auto res = kore::plain_truncate(w, 1);
    CHECK(res.w_tilde(0, 0) == doctest::Approx(3.0));
    CHECK(std::fabs(res.w_tilde(1, 1)) < 1e-12);
    CHECK(res.discarded == 1);
  }
  SUBCASE("reconstruction error equals the tail singular energy") {
    const Matrix w = ts::random_matrix(rng, 6, 6);
    const auto res = kore::plain_truncate(w, 2);
    const auto sig = kore::svd(w).sigma;
    const double tail = std::sqrt(sig[4] * sig[4] + sig[5] * sig[5]);
    CHECK(res.recon_err == doctest::Approx(tail / kore::frobenius(w)).epsilon(1e-9));
  }
  SUBCASE("k out of range") {
    CHECK_THROWS_AS(kore::plain_truncate(Matrix::identity(3), 3), kore::ContractError);
  }
}

TEST_CASE("asvd_truncate") {
  kore::Rng rng(5);
  const Matrix w = ts::random_matrix(rng, 5, 5);

  SUBCASE("unit scales reduce to the plain method") {
    const std::vector<double> ones(5, 1.0);
    const auto a = kore::asvd_truncate(w, ones, 2, 0.5);
    const auto p = kore::plain_truncate(w, 2);
    CHECK(kore::frobenius(a.w_tilde - p.w_tilde) <= 1e-9);
  }
  SUBCASE("k = 0 is a no-op") {
    std::vector<double> scale(5);
    for (auto& s : scale) s = 0.5 + rng.next_double();
    const auto res = kore::asvd_truncate(w, scale, 0, 0.5);
    CHECK(ts::rel_diff(w, res.w_tilde) <= 1e-9);
  }
  SUBCASE("weighted error never exceeds plain's weighted error") {
    std::vector<double> scale(5);
    for (auto& s : scale) s = 0.2 + 2.0 * rng.next_double();
    const double alpha = 1.0;
    const auto a = kore::asvd_truncate(w, scale, 2, alpha);
    const auto p = kore::plain_truncate(w, 2);
    Matrix diff_p = w - p.w_tilde;
    for (std::size_t i = 0; i < diff_p.rows(); ++i) {
      for (std::size_t j = 0; j < diff_p.cols(); ++j) diff_p(i, j) *= scale[j];
    }
    CHECK(a.weighted_err <= kore::frobenius(diff_p) + 1e-12);
  }
  SUBCASE("non-positive scales are rejected") {
    const std::vector<double> bad = {1.0, 0.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(kore::asvd_truncate(w, bad, 1, 0.5), kore::ContractError);
  }
}

TEST_CASE("cosvd_truncate") {
  kore::Rng rng(7);
  const Matrix w = ts::random_matrix(rng, 4, 4);

  SUBCASE("identity covariance with zero ridge reduces to plain") {
    CovAccumulator acc = CovAccumulator::empty("l", 4);
    acc.c = Matrix::identity(4);
    acc.tokens = 1;
    const auto c_res = kore::cosvd_truncate(w, acc, 1, 0.0);
    const auto p_res = kore::plain_truncate(w, 1);
    CHECK(kore::frobenius(c_res.w_tilde - p_res.w_tilde) <= 1e-8);
  }
  SUBCASE("scaled identity covariance also matches plain (alpha = 3)") {
    CovAccumulator acc = CovAccumulator::empty("l", 4);
    acc.c = 3.0 * Matrix::identity(4);
    acc.tokens = 1;
    const auto c_res = kore::cosvd_truncate(w, acc, 2, 0.0);
    const auto p_res = kore::plain_truncate(w, 2);
    CHECK(kore::frobenius(c_res.w_tilde - p_res.w_tilde) <= 1e-8);
  }
  SUBCASE("k = 0 is a no-op") {
    CovAccumulator acc = CovAccumulator::empty("l", 4);
    acc = kore::absorb(acc, ts::random_matrix(rng, 4, 12));
    const auto res = kore::cosvd_truncate(w, acc, 0, kore::default_ridge(acc));
    CHECK(ts::rel_diff(w, res.w_tilde) <= 1e-8);
  }
  SUBCASE("rank-1 activations survive aggressive truncation") {
    kore::Rng r2(11);
    Matrix x(4, 1);
    {
      std::vector<double> v(4);
      double norm = 0.0;
      for (auto& e : v) {
        e = r2.next_gaussian();
        norm += e * e;
      }
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < 4; ++i) x(i, 0) = v[i] / norm;
    }
    CovAccumulator acc = kore::absorb(CovAccumulator::empty("l", 4), x);
    const Matrix w2 = ts::random_matrix(r2, 4, 4);

    const auto co = kore::cosvd_truncate(w2, acc, 3, kore::default_ridge(acc));
    const auto pl = kore::plain_truncate(w2, 3);

    const Matrix ref = kore::matmul(w2, x);
    const double co_err = kore::frobenius(kore::matmul(co.w_tilde, x) - ref) /
                          kore::frobenius(ref);
    const double pl_err = kore::frobenius(kore::matmul(pl.w_tilde, x) - ref) /
                          kore::frobenius(ref);
    CHECK(co_err <= 1e-6);
    CHECK(pl_err >= 1e-2);
  }
  SUBCASE("singular covariance without ridge is a numeric error") {
    CovAccumulator acc = CovAccumulator::empty("l", 4);  // zero matrix
    acc.tokens = 1;
    CHECK_THROWS_AS(kore::cosvd_truncate(w, acc, 1, 0.0), kore::NumericError);
  }
}

TEST_CASE("retention_report") {
  const ts::TwoTaskFixture fx = ts::make_two_task_fixture(41);
  kore::RetentionConfig cfg;
  cfg.methods = {kore::TruncMethod::plain, kore::TruncMethod::asvd, kore::TruncMethod::cosvd};
  cfg.ks = {0, 2, 4, 6};
  cfg.loss = kore::Loss::mse;
  cfg.covariance_set = "taskA";
  const kore::RetentionReport report =
      kore::retention_report(fx.model, fx.covs, cfg, fx.eval_sets);

  SUBCASE("k = 0 reproduces the untruncated losses") {
    for (const auto method :
         {kore::TruncMethod::plain, kore::TruncMethod::asvd, kore::TruncMethod::cosvd}) {
      for (const auto* set : {"taskA", "taskB"}) {
        CHECK(report.loss_of(method, 0, set) <= 1e-8);
      }
    }
  }
  SUBCASE("task covariance retains the task at the largest discard") {
    CHECK(report.cosvd_beats_plain_at_max_k);
    CHECK(report.loss_of(kore::TruncMethod::cosvd, 6, "taskA") <
          report.loss_of(kore::TruncMethod::plain, 6, "taskA"));
  }
}

TEST_CASE("covariance heatmap") {
  SUBCASE("block means of absolute values") {
    Matrix c(4, 4);
    c(0, 0) = -2.0;
    c(0, 1) = 2.0;
    c(1, 0) = 4.0;
    c(1, 1) = -4.0;
    c(2, 2) = 6.0;
    c(3, 3) = 6.0;
    const Matrix heat = kore::covariance_heatmap(c, 2);
    REQUIRE(heat.rows() == 2);
    CHECK(heat(0, 0) == doctest::Approx(3.0));  // mean of |{-2, 2, 4, -4}|
    CHECK(heat(0, 1) == 0.0);
    CHECK(heat(1, 1) == doctest::Approx(3.0));  // mean of |{6, 0, 0, 6}|
  }
  SUBCASE("dimension at or below 32 stays at the native size") {
    kore::Rng rng(43);
    const Matrix c = ts::random_psd(rng, 8, 8);
    CHECK(kore::covariance_heatmap(c).rows() == 8);
  }
  SUBCASE("large matrices downsample to 32 and CSV has 32 rows") {
    kore::Rng rng(47);
    const Matrix c = ts::random_psd(rng, 64, 16);
    const Matrix heat = kore::covariance_heatmap(c);
    REQUIRE(heat.rows() == 32);
    REQUIRE(heat.cols() == 32);

    const auto path = std::filesystem::temp_directory_path() / "kore_heat_test.csv";
    kore::write_heatmap_csv(heat, path);
    std::ifstream in(path);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == 31);
    }
    CHECK(rows == 32);
    std::filesystem::remove(path);
  }
}

TEST_SUITE_END();
