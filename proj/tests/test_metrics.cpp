#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "doctest.h"

#include "kore/errors.hpp"
#include "kore/metrics.hpp"
#include "kore/rng.hpp"

TEST_SUITE_BEGIN("metrics");

TEST_CASE("cem containment") {
  CHECK(kore::cem("The shooter was Thomas Matthew Crooks.", "Thomas Matthew Crooks") == 1);
  CHECK(kore::cem("London", "Paris") == 0);
  CHECK(kore::cem("PARIS is the capital", "paris") == 1);
  CHECK(kore::cem("He went to new york, then home.", "New York") == 1);
  CHECK_THROWS_AS(kore::cem("anything", ""), kore::ContractError);
}

TEST_CASE("cem raw mode matches literally") {
  CHECK(kore::cem("PARIS is the capital", "paris", true) == 0);
  CHECK(kore::cem("paris is the capital", "paris", true) == 1);
}

TEST_CASE("f1 hand examples") {
  SUBCASE("identical strings") {
    const auto r = kore::score("exact answer", "exact answer");
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall == doctest::Approx(1.0));
    CHECK(r.f1 == doctest::Approx(1.0));
    CHECK(r.cem == 1);
  }
  SUBCASE("new york city vs new york") {
    const auto r = kore::score("new york city", "new york");
    CHECK(r.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r.recall == doctest::Approx(1.0));
    CHECK(r.f1 == doctest::Approx(0.8));
  }
  SUBCASE("disjoint token sets") {
    const auto r = kore::score("alpha beta", "gamma delta");
    CHECK(r.f1 == 0.0);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
  }
  SUBCASE("empty prediction") {
    const auto r = kore::score("", "gold");
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
  }
  SUBCASE("duplicates count once") {
    const auto r = kore::score("a a a b", "a b");
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall == doctest::Approx(1.0));
  }
  SUBCASE("gold with no tokens is a contract error") {
    CHECK_THROWS_AS(kore::score("text", "..."), kore::ContractError);
  }
}

TEST_CASE("evaluate aggregates") {
  using Pair = std::pair<std::string, std::string>;
  SUBCASE("all exact") {
    const std::vector<Pair> pairs = {{"yes", "yes"}, {"done deal", "done deal"}};
    const auto agg = kore::evaluate(pairs);
    CHECK(agg.cem_pct == doctest::Approx(100.0));
    CHECK(agg.f1_pct == doctest::Approx(100.0));
  }
  SUBCASE("half exact, half disjoint") {
    const std::vector<Pair> pairs = {{"alpha", "alpha"}, {"beta", "gamma"}};
    const auto agg = kore::evaluate(pairs);
    CHECK(agg.cem_pct == doctest::Approx(50.0));
    CHECK(agg.f1_pct == doctest::Approx(50.0));
  }
  SUBCASE("seeded 20-pair fixture matches an independent oracle") {
    // Oracle computed straight from the definitions with its own
    // tokenizer; kept apart from the library path on purpose.
    const auto oracle_f1 = [](const std::string& pred, const std::string& gold) {
      const auto words = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : s) {
          if (ch == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
          } else if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
          } else {
            cur.push_back(ch);
          }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
      };
      auto strip = [](std::string t) {
        while (!t.empty() && std::ispunct(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
        while (!t.empty() && std::ispunct(static_cast<unsigned char>(t.back()))) t.pop_back();
        return t;
      };
      std::vector<std::string> pw, gw;
      for (auto& t : words(pred)) {
        auto s = strip(t);
        if (!s.empty()) pw.push_back(s);
      }
      for (auto& t : words(gold)) {
        auto s = strip(t);
        if (!s.empty()) gw.push_back(s);
      }
      std::sort(pw.begin(), pw.end());
      pw.erase(std::unique(pw.begin(), pw.end()), pw.end());
      std::sort(gw.begin(), gw.end());
      gw.erase(std::unique(gw.begin(), gw.end()), gw.end());
      std::size_t common = 0;
      for (const auto& t : gw) {
        if (std::binary_search(pw.begin(), pw.end(), t)) ++common;
      }
      if (common == 0) return 0.0;
      const double p = static_cast<double>(common) / static_cast<double>(pw.size());
      const double r = static_cast<double>(common) / static_cast<double>(gw.size());
      return 2.0 * p * r / (p + r);
    };

    const char* vocab[8] = {"alpha", "beta", "gamma", "delta",
                            "paris", "york", "tokyo", "cairo"};
    kore::Rng rng(55);
    std::vector<Pair> pairs;
    double cem_sum = 0.0;
    double f1_sum = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::string pred, gold;
      const std::size_t np = 1 + rng.next_index(6);
      const std::size_t ng = 1 + rng.next_index(3);
      for (std::size_t t = 0; t < np; ++t) {
        if (!pred.empty()) pred += ' ';
        pred += vocab[rng.next_index(8)];
      }
      for (std::size_t t = 0; t < ng; ++t) {
        if (!gold.empty()) gold += ' ';
        gold += vocab[rng.next_index(8)];
      }
      cem_sum += pred.find(gold) != std::string::npos ? 1.0 : 0.0;
      f1_sum += oracle_f1(pred, gold);
      pairs.emplace_back(pred, gold);
    }
    const auto agg = kore::evaluate(pairs);
    CHECK(agg.cem_pct == doctest::Approx(100.0 * cem_sum / 20.0).epsilon(1e-9));
    CHECK(agg.f1_pct == doctest::Approx(100.0 * f1_sum / 20.0).epsilon(1e-9));
  }
  SUBCASE("empty input is a contract error") {
    CHECK_THROWS_AS(kore::evaluate(std::vector<Pair>{}), kore::ContractError);
  }
}

TEST_CASE("properties over random cases") {
  const char* vocab[10] = {"alpha", "beta",  "gamma", "delta", "paris",
                           "york",  "tokyo", "cairo", "lima",  "oslo"};
  kore::Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::string a, b, suffix;
    const std::size_t na = 1 + rng.next_index(8);
    const std::size_t nb = 1 + rng.next_index(8);
    const std::size_t ns = rng.next_index(4);
    for (std::size_t t = 0; t < na; ++t) {
      if (!a.empty()) a += ' ';
      a += vocab[rng.next_index(10)];
    }
    for (std::size_t t = 0; t < nb; ++t) {
      if (!b.empty()) b += ' ';
      b += vocab[rng.next_index(10)];
    }
    for (std::size_t t = 0; t < ns; ++t) {
      suffix += ' ';
      suffix += vocab[rng.next_index(10)];
    }

    // f1 symmetry.
    CHECK(kore::score(a, b).f1 == doctest::Approx(kore::score(b, a).f1).epsilon(1e-15));

    // cem monotonicity: appending text never breaks containment.
    if (kore::cem(a, b) == 1) CHECK(kore::cem(a + suffix, b) == 1);

    // Ranges.
    const auto r = kore::score(a, b);
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
    CHECK(r.recall >= 0.0);
    CHECK(r.recall <= 1.0);
    CHECK(r.f1 >= 0.0);
    CHECK(r.f1 <= 1.0);
  }
}

TEST_SUITE_END();
