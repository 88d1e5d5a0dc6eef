#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <random>

#include "hammock/order.hpp"
#include "support.hpp"

using namespace hammock;
using hammock::testing::data_path;

namespace {

using hammock::testing::brute_force_order;
using hammock::testing::oracle_corr;

Column numeric(std::string name, const std::vector<double>& values) {
  return hammock::testing::numeric_column(std::move(name), values);
}

}  // namespace

TEST(PairwiseCorr, Identities) {
  Column x = numeric("x", {1, 4, 2, 8, 5});
  Column neg = numeric("neg", {-1, -4, -2, -8, -5});
  EXPECT_NEAR(pairwise_corr(x, x), 1.0, 1e-15);
  EXPECT_NEAR(pairwise_corr(x, neg), -1.0, 1e-15);
}

TEST(PairwiseCorr, UsesCompleteRowsOnly) {
  const double NA = std::nan("");
  std::vector<double> a{1, 2, NA, 4, 5, 9}, b{2, 1, 7, 5, NA, 3};
  EXPECT_NEAR(pairwise_corr(numeric("a", a), numeric("b", b)), oracle_corr(a, b), 1e-12);
}

TEST(PairwiseCorr, Errors) {
  EXPECT_THROW(pairwise_corr(numeric("a", {1}), numeric("b", {2})), Error);
  EXPECT_THROW(pairwise_corr(numeric("a", {1, 1, 1}), numeric("b", {1, 2, 3})), Error);
  EXPECT_THROW(pairwise_corr(numeric("a", {1, 2}), numeric("b", {1, 2, 3})), Error);
}

TEST(PairwiseCorr, MileageAndWeight) {
  Dataset ds = load_csv(data_path("auto.csv"));
  auto t0 = std::chrono::steady_clock::now();
  double r = pairwise_corr(ds.at("mpg"), ds.at("weight"));
  auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_NEAR(r, -0.80, 0.01);
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 1.0);
}

TEST(CorrMatrixTest, SymmetricUnitDiagonalAndUndefinedSentinel) {
  std::istringstream in("a,b,c\n1,2,5\n2,1,5\n3,4,5\n");
  Dataset ds = parse_csv(in);
  CorrMatrix m = corr_matrix(ds, {"a", "b", "c"});
  EXPECT_EQ(*m.at(0, 0), 1.0);
  EXPECT_EQ(m.at(0, 1), m.at(1, 0));
  EXPECT_FALSE(m.at(0, 2));
  EXPECT_FALSE(m.at(2, 2));
}

TEST(GreedyOrder, TwoVariables) {
  Dataset ds = load_csv(data_path("auto.csv"));
  for (auto mode : {OrderMode::max_corr, OrderMode::min_sq_corr})
    EXPECT_EQ(greedy_order(ds, {"price", "mpg"}, "mpg", mode), (std::vector<std::string>{"mpg", "price"}));
}

TEST(GreedyOrder, AutoFixtureStartingFromMileage) {
  Dataset ds = load_csv(data_path("auto.csv"));
  std::vector<std::string> vars{"mpg", "weight", "foreign", "rep78", "headroom", "price"};
  auto out = greedy_order(ds, vars, "mpg", OrderMode::max_corr);
  ASSERT_EQ(out.size(), vars.size());
  EXPECT_EQ(out[1], "weight");
  EXPECT_EQ(out[2], "foreign");
  EXPECT_EQ(out, vars);

  auto low = greedy_order(ds, vars, "mpg", OrderMode::min_sq_corr);
  EXPECT_EQ(low.front(), "mpg");
  EXPECT_NE(low[1], "weight");
}

TEST(GreedyOrder, MatchesBruteForceOnSyntheticTables) {
  std::mt19937 rng(42);
  std::normal_distribution<double> noise(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    // Plant correlations by mixing a shared latent factor with per-column weights.
    std::vector<std::vector<double>> cols(4, std::vector<double>(30));
    std::uniform_real_distribution<double> weight(-2, 2);
    double w[4];
    for (double& x : w) x = weight(rng);
    for (std::size_t i = 0; i < 30; ++i) {
      double latent = noise(rng);
      for (int j = 0; j < 4; ++j) cols[j][i] = w[j] * latent + noise(rng);
    }
    std::vector<Column> columns;
    std::vector<std::string> names;
    for (int j = 0; j < 4; ++j) {
      names.push_back("x" + std::to_string(j));
      columns.push_back(numeric(names.back(), cols[j]));
    }
    Dataset ds(columns);
    for (bool max_mode : {true, false}) {
      std::size_t start = static_cast<std::size_t>(trial % 4);
      auto expected = brute_force_order(cols, start, max_mode);
      auto got = greedy_order(ds, names, names[start], max_mode ? OrderMode::max_corr : OrderMode::min_sq_corr);
      for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(got[i], names[expected[i]]);
    }
  }
}

TEST(GreedyOrder, InvariantsAndScaleInvariance) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Column> cols, scaled;
    std::vector<std::string> names;
    for (int j = 0; j < 5; ++j) {
      std::vector<double> v(20), s(20);
      for (int i = 0; i < 20; ++i) {
        v[i] = u(rng) + (j % 2) * i;
        s[i] = v[i] * (j + 1) * 3.5;
      }
      names.push_back("c" + std::to_string(j));
      cols.push_back(numeric(names.back(), v));
      scaled.push_back(numeric(names.back(), s));
    }
    Dataset ds(cols), ds2(scaled);
    auto out = greedy_order(ds, names, "c2", OrderMode::max_corr);
    EXPECT_EQ(out.front(), "c2");
    auto sorted = out;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, names);
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
      for (std::size_t j = i + 2; j < out.size(); ++j)
        EXPECT_GE(std::fabs(pairwise_corr(ds.at(out[i]), ds.at(out[i + 1]))),
                  std::fabs(pairwise_corr(ds.at(out[i]), ds.at(out[j]))));
    EXPECT_EQ(greedy_order(ds2, names, "c2", OrderMode::max_corr), out);
  }
}

TEST(GreedyOrder, Errors) {
  std::istringstream in("a,b,c\n1,2,5\n2,1,5\n3,4,5\n");
  Dataset ds = parse_csv(in);
  EXPECT_THROW(greedy_order(ds, {"a", "b"}, "zzz", OrderMode::max_corr), Error);
  try {
    greedy_order(ds, {"a", "c"}, "a", OrderMode::max_corr);
    FAIL();
  } catch (const Error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("'a'"), std::string::npos);
    EXPECT_NE(msg.find("'c'"), std::string::npos);
  }
}
