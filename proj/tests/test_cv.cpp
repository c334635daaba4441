#include <doctest.h>

#include <random>

#include "coxko/coxnet.hpp"
#include "coxko/error.hpp"
#include "oracles.hpp"

using namespace coxko;

TEST_SUITE("cv") {
  TEST_CASE("stratified folds balance events") {
    VectorXi d(23);
    for (int i = 0; i < 23; ++i) d[i] = i % 3 == 0;
    const auto folds = stratified_folds(d, 4, 99);
    std::vector<int> ev(4, 0);
    std::vector<int> all(4, 0);
    for (int i = 0; i < 23; ++i) {
      ev[folds[i]] += d[i];
      ++all[folds[i]];
    }
    CHECK(*std::max_element(ev.begin(), ev.end()) - *std::min_element(ev.begin(), ev.end()) <= 1);
    CHECK(*std::max_element(all.begin(), all.end()) - *std::min_element(all.begin(), all.end()) <= 1);
    CHECK(stratified_folds(d, 4, 99) == folds);
    CHECK(stratified_folds(d, 4, 100) != folds);
    CHECK_THROWS_AS(stratified_folds(d, 1, 0), Error);
    CHECK_THROWS_AS(stratified_folds(d, 24, 0), Error);
  }

  TEST_CASE("leave-one-out on ten rows") {
    std::mt19937_64 gen(31);
    const auto data = oracle::random_instance(gen, 10, 2, 0.8);
    const auto fit = cross_validate(data, 10, lambda_grid(data, 20), 5);
    REQUIRE(fit.cv_deviance.has_value());
    CHECK(fit.chosen_lambda >= 0);
    CHECK(fit.chosen_lambda < 20);
    CHECK(fit.empty_test_folds == 10 - data.n_events());
  }

  TEST_CASE("chosen index is the first minimum of the deviance") {
    std::mt19937_64 gen(32);
    const auto data = oracle::random_instance(gen, 80, 5, 0.6, 0, 0.8);
    const auto fit = cross_validate(data, 5, lambda_grid(data, 40), 1);
    const VectorXd& dev = *fit.cv_deviance;
    Eigen::Index best;
    dev.minCoeff(&best);
    for (Eigen::Index g = 0; g < best; ++g) CHECK(dev[g] > dev[best]);
    CHECK(fit.chosen_lambda == best);
    // With real signal the data pick a penalty below lambda_max.
    CHECK(fit.chosen_lambda > 0);
  }

  TEST_CASE("duplicating every row keeps the chosen lambda") {
    std::mt19937_64 gen(33);
    const auto data = oracle::random_instance(gen, 60, 4, 0.7, 0, 0.6);
    const auto grid = lambda_grid(data, 50);
    const auto folds = stratified_folds(data.delta(), 5, 8);
    const auto base = cross_validate(data, folds, grid);

    std::vector<int> rows;
    std::vector<int> folds2;
    for (int rep = 0; rep < 2; ++rep) {
      for (int i = 0; i < data.n(); ++i) {
        rows.push_back(i);
        folds2.push_back(folds[i]);
      }
    }
    const auto doubled = data.subset(rows);
    // Doubling changes lambda_max by nothing (the gradient is an average), so the grid carries over.
    CHECK(lambda_max(doubled) == doctest::Approx(grid[0]).epsilon(1e-12));
    const auto twice = cross_validate(doubled, folds2, grid);
    CHECK(std::abs(twice.chosen_lambda - base.chosen_lambda) <= 1);
  }

  TEST_CASE("pure noise favours heavy penalties") {
    int heavy = 0;
    const int runs = 50;
    for (int r = 0; r < runs; ++r) {
      std::mt19937_64 gen(1000 + r);
      const auto data = oracle::random_instance(gen, 200, 20, 0.7, 0, 0.0);
      const auto fit = cross_validate(data, 10, lambda_grid(data), 77 + r);
      heavy += fit.chosen_lambda < 25;
    }
    CHECK(heavy >= 40);
  }

  TEST_CASE("fold whose training part has no events") {
    VectorXd y = VectorXd::LinSpaced(6, 1, 6);
    VectorXi d = VectorXi::Zero(6);
    d[2] = 1;
    const auto data = SurvivalDataset::create(y, d, MatrixXd::Random(6, 2));
    const std::vector<int> folds = {0, 0, 1, 1, 0, 1};
    try {
      cross_validate(data, folds, {0.5, 0.1});
      FAIL("expected FoldWithoutEvents");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FoldWithoutEvents);
    }
  }

  TEST_CASE("test fold without events contributes zero") {
    std::mt19937_64 gen(34);
    auto data = oracle::random_instance(gen, 30, 2, 1.0);
    VectorXi d = data.delta();
    std::vector<int> folds(30);
    for (int i = 0; i < 30; ++i) {
      folds[i] = i % 3;
      if (folds[i] == 2) d[i] = 0;
    }
    data = SurvivalDataset::create(data.y(), d, data.design());
    const auto fit = cross_validate(data, folds, lambda_grid(data, 10));
    CHECK(fit.empty_test_folds == 1);
    CHECK(fit.cv_deviance->allFinite());
  }
}
