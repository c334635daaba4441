#include <doctest.h>

#include <omp.h>

#include "coxko/error.hpp"
#include "coxko/rng.hpp"
#include "coxko/simbench.hpp"
#include "oracles.hpp"

using namespace coxko;

namespace {

Scenario tiny() {
  Scenario s;
  s.name = "tiny";
  s.n = 120;
  s.p = 12;
  s.beta_case = BetaCase::Case2;
  s.replications = 4;
  s.folds = 4;
  s.seed = 5;
  return s;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("simbench") {
  TEST_CASE("coefficient cases") {
    Scenario s;
    s.p = 30;
    s.beta_case = BetaCase::Case1;
    CHECK(s.beta().head(10) == VectorXd::Constant(10, 5.0));
    CHECK(s.beta().tail(20).isZero(0.0));
    s.beta_case = BetaCase::Case3;
    CHECK(s.support().size() == 20);
    CHECK(s.beta()[19] == 2.0);
    s.beta_case = BetaCase::Null;
    CHECK(s.support().empty());
    CHECK(s.gamma().isZero(0.0));
    s.censoring = Censoring::CovariateDependent;
    CHECK(s.gamma().head(2) == VectorXd::Constant(2, 2.0));
    CHECK(s.gamma().tail(28).isZero(0.0));
  }

  TEST_CASE("scenario validation") {
    Scenario s;
    s.p = 5;
    CHECK(kind_of([&] { s.validate(); }) == ErrorKind::ConfigParse);
    s = Scenario{};
    s.target_rate = 1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = Scenario{};
    s.q = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
    CHECK_NOTHROW(Scenario{}.validate());
  }

  TEST_CASE("gaussian covariates reproduce the AR covariance") {
    Scenario s;
    s.p = 3;
    const MatrixXd x = CovariateGenerator(s).draw(200000, 3, 17);
    CHECK((oracle::sample_cov(x) - oracle::ar_sigma(3, 0.5)).cwiseAbs().maxCoeff() <= 0.01);
  }

  TEST_CASE("scaled t covariates") {
    Scenario s;
    s.p = 1;
    s.cov_dist = CovDist::ScaledT;
    // nu = 3 has no fourth moment, so the sample variance is too noisy to pin;
    // compare the whole distribution with the scaled t_3 law instead.
    VectorXd x = CovariateGenerator(s).draw(200000, 1, 18).col(0);
    std::sort(x.data(), x.data() + x.size());
    const double n = static_cast<double>(x.size());
    double ks = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double t = x[i] * std::sqrt(3.0);  // back to the t_3 scale
      const double cdf = 0.5 + (t / (std::sqrt(3.0) * (1 + t * t / 3)) + std::atan(t / std::sqrt(3.0))) / M_PI;
      ks = std::max({ks, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
    }
    CHECK(ks <= 1.63 / std::sqrt(n));

    s.nu = 10.0;
    const MatrixXd light = CovariateGenerator(s).draw(200000, 1, 18);
    CHECK(std::abs(oracle::sample_cov(light)(0, 0) - 1.0) <= 0.02);
  }

  TEST_CASE("independent coordinates when rho is zero") {
    Scenario s;
    s.p = 2;
    s.rho = 0.0;
    const MatrixXd x = CovariateGenerator(s).draw(200000, 2, 19);
    const MatrixXd c = oracle::sample_cov(x);
    CHECK(std::abs(c(0, 1) / std::sqrt(c(0, 0) * c(1, 1))) <= 0.01);
  }

  TEST_CASE("leading coordinates do not depend on the column count") {
    Scenario s;
    s.p = 8;
    for (CovDist d : {CovDist::GaussianAR, CovDist::ScaledT}) {
      s.cov_dist = d;
      const CovariateGenerator gen(s);
      CHECK((gen.draw(50, 8, 3).leftCols(3) - gen.draw(50, 3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  TEST_CASE("survival times") {
    const int n = 1000000;
    const VectorXd t = gen_survival(MatrixXd::Zero(n, 1), VectorXd::Zero(1), Baseline::Constant, 21);
    CHECK(std::abs(t.mean() / 2.0 - 1.0) <= 0.01);
    const VectorXd t2 = gen_survival(MatrixXd::Zero(n, 1), VectorXd::Zero(1), Baseline::Linear, 22);
    CHECK(std::abs(t2.array().square().mean() - 1.0) <= 0.01);
    const VectorXd t3 =
        gen_survival(MatrixXd::Constant(n, 1, std::log(2.0)), VectorXd::Ones(1), Baseline::Constant, 23);
    CHECK(std::abs(t3.mean() - 1.0) <= 0.01);
  }

  TEST_CASE("calibration against the competing-exponential closed form") {
    Scenario s;
    s.beta_case = BetaCase::Null;
    s.target_rate = 0.2;
    const auto a = calibrate_censoring(s);
    CHECK(std::abs(a.parameter - 0.125) <= 0.01);
    CHECK(std::abs(a.achieved_rate - 0.2) <= 0.01);
    s.target_rate = 0.5;
    CHECK(std::abs(calibrate_censoring(s).parameter - 0.5) <= 0.01);
    CHECK(calibrate_censoring(s).parameter == calibrate_censoring(s).parameter);
  }

  TEST_CASE("covariate-dependent calibration") {
    Scenario s = tiny();
    s.baseline = Baseline::Linear;
    s.censoring = Censoring::CovariateDependent;
    for (double target : {0.2, 0.4}) {
      s.target_rate = target;
      const auto c = calibrate_censoring(s);
      CHECK(std::abs(c.achieved_rate - target) <= 0.01);
    }
  }

  TEST_CASE("replicated datasets are reproducible and distinct") {
    const Scenario s = tiny();
    const double param = calibrate_censoring(s).parameter;
    const auto a = gen_dataset(s, 0, param);
    const auto b = gen_dataset(s, 0, param);
    const auto c = gen_dataset(s, 1, param);
    CHECK(a.y() == b.y());
    CHECK(a.design() == b.design());
    CHECK(a.y() != c.y());
  }

  TEST_CASE("scenario runs are identical for any thread count") {
    const Scenario s = tiny();
    const int before = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = run_scenario(s);
    omp_set_num_threads(3);
    const auto three = run_scenario(s);
    omp_set_num_threads(before);
    CHECK(aggregate_report({one}).csv() == aggregate_report({three}).csv());
    for (int k = 0; k < kMethodCount; ++k) {
      double sum = 0;
      for (const auto& r : one.per_rep) sum += r.methods[k].fdp;
      CHECK(one.summary[k].fdr == doctest::Approx(sum / one.used()).epsilon(1e-15));
      CHECK(one.summary[k].fdr >= 0.0);
      CHECK(one.summary[k].fdr <= 1.0);
      CHECK(one.summary[k].power >= 0.0);
      CHECK(one.summary[k].power <= 1.0);
    }
  }

  TEST_CASE("report rows and round trip") {
    const auto report = run_scenario(tiny());
    const auto table = aggregate_report({report});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[2].method == "CoxKnockoff+");
    const auto parsed = parse_report_csv(table.csv());
    REQUIRE(parsed.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(parsed[k].fdr - table.rows[k].fdr) <= 1e-12);
      CHECK(std::abs(parsed[k].power - table.rows[k].power) <= 1e-12);
      CHECK(std::abs(parsed[k].mfdr - table.rows[k].mfdr) <= 1e-12);
      CHECK(std::abs(parsed[k].censoring_achieved - table.rows[k].censoring_achieved) <= 1e-12);
      CHECK(parsed[k].status == "ok");
    }
    CHECK(table.text().find("CoxKnockoff+") != std::string::npos);
  }

  TEST_CASE("fully excluded scenario is flagged") {
    ScenarioReport report;
    report.scenario = tiny();
    report.per_rep.resize(2);
    for (auto& r : report.per_rep) r.excluded = true;
    summarize(report);
    const auto table = aggregate_report({report});
    for (const auto& row : table.rows) CHECK(row.status == "insufficient");
    CHECK_THROWS_AS(aggregate_report({}), Error);
  }

  TEST_CASE("scenario text format") {
    const Scenario s = preset_scenario("study3_case2_desk");
    const Scenario back = parse_scenario(scenario_to_text(s));
    CHECK(scenario_to_text(back) == scenario_to_text(s));
    CHECK(back.baseline == Baseline::Linear);
    CHECK(back.replications == 50);

    try {
      parse_scenario("n = 100\ncolour = blue\n");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigParse);
      CHECK(std::string(e.what()).find("colour") != std::string::npos);
    }
    CHECK(kind_of([] { parse_scenario("n = many\n"); }) == ErrorKind::ConfigParse);
    CHECK(kind_of([] { parse_scenario("cov_dist = cauchy\n"); }) == ErrorKind::ConfigParse);
    CHECK(kind_of([] { parse_scenario("n = 100\nn = 200\n"); }) == ErrorKind::ConfigParse);
    CHECK(parse_scenario("# comment\nseed = 18446744073709551615  # max\n").seed == ~std::uint64_t{0});
  }

  TEST_CASE("presets") {
    for (const char* name : {"study1_case2_desk", "global_null_desk", "study3_case2_desk"}) {
      CHECK(has_preset(name));
      CHECK_NOTHROW(preset_scenario(name).validate());
    }
    const auto null = preset_scenario("global_null_desk");
    CHECK(null.n == 300);
    CHECK(null.support().empty());
    CHECK(kind_of([] { preset_scenario("nope"); }) == ErrorKind::ConfigParse);
  }

  TEST_CASE("bundled scenario files parse and match their presets") {
    const std::string dir = COXKO_TEST_DATA "/../../scenarios/";
    for (const char* name : {"study1_case2_desk", "global_null_desk", "study3_case2_desk"}) {
      const Scenario file = load_scenario(dir + name + ".cfg");
      CHECK(scenario_to_text(file) == scenario_to_text(preset_scenario(name)));
    }
    CHECK_NOTHROW(load_scenario(dir + "study1_case2_t_full.cfg"));
  }
}
