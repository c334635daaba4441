#include "coxko/simbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Cholesky>

#include "coxko/error.hpp"
#include "coxko/rng.hpp"

namespace coxko {

namespace {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t rep, Stream stream) {
  return derive_key({seed, rep, static_cast<std::uint64_t>(stream)});
}

// Calibration draws live outside the replication index space.
constexpr std::uint64_t kCalibrationRep = ~std::uint64_t{0};

MatrixXd ar_covariance(int p, double rho) {
  MatrixXd sigma(p, p);
  for (int k = 0; k < p; ++k) {
    for (int l = 0; l < p; ++l) sigma(k, l) = std::pow(rho, std::abs(k - l));
  }
  return sigma;
}

}  // namespace

const char* to_string(BetaCase value) {
  switch (value) {
    case BetaCase::Null: return "null";
    case BetaCase::Case1: return "case1";
    case BetaCase::Case2: return "case2";
    case BetaCase::Case3: return "case3";
  }
  return "?";
}

const char* to_string(CovDist value) {
  return value == CovDist::GaussianAR ? "gaussian_ar" : "scaled_t";
}

const char* to_string(Baseline value) { return value == Baseline::Constant ? "constant" : "linear"; }

const char* to_string(Censoring value) {
  return value == Censoring::IndependentExponential ? "independent_exponential" : "covariate_dependent";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::CoxLasso: return "CoxLasso";
    case Method::CoxKnockoff: return "CoxKnockoff";
    case Method::CoxKnockoffPlus: return "CoxKnockoff+";
  }
  return "?";
}

VectorXd Scenario::beta() const {
  VectorXd b = VectorXd::Zero(p);
  switch (beta_case) {
    case BetaCase::Null: break;
    case BetaCase::Case1: b.head(std::min(p, 10)).setConstant(5.0); break;
    case BetaCase::Case2: b.head(std::min(p, 10)).setConstant(2.0); break;
    case BetaCase::Case3: b.head(std::min(p, 20)).setConstant(2.0); break;
  }
  return b;
}

VectorXd Scenario::gamma() const {
  VectorXd g = VectorXd::Zero(p);
  if (censoring == Censoring::CovariateDependent) g.head(std::min(p, 2)).setConstant(2.0);
  return g;
}

std::vector<int> Scenario::support() const {
  std::vector<int> out;
  const VectorXd b = beta();
  for (int j = 0; j < p; ++j) {
    if (b[j] != 0.0) out.push_back(j);
  }
  return out;
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigParse, msg); };
  if (p < 1) fail("p must be positive");
  if (folds < 2) fail("folds must be at least 2");
  if (n < std::max(3, folds)) fail("n must be at least max(3, folds)");
  const int support_size = beta_case == BetaCase::Null ? 0 : (beta_case == BetaCase::Case3 ? 20 : 10);
  if (support_size > p) fail("beta_case support exceeds p");
  if (censoring == Censoring::CovariateDependent && p < 2) fail("covariate_dependent censoring needs p >= 2");
  if (!(target_rate > 0.0 && target_rate < 1.0)) fail("target_rate must lie in (0, 1)");
  if (!(q > 0.0 && q < 1.0)) fail("q must lie in (0, 1)");
  if (replications < 1) fail("replications must be positive");
  if (!(std::abs(rho) < 1.0)) fail("rho must lie in (-1, 1)");
  if (!(nu > 2.0)) fail("nu must exceed 2");
  if (name.empty() || name.find_first_of(",\n\r\"") != std::string::npos) {
    fail("name must be nonempty without commas or quotes");
  }
}

CovariateGenerator::CovariateGenerator(const Scenario& scenario)
    : dist_(scenario.cov_dist), nu_(scenario.nu) {
  Eigen::LLT<MatrixXd> llt(ar_covariance(scenario.p, scenario.rho));
  chol_ = llt.matrixL();
}

MatrixXd CovariateGenerator::draw(int rows, int cols, std::uint64_t key) const {
  MatrixXd x(rows, cols);
  const auto lower = chol_.topLeftCorner(cols, cols).triangularView<Eigen::Lower>();
  const double t_scale = std::sqrt((nu_ - 2.0) / nu_);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    CounterRng rng(derive_key({key, static_cast<std::uint64_t>(i)}));
    double mult = 1.0;
    if (dist_ == CovDist::ScaledT) mult = t_scale / std::sqrt(rng.gamma(nu_ / 2.0, nu_ / 2.0));
    VectorXd g(cols);
    for (int j = 0; j < cols; ++j) g[j] = rng.normal();
    x.row(i) = mult * (lower * g).transpose();
  }
  return x;
}

MatrixXd gen_covariates(const Scenario& scenario, int rep_index) {
  const CovariateGenerator gen(scenario);
  return gen.draw(scenario.n, scenario.p,
                  stream_key(scenario.seed, static_cast<std::uint64_t>(rep_index), Stream::Covariates));
}

VectorXd gen_survival(const MatrixXd& x, const VectorXd& beta, Baseline baseline, std::uint64_t key) {
  if (x.cols() != beta.size()) throw Error(ErrorKind::DimensionMismatch, "beta length");
  const VectorXd eta = x * beta;
  VectorXd t(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    CounterRng rng(derive_key({key, static_cast<std::uint64_t>(i)}));
    const double e = -std::log(rng.uniform());
    if (baseline == Baseline::Constant) {
      t[i] = e / (0.5 * std::exp(eta[i]));  // hazard 0.5 exp(eta)
    } else {
      t[i] = std::sqrt(e * std::exp(-eta[i]));  // cumulative hazard t^2 exp(eta)
    }
  }
  return t;
}

VectorXd gen_censoring(const Scenario& scenario, const MatrixXd& x, double parameter,
                       std::uint64_t key) {
  VectorXd u(x.rows());
  VectorXd shift = VectorXd::Zero(x.rows());
  if (scenario.censoring == Censoring::CovariateDependent) {
    shift = x * scenario.gamma().head(x.cols());
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    CounterRng rng(derive_key({key, static_cast<std::uint64_t>(i)}));
    const double e = rng.exponential();
    u[i] = scenario.censoring == Censoring::IndependentExponential
               ? e / parameter
               : parameter * std::exp(shift[i]) * e;
  }
  return u;
}

CalibrationResult calibrate_censoring(const Scenario& scenario, int draws) {
  scenario.validate();
  const std::vector<int> support = scenario.support();
  int cols = support.empty() ? 1 : support.back() + 1;
  if (scenario.censoring == Censoring::CovariateDependent) cols = std::max(cols, 2);

  const CovariateGenerator gen(scenario);
  const MatrixXd x = gen.draw(draws, cols, stream_key(scenario.seed, kCalibrationRep, Stream::Covariates));
  const VectorXd t = gen_survival(x, scenario.beta().head(cols), scenario.baseline,
                                  stream_key(scenario.seed, kCalibrationRep, Stream::Survival));
  const std::uint64_t censor_key = stream_key(scenario.seed, kCalibrationRep, Stream::Censoring);

  CalibrationResult result;
  auto rate_at = [&](double parameter) {
    ++result.evaluations;
    const VectorXd u = gen_censoring(scenario, x, parameter, censor_key);
    return static_cast<double>((t.array() > u.array()).count()) / draws;
  };

  // Censoring increases with the exponential rate and decreases with the mean
  // multiplier; `above` marks the large-parameter side of the target either way.
  const double direction = scenario.censoring == Censoring::IndependentExponential ? 1.0 : -1.0;
  const double target = scenario.target_rate;
  auto above = [&](double rate) { return direction * (rate - target) >= 0.0; };

  double lo = 1.0;
  double hi = 1.0;
  double rate = rate_at(1.0);
  bool bracketed = false;
  if (above(rate)) {
    for (int k = 0; k < 60 && !bracketed; ++k) {
      lo *= 0.5;
      bracketed = !above(rate_at(lo));
    }
  } else {
    for (int k = 0; k < 60 && !bracketed; ++k) {
      hi *= 2.0;
      bracketed = above(rate_at(hi));
    }
  }
  if (!bracketed) throw Error(ErrorKind::CalibrationFailed, "could not bracket the target rate");

  // Invariant: lo < hi, with lo on the small-parameter side of the target.
  double rate_lo = rate_at(lo);
  double rate_hi = rate_at(hi);
  for (int k = 0; k < 100; ++k) {
    const double ratio = hi / lo;
    if (ratio - 1.0 < 1e-12) break;
    const double mid = std::sqrt(lo * hi);
    const double r = rate_at(mid);
    if (above(r)) {
      hi = mid;
      rate_hi = r;
    } else {
      lo = mid;
      rate_lo = r;
    }
  }
  if (std::abs(rate_lo - target) < std::abs(rate_hi - target)) {
    result.parameter = lo;
    result.achieved_rate = rate_lo;
  } else {
    result.parameter = hi;
    result.achieved_rate = rate_hi;
  }
  if (std::abs(result.achieved_rate - target) > 0.01) {
    throw Error(ErrorKind::CalibrationFailed,
                "best achievable censoring rate " + std::to_string(result.achieved_rate));
  }
  return result;
}

SurvivalDataset gen_dataset(const Scenario& scenario, int rep_index, double censoring_parameter) {
  const auto rep = static_cast<std::uint64_t>(rep_index);
  const MatrixXd x = gen_covariates(scenario, rep_index);
  const VectorXd t = gen_survival(x, scenario.beta(), scenario.baseline,
                                  stream_key(scenario.seed, rep, Stream::Survival));
  const VectorXd u = gen_censoring(scenario, x, censoring_parameter,
                                   stream_key(scenario.seed, rep, Stream::Censoring));
  VectorXd y(scenario.n);
  VectorXi delta(scenario.n);
  for (int i = 0; i < scenario.n; ++i) {
    y[i] = std::min(t[i], u[i]);
    delta[i] = t[i] <= u[i] ? 1 : 0;
  }
  return SurvivalDataset::create(std::move(y), std::move(delta), x);
}

ReplicationRecord run_replication(const Scenario& scenario, int rep_index, double censoring_parameter,
                                  const PathOptions& path) {
  const auto start = std::chrono::steady_clock::now();
  ReplicationRecord record;
  record.rep = rep_index;

  const SurvivalDataset data = gen_dataset(scenario, rep_index, censoring_parameter);
  record.censoring_rate = data.censoring_rate();

  PipelineOptions options;
  options.folds = scenario.folds;
  options.q = scenario.q;
  options.seed = derive_key({scenario.seed, static_cast<std::uint64_t>(rep_index)});
  options.path = path;

  const LassoSelection lasso = select_coxlasso(data, options);
  const KnockoffSelection ko = select_coxknockoff(data, options);
  if (!lasso.converged || !ko.converged) {
    record.excluded = true;
    record.reason = "solver did not converge at the chosen lambda";
  }

  const std::vector<int> truth = scenario.support();
  const bool power = !truth.empty();
  auto fill = [&](Method method, const std::vector<int>& selected) {
    const TruthMetrics m = score(selected, truth, scenario.p, scenario.q, power);
    record.methods[static_cast<int>(method)] = {m.fdp, m.tdp, m.mfdr_summand, m.n_selected};
  };
  fill(Method::CoxLasso, lasso.selected);
  fill(Method::CoxKnockoff, ko.knockoff.selected);
  fill(Method::CoxKnockoffPlus, ko.knockoff_plus.selected);

  record.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

void summarize(ScenarioReport& report) {
  report.excluded = 0;
  report.summary = {};
  report.achieved_censoring = 0.0;
  int used = 0;
  for (const auto& rec : report.per_rep) {
    if (rec.excluded) {
      ++report.excluded;
      continue;
    }
    ++used;
    report.achieved_censoring += rec.censoring_rate;
    for (int k = 0; k < kMethodCount; ++k) {
      report.summary[k].fdr += rec.methods[k].fdp;
      report.summary[k].power += rec.methods[k].tdp;
      report.summary[k].mfdr += rec.methods[k].mfdr_summand;
      report.summary[k].mean_selected += rec.methods[k].n_selected;
    }
  }
  if (used == 0) return;
  report.achieved_censoring /= used;
  for (auto& s : report.summary) {
    s.fdr /= used;
    s.power /= used;
    s.mfdr /= used;
    s.mean_selected /= used;
  }
}

ScenarioReport run_scenario(const Scenario& scenario, const PathOptions& path) {
  scenario.validate();
  ScenarioReport report;
  report.scenario = scenario;
  report.calibration = calibrate_censoring(scenario);
  report.per_rep.resize(scenario.replications);

  std::exception_ptr fatal;
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < scenario.replications; ++r) {
    try {
      report.per_rep[r] = run_replication(scenario, r, report.calibration.parameter, path);
    } catch (const Error& e) {
      report.per_rep[r].rep = r;
      report.per_rep[r].excluded = true;
      report.per_rep[r].reason = e.what();
    } catch (...) {
#pragma omp critical(coxko_scenario_failure)
      if (!fatal) fatal = std::current_exception();
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  summarize(report);
  const int allowed = static_cast<int>(std::floor(kMaxFailureShare * scenario.replications));
  if (report.excluded > allowed) {
    std::string first;
    for (const auto& rec : report.per_rep) {
      if (rec.excluded) {
        first = rec.reason;
        break;
      }
    }
    throw Error(ErrorKind::TooManyFailures, std::to_string(report.excluded) + " of " +
                                                std::to_string(scenario.replications) +
                                                " replications failed; first: " + first);
  }
  return report;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string distribution_label(const Scenario& s) {
  return s.cov_dist == CovDist::GaussianAR ? "gaussian" : "t";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

constexpr const char* kReportHeader =
    "scenario,distribution,n,p,censoring_target,censoring_achieved,method,fdr,power,mfdr,"
    "mean_selected,replications,excluded,status";

}  // namespace

ReportTable aggregate_report(const std::vector<ScenarioReport>& reports) {
  if (reports.empty()) throw Error(ErrorKind::InvalidArgument, "no scenario reports");
  ReportTable table;
  for (const auto& rep : reports) {
    for (int k = 0; k < kMethodCount; ++k) {
      ReportRow row;
      row.scenario = rep.scenario.name;
      row.distribution = distribution_label(rep.scenario);
      row.n = rep.scenario.n;
      row.p = rep.scenario.p;
      row.censoring_target = rep.scenario.target_rate;
      row.censoring_achieved = rep.achieved_censoring;
      row.method = to_string(static_cast<Method>(k));
      row.fdr = rep.summary[k].fdr;
      row.power = rep.summary[k].power;
      row.mfdr = rep.summary[k].mfdr;
      row.mean_selected = rep.summary[k].mean_selected;
      row.replications = static_cast<int>(rep.per_rep.size());
      row.excluded = rep.excluded;
      row.status = rep.used() > 0 ? "ok" : "insufficient";
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string ReportTable::csv() const {
  std::string out = kReportHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.scenario + ',' + r.distribution + ',' + std::to_string(r.n) + ',' + std::to_string(r.p) +
           ',' + fmt_double(r.censoring_target) + ',' + fmt_double(r.censoring_achieved) + ',' +
           r.method + ',' + fmt_double(r.fdr) + ',' + fmt_double(r.power) + ',' + fmt_double(r.mfdr) +
           ',' + fmt_double(r.mean_selected) + ',' + std::to_string(r.replications) + ',' +
           std::to_string(r.excluded) + ',' + r.status + '\n';
  }
  return out;
}

std::string ReportTable::text() const {
  const std::vector<std::string> header = {"scenario", "dist", "(n,p)", "cens", "achieved", "method",
                                           "FDR", "power", "mFDR", "selected", "used", "status"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.scenario, r.distribution,
                     "(" + std::to_string(r.n) + "," + std::to_string(r.p) + ")",
                     fmt_fixed(r.censoring_target, 2), fmt_fixed(r.censoring_achieved, 3), r.method,
                     fmt_fixed(r.fdr, 3), fmt_fixed(r.power, 3), fmt_fixed(r.mfdr, 3),
                     fmt_fixed(r.mean_selected, 2),
                     std::to_string(r.replications - r.excluded) + "/" + std::to_string(r.replications),
                     r.status});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += "  ";
      std::string cell = row[c];
      // Text columns left-aligned, numbers right-aligned.
      const bool left = c == 0 || c == 1 || c == 5 || c == 11;
      const std::string pad(width[c] - cell.size(), ' ');
      out += left ? cell + pad : pad + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + '\n';
  };
  std::string out = line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
  for (const auto& row : cells) out += line(row);
  return out;
}

std::vector<ReportRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kReportHeader) {
    throw Error(ErrorKind::ConfigParse, "unexpected report header");
  }
  std::vector<ReportRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 14) {
      throw Error(ErrorKind::ConfigParse, "report line " + std::to_string(line_no) + " has " +
                                              std::to_string(f.size()) + " fields");
    }
    try {
      ReportRow r;
      r.scenario = f[0];
      r.distribution = f[1];
      r.n = std::stoi(f[2]);
      r.p = std::stoi(f[3]);
      r.censoring_target = std::stod(f[4]);
      r.censoring_achieved = std::stod(f[5]);
      r.method = f[6];
      r.fdr = std::stod(f[7]);
      r.power = std::stod(f[8]);
      r.mfdr = std::stod(f[9]);
      r.mean_selected = std::stod(f[10]);
      r.replications = std::stoi(f[11]);
      r.excluded = std::stoi(f[12]);
      r.status = f[13];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ConfigParse, "report line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return rows;
}

namespace {

template <typename E>
E parse_enum(const std::string& key, const std::string& value, std::initializer_list<E> options) {
  std::string allowed;
  for (E e : options) {
    if (value == to_string(e)) return e;
    allowed += std::string(allowed.empty() ? "" : ", ") + to_string(e);
  }
  throw Error(ErrorKind::ConfigParse, "key '" + key + "': '" + value + "' is not one of " + allowed);
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(out)) {
    throw Error(ErrorKind::ConfigParse, "key '" + key + "': '" + value + "' is not a number");
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw Error(ErrorKind::ConfigParse, "key '" + key + "': '" + value + "' is not an integer");
  }
  return out;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (!value.empty() && value[0] != '-') out = std::stoull(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw Error(ErrorKind::ConfigParse, "key '" + key + "': '" + value + "' is not a 64-bit seed");
  }
  return out;
}

int to_int(const std::string& key, long long v) {
  if (v < 0 || v > 100000000) throw Error(ErrorKind::ConfigParse, "key '" + key + "' is out of range");
  return static_cast<int>(v);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigParse, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key)) {
      throw Error(ErrorKind::ConfigParse, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    seen[key] = line_no;

    if (key == "name") s.name = value;
    else if (key == "n") s.n = to_int(key, parse_integer(key, value));
    else if (key == "p") s.p = to_int(key, parse_integer(key, value));
    else if (key == "beta_case")
      s.beta_case = parse_enum(key, value, {BetaCase::Null, BetaCase::Case1, BetaCase::Case2, BetaCase::Case3});
    else if (key == "cov_dist") s.cov_dist = parse_enum(key, value, {CovDist::GaussianAR, CovDist::ScaledT});
    else if (key == "rho") s.rho = parse_real(key, value);
    else if (key == "nu") s.nu = parse_real(key, value);
    else if (key == "baseline") s.baseline = parse_enum(key, value, {Baseline::Constant, Baseline::Linear});
    else if (key == "censoring")
      s.censoring = parse_enum(key, value, {Censoring::IndependentExponential, Censoring::CovariateDependent});
    else if (key == "target_rate") s.target_rate = parse_real(key, value);
    else if (key == "q") s.q = parse_real(key, value);
    else if (key == "replications") s.replications = to_int(key, parse_integer(key, value));
    else if (key == "seed") s.seed = parse_seed(key, value);
    else if (key == "folds") s.folds = to_int(key, parse_integer(key, value));
    else {
      throw Error(ErrorKind::ConfigParse,
                  "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

std::string scenario_to_text(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << s.name << '\n'
      << "n = " << s.n << '\n'
      << "p = " << s.p << '\n'
      << "beta_case = " << to_string(s.beta_case) << '\n'
      << "cov_dist = " << to_string(s.cov_dist) << '\n'
      << "rho = " << fmt_double(s.rho) << '\n'
      << "nu = " << fmt_double(s.nu) << '\n'
      << "baseline = " << to_string(s.baseline) << '\n'
      << "censoring = " << to_string(s.censoring) << '\n'
      << "target_rate = " << fmt_double(s.target_rate) << '\n'
      << "q = " << fmt_double(s.q) << '\n'
      << "replications = " << s.replications << '\n'
      << "seed = " << s.seed << '\n'
      << "folds = " << s.folds << '\n';
  return out.str();
}

namespace {

const std::map<std::string, Scenario>& presets() {
  static const std::map<std::string, Scenario> table = [] {
    std::map<std::string, Scenario> m;
    auto add = [&](Scenario s) { m.emplace(s.name, std::move(s)); };

    Scenario s1;
    s1.name = "study1_case2_desk";
    add(s1);

    Scenario null_desk;
    null_desk.name = "global_null_desk";
    null_desk.n = 300;
    null_desk.beta_case = BetaCase::Null;
    add(null_desk);

    Scenario s3;
    s3.name = "study3_case2_desk";
    s3.baseline = Baseline::Linear;
    s3.censoring = Censoring::CovariateDependent;
    s3.replications = 50;
    add(s3);

    // Full-scale twins; each takes hours on a single core.
    for (BetaCase bc : {BetaCase::Case1, BetaCase::Case2, BetaCase::Case3}) {
      for (CovDist dist : {CovDist::GaussianAR, CovDist::ScaledT}) {
        for (double rate : {0.2, 0.4}) {
          Scenario full;
          full.name = std::string("study1_") + to_string(bc) + "_" +
                      (dist == CovDist::GaussianAR ? "gaussian" : "t") + "_" +
                      (rate == 0.2 ? "c20" : "c40") + "_full";
          full.n = 1000;
          full.p = 100;
          full.beta_case = bc;
          full.cov_dist = dist;
          full.target_rate = rate;
          add(full);
        }
      }
    }
    for (CovDist dist : {CovDist::GaussianAR, CovDist::ScaledT}) {
      Scenario full;
      full.name = std::string("study3_case2_") + (dist == CovDist::GaussianAR ? "gaussian" : "t") + "_full";
      full.n = 1000;
      full.p = 100;
      full.cov_dist = dist;
      full.baseline = Baseline::Linear;
      full.censoring = Censoring::CovariateDependent;
      add(full);
    }
    return m;
  }();
  return table;
}

}  // namespace

bool has_preset(const std::string& name) { return presets().count(name) > 0; }

Scenario preset_scenario(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw Error(ErrorKind::ConfigParse, "unknown scenario preset '" + name + "'");
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : presets()) out.push_back(name);
  return out;
}

}  // namespace coxko
