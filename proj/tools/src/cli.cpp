#include "cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "eivtls/errors.hpp"
#include "eivtls/model.hpp"
#include "eivtls/report_json.hpp"
#include "eivtls/simulate.hpp"
#include "eivtls/tls.hpp"
#include "eivtls/verify.hpp"

namespace eivtls::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kExitSuccess = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitEstimation = 3;

// Input problems get exit 2; anything else from the estimator is a
// legitimate "no estimate for this data" outcome and gets exit 3.
bool is_input_error(const std::string& code) {
  return code == "non_finite" || code == "not_psd" || code == "dimension_mismatch" ||
         code == "invalid_spec";
}

ordered_json encode_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json encode_extended(const ExtendedReal& v) {
  if (v.is_infinite()) return "inf";
  return encode_number(v.value_or(0.0));
}

ordered_json encode_matrix(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode_number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw InvalidSpecError("cannot write file: " + out_path);
  file << text;
}

int emit_error(const Error& e, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  ordered_json body;
  body["schema"] = "eiv-tls/1";
  body["kind"] = "error";
  body["code"] = e.code();
  body["message"] = e.what();
  const std::string text = body.dump(2) + "\n";
  err << "error [" << e.code() << "]: " << e.what() << "\n";
  out << text;
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (file) file << text;
  }
  return is_input_error(e.code()) ? kExitInput : kExitEstimation;
}

ToleranceConfig make_tolerance(const std::optional<double>& tol_rank,
                               const std::optional<double>& tol_gap) {
  ToleranceConfig tol{};
  if (tol_rank.has_value()) tol.rel_rank_tol = *tol_rank;
  if (tol_gap.has_value()) tol.gap_rtol = *tol_gap;
  tol.validate();
  return tol;
}

int resolve_threads(const std::optional<int>& flag) {
  if (flag.has_value()) return *flag < 0 ? 0 : *flag;
  if (const char* env = std::getenv("EIV_TLS_THREADS")) {
    const std::size_t len = std::strlen(env);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(env, env + len, value);
    if (ec == std::errc() && ptr == env + len && value >= 0) return value;
  }
  return 0;  // automatic
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw InvalidSpecError(what + " must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const ordered_json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidSpecError(what + " has ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const ordered_json& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) throw InvalidSpecError(what + " has a non-numeric entry");
      m(i, k) = cell.get<double>();
    }
  }
  return m;
}

struct SimulateRun {
  ModelSpec spec;
  std::vector<std::int64_t> sizes;
  long replicates = 0;
  std::uint64_t seed = 0;
};

SimulateRun parse_simulate_config(const ordered_json& j, const ToleranceConfig& tol) {
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto d = j.at("d").get<Eigen::Index>();
    if (n < 1 || d < 1) throw InvalidSpecError("config: n and d must be >= 1");

    const Eigen::MatrixXd x0 = matrix_from_json(j.at("x0"), "x0");

    RegressorLaw law{};
    if (j.contains("fixed_regressors")) {
      law.fixed = matrix_from_json(j.at("fixed_regressors"), "fixed_regressors");
    } else {
      for (const ordered_json& col : j.at("regressors")) {
        const auto kind = col.at("kind").get<std::string>();
        if (kind == "constant") {
          law.columns.push_back(RegressorColumn::constant(col.at("value").get<double>()));
        } else if (kind == "uniform") {
          law.columns.push_back(
              RegressorColumn::uniform(col.at("lo").get<double>(), col.at("hi").get<double>()));
        } else if (kind == "gaussian") {
          law.columns.push_back(
              RegressorColumn::gaussian(col.at("mean").get<double>(), col.at("sd").get<double>()));
        } else {
          throw InvalidSpecError("config: unknown regressor kind '" + kind + "'");
        }
      }
    }

    ErrorLaw errors{ErrorFamily::kGaussian, 0.0};
    if (j.contains("errors")) {
      const ordered_json& e = j.at("errors");
      const auto family = e.at("family").get<std::string>();
      if (family == "gaussian") {
        errors.family = ErrorFamily::kGaussian;
      } else if (family == "student_t") {
        errors.family = ErrorFamily::kStudentT;
        errors.student_dof = e.at("dof").get<double>();
      } else if (family == "rademacher") {
        errors.family = ErrorFamily::kRademacher;
      } else {
        throw InvalidSpecError("config: unknown error family '" + family + "'");
      }
    }

    Eigen::MatrixXd sigma_m;
    const ordered_json& s = j.at("sigma");
    if (s.is_object() && s.contains("diag")) {
      const ordered_json& diag = s.at("diag");
      Eigen::VectorXd v(static_cast<Eigen::Index>(diag.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = diag[static_cast<std::size_t>(i)].get<double>();
      sigma_m = v.asDiagonal();
    } else {
      sigma_m = matrix_from_json(s, "sigma");
    }

    const double moment_order = j.value("moment_order", 2.0);

    SimulateRun run{
        ModelSpec{n, d, x0, std::move(law), errors,
                  ErrorCovariance(SymmetricMatrix(sigma_m), tol), moment_order},
        {},
        j.value("replicates", 0L),
        j.value("seed", std::uint64_t{1})};
    for (const ordered_json& size : j.at("sizes"))
      run.sizes.push_back(size.get<std::int64_t>());
    return run;
  } catch (const ordered_json::exception& e) {
    throw InvalidSpecError(std::string("config: ") + e.what());
  }
}

struct EstimateOpts {
  std::string data_path;
  std::string sigma_path;
  std::string out_path;
  long n = 0;
  long d = 0;
  std::optional<double> tol_rank;
  std::optional<double> tol_gap;
};

int run_estimate(const EstimateOpts& o, std::ostream& out, std::ostream& err) {
  try {
    const ToleranceConfig tol = make_tolerance(o.tol_rank, o.tol_gap);
    if (o.n < 1 || o.d < 1) throw InvalidSpecError("--n and --d must be >= 1");
    const Eigen::MatrixXd c = read_csv_matrix(o.data_path);
    const Eigen::Index ext = static_cast<Eigen::Index>(o.n + o.d);
    if (c.cols() != ext) {
      std::ostringstream os;
      os << "data has " << c.cols() << " columns, expected n + d = " << ext;
      throw DimensionError(os.str());
    }
    Eigen::MatrixXd sigma_m = Eigen::MatrixXd::Identity(ext, ext);
    if (!o.sigma_path.empty()) {
      sigma_m = read_csv_matrix(o.sigma_path);
      if (sigma_m.rows() != ext || sigma_m.cols() != ext) {
        std::ostringstream os;
        os << "sigma is " << sigma_m.rows() << "x" << sigma_m.cols() << ", expected " << ext
           << "x" << ext;
        throw DimensionError(os.str());
      }
    }

    const ObservationSet obs = ObservationSet::from_joint(c, o.n, o.d);
    const ErrorCovariance cov(SymmetricMatrix(sigma_m), tol);
    const TlsSolution sol = estimate(obs, cov, tol);

    ordered_json body;
    body["schema"] = "eiv-tls/1";
    body["kind"] = "estimate";
    body["m"] = static_cast<long long>(obs.m());
    body["n"] = static_cast<long long>(obs.n());
    body["d"] = static_cast<long long>(obs.d());
    body["x_hat"] = encode_matrix(sol.x_hat);
    ordered_json nus = ordered_json::array();
    for (const ExtendedReal& nu : sol.nu) nus.push_back(encode_extended(nu));
    body["nu"] = nus;
    body["frobenius_min"] = encode_number(sol.frobenius_min);
    body["spectral_min"] = encode_number(sol.spectral_min);
    body["gap"] = encode_extended(sol.uniqueness_gap);
    body["unique"] = sol.unique;
    body["bottom_block_condition"] = encode_number(sol.bottom_block_condition);
    ordered_json warnings = ordered_json::array();
    if (!sol.unique) warnings.push_back("non_unique");
    body["warnings"] = warnings;
    emit(body.dump(2) + "\n", o.out_path, out);
    return kExitSuccess;
  } catch (const Error& e) {
    return emit_error(e, o.out_path, out, err);
  }
}

struct SimulateOpts {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> replicates;
  std::vector<std::int64_t> sizes;
  std::optional<int> threads;
  std::optional<double> tol_rank;
  std::optional<double> tol_gap;
};

int run_simulate(const SimulateOpts& o, std::ostream& out, std::ostream& err) {
  try {
    const ToleranceConfig tol = make_tolerance(o.tol_rank, o.tol_gap);
    std::ifstream file(o.config_path);
    if (!file) throw InvalidSpecError("cannot open file: " + o.config_path);
    ordered_json config;
    try {
      config = ordered_json::parse(file);
    } catch (const ordered_json::parse_error& e) {
      throw InvalidSpecError(std::string("config: ") + e.what());
    }

    SimulateRun run = parse_simulate_config(config, tol);
    if (o.seed.has_value()) run.seed = *o.seed;
    if (o.replicates.has_value()) run.replicates = *o.replicates;
    if (!o.sizes.empty()) run.sizes = o.sizes;

    RunOptions options{};
    options.threads = resolve_threads(o.threads);
    options.tol = tol;
    const SimulationReport report = run_consistency(run.spec, run.sizes, run.replicates,
                                                    run.seed, options);
    emit(report_to_json(report), o.out_path, out);
    return kExitSuccess;
  } catch (const Error& e) {
    return emit_error(e, o.out_path, out, err);
  }
}

struct VerifyOpts {
  std::string suite;
  std::string out_path;
  long replicates = 500;
  std::uint64_t seed = 20260819;
  std::optional<double> tol_rank;
  std::optional<double> tol_gap;
};

int run_verify(const VerifyOpts& o, std::ostream& out, std::ostream& err) {
  try {
    const ToleranceConfig tol = make_tolerance(o.tol_rank, o.tol_gap);
    if (o.replicates < 1) throw InvalidSpecError("--replicates must be >= 1");

    verify::SuiteResult result;
    if (o.suite == "pencil") {
      result = verify::run_pencil_suite(o.replicates, o.seed, tol);
    } else if (o.suite == "bounds") {
      result = verify::run_bounds_suite(o.replicates, o.seed, tol);
    } else if (o.suite == "oracle") {
      result = verify::run_oracle_suite(o.replicates, o.seed, tol);
    } else {
      throw InvalidSpecError("unknown suite '" + o.suite + "' (expected pencil, bounds, oracle)");
    }

    ordered_json body;
    body["schema"] = "eiv-tls/1";
    body["kind"] = "verification";
    body["suite"] = result.name;
    body["checked"] = result.checked;
    body["violations"] = result.violations;
    body["skipped"] = result.skipped;
    body["notes"] = result.notes;
    emit(body.dump(2) + "\n", o.out_path, out);
    for (const std::string& note : result.notes) err << note << "\n";
    return result.violations == 0 ? kExitSuccess : kExitViolation;
  } catch (const Error& e) {
    return emit_error(e, o.out_path, out, err);
  }
}

struct OracleCompareOpts {
  std::string data_path;
  std::string out_path;
  long n = 0;
  long d = 0;
  double agree_tol = 1e-8;
  std::optional<double> tol_rank;
  std::optional<double> tol_gap;
};

int run_oracle_compare(const OracleCompareOpts& o, std::ostream& out, std::ostream& err) {
  try {
    const ToleranceConfig tol = make_tolerance(o.tol_rank, o.tol_gap);
    if (o.n < 1 || o.d < 1) throw InvalidSpecError("--n and --d must be >= 1");
    if (!(o.agree_tol > 0)) throw InvalidSpecError("--agree-tol must be positive");
    const Eigen::MatrixXd c = read_csv_matrix(o.data_path);
    const Eigen::Index ext = static_cast<Eigen::Index>(o.n + o.d);
    if (c.cols() != ext) {
      std::ostringstream os;
      os << "data has " << c.cols() << " columns, expected n + d = " << ext;
      throw DimensionError(os.str());
    }
    const ObservationSet obs = ObservationSet::from_joint(c, o.n, o.d);
    const ErrorCovariance identity(SymmetricMatrix::identity(ext), tol);

    const TlsSolution sol = estimate(obs, identity, tol);
    const Eigen::MatrixXd reference = classical_tls_oracle(obs, tol);
    const double difference = (sol.x_hat - reference).norm();
    const bool agree = difference <= o.agree_tol;

    ordered_json body;
    body["schema"] = "eiv-tls/1";
    body["kind"] = "oracle_compare";
    body["x_hat"] = encode_matrix(sol.x_hat);
    body["reference"] = encode_matrix(reference);
    body["difference"] = encode_number(difference);
    body["agree"] = agree;
    emit(body.dump(2) + "\n", o.out_path, out);
    return agree ? kExitSuccess : kExitViolation;
  } catch (const Error& e) {
    return emit_error(e, o.out_path, out, err);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total least squares estimation for errors-in-variables regression"};
  app.name("eivtls");
  app.require_subcommand(1);

  EstimateOpts est;
  CLI::App* est_cmd = app.add_subcommand(
      "estimate", "Estimate coefficients from a joint observation file");
  est_cmd->add_option("--data", est.data_path, "CSV with m rows and n + d columns")->required();
  est_cmd->add_option("--sigma", est.sigma_path,
                      "CSV with the (n+d)x(n+d) error covariance (default: identity)");
  est_cmd->add_option("--n", est.n, "Regressor column count")->required();
  est_cmd->add_option("--d", est.d, "Response column count")->required();
  est_cmd->add_option("--out", est.out_path, "Result JSON path (default: stdout)");
  est_cmd->add_option("--tol-rank", est.tol_rank, "Relative rank tolerance");
  est_cmd->add_option("--tol-gap", est.tol_gap, "Relative uniqueness-gap tolerance");

  SimulateOpts sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Run a Monte Carlo consistency sweep from a config");
  sim_cmd->add_option("--config", sim.config_path, "Model + run configuration JSON")->required();
  sim_cmd->add_option("--out", sim.out_path, "Report JSON path (default: stdout)");
  sim_cmd->add_option("--seed", sim.seed, "Override the config seed");
  sim_cmd->add_option("--replicates", sim.replicates, "Override the config replicate count");
  sim_cmd->add_option("--sizes", sim.sizes, "Override the config sample sizes")->delimiter(',');
  sim_cmd->add_option("--threads", sim.threads,
                      "Worker threads (0 = machine parallelism; overrides EIV_TLS_THREADS)");
  sim_cmd->add_option("--tol-rank", sim.tol_rank, "Relative rank tolerance");
  sim_cmd->add_option("--tol-gap", sim.tol_gap, "Relative uniqueness-gap tolerance");

  VerifyOpts ver;
  CLI::App* ver_cmd = app.add_subcommand("verify", "Run a self-checking verification suite");
  ver_cmd->add_option("--suite", ver.suite, "One of: pencil, bounds, oracle")->required();
  ver_cmd->add_option("--replicates", ver.replicates, "Sweep size (default 500)");
  ver_cmd->add_option("--seed", ver.seed, "Base seed for the sweep");
  ver_cmd->add_option("--out", ver.out_path, "Result JSON path (default: stdout)");
  ver_cmd->add_option("--tol-rank", ver.tol_rank, "Relative rank tolerance");
  ver_cmd->add_option("--tol-gap", ver.tol_gap, "Relative uniqueness-gap tolerance");

  OracleCompareOpts cmp;
  CLI::App* cmp_cmd = app.add_subcommand(
      "oracle-compare", "Compare the estimator against the classical SVD path (sigma = I)");
  cmp_cmd->add_option("--data", cmp.data_path, "CSV with m rows and n + d columns")->required();
  cmp_cmd->add_option("--n", cmp.n, "Regressor column count")->required();
  cmp_cmd->add_option("--d", cmp.d, "Response column count")->required();
  cmp_cmd->add_option("--out", cmp.out_path, "Result JSON path (default: stdout)");
  cmp_cmd->add_option("--agree-tol", cmp.agree_tol, "Agreement threshold (default 1e-8)");
  cmp_cmd->add_option("--tol-rank", cmp.tol_rank, "Relative rank tolerance");
  cmp_cmd->add_option("--tol-gap", cmp.tol_gap, "Relative uniqueness-gap tolerance");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("eivtls");
  for (const std::string& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitInput;
  }

  if (est_cmd->parsed()) return run_estimate(est, out, err);
  if (sim_cmd->parsed()) return run_simulate(sim, out, err);
  if (ver_cmd->parsed()) return run_verify(ver, out, err);
  if (cmp_cmd->parsed()) return run_oracle_compare(cmp, out, err);
  err << "no command given\n";
  return kExitInput;
}

}  // namespace eivtls::cli
