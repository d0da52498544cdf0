#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "csv.hpp"
#include "eivtls/errors.hpp"

using eivtls::cli::run_cli;
using nlohmann::json;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempFile {
 public:
  explicit TempFile(const std::string& name, const std::string& content) {
    path_ = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream file(path_);
    file << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

const char* bundled_config = EIVTLS_CONFIG_DIR "/example21.json";

}  // namespace

TEST_CASE("csv reader parses plain and headered files") {
  const TempFile plain("eivtls_plain.csv", "1.5,2\n-3,+4.25\n");
  const Eigen::MatrixXd m = eivtls::cli::read_csv_matrix(plain.path());
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(1, 1) == 4.25);

  const TempFile headered("eivtls_header.csv", "x, y\n1,2\n3,4\n");
  const Eigen::MatrixXd h = eivtls::cli::read_csv_matrix(headered.path());
  CHECK(h.rows() == 2);
  CHECK(h(1, 0) == 3.0);
}

TEST_CASE("csv reader rejects ragged or non-numeric bodies") {
  const TempFile ragged("eivtls_ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(eivtls::cli::read_csv_matrix(ragged.path()), eivtls::InvalidSpecError);
  const TempFile words("eivtls_words.csv", "1,2\n3,oops\n");
  CHECK_THROWS_AS(eivtls::cli::read_csv_matrix(words.path()), eivtls::InvalidSpecError);
  CHECK_THROWS_AS(eivtls::cli::read_csv_matrix("/nonexistent/file.csv"),
                  eivtls::InvalidSpecError);
  const TempFile empty("eivtls_empty.csv", "\n\n");
  CHECK_THROWS_AS(eivtls::cli::read_csv_matrix(empty.path()), eivtls::InvalidSpecError);
}

TEST_CASE("estimate command reports the exact fit for a noiseless relation") {
  const TempFile data("eivtls_exact.csv", "1,2\n2,4\n3,6\n");
  const CliResult r = cli({"estimate", "--data", data.path(), "--n", "1", "--d", "1"});
  CHECK(r.code == 0);
  const json body = json::parse(r.out);
  CHECK(body["schema"] == "eiv-tls/1");
  CHECK(body["x_hat"][0][0].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(body["unique"].get<bool>());
  CHECK(body["nu"].size() == 2);
}

TEST_CASE("estimate command writes the result file when asked") {
  const TempFile data("eivtls_exact2.csv", "1,2\n2,4\n3,6\n");
  const std::string out_path =
      (std::filesystem::temp_directory_path() / "eivtls_result.json").string();
  const CliResult r = cli(
      {"estimate", "--data", data.path(), "--n", "1", "--d", "1", "--out", out_path});
  CHECK(r.code == 0);
  std::ifstream file(out_path);
  REQUIRE(file.good());
  const json body = json::parse(file);
  CHECK(body["kind"] == "estimate");
  std::remove(out_path.c_str());
}

TEST_CASE("estimate command maps failure kinds onto the exit-code contract") {
  const TempFile data("eivtls_noisy.csv", "1,1\n2,3\n3,7\n");

  const TempFile notpsd("eivtls_notpsd.csv", "1,2\n2,1\n");
  const CliResult bad_sigma = cli({"estimate", "--data", data.path(), "--sigma",
                                   notpsd.path(), "--n", "1", "--d", "1"});
  CHECK(bad_sigma.code == 2);
  CHECK(json::parse(bad_sigma.out)["code"] == "not_psd");

  const TempFile zero("eivtls_zero.csv", "0,0\n0,0\n");
  const CliResult no_solution = cli({"estimate", "--data", data.path(), "--sigma",
                                     zero.path(), "--n", "1", "--d", "1"});
  CHECK(no_solution.code == 3);
  CHECK(json::parse(no_solution.out)["code"] == "no_solution");

  const CliResult wrong_cols =
      cli({"estimate", "--data", data.path(), "--n", "2", "--d", "1"});
  CHECK(wrong_cols.code == 2);
  CHECK(json::parse(wrong_cols.out)["code"] == "dimension_mismatch");

  const CliResult missing =
      cli({"estimate", "--data", "/nonexistent.csv", "--n", "1", "--d", "1"});
  CHECK(missing.code == 2);

  const CliResult no_flags = cli({"estimate"});
  CHECK(no_flags.code == 2);
}

TEST_CASE("simulate command runs the bundled configuration") {
  const CliResult r = cli({"simulate", "--config", bundled_config, "--sizes", "100",
                           "--replicates", "10", "--threads", "1"});
  CHECK(r.code == 0);
  const json body = json::parse(r.out);
  CHECK(body["schema"] == "eiv-tls/1");
  CHECK(body["kind"] == "simulation_report");
  REQUIRE(body["results"].size() == 1);
  CHECK(body["results"][0]["m"] == 100);
  CHECK(body["results"][0]["replicates"] == 10);
}

TEST_CASE("simulate command rejects a zero replicate count") {
  const CliResult r = cli({"simulate", "--config", bundled_config, "--sizes", "100",
                           "--replicates", "0"});
  CHECK(r.code == 2);
}

TEST_CASE("simulate command rejects malformed configs") {
  const TempFile bad_json("eivtls_bad.json", "{ not json");
  CHECK(cli({"simulate", "--config", bad_json.path()}).code == 2);

  const TempFile bad_field("eivtls_badfield.json",
                           R"({"n": 1, "d": 1, "x0": [[1.0]],
                               "regressors": [{"kind": "nope"}],
                               "sigma": {"diag": [0.1, 0.1]},
                               "sizes": [50], "replicates": 5, "seed": 1})");
  CHECK(cli({"simulate", "--config", bad_field.path()}).code == 2);

  CHECK(cli({"simulate", "--config", "/nonexistent.json"}).code == 2);
}

TEST_CASE("identical simulate invocations produce byte-identical reports") {
  const std::vector<std::string> args = {"simulate", "--config", bundled_config,
                                         "--sizes",  "100,200",  "--replicates",
                                         "8",        "--threads", "1"};
  const CliResult first = cli(args);
  const CliResult second = cli(args);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);

  std::vector<std::string> threaded = args;
  threaded.back() = "4";
  const CliResult parallel = cli(threaded);
  CHECK(parallel.out == first.out);
}

TEST_CASE("verify command exit codes follow the suite outcome") {
  const CliResult pencil =
      cli({"verify", "--suite", "pencil", "--replicates", "40", "--seed", "7"});
  CHECK(pencil.code == 0);
  const json body = json::parse(pencil.out);
  CHECK(body["kind"] == "verification");
  CHECK(body["violations"] == 0);
  CHECK(body["checked"].get<long>() >= 40);

  CHECK(cli({"verify", "--suite", "nonsense"}).code == 2);
  CHECK(cli({"verify", "--suite", "pencil", "--replicates", "0"}).code == 2);
}

TEST_CASE("oracle comparison agrees with itself on well-posed data") {
  const TempFile data("eivtls_oracle.csv",
                      "0.9,1.7\n2.1,4.3\n2.9,6.2\n4.2,8.1\n5.1,9.9\n1.5,3.2\n");
  const CliResult r =
      cli({"oracle-compare", "--data", data.path(), "--n", "1", "--d", "1"});
  CHECK(r.code == 0);
  const json body = json::parse(r.out);
  CHECK(body["agree"].get<bool>());
  CHECK(body["difference"].get<double>() <= 1e-8);
}

TEST_CASE("unknown commands and bare invocations are input errors") {
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}
