#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chatelet/cli.hpp"

using namespace chatelet;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

const char* kSquare = R"("region":[[[1,1],[1,1]],[[2,1],[1,1]],[[2,1],[2,1]],[[1,1],[2,1]]],"c":8)";

}  // namespace

TEST_CASE("validate and rho on the golden instance") {
  const Outcome v = run({"validate"});
  CHECK(v.code == cli::kSuccess);
  const auto j = nlohmann::json::parse(v.out);
  CHECK(j["ok"] == true);
  CHECK(j["irreducible"] == true);

  const Outcome r = run({"rho", "--d1", "1", "--d2", "1"});
  CHECK(r.code == cli::kSuccess);
  CHECK(nlohmann::json::parse(r.out)["count"] == 1);
  CHECK(nlohmann::json::parse(run({"rho", "--d1", "4", "--d2", "9"}).out)["count"] == 60);
}

TEST_CASE("verify emits one CSV row per X") {
  const Outcome v = run({"verify", "--X-list", "20,40,80", "--P", "200"});
  REQUIRE(v.code == cli::kSuccess);
  std::istringstream lines(v.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "X,S,predicted,ratio,eta_ref");
  CHECK(rows[1].rfind("20,6128,", 0) == 0);

  const Outcome js = run({"verify", "--X-list", "20,40", "--P", "200", "--format", "json"});
  REQUIRE(js.code == cli::kSuccess);
  CHECK(nlohmann::json::parse(js.out).size() == 2);
}

TEST_CASE("instance files") {
  const std::string good = write_temp("cli_good.json", std::string(R"({"L":[1,0],"C":[1,0,1,1],)") + kSquare + "}");
  const Outcome ok = run({"--instance", good, "validate"});
  CHECK(ok.code == cli::kSuccess);
  CHECK(nlohmann::json::parse(ok.out)["instance"] == "cli_good");

  const std::string missing = write_temp("cli_missing.json", std::string(R"({"L":[1,0],)") + kSquare + "}");
  const Outcome m = run({"--instance", missing, "validate"});
  CHECK(m.code == cli::kUsageError);
  CHECK(m.err.find("'C'") != std::string::npos);

  const std::string reducible =
      write_temp("cli_reducible.json", std::string(R"({"L":[1,0],"C":[2,-3,2,-3],)") + kSquare + "}");
  const Outcome red = run({"--instance", reducible, "validate"});
  CHECK(red.code == cli::kValidationFailure);
  CHECK(red.err.find("3/2") != std::string::npos);
  CHECK(run({"--instance", reducible, "sum", "--X", "10"}).code == cli::kValidationFailure);

  CHECK(run({"--instance", "/nonexistent/instance.json", "validate"}).code == cli::kUsageError);
  const std::string junk = write_temp("cli_junk.json", "{not json");
  CHECK(run({"--instance", junk, "validate"}).code == cli::kUsageError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"sum"}).code == cli::kUsageError);
  CHECK(run({"sum", "--X", "-5"}).code == cli::kUsageError);
  CHECK(run({"rho", "--d1", "0", "--d2", "1"}).code == cli::kUsageError);
  CHECK(run({"eulerfactor", "--p", "9"}).code == cli::kUsageError);
  CHECK(run({"eulerfactor", "--p", "31", "--large"}).code == cli::kUsageError);
  CHECK(run({"constant", "--P", "50"}).code == cli::kUsageError);
  CHECK(run({"verify", "--X-list", "40,20"}).code == cli::kUsageError);
  CHECK(run({"verify", "--X-list", "20", "--format", "xml"}).code == cli::kUsageError);
  CHECK(run({"sum", "--X", "1e6"}).code == cli::kUsageError);
  CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("repeated runs and thread counts give identical output") {
  const std::vector<std::string> args{"verify", "--X-list", "50,100", "--P", "300"};
  const Outcome first = run(args);
  REQUIRE(first.code == cli::kSuccess);
  CHECK(run(args).out == first.out);
  auto threaded = args;
  threaded.insert(threaded.begin(), {"--threads", "8"});
  CHECK(run(threaded).out == first.out);
  CHECK(run({"sum", "--X", "150"}).out == run({"--threads", "4", "sum", "--X", "150"}).out);
  CHECK(run({"constant", "--P", "300"}).out == run({"constant", "--P", "300"}).out);
}

TEST_CASE("constant JSON is self-consistent") {
  const Outcome c = run({"constant", "--P", "1000"});
  REQUIRE(c.code == cli::kSuccess);
  const auto j = nlohmann::json::parse(c.out);
  double product = 1.0;
  for (const auto& f : j["factors"]) product *= f["value"].get<double>();
  CHECK(product == doctest::Approx(j["product"].get<double>()).epsilon(1e-8));
  const double predicted = std::numbers::pi * std::numbers::pi * j["volume"].get<double>() * product;
  CHECK(predicted == doctest::Approx(j["predicted_constant"].get<double>()).epsilon(1e-8));
  CHECK(j["prime_cutoff"] == 1000);
}

TEST_CASE("eulerfactor and k2 subcommands") {
  const auto e = nlohmann::json::parse(run({"eulerfactor", "--p", "5", "--V", "4"}).out);
  CHECK(e["value"].get<double>() == doctest::Approx(15088.0 / 15625.0).epsilon(1e-11));
  CHECK(e["method"] == "exact_series");
  const auto k = nlohmann::json::parse(run({"k2", "--nmax", "8"}).out);
  CHECK(k["history"].size() == 5);
  CHECK(k["history"][0].get<double>() == 1.6875);
  CHECK(nlohmann::json::parse(run({"volume"}).out)["volume"].get<double>() == 1.0);
}

TEST_CASE("format_number") {
  CHECK(cli::format_number(1.0) == "1");
  CHECK(cli::format_number(0.0860713320559) == "0.0860713320559");
  CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333");
}
