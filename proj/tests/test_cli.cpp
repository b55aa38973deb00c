#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "tfuncert/sampling.hpp"

using namespace tfuncert;
using std::numbers::pi;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<Json> lines(const std::string& text) {
  std::vector<Json> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "tfuncert_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("constants subcommand") {
  SUBCASE("values") {
    auto r = run({"constants", "--Cp", "1"});
    CHECK(r.status == 0);
    CHECK(lines(r.out).at(0)["value"] == 1.0);

    r = run({"constants", "--B", "r=2", "s=2", "u=2", "v=2"});
    CHECK(r.status == 0);
    CHECK(lines(r.out).at(0)["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));

    r = run({"constants", "--dual", "1", "--Cp", "4"});
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["value"].get<double>() == doctest::Approx(1.0675924).epsilon(1e-6));
    CHECK(rows[1]["value"] == "inf");
  }
  SUBCASE("condition witnesses") {
    auto r = run({"constants", "--check-cp", "p=2", "q=2", "a=1", "b=1"});
    CHECK(r.status == 0);
    const auto row = lines(r.out).at(0);
    CHECK(row["holds"] == true);
    CHECK(row["margin_time"] == 1.0);
    CHECK(row["margin_frequency"] == 1.0);

    r = run({"constants", "--check-gg", "p=2", "q=2", "a=1", "b=1", "r=2", "s=2"});
    CHECK(lines(r.out).at(0)["status"] == "holds");

    r = run({"constants", "--check-lieb", "r=1.5", "s=1.5", "u=2", "v=2"});
    CHECK(lines(r.out).at(0)["holds"] == true);

    r = run({"constants", "--partner", "s=1.5", "r=1.5", "u=2"});
    CHECK(lines(r.out).at(0)["value"].get<double>() == doctest::Approx(2.0));
  }
  SUBCASE("text format") {
    const auto r = run({"constants", "--Cp", "1", "--format", "text"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("C_p", 0) == 0);
    CHECK(r.out.find("value=1.0") != std::string::npos);
  }
  SUBCASE("errors") {
    CHECK(run({"constants"}).status == 64);
    CHECK(run({"constants", "--H", "r=4"}).status == 64);
    CHECK(run({"constants", "--H", "r4"}).status == 64);
    CHECK(run({"constants", "--H", "r=4", "p=x"}).status == 2);
    const auto r = run({"constants", "--H", "r=1.5", "p=9"});
    CHECK(r.status == 2);
    CHECK(r.err.find("domain error") != std::string::npos);
  }
}

TEST_CASE("certify subcommand") {
  SUBCASE("battery") {
    const auto r = run({"certify", "heisenberg", "--seeds", "100"});
    CHECK(r.status == 0);
    const auto reports = lines(r.out);
    CHECK(reports.size() == 100);
    for (const auto& rep : reports) {
      CHECK(rep["pass"] == true);
      CHECK(rep["grid"]["N"] == 512);
      CHECK(rep["tol"] == 1e-8);
    }
  }
  SUBCASE("extremal saturation") {
    const auto r = run({"certify", "lieb_reverse", "--extremal", "r=1.5", "s=1.5"});
    CHECK(r.status == 0);
    const auto rep = lines(r.out).at(0);
    CHECK(rep["id"] == "lieb_reverse_x_omega");
    CHECK(rep["gap"].get<double>() < 1e-4);

    for (const char* id : {"hausdorff_young", "young", "leindler", "lieb_forward", "heisenberg",
                           "modulation_bound", "cowling_price_functional"}) {
      const auto e = run({"certify", id, "--extremal"});
      CHECK(e.status == 0);
      for (const auto& rep2 : lines(e.out)) CHECK(rep2["gap"].get<double>() < 1e-4);
    }
  }
  SUBCASE("negative input at the identity point") {
    const Grid g = make_grid(128, 8.0);
    const auto f = sample_closure(
        [](std::span<const double> t) { return Complex(-std::exp(-pi * t[0] * t[0])); }, g);
    const auto path = scratch("negative.json");
    write(path, to_json(f).dump());
    const auto r = run({"certify", "young", "--m", "1", "--n", "1", "--r", "1", "--input",
                        path.string()});
    CHECK(r.status == 2);
    const auto ok = run({"certify", "young", "--m", "1.25", "--n", "1.25", "--input",
                         path.string()});
    CHECK(ok.status == 0);
  }
  SUBCASE("lattice file and report file") {
    const auto lattice = scratch("lattice.json");
    write(lattice, R"([{"r": 1.25}, {"r": 1.75}])");
    const auto out = scratch("reports.jsonl");
    const auto r = run({"certify", "hausdorff_young", "--lattice", lattice.string(), "--seeds",
                        "3", "--json", out.string()});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(lines(text.str()).size() == 6);

    write(lattice, R"({"r": 1.25})");
    CHECK(run({"certify", "hausdorff_young", "--lattice", lattice.string()}).status == 2);
  }
  SUBCASE("violations exit with status 1") {
    const auto r = run({"certify", "cowling_price", "--bound", "10", "--seeds", "2"});
    CHECK(r.status == 1);
  }
  SUBCASE("deterministic output") {
    const std::vector<std::string> args{"certify", "young", "--seeds", "4", "--grid", "256,10"};
    CHECK(run(args).out == run(args).out);
  }
  SUBCASE("errors") {
    CHECK(run({"certify"}).status == 64);
    CHECK(run({"certify", "no_such_inequality"}).status == 2);
    CHECK(run({"certify", "heisenberg", "--grid", "512"}).status == 64);
    CHECK(run({"certify", "heisenberg", "--seeds", "0"}).status == 64);
    CHECK(run({"certify", "heisenberg", "--bogus"}).status == 64);
  }
}

TEST_CASE("spectrum subcommand") {
  SUBCASE("oscillator preset") {
    const auto prefix = scratch("state").string();
    const auto r = run({"spectrum", "--oscillator", "--count", "3", "--csv", prefix});
    CHECK(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(rows[k]["lambda"].get<double>() - (2.0 * k + 1.0) / (2.0 * pi)) < 1e-3);
    }
    CHECK(std::filesystem::exists(prefix + "_2.csv"));
  }
  SUBCASE("generalized route") {
    const auto r = run({"spectrum", "--psi", "abs", "--phi", "abs", "--m0", "const:1", "--grid",
                        "128,10", "--count", "2"});
    CHECK(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0]["lambda"].get<double>() - 1.0 / (2.0 * pi)) < 1e-6);
    CHECK(rows[0]["residual"].get<double>() <= 1e-8);
    const auto bump = run({"spectrum", "--m0", "bump:0.5", "--grid", "64,8", "--count", "1"});
    CHECK(bump.status == 0);
  }
  SUBCASE("errors") {
    CHECK(run({"spectrum", "--oscillator", "--psi", "abs"}).status == 64);
    CHECK(run({"spectrum", "--psi", "cube"}).status == 64);
    CHECK(run({"spectrum", "--oscillator", "--count", "11"}).status == 2);
  }
}

TEST_CASE("minimize subcommand") {
  SUBCASE("Heisenberg preset") {
    const auto csv = scratch("minimizer.csv");
    const auto r = run({"minimize", "--preset", "heisenberg", "--starts", "2", "--csv",
                        csv.string()});
    CHECK(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    const auto& summary = rows.back();
    CHECK(std::abs(summary["lambda"].get<double>() - 1.0 / std::sqrt(pi)) < 1e-3);
    CHECK(summary["all_converged"] == true);
    CHECK(std::filesystem::exists(csv));
  }
  SUBCASE("exponent file") {
    const auto path = scratch("exponents.json");
    write(path, R"({"p": 2, "q": 2, "a": 1, "b": 1})");
    const auto r = run({"minimize", "--exponents", path.string(), "--starts", "1"});
    CHECK(r.status == 0);
  }
  SUBCASE("errors") {
    CHECK(run({"minimize"}).status == 64);
    CHECK(run({"minimize", "--preset", "oscillator"}).status == 2);
    CHECK(run({"minimize", "--preset", "heisenberg", "--grid", "32,8,2"}).status == 2);
  }
}

TEST_CASE("help and usage") {
  CHECK(run({"--help"}).status == 0);
  CHECK(run({}).status == 64);
  CHECK(run({"frobnicate"}).status == 64);
}
