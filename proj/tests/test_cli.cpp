#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using Catch::Matchers::WithinAbs;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LOGEQ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct Table {
  std::string header;
  std::vector<double> x;
  std::vector<double> y;
};

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::getline(in, t.header);
  std::string line;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    t.x.push_back(std::stod(line.substr(0, comma)));
    t.y.push_back(std::stod(line.substr(comma + 1)));
  }
  return t;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("regime and beta commands") {
  auto r = run("regime --tau 2");
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["regime"] == "repulsive");
  CHECK(j["shape"] == "two-cut");
  CHECK_THAT(j["beta"].get<double>(), WithinAbs(0.417299, 1e-5));

  r = run("beta --tau -2");
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["regime"] == "attractive");
  CHECK_THAT(j["beta"].get<double>(), WithinAbs(std::sqrt(3.0) / 2, 1e-16));
  CHECK(json::parse(run("regime --tau -1").out)["regime"] == "intermediate");
}

TEST_CASE("density command examples") {
  auto r = run("density --tau -2 --n 5 --grid uniform");
  REQUIRE(r.code == 0);
  auto t = parse_csv(r.out);
  CHECK(t.header == "x,density");
  REQUIRE(t.x.size() == 5);
  const double b = std::sqrt(3.0) / 2;
  CHECK(t.x.front() > -b);
  CHECK(t.x.back() < b);
  CHECK_THAT(t.x.front(), WithinAbs(-b, 1e-5));
  CHECK(t.x[2] == 0.0);
  CHECK_THAT(t.y[2], WithinAbs(2.0 / 3.0, 1e-15));

  r = run("density --tau 0 --n 3");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\n0,0.3183098861837907\n") != std::string::npos);

  r = run("density --tau 2 --n 100");
  REQUIRE(r.code == 0);
  t = parse_csv(r.out);
  REQUIRE(t.x.size() == 100);
  const double beta = 0.4172994302;
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (std::abs(t.x[i] - beta) < std::abs(t.x[nearest] - beta)) nearest = i;
  }
  CHECK(t.y[nearest] < 1e-2);
  for (double x : t.x) CHECK(std::abs(x) > beta);
}

TEST_CASE("density CSV integrates to one") {
  auto trapezoid = [](const Table& t) {
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
      const double h = t.x[i + 1] - t.x[i];
      if (h > 0.1) continue;  // gap between the two cuts
      mass += 0.5 * h * (t.y[i] + t.y[i + 1]);
    }
    return mass;
  };
  for (const char* tau : {"-2", "0", "0.5", "2", "5"}) {
    INFO("tau = " << tau);
    const auto t = parse_csv(run(std::string("density --n 10000 --tau ") + tau).out);
    CHECK_THAT(trapezoid(t), WithinAbs(1.0, 5e-3));
  }
  // Soft edges only, so the uniform grid is fine too.
  CHECK_THAT(trapezoid(parse_csv(run("density --grid uniform --n 10000 --tau -2").out)),
             WithinAbs(1.0, 5e-3));
}

TEST_CASE("cauchy and potential commands") {
  auto j = json::parse(run("cauchy --tau 0 --re 2").out);
  CHECK_THAT(j["cauchy_re"].get<double>(), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
  CHECK(j["cauchy_im"].get<double>() == 0.0);
  j = json::parse(run("cauchy --tau 2 --re 0.5 --im 0.25").out);
  CHECK(j["im"] == 0.25);
  CHECK(j["cauchy_im"].get<double>() < 0.0);

  j = json::parse(run("potential --tau 0 --x 0.3").out);
  CHECK_THAT(j["potential"].get<double>(), WithinAbs(std::log(2.0), 1e-15));
  j = json::parse(run("potential --tau 0 --re 2 --im 0").out);
  CHECK_THAT(j["potential"].get<double>(), WithinAbs(-std::log((2 + std::sqrt(3.0)) / 2), 1e-15));
  CHECK(run("potential --tau 0 --x 0.3 --re 1").code == 2);
}

TEST_CASE("omega command") {
  auto j = json::parse(run("omega --tau 0").out);
  CHECK(j["omega"].get<double>() == std::log(2.0));
  CHECK(j["method"] == "closed");
  CHECK(j["regime"] == "intermediate");
  CHECK(j.size() == 5);
  CHECK(run("omega --tau 0").out.find("\"omega\": 0.6931471805599453") != std::string::npos);

  j = json::parse(run("omega --tau -1").out);
  CHECK(j["omega"].get<double>() == 0.0);

  const double s = json::parse(run("omega --tau 2 --method series").out)["omega"].get<double>();
  const double q = json::parse(run("omega --tau 2 --method integral").out)["omega"].get<double>();
  CHECK_THAT(s, WithinAbs(q, 1e-8));
  CHECK(json::parse(run("omega --tau 2").out)["method"] == "series");
}

TEST_CASE("verify command") {
  auto r = run("verify --tau 0");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["pass"] == true);
  for (const char* k : {"tau", "mass_error", "flatness_error", "inequality_margin", "sp_error",
                        "cross_route_omega_spread"}) {
    CHECK(j.contains(k));
  }
  r = run("verify --tau -2");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["flatness_error"].get<double>() <= 1e-6);
  r = run("verify --tau 2");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["cross_route_omega_spread"].get<double>() <= 1e-8);
}

TEST_CASE("figure command") {
  auto r = run("figure --name extfield --tau -2 --n 5 --grid uniform");
  REQUIRE(r.code == 0);
  auto t = parse_csv(r.out);
  CHECK(t.header == "x,field");
  CHECK(t.x[2] == 0.0);
  CHECK(t.y[2] == -2.0);
  CHECK(t.x.front() == -1.0);

  t = parse_csv(run("figure --name extfield").out);
  CHECK(t.x.size() == 401);
  CHECK(t.y[200] == -2.0);

  t = parse_csv(run("figure --name fig2").out);
  CHECK(t.x.size() == 401);
  CHECK_THAT(t.x.front(), WithinAbs(-std::sqrt(3.0) / 2, 1e-5));
  CHECK_THAT(t.x.back(), WithinAbs(std::sqrt(3.0) / 2, 1e-5));

  t = parse_csv(run("figure --name fig3").out);
  REQUIRE(t.x.size() == 400);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    CHECK(t.x[i] == -t.x[t.x.size() - 1 - i]);
    CHECK(t.y[i] == t.y[t.y.size() - 1 - i]);
  }
  CHECK_THAT(t.x.front(), WithinAbs(-1.0, 1e-5));
  CHECK_THAT(t.x.back(), WithinAbs(1.0, 1e-5));
  double inner_min = 1.0;
  for (double x : t.x) inner_min = std::min(inner_min, std::abs(x));
  CHECK_THAT(inner_min, WithinAbs(0.4173, 1e-4));
}

TEST_CASE("--out writes the same bytes as stdout") {
  const auto path = std::filesystem::temp_directory_path() / "logeq_cli_out_test.csv";
  std::filesystem::remove(path);
  const auto r = run("density --tau 1 --n 17 --out " + path.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(read_file(path) == run("density --tau 1 --n 17").out);
  std::filesystem::remove(path);
  CHECK(run("density --tau 1 --out /nonexistent-dir/x.csv").code == 2);
}

TEST_CASE("exit codes") {
  CHECK(run("omega --tau 0").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("nosuchcommand").code == 2);
  CHECK(run("density").code == 2);
  CHECK(run("density --tau abc").code == 2);
  CHECK(run("density --tau nan").code == 2);
  CHECK(run("density --tau inf").code == 2);
  CHECK(run("density --tau 0 --n 1").code == 2);
  CHECK(run("density --tau 0 --grid fancy").code == 2);
  CHECK(run("figure --name fig9").code == 2);
  CHECK(run("omega --tau 0 --method series").code == 3);
  CHECK(run("omega --tau 2 --method closed").code == 3);
  CHECK(run("cauchy --tau 0 --re 0.5").code == 3);
  CHECK(run("verify --tau 3").code == 0);
  // The support is so narrow that the fixed Plemelj offsets cannot resolve it;
  // the report is still emitted.
  const auto failed = run("verify --tau -1e6");
  CHECK(failed.code == 1);
  CHECK(json::parse(failed.out)["pass"] == false);
  CHECK(json::parse(failed.out)["sp_error"].get<double>() > 1e-4);
  CHECK(run("omega --tau 1e4").code == 3);
  CHECK(run("--help").code == 0);
}

TEST_CASE("output is deterministic") {
  for (const char* args : {"figure --name fig3", "omega --tau 5", "cauchy --tau -3 --re 0.1 --im 2"}) {
    CHECK(run(args).out == run(args).out);
  }
}

TEST_CASE("golden files") {
  const std::filesystem::path dir(LOGEQ_GOLDEN_DIR);
  const std::vector<std::pair<std::string, std::string>> cases{
      {"fig2.csv", "figure --name fig2"},
      {"fig3.csv", "figure --name fig3"},
      {"extfield.csv", "figure --name extfield"},
      {"density_tau0.5_n21.csv", "density --tau 0.5 --n 21"},
  };
  for (const auto& [file, args] : cases) {
    INFO(file);
    REQUIRE(std::filesystem::exists(dir / file));
    const auto want = parse_csv(read_file(dir / file));
    const auto got = parse_csv(run(args).out);
    CHECK(got.header == want.header);
    REQUIRE(got.x.size() == want.x.size());
    for (std::size_t i = 0; i < got.x.size(); ++i) {
      CHECK_THAT(got.x[i], WithinAbs(want.x[i], 1e-12));
      CHECK_THAT(got.y[i], WithinAbs(want.y[i], 1e-12 * std::max(1.0, std::abs(want.y[i]))));
    }
  }
}
