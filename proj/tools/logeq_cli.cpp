// logeq: command-line front end for the equilibrium-measure library.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 domain error (including method/regime mismatch).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logeq/logeq.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double tau = 0.0;
  int n = 101;
  std::string grid = "chebyshev";
  std::string method = "auto";
  std::string name;
  std::string out;
  double re = 0.0;
  double im = 0.0;
  std::optional<double> x;
  double tol = 1e-12;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

logeq::GridKind grid_kind(const std::string& s) {
  return s == "uniform" ? logeq::GridKind::Uniform : logeq::GridKind::Chebyshev;
}

void write_json(const Options& o, const json& j) {
  Output out(o.out);
  out.stream() << j.dump(2) << '\n';
}

void write_csv(const Options& o, const std::string& value_name, const std::vector<double>& xs,
               const std::vector<double>& ys) {
  Output out(o.out);
  std::string text = "x," + value_name + "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    text += logeq::format_number(xs[i]);
    text += ',';
    text += logeq::format_number(ys[i]);
    text += '\n';
  }
  out.stream() << text;
}

int cmd_regime(const Options& o) {
  const auto sup = logeq::support(o.tau);
  json j;
  j["tau"] = o.tau;
  j["regime"] = logeq::to_string(logeq::classify_regime(o.tau));
  j["shape"] = logeq::to_string(sup.shape);
  j["beta"] = sup.beta;
  write_json(o, j);
  return 0;
}

int cmd_beta(const Options& o) {
  json j;
  j["tau"] = o.tau;
  j["regime"] = logeq::to_string(logeq::classify_regime(o.tau));
  j["beta"] = logeq::support(o.tau).beta;
  write_json(o, j);
  return 0;
}

int cmd_density(const Options& o) {
  const auto xs = logeq::support_grid(logeq::support(o.tau), o.n, grid_kind(o.grid));
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (double x : xs) ys.push_back(logeq::density(o.tau, x));
  write_csv(o, "density", xs, ys);
  return 0;
}

int cmd_cauchy(const Options& o) {
  const auto c = logeq::cauchy(o.tau, {o.re, o.im});
  json j;
  j["tau"] = o.tau;
  j["re"] = o.re;
  j["im"] = o.im;
  j["cauchy_re"] = c.real();
  j["cauchy_im"] = c.imag();
  write_json(o, j);
  return 0;
}

int cmd_potential(const Options& o) {
  const double re = o.x ? *o.x : o.re;
  const double im = o.x ? 0.0 : o.im;
  json j;
  j["tau"] = o.tau;
  j["re"] = re;
  j["im"] = im;
  j["potential"] = logeq::potential(o.tau, logeq::cplx(re, im));
  write_json(o, j);
  return 0;
}

int cmd_omega(const Options& o) {
  const auto regime = logeq::classify_regime(o.tau);
  const bool repulsive = regime == logeq::Regime::Repulsive;
  std::string method = o.method;
  if (method == "auto") method = repulsive ? "series" : "closed";
  if (repulsive && method == "closed") {
    throw logeq::DomainError("method 'closed' is not available in the repulsive regime");
  }
  if (!repulsive && method != "closed") {
    throw logeq::DomainError("method '" + method + "' applies only to the repulsive regime");
  }
  double value = 0.0;
  if (method == "closed") {
    value = logeq::omega(o.tau);
  } else if (method == "series") {
    value = logeq::series::omega_series(o.tau, o.tol).value;
  } else {
    value = logeq::series::omega_integral(o.tau);
  }
  json j;
  j["tau"] = o.tau;
  j["regime"] = logeq::to_string(regime);
  j["beta"] = logeq::support(o.tau).beta;
  j["omega"] = value;
  j["method"] = method;
  write_json(o, j);
  return 0;
}

int cmd_verify(const Options& o) {
  const auto r = logeq::oracle::verify(o.tau);
  json j;
  j["tau"] = r.tau;
  j["mass_error"] = r.mass_error;
  j["flatness_error"] = r.flatness_error;
  j["inequality_margin"] = r.inequality_margin;
  j["sp_error"] = r.sp_error;
  j["cross_route_omega_spread"] = r.cross_route_omega_spread;
  j["pass"] = r.pass();
  write_json(o, j);
  return r.pass() ? 0 : kExitVerifyFailed;
}

int cmd_figure(const Options& o, bool tau_given) {
  if (o.name == "extfield") {
    const double tau = tau_given ? o.tau : -2.0;
    const auto xs = logeq::interval_grid(-1.0, 1.0, o.n, grid_kind(o.grid));
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(logeq::external_field(tau, x));
    write_csv(o, "field", xs, ys);
    return 0;
  }
  Options d = o;
  d.tau = (o.name == "fig2") ? -2.0 : 2.0;
  return cmd_density(d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium measures on [-1, 1] in the external field tau V^lambda", "logeq"};
  app.require_subcommand(1);
  Options o;

  auto add_tau = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--tau", o.tau, "field strength");
    if (required) opt->required();
    return opt;
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output path (default stdout)"); };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "number of rows")->check(CLI::Range(2, 100000000));
    sub->add_option("--grid", o.grid, "chebyshev or uniform")
        ->check(CLI::IsMember({"chebyshev", "uniform"}));
  };

  auto* regime = app.add_subcommand("regime", "classify tau and describe the support");
  add_tau(regime, true);
  add_out(regime);

  auto* beta = app.add_subcommand("beta", "support endpoint beta_tau");
  add_tau(beta, true);
  add_out(beta);

  auto* density = app.add_subcommand("density", "equilibrium density on a support grid (CSV)");
  add_tau(density, true);
  add_grid(density);
  add_out(density);

  auto* cauchy = app.add_subcommand("cauchy", "Cauchy transform at re + i im");
  add_tau(cauchy, true);
  cauchy->add_option("--re", o.re)->required();
  cauchy->add_option("--im", o.im);
  add_out(cauchy);

  auto* potential = app.add_subcommand("potential", "logarithmic potential at x or re + i im");
  add_tau(potential, true);
  auto* px = potential->add_option("--x", o.x);
  auto* pre = potential->add_option("--re", o.re);
  auto* pim = potential->add_option("--im", o.im);
  px->excludes(pre)->excludes(pim);
  add_out(potential);

  auto* omega = app.add_subcommand("omega", "equilibrium constant");
  add_tau(omega, true);
  omega->add_option("--method", o.method, "auto, closed, series or integral")
      ->check(CLI::IsMember({"auto", "closed", "series", "integral"}));
  omega->add_option("--tol", o.tol, "series truncation threshold")->check(CLI::Range(1e-14, 1.0));
  add_out(omega);

  auto* verify = app.add_subcommand("verify", "run the numerical verification report");
  add_tau(verify, true);
  add_out(verify);

  auto* figure = app.add_subcommand("figure", "figure data: fig2, fig3 or extfield (CSV)");
  figure->add_option("--name", o.name)->required()->check(
      CLI::IsMember({"fig2", "fig3", "extfield"}));
  auto* figure_tau = add_tau(figure, false);
  add_grid(figure);
  add_out(figure);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  // fig3 has two cuts and no center point, so an even count keeps it mirror-symmetric.
  if (figure->parsed() && figure->count("--n") == 0) o.n = (o.name == "fig3") ? 400 : 401;

  for (double v : {o.tau, o.re, o.im, o.tol, o.x.value_or(0.0)}) {
    if (!std::isfinite(v)) {
      std::cerr << "error: numeric flags must be finite\n";
      return kExitUsage;
    }
  }

  try {
    if (regime->parsed()) return cmd_regime(o);
    if (beta->parsed()) return cmd_beta(o);
    if (density->parsed()) return cmd_density(o);
    if (cauchy->parsed()) return cmd_cauchy(o);
    if (potential->parsed()) return cmd_potential(o);
    if (omega->parsed()) return cmd_omega(o);
    if (verify->parsed()) return cmd_verify(o);
    if (figure->parsed()) return cmd_figure(o, figure_tau->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
