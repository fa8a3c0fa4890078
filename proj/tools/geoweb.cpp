// geoweb command-line interface.
//
// Exit status: 0 on success (verdicts are data inside the output), 2 for
// input errors and bad flags, 3 for numerical failures.

#include <CLI11.hpp>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "criteria.hpp"
#include "geoweb/check.hpp"
#include "geoweb/errors.hpp"
#include "geoweb/families.hpp"
#include "geoweb/fit.hpp"
#include "geoweb/gauge.hpp"
#include "geoweb/invariants.hpp"
#include "geoweb/weierstrass.hpp"

namespace {

using geoweb::InputError;
using json = nlohmann::ordered_json;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw InputError("empty number for " + what);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw InputError("bad number '" + t + "' for " + what);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

geoweb::Point parse_point(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InputError(what + " must look like x,y");
  return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

geoweb::Rect parse_domain(const std::string& text) {
  const auto axes = split(text, ',');
  if (axes.size() != 2) throw InputError("--domain must look like x0:x1,y0:y1");
  const auto xr = split(axes[0], ':'), yr = split(axes[1], ':');
  if (xr.size() != 2 || yr.size() != 2) throw InputError("--domain must look like x0:x1,y0:y1");
  geoweb::Rect r{parse_number(xr[0], "--domain"), parse_number(xr[1], "--domain"), parse_number(yr[0], "--domain"),
                 parse_number(yr[1], "--domain")};
  if (!(r.x_min < r.x_max) || !(r.y_min < r.y_max)) throw InputError("--domain is empty");
  return r;
}

std::vector<std::pair<std::string, double>> parse_params(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--params entries must look like name=value");
    const std::string name = trim(item.substr(0, eq));
    out.emplace_back(name, parse_number(item.substr(eq + 1), "parameter " + name));
  }
  return out;
}

geoweb::FamilyTag parse_tag(const std::string& text) {
  const auto tag = geoweb::parse_family_tag(text);
  if (!tag) throw InputError("unknown family type '" + text + "' (expected t1, t2, t3 or t4)");
  return *tag;
}

// Write to a temporary sibling, then rename over the target.
void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot rename onto " + path);
  }
}

json family_json(const geoweb::FamilySpec& fam) {
  json params = json::object();
  for (const auto& [name, value] : geoweb::parameters(fam)) {
    if (name == "corrected") {
      params[name] = value != 0.0;
    } else {
      params[name] = value;
    }
  }
  return {{"type", geoweb::to_string(geoweb::tag_of(fam))}, {"parameters", params}};
}

std::vector<geoweb::AlphaSample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + " is empty");
  std::string header;
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) header += c;
  }
  if (header != "x,y,alpha") throw InputError(path + ": header must be x,y,alpha");
  std::vector<geoweb::AlphaSample> s;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != 3) throw InputError(where + ": expected three columns");
    s.push_back({parse_number(cells[0], where), parse_number(cells[1], where), parse_number(cells[2], where)});
  }
  return s;
}

// ----- subcommands -----------------------------------------------------------

struct InvariantsArgs {
  std::string f, a, at;
};

int cmd_invariants(const InvariantsArgs& args) {
  const geoweb::WebSpec spec{geoweb::Expression::parse(args.f), geoweb::Expression::parse(args.a), {}};
  const geoweb::Point p = parse_point(args.at, "--at");
  const auto s = geoweb::sample_invariants(spec, p);
  const json j = {{"point", {{"x", p.x}, {"y", p.y}}},
                  {"w", s.w},
                  {"alpha", s.alpha},
                  {"k", s.k},
                  {"K", s.K},
                  {"L1", s.L1},
                  {"L2", s.L2}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct CheckArgs {
  std::string f, a, domain, out;
  int grid = 32;
  double tol = -1.0, tol_K = -1.0, tol_L = -1.0;
  double fit_threshold = 1e-6;
  bool fit = false;
  int threads = 0;
};

int cmd_check(const CheckArgs& args) {
  geoweb::CheckConfig cfg;
  cfg.f_text = args.f;
  cfg.a_text = args.a;
  cfg.rect = parse_domain(args.domain);
  cfg.grid = args.grid;
  if (args.tol > 0.0) cfg.tol_K = cfg.tol_L = args.tol;
  if (args.tol_K > 0.0) cfg.tol_K = args.tol_K;
  if (args.tol_L > 0.0) cfg.tol_L = args.tol_L;
  cfg.fit_threshold = args.fit_threshold;
  cfg.fit = args.fit;
  cfg.threads = args.threads;
  const geoweb::Report rep = geoweb::run_check(cfg);
  const std::string text = geoweb::report_json(rep);
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_atomically(args.out, text);
    std::cout << "verdict: " << geoweb::to_string(rep.verdict) << " (report written to " << args.out << ")\n";
  }
  return 0;
}

struct WpArgs {
  double z = 0.0, g2 = 0.0, g3 = 0.0;
  bool jet = false;
};

int cmd_wp(const WpArgs& args) {
  const geoweb::WpParams p{args.g2, args.g3};
  const auto r = geoweb::wp_pair(args.z, p);
  json j = {{"z", args.z}, {"g2", args.g2}, {"g3", args.g3}, {"wp", r.wp}, {"dwp", r.dwp}};
  if (args.jet) {
    const auto t = geoweb::wp_pair(geoweb::Jet1::variable(args.z, geoweb::kMaxJetDegree), p);
    json d = json::array();
    for (int k = 0; k <= geoweb::kMaxJetDegree; ++k) d.push_back(t.wp.derivative(k));
    j["wp_derivatives"] = d;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct FamilyArgs {
  std::string type, params, at, domain, samples;
  std::string fit_type = "auto";
  int grid = 32;
  double tol = 1e-8;
  double threshold = 1e-6;
};

int cmd_family_eval(const FamilyArgs& args) {
  const auto fam = geoweb::make_family(parse_tag(args.type), parse_params(args.params));
  const geoweb::Point p = parse_point(args.at, "--at");
  const geoweb::Jet2 a = geoweb::alpha_eval(fam, p, 1);
  json j = family_json(fam);
  j["point"] = {{"x", p.x}, {"y", p.y}};
  j["alpha"] = a.value();
  j["alpha_x"] = a.partial(1, 0);
  j["alpha_y"] = a.partial(0, 1);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_family_verify(const FamilyArgs& args) {
  const auto fam = geoweb::make_family(parse_tag(args.type), parse_params(args.params));
  const geoweb::Rect r = parse_domain(args.domain);
  if (args.grid < 2) throw InputError("--grid must be at least 2");
  const auto web = geoweb::alpha_to_web(fam);
  const bool one_variable = geoweb::tag_of(fam) != geoweb::FamilyTag::t1;

  double scaled = 0.0, L1 = 0.0, L2 = 0.0, R1 = 0.0, R2 = 0.0, F1 = 0.0, F2 = 0.0, ric = 0.0;
  int singular = 0, admissible = 0;
  const int n = args.grid;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const geoweb::Point p{r.x_min + (r.x_max - r.x_min) * (i + 0.5) / n,
                            r.y_min + (r.y_max - r.y_min) * (k + 0.5) / n};
      try {
        const geoweb::Jet2 a3 = web.alpha(p, 3);
        const geoweb::Jet2 a2 = a3.truncated(2);
        const auto l = geoweb::liouville_from_alpha(a2, web.w(p, 2), web.k(p, 1));
        const auto red = geoweb::reduced_residuals(a2);
        const auto fac = geoweb::factored_residuals(a3);
        const double s = 1.0 + std::pow(std::abs(a3.value()), 3);
        scaled = std::max({scaled, std::abs(3 * l.L1) / s, std::abs(3 * l.L2) / s});
        L1 = std::max(L1, std::abs(l.L1));
        L2 = std::max(L2, std::abs(l.L2));
        R1 = std::max(R1, std::abs(red.first));
        R2 = std::max(R2, std::abs(red.second));
        F1 = std::max(F1, std::abs(fac.first));
        F2 = std::max(F2, std::abs(fac.second));
        if (one_variable) ric = std::max(ric, std::abs(geoweb::riccati_residual(fam, p.x - p.y)));
        ++admissible;
      } catch (const geoweb::NumericalError&) {
        ++singular;
      }
    }
  }
  if (singular * 5 > n * n) {
    throw geoweb::NumericalError("singular points on " + std::to_string(singular) + " of " +
                                 std::to_string(n * n) + " grid points (more than 20%)");
  }
  json j = family_json(fam);
  j["domain"] = {{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min}, {"y_max", r.y_max}};
  j["grid"] = n;
  j["admissible_points"] = admissible;
  j["singular_point_count"] = singular;
  j["max_abs_L1"] = L1;
  j["max_abs_L2"] = L2;
  j["max_scaled_3L"] = scaled;
  j["max_abs_R1"] = R1;
  j["max_abs_R2"] = R2;
  j["max_abs_F1"] = F1;
  j["max_abs_F2"] = F2;
  j["max_abs_riccati"] = one_variable ? json(ric) : json(nullptr);
  j["tolerance"] = args.tol;
  j["pass"] = scaled < args.tol && (!one_variable || ric < args.tol);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_family_fit(const FamilyArgs& args) {
  const auto samples = read_samples(args.samples);
  geoweb::FitOptions opts;
  opts.threshold = args.threshold;
  const geoweb::FitResult r = args.fit_type == "auto" ? geoweb::fit_auto(samples, opts)
                                                      : geoweb::fit_family(samples, parse_tag(args.fit_type), opts);
  const bool matched = r.rms_residual < args.threshold;
  json j;
  if (matched) {
    j = family_json(r.family);
  } else {
    j = {{"type", "none"}, {"parameters", json::object()}};
  }
  j["degenerate_lattice"] = matched && geoweb::degenerate_lattice(r.family);
  j["rms_residual"] = r.rms_residual;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["sample_count"] = samples.size();
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct GaugeArgs {
  std::string f, domain, base, out;
  int n = 513;
};

int cmd_gauge(const GaugeArgs& args) {
  const geoweb::WebSpec spec{geoweb::Expression::parse(args.f), geoweb::Expression::parse("0.5"),
                             parse_domain(args.domain)};
  geoweb::GaugeOptions opts;
  opts.n = args.n;
  const geoweb::GaugeTable table = geoweb::separate(spec, parse_point(args.base, "--base"), opts);
  const geoweb::GaugedWeb web = geoweb::normalize(table, spec);
  const std::string fx = args.out + "_x.csv", fy = args.out + "_y.csv";
  write_atomically(fx, geoweb::gauge_csv(table, 'x'));
  write_atomically(fy, geoweb::gauge_csv(table, 'y'));
  const json j = {{"base", {{"x", table.base.x}, {"y", table.base.y}}},
                  {"sign_of_w", table.sign},
                  {"max_abs_K", table.max_abs_K},
                  {"separation_defect", table.separation_defect},
                  {"max_abs_w_deviation", web.max_abs_w_deviation()},
                  {"max_abs_k_fd", web.max_abs_k_fd()},
                  {"files", {fx, fy}}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_selftest() {
  int passed = 0, total = 0;
  for (const auto& r : geoweb::acceptance::run_all({})) {
    std::cout << geoweb::acceptance::format_line(r) << std::endl;
    ++total;
    if (r.pass) ++passed;
  }
  std::cout << passed << "/" << total << " criteria passed\n";
  return passed == total ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoweb: linearizability conditions for planar 4-webs with a flat 3-subweb"};
  app.set_version_flag("--version", geoweb::kToolVersion);
  app.require_subcommand(1);

  InvariantsArgs inv;
  auto* c_inv = app.add_subcommand("invariants", "w, alpha, k, K, L1, L2 at one point");
  c_inv->add_option("--f", inv.f, "web function f(x, y)")->required();
  c_inv->add_option("--a", inv.a, "basic invariant a(x, y)")->required();
  c_inv->add_option("--at", inv.at, "point x,y")->required();

  CheckArgs chk;
  auto* c_chk = app.add_subcommand("check", "grid check of K = 0 and L1 = L2 = 0, JSON report");
  c_chk->add_option("--f", chk.f, "web function f(x, y)")->required();
  c_chk->add_option("--a", chk.a, "basic invariant a(x, y)")->required();
  c_chk->add_option("--domain", chk.domain, "rectangle x0:x1,y0:y1")->required();
  c_chk->add_option("--grid", chk.grid, "points per axis (cell centres, >= 8)")->capture_default_str();
  c_chk->add_option("--tol", chk.tol, "tolerance for both K and L (default 1e-8)");
  c_chk->add_option("--tol-K", chk.tol_K, "tolerance for max |K|");
  c_chk->add_option("--tol-L", chk.tol_L, "tolerance for max |L1|, |L2|");
  c_chk->add_option("--fit-threshold", chk.fit_threshold, "rms threshold for --fit")->capture_default_str();
  c_chk->add_flag("--fit", chk.fit, "classify alpha into one of the families");
  c_chk->add_option("--threads", chk.threads, "worker threads (0: all cores, capped by GEOWEB_THREADS)");
  c_chk->add_option("--out", chk.out, "report path (stdout when omitted)");

  WpArgs wp;
  auto* c_wp = app.add_subcommand("wp", "Weierstrass P and P'");
  c_wp->add_option("--z", wp.z, "argument")->required();
  c_wp->add_option("--g2", wp.g2, "invariant g2")->required();
  c_wp->add_option("--g3", wp.g3, "invariant g3")->required();
  c_wp->add_flag("--jet", wp.jet, "also print P and its first four derivatives from jet evaluation");

  FamilyArgs fam;
  auto* c_fam = app.add_subcommand("family", "the closed-form alpha families");
  c_fam->require_subcommand(1);
  auto* c_eval = c_fam->add_subcommand("eval", "alpha and its gradient at a point");
  c_eval->add_option("--type", fam.type, "t1, t2, t3 or t4")->required();
  c_eval->add_option("--params", fam.params, "name=value,... (t1: g2,g3,lambda1,lambda2,corrected; t2: k,C; "
                                             "t3: k,C,corrected; t4: C)");
  c_eval->add_option("--at", fam.at, "point x,y")->required();
  auto* c_verify = c_fam->add_subcommand("verify", "Liouville and Riccati residuals on a grid");
  c_verify->add_option("--type", fam.type, "t1, t2, t3 or t4")->required();
  c_verify->add_option("--params", fam.params, "name=value,...");
  c_verify->add_option("--domain", fam.domain, "rectangle x0:x1,y0:y1")->required();
  c_verify->add_option("--grid", fam.grid, "points per axis")->capture_default_str();
  c_verify->add_option("--tol", fam.tol, "pass tolerance for |3L| / (1 + |alpha|^3)")->capture_default_str();
  auto* c_fit = c_fam->add_subcommand("fit", "classify alpha samples read from CSV (x,y,alpha)");
  c_fit->add_option("--samples", fam.samples, "CSV file with header x,y,alpha")->required();
  c_fit->add_option("--type", fam.fit_type, "auto, t1, t2, t3 or t4")->capture_default_str();
  c_fit->add_option("--threshold", fam.threshold, "rms threshold")->capture_default_str();

  GaugeArgs gauge;
  auto* c_gauge = app.add_subcommand("gauge", "normalize w to 1 on a curvature-flat web, CSV tables");
  c_gauge->add_option("--f", gauge.f, "web function f(x, y)")->required();
  c_gauge->add_option("--domain", gauge.domain, "rectangle x0:x1,y0:y1")->required();
  c_gauge->add_option("--base", gauge.base, "base point x0,y0")->required();
  c_gauge->add_option("--out", gauge.out, "output prefix; writes PREFIX_x.csv and PREFIX_y.csv")->required();
  c_gauge->add_option("--n", gauge.n, "table points per axis")->capture_default_str();

  auto* c_self = app.add_subcommand("selftest", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  try {
    if (*c_inv) return cmd_invariants(inv);
    if (*c_chk) return cmd_check(chk);
    if (*c_wp) return cmd_wp(wp);
    if (*c_eval) return cmd_family_eval(fam);
    if (*c_verify) return cmd_family_verify(fam);
    if (*c_fit) return cmd_family_fit(fam);
    if (*c_gauge) return cmd_gauge(gauge);
    if (*c_self) return cmd_selftest();
  } catch (const geoweb::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const geoweb::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}
