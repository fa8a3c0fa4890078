#include "geoweb/check.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <thread>
#include <vector>

#include "geoweb/errors.hpp"
#include "geoweb/gauge.hpp"

namespace geoweb {
namespace {

// Runs fn(i) for i in [0, count) on `workers` threads; fn writes to slot i only.
template <typename Fn>
void parallel_for(std::size_t count, int workers, const Fn& fn) {
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  if (n == 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += n) fn(i);
    });
  }
}

struct PointResult {
  bool valid = false;
  double w = 0.0;
  double alpha = 0.0;
  double K = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
};

std::vector<double> centres(double lo, double hi, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 0.5) / n;
  return t;
}

void validate_config(const CheckConfig& c) {
  if (c.grid < 8) throw InputError("grid must be at least 8");
  const Rect& r = c.rect;
  for (double v : {r.x_min, r.x_max, r.y_min, r.y_max}) {
    if (!std::isfinite(v)) throw InputError("domain bounds must be finite");
  }
  if (!(r.x_min < r.x_max) || !(r.y_min < r.y_max)) throw InputError("empty domain rectangle");
  for (double t : {c.tol_K, c.tol_L, c.fit_threshold}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("tolerances must be positive");
  }
}

nlohmann::ordered_json fit_json(const FitResult& r, double threshold) {
  nlohmann::ordered_json j;
  const bool matched = r.rms_residual < threshold;
  j["family"] = matched ? to_string(tag_of(r.family)) : "none";
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  if (matched) {
    for (const auto& [name, value] : parameters(r.family)) {
      if (name == "corrected") {
        params[name] = value != 0.0;
      } else {
        params[name] = value;
      }
    }
  }
  j["parameters"] = params;
  j["degenerate_lattice"] = matched && degenerate_lattice(r.family);
  j["rms_residual"] = r.rms_residual;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  return j;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::linearizable_conditions_met: return "linearizable_conditions_met";
    case Verdict::liouville_nonzero: return "liouville_nonzero";
    case Verdict::curvature_nonzero: return "curvature_nonzero";
    case Verdict::degenerate: return "degenerate";
  }
  return "degenerate";
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("GEOWEB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<long>(n, cap);
  }
  return n;
}

Report run_check(const CheckConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate_config(config);
  const WebSpec spec{Expression::parse(config.f_text), Expression::parse(config.a_text), config.rect};
  const int workers = worker_count(config.threads);

  Report rep;
  rep.config = config;
  rep.fit_requested = config.fit;

  const int n = config.grid;
  const auto xs = centres(config.rect.x_min, config.rect.x_max, n);
  const auto ys = centres(config.rect.y_min, config.rect.y_max, n);
  const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const auto point = [&](std::size_t i) { return Point{xs[i / static_cast<std::size_t>(n)], ys[i % static_cast<std::size_t>(n)]}; };

  std::vector<PointResult> pts(count);
  parallel_for(count, workers, [&](std::size_t i) {
    try {
      const InvariantSample s = sample_invariants(spec, point(i));
      if (std::isfinite(s.K) && std::isfinite(s.L1) && std::isfinite(s.L2)) {
        pts[i] = {true, s.w, s.alpha, s.K, s.L1, s.L2};
      }
    } catch (const NumericalError&) {
    }
  });

  std::size_t valid = 0;
  double max_w_dev = 0.0;
  for (const auto& p : pts) {
    if (!p.valid) continue;
    ++valid;
    rep.max_abs_K = std::max(rep.max_abs_K, std::abs(p.K));
    max_w_dev = std::max(max_w_dev, std::abs(p.w - 1.0));
  }

  const bool flat = valid > 0 && rep.max_abs_K < config.tol_K;
  std::vector<Point> coords(count);
  for (std::size_t i = 0; i < count; ++i) coords[i] = point(i);

  if (flat && max_w_dev > 1e-12) {
    // base point: the valid grid point nearest the centre of the rectangle
    const Point mid{0.5 * (config.rect.x_min + config.rect.x_max), 0.5 * (config.rect.y_min + config.rect.y_max)};
    std::size_t base = count;
    double best = INFINITY;
    for (std::size_t i = 0; i < count; ++i) {
      if (!pts[i].valid) continue;
      const double d = std::hypot(coords[i].x - mid.x, coords[i].y - mid.y);
      if (d < best) {
        best = d;
        base = i;
      }
    }
    GaugeOptions gopts;
    gopts.tol_K = config.tol_K;
    gopts.check_grid = n;
    const GaugeTable table = separate(spec, coords[base], gopts);
    const GaugedWeb web(table, spec);
    rep.gauge_applied = true;
    parallel_for(count, workers, [&](std::size_t i) {
      if (!pts[i].valid) return;
      try {
        const BaseJets b = web.base_jets(coords[i]);
        const LiouvillePair l = liouville_from_alpha(b.alpha, b.w, b.k);
        pts[i].alpha = b.alpha.value();
        pts[i].L1 = l.L1;
        pts[i].L2 = l.L2;
        if (!std::isfinite(l.L1) || !std::isfinite(l.L2)) pts[i].valid = false;
      } catch (const NumericalError&) {
        pts[i].valid = false;
      }
    });
    for (std::size_t i = 0; i < count; ++i) coords[i] = web.transform(coords[i]);
  }

  valid = 0;
  for (const auto& p : pts) {
    if (!p.valid) continue;
    ++valid;
    rep.max_abs_L1 = std::max(rep.max_abs_L1, std::abs(p.L1));
    rep.max_abs_L2 = std::max(rep.max_abs_L2, std::abs(p.L2));
  }
  rep.degenerate_point_count = count - valid;

  if (static_cast<double>(valid) < kMinValidFraction * static_cast<double>(count)) {
    rep.verdict = Verdict::degenerate;
  } else if (!flat) {
    rep.verdict = Verdict::curvature_nonzero;
  } else if (!(rep.max_abs_L1 < config.tol_L) || !(rep.max_abs_L2 < config.tol_L)) {
    rep.verdict = Verdict::liouville_nonzero;
  } else {
    rep.verdict = Verdict::linearizable_conditions_met;
  }

  if (config.fit && flat && rep.verdict != Verdict::degenerate) {
    // about 10 x 10 samples of alpha in the normalized coordinates
    const int stride = std::max(1, (n + 9) / 10);
    std::vector<AlphaSample> samples;
    for (int i = 0; i < n; i += stride) {
      for (int j = 0; j < n; j += stride) {
        const auto k = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
        if (pts[k].valid) samples.push_back({coords[k].x, coords[k].y, pts[k].alpha});
      }
    }
    if (samples.size() >= kMinAlphaSamples) {
      FitOptions fopts;
      fopts.threshold = config.fit_threshold;
      rep.family_fit = fit_auto(samples, fopts);
    }
  }

  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string report_json(const Report& r) {
  using nlohmann::ordered_json;
  const CheckConfig& c = r.config;
  ordered_json j;
  j["input"] = {
      {"f", c.f_text},
      {"a", c.a_text},
      {"domain", {{"x_min", c.rect.x_min}, {"x_max", c.rect.x_max}, {"y_min", c.rect.y_min}, {"y_max", c.rect.y_max}}},
      {"grid", c.grid},
      {"tol_K", c.tol_K},
      {"tol_L", c.tol_L},
      {"fit_threshold", c.fit_threshold},
  };
  j["assumption"] =
      "the web is assumed geodesic; only the conditions K = 0 and L1 = L2 = 0 are checked, on the sampled grid";
  j["max_abs_K"] = r.max_abs_K;
  j["max_abs_L1"] = r.max_abs_L1;
  j["max_abs_L2"] = r.max_abs_L2;
  j["degenerate_point_count"] = r.degenerate_point_count;
  j["verdict"] = to_string(r.verdict);
  j["gauge_applied"] = r.gauge_applied;
  if (r.family_fit) {
    j["family_fit"] = fit_json(*r.family_fit, c.fit_threshold);
  } else if (r.fit_requested) {
    j["family_fit"] = {{"family", "none"}, {"parameters", ordered_json::object()},
                       {"degenerate_lattice", false}, {"rms_residual", nullptr},
                       {"converged", false}, {"iterations", 0}};
  } else {
    j["family_fit"] = nullptr;
  }
  j["tool_version"] = kToolVersion;
  j["wall_time_ms"] = std::round(r.wall_time_ms * 1000.0) / 1000.0;
  return j.dump(2) + "\n";
}

}  // namespace geoweb
