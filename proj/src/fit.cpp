#include "geoweb/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "geoweb/errors.hpp"

namespace geoweb {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Residuals r = model - samples and, when J != nullptr, the Jacobian dr/dp.
// Returns false when the model is singular at some sample.
using Evaluator = std::function<bool(const Vec& p, Vec& r, Mat* J)>;

struct LmOutcome {
  Vec params;
  double cost = kInf;  // sum of squares
  int iterations = 0;
};

LmOutcome levenberg_marquardt(const Evaluator& eval, Vec p, const FitOptions& opts) {
  Vec r;
  Mat J;
  LmOutcome out;
  out.params = p;
  if (!eval(p, r, &J)) return out;
  double cost = r.squaredNorm();
  double mu = 1e-3;
  int it = 0;
  for (; it < opts.max_iterations && cost > 0.0; ++it) {
    // Damped step from the stacked system [J; sqrt(mu) D] s = [-r; 0], which
    // avoids squaring the condition number of J.
    const Vec d2 = J.colwise().squaredNorm().transpose();
    const Vec scale = d2.cwiseMax(1e-12 * std::max(1.0, d2.maxCoeff())).cwiseSqrt();
    Mat stacked(J.rows() + J.cols(), J.cols());
    stacked << J, Mat((std::sqrt(mu) * scale).asDiagonal());
    Vec rhs = Vec::Zero(stacked.rows());
    rhs.head(r.size()) = -r;
    const Vec step = stacked.colPivHouseholderQr().solve(rhs);
    if (!step.allFinite()) {
      mu *= 10.0;
      if (mu > 1e16) break;
      continue;
    }
    if (step.norm() < opts.step_tol * (p.norm() + opts.step_tol)) break;
    const Vec trial = p + step;
    Vec r_trial;
    if (eval(trial, r_trial, nullptr) && r_trial.squaredNorm() < cost) {
      p = trial;
      mu = std::max(mu / 10.0, 1e-15);
      if (!eval(p, r, &J)) break;
      cost = r.squaredNorm();
    } else {
      mu *= 10.0;
      if (mu > 1e16) break;
    }
  }
  out.params = p;
  out.cost = cost;
  out.iterations = it;
  return out;
}

std::vector<AlphaSample> canonical_order(std::span<const AlphaSample> samples) {
  if (samples.size() < kMinAlphaSamples) {
    throw InsufficientSamples("need at least " + std::to_string(kMinAlphaSamples) + " alpha samples, got " +
                              std::to_string(samples.size()));
  }
  std::vector<AlphaSample> s(samples.begin(), samples.end());
  for (const auto& a : s) {
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.alpha)) {
      throw InputError("alpha samples must be finite");
    }
  }
  std::sort(s.begin(), s.end(), [](const AlphaSample& a, const AlphaSample& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.alpha < b.alpha;
  });
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].x == s[i - 1].x && s[i].y == s[i - 1].y) throw InputError("alpha sample points must be distinct");
  }
  return s;
}

// ----- one-variable families -------------------------------------------------

FamilySpec xi_family(FamilyTag tag, const Vec& p) {
  switch (tag) {
    case FamilyTag::t2: return Type2{p[0], p[1]};
    case FamilyTag::t3: return Type3{p[0], p[1], true};
    default: return Type4{p[0]};
  }
}

Evaluator xi_evaluator(FamilyTag tag, const std::vector<AlphaSample>& s) {
  return [tag, &s](const Vec& p, Vec& r, Mat* J) {
    const auto n = static_cast<Eigen::Index>(s.size());
    r.resize(n);
    if (J) J->resize(n, p.size());
    try {
      if (tag != FamilyTag::t4 && p[0] == 0.0) return false;
      const FamilySpec fam = xi_family(tag, p);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& a = s[static_cast<std::size_t>(i)];
        const double xi = a.x - a.y;
        const Jet1 al = alpha_of_xi(fam, Jet1::variable(xi, J ? 1 : 0));
        r[i] = al.value() - a.alpha;
        if (!J) continue;
        if (tag == FamilyTag::t4) {
          (*J)(i, 0) = al[1];
        } else {
          const double h = 1e-6 * std::max(1.0, std::abs(p[0]));
          Vec pp = p, pm = p;
          pp[0] += h;
          pm[0] -= h;
          const double ap = alpha_of_xi(xi_family(tag, pp), Jet1::variable(xi, 0)).value();
          const double am = alpha_of_xi(xi_family(tag, pm), Jet1::variable(xi, 0)).value();
          (*J)(i, 0) = (ap - am) / (2.0 * h);
          (*J)(i, 1) = al[1];
        }
      }
    } catch (const Error&) {
      return false;
    }
    return r.allFinite() && (!J || J->allFinite());
  };
}

std::size_t median_xi_index(const std::vector<AlphaSample>& s) {
  std::vector<double> xi;
  for (const auto& a : s) xi.push_back(a.x - a.y);
  std::vector<double> sorted = xi;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double med = sorted[sorted.size() / 2];
  std::size_t best = 0;
  for (std::size_t i = 1; i < xi.size(); ++i) {
    if (std::abs(xi[i] - med) < std::abs(xi[best] - med)) best = i;
  }
  return best;
}

struct Candidate {
  Vec params;
  double cost = kInf;
  int iterations = 0;
};

double cost_of(const Evaluator& eval, const Vec& p) {
  Vec r;
  if (!eval(p, r, nullptr)) return kInf;
  return r.squaredNorm();
}

Candidate best_of_starts(const Evaluator& eval, std::vector<Vec> starts, std::size_t keep, std::size_t n_samples,
                         const FitOptions& opts) {
  std::vector<std::pair<double, Vec>> scored;
  for (auto& p : starts) {
    const double c = cost_of(eval, p);
    if (std::isfinite(c)) scored.emplace_back(c, std::move(p));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Candidate best;
  for (std::size_t i = 0; i < std::min(keep, scored.size()); ++i) {
    const LmOutcome o = levenberg_marquardt(eval, scored[i].second, opts);
    if (o.cost < best.cost) best = Candidate{o.params, o.cost, o.iterations};
    // far below any useful threshold: further starts cannot do better
    if (best.cost < 1e-20 * static_cast<double>(n_samples)) break;
  }
  return best;
}

Candidate fit_t4(const std::vector<AlphaSample>& s, const FitOptions& opts) {
  std::vector<double> cs;
  for (const auto& a : s) {
    if (std::abs(a.alpha) > 1e-300) cs.push_back(2.0 / a.alpha - (a.x - a.y));
  }
  if (cs.empty()) return {};
  std::nth_element(cs.begin(), cs.begin() + static_cast<long>(cs.size() / 2), cs.end());
  Vec p(1);
  p[0] = cs[cs.size() / 2];
  return best_of_starts(xi_evaluator(FamilyTag::t4, s), {p}, 1, s.size(), opts);
}

// Some pair of samples on a common line x - y = const disagrees.
bool xi_dependence_violated(const std::vector<AlphaSample>& s, double tol) {
  std::map<double, std::pair<double, double>> by_xi;
  for (const auto& a : s) {
    const double xi = std::round((a.x - a.y) * 1e9) / 1e9;
    auto [it, inserted] = by_xi.try_emplace(xi, a.alpha, a.alpha);
    auto& [lo, hi] = it->second;
    lo = std::min(lo, a.alpha);
    hi = std::max(hi, a.alpha);
    if (hi - lo > tol * (1.0 + std::abs(a.alpha))) return true;
  }
  return false;
}

Candidate fit_t2_t3(FamilyTag tag, const std::vector<AlphaSample>& s, const FitOptions& opts) {
  if (xi_dependence_violated(s, 1e-6)) return {};
  const AlphaSample& ref = s[median_xi_index(s)];
  const double xi = ref.x - ref.y;
  std::vector<Vec> starts;
  for (int e2 = -12; e2 <= 12; ++e2) {
    for (double sign : {1.0, -1.0}) {
      const double k = sign * std::exp2(0.5 * e2);
      double z;
      if (tag == FamilyTag::t2) {
        const double q = ref.alpha / k;  // coth(k z / 2)
        if (!(std::abs(q) > 1.0)) continue;
        z = 2.0 * std::atanh(1.0 / q) / k;
      } else {
        z = 2.0 * std::atan(-ref.alpha / k) / k;  // tan(k z / 2) = -alpha / k
      }
      Vec p(2);
      p << k, z - xi;
      starts.push_back(p);
    }
  }
  return best_of_starts(xi_evaluator(tag, s), std::move(starts), 3, s.size(), opts);
}

// ----- t1 --------------------------------------------------------------------

struct T1Point {
  double alpha, dl1, dl2;
};

T1Point t1_point(const Type1& f, double x, double y) {
  const auto pt = wp_pair(Jet1::variable(2.0 * x + y + f.lambda1, 1), type1_t_params(f));
  const auto ps = wp_pair(Jet1::variable(x + 2.0 * y + f.lambda2, 1), type1_s_params(f));
  const double D = pt.wp.value() - ps.wp.value();
  if (std::abs(D) <= kType1DenominatorGuard) throw FamilySingularity("t1 denominator vanishes");
  const double N = pt.dwp.value() + ps.dwp.value();
  const double alpha = N / D;
  return {alpha, (pt.dwp[1] * D - N * pt.dwp.value()) / (D * D),
          (ps.dwp[1] * D + N * ps.dwp.value()) / (D * D)};
}

Type1 t1_family(const Vec& p) { return Type1{p[0], p[1], p[2], p[3], true}; }

double t1_alpha(const Vec& p, double x, double y) { return t1_point(t1_family(p), x, y).alpha; }

// d alpha / d p[j] by central differences, one-sided when a probe is singular.
double t1_fd(const Vec& p, int j, double x, double y, double centre) {
  const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
  Vec pp = p, pm = p;
  pp[j] += h;
  pm[j] -= h;
  double ap = 0.0, am = 0.0;
  bool okp = true, okm = true;
  try { ap = t1_alpha(pp, x, y); } catch (const NumericalError&) { okp = false; }
  try { am = t1_alpha(pm, x, y); } catch (const NumericalError&) { okm = false; }
  if (okp && okm) return (ap - am) / (2.0 * h);
  if (okp) return (ap - centre) / h;
  if (okm) return (centre - am) / h;
  throw FamilySingularity("no admissible finite-difference probe");
}

Evaluator t1_evaluator(const std::vector<AlphaSample>& s) {
  return [&s](const Vec& p, Vec& r, Mat* J) {
    const auto n = static_cast<Eigen::Index>(s.size());
    r.resize(n);
    if (J) J->resize(n, 4);
    try {
      const Type1 f = t1_family(p);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& a = s[static_cast<std::size_t>(i)];
        const T1Point v = t1_point(f, a.x, a.y);
        r[i] = v.alpha - a.alpha;
        if (!J) continue;
        (*J)(i, 0) = t1_fd(p, 0, a.x, a.y, v.alpha);
        (*J)(i, 1) = t1_fd(p, 1, a.x, a.y, v.alpha);
        (*J)(i, 2) = v.dl1;
        (*J)(i, 3) = v.dl2;
      }
    } catch (const NumericalError&) {
      return false;
    }
    return r.allFinite() && (!J || J->allFinite());
  };
}

// Newton solve for (g2, g3) matching alpha at two samples, lambdas fixed.
bool two_point_invariants(Vec& p, const AlphaSample& a, const AlphaSample& b) {
  try {
    for (int it = 0; it < 12; ++it) {
      const Eigen::Vector2d res(t1_alpha(p, a.x, a.y) - a.alpha, t1_alpha(p, b.x, b.y) - b.alpha);
      if (res.norm() < 1e-12 * (1.0 + std::abs(a.alpha) + std::abs(b.alpha))) return true;
      Eigen::Matrix2d jac;
      for (int j = 0; j < 2; ++j) {
        jac(0, j) = t1_fd(p, j, a.x, a.y, res[0] + a.alpha);
        jac(1, j) = t1_fd(p, j, b.x, b.y, res[1] + b.alpha);
      }
      const Eigen::Vector2d step = jac.fullPivLu().solve(-res);
      if (!step.allFinite()) return false;
      p[0] += step[0];
      p[1] += step[1];
      if (std::abs(p[0]) > 1e3 || std::abs(p[1]) > 1e3) return false;
    }
  } catch (const NumericalError&) {
    return false;
  }
  return true;
}

Candidate fit_t1(const std::vector<AlphaSample>& s, const FitOptions& opts) {
  // two well-separated anchor samples
  const AlphaSample& a = s.front();
  std::size_t far = 0;
  double far_d = -1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = std::hypot(s[i].x - a.x, s[i].y - a.y);
    if (d > far_d) {
      far_d = d;
      far = i;
    }
  }
  const AlphaSample& b = s[far];

  std::vector<Vec> starts;
  for (int i = -6; i <= 6; ++i) {
    for (int j = -6; j <= 6; ++j) {
      Vec p(4);
      p << 0.0, 0.0, 0.25 * i, 0.25 * j;
      Vec q = p;
      if (two_point_invariants(q, a, b)) starts.push_back(q);
      starts.push_back(p);
    }
  }
  return best_of_starts(t1_evaluator(s), std::move(starts), 16, s.size(), opts);
}

FitResult to_result(FamilyTag tag, const Candidate& c, std::size_t n, const FitOptions& opts) {
  FitResult r;
  const auto expected = static_cast<Eigen::Index>(tag == FamilyTag::t1 ? 4 : tag == FamilyTag::t4 ? 1 : 2);
  if (c.params.size() != expected) {
    r.family = tag == FamilyTag::t1 ? FamilySpec{Type1{}}
               : tag == FamilyTag::t2 ? FamilySpec{Type2{}}
               : tag == FamilyTag::t3 ? FamilySpec{Type3{}}
                                      : FamilySpec{Type4{}};
  } else {
    r.family = tag == FamilyTag::t1 ? FamilySpec{t1_family(c.params)} : xi_family(tag, c.params);
  }
  r.family = canonical_parameters(r.family);
  r.rms_residual = std::isfinite(c.cost) ? std::sqrt(c.cost / static_cast<double>(n)) : kInf;
  r.converged = r.rms_residual < opts.threshold;
  r.iterations = c.iterations;
  return r;
}

}  // namespace

FamilySpec canonical_parameters(FamilySpec fam) {
  if (auto* t2 = std::get_if<Type2>(&fam)) {
    t2->k = std::abs(t2->k);
  } else if (auto* t3 = std::get_if<Type3>(&fam)) {
    t3->k = std::abs(t3->k);
    const double period = 2.0 * std::numbers::pi / t3->k;
    t3->C -= std::round(t3->C / period) * period;
  }
  return fam;
}

bool collapses_to_difference(std::span<const AlphaSample> samples, double tol) {
  std::map<double, std::pair<double, double>> by_xi;  // xi -> (min, max) alpha
  bool any_pair = false;
  for (const auto& a : samples) {
    const double xi = std::round((a.x - a.y) * 1e9) / 1e9;
    auto [it, inserted] = by_xi.try_emplace(xi, a.alpha, a.alpha);
    if (!inserted) {
      any_pair = true;
      it->second.first = std::min(it->second.first, a.alpha);
      it->second.second = std::max(it->second.second, a.alpha);
      if (it->second.second - it->second.first > tol * (1.0 + std::abs(a.alpha))) return false;
    }
  }
  return any_pair;
}

double rms_residual(const FamilySpec& fam, std::span<const AlphaSample> samples) {
  double acc = 0.0;
  try {
    for (const auto& a : samples) {
      const double d = alpha_eval(fam, {a.x, a.y}, 0).value() - a.alpha;
      acc += d * d;
    }
  } catch (const NumericalError&) {
    return kInf;
  }
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

bool degenerate_lattice(const FamilySpec& fam) {
  const auto* t1 = std::get_if<Type1>(&fam);
  return t1 && std::abs(t1->g2) < 1e-6 && std::abs(t1->g3) < 1e-6;
}

FitResult fit_family(std::span<const AlphaSample> samples, FamilyTag target, const FitOptions& opts) {
  const std::vector<AlphaSample> s = canonical_order(samples);
  Candidate c;
  switch (target) {
    case FamilyTag::t4: c = fit_t4(s, opts); break;
    case FamilyTag::t2:
    case FamilyTag::t3: c = fit_t2_t3(target, s, opts); break;
    case FamilyTag::t1: c = fit_t1(s, opts); break;
  }
  return to_result(target, c, s.size(), opts);
}

FitResult fit_auto(std::span<const AlphaSample> samples, const FitOptions& opts) {
  std::optional<FitResult> best;
  for (FamilyTag tag : {FamilyTag::t4, FamilyTag::t2, FamilyTag::t3, FamilyTag::t1}) {
    FitResult r = fit_family(samples, tag, opts);
    if (r.converged) return r;
    if (!best || r.rms_residual < best->rms_residual) best = r;
  }
  return *best;
}

std::optional<FitResult> classify(std::span<const AlphaSample> samples, double threshold) {
  FitOptions opts;
  opts.threshold = threshold;
  FitResult r = fit_auto(samples, opts);
  if (!(r.rms_residual < threshold)) return std::nullopt;
  return r;
}

}  // namespace geoweb
