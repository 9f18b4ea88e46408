#include "pmc/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pmc/quadrature.hpp"

namespace pmc {

bool ValidationReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck* ValidationReport::find(
    const std::string& hypothesis) const {
  for (const auto& c : checks)
    if (c.hypothesis == hypothesis) return &c;
  return nullptr;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate(const Nonlinearity& spec, int sample_count,
                          double range) {
  if (sample_count < 16)
    throw std::invalid_argument("validate: sample_count must be >= 16");
  if (!(range > 0.0))
    throw std::invalid_argument("validate: range must be positive");

  ValidationReport rep;

  std::vector<double> ts(sample_count + 1);
  for (int i = 0; i <= sample_count; ++i)
    ts[i] = range * static_cast<double>(i) / sample_count;

  std::vector<double> gp(ts.size()), gm(ts.size());
  double g_scale = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    gp[i] = spec.g(ts[i]);
    gm[i] = spec.g(-ts[i]);
    if (!std::isfinite(gp[i])) rep.evaluation_failures.push_back(ts[i]);
    if (!std::isfinite(gm[i])) rep.evaluation_failures.push_back(-ts[i]);
    if (std::isfinite(gp[i])) g_scale = std::max(g_scale, std::abs(gp[i]));
  }

  // (g1) continuity is not decidable from samples; what is checkable is
  // that every evaluation is finite.
  {
    HypothesisCheck c{"g1", rep.evaluation_failures.empty(), ""};
    c.detail = c.passed ? "all " + std::to_string(2 * ts.size()) +
                              " evaluations finite"
                        : std::to_string(rep.evaluation_failures.size()) +
                              " non-finite evaluations";
    rep.checks.push_back(c);
  }

  const double odd_tol = 1e-12 * std::max(1.0, g_scale);

  // (g2) oddness: g(0) = 0 and g(-t) = -g(t).
  {
    double worst = std::abs(gp[0]);
    for (size_t i = 0; i < ts.size(); ++i)
      if (std::isfinite(gp[i]) && std::isfinite(gm[i]))
        worst = std::max(worst, std::abs(gp[i] + gm[i]));
    HypothesisCheck c{"g2", worst <= odd_tol,
                      "max |g(t)+g(-t)| = " + fmt(worst)};
    rep.checks.push_back(c);
  }

  // (g3) positive slope at the origin, consistent with the declared value.
  {
    const double h = std::min(1e-5, 1e-4 * range);
    const double fd = (spec.g(h) - spec.g(-h)) / (2.0 * h);
    const bool consistent =
        std::isfinite(fd) &&
        std::abs(fd - spec.g_prime_at_zero) <=
            1e-5 * std::max(1.0, std::abs(spec.g_prime_at_zero));
    HypothesisCheck c{"g3", spec.g_prime_at_zero > 0.0 && consistent,
                      "declared g'(0) = " + fmt(spec.g_prime_at_zero) +
                          ", central difference = " + fmt(fd)};
    rep.checks.push_back(c);
  }

  // (g4) sign structure: g > 0 on (0, alpha); g < 0 on (alpha, range]
  // when alpha is finite and the range reaches past it.
  {
    bool ok = true;
    std::string detail;
    const double lo_margin = spec.alpha_is_finite() ? 1e-9 * spec.alpha : 0.0;
    for (size_t i = 1; i < ts.size(); ++i) {
      const double t = ts[i];
      if (!std::isfinite(gp[i])) continue;
      if (t < spec.alpha - lo_margin) {
        if (!(gp[i] > 0.0)) {
          ok = false;
          detail = "g(" + fmt(t) + ") = " + fmt(gp[i]) + " not positive";
          break;
        }
      } else if (spec.alpha_is_finite() && t > spec.alpha + lo_margin) {
        if (!(gp[i] < 0.0)) {
          ok = false;
          detail = "g(" + fmt(t) + ") = " + fmt(gp[i]) + " not negative";
          break;
        }
      }
    }
    if (ok)
      detail = spec.alpha_is_finite()
                   ? "sign change at alpha = " + fmt(spec.alpha) + " confirmed"
                   : "positive on sampled (0, " + fmt(range) + "]";
    rep.checks.push_back({"g4", ok, detail});
  }

  return rep;
}

double primitive(const Nonlinearity& spec, double t) {
  if (!std::isfinite(t))
    throw std::invalid_argument("primitive: t must be finite");
  if (spec.closed_form_G) return spec.closed_form_G(t);
  if (t == 0.0) return 0.0;
  return integrate_adaptive(spec.g, 0.0, t, 1e-12).value;
}

std::optional<double> threshold_height(const Nonlinearity& spec) {
  auto G = [&spec](double t) { return primitive(spec, t); };

  // G is strictly increasing on (0, alpha), so the smallest root of
  // G = 1, when it exists, is the unique one there.
  double hi;
  if (spec.alpha_is_finite()) {
    if (G(spec.alpha) < 1.0) return std::nullopt;
    hi = spec.alpha;
  } else {
    hi = 1.0;
    while (G(hi) < 1.0) {
      hi *= 2.0;
      if (hi > 1e12) return std::nullopt;
    }
  }

  double lo = 0.0;
  double mid = 0.5 * hi;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double d = G(mid) - 1.0;
    if (std::abs(d) <= 1e-12) return mid;
    (d < 0.0 ? lo : hi) = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return mid;
}

Nonlinearity make_sine() {
  Nonlinearity n;
  n.g = [](double t) { return std::sin(t); };
  n.closed_form_G = [](double t) { return 1.0 - std::cos(t); };
  n.alpha = std::numbers::pi;
  n.g_prime_at_zero = 1.0;
  n.label = "sin";
  return n;
}

Nonlinearity make_cubic() {
  Nonlinearity n;
  n.g = [](double t) { return t * (1.0 - t * t); };
  n.closed_form_G = [](double t) {
    const double t2 = t * t;
    return 0.5 * t2 - 0.25 * t2 * t2;
  };
  n.alpha = 1.0;
  n.g_prime_at_zero = 1.0;
  n.label = "cubic";
  return n;
}

Nonlinearity make_linear(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("make_linear: lambda must be positive");
  Nonlinearity n;
  n.g = [lambda](double t) { return lambda * t; };
  n.closed_form_G = [lambda](double t) { return 0.5 * lambda * t * t; };
  n.g_prime_at_zero = lambda;
  if (lambda == 1.0) {
    n.label = "linear";
  } else {
    std::ostringstream os;
    os.precision(17);
    os << "linear:" << lambda;
    n.label = os.str();
  }
  return n;
}

Nonlinearity make_saturating() {
  Nonlinearity n;
  n.g = [](double t) { return t / (1.0 + t * t); };
  n.closed_form_G = [](double t) { return 0.5 * std::log1p(t * t); };
  n.g_prime_at_zero = 1.0;
  n.label = "saturating";
  return n;
}

Nonlinearity make_nonlinearity(const std::string& kind, double lambda) {
  if (kind == "sin") return make_sine();
  if (kind == "cubic") return make_cubic();
  if (kind == "linear") return make_linear(lambda);
  if (kind == "saturating") return make_saturating();
  throw std::invalid_argument(
      "make_nonlinearity: unknown kind '" + kind +
      "' (expected sin, cubic, linear, saturating)");
}

}  // namespace pmc
