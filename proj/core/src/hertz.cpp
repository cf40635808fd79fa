#include "pericontact/hertz.hpp"

#include <algorithm>
#include <cmath>

#include "pericontact/errors.hpp"

namespace pericontact {

double HertzCase::contact_radius() const {
  switch (kind) {
    case HertzKind::sphere:
      return std::cbrt(3.0 * load * radius / (4.0 * eff_modulus));
    case HertzKind::roller:
      return std::sqrt(4.0 * load * radius / (M_PI * eff_modulus));
    case HertzKind::punch:
      return half_width;
  }
  return 0.0;
}

double HertzCase::peak_pressure() const {
  double a = contact_radius();
  switch (kind) {
    case HertzKind::sphere:
      return 3.0 * load / (2.0 * M_PI * a * a);
    case HertzKind::roller:
      return 2.0 * load / (M_PI * a);
    case HertzKind::punch:
      throw ReportError("flat punch pressure is unbounded at the edges");
  }
  return 0.0;
}

double HertzCase::mean_pressure() const {
  double a = contact_radius();
  switch (kind) {
    case HertzKind::sphere:
      return load / (M_PI * a * a);
    case HertzKind::roller:
      return load / (2.0 * a);
    case HertzKind::punch:
      return load / (2.0 * a);
  }
  return 0.0;
}

double HertzCase::pressure(double x) const {
  double a = contact_radius();
  if (kind == HertzKind::punch) {
    if (!(std::abs(x) < a))
      throw ReportError("punch pressure undefined at |x| >= a");
    return load / (M_PI * std::sqrt(a * a - x * x));
  }
  if (!(std::abs(x) <= a))
    throw ReportError("pressure sample outside the contact zone");
  double q = 1.0 - (x / a) * (x / a);
  return peak_pressure() * std::sqrt(std::max(q, 0.0));
}

double effective_modulus(const Material* m1, const Material* m2) {
  auto compliance = [](const Material* m) {
    return m ? (1.0 - m->nu * m->nu) / m->E : 0.0;
  };
  double sum = compliance(m1) + compliance(m2);
  if (sum <= 0.0)
    throw ReportError("effective modulus needs at least one elastic body");
  return 1.0 / sum;
}

double mean_relative_error(std::span<const PressureSample> samples,
                           const HertzCase& reference) {
  if (samples.empty()) throw ReportError("no pressure samples");
  double sum = 0.0;
  for (const auto& s : samples) {
    double p = reference.pressure(s.x);
    if (!(p > 0.0)) throw ReportError("analytic pressure vanishes at a sample");
    sum += std::abs(s.p - p) / p;
  }
  return 100.0 * sum / double(samples.size());
}

ProfileFit fit_contact_radius(std::span<const PressureSample> samples) {
  if (samples.size() < 5)
    throw ReportError("contact-radius fit needs at least 5 samples");

  double p0 = 0.0, a = 0.0;
  for (const auto& s : samples) {
    p0 = std::max(p0, s.p);
    if (s.p > 0.0) a = std::max(a, std::abs(s.x));
  }
  if (!(p0 > 0.0) || !(a > 0.0))
    throw ReportError("contact-radius fit needs nonzero pressures");

  auto residual_norm = [&](double pp, double aa) {
    double r2 = 0.0;
    for (const auto& s : samples) {
      double q = 1.0 - (s.x / aa) * (s.x / aa);
      double model = q > 0.0 ? pp * std::sqrt(q) : 0.0;
      double r = s.p - model;
      r2 += r * r;
    }
    return r2;
  };

  double best = residual_norm(p0, a);
  const int max_iter = 100;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // Normal equations for the two parameters.
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (const auto& s : samples) {
      double q = 1.0 - (s.x / a) * (s.x / a);
      if (q <= 0.0) continue;  // clamped region: zero model and gradient
      double root = std::sqrt(q);
      double model = p0 * root;
      double r = s.p - model;
      double dp = root;                                   // d model / d p0
      double da = p0 * s.x * s.x / (a * a * a * root);    // d model / d a
      jtj00 += dp * dp;
      jtj01 += dp * da;
      jtj11 += da * da;
      jtr0 += dp * r;
      jtr1 += da * r;
    }
    double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (det == 0.0 || !std::isfinite(det))
      throw ReportError("contact-radius fit: singular normal equations");
    double step_p = (jtj11 * jtr0 - jtj01 * jtr1) / det;
    double step_a = (jtj00 * jtr1 - jtj01 * jtr0) / det;

    // Backtracking keeps the iteration inside the valid region.
    double scale = 1.0;
    double next = best;
    double pp = p0, aa = a;
    for (int ls = 0; ls < 30; ++ls) {
      pp = p0 + scale * step_p;
      aa = a + scale * step_a;
      if (pp > 0.0 && aa > 0.0) {
        next = residual_norm(pp, aa);
        if (next <= best) break;
      }
      scale *= 0.5;
    }
    if (!(pp > 0.0 && aa > 0.0) || next > best) {
      throw ReportError("contact-radius fit failed to improve");
    }

    double rel = std::max(std::abs(pp - p0) / std::max(pp, 1e-300),
                          std::abs(aa - a) / std::max(aa, 1e-300));
    p0 = pp;
    a = aa;
    best = next;
    if (rel < 1e-12) return {p0, a, iter};
  }
  throw ReportError("contact-radius fit did not converge in 100 iterations");
}

}  // namespace pericontact
