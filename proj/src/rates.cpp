#include "tmm/rates.hpp"

#include "tmm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tmm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(RateSource s) {
  switch (s) {
    case RateSource::lyapunov_tm: return "lyapunov_tm";
    case RateSource::lyapunov_nag: return "lyapunov_nag";
    case RateSource::iqc: return "iqc";
  }
  return "?";
}

double lyapunov_value(const TMParameters& params, const CostFunction& f, const OdeState& s) {
  if (!f.has_minimizer()) throw CapabilityError("lyapunov_value: cost has no minimizer");
  const double sq_mu = std::sqrt(params.mu);
  const double c_grad = 1.0 + std::sqrt(params.mu * params.alpha);
  const double c_y = std::sqrt(params.alpha) * params.gamma;
  const Vec y = s.eps + c_y * s.eps_dot;
  const Vec grad = f.gradient(y);
  const Vec acc = -2.0 * sq_mu * s.eps_dot - c_grad * grad;
  const Vec y_dot = s.eps_dot + c_y * acc;
  const Vec mix = y_dot + 2.0 * sq_mu * (y - *f.minimizer) + params.gamma * c_grad *
                                                                 std::sqrt(params.alpha) * grad;
  return c_grad * f.error_at(y) + 0.25 * y_dot.squaredNorm() + 0.25 * mix.squaredNorm();
}

LyapunovFn lyapunov_recorder(const TMParameters& params, const CostFunction& f) {
  return [params, f](const OdeModel&, const OdeState& s) { return lyapunov_value(params, f, s); };
}

double p_tm(double phi, const TMParameters& params) {
  if (!(phi > 0.0)) throw ArgumentError("p_tm: phi must be positive");
  const double sq_mu = std::sqrt(params.mu);
  const double t1 = 0.5 * sq_mu;
  const double t2 = 3.0 * params.L / (4.0 * params.kappa * (1.0 + phi) * sq_mu);
  const double t3 = params.gamma == 0.0
                        ? kInf
                        : 1.0 / (params.gamma * std::sqrt(params.alpha) * (1.0 + 1.0 / phi));
  const double t4 = 4.0 * sq_mu / (3.0 + 2.0 / phi);
  return std::min(std::min(t1, t2), std::min(t3, t4));
}

double p_nag(double phi, double M) {
  if (!(phi > 0.0)) throw ArgumentError("p_nag: phi must be positive");
  if (!(M > 0.0)) throw ArgumentError("p_nag: M must be positive");
  const double t1 = 0.5;
  const double t2 = 3.0 / (4.0 * (1.0 + phi));
  const double t3 = 1.0 / (1.0 + 1.0 / phi);
  const double t4 = 4.0 / (3.0 + 2.0 / phi);
  return std::sqrt(M) * std::min(std::min(t1, t2), std::min(t3, t4));
}

PhiMax maximize_over_phi(const std::function<double(double)>& p_of_phi) {
  const double llo = std::log(1e-6), lhi = std::log(1e6);
  const int n = 400;
  int best = 0;
  double best_val = -kInf;
  for (int i = 0; i < n; ++i) {
    const double v = p_of_phi(std::exp(llo + (lhi - llo) * i / (n - 1)));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double span = (lhi - llo) / (n - 1);
  double a = llo + span * std::max(0, best - 1);
  double b = llo + span * std::min(n - 1, best + 1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  while (b - a > 1e-13) {
    if (p_of_phi(std::exp(c)) > p_of_phi(std::exp(d)))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  const double phi = std::exp(0.5 * (a + b));
  return {phi, p_of_phi(phi)};
}

RateCertificate p_star_tm(const TMParameters& params) {
  const double mk = params.mu * params.kappa, L = params.L;
  const double phi_closed =
      (9.0 * L - 16.0 * mk + std::sqrt(256.0 * mk * mk + 96.0 * mk * L + 81.0 * L * L)) /
      (32.0 * mk);
  const double rate_closed = p_tm(phi_closed, params);
  const PhiMax numeric = maximize_over_phi([&](double phi) { return p_tm(phi, params); });
  if (std::abs(rate_closed - numeric.value) >
      1e-4 * std::max(numeric.value, std::numeric_limits<double>::min()))
    throw CertificateInconsistency(
        "p_star_tm: closed-form rate " + format_double(rate_closed) +
        " and numeric maximum " + format_double(numeric.value) + " disagree beyond 1e-4");
  RateCertificate cert;
  cert.rate = rate_closed;
  cert.phi_star = phi_closed;
  cert.source = RateSource::lyapunov_tm;
  cert.mu = params.mu;
  cert.alpha = params.alpha;
  cert.gamma = params.gamma;
  cert.kappa = params.kappa;
  cert.L = params.L;
  cert.M = params.M;
  cert.tolerance = 1e-6;
  return cert;
}

RateCertificate p_star_nag(double M) {
  if (!(M > 0.0)) throw ArgumentError("p_star_nag: M must be positive");
  const double rate = 3.0 / 7.0 * std::sqrt(M);
  const PhiMax numeric = maximize_over_phi([&](double phi) { return p_nag(phi, M); });
  if (std::abs(rate - numeric.value) > 1e-6 * rate)
    throw CertificateInconsistency("p_star_nag: numeric maximum " + format_double(numeric.value) +
                                   " does not confirm (3/7) sqrt(M)");
  RateCertificate cert;
  cert.rate = rate;
  cert.phi_star = 0.75;
  cert.source = RateSource::lyapunov_nag;
  cert.mu = M;
  cert.M = M;
  cert.alpha = std::numeric_limits<double>::quiet_NaN();
  cert.gamma = std::numeric_limits<double>::quiet_NaN();
  cert.kappa = std::numeric_limits<double>::quiet_NaN();
  cert.L = std::numeric_limits<double>::quiet_NaN();
  cert.tolerance = 1e-6;
  return cert;
}

double value_bound_prefactor(double rho) {
  const double r = rho;
  return (1.5 * r * r * r * r + 3.0 * r * r * r - 3.5 * r * r - 4.0 * r + 6.0) /
         (-r * r * r + 3.0 * r * r - 4.0 * r + 4.0);
}

const DecayCheck* DecayReport::find(const std::string& name) const {
  for (const DecayCheck& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

DecayReport verify_decay(const Trajectory& traj, const RateCertificate& cert,
                         const CostFunction& f, const std::optional<Vec>& y0) {
  const auto& samples = traj.samples;
  if (samples.empty()) throw ArgumentError("verify_decay: empty trajectory");
  for (const Sample& s : samples)
    if (std::isnan(s.lyapunov))
      throw ArgumentError("verify_decay: trajectory lacks Lyapunov samples");

  const double rate = cert.rate;
  const double V0 = samples.front().lyapunov;
  const Vec& out0 = samples.front().output;
  // Absolute floor keeps the checks meaningful when V0 is zero (equilibrium start).
  const double floor = 1e-18 * (1.0 + out0.squaredNorm() + std::abs(f.value(out0)));

  DecayReport report;
  const auto add = [&](std::string name, double margin, double tol, std::size_t worst) {
    DecayCheck c{std::move(name), margin, tol, margin <= tol, worst};
    report.passed = report.passed && c.passed;
    report.checks.push_back(std::move(c));
  };

  {  // V(t) <= V(0) e^{-rate t}
    double margin = -kInf;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double m = samples[i].lyapunov - V0 * std::exp(-rate * samples[i].t);
      if (m > margin) {
        margin = m;
        worst = i;
      }
    }
    add("exponential_envelope", margin, 1e-8 * V0 + floor, worst);
  }

  {  // central-difference dV/dt <= -rate V, tolerance scaled by the sample spacing squared
    double margin = -kInf, h_max = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
      const double h = samples[i + 1].t - samples[i - 1].t;
      h_max = std::max(h_max, 0.5 * h);
      const double v_dot = (samples[i + 1].lyapunov - samples[i - 1].lyapunov) / h;
      const double m = v_dot + rate * samples[i].lyapunov;
      if (m > margin) {
        margin = m;
        worst = i;
      }
    }
    if (samples.size() < 3) margin = 0.0;
    const double tol =
        V0 * (1e-10 + 10.0 * rate * rate * rate * h_max * h_max) + floor * (1.0 + std::sqrt(f.L));
    add("derivative_margin", margin, tol, worst);
  }

  {  // V(t) e^{rate t} nonincreasing between consecutive samples
    double margin = -kInf;
    std::size_t worst = 0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const double m = samples[i + 1].lyapunov * std::exp(rate * samples[i + 1].t) -
                       samples[i].lyapunov * std::exp(rate * samples[i].t);
      if (m > margin) {
        margin = m;
        worst = i;
      }
    }
    if (samples.size() < 2) margin = 0.0;
    add("scaled_monotonicity", margin, 1e-8 * V0 + floor, worst);
  }

  if (y0) {  // f(Y) - f(x*) under the rho-dependent value envelope
    if (!f.has_minimizer()) throw CapabilityError("verify_decay: cost has no minimizer");
    const double rho = 1.0 - 1.0 / std::sqrt(cert.kappa);
    const double K =
        value_bound_prefactor(rho) / cert.alpha * (*y0 - *f.minimizer).squaredNorm();
    double margin = -kInf;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double m = samples[i].f_error - K * std::exp(-rate * samples[i].t);
      if (m > margin) {
        margin = m;
        worst = i;
      }
    }
    add("value_bound", margin, 1e-10, worst);
  }

  return report;
}

std::vector<RateSweepRow> rate_sweep(const std::vector<double>& kappa_grid, double L) {
  if (kappa_grid.empty()) throw ArgumentError("rate_sweep: empty kappa grid");
  if (!(L > 0.0)) throw ArgumentError("rate_sweep: L must be positive");
  std::vector<RateSweepRow> rows;
  rows.reserve(kappa_grid.size());
  const double sq_L = std::sqrt(L);
  for (double k : kappa_grid) {
    if (!(k >= 1.0)) throw ArgumentError("rate_sweep: kappa entries must be >= 1");
    const RateCertificate tm = p_star_tm(tm_parameters(L / k, L));
    const RateCertificate nag = p_star_nag(L / k);
    rows.push_back({k, tm.rate / sq_L, nag.rate / sq_L, tm.phi_star});
  }
  return rows;
}

}  // namespace tmm
