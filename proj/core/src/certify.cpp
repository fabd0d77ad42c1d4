#include "kcontract/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace kcontract {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_point(const Vector& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (i) out += ", ";
    out += fmt_g(x[i]);
  }
  return out + ")";
}

void append_note(CertificateReport& r, const std::string& line) {
  if (!r.notes.empty()) r.notes += "; ";
  r.notes += line;
}

void set_const(CertificateReport& r, const std::string& key, double v) {
  if (std::isfinite(v)) {
    r.constants[key] = v;
  } else {
    append_note(r, key + " is non-finite");
  }
}

std::pair<double, double> effective_window(const CertifyOptions& opts, double t0, double t1) {
  if (opts.window) return *opts.window;
  return {t0 + 0.5 * (t1 - t0), t1};
}

std::string describe_samples(const SampleSpec& spec) {
  std::string out = std::to_string(spec.count) + " samples, seed " + std::to_string(spec.seed);
  if (std::holds_alternative<UniformDomain>(spec.scheme)) {
    out += ", uniform-domain scheme (extremal faces included)";
  } else {
    const auto& a = std::get<AlongTrajectories>(spec.scheme);
    out += ", along " + std::to_string(a.n_traj) + " trajectories to t=" + fmt_g(a.t_end);
  }
  return out;
}

// min/max of |A y| over seeded unit vectors y (|y| = 1 in `norm`).
void ratio_extremes(const Matrix& a, NormKind norm, Rng& rng, int count, double& lo, double& hi) {
  for (int i = 0; i < count; ++i) {
    const Vector y = rng.unit_vector(a.cols(), norm);
    const double val = vector_norm(a * y, norm);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
}

Matrix horizontal_gram(const Matrix& h) {
  return h.transposed() * h;
}

// dx_h from dx = H dx_h + Q dx_q via the normal equations of H.
Vector horizontal_part(const Matrix& h, const Vector& dx) {
  const Matrix gram = horizontal_gram(h);
  const Vector rhs = h.transposed() * dx;
  try {
    return solve_small(gram, rhs);
  } catch (const SingularMatrix&) {
    throw DegenerateFrame("H^T H numerically singular while extracting dx_h");
  }
}

}  // namespace

DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   std::pair<double, double> window) {
  if (times.size() != values.size()) throw InvalidInput("fit_decay: times/values size mismatch");
  DecayFit fit;
  fit.window_start = window.first;
  fit.window_end = window.second;

  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.first - 1e-12 || t > window.second + 1e-12) continue;
    if (!(values[i] > tols::fit_floor)) {
      ++fit.floor_hits;
      continue;
    }
    ts.push_back(t);
    ys.push_back(std::log(values[i]));
  }
  if (ts.size() < 3) {
    throw InsufficientData("fit_decay: fewer than 3 usable samples in window [" +
                           fmt_g(window.first) + ", " + fmt_g(window.second) + "]");
  }
  fit.samples_used = ts.size();

  const auto n = static_cast<double>(ts.size());
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    sty += (ts[i] - tm) * (ys[i] - ym);
  }
  if (stt <= 0.0) throw InsufficientData("fit_decay: degenerate time grid");
  fit.rate = sty / stt;
  fit.intercept = ym - fit.rate * tm;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double pred = fit.intercept + fit.rate * ts[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ym) * (ys[i] - ym);
  }
  // Constant data is a perfect fit; ss_tot there is pure summation noise.
  const double noise_floor = 1e-20 * n * (1.0 + std::abs(ym)) * (1.0 + std::abs(ym));
  if (ss_tot <= noise_floor) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  }
  return fit;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Falsified: return "Falsified";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string report_to_json(const CertificateReport& report) {
  nlohmann::json j;
  j["check"] = report.check_name;
  j["verdict"] = to_string(report.verdict);
  j["norm"] = to_string(report.norm);
  j["samples_used"] = report.samples_used;
  j["constants"] = report.constants;
  j["residuals"] = report.residuals;
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

CertificateReport check_k_contraction_pointwise(const SystemModel& model, int k, NormKind norm,
                                                const SampleSpec& samples,
                                                const CertifyOptions& opts) {
  if (k < 1 || k > model.n) throw InvalidInput("check_k_contraction_pointwise: bad k");
  CertificateReport r;
  r.check_name = "k-contraction-pointwise";
  r.norm = norm;
  append_note(r, describe_samples(samples));
  if (model.jacobian_is_numerical()) append_note(r, "jacobian: finite differences");

  const TimedSamples ev = sample_evidence(model, samples, opts.t_sample_range, opts.dt);
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    const double mu = matrix_measure(add_compound(model.jac(ev.times[i], ev.states[i]), k), norm);
    if (mu > sup) {
      sup = mu;
      arg = i;
    }
  }
  r.samples_used = ev.states.size();
  set_const(r, "mu_sup", sup);
  set_const(r, "margin", opts.margin);

  if (sup <= -opts.margin) {
    r.verdict = Verdict::Certified;
  } else if (sup >= opts.margin) {
    r.verdict = Verdict::Falsified;
    append_note(r, "witness: mu=" + fmt_g(sup) + " at t=" + fmt_g(ev.times[arg]) + ", x=" +
                       fmt_point(ev.states[arg]));
  } else {
    r.verdict = Verdict::Inconclusive;
    append_note(r, "supremum within margin of zero");
  }
  return r;
}

CertificateReport check_k_contraction_empirical(const SystemModel& model, int k, NormKind norm,
                                                std::span<const Vector> initial_conditions,
                                                std::span<const std::vector<Vector>> delta_sets,
                                                double t_end, double dt,
                                                const CertifyOptions& opts) {
  if (initial_conditions.empty()) throw InvalidInput("empirical check: no initial conditions");
  if (delta_sets.size() != initial_conditions.size() && delta_sets.size() != 1) {
    throw InvalidInput("empirical check: need one delta set per initial condition (or one shared)");
  }

  CertificateReport r;
  r.check_name = "k-contraction-empirical";
  r.norm = norm;
  if (model.jacobian_is_numerical()) append_note(r, "jacobian: finite differences");
  const auto window = effective_window(opts, 0.0, t_end);

  double rate_worst = -std::numeric_limits<double>::infinity();
  double rate_best = std::numeric_limits<double>::infinity();
  double r2_min = 1.0;
  double log_c = -std::numeric_limits<double>::infinity();

  for (std::size_t run = 0; run < initial_conditions.size(); ++run) {
    const auto& deltas = delta_sets[delta_sets.size() == 1 ? 0 : run];
    if (static_cast<int>(deltas.size()) != k) {
      throw InvalidInput("empirical check: each delta set must contain k vectors");
    }
    const WedgeVector w0 = wedge(deltas);
    if (!(vector_norm(w0.coeffs, NormKind::L2) > 0.0)) {
      throw InvalidInput("empirical check: delta set has zero initial wedge");
    }

    const Trajectory traj =
        integrate_compound(model, initial_conditions[run], k, w0.coeffs, t_end, dt);
    std::vector<double> vals(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      vals[i] = vector_norm(traj.compound_state[i], norm);
    }
    const DecayFit fit = fit_decay(traj.times, vals, window);
    rate_worst = std::max(rate_worst, fit.rate);
    rate_best = std::min(rate_best, fit.rate);
    r2_min = std::min(r2_min, fit.r_squared);

    const double v0 = vals[0];
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] > 0.0 && v0 > 0.0) {
        log_c = std::max(log_c, std::log(vals[i]) - fit.rate * traj.times[i] - std::log(v0));
      }
    }
    if (traj.first_domain_exit) {
      append_note(r, "run " + std::to_string(run) + " left the domain at t=" +
                         fmt_g(*traj.first_domain_exit));
    }
  }

  r.samples_used = initial_conditions.size();
  set_const(r, "rate_worst", rate_worst);
  set_const(r, "rate_best", rate_best);
  set_const(r, "r2_min", r2_min);
  set_const(r, "c", std::exp(std::min(log_c, 700.0)));
  set_const(r, "margin", opts.margin);

  if (rate_worst <= -opts.margin && r2_min >= opts.r2_min) {
    r.verdict = Verdict::Certified;
  } else if (rate_worst >= opts.margin && r2_min >= opts.r2_min) {
    r.verdict = Verdict::Falsified;
    append_note(r, "witness: fitted rate " + fmt_g(rate_worst) + " indicates growth");
  } else {
    r.verdict = Verdict::Inconclusive;
    append_note(r, "decay not resolved (rate_worst=" + fmt_g(rate_worst) +
                       ", r2_min=" + fmt_g(r2_min) + ")");
  }
  return r;
}

CertificateReport check_partial_contraction(const SystemModel& model, NormKind norm,
                                            const SampleSpec& samples,
                                            const CertifyOptions& opts) {
  if (!model.factorization) {
    throw MissingStructure("check_partial_contraction: model has no factorization");
  }
  const Factorization& fac = *model.factorization;

  CertificateReport r;
  r.check_name = "partial-contraction";
  r.norm = norm;
  append_note(r, describe_samples(samples));

  const TimedSamples ev = sample_evidence(model, samples, opts.t_sample_range, opts.dt);
  r.samples_used = ev.states.size();

  // The factorization must reproduce the vector field before anything it
  // implies can be trusted.
  double worst = 0.0;
  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    const Vector lhs = fac.g(ev.times[i], fac.p(ev.states[i]), ev.states[i]);
    const Vector rhs = model.f(ev.times[i], ev.states[i]);
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  if (worst > tols::factorization_residual) {
    throw FactorizationMismatch(
        "factorization identity g(t, p(x), x) = f(t, x) fails; worst residual " + fmt_g(worst),
        worst);
  }
  r.residuals["factorization"] = worst;

  // xi ranges over observed p(x) values plus a 50% inflation box.
  const auto ell = static_cast<std::size_t>(fac.ell);
  Vector xi_lo(ell), xi_hi(ell);
  for (std::size_t c = 0; c < ell; ++c) {
    xi_lo[c] = std::numeric_limits<double>::infinity();
    xi_hi[c] = -std::numeric_limits<double>::infinity();
  }
  std::vector<Vector> xi_base(ev.states.size());
  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    xi_base[i] = fac.p(ev.states[i]);
    for (std::size_t c = 0; c < ell; ++c) {
      xi_lo[c] = std::min(xi_lo[c], xi_base[i][c]);
      xi_hi[c] = std::max(xi_hi[c], xi_base[i][c]);
    }
  }
  for (std::size_t c = 0; c < ell; ++c) {
    const double span = xi_hi[c] - xi_lo[c];
    const double pad = span > 0.0 ? 0.5 * span : 0.5 * std::max(1.0, std::abs(xi_lo[c]));
    xi_lo[c] -= pad;
    xi_hi[c] += pad;
  }

  Rng xi_rng(samples.seed ^ 0x9e3779b97f4a7c15ULL);
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    double mu = matrix_measure(fac.j_xi(ev.times[i], xi_base[i], ev.states[i]), norm);
    for (int extra = 0; extra < 4; ++extra) {
      Vector xi(ell);
      for (std::size_t c = 0; c < ell; ++c) xi[c] = xi_rng.uniform(xi_lo[c], xi_hi[c]);
      mu = std::max(mu, matrix_measure(fac.j_xi(ev.times[i], xi, ev.states[i]), norm));
    }
    if (mu > sup) {
      sup = mu;
      arg = i;
    }
  }
  set_const(r, "mu_xi_sup", sup);
  set_const(r, "margin", opts.margin);

  if (sup <= -opts.margin) {
    r.verdict = Verdict::Certified;
  } else if (sup >= opts.margin) {
    r.verdict = Verdict::Falsified;
    append_note(r, "witness: mu(J_xi)=" + fmt_g(sup) + " at x=" + fmt_point(ev.states[arg]));
  } else {
    r.verdict = Verdict::Inconclusive;
    append_note(r, "supremum within margin of zero");
  }

  // With a second solution branch m(x), trajectories should approach the
  // manifold { p(x) = m(x) }; fit that decay as corroborating evidence.
  if (fac.m) {
    Rng traj_rng(samples.seed + 1);
    const auto ics = sample_domain(model.domain, static_cast<std::size_t>(opts.n_traj), traj_rng);
    double manifold_rate = -std::numeric_limits<double>::infinity();
    double manifold_r2 = 1.0;
    for (const auto& a : ics) {
      // The x-dynamics may be unbounded while p(x) - m(x) still contracts;
      // an escaping run contributes its partial data.
      Trajectory traj;
      try {
        traj = integrate(model, a, opts.t_end, opts.dt);
      } catch (const DomainEscape& e) {
        traj = e.partial();
        append_note(r, "manifold-evidence trajectory escaped at t=" + fmt_g(e.time()));
      }
      if (traj.times.size() < 3) continue;
      std::vector<double> vals(traj.times.size());
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        vals[i] = vector_norm(fac.p(traj.states[i]) - (*fac.m)(traj.states[i]), norm);
      }
      const auto window = effective_window(opts, 0.0, traj.times.back());
      try {
        const DecayFit fit = fit_decay(traj.times, vals,
                                       {std::min(window.first, traj.times.back()),
                                        std::min(window.second, traj.times.back())});
        manifold_rate = std::max(manifold_rate, fit.rate);
        manifold_r2 = std::min(manifold_r2, fit.r_squared);
      } catch (const InsufficientData&) {
        append_note(r, "manifold distance underflowed for one trajectory (treated as converged)");
      }
    }
    if (std::isfinite(manifold_rate)) {
      set_const(r, "manifold_rate_worst", manifold_rate);
      set_const(r, "manifold_r2_min", manifold_r2);
      append_note(r, "convergence to {p(x)=m(x)} fitted along " + std::to_string(opts.n_traj) +
                         " trajectories");
    }
  }
  return r;
}

CertificateReport check_horizontal_decay(const SystemModel& model, NormKind norm, const Vector& a,
                                         const Vector& delta, double t_end, double dt,
                                         const CertifyOptions& opts) {
  if (!model.frame) throw MissingStructure("check_horizontal_decay: model has no frame");
  const HorizontalFrame& frame = *model.frame;

  CertificateReport r;
  r.check_name = "horizontal-decay";
  r.norm = norm;
  if (model.jacobian_is_numerical()) append_note(r, "jacobian: finite differences");

  const std::vector<Vector> deltas{delta};
  const Trajectory traj = integrate_variational(model, a, deltas, t_end, dt);

  std::vector<double> vals(traj.times.size());
  double sup_abs = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const Matrix h = frame.H(traj.states[i]);
    const Vector dxh = horizontal_part(h, traj.var_states[0][i]);
    vals[i] = vector_norm(dxh, norm);
    sup_abs = std::max(sup_abs, vals[i]);
  }
  r.samples_used = traj.times.size();
  set_const(r, "sup_abs", sup_abs);
  set_const(r, "margin", opts.margin);

  if (vals[0] <= 1e-14 * std::max(1.0, vector_norm(delta, norm))) {
    r.verdict = Verdict::Inconclusive;
    append_note(r, "delta has no horizontal component; direction is vacuous");
    return r;
  }

  const DecayFit fit = fit_decay(traj.times, vals, effective_window(opts, 0.0, t_end));
  set_const(r, "rate", fit.rate);
  set_const(r, "r2", fit.r_squared);
  set_const(r, "floor_hits", static_cast<double>(fit.floor_hits));
  double log_c = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] > 0.0) {
      log_c = std::max(log_c, std::log(vals[i]) - fit.rate * traj.times[i] - std::log(vals[0]));
    }
  }
  set_const(r, "c", std::exp(std::min(log_c, 700.0)));

  if (fit.rate <= -opts.margin && fit.r_squared >= opts.r2_min) {
    r.verdict = Verdict::Certified;
  } else if (fit.rate >= opts.margin && fit.r_squared >= opts.r2_min) {
    r.verdict = Verdict::Falsified;
    append_note(r, "witness: |dx_h| grows at fitted rate " + fmt_g(fit.rate));
  } else {
    r.verdict = Verdict::Inconclusive;
    append_note(r, "decay not resolved (rate=" + fmt_g(fit.rate) + ", r2=" + fmt_g(fit.r_squared) +
                       ")");
  }
  return r;
}

namespace {

Matrix finite_difference_hf(const SystemModel& model, const HorizontalFrame& frame, double t,
                            const Vector& x) {
  const Vector fx = model.f(t, x);
  const double h = 1e-6;
  Vector xp = x, xm = x;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    xp[i] += h * fx[i];
    xm[i] -= h * fx[i];
  }
  Matrix out = frame.H(xp);
  out -= frame.H(xm);
  out *= 1.0 / (2.0 * h);
  return out;
}

}  // namespace

CertificateReport check_theorem1_conditions(const SystemModel& model, NormKind norm,
                                            const SampleSpec& samples,
                                            const CertifyOptions& opts) {
  if (!model.factorization || !model.frame) {
    throw MissingStructure("check_theorem1_conditions: needs factorization and frame");
  }
  const Factorization& fac = *model.factorization;
  const HorizontalFrame& frame = *model.frame;

  CertificateReport r;
  r.check_name = "theorem1";
  r.norm = norm;
  append_note(r, describe_samples(samples));
  if (model.jacobian_is_numerical()) append_note(r, "jacobian: finite differences");
  if (!frame.H_f) append_note(r, "H_f: finite differences along f (step 1e-6)");

  const TimedSamples ev = sample_evidence(model, samples, opts.t_sample_range, opts.dt);
  r.samples_used = ev.states.size();

  Rng unit_rng(samples.seed ^ 0xd1b54a32d192ed03ULL);
  double max_resid = 0.0;
  std::size_t arg = 0;
  double d6 = std::numeric_limits<double>::infinity();
  double d7 = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    const double t = ev.times[i];
    const Vector& x = ev.states[i];
    const Matrix h = frame.H(x);
    const Matrix hf = frame.H_f ? (*frame.H_f)(t, x) : finite_difference_hf(model, frame, t, x);
    const Matrix j = model.jac(t, x);
    const Matrix jxi = fac.j_xi(t, fac.p(x), x);

    Matrix res = hf.transposed() + h.transposed() * j - jxi * h.transposed();
    const double resid = frobenius_norm(res);
    if (resid > max_resid) {
      max_resid = resid;
      arg = i;
    }
    ratio_extremes(horizontal_gram(h), norm, unit_rng, tols::unit_vectors_per_sample, d6, d7);
  }

  r.residuals["max_residual"] = max_resid;
  set_const(r, "d6", d6);
  set_const(r, "d7", d7);

  if (max_resid <= tols::theorem1_residual_max && d6 >= tols::theorem1_d6_min) {
    r.verdict = Verdict::Certified;
  } else {
    r.verdict = Verdict::Falsified;
    if (max_resid > tols::theorem1_residual_max) {
      append_note(r, "witness: identity residual " + fmt_g(max_resid) + " at x=" +
                         fmt_point(ev.states[arg]));
    }
    if (d6 < tols::theorem1_d6_min) append_note(r, "H^T H loses rank on samples (d6 too small)");
  }
  return r;
}

CertificateReport check_theorem2_conditions(const SystemModel& model, int k, NormKind norm,
                                            const SampleSpec& samples,
                                            const CertifyOptions& opts) {
  if (!model.frame) throw MissingStructure("check_theorem2_conditions: model has no frame");
  const HorizontalFrame& frame = *model.frame;
  if (k < 1 || k > model.n) throw InvalidInput("check_theorem2_conditions: bad k");
  if (frame.ell != model.n - k + 1) {
    throw DimensionMismatch("check_theorem2_conditions: frame width must be n - k + 1");
  }

  CertificateReport r;
  r.check_name = "theorem2";
  r.norm = norm;
  append_note(r, describe_samples(samples));
  if (model.jacobian_is_numerical()) append_note(r, "jacobian: finite differences");
  append_note(r, "uniform boundedness checked on sampled trajectory pairs only");

  const TimedSamples ev = sample_evidence(model, samples, opts.t_sample_range, opts.dt);
  r.samples_used = ev.states.size();

  const auto n = static_cast<std::size_t>(model.n);
  Rng unit_rng(samples.seed ^ 0xd1b54a32d192ed03ULL);
  double c1 = std::numeric_limits<double>::infinity(), c2 = -c1;
  double c3 = c1, c4 = -c1;
  double c5 = c1, c6 = -c1;

  for (const Vector& x : ev.states) {
    const Matrix h = frame.H(x);
    const Matrix q = frame.Q(x);
    ratio_extremes(horizontal_gram(h), norm, unit_rng, tols::unit_vectors_per_sample, c1, c2);

    Matrix m(n, n);
    for (std::size_t i = 0; i < h.cols(); ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = h(j, i);
    }
    for (std::size_t i = 0; i < q.cols(); ++i) {
      for (std::size_t j = 0; j < n; ++j) m(h.cols() + i, j) = q(j, i);
    }
    ratio_extremes(m, norm, unit_rng, tols::unit_vectors_per_sample, c3, c4);
    ratio_extremes(mult_compound(m, k), norm, unit_rng, tols::unit_vectors_per_sample, c5, c6);
  }

  set_const(r, "c1", c1);
  set_const(r, "c2", c2);
  set_const(r, "c3", c3);
  set_const(r, "c4", c4);
  set_const(r, "c5", c5);
  set_const(r, "c6", c6);

  // Trajectory-pair evidence for uniform boundedness, plus the running
  // integral of mu(J) that Coppel's inequality turns into a bound.
  Rng traj_rng(samples.seed + 1);
  const auto ics = sample_domain(model.domain, static_cast<std::size_t>(opts.n_traj), traj_rng);
  std::vector<Trajectory> trajs;
  bool escaped = false;
  for (const auto& a : ics) {
    try {
      trajs.push_back(integrate(model, a, opts.t_end, opts.dt));
    } catch (const DomainEscape& e) {
      escaped = true;
      append_note(r, "trajectory escaped the domain box at t=" + fmt_g(e.time()));
      trajs.push_back(e.partial());
    }
  }

  double ratio_sup = 0.0;
  double growth_rate = -std::numeric_limits<double>::infinity();
  const auto window = effective_window(opts, 0.0, opts.t_end);
  for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
    for (std::size_t j = i + 1; j < trajs.size(); ++j) {
      const std::size_t len = std::min(trajs[i].times.size(), trajs[j].times.size());
      if (len < 3) continue;
      std::vector<double> d(len);
      for (std::size_t s = 0; s < len; ++s) {
        d[s] = vector_norm(trajs[i].states[s] - trajs[j].states[s], norm);
      }
      if (!(d[0] > 1e-12)) continue;
      for (std::size_t s = 0; s < len; ++s) ratio_sup = std::max(ratio_sup, d[s] / d[0]);
      try {
        const DecayFit fit = fit_decay(
            std::span<const double>(trajs[i].times.data(), len), d,
            {std::min(window.first, trajs[i].times[len - 1] * 0.5), trajs[i].times[len - 1]});
        growth_rate = std::max(growth_rate, fit.rate);
      } catch (const InsufficientData&) {
      }
    }
  }
  set_const(r, "traj_ratio_sup", ratio_sup);
  if (std::isfinite(growth_rate)) set_const(r, "traj_growth_rate", growth_rate);

  double coppel_sup = -std::numeric_limits<double>::infinity();
  for (const auto& traj : trajs) {
    double integral = 0.0;
    double prev_mu = 0.0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
      const double mu = matrix_measure(model.jac(traj.times[s], traj.states[s]), norm);
      if (s > 0) integral += 0.5 * (mu + prev_mu) * (traj.times[s] - traj.times[s - 1]);
      prev_mu = mu;
      coppel_sup = std::max(coppel_sup, integral);
    }
  }
  set_const(r, "coppel_sup", coppel_sup);

  const bool constants_ok = std::isfinite(c2) && std::isfinite(c4) && std::isfinite(c6) &&
                            c1 >= tols::theorem2_c_min && c3 >= tols::theorem2_c_min &&
                            c5 >= tols::theorem2_c_min;
  const bool growth_detected = escaped || growth_rate > tols::growth_margin;
  if (!constants_ok) {
    r.verdict = Verdict::Falsified;
    append_note(r, "witness: frame constants degenerate on samples");
  } else if (growth_detected) {
    r.verdict = Verdict::Inconclusive;
    append_note(r,
                "uniform boundedness not observed (trajectories grow); rate-comparison "
                "relaxation is not certified");
  } else {
    r.verdict = Verdict::Certified;
  }
  return r;
}

CertificateReport check_flow_invariant_subspace(const Matrix& H, const Matrix& Q,
                                                const SystemModel& model,
                                                const SampleSpec& samples,
                                                const CertifyOptions& opts) {
  const auto n = static_cast<std::size_t>(model.n);
  if (H.rows() != n || Q.rows() != n || H.cols() + Q.cols() != n || H.cols() == 0) {
    throw InvalidInput("check_flow_invariant_subspace: H/Q shapes inconsistent with model");
  }

  CertificateReport r;
  r.check_name = "flow-invariant-subspace";
  r.norm = NormKind::L2;
  append_note(r, describe_samples(samples));
  if (model.jacobian_is_numerical()) append_note(r, "jacobian: finite differences");

  const Matrix I_ell = Matrix::identity(H.cols());
  const Matrix I_rem = Matrix::identity(Q.cols());
  const Matrix I_n = Matrix::identity(n);
  r.residuals["HtH_minus_I"] = frobenius_norm(H.transposed() * H - I_ell);
  r.residuals["QtQ_minus_I"] = frobenius_norm(Q.transposed() * Q - I_rem);
  r.residuals["HtQ"] = frobenius_norm(H.transposed() * Q);
  r.residuals["completeness"] = frobenius_norm(H * H.transposed() + Q * Q.transposed() - I_n);

  const TimedSamples ev = sample_evidence(model, samples, opts.t_sample_range, opts.dt);
  r.samples_used = ev.states.size();

  const Box bb = model.domain.bounding_box();
  double half_width = 0.0;
  for (std::size_t i = 0; i < bb.lo.dim(); ++i) {
    half_width = std::max(half_width, 0.5 * (bb.hi[i] - bb.lo[i]));
  }

  Rng q_rng(samples.seed ^ 0x94d049bb133111ebULL);
  double inv_resid = 0.0;
  Vector inv_witness;
  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    Vector z(Q.cols());
    for (std::size_t c = 0; c < z.dim(); ++c) {
      z[c] = q_rng.uniform(-0.5 * half_width, 0.5 * half_width);
    }
    const Vector qpt = Q * z;
    const double resid = vector_norm(H.transposed() * model.f(ev.times[i], qpt), NormKind::L2);
    if (resid > inv_resid) {
      inv_resid = resid;
      inv_witness = qpt;
    }
  }
  r.residuals["flow_invariance"] = inv_resid;

  double suff_resid = 0.0;
  Vector suff_witness;
  for (std::size_t i = 0; i < ev.states.size(); ++i) {
    const double resid =
        frobenius_norm(H.transposed() * model.jac(ev.times[i], ev.states[i]) * Q);
    if (resid > suff_resid) {
      suff_resid = resid;
      suff_witness = ev.states[i];
    }
  }
  r.residuals["sufficiency"] = suff_resid;

  const bool orthonormal = r.residuals["HtH_minus_I"] <= tols::orthonormality_residual &&
                           r.residuals["QtQ_minus_I"] <= tols::orthonormality_residual &&
                           r.residuals["HtQ"] <= tols::orthonormality_residual &&
                           r.residuals["completeness"] <= tols::orthonormality_residual;
  const bool invariant = inv_resid <= tols::subspace_residual;
  const bool sufficient = suff_resid <= tols::subspace_residual;

  if (orthonormal && invariant && sufficient) {
    r.verdict = Verdict::Certified;
  } else {
    r.verdict = Verdict::Falsified;
    if (!orthonormal) append_note(r, "witness: (H, Q) fail orthonormality residuals");
    if (!invariant) {
      append_note(r, "witness: |H^T f| = " + fmt_g(inv_resid) + " at q=" + fmt_point(inv_witness));
    }
    if (!sufficient) {
      append_note(r,
                  "witness: ||H^T J Q|| = " + fmt_g(suff_resid) + " at x=" +
                      fmt_point(suff_witness));
    }
  }
  return r;
}

CertificateReport verify_lemma1(const std::function<std::vector<Vector>(double)>& family, int k,
                                int n, int ell, double gamma1, double gamma2, double beta,
                                NormKind norm, std::span<const double> t_grid,
                                const CertifyOptions& opts) {
  if (k < 2 || k > n) throw InvalidInput("verify_lemma1: need 2 <= k <= n");
  if (ell < 1 || ell > k) throw InvalidInput("verify_lemma1: need 1 <= ell <= k");
  if (!(gamma1 >= 1.0) || !(gamma2 >= 1.0) || !(beta > 0.0)) {
    throw InvalidInput("verify_lemma1: need gamma1, gamma2 >= 1 and beta > 0");
  }
  if (t_grid.size() < 3 || t_grid.front() != 0.0) {
    throw InvalidInput("verify_lemma1: time grid must start at 0 with at least 3 points");
  }

  CertificateReport r;
  r.check_name = "lemma1";
  r.norm = norm;

  const auto eval = [&](double t) {
    const std::vector<Vector> vs = family(t);
    if (static_cast<int>(vs.size()) != k) {
      throw InvalidInput("verify_lemma1: family must return k vectors");
    }
    for (const auto& v : vs) {
      if (v.dim() != static_cast<std::size_t>(n)) {
        throw InvalidInput("verify_lemma1: family vector has wrong dimension");
      }
    }
    return vs;
  };

  const std::vector<Vector> a0 = eval(0.0);
  std::vector<double> initial_norms(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) initial_norms[static_cast<std::size_t>(j)] = vector_norm(a0[static_cast<std::size_t>(j)], norm);

  const double w0 = vector_norm(wedge(a0).coeffs, norm);
  if (!(w0 > tols::fit_floor)) {
    throw InvalidInput("verify_lemma1: initial wedge is degenerate");
  }

  double prod_norms = 1.0;
  for (double v : initial_norms) prod_norms *= v;
  const double gamma3 = prod_norms / w0;

  double beta_bar = beta;
  double gamma_bar = std::pow(static_cast<double>(n) * gamma1, k - 1) * gamma3;
  if (ell == k) {
    beta_bar = static_cast<double>(k) * beta;
    gamma_bar *= gamma1;
  } else if (ell == k - 1) {
    beta_bar = static_cast<double>(k - 1) * beta;
    gamma_bar *= gamma2;
  } else {
    gamma_bar *= std::pow(gamma2, k - ell);
  }
  set_const(r, "gamma_bar", gamma_bar);
  set_const(r, "beta_bar", beta_bar);
  set_const(r, "gamma3", gamma3);

  std::vector<double> wedge_norms(t_grid.size());
  bool envelope_ok = true;
  double envelope_worst = 0.0;
  double witness_t = 0.0;
  for (std::size_t s = 0; s < t_grid.size(); ++s) {
    const double t = t_grid[s];
    const std::vector<Vector> vs = eval(t);

    // The family must actually satisfy the hypotheses it claims.
    for (int j = 0; j < k; ++j) {
      const double nv = vector_norm(vs[static_cast<std::size_t>(j)], norm);
      const double bound =
          j < ell ? gamma1 * std::exp(-beta * t) * initial_norms[static_cast<std::size_t>(j)]
                  : gamma2 * initial_norms[static_cast<std::size_t>(j)];
      if (nv > bound + tols::generator_slack * (1.0 + initial_norms[static_cast<std::size_t>(j)])) {
        throw InvalidInput("verify_lemma1: family violates its decay/boundedness contract at t=" +
                           fmt_g(t));
      }
    }

    wedge_norms[s] = vector_norm(wedge(vs).coeffs, norm);
    const double envelope = gamma_bar * std::exp(-beta_bar * t) * w0;
    const double excess = wedge_norms[s] - envelope;
    if (excess > tols::generator_slack * (1.0 + w0) && excess > envelope_worst) {
      envelope_ok = false;
      envelope_worst = excess;
      witness_t = t;
    }
  }

  const auto fit_window = effective_window(opts, t_grid.front(), t_grid.back());
  const DecayFit fit = fit_decay(t_grid, wedge_norms, fit_window);
  set_const(r, "rate", fit.rate);
  set_const(r, "r2", fit.r_squared);
  set_const(r, "floor_hits", static_cast<double>(fit.floor_hits));
  r.samples_used = t_grid.size();

  const bool rate_ok = fit.rate <= -beta + opts.fit_rate_tol &&
                       (ell < k - 1 || fit.rate <= -beta_bar + opts.fit_rate_tol);

  if (!envelope_ok) {
    r.verdict = Verdict::Falsified;
    append_note(r, "witness: wedge norm exceeds the guaranteed envelope at t=" + fmt_g(witness_t) +
                       " by " + fmt_g(envelope_worst));
  } else if (rate_ok && fit.r_squared >= opts.r2_min) {
    r.verdict = Verdict::Certified;
  } else {
    r.verdict = Verdict::Inconclusive;
    append_note(r, "fitted rate " + fmt_g(fit.rate) + " (r2=" + fmt_g(fit.r_squared) +
                       ") does not resolve the guaranteed decay");
  }
  return r;
}

SyntheticFamily make_rotating_family(std::uint64_t seed, int k, int n, int ell, double beta,
                                     NormKind norm) {
  if (k < 2 || k > n) throw InvalidInput("make_rotating_family: need 2 <= k <= n");
  if (ell < 1 || ell > k) throw InvalidInput("make_rotating_family: need 1 <= ell <= k");
  if (!(beta > 0.0)) throw InvalidInput("make_rotating_family: need beta > 0");

  Rng rng(seed);
  const auto dim = static_cast<std::size_t>(n);

  std::vector<std::pair<std::size_t, std::size_t>> planes;
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < dim; i += 2) {
    planes.emplace_back(i, i + 1);
    rates.push_back(rng.uniform(-1.0, 1.0));
  }

  // Generic initial vectors; resample until the wedge is comfortably away
  // from degeneracy so gamma3 stays moderate.
  std::vector<Vector> base;
  for (int attempt = 0; attempt < 64; ++attempt) {
    base.clear();
    double prod = 1.0;
    for (int j = 0; j < k; ++j) {
      Vector v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = rng.gaussian();
      prod *= vector_norm(v, NormKind::L2);
      base.push_back(std::move(v));
    }
    if (vector_norm(wedge(base).coeffs, NormKind::L2) >= 1e-3 * prod) break;
    base.clear();
  }
  if (base.empty()) throw InvalidInput("make_rotating_family: could not draw a generic family");

  SyntheticFamily out;
  // A rigid rotation preserves the L2 norm to roundoff; the other monotonic
  // norms see at most a sqrt(n) distortion.
  out.gamma1 = norm == NormKind::L2 ? 1.0 + 1e-9 : std::sqrt(static_cast<double>(n)) * (1.0 + 1e-9);
  out.gamma2 = out.gamma1;
  out.family = [planes, rates, base, ell, beta](double t) {
    std::vector<Vector> vs;
    vs.reserve(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
      Vector v = base[j];
      for (std::size_t g = 0; g < planes.size(); ++g) {
        const auto [a, b] = planes[g];
        const double c = std::cos(rates[g] * t), s = std::sin(rates[g] * t);
        const double va = v[a], vb = v[b];
        v[a] = c * va - s * vb;
        v[b] = s * va + c * vb;
      }
      if (static_cast<int>(j) < ell) v *= std::exp(-beta * t);
      vs.push_back(std::move(v));
    }
    return vs;
  };
  return out;
}

}  // namespace kcontract
