#include "kcontract/sampling.hpp"

#include <cmath>
#include <numbers>

namespace kcontract {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

Vector Rng::unit_vector(std::size_t dim, NormKind norm) {
  for (;;) {
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = gaussian();
    const double len = vector_norm(v, norm);
    if (len > 1e-12) {
      v *= 1.0 / len;
      return v;
    }
  }
}

namespace {

std::vector<Vector> annulus_samples(const Annulus2D& a, std::size_t count, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);

  // Boundary circles first: the per-sample suprema the checkers report are
  // attained on the closed domain's extremal radii.
  const std::size_t per_circle = std::min<std::size_t>(count / 4, 64);
  const double r_in = std::sqrt(a.gamma1);
  const double r_out = std::sqrt(a.gamma2);
  for (std::size_t i = 0; i < per_circle && out.size() + 1 < count; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(per_circle);
    out.push_back(Vector{r_in * std::cos(theta), r_in * std::sin(theta)});
    out.push_back(Vector{r_out * std::cos(theta), r_out * std::sin(theta)});
  }
  while (out.size() < count) {
    const double x = rng.uniform(-r_out, r_out);
    const double y = rng.uniform(-r_out, r_out);
    const double s = x * x + y * y;
    if (s >= a.gamma1 && s <= a.gamma2) out.push_back(Vector{x, y});
  }
  return out;
}

std::vector<Vector> box_samples(const Box& b, std::size_t count, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  const std::size_t n = b.lo.dim();
  if (n <= 10 && (std::size_t{1} << n) <= count / 2) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Vector corner(n);
      for (std::size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? b.hi[i] : b.lo[i];
      out.push_back(std::move(corner));
    }
  }
  while (out.size() < count) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(b.lo[i], b.hi[i]);
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Vector> predicate_samples(const PredicateDomain& p, std::size_t count, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  const std::size_t n = p.bounding_box.lo.dim();
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * std::max<std::size_t>(count, 1);
  while (out.size() < count) {
    if (++attempts > max_attempts) {
      throw InvalidInput("sample_domain: rejection sampling failed (domain too thin?)");
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(p.bounding_box.lo[i], p.bounding_box.hi[i]);
    }
    if (p.contains(x)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

std::vector<Vector> sample_domain(const DomainSpec& domain, std::size_t count, Rng& rng) {
  if (count == 0) return {};
  return std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Annulus2D>) {
          return annulus_samples(d, count, rng);
        } else if constexpr (std::is_same_v<T, Box>) {
          return box_samples(d, count, rng);
        } else {
          return predicate_samples(d, count, rng);
        }
      },
      domain.raw());
}

TimedSamples sample_evidence(const SystemModel& model, const SampleSpec& spec,
                             std::pair<double, double> t_range, double dt) {
  Rng rng(spec.seed);
  TimedSamples out;
  if (std::holds_alternative<UniformDomain>(spec.scheme)) {
    out.states = sample_domain(model.domain, spec.count, rng);
    out.times.reserve(out.states.size());
    for (std::size_t i = 0; i < out.states.size(); ++i) {
      out.times.push_back(rng.uniform(t_range.first, t_range.second));
    }
    return out;
  }

  const auto& along = std::get<AlongTrajectories>(spec.scheme);
  const auto ics = sample_domain(model.domain, static_cast<std::size_t>(along.n_traj), rng);
  for (const auto& a : ics) {
    // An orbit that runs out of the box still contributes its prefix.
    Trajectory traj;
    try {
      traj = integrate(model, a, along.t_end, dt);
    } catch (const DomainEscape& e) {
      traj = e.partial();
    }
    if (traj.times.empty()) continue;
    const std::size_t want = std::max<std::size_t>(spec.count / ics.size(), 1);
    const std::size_t stride = std::max<std::size_t>(traj.times.size() / want, 1);
    for (std::size_t i = 0; i < traj.times.size(); i += stride) {
      out.times.push_back(traj.times[i]);
      out.states.push_back(traj.states[i]);
    }
  }
  return out;
}

}  // namespace kcontract
