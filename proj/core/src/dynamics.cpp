#include "kcontract/dynamics.hpp"

#include <cmath>
#include <utility>

#include "kcontract/tolerances.hpp"

namespace kcontract {

DomainSpec DomainSpec::box(Vector lo, Vector hi) {
  if (lo.dim() == 0 || lo.dim() != hi.dim()) {
    throw InvalidInput("DomainSpec::box: lo/hi dimension mismatch");
  }
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (!(lo[i] < hi[i])) throw InvalidInput("DomainSpec::box: need lo < hi componentwise");
  }
  return DomainSpec(Box{std::move(lo), std::move(hi)});
}

DomainSpec DomainSpec::annulus(double gamma1, double gamma2) {
  if (!(0.0 < gamma1 && gamma1 < 1.0 && 1.0 < gamma2)) {
    throw InvalidInput("DomainSpec::annulus: need 0 < gamma1 < 1 < gamma2");
  }
  return DomainSpec(Annulus2D{gamma1, gamma2});
}

DomainSpec DomainSpec::predicate(std::function<bool(const Vector&)> contains, Box bounding_box) {
  if (!contains) throw InvalidInput("DomainSpec::predicate: missing membership callable");
  return DomainSpec(PredicateDomain{std::move(contains), std::move(bounding_box)});
}

bool DomainSpec::contains(const Vector& x) const {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Box>) {
          if (x.dim() != d.lo.dim()) return false;
          for (std::size_t i = 0; i < x.dim(); ++i) {
            if (x[i] < d.lo[i] || x[i] > d.hi[i]) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Annulus2D>) {
          if (x.dim() != 2) return false;
          const double s = x[0] * x[0] + x[1] * x[1];
          return s >= d.gamma1 && s <= d.gamma2;
        } else {
          return d.contains(x);
        }
      },
      spec_);
}

Box DomainSpec::bounding_box() const {
  return std::visit(
      [&](const auto& d) -> Box {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Box>) {
          return d;
        } else if constexpr (std::is_same_v<T, Annulus2D>) {
          const double r = std::sqrt(d.gamma2);
          return Box{Vector{-r, -r}, Vector{r, r}};
        } else {
          return d.bounding_box;
        }
      },
      spec_);
}

double DomainSpec::diameter() const {
  const Box b = bounding_box();
  double acc = 0.0;
  for (std::size_t i = 0; i < b.lo.dim(); ++i) {
    const double d = b.hi[i] - b.lo[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Matrix SystemModel::jac(double t, const Vector& x) const {
  if (jacobian) {
    Matrix j = (*jacobian)(t, x);
    if (j.rows() != static_cast<std::size_t>(n) || j.cols() != static_cast<std::size_t>(n)) {
      throw InvalidInput("SystemModel: jacobian shape mismatch");
    }
    return j;
  }
  return numerical_jacobian(*this, t, x);
}

DomainEscape::DomainEscape(double time, std::shared_ptr<const Trajectory> partial)
    : Error("trajectory escaped the domain bounding box at t=" + std::to_string(time)),
      time_(time),
      partial_(std::move(partial)) {}

Matrix numerical_jacobian(const SystemModel& model, double t, const Vector& x) {
  const std::size_t n = x.dim();
  Matrix j(n, n);
  Vector xp = x, xm = x;
  for (std::size_t col = 0; col < n; ++col) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[col]));
    xp[col] = x[col] + h;
    xm[col] = x[col] - h;
    const Vector fp = model.f(t, xp);
    const Vector fm = model.f(t, xm);
    for (std::size_t row = 0; row < n; ++row) {
      j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
    }
    xp[col] = x[col];
    xm[col] = x[col];
  }
  return j;
}

namespace {

// One flattened RK4 state: [ x | dx^1 .. dx^m | y ].
struct JointRhs {
  const SystemModel& model;
  std::size_t n;
  std::size_t n_deltas;
  std::size_t r;  // compound dimension, 0 when unused
  int k = 0;

  std::size_t total() const { return n + n_deltas * n + r; }

  void operator()(double t, const std::vector<double>& s, std::vector<double>& out) const {
    Vector x = Vector::unchecked(std::vector<double>(s.begin(), s.begin() + static_cast<long>(n)));
    const Vector fx = model.f(t, x);
    if (fx.dim() != n) throw InvalidInput("SystemModel: f returned wrong dimension");
    for (std::size_t i = 0; i < n; ++i) out[i] = fx[i];

    if (n_deltas == 0 && r == 0) return;
    const Matrix j = model.jac(t, x);
    for (std::size_t d = 0; d < n_deltas; ++d) {
      const std::size_t base = n + d * n;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += j(i, c) * s[base + c];
        out[base + i] = acc;
      }
    }
    if (r > 0) {
      const Matrix jk = add_compound(j, k);
      const std::size_t base = n + n_deltas * n;
      for (std::size_t i = 0; i < r; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < r; ++c) acc += jk(i, c) * s[base + c];
        out[base + i] = acc;
      }
    }
  }
};

bool outside_inflated_box(const Vector& x, const Box& box, double slack) {
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (!std::isfinite(x[i])) return true;
    if (x[i] < box.lo[i] - slack || x[i] > box.hi[i] + slack) return true;
  }
  return false;
}

Trajectory run_rk4(const SystemModel& model, const Vector& a, std::span<const Vector> deltas,
                   std::optional<int> k, const Vector* y0, double t_end, double dt) {
  if (model.n <= 0 || !model.f) throw InvalidInput("integrate: model has no vector field");
  if (a.dim() != static_cast<std::size_t>(model.n)) {
    throw InvalidInput("integrate: initial condition dimension mismatch");
  }
  if (!(dt > 0.0) || !(dt <= t_end)) throw InvalidInput("integrate: need 0 < dt <= t_end");
  if (!model.domain.contains(a)) throw InvalidInput("integrate: initial condition outside domain");
  for (const auto& d : deltas) {
    if (d.dim() != a.dim()) throw InvalidInput("integrate: delta dimension mismatch");
  }

  JointRhs rhs{model, a.dim(), deltas.size(), 0, 0};
  if (k) {
    rhs.k = *k;
    const std::int64_t r = binomial(model.n, *k);
    rhs.r = static_cast<std::size_t>(r);
    if (!y0 || y0->dim() != rhs.r) {
      throw InvalidInput("integrate_compound: y0 must have length C(n, k)");
    }
  }

  const std::size_t total = rhs.total();
  std::vector<double> s(total);
  for (std::size_t i = 0; i < a.dim(); ++i) s[i] = a[i];
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    for (std::size_t i = 0; i < a.dim(); ++i) s[rhs.n + d * rhs.n + i] = deltas[d][i];
  }
  if (rhs.r > 0) {
    for (std::size_t i = 0; i < rhs.r; ++i) s[rhs.n + rhs.n_deltas * rhs.n + i] = (*y0)[i];
  }

  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const Box box = model.domain.bounding_box();
  const double slack = tols::escape_fraction * model.domain.diameter();

  Trajectory traj;
  traj.k = k;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.var_states.assign(deltas.size(), {});
  for (auto& vs : traj.var_states) vs.reserve(n_steps + 1);
  if (rhs.r > 0) traj.compound_state.reserve(n_steps + 1);

  auto record = [&](double t) {
    traj.times.push_back(t);
    Vector x = Vector::unchecked(std::vector<double>(s.begin(), s.begin() + static_cast<long>(rhs.n)));
    if (!traj.first_domain_exit && !model.domain.contains(x)) traj.first_domain_exit = t;
    traj.states.push_back(std::move(x));
    for (std::size_t d = 0; d < rhs.n_deltas; ++d) {
      const auto base = static_cast<long>(rhs.n + d * rhs.n);
      traj.var_states[d].push_back(
          Vector::unchecked(std::vector<double>(s.begin() + base, s.begin() + base + static_cast<long>(rhs.n))));
    }
    if (rhs.r > 0) {
      const auto base = static_cast<long>(rhs.n + rhs.n_deltas * rhs.n);
      traj.compound_state.push_back(
          Vector::unchecked(std::vector<double>(s.begin() + base, s.begin() + base + static_cast<long>(rhs.r))));
    }
  };

  record(0.0);

  std::vector<double> k1(total), k2(total), k3(total), k4(total), tmp(total);
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    rhs(t, s, k1);
    for (std::size_t i = 0; i < total; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < total; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < total; ++i) tmp[i] = s[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    for (std::size_t i = 0; i < total; ++i) {
      s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const double t_new = static_cast<double>(step + 1) * dt;
    const Vector x = Vector::unchecked(std::vector<double>(s.begin(), s.begin() + static_cast<long>(rhs.n)));
    if (outside_inflated_box(x, box, slack)) {
      throw DomainEscape(t_new, std::make_shared<Trajectory>(std::move(traj)));
    }
    record(t_new);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const SystemModel& model, const Vector& a, double t_end, double dt) {
  return run_rk4(model, a, {}, std::nullopt, nullptr, t_end, dt);
}

Trajectory integrate_variational(const SystemModel& model, const Vector& a,
                                 std::span<const Vector> deltas, double t_end, double dt) {
  if (deltas.empty()) throw InvalidInput("integrate_variational: need at least one delta");
  return run_rk4(model, a, deltas, std::nullopt, nullptr, t_end, dt);
}

Trajectory integrate_compound(const SystemModel& model, const Vector& a, int k,
                              const Vector& y0, double t_end, double dt) {
  if (k < 1 || k > model.n) throw InvalidInput("integrate_compound: need 1 <= k <= n");
  return run_rk4(model, a, {}, k, &y0, t_end, dt);
}

}  // namespace kcontract
