#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kcontract/compound.hpp"
#include "kcontract/linalg.hpp"

namespace kcontract {

struct Box {
  Vector lo;
  Vector hi;  // lo < hi componentwise
};

struct Annulus2D {
  double gamma1;  // 0 < gamma1 < 1
  double gamma2;  // gamma2 > 1
};

struct PredicateDomain {
  std::function<bool(const Vector&)> contains;
  Box bounding_box;
};

/// Forward-invariant region the model's conclusions are restricted to.
class DomainSpec {
 public:
  static DomainSpec box(Vector lo, Vector hi);
  static DomainSpec annulus(double gamma1, double gamma2);
  static DomainSpec predicate(std::function<bool(const Vector&)> contains, Box bounding_box);

  bool contains(const Vector& x) const;
  Box bounding_box() const;
  /// Euclidean diameter of the bounding box.
  double diameter() const;

  const std::variant<Box, Annulus2D, PredicateDomain>& raw() const noexcept { return spec_; }

 private:
  explicit DomainSpec(std::variant<Box, Annulus2D, PredicateDomain> spec)
      : spec_(std::move(spec)) {}
  std::variant<Box, Annulus2D, PredicateDomain> spec_;
};

/// A factorization f(t, x) = g(t, p(x), x) together with the auxiliary
/// dynamics it induces; `m`, when present, marks a second solution branch so
/// that trajectories converge to the manifold { p(x) = m(x) }.
struct Factorization {
  int ell;
  std::function<Vector(const Vector&)> p;
  std::function<Matrix(const Vector&)> dp;                           // ell x n
  std::function<Vector(double, const Vector&, const Vector&)> g;     // (t, xi, x) -> R^n
  std::function<Matrix(double, const Vector&, const Vector&)> j_xi;  // ell x ell
  std::optional<std::function<Vector(const Vector&)>> m;
};

/// Pointwise orthogonal splitting of the tangent space into a horizontal
/// span H(x) and vertical span Q(x); H_f is the directional derivative of
/// H along the vector field when it is known analytically.
struct HorizontalFrame {
  int ell;
  std::function<Matrix(const Vector&)> H;  // n x ell
  std::function<Matrix(const Vector&)> Q;  // n x (n - ell)
  std::optional<std::function<Matrix(double, const Vector&)>> H_f;
};

struct SystemModel {
  int n = 0;
  std::function<Vector(double, const Vector&)> f;
  std::optional<std::function<Matrix(double, const Vector&)>> jacobian;
  DomainSpec domain = DomainSpec::box(Vector{-1.0}, Vector{1.0});
  std::optional<Factorization> factorization;
  std::optional<HorizontalFrame> frame;
  std::string name;

  /// Analytic Jacobian when available, central differences otherwise.
  Matrix jac(double t, const Vector& x) const;
  bool jacobian_is_numerical() const noexcept { return !jacobian.has_value(); }
};

/// Samples of one solution on a fixed step grid, together with whatever
/// variational / compound states were integrated alongside it.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;                    // x(t)
  std::vector<std::vector<Vector>> var_states;   // [delta index][step]
  std::vector<Vector> compound_state;            // [step], each of length C(n, k)
  std::optional<int> k;
  /// First time the state left the domain while staying inside the inflated
  /// bounding box; such a run is suspect but not aborted.
  std::optional<double> first_domain_exit;
};

/// Thrown when a state leaves the domain's bounding box by more than
/// tols::escape_fraction of its diameter; carries the partial trajectory.
class DomainEscape : public Error {
 public:
  DomainEscape(double time, std::shared_ptr<const Trajectory> partial);
  double time() const noexcept { return time_; }
  const Trajectory& partial() const noexcept { return *partial_; }
  std::shared_ptr<const Trajectory> partial_ptr() const noexcept { return partial_; }

 private:
  double time_;
  std::shared_ptr<const Trajectory> partial_;
};

/// Classical fixed-step RK4 on xdot = f(t, x), sampled at every step.
Trajectory integrate(const SystemModel& model, const Vector& a, double t_end, double dt);

/// Jointly integrates the state and the variational flows
/// d(dx^i)/dt = J(t, x) dx^i with dx^i(0) = deltas[i], on one RK4 grid.
Trajectory integrate_variational(const SystemModel& model, const Vector& a,
                                 std::span<const Vector> deltas, double t_end, double dt);

/// Jointly integrates the state and the k-th compound equation
/// ydot = J^[k](t, x(t)) y, building J^[k] at every RK4 stage.
Trajectory integrate_compound(const SystemModel& model, const Vector& a, int k,
                              const Vector& y0, double t_end, double dt);

/// Central differences with step h_i = 1e-6 * max(1, |x_i|).
Matrix numerical_jacobian(const SystemModel& model, double t, const Vector& x);

}  // namespace kcontract
