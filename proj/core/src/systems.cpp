#include "kcontract/systems.hpp"

#include <cmath>

#include "kcontract/tolerances.hpp"

namespace kcontract::systems {

SystemModel hopf(const HopfParams& params) {
  if (!(0.0 < params.gamma1 && params.gamma1 < 1.0 && 1.0 < params.gamma2)) {
    throw InvalidInput("hopf: need 0 < gamma1 < 1 < gamma2");
  }

  SystemModel model;
  model.n = 2;
  model.name = "hopf";
  model.domain = DomainSpec::annulus(params.gamma1, params.gamma2);

  model.f = [](double, const Vector& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    return Vector{-x[1] - x[0] * (s - 1.0), x[0] - x[1] * (s - 1.0)};
  };
  model.jacobian = [](double, const Vector& x) {
    return Matrix{{1.0 - 3.0 * x[0] * x[0] - x[1] * x[1], -2.0 * x[0] * x[1] - 1.0},
                  {-2.0 * x[0] * x[1] + 1.0, 1.0 - x[0] * x[0] - 3.0 * x[1] * x[1]}};
  };

  Factorization fac;
  fac.ell = 1;
  fac.p = [](const Vector& x) { return Vector{x[0] * x[0] + x[1] * x[1] - 1.0}; };
  fac.dp = [](const Vector& x) { return Matrix{{2.0 * x[0], 2.0 * x[1]}}; };
  fac.g = [](double, const Vector& xi, const Vector& x) {
    return Vector{-x[1] - x[0] * xi[0], x[0] - x[1] * xi[0]};
  };
  fac.j_xi = [](double, const Vector&, const Vector& x) {
    return Matrix{{-2.0 * (x[0] * x[0] + x[1] * x[1])}};
  };
  fac.m = [](const Vector&) { return Vector{0.0}; };
  model.factorization = std::move(fac);

  HorizontalFrame frame;
  frame.ell = 1;
  frame.H = [](const Vector& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    return Matrix(2, 1, {x[0] / s, x[1] / s});
  };
  frame.Q = [](const Vector& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    return Matrix(2, 1, {-x[1] / s, x[0] / s});
  };
  // d/dt (x/s) along the flow; s' = -2s(s-1) collapses to this closed form.
  frame.H_f = [](double, const Vector& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    return Matrix(2, 1, {(x[0] * (s - 1.0) - x[1]) / s, (x[0] + x[1] * (s - 1.0)) / s});
  };
  model.frame = std::move(frame);
  return model;
}

SystemModel duffing(const DuffingParams& params) {
  if (!(params.theta1 > 0.0 && params.theta2 > 0.0 && params.theta3 > 0.0 &&
        params.theta4 > 0.0 && params.theta5 > 0.0)) {
    throw InvalidInput("duffing: all thetas must be positive");
  }

  SystemModel model;
  model.n = 2;
  model.name = "duffing";
  model.domain = DomainSpec::box(Vector{-3.0, -3.0}, Vector{3.0, 3.0});
  model.f = [p = params](double t, const Vector& x) {
    return Vector{x[1], p.theta1 * x[0] - p.theta2 * x[0] * x[0] * x[0] - p.theta3 * x[1] +
                            p.theta4 * std::cos(p.theta5 * t)};
  };
  model.jacobian = [p = params](double, const Vector& x) {
    return Matrix{{0.0, 1.0}, {p.theta1 - 3.0 * p.theta2 * x[0] * x[0], -p.theta3}};
  };
  return model;
}

SystemModel triangular2d(const TriangularParams& params) {
  if (!(params.c1 > 0.0 && params.c2 > 0.0)) {
    throw InvalidInput("triangular2d: need c1, c2 > 0");
  }

  SystemModel model;
  model.n = 2;
  model.name = "triangular2d";
  model.domain = DomainSpec::box(Vector{-10.0, -10.0}, Vector{10.0, 10.0});
  model.f = [p = params](double, const Vector& x) {
    return Vector{p.c1 * x[0] + x[1], -p.c2 * x[1]};
  };
  model.jacobian = [p = params](double, const Vector&) {
    return Matrix{{p.c1, 1.0}, {0.0, -p.c2}};
  };

  HorizontalFrame frame;
  frame.ell = 1;
  frame.H = [](const Vector&) { return Matrix(2, 1, {0.0, 1.0}); };
  frame.Q = [](const Vector&) { return Matrix(2, 1, {1.0, 0.0}); };
  frame.H_f = [](double, const Vector&) { return Matrix(2, 1); };
  model.frame = std::move(frame);
  return model;
}

SystemModel linear_invariant(const Matrix& A, const Matrix& H, const Matrix& Q) {
  const std::size_t n = A.rows();
  if (n == 0 || A.cols() != n) throw InvalidInput("linear_invariant: A must be square");
  if (H.rows() != n || Q.rows() != n || H.cols() == 0 || H.cols() + Q.cols() != n) {
    throw InvalidInput("linear_invariant: H/Q shapes inconsistent with A");
  }

  const double orth =
      std::max({frobenius_norm(H.transposed() * H - Matrix::identity(H.cols())),
                frobenius_norm(Q.transposed() * Q - Matrix::identity(Q.cols())),
                frobenius_norm(H.transposed() * Q),
                frobenius_norm(H * H.transposed() + Q * Q.transposed() - Matrix::identity(n))});
  if (orth > tols::orthonormality_residual) {
    throw InvalidInput("linear_invariant: (H, Q) are not orthonormal complements");
  }
  const double inv = frobenius_norm(H.transposed() * A * Q);
  if (inv > tols::invariance_residual) {
    throw NotFlowInvariant("linear_invariant: column space of Q is not flow invariant", inv);
  }

  SystemModel model;
  model.n = static_cast<int>(n);
  model.name = "linear-invariant";
  Vector lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = -10.0;
    hi[i] = 10.0;
  }
  model.domain = DomainSpec::box(std::move(lo), std::move(hi));
  model.f = [A](double, const Vector& x) { return A * x; };
  model.jacobian = [A](double, const Vector&) { return A; };

  Factorization fac;
  fac.ell = static_cast<int>(H.cols());
  fac.p = [H](const Vector& x) { return H.transposed() * x; };
  fac.dp = [H](const Vector&) { return H.transposed(); };
  fac.g = [A, H, Q](double, const Vector& xi, const Vector& x) {
    return A * (H * xi + Q * (Q.transposed() * x));
  };
  fac.j_xi = [jxi = H.transposed() * A * H](double, const Vector&, const Vector&) { return jxi; };
  fac.m = [ell = H.cols()](const Vector&) { return Vector(ell); };
  model.factorization = std::move(fac);

  HorizontalFrame frame;
  frame.ell = static_cast<int>(H.cols());
  frame.H = [H](const Vector&) { return H; };
  frame.Q = [Q](const Vector&) { return Q; };
  frame.H_f = [rows = n, cols = H.cols()](double, const Vector&) { return Matrix(rows, cols); };
  model.frame = std::move(frame);
  return model;
}

std::vector<std::string> builtin_names() {
  return {"hopf", "duffing", "triangular2d", "linear-invariant"};
}

namespace {

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, double>& params, const std::string& model) {
  if (!params.empty()) {
    throw InvalidInput("unknown parameter '" + params.begin()->first + "' for model " + model);
  }
}

}  // namespace

SystemModel by_name(const std::string& name, const std::map<std::string, double>& params) {
  std::map<std::string, double> rest = params;
  if (name == "hopf") {
    HopfParams p;
    p.gamma1 = take(rest, "gamma1", p.gamma1);
    p.gamma2 = take(rest, "gamma2", p.gamma2);
    reject_leftovers(rest, name);
    return hopf(p);
  }
  if (name == "duffing") {
    DuffingParams p;
    p.theta1 = take(rest, "theta1", p.theta1);
    p.theta2 = take(rest, "theta2", p.theta2);
    p.theta3 = take(rest, "theta3", p.theta3);
    p.theta4 = take(rest, "theta4", p.theta4);
    p.theta5 = take(rest, "theta5", p.theta5);
    reject_leftovers(rest, name);
    return duffing(p);
  }
  if (name == "triangular2d") {
    TriangularParams p;
    p.c1 = take(rest, "c1", p.c1);
    p.c2 = take(rest, "c2", p.c2);
    reject_leftovers(rest, name);
    return triangular2d(p);
  }
  if (name == "linear-invariant") {
    throw InvalidInput("model 'linear-invariant' needs a --model-file with A, H, Q");
  }
  throw InvalidInput("unknown model '" + name + "' (try hopf, duffing, triangular2d)");
}

}  // namespace kcontract::systems
