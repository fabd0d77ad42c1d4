#pragma once

#include <map>
#include <string>
#include <vector>

#include "kcontract/dynamics.hpp"

namespace kcontract::systems {

/// Andronov-Hopf oscillator restricted to the annulus
/// gamma1 <= x1^2 + x2^2 <= gamma2, which is forward invariant around the
/// unit-circle limit cycle.
struct HopfParams {
  double gamma1 = 0.25;
  double gamma2 = 4.0;
};
SystemModel hopf(const HopfParams& params = {});

/// Forced Duffing oscillator; the default thetas give the bounded
/// self-intersecting attractor.
struct DuffingParams {
  double theta1 = 1.0;
  double theta2 = 1.0;
  double theta3 = 0.3;
  double theta4 = 0.37;
  double theta5 = 1.2;
};
SystemModel duffing(const DuffingParams& params = {});

/// x1' = c1 x1 + x2, x2' = -c2 x2: the two-parameter linear system whose
/// (c1, c2) orderings separate 2-contraction from horizontal contraction.
struct TriangularParams {
  double c1 = 0.5;
  double c2 = 1.0;
};
SystemModel triangular2d(const TriangularParams& params);

/// x' = Ax with constant orthonormal frame (H, Q) whose column space Q is
/// flow invariant (||H^T A Q|| below tolerance, else NotFlowInvariant).
SystemModel linear_invariant(const Matrix& A, const Matrix& H, const Matrix& Q);

std::vector<std::string> builtin_names();

/// CLI-facing registry; `params` entries override the struct defaults and
/// unknown keys are rejected.
SystemModel by_name(const std::string& name, const std::map<std::string, double>& params);

}  // namespace kcontract::systems
