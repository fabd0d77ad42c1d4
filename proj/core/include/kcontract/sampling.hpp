#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "kcontract/dynamics.hpp"
#include "kcontract/linalg.hpp"

namespace kcontract {

/// Deterministic random source. The engine is the fully specified
/// std::mt19937_64 and all conversions are explicit bit manipulation, so a
/// seed pins every sample stream bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t bits() { return eng_(); }

  /// Standard normal via Box-Muller.
  double gaussian();

  /// Random direction, normalized to |y| = 1 in the given norm.
  Vector unit_vector(std::size_t dim, NormKind norm);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct UniformDomain {};
struct AlongTrajectories {
  int n_traj = 10;
  double t_end = 10.0;
};

/// How a checker draws its evidence set; identical specs reproduce
/// bit-identical reports.
struct SampleSpec {
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::variant<UniformDomain, AlongTrajectories> scheme = UniformDomain{};
};

/// Points from the domain. Extremal faces are sampled deterministically
/// first (annulus boundary circles, box corners) so suprema over the closed
/// domain are actually attained, then the rest is uniform.
std::vector<Vector> sample_domain(const DomainSpec& domain, std::size_t count, Rng& rng);

/// (t, x) evidence pairs per the SampleSpec scheme: domain samples with
/// uniform times in t_range, or states collected along integrated
/// trajectories started from uniform domain points.
struct TimedSamples {
  std::vector<double> times;
  std::vector<Vector> states;
};
TimedSamples sample_evidence(const SystemModel& model, const SampleSpec& spec,
                             std::pair<double, double> t_range, double dt);

}  // namespace kcontract
