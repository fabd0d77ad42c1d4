#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kcontract/dynamics.hpp"
#include "kcontract/linalg.hpp"
#include "kcontract/sampling.hpp"
#include "kcontract/tolerances.hpp"

namespace kcontract {

/// Least-squares line through (t, ln value).
struct DecayFit {
  double rate = 0.0;       // slope; negative means decay
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  std::size_t floor_hits = 0;    // in-window samples at or below the underflow floor
  std::size_t samples_used = 0;
};

/// Fits ln(values) over the window, ignoring samples <= tols::fit_floor.
/// Throws InsufficientData with fewer than three usable samples.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values,
                   std::pair<double, double> window);

enum class Verdict { Certified, Falsified, Inconclusive };
const char* to_string(Verdict v);

/// What every checker returns. "Certified" always means: every stated
/// inequality held with the declared margin on the declared sample set —
/// never a universal claim. A falsification names a concrete witness in
/// `notes`.
struct CertificateReport {
  std::string check_name;
  Verdict verdict = Verdict::Inconclusive;
  std::map<std::string, double> constants;
  std::map<std::string, double> residuals;
  std::size_t samples_used = 0;
  NormKind norm = NormKind::L2;
  std::string notes;
};

/// Stable-key-order JSON rendering (keys sorted, shortest round-trip floats).
std::string report_to_json(const CertificateReport& report);

/// Shared checker knobs. The decay-fit window defaults to the last half of
/// the horizon so transients stay out of the asymptotic rate.
struct CertifyOptions {
  double margin = tols::certify_margin;
  double r2_min = tols::fit_r2_min;
  std::optional<std::pair<double, double>> window;
  std::pair<double, double> t_sample_range{0.0, 10.0};
  double t_end = 10.0;  // horizon for trajectory evidence generated inside a checker
  double dt = tols::default_dt;
  int n_traj = 10;
  double fit_rate_tol = tols::fit_rate_tol;
};

/// sup over samples of mu(J^[k](t, x)) in the given norm; certified when the
/// supremum clears -margin.
CertificateReport check_k_contraction_pointwise(const SystemModel& model, int k, NormKind norm,
                                                const SampleSpec& samples,
                                                const CertifyOptions& opts = {});

/// Integrates the k-th compound equation from y0 = wedge(deltas) for every
/// (initial condition, delta set) pair and fits the decay of |y(t)|.
CertificateReport check_k_contraction_empirical(const SystemModel& model, int k, NormKind norm,
                                                std::span<const Vector> initial_conditions,
                                                std::span<const std::vector<Vector>> delta_sets,
                                                double t_end, double dt,
                                                const CertifyOptions& opts = {});

/// sup over sampled (t, xi, x) of mu(J_xi) for a factorized model, after
/// validating the factorization identity g(t, p(x), x) = f(t, x) on the
/// samples. When the model carries m(x), also fits the decay of
/// |p(x(t)) - m(x(t))| along trajectories.
CertificateReport check_partial_contraction(const SystemModel& model, NormKind norm,
                                            const SampleSpec& samples,
                                            const CertifyOptions& opts = {});

/// Integrates the variational flow of one displacement and fits the decay of
/// the horizontal part |dx_h(t)|, dx_h = (H^T H)^{-1} H^T dx.
CertificateReport check_horizontal_decay(const SystemModel& model, NormKind norm, const Vector& a,
                                         const Vector& delta, double t_end, double dt,
                                         const CertifyOptions& opts = {});

/// The two bridging conditions from partial to horizontal contraction:
/// norm equivalence bounds d6 <= |H^T H y|/|y| <= d7, and the residual of
/// H_f^T(x) + H^T(x) J(t,x) = J_xi(t, p(x), x) H^T(x) over samples.
CertificateReport check_theorem1_conditions(const SystemModel& model, NormKind norm,
                                            const SampleSpec& samples,
                                            const CertifyOptions& opts = {});

/// The bridging conditions from horizontal to k-contraction for a frame with
/// ell = n - k + 1: constants c1..c6 for H^T H, M(x) = [H^T; Q^T] and
/// M^(k)(x), plus sampled-trajectory uniform-boundedness evidence and the
/// running integral of mu(J) (Coppel bound).
CertificateReport check_theorem2_conditions(const SystemModel& model, int k, NormKind norm,
                                            const SampleSpec& samples,
                                            const CertifyOptions& opts = {});

/// Constant-frame flow-invariance certificate: orthonormality residuals of
/// (H, Q), |H^T f(t, q)| over the invariant subspace, and ||H^T J(t,x) Q||
/// over domain samples.
CertificateReport check_flow_invariant_subspace(const Matrix& H, const Matrix& Q,
                                                const SystemModel& model,
                                                const SampleSpec& samples,
                                                const CertifyOptions& opts = {});

/// Wedge-decay verification: the family callable returns the k vectors at
/// time t; the first ell must decay like gamma1 e^{-beta t} and the rest stay
/// gamma2-bounded (asserted at runtime). Checks the guaranteed envelope and
/// the fitted decay rate of |a^1(t) ^ ... ^ a^k(t)|.
CertificateReport verify_lemma1(const std::function<std::vector<Vector>(double)>& family, int k,
                                int n, int ell, double gamma1, double gamma2, double beta,
                                NormKind norm, std::span<const double> t_grid,
                                const CertifyOptions& opts = {});

/// Seeded synthetic family for wedge-decay experiments: one rigid rotation
/// (disjoint Givens planes with random rates) carries k generic vectors
/// while the first ell shrink by e^{-beta t}. gamma1/gamma2 are contract
/// constants that such a family satisfies in the given norm.
struct SyntheticFamily {
  std::function<std::vector<Vector>(double)> family;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
};
SyntheticFamily make_rotating_family(std::uint64_t seed, int k, int n, int ell, double beta,
                                     NormKind norm);

}  // namespace kcontract
