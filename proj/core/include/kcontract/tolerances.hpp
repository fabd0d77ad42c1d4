#pragma once

#include <cstdint>

// Every numeric threshold the library relies on, in one place, so that the
// implementation and the test suites always agree on them.
namespace kcontract::tols {

// --- linalg ---------------------------------------------------------------
inline constexpr double sym_asymmetry_rel = 1e-12;   // accepted relative asymmetry of "symmetric" input
inline constexpr double jacobi_offdiag = 1e-13;      // off-diagonal Frobenius stop threshold
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double min_scaled_pivot = 1e-12;    // row-scaled pivot floor, ~cond < 1e12

// --- compound -------------------------------------------------------------
inline constexpr int max_compound_dim = 30;          // binomials stay in 64-bit range
inline constexpr double volume_rank_threshold = 1e-10;

// --- dynamics -------------------------------------------------------------
inline constexpr double escape_fraction = 0.10;      // box inflation (fraction of diameter) before DomainEscape
inline constexpr double default_dt = 1e-3;

// --- certify --------------------------------------------------------------
inline constexpr double certify_margin = 1e-6;       // required slack on every certified inequality
inline constexpr double fit_r2_min = 0.99;           // decay-fit acceptance
inline constexpr double fit_floor = 1e-300;          // samples below this are excluded from log fits
inline constexpr double fit_rate_tol = 1e-3;         // fitted-rate comparison slack (lemma 1)
inline constexpr double factorization_residual = 1e-9;
inline constexpr double frame_orthogonality = 1e-9;
inline constexpr double theorem1_residual_max = 1e-6;
inline constexpr double theorem1_d6_min = 1e-9;
inline constexpr double theorem2_c_min = 1e-9;
inline constexpr double growth_margin = 1e-3;        // fitted rate above this flags trajectory growth
inline constexpr double orthonormality_residual = 1e-10;
inline constexpr double invariance_residual = 1e-10; // ||H^T A Q|| cap for flow-invariant construction
inline constexpr double subspace_residual = 1e-8;    // pass threshold for sampled invariance / H^T J Q checks
inline constexpr double generator_slack = 1e-9;      // lemma-1 generator contract slack
inline constexpr int unit_vectors_per_sample = 256;  // d/c constant estimation

}  // namespace kcontract::tols
