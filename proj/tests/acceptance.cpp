// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criterion 8 drives the CLI binary, whose path arrives as
// argv[1] (or the KCONTRACT_CLI environment variable).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kcontract/certify.hpp"
#include "kcontract/systems.hpp"

using namespace kcontract;

namespace {

std::string g_cli_path;

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CriterionFailure(what);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = 2.0 * u01(rng) - 1.0;
  return m;
}

// --- 1: Cauchy-Binet --------------------------------------------------------

std::string criterion_cauchy_binet() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int done = 0;
  while (done < 500) {
    const std::size_t n = 1 + rng() % 6, p = 1 + rng() % 6, m = 1 + rng() % 6;
    const auto kmax = static_cast<int>(std::min({n, p, m}));
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(kmax));
    const Matrix a = random_matrix(rng, n, p);
    const Matrix b = random_matrix(rng, p, m);
    const Matrix lhs = mult_compound(a * b, k);
    const Matrix rhs = mult_compound(a, k) * mult_compound(b, k);
    const double rel = max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs));
    worst = std::max(worst, rel);
    ++done;
  }
  require(worst <= 1e-10, "max relative error " + num(worst) + " > 1e-10");
  return "500 cases, max_rel_err=" + num(worst);
}

// --- 2: additive-compound suite ---------------------------------------------

std::string criterion_additive_suite() {
  std::mt19937_64 rng(2025);

  double worst_add = 0.0;
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + rng() % 5;
    const int k = 1 + static_cast<int>(rng() % n);
    const Matrix a = random_matrix(rng, n, n);
    const Matrix b = random_matrix(rng, n, n);
    worst_add = std::max(worst_add,
                         max_abs(add_compound(a + b, k) - (add_compound(a, k) + add_compound(b, k))));
  }
  require(worst_add <= 1e-12, "additivity residual " + num(worst_add) + " > 1e-12");

  double worst_ratio_lo = 1e30, worst_ratio_hi = 0.0, worst_e6 = 0.0;
  for (int it = 0; it < 20; ++it) {
    const std::size_t n = 3 + rng() % 3;
    const int k = 2 + static_cast<int>(rng() % (n - 1));
    const Matrix a = random_matrix(rng, n, n);
    const Matrix exact = add_compound(a, k);
    const auto fd_error = [&](double eps) {
      Matrix pert = a * eps;
      for (std::size_t i = 0; i < n; ++i) pert(i, i) += 1.0;
      Matrix fd = mult_compound(pert, k);
      for (std::size_t i = 0; i < fd.rows(); ++i) fd(i, i) -= 1.0;
      fd *= 1.0 / eps;
      return max_abs(fd - exact);
    };
    const double e6 = fd_error(1e-6), e7 = fd_error(1e-7);
    worst_e6 = std::max(worst_e6, e6);
    worst_ratio_lo = std::min(worst_ratio_lo, e6 / e7);
    worst_ratio_hi = std::max(worst_ratio_hi, e6 / e7);
  }
  require(worst_e6 <= 1e-4, "finite-difference error at eps=1e-6 is " + num(worst_e6));
  require(worst_ratio_lo >= 6.0 && worst_ratio_hi <= 14.0,
          "error does not shrink linearly in eps (ratios " + num(worst_ratio_lo) + ".." +
              num(worst_ratio_hi) + ")");

  for (int it = 0; it < 20; ++it) {
    const std::size_t n = 4 + rng() % 3;
    Matrix a = random_matrix(rng, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) a(i, j) = 0.0;
    const int k = 2 + static_cast<int>(rng() % (n - 1));
    const Matrix ak = add_compound(a, k);
    const auto sets = lex_index_sets(k, static_cast<int>(n));
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        require(ak(i, j) == 0.0, "triangular structure violated");
      }
      double diag = 0.0;
      for (int l : sets[i].members()) {
        diag += a(static_cast<std::size_t>(l - 1), static_cast<std::size_t>(l - 1));
      }
      require(ak(i, i) == diag, "diagonal k-sum not exact");
    }
  }
  return "additivity<=" + num(worst_add) + ", fd ratios in [" + num(worst_ratio_lo) + ", " +
         num(worst_ratio_hi) + "], triangular exact";
}

// --- 3: Duffing 2-contraction ------------------------------------------------

std::string criterion_duffing_rate() {
  const SystemModel duffing = systems::duffing();
  std::mt19937_64 rng(2026);
  double worst_dev = 0.0;
  for (int run = 0; run < 5; ++run) {
    const Vector a{3.0 * u01(rng) - 1.5, 3.0 * u01(rng) - 1.5};
    const Trajectory traj = integrate_compound(duffing, a, 2, Vector{1.0}, 50.0, 1e-3);
    std::vector<double> vals(traj.times.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      vals[i] = vector_norm(traj.compound_state[i], NormKind::L2);
    }
    const DecayFit fit = fit_decay(traj.times, vals, {0.0, 50.0});
    worst_dev = std::max(worst_dev, std::abs(fit.rate + 0.3));
  }
  require(worst_dev <= 1e-3, "rate deviates from -0.3 by " + num(worst_dev));
  return "5 initial conditions, max |rate + 0.3| = " + num(worst_dev);
}

// --- 4: Hopf proposition ------------------------------------------------------

std::string criterion_hopf_proposition() {
  const SystemModel hopf = systems::hopf();
  std::ostringstream detail;

  // (i) partial contraction.
  const CertificateReport partial =
      check_partial_contraction(hopf, NormKind::L2, SampleSpec{2000, 7});
  require(partial.verdict == Verdict::Certified, "(i) partial contraction not certified");
  const double mu = partial.constants.at("mu_xi_sup");
  require(std::abs(mu + 0.5) <= 1e-9, "(i) mu(J_xi) sup " + num(mu) + " != -0.5 +- 1e-9");

  const auto& fac = *hopf.factorization;
  std::mt19937_64 rng(2027);
  for (int traj_i = 0; traj_i < 10; ++traj_i) {
    const double theta = 2.0 * 3.14159265358979323846 * u01(rng);
    const double r2 = 0.25 + 3.75 * u01(rng);
    const Vector a{std::sqrt(r2) * std::cos(theta), std::sqrt(r2) * std::sin(theta)};
    const Trajectory traj = integrate(hopf, a, 10.0, 1e-3);
    const double p0 = std::abs(fac.p(a)[0]);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double bound = std::exp(-0.5 * traj.times[i]) * p0 + 1e-6;
      require(std::abs(fac.p(traj.states[i])[0]) <= bound,
              "(i) |p(x(t))| exceeds e^{-0.5 t}|p(a)| + 1e-6 at t=" + num(traj.times[i]));
    }
  }
  detail << "(i) mu_xi_sup=" << num(mu);

  // (ii) theorem-1 conditions + horizontal decay.
  const CertificateReport thm1 =
      check_theorem1_conditions(hopf, NormKind::L2, SampleSpec{2000, 7});
  require(thm1.verdict == Verdict::Certified, "(ii) theorem-1 conditions not certified");
  const double resid = thm1.residuals.at("max_residual");
  require(resid <= 1e-8, "(ii) identity residual " + num(resid) + " > 1e-8");

  const CertificateReport hdecay =
      check_horizontal_decay(hopf, NormKind::L2, Vector{2.0, 0.0}, Vector{1.0, 1.0}, 12.0, 1e-3);
  require(hdecay.verdict == Verdict::Certified, "(ii) horizontal decay not certified");
  const double hrate = hdecay.constants.at("rate");
  require(std::abs(hrate + 2.0) <= 0.05, "(ii) horizontal rate " + num(hrate) + " != -2 +- 0.05");
  detail << "; (ii) residual=" << num(resid) << " h_rate=" << num(hrate);

  // (iii) theorem-2 constants, Coppel bound, empirical compound rate.
  const CertificateReport thm2 = check_theorem2_conditions(
      hopf, 2, NormKind::L2, SampleSpec{2000, 7}, CertifyOptions{.t_end = 20.0, .n_traj = 8});
  require(thm2.verdict == Verdict::Certified, "(iii) theorem-2 conditions not certified");
  const double c5 = thm2.constants.at("c5"), c6 = thm2.constants.at("c6");
  require(std::abs(c5 - 0.25) <= 1e-9, "(iii) c5 " + num(c5) + " != 0.25 +- 1e-9");
  require(std::abs(c6 - 4.0) <= 1e-9, "(iii) c6 " + num(c6) + " != 4 +- 1e-9");
  const double coppel = thm2.constants.at("coppel_sup");
  require(coppel <= 6.0 + 1e-3, "(iii) Coppel integral " + num(coppel) + " > 6 + 1e-3");

  const Trajectory comp = integrate_compound(hopf, Vector{2.0, 0.0}, 2, Vector{1.0}, 40.0, 1e-3);
  std::vector<double> vals(comp.times.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = vector_norm(comp.compound_state[i], NormKind::L2);
  }
  const DecayFit fit = fit_decay(comp.times, vals, {20.0, 40.0});
  require(std::abs(fit.rate + 2.0) <= 0.02,
          "(iii) empirical 2-compound rate " + num(fit.rate) + " != -2 +- 0.02");
  detail << "; (iii) c5=" << num(c5) << " c6=" << num(c6) << " coppel=" << num(coppel)
         << " rate=" << num(fit.rate);
  return detail.str();
}

// --- 5: one-way separations between the contraction notions ---------------------

std::string criterion_separations() {
  std::ostringstream detail;

  // 2-contractive but not uniformly stable.
  const SystemModel grow = systems::triangular2d({0.5, 1.0});
  const CertificateReport pw =
      check_k_contraction_pointwise(grow, 2, NormKind::L2, SampleSpec{200, 5});
  require(pw.verdict == Verdict::Certified, "triangular(0.5,1): 2-contraction not certified");
  require(std::abs(pw.constants.at("mu_sup") + 0.5) <= 1e-9,
          "triangular(0.5,1): mu_sup != -0.5");

  std::vector<Vector> origin{Vector{0.0, 0.0}};
  std::vector<std::vector<Vector>> axes{{Vector{1.0, 0.0}, Vector{0.0, 1.0}}};
  const CertificateReport emp = check_k_contraction_empirical(
      grow, 2, NormKind::L2, origin, axes, 50.0, 1e-3);
  require(emp.verdict == Verdict::Certified, "triangular(0.5,1): empirical check failed");
  require(std::abs(emp.constants.at("rate_worst") + 0.5) <= 1e-4,
          "triangular(0.5,1): empirical rate != -0.5 +- 1e-4");

  const Trajectory witness = integrate(grow, Vector{1.0, 0.0}, 4.0, 1e-3);
  const double x1_start = std::abs(witness.states.front()[0]);
  const double x1_end = std::abs(witness.states.back()[0]);
  require(x1_end > 5.0 * x1_start, "triangular(0.5,1): |x1| did not grow");
  detail << "growth witness |x1|: " << num(x1_start) << " -> " << num(x1_end);

  // Horizontally contractive but 2-expanding.
  const SystemModel hgrow = systems::triangular2d({1.0, 0.5});
  const CertificateReport hor = check_horizontal_decay(
      hgrow, NormKind::L2, Vector{0.0, 0.0}, Vector{1.0, 1.0}, 30.0, 1e-3);
  require(hor.verdict == Verdict::Certified, "triangular(1,0.5): horizontal decay not certified");
  require(std::abs(hor.constants.at("rate") + 0.5) <= 1e-4,
          "triangular(1,0.5): horizontal rate != -0.5 +- 1e-4");

  const Trajectory comp =
      integrate_compound(hgrow, Vector{0.0, 0.0}, 2, Vector{1.0}, 30.0, 1e-3);
  std::vector<double> vals(comp.times.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = vector_norm(comp.compound_state[i], NormKind::L2);
  }
  const DecayFit fit = fit_decay(comp.times, vals, {15.0, 30.0});
  require(std::abs(fit.rate - 0.5) <= 1e-4,
          "triangular(1,0.5): 2-compound growth rate " + num(fit.rate) + " != +0.5 +- 1e-4");
  detail << "; horizontal rate " << num(hor.constants.at("rate")) << ", area growth "
         << num(fit.rate);
  return detail.str();
}

// --- 6: lemma-1 property suite ---------------------------------------------------

std::string criterion_lemma1_suite() {
  std::mt19937_64 rng(2028);
  std::vector<double> grid;
  for (double t = 0.0; t <= 6.0 + 1e-12; t += 0.01) grid.push_back(t);

  int done = 0;
  double worst_gap = -1e30;
  while (done < 100) {
    const int k = 2 + static_cast<int>(rng() % 3);          // 2..4
    const int n = std::max(3, k) + static_cast<int>(rng() % (7 - std::max(3, k)));  // ..6
    const int ell = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1));
    const double beta = 0.3 + 0.9 * u01(rng);
    const SyntheticFamily fam = make_rotating_family(rng(), k, n, ell, beta, NormKind::L2);

    const CertificateReport r = verify_lemma1(fam.family, k, n, ell, fam.gamma1, fam.gamma2,
                                              beta, NormKind::L2, grid);
    require(r.verdict == Verdict::Certified,
            "family " + std::to_string(done) + " not certified: " + r.notes);
    const double rate = r.constants.at("rate");
    require(rate <= -beta + 1e-2,
            "family " + std::to_string(done) + ": rate " + num(rate) + " > -beta + 1e-2");
    if (ell == k - 1) {
      require(rate <= -(k - 1) * beta + 1e-2,
              "family " + std::to_string(done) + ": rate misses -(k-1)beta + 1e-2");
      worst_gap = std::max(worst_gap, rate + (k - 1) * beta);
    }
    ++done;
  }
  return "100 families certified, worst (k-1)beta gap " + num(worst_gap);
}

// --- 7: compound/variational consistency -----------------------------------------

std::string criterion_consistency() {
  std::ostringstream detail;
  const SystemModel models[] = {systems::hopf(), systems::duffing()};
  const Vector ics[] = {Vector{2.0, 0.0}, Vector{1.0, 0.5}};

  for (int mi = 0; mi < 2; ++mi) {
    const SystemModel& model = models[mi];
    const std::vector<Vector> deltas{Vector{1.0, 0.0}, Vector{0.0, 1.0}};
    const WedgeVector w0 = wedge(deltas);
    const Trajectory var = integrate_variational(model, ics[mi], deltas, 5.0, 1e-3);
    const Trajectory comp = integrate_compound(model, ics[mi], 2, w0.coeffs, 5.0, 1e-3);

    double worst = 0.0;
    for (std::size_t i = 0; i < var.times.size(); i += 50) {
      const std::vector<Vector> dx{var.var_states[0][i], var.var_states[1][i]};
      const WedgeVector wt = wedge(dx);
      const double scale =
          std::max(vector_norm(comp.compound_state[i], NormKind::L2), 1e-12);
      worst = std::max(worst, max_abs(wt.coeffs - comp.compound_state[i]) / scale);
    }
    require(worst <= 1e-5, model.name + ": wedge/compound deviation " + num(worst) + " > 1e-5");

    // Liouville for k = n: y(t) = y0 exp(int trace J), Simpson quadrature.
    std::vector<double> tr(comp.times.size());
    for (std::size_t i = 0; i < comp.times.size(); ++i) {
      const Matrix j = model.jac(comp.times[i], comp.states[i]);
      tr[i] = j(0, 0) + j(1, 1);
    }
    const double dt = comp.times[1] - comp.times[0];
    double integral = 0.0;
    double worst_liouville = 0.0;
    for (std::size_t i = 2; i < comp.times.size(); i += 2) {
      integral += dt / 3.0 * (tr[i - 2] + 4.0 * tr[i - 1] + tr[i]);
      const double expected = std::exp(integral);
      const double got = comp.compound_state[i][0];
      worst_liouville = std::max(worst_liouville, std::abs(got - expected) / std::abs(expected));
    }
    require(worst_liouville <= 1e-6,
            model.name + ": Liouville deviation " + num(worst_liouville) + " > 1e-6");
    detail << (mi ? "; " : "") << model.name << ": wedge_dev=" << num(worst)
           << " liouville=" << num(worst_liouville);
  }
  return detail.str();
}

// --- 8: CLI determinism ------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string criterion_determinism() {
  require(!g_cli_path.empty(), "CLI path not provided (argv[1] or KCONTRACT_CLI)");
  const std::string tmp = "/tmp";
  const struct {
    std::string args;
    std::string out_a;
    std::string out_b;
  } cases[] = {
      {"simulate --model hopf --ic 2,0 --t-end 20", "/tmp/kacc_sim_a.csv", "/tmp/kacc_sim_b.csv"},
      {"volume --model duffing --ic 1,0 --k 2 --delta 1,0 --delta 0,1 --t-end 20 --seed 3",
       "/tmp/kacc_vol_a.csv", "/tmp/kacc_vol_b.csv"},
      {"certify --model hopf --check theorem2 --k 2 --samples 500 --seed 7 --t-end 10",
       "/tmp/kacc_cert_a.json", "/tmp/kacc_cert_b.json"},
      {"lemma1 --k 3 --n 5 --ell 2 --beta 0.7 --seed 11", "/tmp/kacc_lem_a.json",
       "/tmp/kacc_lem_b.json"},
  };
  for (const auto& c : cases) {
    const std::string run_a = g_cli_path + " " + c.args + " --out " + c.out_a + " > " + c.out_a +
                              ".stdout 2>/dev/null";
    const std::string run_b = g_cli_path + " " + c.args + " --out " + c.out_b + " > " + c.out_b +
                              ".stdout 2>/dev/null";
    const int rc_a = std::system(run_a.c_str());
    const int rc_b = std::system(run_b.c_str());
    require(rc_a == rc_b, "exit codes differ for: " + c.args);
    require(slurp(c.out_a) == slurp(c.out_b), "outputs differ for: " + c.args);
    require(slurp(c.out_a + ".stdout") == slurp(c.out_b + ".stdout"),
            "stdout differs for: " + c.args);
    require(!slurp(c.out_a).empty(), "empty output for: " + c.args);
  }
  return "4 commands byte-identical across reruns";
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  if (g_cli_path.empty()) {
    if (const char* env = std::getenv("KCONTRACT_CLI")) g_cli_path = env;
  }

  const std::vector<Criterion> criteria = {
      {1, "cauchy-binet", 5.0, criterion_cauchy_binet},
      {2, "additive-compound-suite", 5.0, criterion_additive_suite},
      {3, "duffing-2-contraction", 10.0, criterion_duffing_rate},
      {4, "hopf-proposition", 30.0, criterion_hopf_proposition},
      {5, "contraction-separations", 30.0, criterion_separations},
      {6, "lemma1-property-suite", 10.0, criterion_lemma1_suite},
      {7, "compound-variational-consistency", 10.0, criterion_consistency},
      {8, "cli-determinism", 30.0, criterion_determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && elapsed > c.budget_seconds) {
      ok = false;
      detail = "runtime " + std::to_string(elapsed) + "s exceeds budget " +
               std::to_string(c.budget_seconds) + "s";
    }
    std::printf("[%s] %d %s (%.2fs): %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), elapsed,
                detail.c_str());
    if (!ok) ++failed;
  }
  std::printf("ACCEPTANCE: %zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
