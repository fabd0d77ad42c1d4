// Command-line front end: simulate built-in or user-supplied models, run
// compound-volume flows, and emit certificate reports as JSON.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcontract/certify.hpp"
#include "kcontract/systems.hpp"

using namespace kcontract;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEscape = 3;
constexpr int kExitFalsified = 4;
constexpr int kExitInconclusive = 5;

// 17 significant digits: round-trip exact for doubles, locale independent.
std::string fmt17(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput(what + ": cannot parse '" + text + "' as a number");
  }
}

Vector parse_vector(const std::string& text, const std::string& flag) {
  std::vector<double> entries;
  for (const auto& part : split(text, ',')) entries.push_back(parse_double(part, flag));
  if (entries.empty()) throw InvalidInput(flag + ": empty vector");
  return Vector(std::move(entries));
}

struct CommonOpts {
  std::string config;
  std::string model;
  std::string model_file;
  std::vector<std::string> params;
  std::string norm = "l2";
  std::uint64_t seed = 0;
  std::string out = "-";
  double dt = 1e-3;
  double t_end = 10.0;
  int stride = 10;
  std::string window;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "JSON run config; flags override its values");
  cmd->add_option("--model", o.model, "built-in model name (hopf, duffing, triangular2d)");
  cmd->add_option("--model-file", o.model_file, "JSON file describing a linear system");
  cmd->add_option("--params", o.params, "model parameter overrides, name=value[,name=value...]");
  cmd->add_option("--norm", o.norm, "vector norm: l1, l2 or linf")->default_str("l2");
  cmd->add_option("--seed", o.seed, "seed for every random draw");
  cmd->add_option("--out", o.out, "output path, or - for stdout")->default_str("-");
  cmd->add_option("--dt", o.dt, "integration step");
  cmd->add_option("--t-end", o.t_end, "integration horizon");
  cmd->add_option("--stride", o.stride, "emit every stride-th sample");
  cmd->add_option("--window", o.window, "fit window as start,end");
  cmd->add_flag("--quiet", o.quiet, "suppress the human summary line");
}

// Fills fields from the JSON run config; a value applies only when the
// matching flag was not given on the command line.
class ConfigApplier {
 public:
  ConfigApplier(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file '" + path + "'");
    try {
      json_ = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidInput("config file '" + path + "': " + e.what());
    }
    if (!json_.is_object()) throw InvalidInput("config file: top level must be an object");
  }

  template <typename T>
  void field(const std::string& key, T& target) {
    const auto it = json_.find(key);
    if (it == json_.end()) return;
    used_.push_back(key);
    if (cmd_->count("--" + key) > 0) return;  // flags override the file
    try {
      target = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidInput("config file: field '" + key + "' has the wrong type");
    }
  }

  // Accepts a single string or an array of strings.
  void list_field(const std::string& key, std::vector<std::string>& target) {
    const auto it = json_.find(key);
    if (it == json_.end()) return;
    used_.push_back(key);
    if (cmd_->count("--" + key) > 0) return;
    if (it->is_string()) {
      target = {it->get<std::string>()};
      return;
    }
    if (it->is_array()) {
      target.clear();
      for (const auto& e : *it) {
        if (!e.is_string()) throw InvalidInput("config file: '" + key + "' entries must be strings");
        target.push_back(e.get<std::string>());
      }
      return;
    }
    throw InvalidInput("config file: field '" + key + "' must be a string or string array");
  }

  void params_field(std::vector<std::string>& target) {
    const auto it = json_.find("params");
    if (it == json_.end()) return;
    used_.push_back("params");
    if (cmd_->count("--params") > 0) return;
    if (!it->is_object()) throw InvalidInput("config file: 'params' must be an object");
    target.clear();
    for (const auto& [name, value] : it->items()) {
      if (!value.is_number()) throw InvalidInput("config file: params." + name + " must be a number");
      std::ostringstream os;
      os.precision(17);
      os << name << "=" << value.get<double>();
      target.push_back(os.str());
    }
  }

  void finish() const {
    for (const auto& [key, value] : json_.items()) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw InvalidInput("config file: unknown field '" + key + "'");
      }
    }
  }

 private:
  CLI::App* cmd_;
  nlohmann::json json_ = nlohmann::json::object();
  std::vector<std::string> used_;
};

void apply_common_config(ConfigApplier& cfg, CommonOpts& o) {
  cfg.field("model", o.model);
  cfg.field("model-file", o.model_file);
  cfg.params_field(o.params);
  cfg.field("norm", o.norm);
  cfg.field("seed", o.seed);
  cfg.field("out", o.out);
  cfg.field("dt", o.dt);
  cfg.field("t-end", o.t_end);
  cfg.field("stride", o.stride);
  cfg.field("window", o.window);
  cfg.field("quiet", o.quiet);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    for (const auto& pair : split(item, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InvalidInput("--params: expected name=value, got '" + pair + "'");
      }
      out[pair.substr(0, eq)] = parse_double(pair.substr(eq + 1), "--params " + pair);
    }
  }
  return out;
}

std::optional<std::pair<double, double>> parse_window(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InvalidInput("--window: expected start,end");
  return std::make_pair(parse_double(parts[0], "--window"), parse_double(parts[1], "--window"));
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& field, std::size_t rows,
                        std::size_t cols) {
  if (!j.is_array() || j.size() != rows * cols) {
    throw InvalidInput("model file: field '" + field + "' must hold " +
                       std::to_string(rows * cols) + " row-major numbers");
  }
  std::vector<double> entries;
  entries.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw InvalidInput("model file: field '" + field + "' has a non-number");
    entries.push_back(e.get<double>());
  }
  return Matrix(rows, cols, std::move(entries));
}

struct LoadedModel {
  SystemModel model;
  std::optional<Matrix> H;  // constant frame, when the file provided one
  std::optional<Matrix> Q;
};

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("model file '" + path + "': " + e.what());
  }

  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<int>() < 1) {
    throw InvalidInput("model file: field 'n' must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(j["n"].get<int>());
  if (!j.contains("A")) throw InvalidInput("model file: field 'A' is required");
  const Matrix a = matrix_from_json(j["A"], "A", n, n);

  LoadedModel out;
  if (j.contains("H") != j.contains("Q")) {
    throw InvalidInput("model file: fields 'H' and 'Q' must appear together");
  }
  if (j.contains("H")) {
    if (!j["H"].is_array() || j["H"].size() % n != 0 || j["H"].empty()) {
      throw InvalidInput("model file: field 'H' must hold n x ell numbers");
    }
    const std::size_t ell = j["H"].size() / n;
    if (ell >= n) throw InvalidInput("model file: field 'H' must have fewer than n columns");
    out.H = matrix_from_json(j["H"], "H", n, ell);
    out.Q = matrix_from_json(j["Q"], "Q", n, n - ell);
    out.model = systems::linear_invariant(a, *out.H, *out.Q);
  } else {
    out.model.n = static_cast<int>(n);
    out.model.name = "linear";
    out.model.f = [a](double, const Vector& x) { return a * x; };
    out.model.jacobian = [a](double, const Vector&) { return a; };
    Vector lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = -10.0;
      hi[i] = 10.0;
    }
    out.model.domain = DomainSpec::box(std::move(lo), std::move(hi));
  }

  if (j.contains("domain")) {
    const auto& d = j["domain"];
    if (!d.contains("lo") || !d.contains("hi")) {
      throw InvalidInput("model file: field 'domain' needs 'lo' and 'hi' arrays");
    }
    const Matrix lo = matrix_from_json(d["lo"], "domain.lo", 1, n);
    const Matrix hi = matrix_from_json(d["hi"], "domain.hi", 1, n);
    Vector vlo(n), vhi(n);
    for (std::size_t i = 0; i < n; ++i) {
      vlo[i] = lo(0, i);
      vhi[i] = hi(0, i);
    }
    out.model.domain = DomainSpec::box(std::move(vlo), std::move(vhi));
  }
  return out;
}

LoadedModel resolve_model(const CommonOpts& o) {
  if (!o.model_file.empty()) return load_model_file(o.model_file);
  if (o.model.empty()) throw InvalidInput("--model or --model-file is required");
  LoadedModel out;
  out.model = systems::by_name(o.model, parse_params(o.params));
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  CommonOpts common;
  std::string ic;
};

int cmd_simulate(SimulateArgs& args, CLI::App* cmd) {
  ConfigApplier cfg(cmd, args.common.config);
  apply_common_config(cfg, args.common);
  cfg.field("ic", args.ic);
  cfg.finish();
  if (args.ic.empty()) throw InvalidInput("--ic is required");
  const LoadedModel loaded = resolve_model(args.common);
  const Vector a = parse_vector(args.ic, "--ic");
  if (a.dim() != static_cast<std::size_t>(loaded.model.n)) {
    throw InvalidInput("--ic: expected " + std::to_string(loaded.model.n) + " components, got " +
                       std::to_string(a.dim()));
  }

  Trajectory traj;
  bool escaped = false;
  double escape_time = 0.0;
  try {
    traj = integrate(loaded.model, a, args.common.t_end, args.common.dt);
  } catch (const DomainEscape& e) {
    traj = e.partial();
    escaped = true;
    escape_time = e.time();
  }

  std::string csv = "t";
  for (int i = 1; i <= loaded.model.n; ++i) csv += ",x_" + std::to_string(i);
  csv += "\n";
  const auto stride = static_cast<std::size_t>(std::max(args.common.stride, 1));
  for (std::size_t i = 0; i < traj.times.size(); i += stride) {
    csv += fmt17(traj.times[i]);
    for (std::size_t c = 0; c < traj.states[i].dim(); ++c) csv += "," + fmt17(traj.states[i][c]);
    csv += "\n";
  }
  if (escaped) csv += "# escaped at t=" + fmt17(escape_time) + "\n";
  write_output(args.common.out, csv);
  if (escaped) {
    std::cerr << "domain escape at t=" << fmt17(escape_time) << "\n";
    return kExitEscape;
  }
  return kExitOk;
}

struct VolumeArgs {
  CommonOpts common;
  std::string ic;
  int k = 2;
  std::vector<std::string> deltas;
};

int cmd_volume(VolumeArgs& args, CLI::App* cmd) {
  ConfigApplier cfg(cmd, args.common.config);
  apply_common_config(cfg, args.common);
  cfg.field("ic", args.ic);
  cfg.field("k", args.k);
  cfg.list_field("delta", args.deltas);
  cfg.finish();
  if (args.ic.empty()) throw InvalidInput("--ic is required");
  if (args.deltas.empty()) throw InvalidInput("--delta is required (k vectors)");
  const LoadedModel loaded = resolve_model(args.common);
  const SystemModel& model = loaded.model;
  const Vector a = parse_vector(args.ic, "--ic");
  if (a.dim() != static_cast<std::size_t>(model.n)) {
    throw InvalidInput("--ic: expected " + std::to_string(model.n) + " components");
  }
  if (args.k < 1 || args.k > model.n) throw InvalidInput("--k: must be in [1, n]");
  if (static_cast<int>(args.deltas.size()) != args.k) {
    throw InvalidInput("--delta: need exactly k = " + std::to_string(args.k) + " vectors");
  }
  std::vector<Vector> deltas;
  for (const auto& d : args.deltas) {
    deltas.push_back(parse_vector(d, "--delta"));
    if (deltas.back().dim() != static_cast<std::size_t>(model.n)) {
      throw InvalidInput("--delta: expected " + std::to_string(model.n) + " components");
    }
  }
  const WedgeVector w0 = wedge(deltas);
  if (!(vector_norm(w0.coeffs, NormKind::L2) > 0.0)) {
    throw InvalidInput("--delta: the vectors are dependent (zero initial wedge)");
  }

  const NormKind norm = norm_from_string(args.common.norm);
  Trajectory traj;
  bool escaped = false;
  double escape_time = 0.0;
  try {
    traj = integrate_compound(model, a, args.k, w0.coeffs, args.common.t_end, args.common.dt);
  } catch (const DomainEscape& e) {
    traj = e.partial();
    escaped = true;
    escape_time = e.time();
  }

  std::vector<double> vals(traj.times.size());
  std::string csv = "t,abs_y,ln_abs_y\n";
  const auto stride = static_cast<std::size_t>(std::max(args.common.stride, 1));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    vals[i] = vector_norm(traj.compound_state[i], norm);
    if (i % stride == 0) {
      csv += fmt17(traj.times[i]) + "," + fmt17(vals[i]) + "," + fmt17(std::log(vals[i])) + "\n";
    }
  }
  if (escaped) csv += "# escaped at t=" + fmt17(escape_time) + "\n";
  write_output(args.common.out, csv);
  if (escaped) {
    std::cerr << "domain escape at t=" << fmt17(escape_time) << "\n";
    return kExitEscape;
  }

  auto window = parse_window(args.common.window);
  if (!window) window = {0.5 * args.common.t_end, args.common.t_end};
  const DecayFit fit = fit_decay(traj.times, vals, *window);
  if (!args.common.quiet) {
    std::cout << "rate=" << fmt17(fit.rate) << " r2=" << fmt17(fit.r_squared) << "\n";
  }
  return kExitOk;
}

struct CertifyArgs {
  CommonOpts common;
  std::string check;
  int k = 2;
  std::size_t samples = 1000;
  int n_traj = 10;
  std::vector<std::string> ics;
  std::vector<std::string> deltas;
};

int verdict_exit(const CertificateReport& report, const CertifyArgs& args) {
  write_output(args.common.out, report_to_json(report));
  if (!args.common.quiet) {
    std::cerr << report.check_name << ": " << to_string(report.verdict) << "\n";
  }
  switch (report.verdict) {
    case Verdict::Certified: return kExitOk;
    case Verdict::Falsified: return kExitFalsified;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_certify(CertifyArgs& args, CLI::App* cmd) {
  ConfigApplier cfg(cmd, args.common.config);
  apply_common_config(cfg, args.common);
  cfg.field("check", args.check);
  cfg.field("k", args.k);
  cfg.field("samples", args.samples);
  cfg.field("n-traj", args.n_traj);
  cfg.list_field("ic", args.ics);
  cfg.list_field("delta", args.deltas);
  cfg.finish();
  if (args.check.empty()) throw InvalidInput("--check is required");
  const LoadedModel loaded = resolve_model(args.common);
  const SystemModel& model = loaded.model;
  const NormKind norm = norm_from_string(args.common.norm);
  const SampleSpec spec{args.samples, args.common.seed, UniformDomain{}};

  CertifyOptions opts;
  opts.window = parse_window(args.common.window);
  opts.t_end = args.common.t_end;
  opts.dt = args.common.dt;
  opts.n_traj = args.n_traj;

  auto parse_ics = [&](std::size_t min_count) {
    if (args.ics.size() < min_count) {
      throw InvalidInput("--ic: this check needs at least " + std::to_string(min_count) +
                         " initial condition(s)");
    }
    std::vector<Vector> out;
    for (const auto& s : args.ics) {
      out.push_back(parse_vector(s, "--ic"));
      if (out.back().dim() != static_cast<std::size_t>(model.n)) {
        throw InvalidInput("--ic: expected " + std::to_string(model.n) + " components");
      }
    }
    return out;
  };
  auto parse_deltas = [&](std::size_t count) {
    if (args.deltas.size() != count) {
      throw InvalidInput("--delta: this check needs exactly " + std::to_string(count) +
                         " vector(s)");
    }
    std::vector<Vector> out;
    for (const auto& s : args.deltas) {
      out.push_back(parse_vector(s, "--delta"));
      if (out.back().dim() != static_cast<std::size_t>(model.n)) {
        throw InvalidInput("--delta: expected " + std::to_string(model.n) + " components");
      }
    }
    return out;
  };

  if (args.check == "k-contraction-pointwise") {
    return verdict_exit(check_k_contraction_pointwise(model, args.k, norm, spec, opts), args);
  }
  if (args.check == "k-contraction-empirical") {
    const auto ics = parse_ics(1);
    const std::vector<std::vector<Vector>> delta_sets{
        parse_deltas(static_cast<std::size_t>(args.k))};
    return verdict_exit(check_k_contraction_empirical(model, args.k, norm, ics, delta_sets,
                                                      args.common.t_end, args.common.dt, opts),
                        args);
  }
  if (args.check == "partial-contraction") {
    return verdict_exit(check_partial_contraction(model, norm, spec, opts), args);
  }
  if (args.check == "horizontal-decay") {
    const auto ics = parse_ics(1);
    const auto deltas = parse_deltas(1);
    return verdict_exit(check_horizontal_decay(model, norm, ics[0], deltas[0], args.common.t_end,
                                               args.common.dt, opts),
                        args);
  }
  if (args.check == "theorem1") {
    return verdict_exit(check_theorem1_conditions(model, norm, spec, opts), args);
  }
  if (args.check == "theorem2") {
    return verdict_exit(check_theorem2_conditions(model, args.k, norm, spec, opts), args);
  }
  if (args.check == "flow-invariant-subspace") {
    if (!loaded.H || !loaded.Q) {
      throw MissingStructure(
          "flow-invariant-subspace needs a --model-file with constant H and Q");
    }
    return verdict_exit(check_flow_invariant_subspace(*loaded.H, *loaded.Q, model, spec, opts),
                        args);
  }
  throw InvalidInput(
      "unknown --check '" + args.check +
      "' (expected k-contraction-pointwise, k-contraction-empirical, partial-contraction, "
      "horizontal-decay, theorem1, theorem2 or flow-invariant-subspace)");
}

struct Lemma1Args {
  CommonOpts common;
  int k = 3;
  int ell = 1;
  int n = 4;
  double beta = 1.0;
  double gamma1 = 0.0;  // 0: derive from the synthetic family
  double gamma2 = 0.0;
};

int cmd_lemma1(Lemma1Args& args, CLI::App* cmd) {
  ConfigApplier cfg(cmd, args.common.config);
  apply_common_config(cfg, args.common);
  cfg.field("k", args.k);
  cfg.field("ell", args.ell);
  cfg.field("n", args.n);
  cfg.field("beta", args.beta);
  cfg.field("gamma1", args.gamma1);
  cfg.field("gamma2", args.gamma2);
  cfg.finish();
  if (args.ell < 1 || args.ell > args.k) {
    throw InvalidInput("--ell: must be in [1, k]");
  }
  const NormKind norm = norm_from_string(args.common.norm);
  const SyntheticFamily fam =
      make_rotating_family(args.common.seed, args.k, args.n, args.ell, args.beta, norm);
  const double gamma1 = args.gamma1 > 0.0 ? args.gamma1 : fam.gamma1;
  const double gamma2 = args.gamma2 > 0.0 ? args.gamma2 : fam.gamma2;

  const double dt = args.common.dt;
  std::vector<double> grid;
  for (double t = 0.0; t <= args.common.t_end + 1e-12; t += dt) grid.push_back(t);

  CertifyOptions opts;
  opts.window = parse_window(args.common.window);

  const CertificateReport report = verify_lemma1(fam.family, args.k, args.n, args.ell, gamma1,
                                                 gamma2, args.beta, norm, grid, opts);
  write_output(args.common.out, report_to_json(report));
  if (!args.common.quiet) {
    std::cerr << "lemma1: " << to_string(report.verdict) << "\n";
  }
  switch (report.verdict) {
    case Verdict::Certified: return kExitOk;
    case Verdict::Falsified: return kExitFalsified;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compound-matrix contraction toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "integrate a model and write a CSV");
  add_common(simulate, sim.common);
  simulate->add_option("--ic", sim.ic, "initial condition x1,x2,...");

  VolumeArgs vol;
  CLI::App* volume =
      app.add_subcommand("volume", "integrate the k-th compound equation and fit its decay");
  add_common(volume, vol.common);
  volume->add_option("--ic", vol.ic, "initial condition");
  volume->add_option("--k", vol.k, "compound order");
  volume->add_option("--delta", vol.deltas, "displacement vector (repeat k times)");

  CertifyArgs cert;
  CLI::App* certify = app.add_subcommand("certify", "run a contraction checker, write JSON");
  add_common(certify, cert.common);
  certify->add_option("--check", cert.check, "checker name");
  certify->add_option("--k", cert.k, "compound order (where applicable)");
  certify->add_option("--samples", cert.samples, "sample count");
  certify->add_option("--n-traj", cert.n_traj, "trajectories for trajectory-based evidence");
  certify->add_option("--ic", cert.ics, "initial condition(s)");
  certify->add_option("--delta", cert.deltas, "displacement vector(s)");

  Lemma1Args lem;
  CLI::App* lemma1 =
      app.add_subcommand("lemma1", "verify wedge decay on a seeded synthetic family");
  add_common(lemma1, lem.common);
  lem.common.t_end = 6.0;
  lem.common.dt = 0.01;
  lemma1->add_option("--k", lem.k, "number of vectors");
  lemma1->add_option("--ell", lem.ell, "number of decaying vectors");
  lemma1->add_option("--n", lem.n, "ambient dimension");
  lemma1->add_option("--beta", lem.beta, "decay rate of the first ell vectors");
  lemma1->add_option("--gamma1", lem.gamma1, "decay prefactor (default: from the family)");
  lemma1->add_option("--gamma2", lem.gamma2, "boundedness prefactor (default: from the family)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, simulate);
    if (volume->parsed()) return cmd_volume(vol, volume);
    if (certify->parsed()) return cmd_certify(cert, certify);
    if (lemma1->parsed()) return cmd_lemma1(lem, lemma1);
  } catch (const DomainEscape& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEscape;
  } catch (const MissingStructure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
