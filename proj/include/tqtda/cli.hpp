#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid input or flags,
// 3 numerical failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqtda/complex.hpp"
#include "tqtda/discriminant.hpp"
#include "tqtda/error.hpp"
#include "tqtda/experiments.hpp"
#include "tqtda/homology.hpp"
#include "tqtda/qswap.hpp"
#include "tqtda/thermal.hpp"
#include "tqtda/version.hpp"

namespace tqtda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string subcommand;
  std::string input;  // points CSV or complex JSON
  std::string out;
  std::string fit_out;
  int k = 1;
  std::string method = "exact";
  std::optional<double> beta;
  double beta_min = 0.01;
  double beta_max = 10.0;
  std::size_t beta_steps = 100;
  double criterion = kDefaultCriterion;
  double guard = kDefaultGuard;
  std::int64_t shots = 1'000'000;
  std::uint64_t seed = 0;
  int grid_m = 32;
  std::optional<double> sigma_t;
  std::size_t anneal_steps = 8;
  std::string hamiltonian;  // "z" selects the single-qubit test Hamiltonian
  std::string metric = "euclidean";
  double epsilon = 1.0;
  int max_dim = 2;
  std::size_t n = 10;
  double edge_prob = 0.5;
  std::vector<int> ks{1, 2, 3, 4};
  std::size_t instances = 200;
  double edge_prob_lo = 0.3;
  double edge_prob_hi = 0.9;
  unsigned threads = 0;
};

inline nlohmann::json meta(const RunConfig& c) {
  nlohmann::json flags = {{"input", c.input},
                          {"k", c.k},
                          {"method", c.method},
                          {"beta", c.beta ? nlohmann::json(*c.beta) : nlohmann::json(nullptr)},
                          {"beta_min", c.beta_min},
                          {"beta_max", c.beta_max},
                          {"beta_steps", c.beta_steps},
                          {"criterion", c.criterion},
                          {"guard", c.guard},
                          {"shots", c.shots},
                          {"grid_m", c.grid_m},
                          {"sigma_t", c.sigma_t ? nlohmann::json(*c.sigma_t) : nlohmann::json(nullptr)},
                          {"anneal_steps", c.anneal_steps},
                          {"hamiltonian", c.hamiltonian},
                          {"metric", c.metric},
                          {"epsilon", c.epsilon},
                          {"max_dim", c.max_dim},
                          {"n", c.n},
                          {"edge_prob", c.edge_prob},
                          {"ks", c.ks},
                          {"instances", c.instances},
                          {"edge_prob_lo", c.edge_prob_lo},
                          {"edge_prob_hi", c.edge_prob_hi},
                          {"kernel_rel_tol", kKernelRelTol}};
  return {{"version", kVersion}, {"subcommand", c.subcommand}, {"seed", c.seed}, {"flags", flags}};
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  if (path.empty()) throw InvalidInput("--out is required for this subcommand");
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  return f;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

inline void print_summary(const SimplicialComplex& cx, std::ostream& os) {
  os << "n_vertices=" << cx.n_vertices();
  for (int k = 0; k <= cx.max_dim(); ++k) os << " |S_" << k << "|=" << cx.count(k);
  os << '\n';
}

inline Spectrum laplacian_spectrum(const SimplicialComplex& cx, int k, bool vectors) {
  if (k < 0 || cx.count(k) == 0)
    throw InvalidInput("k=" + std::to_string(k) + " is out of range: the complex has no " + std::to_string(k) +
                       "-simplices");
  return spectrum(combinatorial_laplacian(cx, k), vectors);
}

/// Explicit --beta, else 4 x threshold; an all-zero spectrum is already
/// thermal so beta = 0 is used.
inline double choose_beta(const RunConfig& c, const Spectrum& s, nlohmann::json& info) {
  if (c.beta) {
    if (!(*c.beta >= 0.0)) throw InvalidInput("--beta must be non-negative");
    info["beta_source"] = "flag";
    return *c.beta;
  }
  try {
    const double th = beta_threshold(s, c.criterion);
    info["beta_threshold"] = th;
    info["beta_source"] = "4x_threshold";
    return 4.0 * th;
  } catch (const Undefined&) {
    info["beta_threshold"] = nullptr;
    info["beta_source"] = "zero_spectrum";
    return 0.0;
  }
}

}  // namespace detail

inline int cmd_build_complex(const RunConfig& c, std::ostream& os) {
  auto cloud = load_point_cloud(c.input);
  auto cx = build_clique_complex(cloud, parse_metric(c.metric), c.epsilon, c.max_dim);
  auto j = to_json(cx);
  j["meta"] = meta(c);
  detail::write_json(c.out, j);
  detail::print_summary(cx, os);
  return kExitOk;
}

inline int cmd_random_complex(const RunConfig& c, std::ostream& os) {
  auto cx = random_complex(c.n, c.edge_prob, c.max_dim, c.seed);
  auto j = to_json(cx);
  j["meta"] = meta(c);
  detail::write_json(c.out, j);
  detail::print_summary(cx, os);
  return kExitOk;
}

inline int cmd_betti(const RunConfig& c, std::ostream& os) {
  auto cx = load_complex(c.input);
  nlohmann::json j = {{"method", c.method}, {"k", c.k}};
  if (c.method == "exact") {
    auto s = detail::laplacian_spectrum(cx, c.k, false);
    auto ranks = betti_exact_rank(cx, c.k);
    const auto kernel = betti_exact_kernel(s);
    j["num_simplices"] = s.dim();
    j["betti_kernel"] = kernel;
    j["betti_rank"] = ranks.betti;
    j["dim_ker_dk"] = ranks.dim_ker_dk;
    j["rank_dk1"] = ranks.rank_dk1;
    j["agree"] = kernel == ranks.betti;
    j["betti"] = kernel;
    j["tol_kernel"] = s.tol;
  } else if (c.method == "thermal") {
    auto s = detail::laplacian_spectrum(cx, c.k, false);
    const double beta = detail::choose_beta(c, s, j);
    auto e = betti_thermal(s, beta, {c.guard, c.criterion});
    j["num_simplices"] = s.dim();
    j["estimate"] = to_json(e);
    j["betti"] = e.betti_floor;
  } else if (c.method == "swap") {
    if (c.shots < 1) throw InvalidInput("--shots must be >= 1");
    auto s = detail::laplacian_spectrum(cx, c.k, true);
    const double beta = detail::choose_beta(c, s, j);
    auto r = betti_swap(s, beta, c.shots, c.seed, {{c.guard, c.criterion}});
    j["num_simplices"] = s.dim();
    j["swap"] = to_json(r);
    j["betti"] = r.estimate.betti_floor;
  } else {
    throw InvalidInput("unknown method '" + c.method + "' (expected exact, thermal or swap)");
  }
  j["meta"] = meta(c);
  if (c.out.empty())
    os << j.dump(2) << '\n';
  else
    detail::write_json(c.out, j);
  return kExitOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& os) {
  auto cx = load_complex(c.input);
  auto s = detail::laplacian_spectrum(cx, c.k, false);
  auto grid = log_grid(c.beta_min, c.beta_max, c.beta_steps);
  auto r = sweep(s, grid, {c.guard, c.criterion});
  auto f = detail::open_out(c.out);
  write_sweep_csv(f, r);
  nlohmann::json summary = {{"k", c.k}, {"num_simplices", s.dim()}, {"kernel_dim", s.kernel_dim}};
  summary["beta_threshold"] = r.beta_threshold ? nlohmann::json(*r.beta_threshold) : nlohmann::json(nullptr);
  if (!r.beta_threshold) std::cerr << "warning: all-zero Laplacian, no threshold inverse temperature\n";
  summary["meta"] = meta(c);
  os << summary.dump() << '\n';
  return kExitOk;
}

inline int cmd_scaling(const RunConfig& c, std::ostream& os) {
  if (c.n < 2) throw InvalidInput("--n must be >= 2 for the scaling study");
  ScalingConfig sc;
  sc.n = c.n;
  sc.ks = c.ks;
  sc.instances = c.instances;
  sc.criterion = c.criterion;
  sc.edge_prob_lo = c.edge_prob_lo;
  sc.edge_prob_hi = c.edge_prob_hi;
  sc.master_seed = c.seed;
  sc.threads = c.threads;
  auto run = scaling_experiment(sc);
  {
    auto f = detail::open_out(c.out);
    write_scaling_csv(f, run.records);
  }
  nlohmann::json j;
  try {
    j = to_json(fit_power_law(run.records, true));
    j["spearman"] = gap_threshold_spearman(run.records);
  } catch (const Undefined& e) {
    std::cerr << "warning: fit withheld: " << e.what() << '\n';
    j = {{"pooled", nullptr}, {"per_k", nlohmann::json::object()}, {"withheld", e.what()}};
  }
  j["records"] = run.records.size();
  j["rejected"] = {{"empty", run.rejected_empty}, {"zero_gap", run.rejected_zero_gap}};
  j["meta"] = meta(c);
  detail::write_json(c.fit_out.empty() ? c.out + ".fit.json" : c.fit_out, j);
  os << "records=" << run.records.size() << " rejected_empty=" << run.rejected_empty
     << " rejected_zero_gap=" << run.rejected_zero_gap << '\n';
  return kExitOk;
}

inline int cmd_discriminant_check(const RunConfig& c, std::ostream& os) {
  Eigen::MatrixXcd H;
  if (c.hamiltonian == "z") {
    H = Eigen::MatrixXcd::Zero(2, 2);
    H(0, 0) = 1.0;
    H(1, 1) = -1.0;
  } else if (c.hamiltonian.empty()) {
    auto cx = load_complex(c.input);
    if (c.k < 0 || cx.count(c.k) == 0) throw InvalidInput("k is out of range for this complex");
    H = pad_hamiltonian(combinatorial_laplacian(cx, c.k).matrix);
  } else {
    throw InvalidInput("unknown --hamiltonian '" + c.hamiltonian + "'");
  }
  if (H.rows() * H.rows() > kMaxDiscriminantDim)
    throw InvalidInput("discriminant dimension " + std::to_string(H.rows() * H.rows()) + " exceeds the cap of " +
                       std::to_string(kMaxDiscriminantDim));
  const double target = c.beta.value_or(1.0);
  if (!(target >= 0.0)) throw InvalidInput("--beta must be non-negative");
  if (c.anneal_steps < 1) throw InvalidInput("--anneal-steps must be >= 1");
  std::vector<double> schedule{0.0};
  if (target > 0.0)
    for (std::size_t i = 1; i <= c.anneal_steps; ++i)
      schedule.push_back(target * static_cast<double>(i) / static_cast<double>(c.anneal_steps));

  auto model = build_discriminant(H, c.grid_m, target, c.sigma_t);
  auto top = top_eigenvector(model);
  auto path = annealing_path(H, c.grid_m, schedule, c.sigma_t);
  auto beta0 = top_eigenvector(build_discriminant(H, c.grid_m, 0.0, c.sigma_t));

  nlohmann::json j;
  j["dimension"] = model.D.rows();
  j["qubits"] = model.jumps.qubits;
  j["grid"] = {{"M", model.grid.M}, {"omega0", model.grid.omega0}, {"t0", model.grid.t0}};
  j["sigma_t"] = model.window.sigma_t;
  j["beta"] = target;
  j["top_eigenvalue"] = top.eigenvalue;
  j["max_eigenvalue_D"] = top.max_eigenvalue_d;
  j["fidelity"] = top.fidelity;
  j["fidelity_half_beta"] = top.fidelity_half;
  j["beta0_fidelity"] = beta0.fidelity;
  j["hermiticity_error"] = model.hermiticity_error();
  j["parseval_residual"] = parseval_residual(model);
  j["annealing"] = to_json(path);
  j["meta"] = meta(c);
  detail::write_json(c.out, j);
  os << "fidelity=" << top.fidelity << " beta0_fidelity=" << beta0.fidelity << '\n';
  return kExitOk;
}

/// Exit code and message for an exception escaping a subcommand.
inline int report_failure(std::exception_ptr p, std::ostream& err) {
  try {
    std::rethrow_exception(p);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Undefined& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (...) {
    err << "numerical failure: unknown error\n";
    return kExitNumerical;
  }
}

inline int dispatch(const RunConfig& c, std::ostream& os) {
  if (c.subcommand == "build-complex") return cmd_build_complex(c, os);
  if (c.subcommand == "random-complex") return cmd_random_complex(c, os);
  if (c.subcommand == "betti") return cmd_betti(c, os);
  if (c.subcommand == "sweep") return cmd_sweep(c, os);
  if (c.subcommand == "scaling") return cmd_scaling(c, os);
  if (c.subcommand == "discriminant-check") return cmd_discriminant_check(c, os);
  throw InvalidInput("unknown subcommand '" + c.subcommand + "'");
}

/// Parses argv and runs one subcommand; never throws.
inline int run(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"thermal estimation of Betti numbers"};
  app.require_subcommand(1);
  auto k_opt = [&](CLI::App* s) { s->add_option("--k", c.k, "Simplex dimension")->check(CLI::NonNegativeNumber); };
  auto out_opt = [&](CLI::App* s) { s->add_option("--out", c.out, "Output file")->required(); };

  auto* build = app.add_subcommand("build-complex", "Clique complex of a point cloud");
  build->add_option("--points", c.input, "Point-cloud CSV")->required();
  build->add_option("--metric", c.metric, "euclidean | manhattan | chebyshev");
  build->add_option("--epsilon", c.epsilon, "Filtration distance")->required();
  build->add_option("--max-dim", c.max_dim, "Largest simplex dimension");
  out_opt(build);

  auto* rnd = app.add_subcommand("random-complex", "Erdos-Renyi clique complex");
  rnd->add_option("--n", c.n, "Vertex count")->required();
  rnd->add_option("--edge-prob", c.edge_prob, "Edge probability");
  rnd->add_option("--max-dim", c.max_dim, "Largest simplex dimension");
  rnd->add_option("--seed", c.seed, "Seed");
  out_opt(rnd);

  auto* betti = app.add_subcommand("betti", "Betti number by exact, thermal or swap method");
  betti->add_option("--complex", c.input, "Complex JSON")->required();
  k_opt(betti);
  betti->add_option("--method", c.method, "exact | thermal | swap");
  betti->add_option("--beta", c.beta, "Inverse temperature (default 4x threshold)");
  betti->add_option("--criterion", c.criterion, "Cooling-rate stopping criterion");
  betti->add_option("--guard", c.guard, "Floor guard");
  betti->add_option("--shots", c.shots, "SWAP-test shots");
  betti->add_option("--seed", c.seed, "Sampling seed");
  betti->add_option("--out", c.out, "Result JSON (stdout when omitted)");

  auto* sw = app.add_subcommand("sweep", "Thermal estimates over a log-spaced beta grid");
  sw->add_option("--complex", c.input, "Complex JSON")->required();
  k_opt(sw);
  sw->add_option("--beta-min", c.beta_min, "Smallest beta");
  sw->add_option("--beta-max", c.beta_max, "Largest beta");
  sw->add_option("--beta-steps", c.beta_steps, "Grid points");
  sw->add_option("--criterion", c.criterion, "Cooling-rate stopping criterion");
  sw->add_option("--guard", c.guard, "Floor guard");
  out_opt(sw);

  auto* sc = app.add_subcommand("scaling", "Threshold inverse temperature vs spectral gap");
  sc->add_option("--n", c.n, "Vertices per complex");
  sc->add_option("--ks", c.ks, "Simplex dimensions")->delimiter(',');
  sc->add_option("--instances", c.instances, "Random complexes");
  sc->add_option("--criterion", c.criterion, "Cooling-rate stopping criterion");
  sc->add_option("--edge-prob-lo", c.edge_prob_lo, "Lower edge probability");
  sc->add_option("--edge-prob-hi", c.edge_prob_hi, "Upper edge probability");
  sc->add_option("--seed", c.seed, "Master seed");
  sc->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  sc->add_option("--fit-out", c.fit_out, "Fit JSON (default <out>.fit.json)");
  out_opt(sc);

  auto* dc = app.add_subcommand("discriminant-check", "Top eigenvector of the discriminant proxy");
  auto* dc_complex = dc->add_option("--complex", c.input, "Complex JSON");
  auto* dc_h = dc->add_option("--hamiltonian", c.hamiltonian, "Built-in Hamiltonian: z");
  dc_complex->excludes(dc_h);
  dc_h->excludes(dc_complex);
  k_opt(dc);
  dc->add_option("--beta", c.beta, "Target inverse temperature (default 1)");
  dc->add_option("--M", c.grid_m, "Frequency grid points (even, >= 4)");
  dc->add_option("--sigma-t", c.sigma_t, "Gaussian window width");
  dc->add_option("--anneal-steps", c.anneal_steps, "Annealing steps from beta = 0");
  out_opt(dc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    os << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (c.subcommand == "discriminant-check" && c.input.empty() && c.hamiltonian.empty()) {
    err << "error: discriminant-check needs --complex or --hamiltonian\n";
    return kExitInvalid;
  }
  try {
    return dispatch(c, os);
  } catch (...) {
    return report_failure(std::current_exception(), err);
  }
}

}  // namespace tqtda::cli
