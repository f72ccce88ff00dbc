#pragma once

// Spectral-gap scaling study: random clique complexes, their threshold
// inverse temperatures, and a log-log power-law fit of beta_threshold
// against the spectral gap.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tqtda/complex.hpp"
#include "tqtda/error.hpp"
#include "tqtda/homology.hpp"
#include "tqtda/rng.hpp"
#include "tqtda/thermal.hpp"

namespace tqtda {

struct ScalingRecord {
  std::size_t instance_id = 0;
  std::uint64_t seed = 0;
  int k = 0;
  double edge_prob = 0.0;
  std::size_t num_simplices = 0;
  double delta_gap = 0.0;
  std::size_t betti = 0;
  double beta_threshold = 0.0;

  bool operator==(const ScalingRecord&) const = default;
};

struct ScalingConfig {
  std::size_t n = 10;
  std::vector<int> ks{1, 2, 3, 4};
  std::size_t instances = 200;
  double criterion = kDefaultCriterion;
  double edge_prob_lo = 0.3;
  double edge_prob_hi = 0.9;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ScalingRun {
  std::vector<ScalingRecord> records;
  std::size_t rejected_empty = 0;      // S_k empty
  std::size_t rejected_zero_gap = 0;   // all-zero Laplacian
};

enum class Rejection { none, empty, zero_gap };

/// Record for one (complex, k) pair, or the reason it is rejected.
inline std::pair<Rejection, ScalingRecord> evaluate_instance(const SimplicialComplex& cx, int k, double criterion) {
  ScalingRecord r;
  r.k = k;
  if (cx.count(k) == 0) return {Rejection::empty, r};
  auto spec = spectrum(combinatorial_laplacian(cx, k), false);
  if (spec.kernel_dim == spec.dim()) return {Rejection::zero_gap, r};
  r.num_simplices = spec.dim();
  r.delta_gap = spectral_gap(spec);
  r.betti = betti_exact_kernel(spec);
  r.beta_threshold = beta_threshold(spec, criterion);
  return {Rejection::none, r};
}

/// Instance i draws its edge probability and complex from derive_seed(master, i),
/// so records do not depend on thread count or scheduling.
inline ScalingRun scaling_experiment(const ScalingConfig& cfg) {
  if (cfg.instances < 1) throw InvalidInput("instances must be >= 1");
  if (cfg.n < 1) throw InvalidInput("n must be >= 1");
  if (!(cfg.edge_prob_lo >= 0.0 && cfg.edge_prob_lo <= cfg.edge_prob_hi && cfg.edge_prob_hi <= 1.0))
    throw InvalidInput("edge probability range must satisfy 0 <= lo <= hi <= 1");
  if (cfg.ks.empty()) throw InvalidInput("no k values requested");
  for (int k : cfg.ks)
    if (k < 0) throw InvalidInput("k must be non-negative");
  const int top = *std::max_element(cfg.ks.begin(), cfg.ks.end()) + 1;

  struct Slot {
    std::vector<ScalingRecord> records;
    std::size_t empty = 0, zero = 0;
  };
  std::vector<Slot> slots(cfg.instances);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.instances; i = next++) {
      const auto seed = derive_seed(cfg.master_seed, i);
      std::mt19937_64 gen(seed);
      const double p = cfg.edge_prob_lo + (cfg.edge_prob_hi - cfg.edge_prob_lo) * uniform01(gen);
      const auto cx = random_complex(cfg.n, p, top, gen());
      for (int k : cfg.ks) {
        auto [why, rec] = evaluate_instance(cx, k, cfg.criterion);
        if (why == Rejection::empty) {
          ++slots[i].empty;
          continue;
        }
        if (why == Rejection::zero_gap) {
          ++slots[i].zero;
          continue;
        }
        rec.instance_id = i;
        rec.seed = seed;
        rec.edge_prob = p;
        slots[i].records.push_back(rec);
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.instances));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  ScalingRun run;
  for (auto& s : slots) {
    run.records.insert(run.records.end(), s.records.begin(), s.records.end());
    run.rejected_empty += s.empty;
    run.rejected_zero_gap += s.zero;
  }
  return run;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

struct PowerLawFit {
  LineFit pooled;
  std::map<int, LineFit> per_k;
};

inline constexpr std::size_t kMinFitPoints = 10;

/// Ordinary least squares of y on x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = x.size();
  if (n < kMinFitPoints) throw Undefined("power-law fit needs at least 10 points, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Undefined("power-law fit needs at least two distinct gaps");
  LineFit f;
  f.n_points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return f;
}

inline LineFit fit_log_log(const std::vector<ScalingRecord>& records) {
  std::vector<double> x, y;
  x.reserve(records.size());
  y.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.delta_gap > 0.0) || !(r.beta_threshold > 0.0))
      throw InvalidInput("log-log fit needs positive delta_gap and beta_threshold");
    x.push_back(std::log(r.delta_gap));
    y.push_back(std::log(r.beta_threshold));
  }
  return fit_line(x, y);
}

/// Pooled fit, plus one per k when group_by_k is set (groups below 10 points are skipped).
inline PowerLawFit fit_power_law(const std::vector<ScalingRecord>& records, bool group_by_k) {
  PowerLawFit fit;
  fit.pooled = fit_log_log(records);
  if (group_by_k) {
    std::map<int, std::vector<ScalingRecord>> groups;
    for (const auto& r : records) groups[r.k].push_back(r);
    for (const auto& [k, g] : groups)
      if (g.size() >= kMinFitPoints) fit.per_k[k] = fit_log_log(g);
  }
  return fit;
}

namespace detail {
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace detail

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidInput("spearman needs two equal-length samples");
  auto ra = detail::ranks(a), rb = detail::ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

inline double gap_threshold_spearman(const std::vector<ScalingRecord>& records) {
  std::vector<double> g, b;
  for (const auto& r : records) {
    g.push_back(r.delta_gap);
    b.push_back(r.beta_threshold);
  }
  return spearman(g, b);
}

inline constexpr const char* kScalingCsvHeader =
    "instance_id,seed,k,edge_prob,num_simplices,delta_gap,betti,beta_threshold";

inline void write_scaling_csv(std::ostream& out, const std::vector<ScalingRecord>& records) {
  out << kScalingCsvHeader << '\n';
  out.precision(17);
  for (const auto& r : records)
    out << r.instance_id << ',' << r.seed << ',' << r.k << ',' << r.edge_prob << ',' << r.num_simplices << ','
        << r.delta_gap << ',' << r.betti << ',' << r.beta_threshold << '\n';
}

inline nlohmann::json to_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r_squared}, {"n", f.n_points}};
}

inline nlohmann::json to_json(const PowerLawFit& fit) {
  nlohmann::json per_k = nlohmann::json::object();
  for (const auto& [k, f] : fit.per_k) per_k[std::to_string(k)] = to_json(f);
  return {{"pooled", to_json(fit.pooled)}, {"per_k", per_k}};
}

}  // namespace tqtda
