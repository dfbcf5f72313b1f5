#ifndef LANDSCAPE_PROBE_HPP
#define LANDSCAPE_PROBE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "landscape/parallel.hpp"
#include "landscape/rng.hpp"

namespace landscape {

// An evaluatable objective O(theta). Deterministic evaluators ignore the
// seed; stochastic evaluators must be deterministic per (theta, seed).
struct ObjectiveHandle {
  int dimension = 0;
  std::function<double(const Eigen::VectorXd&, std::uint64_t seed)> evaluate;
  bool stochastic = false;

  double operator()(const Eigen::VectorXd& theta, std::uint64_t seed = 0) const {
    return evaluate(theta, seed);
  }
};

struct ProbeConfig {
  double alpha = 0.1;       // perturbation radius
  int num_directions = 1000;
  std::uint64_t base_seed = 0;
  bool common_random_numbers = true;  // share the eval seed across a Delta pair
  int noise_reps = 30;                // re-evaluations of O(theta0) for the band
  int jobs = 1;

  // Classification tolerances. The "all d" rules are applied as fractions
  // since only finitely many directions are sampled.
  double linear_frac = 0.95;
  double flat_frac = 0.95;
  double flat_flag_frac = 0.05;      // flag flat directions at a local optimum
  double flat_curv_rel_tol = 0.01;   // |c_d| below this fraction of max|c_d|

  void validate() const {
    if (alpha <= 0.0) throw std::invalid_argument("probe config: alpha must be > 0");
    if (num_directions < 1)
      throw std::invalid_argument("probe config: need at least one direction");
    if (noise_reps < 2)
      throw std::invalid_argument("probe config: noise_reps must be >= 2");
  }
};

struct PerturbationSample {
  int direction_index = 0;
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double grad_projection = 0.0;       // (d+ - d-) / (2 alpha)
  double curvature_projection = 0.0;  // (d+ + d-) / alpha^2
};

enum class PointClass { LocalMaximum, LocalMinimum, Saddle, Linear, Flat, Mixed };

inline const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::LocalMaximum: return "LocalMaximum";
    case PointClass::LocalMinimum: return "LocalMinimum";
    case PointClass::Saddle: return "Saddle";
    case PointClass::Linear: return "Linear";
    case PointClass::Flat: return "Flat";
    case PointClass::Mixed: return "Mixed";
  }
  return "Unknown";
}

struct SpectrumSummary {
  double min = 0.0;
  double max = 0.0;
  double q05 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q95 = 0.0;
  std::vector<double> bin_edges;  // histogram over [min, max]
  std::vector<int> bin_counts;
};

struct ProbeReport {
  double base_value = 0.0;
  std::vector<PerturbationSample> samples;
  double noise_band_lower = 0.0;  // band around zero change, mean-centered
  double noise_band_upper = 0.0;
  PointClass classification = PointClass::Mixed;
  bool flat_directions_flag = false;
  SpectrumSummary spectrum;
  double frac_plus_above_band = 0.0;
  double frac_minus_above_band = 0.0;
  double frac_negative_curvature = 0.0;  // beyond the band's curvature scale
  int nonfinite_count = 0;
};

inline double sample_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return xs.size() > 1 ? std::sqrt(var / (xs.size() - 1)) : 0.0;
}

inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  double pos = q * (xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  double frac = pos - lo;
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

inline SpectrumSummary curvature_spectrum(const std::vector<PerturbationSample>& samples,
                                          int num_bins = 30) {
  if (samples.size() < 2)
    throw std::invalid_argument("curvature_spectrum: need at least two samples");
  std::vector<double> c;
  c.reserve(samples.size());
  for (const auto& s : samples) c.push_back(s.curvature_projection);

  SpectrumSummary out;
  out.min = *std::min_element(c.begin(), c.end());
  out.max = *std::max_element(c.begin(), c.end());
  out.q05 = quantile(c, 0.05);
  out.q25 = quantile(c, 0.25);
  out.median = quantile(c, 0.5);
  out.q75 = quantile(c, 0.75);
  out.q95 = quantile(c, 0.95);

  double width = out.max - out.min;
  out.bin_edges.resize(num_bins + 1);
  out.bin_counts.assign(num_bins, 0);
  for (int b = 0; b <= num_bins; ++b)
    out.bin_edges[b] = out.min + width * b / num_bins;
  for (double x : c) {
    int b = width > 0.0 ? static_cast<int>((x - out.min) / width * num_bins) : 0;
    out.bin_counts[std::clamp(b, 0, num_bins - 1)]++;
  }
  return out;
}

// Classification per the perturbation rules, judged against the noise band:
// deltas "above"/"below" the band count as real changes, deltas inside it do
// not. half_band is the band half-width.
inline PointClass classify_samples(const std::vector<PerturbationSample>& samples,
                                   double half_band, const ProbeConfig& config,
                                   bool* flat_flag_out = nullptr) {
  const int K = static_cast<int>(samples.size());
  if (K == 0) throw std::invalid_argument("classify: no samples");

  int n_above = 0, n_below = 0, n_within = 0, n_linear = 0;
  int n_pair_pos = 0, n_pair_neg = 0;
  for (const auto& s : samples) {
    for (double d : {s.delta_plus, s.delta_minus}) {
      if (d > half_band) ++n_above;
      else if (d < -half_band) ++n_below;
      else ++n_within;
    }
    if (std::abs(s.delta_plus + s.delta_minus) <= 2.0 * half_band) ++n_linear;
    if (s.delta_plus > half_band && s.delta_minus > half_band) ++n_pair_pos;
    if (s.delta_plus < -half_band && s.delta_minus < -half_band) ++n_pair_neg;
  }

  PointClass cls;
  if (n_within >= config.flat_frac * 2 * K) cls = PointClass::Flat;
  else if (n_above == 0) cls = PointClass::LocalMaximum;
  else if (n_below == 0) cls = PointClass::LocalMinimum;
  else if (n_linear >= config.linear_frac * K) cls = PointClass::Linear;
  else if (n_pair_pos > 0 && n_pair_neg > 0) cls = PointClass::Saddle;
  else cls = PointClass::Mixed;

  if (flat_flag_out != nullptr) {
    *flat_flag_out = false;
    if (cls == PointClass::LocalMaximum || cls == PointClass::LocalMinimum) {
      double max_abs_curv = 0.0;
      for (const auto& s : samples)
        max_abs_curv = std::max(max_abs_curv, std::abs(s.curvature_projection));
      int n_flat_dirs = 0;
      for (const auto& s : samples)
        if (std::abs(s.curvature_projection) <= config.flat_curv_rel_tol * max_abs_curv)
          ++n_flat_dirs;
      *flat_flag_out = n_flat_dirs >= config.flat_flag_frac * K;
    }
  }
  return cls;
}

// Re-derives the classification from a report's stored samples and band.
inline PointClass classify_point(const ProbeReport& report, const ProbeConfig& config,
                                 bool* flat_flag_out = nullptr) {
  return classify_samples(report.samples, report.noise_band_upper, config, flat_flag_out);
}

inline std::uint64_t direction_seed(std::uint64_t base, int index) {
  return mix_seed({base, 0x646972ULL, static_cast<std::uint64_t>(index)});
}

// Random symmetric perturbation probe of O around theta0: K unit directions,
// Delta pairs at radius alpha, gradient/curvature projections, noise band
// from repeated base evaluations, classification.
inline ProbeReport probe(const ObjectiveHandle& objective, const Eigen::VectorXd& theta0,
                         const ProbeConfig& config) {
  config.validate();
  if (objective.dimension != theta0.size())
    throw std::invalid_argument("probe: theta dimension mismatch");
  const int K = config.num_directions;
  const int n = objective.dimension;

  ProbeReport report;
  report.base_value = objective(theta0, mix_seed({config.base_seed, 0x62617365ULL}));

  // Noise band: repeated evaluations at theta0 with distinct seeds.
  std::vector<double> base_evals(config.noise_reps);
  parallel_for(config.noise_reps, config.jobs, [&](int m) {
    base_evals[m] =
        objective(theta0, mix_seed({config.base_seed, 0x6e6f6973ULL,
                                    static_cast<std::uint64_t>(m)}));
  });
  double band_std = objective.stochastic ? sample_std(base_evals) : 0.0;
  // Small absolute floor so exact arithmetic noise never flips a rule.
  double half_band =
      std::max(2.0 * band_std, 1e-9 * std::max(1.0, std::abs(report.base_value)));
  report.noise_band_lower = -half_band;
  report.noise_band_upper = half_band;

  struct RawSample {
    double dp = 0.0, dm = 0.0;
    bool finite = true;
  };
  std::vector<RawSample> raw(K);
  parallel_for(K, config.jobs, [&](int k) {
    auto rng = make_stream({config.base_seed, 0x70726f6265ULL,
                            static_cast<std::uint64_t>(k)});
    Eigen::VectorXd d = sample_unit_direction(rng, n);
    std::uint64_t eval_seed = direction_seed(config.base_seed, k);
    double base = objective.stochastic && config.common_random_numbers
                      ? objective(theta0, eval_seed)
                      : report.base_value;
    double plus = objective(theta0 + config.alpha * d, eval_seed);
    double minus = objective(theta0 - config.alpha * d, eval_seed);
    raw[k] = {plus - base, minus - base,
              std::isfinite(plus) && std::isfinite(minus) && std::isfinite(base)};
  });

  report.samples.reserve(K);
  for (int k = 0; k < K; ++k) {
    if (!raw[k].finite) {
      ++report.nonfinite_count;
      continue;
    }
    PerturbationSample s;
    s.direction_index = k;
    s.delta_plus = raw[k].dp;
    s.delta_minus = raw[k].dm;
    s.grad_projection = (s.delta_plus - s.delta_minus) / (2.0 * config.alpha);
    s.curvature_projection = (s.delta_plus + s.delta_minus) / (config.alpha * config.alpha);
    report.samples.push_back(s);
  }
  if (report.samples.empty())
    throw std::runtime_error("probe: every direction evaluated non-finite");

  report.classification =
      classify_samples(report.samples, half_band, config, &report.flat_directions_flag);
  if (report.samples.size() >= 2)
    report.spectrum = curvature_spectrum(report.samples);

  int plus_above = 0, minus_above = 0, curv_neg = 0;
  double curv_band = 2.0 * half_band / (config.alpha * config.alpha);
  for (const auto& s : report.samples) {
    if (s.delta_plus > half_band) ++plus_above;
    if (s.delta_minus > half_band) ++minus_above;
    if (s.curvature_projection < -curv_band) ++curv_neg;
  }
  double ks = static_cast<double>(report.samples.size());
  report.frac_plus_above_band = plus_above / ks;
  report.frac_minus_above_band = minus_above / ks;
  report.frac_negative_curvature = curv_neg / ks;
  return report;
}

// Curvature tracking across checkpoints: per checkpoint, probe and report the
// curvature of the direction whose Delta+ is closest to the 90th percentile
// of Delta+ values (a robust "direction of improvement").
inline std::vector<double> track_curvature(
    const std::vector<Eigen::VectorXd>& checkpoints,
    const std::function<ObjectiveHandle(int checkpoint_index)>& objective_family,
    const ProbeConfig& config) {
  if (checkpoints.empty())
    throw std::invalid_argument("track_curvature: need at least one checkpoint");
  std::vector<double> out(checkpoints.size());
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    ProbeConfig c = config;
    c.base_seed = mix_seed({config.base_seed, 0x747261636bULL, i});
    ProbeReport report = probe(objective_family(static_cast<int>(i)), checkpoints[i], c);
    std::vector<double> dplus;
    dplus.reserve(report.samples.size());
    for (const auto& s : report.samples) dplus.push_back(s.delta_plus);
    double target = quantile(dplus, 0.9);
    const PerturbationSample* best = &report.samples.front();
    for (const auto& s : report.samples)
      if (std::abs(s.delta_plus - target) < std::abs(best->delta_plus - target)) best = &s;
    out[i] = best->curvature_projection;
  }
  return out;
}

}  // namespace landscape

#endif
