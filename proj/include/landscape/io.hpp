#ifndef LANDSCAPE_IO_HPP
#define LANDSCAPE_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "landscape/interpolate.hpp"
#include "landscape/limits.hpp"
#include "landscape/mdp.hpp"
#include "landscape/probe.hpp"
#include "landscape/trace.hpp"

namespace landscape {

using nlohmann::json;

// Shortest round-trippable decimal form, stable across reruns.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- Gridworld spec JSON --------------------------------------------------
// {width, height, start:[r,c], rewards:[{cell:[r,c], value}], step_reward, gamma}

inline GridworldSpec gridworld_from_json(const json& j) {
  GridworldSpec spec;
  spec.width = j.at("width").get<int>();
  spec.height = j.at("height").get<int>();
  spec.start = {j.at("start").at(0).get<int>(), j.at("start").at(1).get<int>()};
  for (const auto& r : j.at("rewards"))
    spec.terminal_rewards.push_back(
        {{r.at("cell").at(0).get<int>(), r.at("cell").at(1).get<int>()},
         r.at("value").get<double>()});
  spec.step_reward = j.value("step_reward", 0.0);
  spec.gamma = j.value("gamma", 0.9);
  spec.validate();
  return spec;
}

inline json gridworld_to_json(const GridworldSpec& spec) {
  json rewards = json::array();
  for (const auto& tr : spec.terminal_rewards)
    rewards.push_back({{"cell", {tr.cell.row, tr.cell.col}}, {"value", tr.value}});
  return {{"width", spec.width},
          {"height", spec.height},
          {"start", {spec.start.row, spec.start.col}},
          {"rewards", rewards},
          {"step_reward", spec.step_reward},
          {"gamma", spec.gamma}};
}

// --- Checkpoints ----------------------------------------------------------
// {policy_kind, dims, sigma, values}

struct Checkpoint {
  std::string policy_kind;  // "softmax_tabular" or "gaussian_linear"
  std::vector<int> dims;
  double sigma = 0.0;
  Eigen::VectorXd values;
};

inline json checkpoint_to_json(const Checkpoint& ckpt) {
  std::vector<double> values(ckpt.values.data(), ckpt.values.data() + ckpt.values.size());
  return {{"policy_kind", ckpt.policy_kind},
          {"dims", ckpt.dims},
          {"sigma", ckpt.sigma},
          {"values", values}};
}

inline Checkpoint checkpoint_from_json(const json& j) {
  Checkpoint ckpt;
  ckpt.policy_kind = j.at("policy_kind").get<std::string>();
  ckpt.dims = j.at("dims").get<std::vector<int>>();
  ckpt.sigma = j.value("sigma", 0.0);
  auto values = j.at("values").get<std::vector<double>>();
  ckpt.values = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  return ckpt;
}

inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_text_file(path, checkpoint_to_json(ckpt).dump(2) + "\n");
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(json::parse(read_text_file(path)));
}

// --- Trace CSV ------------------------------------------------------------

inline std::string train_trace_csv(const TrainTrace& trace, bool reinforce_columns) {
  std::ostringstream out;
  out << "iter,objective_true,objective_aug,tau,grad_norm";
  if (reinforce_columns) out << ",sigma,eval_return_mean,eval_return_std";
  out << "\n";
  for (const auto& rec : trace.records) {
    out << rec.iter << ',' << format_double(rec.objective_true) << ','
        << format_double(rec.objective_aug) << ',' << format_double(rec.tau) << ','
        << format_double(rec.grad_norm);
    if (reinforce_columns) {
      out << ',' << format_double(rec.sigma) << ','
          << (rec.has_eval ? format_double(rec.eval_return_mean) : "") << ','
          << (rec.has_eval ? format_double(rec.eval_return_std) : "");
    }
    out << "\n";
  }
  return out.str();
}

inline std::string probe_csv(const ProbeReport& report) {
  std::ostringstream out;
  out << "direction_index,delta_plus,delta_minus,grad_proj,curvature_proj\n";
  for (const auto& s : report.samples)
    out << s.direction_index << ',' << format_double(s.delta_plus) << ','
        << format_double(s.delta_minus) << ',' << format_double(s.grad_projection)
        << ',' << format_double(s.curvature_projection) << "\n";
  return out.str();
}

inline json probe_summary_json(const ProbeReport& report) {
  json spectrum;
  if (!report.samples.empty()) {
    spectrum = {{"min", report.spectrum.min},     {"max", report.spectrum.max},
                {"q05", report.spectrum.q05},     {"q25", report.spectrum.q25},
                {"median", report.spectrum.median}, {"q75", report.spectrum.q75},
                {"q95", report.spectrum.q95},
                {"bin_edges", report.spectrum.bin_edges},
                {"bin_counts", report.spectrum.bin_counts}};
  }
  return {{"base_value", report.base_value},
          {"classification", to_string(report.classification)},
          {"flat_directions_flag", report.flat_directions_flag},
          {"noise_band", {report.noise_band_lower, report.noise_band_upper}},
          {"spectrum", spectrum},
          {"frac_plus_above_band", report.frac_plus_above_band},
          {"frac_minus_above_band", report.frac_minus_above_band},
          {"frac_negative_curvature", report.frac_negative_curvature},
          {"nonfinite_count", report.nonfinite_count}};
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "coefficient,value,value_stderr\n";
  for (const auto& p : curve)
    out << format_double(p.coefficient) << ',' << format_double(p.value) << ','
        << format_double(p.value_stderr) << "\n";
  return out.str();
}

inline std::string limits_csv(const LimitsReport& report) {
  std::ostringstream out;
  out << "draw,delta_plus_random,delta_minus_random,detected_random,"
         "delta_plus_sgd,delta_minus_sgd,detected_sgd\n";
  for (std::size_t k = 0; k < report.draws.size(); ++k) {
    const auto& d = report.draws[k];
    out << k << ',' << format_double(d.delta_plus_random) << ','
        << format_double(d.delta_minus_random) << ',' << int(d.detected_random) << ','
        << format_double(d.delta_plus_sgd) << ',' << format_double(d.delta_minus_sgd)
        << ',' << int(d.detected_sgd) << "\n";
  }
  return out.str();
}

inline json limits_summary_json(const LimitsReport& report) {
  return {{"config",
           {{"k1", report.config.k1},
            {"k2", report.config.k2},
            {"epsilon", report.config.epsilon},
            {"num_draws", report.config.num_draws},
            {"alpha", report.config.alpha},
            {"seed", report.config.seed}}},
          {"gradient_norm", report.gradient_norm},
          {"frac_random", report.frac_random},
          {"frac_sgd", report.frac_sgd}};
}

// --- Minimal self-contained SVG plots ------------------------------------

namespace svg_detail {

struct Mapper {
  double xmin, xmax, ymin, ymax;
  double width, height, margin;
  double x(double v) const {
    double span = xmax > xmin ? xmax - xmin : 1.0;
    return margin + (v - xmin) / span * (width - 2 * margin);
  }
  double y(double v) const {
    double span = ymax > ymin ? ymax - ymin : 1.0;
    return height - margin - (v - ymin) / span * (height - 2 * margin);
  }
};

inline std::string header(double w, double h) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

}  // namespace svg_detail

// Delta- vs Delta+ scatter with the y = x and y = -x guide diagonals.
inline std::string probe_scatter_svg(const ProbeReport& report) {
  double lim = 1e-12;
  for (const auto& s : report.samples)
    lim = std::max({lim, std::abs(s.delta_plus), std::abs(s.delta_minus)});
  svg_detail::Mapper m{-lim, lim, -lim, lim, 480, 480, 40};

  std::ostringstream out;
  out << svg_detail::header(m.width, m.height);
  out << "<line x1=\"" << m.x(-lim) << "\" y1=\"" << m.y(-lim) << "\" x2=\""
      << m.x(lim) << "\" y2=\"" << m.y(lim)
      << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  out << "<line x1=\"" << m.x(-lim) << "\" y1=\"" << m.y(lim) << "\" x2=\"" << m.x(lim)
      << "\" y2=\"" << m.y(-lim)
      << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& s : report.samples)
    out << "<circle cx=\"" << m.x(s.delta_plus) << "\" cy=\"" << m.y(s.delta_minus)
        << "\" r=\"2\" fill=\"black\" fill-opacity=\"0.45\"/>\n";
  out << "<text x=\"" << m.width / 2 << "\" y=\"" << m.height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">delta_plus</text>\n";
  out << "<text x=\"12\" y=\"" << m.height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 12 "
      << m.height / 2 << ")\">delta_minus</text>\n";
  out << "</svg>\n";
  return out.str();
}

inline std::string curvature_histogram_svg(const ProbeReport& report) {
  const auto& sp = report.spectrum;
  int max_count = 1;
  for (int c : sp.bin_counts) max_count = std::max(max_count, c);
  svg_detail::Mapper m{sp.min, sp.max, 0.0, static_cast<double>(max_count), 480, 320, 40};

  std::ostringstream out;
  out << svg_detail::header(m.width, m.height);
  for (std::size_t b = 0; b < sp.bin_counts.size(); ++b) {
    double x0 = m.x(sp.bin_edges[b]);
    double x1 = m.x(sp.bin_edges[b + 1]);
    double y = m.y(sp.bin_counts[b]);
    out << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << (x1 - x0)
        << "\" height=\"" << (m.y(0) - y) << "\" fill=\"#4477aa\"/>\n";
  }
  out << "<text x=\"" << m.width / 2 << "\" y=\"" << m.height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">curvature projection</text>\n";
  out << "</svg>\n";
  return out.str();
}

inline std::string curve_svg(const std::vector<CurvePoint>& curve) {
  double ymin = curve.front().value, ymax = curve.front().value;
  for (const auto& p : curve) {
    ymin = std::min(ymin, p.value);
    ymax = std::max(ymax, p.value);
  }
  svg_detail::Mapper m{0.0, 1.0, ymin, ymax, 480, 320, 40};

  std::ostringstream out;
  out << svg_detail::header(m.width, m.height);
  out << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : curve) out << m.x(p.coefficient) << ',' << m.y(p.value) << ' ';
  out << "\"/>\n";
  out << "<text x=\"" << m.width / 2 << "\" y=\"" << m.height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">interpolation coefficient</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace landscape

#endif
