// Command-line surface for the landscape toolkit: exact gridworld training,
// REINFORCE on the point-mass environment, perturbation probes, interpolation
// slices, the detection-limits experiment, and curvature tracking.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "landscape/landscape.hpp"

namespace fs = std::filesystem;
using namespace landscape;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

json load_config_file(const std::string& path) {
  if (!fs::exists(path))
    throw std::invalid_argument("config file not found: " + path);
  json j = json::parse(read_text_file(path));
  // Accept a previously emitted manifest directly.
  if (j.contains("config")) return j.at("config");
  return j;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& resolved) {
  write_text_file(out_dir / "manifest.json",
                  json{{"command", command}, {"config", resolved}}.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// Accepts either "(v1,v2,...)" literals or a checkpoint file path.
Eigen::VectorXd parse_theta(const std::string& spec, std::string* policy_kind = nullptr,
                            double* sigma = nullptr) {
  if (!spec.empty() && spec.front() == '(') {
    if (spec.back() != ')')
      throw std::invalid_argument("theta literal must look like (v1,v2,...)");
    std::vector<double> vals;
    std::stringstream ss(spec.substr(1, spec.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (vals.empty()) throw std::invalid_argument("empty theta literal");
    return Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  }
  if (!fs::exists(spec))
    throw std::invalid_argument("checkpoint file not found: " + spec);
  Checkpoint ckpt = load_checkpoint(spec);
  if (policy_kind != nullptr) *policy_kind = ckpt.policy_kind;
  if (sigma != nullptr) *sigma = ckpt.sigma;
  return ckpt.values;
}

GridworldSpec gridworld_spec_from(const std::optional<std::string>& config_path) {
  if (!config_path) return GridworldSpec::two_corner_default();
  json j = load_config_file(*config_path);
  // A train-exact manifest nests the spec under "gridworld".
  if (j.contains("gridworld")) return gridworld_from_json(j.at("gridworld"));
  return gridworld_from_json(j);
}

struct OverrideSet {
  double tau = 0.0;
  double mix = 0.0;
  double sigma = 0.0;
};

OverrideSet parse_override(const std::string& text) {
  OverrideSet o;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value pairs: " + text);
    std::string key = item.substr(0, eq);
    double value = std::stod(item.substr(eq + 1));
    if (key == "tau") o.tau = value;
    else if (key == "mix") o.mix = value;
    else if (key == "sigma") o.sigma = value;
    else throw std::invalid_argument("unknown override key: " + key);
  }
  return o;
}

// --- train-exact ----------------------------------------------------------

int cmd_train_exact(const CLI::App* cmd, const std::optional<std::string>& config_path,
                    int seeds, const std::string& out, ExactTrainConfig base, int jobs) {
  GridworldSpec spec = gridworld_spec_from(config_path);
  // Hyperparameters stored in a manifest apply unless overridden on the
  // command line, so rerunning from an emitted manifest reproduces the run.
  if (config_path) {
    json j = load_config_file(*config_path);
    auto take = [&](const char* flag, const char* key, auto& slot) {
      using T = std::decay_t<decltype(slot)>;
      if (j.contains(key) && cmd->count(flag) == 0) slot = j.at(key).get<T>();
    };
    take("--seeds", "seeds", seeds);
    take("--eta", "eta", base.eta);
    take("--tau0", "tau0", base.tau0);
    take("--tau-decay", "tau_decay", base.tau_decay);
    take("--iters", "iters", base.iters);
    take("--init-scale", "init_scale", base.init_scale);
    take("--seed", "seed", base.seed);
    take("--record-stride", "record_stride", base.record_stride);
    take("--checkpoint-stride", "checkpoint_stride", base.checkpoint_stride);
  }
  TabularMdp mdp = build_gridworld(spec);
  fs::path out_dir = prepare_out_dir(out);

  std::vector<int> suboptimal(seeds, 0);
  std::vector<std::string> traces(seeds);
  std::vector<Eigen::VectorXd> finals(seeds);
  parallel_for(seeds, jobs, [&](int k) {
    ExactTrainConfig cfg = base;
    cfg.seed = mix_seed({base.seed, 0x73656564ULL, static_cast<std::uint64_t>(k)});
    TrainTrace trace = train_exact(mdp, cfg);
    SoftmaxTabularPolicy policy(mdp.num_states, mdp.num_actions, trace.final_theta);
    suboptimal[k] =
        classify_solution(mdp, spec, policy.prob_table()) == SolutionClass::Suboptimal;
    traces[k] = train_trace_csv(trace, false);
    finals[k] = trace.final_theta;
  });

  int n_sub = 0;
  for (int k = 0; k < seeds; ++k) {
    n_sub += suboptimal[k];
    char name[64];
    std::snprintf(name, sizeof(name), "trace_seed%04d.csv", k);
    write_text_file(out_dir / name, traces[k]);
    std::snprintf(name, sizeof(name), "ckpt_seed%04d.json", k);
    save_checkpoint(out_dir / name,
                    {"softmax_tabular", {mdp.num_actions, mdp.num_states}, 0.0,
                     finals[k]});
  }

  json summary = {{"n_seeds", seeds},
                  {"n_suboptimal", n_sub},
                  {"fraction", static_cast<double>(n_sub) / seeds}};
  write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");

  json resolved = {{"gridworld", gridworld_to_json(spec)},
                   {"seeds", seeds},
                   {"eta", base.eta},
                   {"tau0", base.tau0},
                   {"tau_decay", base.tau_decay},
                   {"iters", base.iters},
                   {"init_scale", base.init_scale},
                   {"seed", base.seed},
                   {"record_stride", base.record_stride},
                   {"checkpoint_stride", base.checkpoint_stride}};
  write_manifest(out_dir, "train-exact", resolved);
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

// --- train-reinforce ------------------------------------------------------

int cmd_train_reinforce(const std::string& out, const ReinforceConfig& cfg) {
  PointMassEnv env;
  fs::path out_dir = prepare_out_dir(out);
  TrainTrace trace = train_reinforce(env, cfg);
  write_text_file(out_dir / "trace.csv", train_trace_csv(trace, true));
  for (const auto& [iter, theta] : trace.checkpoints) {
    char name[64];
    std::snprintf(name, sizeof(name), "ckpt_%06d.json", iter);
    save_checkpoint(out_dir / name,
                    {"gaussian_linear",
                     {PointMassEnv::action_dim, PointMassEnv::state_dim},
                     cfg.sigma, theta});
  }
  save_checkpoint(out_dir / "ckpt_final.json",
                  {"gaussian_linear",
                   {PointMassEnv::action_dim, PointMassEnv::state_dim},
                   cfg.sigma, trace.final_theta});

  json resolved = {{"batch_size", cfg.batch_size}, {"eta", cfg.eta},
                   {"sigma", cfg.sigma},           {"gamma", cfg.gamma},
                   {"iters", cfg.iters},           {"eval_stride", cfg.eval_stride},
                   {"eval_episodes", cfg.eval_episodes},
                   {"seed", cfg.seed},
                   {"checkpoint_stride", cfg.checkpoint_stride}};
  write_manifest(out_dir, "train-reinforce", resolved);
  return kExitOk;
}

// --- probe ----------------------------------------------------------------

int cmd_probe(const std::string& objective_name, const std::string& theta_spec,
              const std::optional<std::string>& config_path, double tau, double mix,
              double sigma, double gamma, int rollouts, const std::string& out,
              bool emit_svg, ProbeConfig cfg) {
  Eigen::VectorXd theta = parse_theta(theta_spec);

  // Objects backing the ObjectiveHandle must outlive the probe call.
  std::optional<TabularMdp> mdp;
  std::optional<PointMassEnv> env;
  ObjectiveHandle objective;
  if (objective_name.rfind("analytic:", 0) == 0) {
    objective = analytic_objective(objective_name.substr(9));
  } else if (objective_name == "gridworld") {
    mdp = build_gridworld(gridworld_spec_from(config_path));
    objective = gridworld_objective(*mdp, tau, mix);
  } else if (objective_name == "pointmass") {
    env.emplace();
    objective = pointmass_objective(*env, sigma, gamma, rollouts);
  } else {
    throw std::invalid_argument("unknown objective: " + objective_name);
  }
  if (objective.dimension != theta.size())
    throw std::invalid_argument("theta has dimension " + std::to_string(theta.size()) +
                                " but objective expects " +
                                std::to_string(objective.dimension));

  ProbeReport report = probe(objective, theta, cfg);
  fs::path out_dir = prepare_out_dir(out);
  write_text_file(out_dir / "probe.csv", probe_csv(report));
  write_text_file(out_dir / "summary.json", probe_summary_json(report).dump(2) + "\n");
  if (emit_svg) {
    write_text_file(out_dir / "scatter.svg", probe_scatter_svg(report));
    write_text_file(out_dir / "curvature_hist.svg", curvature_histogram_svg(report));
  }

  json resolved = {{"objective", objective_name},
                   {"alpha", cfg.alpha},
                   {"dirs", cfg.num_directions},
                   {"seed", cfg.base_seed},
                   {"tau", tau},
                   {"mix", mix},
                   {"sigma", sigma},
                   {"gamma", gamma},
                   {"rollouts", rollouts},
                   {"noise_reps", cfg.noise_reps},
                   {"crn", cfg.common_random_numbers}};
  write_manifest(out_dir, "probe", resolved);
  std::cout << to_string(report.classification)
            << (report.flat_directions_flag ? " (flat directions)" : "") << "\n";
  return kExitOk;
}

// --- interpolate ----------------------------------------------------------

int cmd_interpolate(const std::string& ckpt_a, const std::string& ckpt_b,
                    const std::optional<std::string>& config_path,
                    const std::vector<std::string>& override_texts, int points,
                    int rollouts, double gamma, std::uint64_t seed, int jobs,
                    const std::string& out, bool emit_svg) {
  std::string kind_a, kind_b;
  Eigen::VectorXd theta0 = parse_theta(ckpt_a, &kind_a);
  Eigen::VectorXd theta1 = parse_theta(ckpt_b, &kind_b);
  if (kind_a != kind_b)
    throw std::invalid_argument("checkpoints hold different policy kinds");

  std::vector<OverrideSet> overrides;
  for (const auto& text : override_texts) overrides.push_back(parse_override(text));
  if (overrides.empty()) overrides.push_back({});

  std::optional<TabularMdp> mdp;
  std::optional<PointMassEnv> env;
  if (kind_a == "softmax_tabular" || kind_a.empty())
    mdp = build_gridworld(gridworld_spec_from(config_path));
  else if (kind_a == "gaussian_linear")
    env.emplace();
  else
    throw std::invalid_argument("unknown policy kind in checkpoint: " + kind_a);

  fs::path out_dir = prepare_out_dir(out);
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    InterpolationConfig cfg;
    cfg.num_points = points;
    cfg.rollouts = rollouts;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.tau = overrides[i].tau;
    cfg.mix = overrides[i].mix;
    cfg.sigma = overrides[i].sigma;
    auto family = mdp ? gridworld_family(*mdp, cfg) : pointmass_family(*env, gamma, cfg);
    auto curve = interpolate(family, theta0, theta1, cfg);
    char name[64];
    std::snprintf(name, sizeof(name), "interp_%02zu.csv", i);
    write_text_file(out_dir / name, curve_csv(curve));
    if (emit_svg) {
      std::snprintf(name, sizeof(name), "interp_%02zu.svg", i);
      write_text_file(out_dir / name, curve_svg(curve));
    }
  }

  json ov = json::array();
  for (const auto& o : overrides)
    ov.push_back({{"tau", o.tau}, {"mix", o.mix}, {"sigma", o.sigma}});
  write_manifest(out_dir, "interpolate",
                 {{"points", points},
                  {"rollouts", rollouts},
                  {"gamma", gamma},
                  {"seed", seed},
                  {"overrides", ov}});
  return kExitOk;
}

// --- limits ---------------------------------------------------------------

int cmd_limits(const LimitsConfig& cfg, const std::string& out) {
  LimitsReport report = run_limits_experiment(cfg);
  fs::path out_dir = prepare_out_dir(out);
  write_text_file(out_dir / "limits.json", limits_summary_json(report).dump(2) + "\n");
  write_text_file(out_dir / "limits.csv", limits_csv(report));
  write_manifest(out_dir, "limits", limits_summary_json(report)["config"]);
  std::cout << "frac_random=" << format_double(report.frac_random)
            << " frac_sgd=" << format_double(report.frac_sgd) << "\n";
  return kExitOk;
}

// --- track-curvature ------------------------------------------------------

int cmd_track_curvature(const std::string& trace_dir, int stride, double sigma,
                        double gamma, int rollouts, ProbeConfig cfg,
                        const std::string& out) {
  std::vector<std::pair<int, fs::path>> ckpt_files;
  for (const auto& entry : fs::directory_iterator(trace_dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("ckpt_", 0) == 0 && name.find("final") == std::string::npos &&
        entry.path().extension() == ".json") {
      int iter = std::stoi(name.substr(5, name.size() - 10));
      ckpt_files.emplace_back(iter, entry.path());
    }
  }
  std::sort(ckpt_files.begin(), ckpt_files.end());
  if (ckpt_files.empty())
    throw std::invalid_argument("no checkpoints found in " + trace_dir);

  std::vector<int> iters;
  std::vector<Eigen::VectorXd> thetas;
  for (std::size_t i = 0; i < ckpt_files.size(); i += std::max(1, stride)) {
    iters.push_back(ckpt_files[i].first);
    thetas.push_back(load_checkpoint(ckpt_files[i].second).values);
  }

  PointMassEnv env;
  auto family = [&](int) { return pointmass_objective(env, sigma, gamma, rollouts); };
  std::vector<double> curvature = track_curvature(thetas, family, cfg);

  std::ostringstream csv;
  csv << "checkpoint_iter,curvature\n";
  for (std::size_t i = 0; i < curvature.size(); ++i)
    csv << iters[i] << ',' << format_double(curvature[i]) << "\n";
  fs::path out_dir = prepare_out_dir(out);
  write_text_file(out_dir / "curvature.csv", csv.str());
  write_manifest(out_dir, "track-curvature",
                 {{"trace", trace_dir},
                  {"stride", stride},
                  {"sigma", sigma},
                  {"gamma", gamma},
                  {"rollouts", rollouts},
                  {"alpha", cfg.alpha},
                  {"dirs", cfg.num_directions},
                  {"seed", cfg.base_seed}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimization-landscape toolkit: perturbation probes, interpolation "
               "slices, and exact/Monte-Carlo policy-gradient training"};
  app.require_subcommand(1);

  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads; outputs are independent of this");

  // train-exact
  auto* train_exact_cmd =
      app.add_subcommand("train-exact", "exact gradient ascent on the gridworld");
  std::optional<std::string> te_config;
  int te_seeds = 1;
  std::string te_out = "out";
  ExactTrainConfig te;
  train_exact_cmd->add_option("--config", te_config, "gridworld spec JSON");
  train_exact_cmd->add_option("--seeds", te_seeds, "number of independent runs");
  train_exact_cmd->add_option("--out", te_out, "output directory");
  train_exact_cmd->add_option("--seed", te.seed, "base seed");
  train_exact_cmd->add_option("--eta", te.eta, "learning rate");
  train_exact_cmd->add_option("--tau0", te.tau0, "initial entropy weight");
  train_exact_cmd->add_option("--tau-decay", te.tau_decay, "per-iteration decay");
  train_exact_cmd->add_option("--iters", te.iters, "iteration budget");
  train_exact_cmd->add_option("--init-scale", te.init_scale, "theta init stddev");
  train_exact_cmd->add_option("--record-stride", te.record_stride, "trace stride");
  train_exact_cmd->add_option("--checkpoint-stride", te.checkpoint_stride,
                              "checkpoint stride (0: final only)");

  // train-reinforce
  auto* train_re_cmd =
      app.add_subcommand("train-reinforce", "REINFORCE on the point-mass environment");
  std::string tr_out = "out";
  ReinforceConfig tr;
  train_re_cmd->add_option("--out", tr_out, "output directory");
  train_re_cmd->add_option("--seed", tr.seed, "base seed");
  train_re_cmd->add_option("--batch", tr.batch_size, "trajectories per update");
  train_re_cmd->add_option("--eta", tr.eta, "learning rate");
  train_re_cmd->add_option("--sigma", tr.sigma, "policy stddev (must be > 0)");
  train_re_cmd->add_option("--gamma", tr.gamma, "discount");
  train_re_cmd->add_option("--iters", tr.iters, "iteration budget");
  train_re_cmd->add_option("--eval-stride", tr.eval_stride, "deterministic eval stride");
  train_re_cmd->add_option("--eval-episodes", tr.eval_episodes, "episodes per eval");
  train_re_cmd->add_option("--checkpoint-stride", tr.checkpoint_stride,
                           "checkpoint stride (0: final only)");

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "random symmetric perturbation probe");
  std::string pr_objective, pr_theta, pr_out = "out";
  std::optional<std::string> pr_config;
  double pr_tau = 0.0, pr_mix = 0.0, pr_sigma = 0.0, pr_gamma = 0.99;
  int pr_rollouts = 32;
  bool pr_svg = false;
  ProbeConfig pr;
  probe_cmd->add_option("--objective", pr_objective,
                        "analytic:<name> | gridworld | pointmass")->required();
  probe_cmd->add_option("--theta", pr_theta, "(v1,v2,...) literal or checkpoint file")
      ->required();
  probe_cmd->add_option("--config", pr_config, "gridworld spec JSON");
  probe_cmd->add_option("--alpha", pr.alpha, "perturbation radius");
  probe_cmd->add_option("--dirs", pr.num_directions, "number of directions");
  probe_cmd->add_option("--seed", pr.base_seed, "base seed");
  probe_cmd->add_option("--tau", pr_tau, "gridworld entropy weight");
  probe_cmd->add_option("--mix", pr_mix, "gridworld mixture weight");
  probe_cmd->add_option("--sigma", pr_sigma, "pointmass evaluation stddev");
  probe_cmd->add_option("--gamma", pr_gamma, "pointmass discount");
  probe_cmd->add_option("--rollouts", pr_rollouts, "rollouts per evaluation");
  probe_cmd->add_option("--noise-reps", pr.noise_reps, "base re-evaluations for the band");
  probe_cmd->add_flag("--no-crn{false}", pr.common_random_numbers,
                      "disable common random numbers");
  probe_cmd->add_flag("--svg", pr_svg, "emit scatter and histogram SVGs");
  probe_cmd->add_option("--out", pr_out, "output directory");

  // interpolate
  auto* interp_cmd = app.add_subcommand("interpolate", "1-D slice between checkpoints");
  std::string in_a, in_b, in_out = "out";
  std::optional<std::string> in_config;
  std::vector<std::string> in_overrides;
  int in_points = 101, in_rollouts = 512;
  double in_gamma = 0.99;
  std::uint64_t in_seed = 0;
  bool in_svg = false;
  interp_cmd->add_option("a", in_a, "first checkpoint")->required();
  interp_cmd->add_option("b", in_b, "second checkpoint")->required();
  interp_cmd->add_option("--config", in_config, "gridworld spec JSON");
  interp_cmd->add_option("--override", in_overrides,
                         "series overrides, e.g. tau=0.1,mix=0.1 or sigma=0.5");
  interp_cmd->add_option("--points", in_points, "grid points, endpoints inclusive");
  interp_cmd->add_option("--rollouts", in_rollouts, "rollouts per point (stochastic)");
  interp_cmd->add_option("--gamma", in_gamma, "pointmass discount");
  interp_cmd->add_option("--seed", in_seed, "base seed");
  interp_cmd->add_flag("--svg", in_svg, "emit line plot SVGs");
  interp_cmd->add_option("--out", in_out, "output directory");

  // limits
  auto* limits_cmd =
      app.add_subcommand("limits", "random-vs-stochastic-gradient detection limits");
  LimitsConfig li;
  std::string li_out = "out";
  limits_cmd->add_option("--k1", li.k1, "locally optimal coordinates");
  limits_cmd->add_option("--k2", li.k2, "ascent coordinates");
  limits_cmd->add_option("--epsilon", li.epsilon, "per-coordinate gradient noise");
  limits_cmd->add_option("--draws", li.num_draws, "directions per method");
  limits_cmd->add_option("--alpha", li.alpha, "perturbation radius");
  limits_cmd->add_option("--seed", li.seed, "base seed");
  limits_cmd->add_option("--out", li_out, "output directory");

  // track-curvature
  auto* track_cmd =
      app.add_subcommand("track-curvature", "curvature along training checkpoints");
  std::string tc_trace, tc_out = "out";
  int tc_stride = 1, tc_rollouts = 8;
  double tc_sigma = 0.5, tc_gamma = 0.99;
  ProbeConfig tc;
  tc.num_directions = 50;
  track_cmd->add_option("--trace", tc_trace, "directory holding ckpt_*.json")->required();
  track_cmd->add_option("--stride", tc_stride, "take every n-th checkpoint");
  track_cmd->add_option("--sigma", tc_sigma, "evaluation stddev");
  track_cmd->add_option("--gamma", tc_gamma, "discount");
  track_cmd->add_option("--rollouts", tc_rollouts, "rollouts per evaluation");
  track_cmd->add_option("--alpha", tc.alpha, "perturbation radius");
  track_cmd->add_option("--dirs", tc.num_directions, "directions per checkpoint");
  track_cmd->add_option("--seed", tc.base_seed, "base seed");
  track_cmd->add_option("--out", tc_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_exact_cmd->parsed())
      return cmd_train_exact(train_exact_cmd, te_config, te_seeds, te_out, te, jobs);
    if (train_re_cmd->parsed()) return cmd_train_reinforce(tr_out, tr);
    if (probe_cmd->parsed()) {
      pr.jobs = jobs;
      return cmd_probe(pr_objective, pr_theta, pr_config, pr_tau, pr_mix, pr_sigma,
                       pr_gamma, pr_rollouts, pr_out, pr_svg, pr);
    }
    if (interp_cmd->parsed())
      return cmd_interpolate(in_a, in_b, in_config, in_overrides, in_points, in_rollouts,
                             in_gamma, in_seed, jobs, in_out, in_svg);
    if (limits_cmd->parsed()) return cmd_limits(li, li_out);
    if (track_cmd->parsed()) {
      tc.jobs = jobs;
      return cmd_track_curvature(tc_trace, tc_stride, tc_sigma, tc_gamma, tc_rollouts, tc,
                                 tc_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
