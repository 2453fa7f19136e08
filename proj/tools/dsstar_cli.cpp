// Command-line front end: solve, bench, mgm, arrange.

#include "dsstar/arrangement.hpp"
#include "dsstar/bench.hpp"
#include "dsstar/io.hpp"
#include "dsstar/mgm.hpp"
#include "dsstar/relaxation.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace dsstar;

struct SolveFlags {
  std::string method = "ds-star";
  int pf_steps = 10;
  double tau = 4.0;
  double eta = 0.1;
  double beta = 0.2;
  int delta_iters = 10;
  double fw_tol = 1e-6;
  int fw_max_iter = 300;
  std::string lap = "auction";
};

void add_solve_flags(CLI::App* app, SolveFlags& f, bool with_method) {
  if (with_method)
    app->add_option("--method", f.method, "ds-plus, ds-plusplus or ds-star")
        ->check(CLI::IsMember({"ds-plus", "ds-plusplus", "ds-star"}))
        ->capture_default_str();
  app->add_option("--pf-steps", f.pf_steps, "path-following stages")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--tau", f.tau, "shift search step size")->capture_default_str();
  app->add_option("--eta", f.eta, "proximal weight")->capture_default_str();
  app->add_option("--beta", f.beta, "concave-end weight in [0, 1]")->capture_default_str();
  app->add_option("--delta-iters", f.delta_iters, "shift search iterations")->capture_default_str();
  app->add_option("--fw-tol", f.fw_tol, "Frank-Wolfe relative gap tolerance")->capture_default_str();
  app->add_option("--fw-max-iter", f.fw_max_iter, "Frank-Wolfe iteration cap per stage")->capture_default_str();
  app->add_option("--lap", f.lap, "auction or hungarian")->check(CLI::IsMember({"auction", "hungarian"}))->capture_default_str();
}

SolveOptions to_options(const SolveFlags& f) {
  SolveOptions o;
  o.pf_steps = f.pf_steps;
  o.delta.tau = f.tau;
  o.delta.eta = f.eta;
  o.delta.beta = f.beta;
  o.delta.n_iter = f.delta_iters;
  o.delta.validate();
  o.fw.tol = f.fw_tol;
  o.fw.max_iter = f.fw_max_iter;
  o.fw.lap = lap_method_from_string(f.lap);
  return o;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void apply_bench_config(const Json& j, BenchConfig& c, SolveFlags& f, const CLI::App& cmd) {
  const auto take = [&](const char* key, const char* flag) { return j.contains(key) && cmd.count(flag) == 0; };
  if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<int>>();
  if (j.contains("count")) c.instances_per_size = j.at("count").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (j.contains("out")) c.output_path = j.at("out").get<std::string>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  if (take("pf_steps", "--pf-steps")) f.pf_steps = j.at("pf_steps").get<int>();
  if (take("tau", "--tau")) f.tau = j.at("tau").get<double>();
  if (take("eta", "--eta")) f.eta = j.at("eta").get<double>();
  if (take("beta", "--beta")) f.beta = j.at("beta").get<double>();
  if (take("delta_iters", "--delta-iters")) f.delta_iters = j.at("delta_iters").get<int>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds and assignments for quadratic matching problems"};
  app.require_subcommand(1);

  // solve
  SolveFlags solve_flags;
  std::string instance_path;
  auto* solve_cmd = app.add_subcommand("solve", "bounds and an assignment for one QAP instance (JSON)");
  add_solve_flags(solve_cmd, solve_flags, true);
  solve_cmd->add_option("instance", instance_path, "instance JSON")->required()->check(CLI::ExistingFile);

  // bench
  SolveFlags bench_flags;
  std::string sizes = "4,6,8", methods = "ds-plus,ds-plusplus,ds-star", out_path, config_path;
  int count = 200, threads = 0;
  std::uint64_t seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "random-instance benchmark, CSV output");
  bench_cmd->add_option("--sizes", sizes, "comma-separated permutation sizes")->capture_default_str();
  bench_cmd->add_option("--count", count, "instances per size")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--methods", methods, "comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "base seed")->capture_default_str();
  bench_cmd->add_option("--out", out_path, "CSV path (stdout when omitted)");
  bench_cmd->add_option("--threads", threads, "worker count, 0 = all cores")->capture_default_str();
  bench_cmd->add_option("--config", config_path, "JSON config; command-line flags given explicitly win")
      ->check(CLI::ExistingFile);
  add_solve_flags(bench_cmd, bench_flags, false);

  // mgm
  int k = 4, n = 6, mgm_pf_steps = 30;
  double noise = 0.0;
  std::string sigma = "auto", mgm_instance;
  std::uint64_t mgm_seed = 0;
  auto* mgm_cmd = app.add_subcommand("mgm", "multi-graph matching on a synthetic or given instance");
  mgm_cmd->add_option("--k", k, "number of graphs")->capture_default_str();
  mgm_cmd->add_option("--n", n, "points per graph")->capture_default_str();
  mgm_cmd->add_option("--noise", noise, "synthetic noise level")->capture_default_str();
  mgm_cmd->add_option("--sigma", sigma, "penalty weight or auto (16000 / k)")->capture_default_str();
  mgm_cmd->add_option("--pf-steps", mgm_pf_steps, "path-following stages")->check(CLI::PositiveNumber)->capture_default_str();
  mgm_cmd->add_option("--seed", mgm_seed, "synthetic seed")->capture_default_str();
  mgm_cmd->add_option("--instance", mgm_instance, "instance JSON instead of a synthetic one")->check(CLI::ExistingFile);

  // arrange
  std::string features_path, arrange_method = "ds-star", grid_path;
  int rows = 0, cols = 0, arrange_pf_steps = 10;
  std::uint64_t arrange_seed = 0;
  auto* arrange_cmd = app.add_subcommand("arrange", "arrange feature vectors on a grid");
  arrange_cmd->add_option("--features", features_path, "CSV, one item per line")->required()->check(CLI::ExistingFile);
  arrange_cmd->add_option("--rows", rows, "grid rows")->required()->check(CLI::PositiveNumber);
  arrange_cmd->add_option("--cols", cols, "grid columns")->required()->check(CLI::PositiveNumber);
  arrange_cmd->add_option("--method", arrange_method, "ds-plusplus or ds-star")
      ->check(CLI::IsMember({"ds-plus", "ds-plusplus", "ds-star"}))
      ->capture_default_str();
  arrange_cmd->add_option("--pf-steps", arrange_pf_steps, "path-following stages")->check(CLI::PositiveNumber)->capture_default_str();
  arrange_cmd->add_option("--seed", arrange_seed, "seed of the initial random assignment")->capture_default_str();
  arrange_cmd->add_option("--emit-grid", grid_path, "write the item index per cell as a text grid");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const QapInstance inst = qap_from_json(read_json_file(instance_path));
      const BoundsReport r = solve(inst, method_from_string(solve_flags.method), to_options(solve_flags));
      std::cout << bounds_to_json(r).dump(2) << '\n';
    } else if (*bench_cmd) {
      BenchConfig config;
      if (!config_path.empty()) apply_bench_config(read_json_file(config_path), config, bench_flags, *bench_cmd);
      if (config.sizes.empty() || bench_cmd->count("--sizes")) {
        config.sizes.clear();
        for (const auto& s : split(sizes)) config.sizes.push_back(std::stoi(s));
      }
      if (config_path.empty() || bench_cmd->count("--count")) config.instances_per_size = count;
      if (config_path.empty() || bench_cmd->count("--seed")) config.seed = seed;
      if (config_path.empty() || bench_cmd->count("--methods")) {
        config.methods.clear();
        for (const auto& m : split(methods)) config.methods.push_back(method_from_string(m));
      }
      if (bench_cmd->count("--out")) config.output_path = out_path;
      if (bench_cmd->count("--threads")) config.threads = threads;
      config.solve = to_options(bench_flags);
      const BenchReport report = run_benchmark(config);
      if (config.output_path.empty()) {
        write_bench_csv(report, std::cout);
      } else {
        std::ofstream out(config.output_path);
        if (!out) throw std::runtime_error("cannot write " + config.output_path);
        write_bench_csv(report, out);
        if (!out) throw std::runtime_error("write failed: " + config.output_path);
      }
    } else if (*mgm_cmd) {
      const MgmInstance inst = mgm_instance.empty() ? make_synthetic_mgm(k, n, noise, mgm_seed)
                                                    : mgm_from_json(read_json_file(mgm_instance));
      MgmOptions options;
      options.pf_steps = mgm_pf_steps;
      if (sigma != "auto") options.sigma = std::stod(sigma);
      const MgmResult r = solve_mgm(inst, options);
      Json j;
      j["k"] = inst.k;
      j["n"] = inst.n;
      j["sigma"] = r.sigma;
      j["blocks"] = block_matching_to_json(r.matching);
      j["consistent"] = consistency_check(r.matching);
      j["accuracy"] = inst.ground_truth ? Json(accuracy(r.matching, inst.ground_truth)) : Json(nullptr);
      j["accuracy_before_sync"] = inst.ground_truth ? Json(accuracy(r.rounded, inst.ground_truth)) : Json(nullptr);
      std::cout << j.dump(2) << '\n';
    } else if (*arrange_cmd) {
      const Matrix features = read_features_csv(features_path);
      SolveOptions options;
      options.pf_steps = arrange_pf_steps;
      const ArrangeResult r = arrange(features, rows, cols, method_from_string(arrange_method), options, arrange_seed);
      Json j;
      j["rows"] = rows;
      j["cols"] = cols;
      j["method"] = arrange_method;
      j["assignment"] = permutation_to_json(r.perm);
      j["objective"] = r.objective;
      j["initial_objective"] = r.initial_objective;
      j["bounds"] = bounds_to_json(r.report);
      std::cout << j.dump(2) << '\n';
      if (!grid_path.empty()) {
        std::ofstream g(grid_path);
        if (!g) throw std::runtime_error("cannot write " + grid_path);
        for (int r0 = 0; r0 < rows; ++r0) {
          for (int c0 = 0; c0 < cols; ++c0) g << (c0 ? " " : "") << r.perm[r0 * cols + c0];
          g << '\n';
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
