// Command-line front end: dataset generation, training, evaluation,
// landscape export and the exact-vs-heuristic TSP comparison.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <json.hpp>

#include "combigrad/error.hpp"
#include "combigrad/harness/experiment.hpp"
#include "combigrad/lab/landscape.hpp"
#include "combigrad/lab/sampling.hpp"
#include "combigrad/lab/toys.hpp"

namespace fs = std::filesystem;
using namespace combigrad;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out, "Output directory")->required();
}

int cmd_gen(const Common& c) {
  const auto config = harness::experiment_from_json(load_json(c.config));
  const auto all = harness::make_dataset(config, c.seed);
  const auto [train, test] = harness::split(all, config.data.train_size);
  const fs::path dir(c.out);
  auto train_out = open_out(dir / "train.jsonl");
  harness::write_jsonl(train, train_out);
  auto test_out = open_out(dir / "test.jsonl");
  harness::write_jsonl(test, test_out);

  const auto audit = harness::audit_labels(all);
  write_json(dir / "audit.json", {{"checked", audit.checked},
                                  {"failures", audit.failures},
                                  {"brute_forced", audit.brute_forced}});
  std::cout << "wrote " << train.size() << " train and " << test.size() << " test examples to "
            << dir.string() << "; label audit " << (audit.pass() ? "passed" : "FAILED") << '\n';
  return audit.pass() ? 0 : 1;
}

int cmd_train(const Common& c) {
  const auto config = harness::experiment_from_json(load_json(c.config));
  const fs::path dir(c.out);
  auto metrics = open_out(dir / "metrics.jsonl");
  const auto log = learn::jsonl_sink(metrics);
  const auto record = harness::run_experiment(config, c.seed, [&](const learn::EpochMetrics& m) {
    log(m);
    std::cerr << "epoch " << m.epoch << " train_loss " << m.train_loss << " test_acc "
              << m.test_acc << '\n';
  });
  write_json(dir / "model.json", record.model);
  json summary = harness::to_json(record);
  summary.erase("history");
  summary["config"] = harness::to_json(config);
  write_json(dir / "summary.json", summary);
  std::cout << "final test accuracy " << record.final_test_acc << '\n';
  return 0;
}

int cmd_eval(const Common& c, const std::string& data_path, const std::string& model_path) {
  const auto config = harness::experiment_from_json(load_json(c.config));
  harness::SyntheticDataset data;
  if (data_path.empty()) {
    data = harness::make_dataset(config, c.seed);
  } else {
    std::ifstream in(data_path);
    if (!in) throw InputError("cannot open " + data_path);
    data = harness::read_jsonl(in);
  }
  const auto audit = harness::audit_labels(data);
  json report = {{"examples", data.size()},
                 {"audit", {{"checked", audit.checked},
                            {"failures", audit.failures},
                            {"failing", audit.failing},
                            {"brute_forced", audit.brute_forced}}}};
  if (!model_path.empty()) {
    const auto model = learn::Model::from_json(config.train, load_json(model_path));
    const auto solver = solvers::make_solver(config.train.instance);
    const auto ev = learn::evaluate(model, *solver, harness::make_split(data));
    report["accuracy"] = ev.accuracy;
    report["loss"] = ev.loss;
    std::cout << "accuracy " << ev.accuracy << '\n';
  }
  write_json(fs::path(c.out) / "eval.json", report);
  std::cout << "label audit: " << audit.failures << " failures in " << audit.checked << '\n';
  return audit.pass() ? 0 : 1;
}

int cmd_compare(const Common& c) {
  const auto config = harness::experiment_from_json(load_json(c.config));
  const auto cmp = harness::compare_solvers(config, c.seed);
  write_json(fs::path(c.out) / "compare.json", harness::to_json(cmp));
  std::cout << "solver            test accuracy\n"
            << "embed exact       " << cmp.exact.final_test_acc << '\n'
            << "embed 2-opt       " << cmp.approximate.final_test_acc << '\n'
            << "2-opt on truth    " << cmp.approx_on_truth << '\n';
  return 0;
}

struct LandscapeArgs {
  std::string family = "sp";
  int k = 3;
  double lambda = 10.0;
  std::size_t res = 256;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_landscape(const LandscapeArgs& a) {
  std::unique_ptr<Solver> solver;
  lab::Linearization lin;
  std::vector<double> origin;
  std::vector<double> u;
  std::vector<double> v;
  if (a.family == "toy") {
    solver = std::make_unique<solvers::EnumeratedSolver>(lab::toy_three_region());
    lin = lab::toy_three_region_linearization();
    origin = {-30.0, -30.0};
    u = {60.0, 0.0};
    v = {0.0, 60.0};
  } else {
    const auto family = solvers::family_from_string(a.family);
    solver = solvers::make_solver({family, a.k});
    std::mt19937_64 rng(a.seed);
    lin = lab::random_linearization(*solver, family, lab::gradient_scale(family, a.lambda), rng);
    auto slice = lab::boundary_slice(*solver, family, rng);
    origin = std::move(slice.origin);
    u = std::move(slice.u);
    v = std::move(slice.v);
  }
  const auto grid = lab::render_landscape(*solver, lin, origin, u, v, a.lambda, a.res, a.res);
  const fs::path out(a.out);
  if (out.extension() == ".json") {
    write_json(out, lab::to_json(grid));
  } else {
    auto f = open_out(out);
    lab::write_csv(grid, f);
  }
  const auto cont = lab::check_grid_continuity(grid);
  std::cout << "W_diff fraction " << grid.w_diff_fraction() << ", continuity "
            << (cont.pass ? "ok" : "VIOLATED") << '\n';
  return cont.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentiation through blackbox combinatorial solvers"};
  app.require_subcommand(1);

  Common gen_args;
  add_common(app.add_subcommand("gen", "Generate a labeled dataset and audit its labels"), gen_args);
  Common train_args;
  add_common(app.add_subcommand("train", "Generate data and train a model"), train_args);
  Common eval_args;
  std::string data_path;
  std::string model_path;
  auto* eval = app.add_subcommand("eval", "Audit dataset labels, optionally score a model");
  add_common(eval, eval_args);
  eval->add_option("--data", data_path, "Dataset JSONL (default: regenerate from config)");
  eval->add_option("--model", model_path, "Trained model JSON");
  Common compare_args;
  add_common(app.add_subcommand("compare", "Exact vs 2-opt TSP solver study"), compare_args);

  LandscapeArgs land;
  auto* landscape = app.add_subcommand("landscape", "Export an f_lambda landscape grid");
  landscape->add_option("--family", land.family, "sp | tsp | pm | toy (three-region toy)");
  landscape->add_option("--k", land.k, "Instance size");
  landscape->add_option("--lambda", land.lambda, "Interpolation parameter");
  landscape->add_option("--res", land.res, "Grid points per axis");
  landscape->add_option("--seed", land.seed, "Random seed");
  landscape->add_option("--out", land.out, "Output file (.csv or .json)")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("gen")) return cmd_gen(gen_args);
    if (app.got_subcommand("train")) return cmd_train(train_args);
    if (app.got_subcommand("eval")) return cmd_eval(eval_args, data_path, model_path);
    if (app.got_subcommand("compare")) return cmd_compare(compare_args);
    if (app.got_subcommand("landscape")) return cmd_landscape(land);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
