// Command-line front end: dataset generation, bootstrapping runs, label
// propagation and the property verification suites.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "yarowsky/bootstrap.hpp"
#include "yarowsky/generator.hpp"
#include "yarowsky/graph.hpp"
#include "yarowsky/objectives.hpp"
#include "yarowsky/propagation.hpp"
#include "yarowsky/trace_io.hpp"
#include "yarowsky/verify.hpp"

namespace {

using namespace yarowsky;

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Dataset load(const std::string& path, std::optional<std::size_t> num_labels) {
  std::ifstream in(path);
  if (!in) throw CommandError("cannot open input file '" + path + "'");
  try {
    return read_dataset(in, num_labels);
  } catch (const InputError& e) {
    throw CommandError(path + ": " + e.what());
  }
}

// Outputs are buffered and only written once the command has succeeded.
struct PendingOutput {
  std::string path;
  std::ostringstream body;
};

void flush(const std::vector<PendingOutput*>& outputs) {
  for (auto* out : outputs) {
    if (out->path.empty()) continue;
    if (out->path == "-") {
      std::cout << out->body.str();
      continue;
    }
    std::ofstream file(out->path, std::ios::binary);
    if (!file) throw CommandError("cannot write '" + out->path + "'");
    file << out->body.str();
  }
}

std::string sibling(const std::string& output, const std::string& suffix) {
  return output == "-" ? std::string() : output + suffix;
}

struct GenArgs {
  GenConfig config;
  std::optional<std::size_t> classes;
  std::string output = "-";
};

int cmd_gen(GenArgs& args) {
  auto config = args.config;
  config.planted_classes = args.classes.value_or(config.num_labels);
  Dataset dataset;
  try {
    dataset = generate(config);
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }
  PendingOutput out{args.output, {}};
  write_dataset(out.body, dataset);
  flush({&out});
  return 0;
}

struct RunArgs {
  std::string input;
  std::string learner = "dl1";
  double epsilon = SmoothingConfig{}.epsilon;
  double delta = SmoothingConfig{}.delta;
  std::optional<std::size_t> max_iter;
  std::vector<std::string> objectives = {"H", "l_t2", "K_t2", "K_delta"};
  std::uint64_t rng_seed = 0;
  std::optional<std::size_t> num_labels;
  bool pad = false;
  std::string output = "-";
  std::string labeling;
};

int cmd_run(RunArgs& args, const CLI::App& app) {
  const auto learner = parse_learner(args.learner);
  if (!learner) throw CommandError("unknown learner '" + args.learner + "'");
  if (args.epsilon < 0.0 || args.delta < 0.0) throw CommandError("epsilon and delta must be non-negative");
  if (args.max_iter && *args.max_iter == 0) throw CommandError("--max-iter must be at least 1");

  RunOptions opts;
  opts.learner = *learner;
  opts.smoothing = {args.epsilon, args.delta};
  opts.max_iter = args.max_iter;
  opts.objectives = ObjectiveSet::none();
  for (const auto& name : args.objectives) {
    if (name == "H") opts.objectives.H = true;
    else if (name == "l_t2") opts.objectives.l_t2 = true;
    else if (name == "K_t2") opts.objectives.K_t2 = true;
    else if (name == "K_delta") opts.objectives.K_delta = true;
    else throw CommandError("unknown objective '" + name + "'");
  }
  if (app.count("--epsilon") && *learner != LearnerKind::DL0) {
    std::cerr << "warning: --epsilon only affects dl0 and is ignored\n";
  }
  if (app.count("--delta") && *learner != LearnerKind::DL2S && !opts.objectives.K_delta) {
    std::cerr << "warning: --delta only affects dl2s and the K_delta objective and is ignored\n";
  }

  auto dataset = load(args.input, args.num_labels);
  if (dataset.seeds.empty()) throw CommandError(args.input + ": no seed labels");
  if (args.pad) dataset.graph = pad_to_uniform_degree(dataset.graph).graph;

  const auto result = run(dataset.graph, dataset.seeds, opts);
  PendingOutput trace{args.output, {}};
  write_trace(trace.body, result.trace);
  PendingOutput labels{args.labeling.empty() ? sibling(args.output, ".labels.tsv") : args.labeling, {}};
  write_labeling(labels.body, dataset.graph, result.state, dataset.label_names);
  flush({&trace, &labels});
  return 0;
}

struct PropagateArgs {
  std::string input;
  std::string feature_op = "majority";
  std::string instance_op = "majority";
  std::optional<std::size_t> max_iter;
  double tol = 1e-8;
  std::optional<std::size_t> num_labels;
  std::string output = "-";
  std::string assignment;
  std::string report;
};

int cmd_propagate(PropagateArgs& args) {
  const auto fop = parse_operator(args.feature_op);
  const auto iop = parse_operator(args.instance_op);
  if (!fop) throw CommandError("unknown feature operator '" + args.feature_op + "'");
  if (!iop) throw CommandError("unknown instance operator '" + args.instance_op + "'");
  if (!(args.tol > 0.0)) throw CommandError("--tol must be positive");

  const auto dataset = load(args.input, args.num_labels);
  if (dataset.seeds.empty()) throw CommandError(args.input + ": no seed labels");
  const auto& g = dataset.graph;

  PropagationOptions opts{*fop, *iop, args.max_iter, args.tol};
  const auto result = propagate(g, dataset.seeds, opts);
  const auto residual = optimality_residual(result.assignment, g, PsiKind::Quadratic);

  nlohmann::ordered_json summary;
  summary["feature_op"] = args.feature_op;
  summary["instance_op"] = args.instance_op;
  summary["iterations"] = result.iterations;
  summary["converged"] = result.converged;
  summary["iteration_bound"] = iteration_bound(g.num_features(), g.num_instances());
  summary["cut"] = cut_size(g, result.assignment);
  summary["feature_residual"] = residual.feature_residual;
  summary["instance_residual"] = residual.instance_residual;

  PendingOutput sweeps{args.output, {}};
  write_sweeps(sweeps.body, result.sweeps);
  PendingOutput assignment{args.assignment.empty() ? sibling(args.output, ".assignment.tsv") : args.assignment, {}};
  write_assignment(assignment.body, g, result.assignment, dataset.label_names);
  PendingOutput report{args.report, {}};
  report.body << summary.dump() << '\n';
  flush({&sweeps, &assignment, &report});
  std::cerr << summary.dump() << '\n';
  return 0;
}

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t rng_seed = 7;
  std::string output = "-";
};

int cmd_verify(VerifyArgs& args) {
  if (!is_suite(args.suite)) throw CommandError("unknown suite '" + args.suite + "'");
  const auto reports = run_suite(args.suite, args.rng_seed);
  PendingOutput out{args.output, {}};
  std::size_t failed = 0;
  for (const auto& r : reports) {
    out.body << r.to_json().dump() << '\n';
    if (!r.pass) ++failed;
  }
  flush({&out});
  std::cerr << args.suite << ": " << (reports.size() - failed) << "/" << reports.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yarowsky-family bootstrapping and bipartite label propagation"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a planted-partition dataset as TSV");
  gen_cmd->add_option("--instances", gen.config.num_instances, "Number of instances")->capture_default_str();
  gen_cmd->add_option("--features", gen.config.num_features, "Number of features")->capture_default_str();
  gen_cmd->add_option("--labels", gen.config.num_labels, "Number of labels L")->capture_default_str();
  gen_cmd->add_option("--edges-min", gen.config.edges_min, "Fewest features per instance")->capture_default_str();
  gen_cmd->add_option("--edges-max", gen.config.edges_max, "Most features per instance")->capture_default_str();
  gen_cmd->add_option("--seed-fraction", gen.config.seed_fraction, "Fraction of instances seeded")
      ->capture_default_str();
  gen_cmd->add_option("--classes", gen.classes, "Planted classes (default: L)");
  gen_cmd->add_option("--noise", gen.config.noise, "Probability of a cross-class feature")->capture_default_str();
  gen_cmd->add_option("--rng-seed", gen.config.rng_seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--output,-o", gen.output, "Output path, - for stdout")->capture_default_str();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the modified Yarowsky bootstrapping loop");
  run_cmd->add_option("--input,-i", run_args.input, "Dataset TSV")->required();
  run_cmd->add_option("--learner", run_args.learner, "dl0, dl1, dl1r or dl2s")->capture_default_str();
  run_cmd->add_option("--epsilon", run_args.epsilon, "Smoothing for dl0")->capture_default_str();
  run_cmd->add_option("--delta", run_args.delta, "Smoothing for dl2s and K_delta")->capture_default_str();
  run_cmd->add_option("--max-iter", run_args.max_iter, "Iteration budget (default: instances + 1)");
  run_cmd->add_option("--objectives", run_args.objectives, "Subset of H,l_t2,K_t2,K_delta")->delimiter(',');
  run_cmd->add_option("--rng-seed", run_args.rng_seed, "Random seed (the loop itself is deterministic)");
  run_cmd->add_option("--num-labels", run_args.num_labels, "Number of labels (default: from input)");
  run_cmd->add_flag("--pad", run_args.pad, "Pad instances to a uniform number of features");
  run_cmd->add_option("--output,-o", run_args.output, "Trace path, - for stdout")->capture_default_str();
  run_cmd->add_option("--labeling", run_args.labeling, "Final labeling TSV (default: <output>.labels.tsv)");

  PropagateArgs prop;
  auto* prop_cmd = app.add_subcommand("propagate", "Majority/average label propagation on the bipartite graph");
  prop_cmd->add_option("--input,-i", prop.input, "Dataset TSV")->required();
  prop_cmd->add_option("--feature-op", prop.feature_op, "majority or average")->capture_default_str();
  prop_cmd->add_option("--instance-op", prop.instance_op, "majority or average")->capture_default_str();
  prop_cmd->add_option("--max-iter", prop.max_iter, "Sweep budget");
  prop_cmd->add_option("--tol", prop.tol, "Max-norm convergence tolerance")->capture_default_str();
  prop_cmd->add_option("--num-labels", prop.num_labels, "Number of labels (default: from input)");
  prop_cmd->add_option("--output,-o", prop.output, "Sweep trace path, - for stdout")->capture_default_str();
  prop_cmd->add_option("--assignment", prop.assignment, "Final assignment TSV (default: <output>.assignment.tsv)");
  prop_cmd->add_option("--report", prop.report, "Summary JSON path");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run property verification suites");
  ver_cmd->add_option("--suite", ver.suite, "Suite name or 'all'")->capture_default_str();
  ver_cmd->add_option("--rng-seed", ver.rng_seed, "Random seed")->capture_default_str();
  ver_cmd->add_option("--output,-o", ver.output, "Report path, - for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*run_cmd) return cmd_run(run_args, *run_cmd);
    if (*prop_cmd) return cmd_propagate(prop);
    if (*ver_cmd) return cmd_verify(ver);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
