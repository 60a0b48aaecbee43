// Command-line front end: generate, cluster, estimate, select-k, benchmark, eval.

#include "pabm/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using pabm::BenchmarkConfig;
using pabm::EdgeListSpec;
using pabm::GeneratorSpec;
using pabm::Json;
using pabm::PenaltySpec;
using pabm::RunConfig;

struct CommonFlags {
  std::string model = "diverse";
  std::string method = "ssc";
  std::string penalty = "practical";
  std::string delimiter = "whitespace";
  std::string input;
  std::string output;
};

void add_generator_flags(CLI::App* app, GeneratorSpec& gen, CommonFlags& flags) {
  app->add_option("--model", flags.model, "Generator model")->check(CLI::IsMember({"diverse", "homophily"}));
  app->add_option("--n", gen.n, "Number of nodes");
  app->add_option("--k", gen.K, "Number of communities (also the number fitted)");
  app->add_option("--omega", gen.omega, "Off-diagonal Lambda multiplier");
  app->add_option("--a", gen.a, "Upper bound of Lambda entries");
  app->add_option("--h", gen.h, "Homophily factor");
  app->add_option("--seed", gen.seed, "Seed");
}

void add_input_flags(CLI::App* app, EdgeListSpec& spec, CommonFlags& flags) {
  app->add_option("--input", flags.input, "Edge list, or pabm-instance .json; generated when omitted");
  app->add_option("--delimiter", flags.delimiter, "Edge list delimiter")
      ->check(CLI::IsMember({"whitespace", "comma"}));
  app->add_flag("--one-based", spec.one_based, "Numeric node ids start at 1");
  app->add_flag("--weighted", spec.weighted, "Third column is an edge weight");
  app->add_option("--threshold", spec.threshold, "Keep weighted edges with weight > threshold");
  app->add_flag("--binarize", spec.binarize, "Keep every weighted edge with nonzero weight");
}

void finalize(RunConfig& cfg, const CommonFlags& flags) {
  cfg.source.generator.model =
      flags.model == "homophily" ? GeneratorSpec::Model::kHomophily : GeneratorSpec::Model::kDiverse;
  if (cfg.source.generator.model == GeneratorSpec::Model::kHomophily) cfg.source.generator.K = 2;
  if (!flags.input.empty()) {
    cfg.source.input = flags.input;
    if (flags.input.size() >= 5 && flags.input.substr(flags.input.size() - 5) == ".json" &&
        (cfg.source.edge_list.weighted || cfg.source.edge_list.binarize))
      throw pabm::Error("--weighted/--binarize apply to edge lists only");
  }
  cfg.source.edge_list.delimiter =
      flags.delimiter == "comma" ? EdgeListSpec::Delimiter::kComma : EdgeListSpec::Delimiter::kWhitespace;
  cfg.method = pabm::parse_method(flags.method);
  cfg.penalty.kind = flags.penalty == "theoretical" ? PenaltySpec::Kind::kTheoretical : PenaltySpec::Kind::kPractical;
  cfg.seed = cfg.source.generator.seed;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pabm::Error("cannot write '" + path + "'");
  out << text;
}

void emit_json(const std::string& path, const Json& j) { emit(path, j.dump(2) + "\n"); }

std::string aggregate_path(const std::string& raw) {
  const auto dot = raw.rfind('.');
  if (dot == std::string::npos || raw.find('/', dot) != std::string::npos) return raw + "_aggregate";
  return raw.substr(0, dot) + "_aggregate" + raw.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Popularity adjusted block model: estimation, clustering and model selection"};
  app.require_subcommand(1);
  // --h is the homophily factor, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  CommonFlags flags;
  RunConfig run;
  int jobs = 1;

  auto* generate = app.add_subcommand("generate", "Generate a synthetic PABM network as JSON");
  add_generator_flags(generate, run.source.generator, flags);
  generate->add_option("--output", flags.output, "Output file (default stdout)");

  auto* cluster = app.add_subcommand("cluster", "Cluster a network into K communities");
  auto* estimate = app.add_subcommand("estimate", "Rank-one block estimate of P");
  auto* select_k = app.add_subcommand("select-k", "Choose the number of communities");
  auto* eval = app.add_subcommand("eval", "Evaluate an assignment against a graph and optional truth");
  for (auto* sub : {cluster, estimate, select_k, eval}) {
    add_generator_flags(sub, run.source.generator, flags);
    add_input_flags(sub, run.source.edge_list, flags);
    sub->add_option("--output", flags.output, "Output JSON file (default stdout)");
  }
  for (auto* sub : {cluster, estimate, select_k}) {
    sub->add_option("--method", flags.method, "Clustering method")->check(CLI::IsMember({"ssc", "sc"}));
    sub->add_option("--restarts", run.restarts, "k-means restarts");
    sub->add_flag("--population", run.population, "Cluster the true P instead of A");
  }
  cluster->add_option("--similarity-out", run.similarity_out, "Write SSC similarity triplets (ssc only)");
  estimate->add_option("--labels", run.labels, "Community labels (id label) instead of clustering");
  estimate->add_flag("--with-p-hat", run.include_p_hat, "Include the estimated P in the output");
  select_k->add_option("--k-min", run.k_min, "Smallest K");
  select_k->add_option("--k-max", run.k_max, "Largest K");
  select_k->add_option("--penalty", flags.penalty, "Penalty")->check(CLI::IsMember({"practical", "theoretical"}));
  select_k->add_option("--h1", run.penalty.h1, "Theoretical penalty constant H1");
  select_k->add_option("--h2", run.penalty.h2, "Theoretical penalty constant H2");
  select_k->add_option("--h3", run.penalty.h3, "Theoretical penalty constant H3");
  eval->add_option("--labels", run.labels, "Assignment to evaluate (label file or cluster JSON)")->required();
  eval->add_option("--truth", run.truth, "Ground-truth labels (id label)");

  BenchmarkConfig bench;
  std::string bench_mode = "sweep";
  std::vector<std::string> methods{"ssc", "sc"};
  std::string aggregate;
  auto* benchmark = app.add_subcommand("benchmark", "Simulation sweeps written as CSV");
  benchmark->add_option("--mode", bench_mode, "Sweep type")->check(CLI::IsMember({"sweep", "homophily", "kselect"}));
  benchmark->add_option("--n", bench.ns, "Node counts")->delimiter(',');
  benchmark->add_option("--k", bench.Ks, "Community counts")->delimiter(',');
  benchmark->add_option("--omega", bench.omegas, "Heterogeneity values")->delimiter(',');
  benchmark->add_option("--h", bench.hs, "Homophily factors")->delimiter(',');
  benchmark->add_option("--a", bench.a, "Upper bound of Lambda entries");
  benchmark->add_option("--runs", bench.runs, "Runs per setting");
  benchmark->add_option("--method", methods, "Methods")->delimiter(',');
  benchmark->add_option("--seed", bench.seed, "Base seed");
  benchmark->add_option("--jobs", jobs, "Concurrent runs");
  benchmark->add_option("--restarts", bench.restarts, "k-means restarts");
  benchmark->add_option("--k-min", bench.k_min, "kselect: smallest K");
  benchmark->add_option("--k-max", bench.k_max, "kselect: largest K");
  benchmark->add_option("--penalty", flags.penalty, "kselect penalty")->check(CLI::IsMember({"practical", "theoretical"}));
  benchmark->add_option("--h1", bench.penalty.h1, "Theoretical penalty constant H1");
  benchmark->add_option("--h2", bench.penalty.h2, "Theoretical penalty constant H2");
  benchmark->add_option("--h3", bench.penalty.h3, "Theoretical penalty constant H3");
  benchmark->add_flag("--timing", bench.timing, "Record elapsed_ms (makes output run-dependent)");
  benchmark->add_option("--output", flags.output, "Per-run CSV (default stdout)");
  benchmark->add_option("--aggregate", aggregate, "Aggregate CSV (default <output>_aggregate.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      finalize(run, flags);
      emit_json(flags.output, pabm::generate_json(run.source.generator));
    } else if (*benchmark) {
      bench.mode = bench_mode == "homophily" ? BenchmarkConfig::Mode::kHomophily
                   : bench_mode == "kselect" ? BenchmarkConfig::Mode::kKSelect
                                             : BenchmarkConfig::Mode::kSweep;
      bench.methods.clear();
      for (const auto& m : methods) bench.methods.push_back(pabm::parse_method(m));
      bench.penalty.kind =
          flags.penalty == "theoretical" ? PenaltySpec::Kind::kTheoretical : PenaltySpec::Kind::kPractical;
      bench.jobs = jobs;
      const auto rows = pabm::run_benchmark(bench);
      std::ostringstream raw, agg;
      pabm::write_benchmark_csv(raw, bench, rows);
      pabm::write_aggregate_csv(agg, bench, rows);
      emit(flags.output, raw.str());
      if (!aggregate.empty() || !flags.output.empty())
        emit(aggregate.empty() ? aggregate_path(flags.output) : aggregate, agg.str());
    } else {
      finalize(run, flags);
      // --k is both the generated and the fitted community count.
      run.K = run.source.generator.K;
      Json out;
      if (*cluster) out = pabm::run_cluster(run);
      else if (*estimate) out = pabm::run_estimate(run);
      else if (*select_k) out = pabm::run_select_k(run);
      else out = pabm::run_eval(run);
      emit_json(flags.output, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
