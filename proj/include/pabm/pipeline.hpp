#pragma once

#include "pabm/clustering.hpp"
#include "pabm/estimator.hpp"
#include "pabm/generator.hpp"
#include "pabm/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pabm {

enum class Method { kSsc, kSc };

Method parse_method(const std::string& name);
std::string method_name(Method m);

// SSC with L = K, or spectral clustering of A itself.
Assignment cluster_graph(const MatrixXd& a, int K, Method method, int restarts, std::uint64_t seed);
ClusterFn make_cluster_fn(Method method, int restarts);

struct GeneratorSpec {
  enum class Model { kDiverse, kHomophily };
  Model model = Model::kDiverse;
  int n = 120;
  int K = 2;
  double a = 1.0;
  double omega = 0.8;
  double h = 2.0;
  std::uint64_t seed = 1;
};

PabmInstance generate(const GeneratorSpec& spec);
Json generate_json(const GeneratorSpec& spec);

// Where a graph comes from: an edge list, a pabm-instance JSON file, or the generator.
struct GraphSource {
  std::optional<std::string> input;
  EdgeListSpec edge_list;  // path filled from `input` when not a .json file
  GeneratorSpec generator;
};

struct Graph {
  MatrixXd A;
  std::optional<MatrixXd> P;
  std::optional<Assignment> truth;
  std::vector<std::string> ids;  // empty unless read from an edge list
};

Graph load_graph(const GraphSource& source);

struct RunConfig {
  GraphSource source;
  int K = 2;
  int k_min = 1;
  int k_max = 6;
  Method method = Method::kSsc;
  PenaltySpec penalty;
  std::uint64_t seed = 1;
  int restarts = 20;
  bool population = false;       // cluster P instead of A (generated or instance input only)
  bool include_p_hat = false;
  std::optional<std::string> labels;  // label file for `estimate` / `eval`
  std::optional<std::string> truth;   // label file for `eval`
  std::optional<std::string> similarity_out;
};

Json run_cluster(const RunConfig& cfg);
Json run_estimate(const RunConfig& cfg);
Json run_select_k(const RunConfig& cfg);
Json run_eval(const RunConfig& cfg);

struct BenchmarkConfig {
  enum class Mode { kSweep, kHomophily, kKSelect };
  Mode mode = Mode::kSweep;
  std::vector<int> ns{600};
  std::vector<int> Ks{4};
  std::vector<double> omegas{0.9};
  std::vector<double> hs{1.5};
  double a = 1.0;
  int runs = 10;
  std::vector<Method> methods{Method::kSsc, Method::kSc};
  std::uint64_t seed = 1;
  int jobs = 1;
  int restarts = 20;
  int k_min = 2;  // kselect mode
  int k_max = 6;
  PenaltySpec penalty;
  bool timing = false;  // fill elapsed_ms; off keeps outputs byte-reproducible
};

struct BenchmarkRow {
  int setting = 0;
  int n = 0;
  int K = 0;
  double omega = 0.0;
  double a = 0.0;
  double h = 0.0;
  int run = 0;
  std::string method;
  double clustering_error = 0.0;
  double estimation_error = 0.0;
  int k_hat = 0;  // kselect mode
  double elapsed_ms = -1.0;
  std::string error;
};

// Rows sorted by (setting, run, method).
std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg);

void write_benchmark_csv(std::ostream& out, const BenchmarkConfig& cfg, const std::vector<BenchmarkRow>& rows);
// Means per (setting, method); kselect mode gives per-setting frequencies of K_hat.
void write_aggregate_csv(std::ostream& out, const BenchmarkConfig& cfg, const std::vector<BenchmarkRow>& rows);

}  // namespace pabm
