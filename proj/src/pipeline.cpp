#include "pabm/pipeline.hpp"

#include "pabm/metrics.hpp"
#include "pabm/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

namespace pabm {
namespace {

constexpr std::uint64_t kClusterTask = 0xC1A5;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> default_ids(Index n) {
  std::vector<std::string> ids;
  for (Index i = 0; i < n; ++i) ids.push_back(std::to_string(i + 1));
  return ids;
}

Assignment labels_from_file(const std::string& path, const std::vector<std::string>& ids) {
  if (ends_with(path, ".json")) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    const Json j = Json::parse(in);
    const auto labels = j.at("assignment").get<std::vector<int>>();
    std::vector<std::string> file_ids = j.contains("ids") ? j.at("ids").get<std::vector<std::string>>() : default_ids(static_cast<Index>(labels.size()));
    if (file_ids.size() != labels.size()) throw Error("'" + path + "': ids and assignment differ in length");
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < labels.size(); ++i) m[file_ids[i]] = std::to_string(labels[i]);
    return labels_for_ids(m, ids);
  }
  return labels_for_ids(read_label_file(path), ids);
}

const MatrixXd& clustering_target(const Graph& g, const RunConfig& cfg) {
  if (!cfg.population) return g.A;
  if (!g.P) throw Error("population mode needs a generated or instance input with known P");
  return *g.P;
}

Json header(const Graph& g, const RunConfig& cfg) {
  Json j;
  j["n"] = g.A.rows();
  j["method"] = method_name(cfg.method);
  j["seed"] = cfg.seed;
  j["population"] = cfg.population;
  return j;
}

void add_truth_metrics(Json& j, const Graph& g, const Assignment& z) {
  if (!g.truth) return;
  if (g.truth->communities() == z.communities())
    j["clustering_error"] = clustering_error(z, *g.truth);
  else
    j["clustering_error"] = nullptr;
  j["ari"] = adjusted_rand_index(z, *g.truth);
}

std::string csv_text(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

std::string elapsed_field(const BenchmarkConfig& cfg, double ms) {
  return cfg.timing ? format_double(ms) : std::string("NA");
}

struct Setting {
  int n;
  int K;
  double omega;
  double h;
};

std::vector<Setting> settings_for(const BenchmarkConfig& cfg) {
  std::vector<Setting> out;
  switch (cfg.mode) {
    case BenchmarkConfig::Mode::kSweep:
      for (int n : cfg.ns)
        for (int K : cfg.Ks)
          for (double w : cfg.omegas) out.push_back({n, K, w, 0.0});
      break;
    case BenchmarkConfig::Mode::kHomophily:
      for (int n : cfg.ns)
        for (double h : cfg.hs) out.push_back({n, 2, 0.0, h});
      break;
    case BenchmarkConfig::Mode::kKSelect:
      for (int K : cfg.Ks)
        for (int n : cfg.ns)
          for (double w : cfg.omegas) out.push_back({n, K, w, 0.0});
      break;
  }
  return out;
}

std::vector<BenchmarkRow> run_job(const BenchmarkConfig& cfg, const Setting& s, int setting, int run) {
  const std::uint64_t seed = derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(setting)),
                                         static_cast<std::uint64_t>(run));
  std::vector<BenchmarkRow> rows;
  BenchmarkRow base;
  base.setting = setting;
  base.n = s.n;
  base.K = s.K;
  base.omega = s.omega;
  base.a = cfg.mode == BenchmarkConfig::Mode::kHomophily ? 0.0 : cfg.a;
  base.h = s.h;
  base.run = run;

  std::optional<PabmInstance> inst;
  std::string gen_error;
  try {
    if (cfg.mode == BenchmarkConfig::Mode::kHomophily)
      inst = gen_homophily({s.n, s.h, 0.8, 0.2, seed});
    else
      inst = gen_diverse({s.n, s.K, cfg.a, s.omega, seed});
  } catch (const std::exception& e) {
    gen_error = e.what();
  }

  for (Method m : cfg.methods) {
    BenchmarkRow row = base;
    row.method = method_name(m);
    if (!inst) {
      row.error = gen_error;
      rows.push_back(row);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const std::uint64_t cseed = derive_seed(seed, kClusterTask);
      if (cfg.mode == BenchmarkConfig::Mode::kKSelect) {
        const KSelection sel = select_K(inst->A, cfg.k_min, cfg.k_max, make_cluster_fn(m, cfg.restarts),
                                        cfg.penalty, cseed);
        row.k_hat = sel.k_hat;
      } else {
        const Assignment z = cluster_graph(inst->A, s.K, m, cfg.restarts, cseed);
        row.clustering_error = clustering_error(z, inst->truth);
        row.estimation_error = estimation_error(estimate_blocks(inst->A, z).p_hat, inst->P);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "ssc") return Method::kSsc;
  if (name == "sc") return Method::kSc;
  throw Error("unknown method '" + name + "' (expected ssc or sc)");
}

std::string method_name(Method m) { return m == Method::kSsc ? "ssc" : "sc"; }

Assignment cluster_graph(const MatrixXd& a, int K, Method method, int restarts, std::uint64_t seed) {
  if (method == Method::kSc) return spectral_cluster(a, K, restarts, seed);
  SSCConfig cfg;
  cfg.kmeans_restarts = restarts;
  cfg.seed = seed;
  return ssc_cluster(a, K, cfg);
}

ClusterFn make_cluster_fn(Method method, int restarts) {
  return [method, restarts](const MatrixXd& a, int K, std::uint64_t seed) {
    return cluster_graph(a, K, method, restarts, seed);
  };
}

PabmInstance generate(const GeneratorSpec& spec) {
  if (spec.model == GeneratorSpec::Model::kHomophily) return gen_homophily({spec.n, spec.h, 0.8, 0.2, spec.seed});
  return gen_diverse({spec.n, spec.K, spec.a, spec.omega, spec.seed});
}

Json generate_json(const GeneratorSpec& spec) {
  const PabmInstance inst = generate(spec);
  InstanceMeta meta;
  if (spec.model == GeneratorSpec::Model::kHomophily) {
    meta.model = "homophily";
    meta.settings = {{"h", spec.h}, {"hi", 0.8}, {"lo", 0.2}};
  } else {
    meta.model = "diverse";
    meta.settings = {{"a", spec.a}, {"omega", spec.omega}};
  }
  Json j = instance_to_json(inst, meta);
  j["settings"]["sparsity_level"] = sparsity_level(inst.P);
  j["settings"]["density"] = density(inst.A);
  return j;
}

Graph load_graph(const GraphSource& source) {
  Graph g;
  if (source.input && ends_with(*source.input, ".json")) {
    std::ifstream in(*source.input);
    if (!in) throw Error("cannot open '" + *source.input + "'");
    LoadedInstance inst = instance_from_json(Json::parse(in));
    g.A = std::move(inst.A);
    g.P = std::move(inst.P);
    g.truth = std::move(inst.truth);
  } else if (source.input) {
    EdgeListSpec spec = source.edge_list;
    spec.path = *source.input;
    EdgeListGraph e = read_edge_list(spec);
    g.A = std::move(e.adjacency);
    g.ids = std::move(e.ids);
  } else {
    PabmInstance inst = generate(source.generator);
    g.A = std::move(inst.A);
    g.P = std::move(inst.P);
    g.truth = std::move(inst.truth);
  }
  if (g.A.rows() < 2) throw Error("graph has fewer than two nodes");
  return g;
}

Json run_cluster(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.source);
  const MatrixXd& target = clustering_target(g, cfg);
  const std::uint64_t cseed = derive_seed(cfg.seed, kClusterTask);

  Assignment z = Assignment::trivial(static_cast<int>(target.rows()));
  if (cfg.method == Method::kSsc && cfg.similarity_out) {
    SSCConfig ssc;
    ssc.kmeans_restarts = cfg.restarts;
    ssc.seed = cseed;
    const SimilarityMatrix sim = self_representation(target, ssc, cfg.K);
    std::ofstream out(*cfg.similarity_out);
    if (!out) throw Error("cannot write '" + *cfg.similarity_out + "'");
    write_similarity_triplets(out, sim.similarity);
    if (cfg.K > 1) z = spectral_cluster(sim.similarity, cfg.K, cfg.restarts, cseed);
  } else {
    z = cluster_graph(target, cfg.K, cfg.method, cfg.restarts, cseed);
  }
  const EstimateReport est = estimate_blocks(target, z);

  Json j = header(g, cfg);
  j["K"] = cfg.K;
  if (!g.ids.empty()) j["ids"] = g.ids;
  j["assignment"] = z.one_based();
  j["objective"] = est.objective;
  add_truth_metrics(j, g, z);
  if (g.P) j["estimation_error"] = estimation_error(est.p_hat, *g.P);
  return j;
}

Json run_estimate(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.source);
  const MatrixXd& target = clustering_target(g, cfg);
  const std::vector<std::string> ids = g.ids.empty() ? default_ids(target.rows()) : g.ids;
  const Assignment z = cfg.labels ? labels_from_file(*cfg.labels, ids)
                                  : cluster_graph(target, cfg.K, cfg.method, cfg.restarts,
                                                  derive_seed(cfg.seed, kClusterTask));
  const EstimateReport est = estimate_blocks(target, z);

  Json j = header(g, cfg);
  j["K"] = z.communities();
  j["labels_from"] = cfg.labels ? *cfg.labels : std::string("clustering");
  if (!g.ids.empty()) j["ids"] = g.ids;
  j["assignment"] = z.one_based();
  const Json fit = estimate_to_json(est, cfg.include_p_hat);
  for (const auto& [key, value] : fit.items()) j[key] = value;
  j["fit_error"] = estimation_error(est.p_hat, g.A);
  if (g.P) j["estimation_error"] = estimation_error(est.p_hat, *g.P);
  add_truth_metrics(j, g, z);
  return j;
}

Json run_select_k(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.source);
  const MatrixXd& target = clustering_target(g, cfg);
  const KSelection sel = select_K(target, cfg.k_min, cfg.k_max, make_cluster_fn(cfg.method, cfg.restarts),
                                  cfg.penalty, derive_seed(cfg.seed, kClusterTask));
  Json j = header(g, cfg);
  j["k_min"] = cfg.k_min;
  j["k_max"] = cfg.k_max;
  j["penalty"] = cfg.penalty.kind == PenaltySpec::Kind::kPractical ? "practical" : "theoretical";
  if (cfg.penalty.kind == PenaltySpec::Kind::kTheoretical)
    j["h"] = {cfg.penalty.h1, cfg.penalty.h2, cfg.penalty.h3};
  j["density"] = density(target);
  j["K_hat"] = sel.k_hat;
  Json table = Json::array();
  for (const auto& row : sel.table) {
    Json r;
    r["K"] = row.K;
    r["ok"] = row.ok;
    if (row.ok) {
      r["objective"] = row.objective;
      r["penalty"] = row.penalty;
      r["criterion"] = row.criterion;
    } else {
      r["error"] = row.error;
    }
    table.push_back(std::move(r));
  }
  j["table"] = std::move(table);
  if (!g.ids.empty()) j["ids"] = g.ids;
  for (const auto& row : sel.table)
    if (row.K == sel.k_hat) {
      j["assignment"] = row.assignment->one_based();
      add_truth_metrics(j, g, *row.assignment);
    }
  return j;
}

Json run_eval(const RunConfig& cfg) {
  if (!cfg.labels) throw Error("eval needs --labels");
  Graph g = load_graph(cfg.source);
  const std::vector<std::string> ids = g.ids.empty() ? default_ids(g.A.rows()) : g.ids;
  const Assignment z = labels_from_file(*cfg.labels, ids);
  if (cfg.truth) g.truth = labels_from_file(*cfg.truth, ids);
  const EstimateReport est = estimate_blocks(g.A, z);

  Json j;
  j["n"] = g.A.rows();
  j["K"] = z.communities();
  j["density"] = density(g.A);
  j["objective"] = est.objective;
  j["fit_error"] = estimation_error(est.p_hat, g.A);
  if (g.P) j["estimation_error"] = estimation_error(est.p_hat, *g.P);
  add_truth_metrics(j, g, z);
  return j;
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.runs < 1) throw Error("benchmark: runs must be positive");
  if (cfg.methods.empty()) throw Error("benchmark: no methods");
  const std::vector<Setting> settings = settings_for(cfg);
  const std::size_t jobs = settings.size() * static_cast<std::size_t>(cfg.runs);
  std::vector<std::vector<BenchmarkRow>> results(jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const int setting = static_cast<int>(job / static_cast<std::size_t>(cfg.runs));
      const int run = static_cast<int>(job % static_cast<std::size_t>(cfg.runs));
      results[job] = run_job(cfg, settings[static_cast<std::size_t>(setting)], setting, run);
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<BenchmarkRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkConfig& cfg, const std::vector<BenchmarkRow>& rows) {
  const bool kselect = cfg.mode == BenchmarkConfig::Mode::kKSelect;
  out << "n,K,omega,a,h,run,method," << (kselect ? "k_hat" : "clustering_error,estimation_error")
      << ",elapsed_ms,error\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.K << ',' << format_double(r.omega) << ',' << format_double(r.a) << ','
        << format_double(r.h) << ',' << r.run << ',' << r.method << ',';
    if (kselect)
      out << r.k_hat;
    else
      out << format_double(r.clustering_error) << ',' << format_double(r.estimation_error);
    out << ',' << elapsed_field(cfg, r.elapsed_ms) << ',' << csv_text(r.error) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const BenchmarkConfig& cfg, const std::vector<BenchmarkRow>& rows) {
  struct Acc {
    const BenchmarkRow* first = nullptr;
    int ok = 0;
    int failed = 0;
    double cerr = 0.0;
    double eerr = 0.0;
    std::map<int, int> k_hat;
  };
  // Preserves row order: keys are (setting, method index) in first-seen order.
  std::vector<std::pair<std::pair<int, std::string>, Acc>> groups;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.setting, r.method);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, Acc{}});
      it = groups.end() - 1;
      it->second.first = &r;
    }
    Acc& acc = it->second;
    if (!r.error.empty()) {
      ++acc.failed;
      continue;
    }
    ++acc.ok;
    acc.cerr += r.clustering_error;
    acc.eerr += r.estimation_error;
    ++acc.k_hat[r.k_hat];
  }

  if (cfg.mode == BenchmarkConfig::Mode::kKSelect) {
    out << "K_true,n,omega,method,k_hat,frequency,runs_ok,failures\n";
    for (const auto& [key, acc] : groups)
      for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        const auto it = acc.k_hat.find(k);
        const double freq = acc.ok > 0 && it != acc.k_hat.end() ? double(it->second) / acc.ok : 0.0;
        out << acc.first->K << ',' << acc.first->n << ',' << format_double(acc.first->omega) << ','
            << key.second << ',' << k << ',' << format_double(freq) << ',' << acc.ok << ',' << acc.failed << '\n';
      }
    return;
  }
  out << "n,K,omega,a,h,method,runs_ok,failures,mean_clustering_error,mean_estimation_error\n";
  for (const auto& [key, acc] : groups) {
    const double cm = acc.ok > 0 ? acc.cerr / acc.ok : 0.0;
    const double em = acc.ok > 0 ? acc.eerr / acc.ok : 0.0;
    out << acc.first->n << ',' << acc.first->K << ',' << format_double(acc.first->omega) << ','
        << format_double(acc.first->a) << ',' << format_double(acc.first->h) << ',' << key.second << ','
        << acc.ok << ',' << acc.failed << ',' << format_double(cm) << ',' << format_double(em) << '\n';
  }
}

}  // namespace pabm
