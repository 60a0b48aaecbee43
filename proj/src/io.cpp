#include "pabm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace pabm {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, bool comma) {
  std::vector<std::string> out;
  if (comma) {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  } else {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
  }
  return out;
}

bool parse_integer(const std::string& s, long long& value) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool parse_real(const std::string& s, double& value) {
  if (s.empty()) return false;
  std::istringstream ss(s);
  ss >> value;
  return !ss.fail() && ss.eof() && std::isfinite(value);
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

}  // namespace

EdgeListGraph parse_edge_list(std::istream& in, const EdgeListSpec& spec) {
  if (!std::isfinite(spec.threshold)) throw Error("edge list: threshold must be finite");
  const bool comma = spec.delimiter == EdgeListSpec::Delimiter::kComma;
  std::vector<std::pair<std::string, std::string>> kept;
  std::set<std::string> seen;
  EdgeListGraph g;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;
    const auto tok = split(line, comma);
    const std::size_t need = spec.weighted ? 3 : 2;
    if (tok.size() < need || tok.size() > 3 || tok[0].empty() || tok[1].empty())
      throw Error("edge list line " + std::to_string(line_no) + ": expected " +
                  (spec.weighted ? "'u v w'" : "'u v'") + ", got '" + line + "'");
    for (int t = 0; t < 2; ++t) {
      long long id;
      if (parse_integer(tok[t], id) && id < (spec.one_based ? 1 : 0))
        throw Error("edge list line " + std::to_string(line_no) + ": node id " + tok[t] + " invalid for " +
                    (spec.one_based ? "1-based" : "0-based") + " indexing");
    }
    bool keep = true;
    if (spec.weighted) {
      double w;
      if (!parse_real(tok[2], w))
        throw Error("edge list line " + std::to_string(line_no) + ": bad weight '" + tok[2] + "'");
      keep = spec.binarize ? w != 0.0 : w > spec.threshold;
    }
    seen.insert(tok[0]);
    seen.insert(tok[1]);
    ++g.edges_read;
    if (tok[0] == tok[1]) {
      ++g.self_loops;
      continue;
    }
    if (keep) kept.emplace_back(tok[0], tok[1]);
  }
  if (g.self_loops > 0) std::cerr << "warning: dropped " << g.self_loops << " self-loop line(s)\n";

  g.ids.assign(seen.begin(), seen.end());
  const bool numeric = std::all_of(g.ids.begin(), g.ids.end(), [](const std::string& s) {
    long long v;
    return parse_integer(s, v);
  });
  if (numeric)
    std::stable_sort(g.ids.begin(), g.ids.end(), [](const std::string& x, const std::string& y) {
      long long a = 0, b = 0;
      parse_integer(x, a);
      parse_integer(y, b);
      return a < b;
    });
  std::map<std::string, Index> index;
  for (std::size_t i = 0; i < g.ids.size(); ++i) index.emplace(g.ids[i], static_cast<Index>(i));

  const auto n = static_cast<Index>(g.ids.size());
  g.adjacency = MatrixXd::Zero(n, n);
  for (const auto& [u, v] : kept) {
    const Index i = index.at(u), j = index.at(v);
    g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
  }
  return g;
}

EdgeListGraph read_edge_list(const EdgeListSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw Error("cannot open edge list '" + spec.path + "'");
  return parse_edge_list(in, spec);
}

std::map<std::string, std::string> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto tok = split(line, false);
    if (tok.size() != 2) throw Error("label file line " + std::to_string(line_no) + ": expected 'id label'");
    out[tok[0]] = tok[1];
  }
  return out;
}

Assignment labels_for_ids(const std::map<std::string, std::string>& labels, const std::vector<std::string>& ids) {
  std::map<std::string, int> codes;
  for (const auto& id : ids) {
    auto it = labels.find(id);
    if (it == labels.end()) throw Error("no label for node '" + id + "'");
    codes.emplace(it->second, 0);
  }
  const bool numeric = std::all_of(codes.begin(), codes.end(), [](const auto& kv) {
    long long v;
    return parse_integer(kv.first, v);
  });
  std::vector<std::string> order;
  for (const auto& kv : codes) order.push_back(kv.first);
  if (numeric)
    std::stable_sort(order.begin(), order.end(), [](const std::string& x, const std::string& y) {
      long long a = 0, b = 0;
      parse_integer(x, a);
      parse_integer(y, b);
      return a < b;
    });
  for (std::size_t c = 0; c < order.size(); ++c) codes[order[c]] = static_cast<int>(c);
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(codes.at(labels.at(id)));
  return Assignment(std::move(out), static_cast<int>(order.size()));
}

void write_similarity_triplets(std::ostream& out, const MatrixXd& s) {
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = i; j < s.cols(); ++j)
      if (s(i, j) != 0.0) out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(s(i, j)) << '\n';
}

Json edge_list_json(const MatrixXd& a) {
  Json edges = Json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0.0) edges.push_back({i + 1, j + 1});
  return edges;
}

MatrixXd adjacency_from_edge_json(const Json& edges, int n) {
  MatrixXd a = MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    const int i = e.at(0).get<int>() - 1, j = e.at(1).get<int>() - 1;
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error("instance: edge index out of range");
    if (i == j) continue;
    a(i, j) = a(j, i) = 1.0;
  }
  return a;
}

Json matrix_to_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json instance_to_json(const PabmInstance& inst, const InstanceMeta& meta) {
  Json j;
  j["format"] = "pabm-instance";
  j["model"] = meta.model;
  j["n"] = inst.truth.size();
  j["K"] = inst.truth.communities();
  j["seed"] = inst.seed;
  j["settings"] = meta.settings;
  j["truth"] = inst.truth.one_based();
  j["lambda"] = matrix_to_json(inst.params.lambda);
  j["edges"] = edge_list_json(inst.A);
  return j;
}

LoadedInstance instance_from_json(const Json& j) {
  if (j.value("format", std::string()) != "pabm-instance") throw Error("not a pabm-instance JSON file");
  const int n = j.at("n").get<int>();
  const int K = j.at("K").get<int>();
  const auto truth_labels = j.at("truth").get<std::vector<int>>();
  if (static_cast<int>(truth_labels.size()) != n) throw Error("instance: truth length differs from n");
  Assignment truth = Assignment::from_one_based(truth_labels, K);
  MatrixXd lambda(n, K);
  const auto& rows = j.at("lambda");
  if (static_cast<int>(rows.size()) != n) throw Error("instance: lambda must have n rows");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != K) throw Error("instance: lambda must have K columns");
    for (int l = 0; l < K; ++l) lambda(i, l) = rows[i][l].get<double>();
  }
  MatrixXd p = assemble_probability(PabmParams{std::move(lambda), truth});
  return {adjacency_from_edge_json(j.at("edges"), n), std::move(p), std::move(truth), j.value("seed", std::uint64_t{0})};
}

Json estimate_to_json(const EstimateReport& report, bool include_p_hat) {
  Json j;
  j["objective"] = report.objective;
  j["block_sigma"] = matrix_to_json(report.block_sigma);
  if (include_p_hat) j["p_hat"] = matrix_to_json(report.p_hat);
  return j;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace pabm
