#pragma once

#include "pabm/core.hpp"
#include "pabm/estimator.hpp"
#include "pabm/generator.hpp"

#include <json.hpp>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pabm {

using Json = nlohmann::ordered_json;

struct EdgeListSpec {
  enum class Delimiter { kWhitespace, kComma };
  std::string path;
  Delimiter delimiter = Delimiter::kWhitespace;
  bool one_based = false;
  bool weighted = false;
  double threshold = 0.0;  // weighted: keep edge iff w > threshold
  bool binarize = false;   // weighted: keep edge iff w != 0, ignoring threshold
};

struct EdgeListGraph {
  MatrixXd adjacency;
  std::vector<std::string> ids;  // ids[index] = external node id
  std::size_t self_loops = 0;
  std::size_t edges_read = 0;
};

// Nodes are the distinct ids in the file, sorted numerically when every id
// is an integer and lexicographically otherwise.
EdgeListGraph read_edge_list(const EdgeListSpec& spec);
EdgeListGraph parse_edge_list(std::istream& in, const EdgeListSpec& spec);

// "id label" lines (whitespace or comma separated); '#' starts a comment.
std::map<std::string, std::string> read_label_file(const std::string& path);

// Aligns external labels with node ids; arbitrary label strings are
// compacted to 1..K in sorted order. Throws if a node has no label.
Assignment labels_for_ids(const std::map<std::string, std::string>& labels, const std::vector<std::string>& ids);

// One "i j s_ij" line per nonzero entry with i <= j, 1-based.
void write_similarity_triplets(std::ostream& out, const MatrixXd& s);

// Upper-triangle edges of a 0/1 matrix, 1-based pairs (i < j).
Json edge_list_json(const MatrixXd& a);
MatrixXd adjacency_from_edge_json(const Json& edges, int n);

struct InstanceMeta {
  std::string model;  // "diverse" or "homophily"
  Json settings;      // generator settings
};

Json instance_to_json(const PabmInstance& inst, const InstanceMeta& meta);

struct LoadedInstance {
  MatrixXd A;
  MatrixXd P;
  Assignment truth;
  std::uint64_t seed;
};
LoadedInstance instance_from_json(const Json& j);

Json estimate_to_json(const EstimateReport& report, bool include_p_hat);
Json matrix_to_json(const MatrixXd& m);

// Fixed formatting for CSV and text outputs.
std::string format_double(double x);

}  // namespace pabm
