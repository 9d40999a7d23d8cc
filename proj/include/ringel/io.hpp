#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ringel/embedder.hpp"
#include "ringel/graph.hpp"
#include "ringel/hypergraph.hpp"
#include "ringel/matching.hpp"
#include "ringel/oracle.hpp"
#include "ringel/params.hpp"
#include "ringel/partition.hpp"
#include "ringel/tree.hpp"

namespace ringel {

using json = nlohmann::json;

// Graphs: {"n": .., "edges": [[u, v], ...]} or "u v" lines. A line holding a
// single integer fixes the vertex count; otherwise it is one past the
// largest endpoint.
json to_json(const Graph& g);
Graph graph_from_json(const json& j);
Graph read_edge_list(std::istream& is);
void write_edge_list(std::ostream& os, const Graph& g);

// Trees: the same JSON shape, or a parent array with one entry per line.
json to_json(const Tree& t);
Tree tree_from_json(const json& j);
Tree read_parent_array(std::istream& is);

// {"host": .., "tree": .., "copies": [{"map": [...]}, ...]}
json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const json& j);

json to_json(const Digraph& d);
void write_dot(std::ostream& os, const Digraph& d);
json to_json(const TreePartition& tp);
json to_json(const BipartiteInstance& b);
BipartiteInstance bipartite_from_json(const json& j);
json to_json(const WeightedHypergraph& h);
WeightedHypergraph hypergraph_from_json(const json& j);

// Configuration as a flat object of field names. Unknown keys and values of
// the wrong type throw ConfigError. Changing n, c or eps re-derives the
// dependent fields unless those are given explicitly in the same layer.
json to_json(const ParamConfig& cfg);
void apply_config(ParamConfig& cfg, const json& layer);
// "key=value" with a JSON or bare numeric value.
void apply_assignment(ParamConfig& cfg, const std::string& assignment);

// Everything random or accumulated in a state; the tree partition and label
// scheme are recomputed from the tree and configuration on restore.
json snapshot(const EmbeddingState& st);
EmbeddingState restore(const json& j);

// time,layer,metric,value with shortest round-trip number formatting.
void write_metrics_csv(std::ostream& os, const std::vector<Metric>& metrics, bool header = true);
std::string format_number(double v);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ringel
