#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grnf/graph.hpp"

namespace grnf {

// Labeled graph collection used by generators, corpus files and experiments.
struct Corpus {
    std::vector<Graph> graphs;
    std::vector<int> labels;  // one per graph

    std::size_t size() const { return graphs.size(); }
};

// Single-graph JSON document:
//   {n, directed, nodes:[{id, attr:[..]}], edges:[{src, dst, attr:[..]}]}
// Node ids must cover 0..n-1 exactly once; attribute arity must be uniform
// (absent everywhere or present everywhere within nodes/edges); self-loops,
// duplicate edges (either orientation when undirected) and out-of-range ids
// are rejected. Undirected edges are normalized to src < dst.
Graph parse_graph_json(const std::string& text, double attribute_bound = kDefaultAttributeBound);
std::string write_graph_json(const Graph& g);
Graph load_graph(const std::string& path, double attribute_bound = kDefaultAttributeBound);
void save_graph(const Graph& g, const std::string& path);

// JSON-lines corpus: one {"graph": <graph document>, "label": <int>} per line.
Corpus parse_corpus_jsonl(const std::string& text,
                          double attribute_bound = kDefaultAttributeBound);
std::string write_corpus_jsonl(const Corpus& corpus);
Corpus load_corpus(const std::string& path, double attribute_bound = kDefaultAttributeBound);
void save_corpus(const Corpus& corpus, const std::string& path);

// Benchmark flat-file layout: DIR/NAME_A.txt (1-based "i, j" pairs),
// DIR/NAME_graph_indicator.txt, DIR/NAME_graph_labels.txt, plus optional
// NAME_node_labels.txt (one-hot encoded into the leading attribute channels),
// NAME_node_attributes.txt (appended after the one-hot channels) and
// NAME_edge_attributes.txt (aligned with A.txt rows; the src < dst row wins
// when both orientations are listed). Self-loops are dropped and counted.
// Attribute values are checked for finiteness only; benchmark attributes are
// not range-bounded.
struct TuDataset {
    Corpus corpus;
    int dropped_self_loops = 0;
};
TuDataset parse_tu_dataset(const std::string& directory, const std::string& name);

// Stochastic block model: nodes split into consecutive communities; each
// within-community pair joined independently with p_in, cross-community with
// p_out. Graphs are unattributed and undirected.
struct SbmParams {
    int n = 12;
    std::vector<int> communities = {12};  // sizes, must sum to n
    double p_in = 0.4;
    double p_out = 0.1;
};

// `count` graphs; graph i draws from a stream seeded with hash(seed, i), so
// any prefix of the list is reproducible independently of the rest.
std::vector<Graph> sbm_generate(const SbmParams& params, int count, std::uint64_t seed);

}  // namespace grnf
