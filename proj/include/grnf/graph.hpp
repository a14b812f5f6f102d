#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "grnf/tensor.hpp"

namespace grnf {

inline constexpr double kDefaultAttributeBound = 10.0;

// Attributed graph. Node attributes are a flat n x node_attr_dim row-major
// array (node_attr_dim == 0 means unattributed nodes); edge attributes run
// parallel to `edges`. Undirected graphs store each edge once with src < dst.
struct Graph {
    int n = 0;
    bool directed = false;
    int node_attr_dim = 0;
    int edge_attr_dim = 0;
    std::vector<double> node_attrs;            // n * node_attr_dim
    std::vector<std::pair<int, int>> edges;    // src < dst when undirected
    std::vector<double> edge_attrs;            // edges.size() * edge_attr_dim

    // 1-node graph with the single zero attribute; its tensor is the 1x1x1
    // zero tensor used as the centering reference.
    static Graph null();

    const double* node_attr(int i) const {
        return node_attrs.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(node_attr_dim);
    }
    const double* edge_attr(std::size_t e) const {
        return edge_attrs.data() + e * static_cast<std::size_t>(edge_attr_dim);
    }

    // Channel count of the tensor encoding: max(node_attr_dim, edge_attr_dim, 1).
    int tensor_channels() const;
};

// Structural and numeric validation; throws ValidationError (see graph_io.hpp)
// on out-of-range ids, self-loops, duplicate edges, attribute arity mismatch,
// or non-finite / out-of-bound attribute values.
void validate_graph(const Graph& g, double attribute_bound = kDefaultAttributeBound);

// Node-relabeled copy: node i of the result is node pi(i) of g, so
// graph_to_tensor(relabel_graph(g, pi)) == apply_permutation(graph_to_tensor(g), pi).
Graph relabel_graph(const Graph& g, const Permutation& pi);

// Order-2 encoding: node attributes on the diagonal, edge attributes off the
// diagonal, zero-padded to d = max(node_dim, edge_dim, 1) channels. Entities
// that carry no attribute vector get a 1.0 presence marker in channel 0
// (plain adjacency for unattributed graphs). Undirected edges are written
// symmetrically.
DenseTensor graph_to_tensor(const Graph& g);

}  // namespace grnf
