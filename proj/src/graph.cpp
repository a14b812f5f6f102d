#include "grnf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "grnf/errors.hpp"

namespace grnf {

Graph Graph::null() {
    Graph g;
    g.n = 1;
    g.node_attr_dim = 1;
    g.node_attrs = {0.0};
    return g;
}

int Graph::tensor_channels() const {
    return std::max({node_attr_dim, edge_attr_dim, 1});
}

void validate_graph(const Graph& g, double attribute_bound) {
    if (g.n <= 0) throw ValidationError("graph: node count must be positive");
    if (g.node_attr_dim < 0 || g.edge_attr_dim < 0) {
        throw ValidationError("graph: attribute dimensions must be non-negative");
    }
    if (g.node_attrs.size() !=
        static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.node_attr_dim)) {
        throw ValidationError("graph: node attribute array has wrong length");
    }
    if (g.edge_attrs.size() !=
        g.edges.size() * static_cast<std::size_t>(g.edge_attr_dim)) {
        throw ValidationError("graph: edge attribute array has wrong length");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& [src, dst] : g.edges) {
        if (src < 0 || src >= g.n || dst < 0 || dst >= g.n) {
            throw ValidationError("graph: edge endpoint out of range");
        }
        if (src == dst) throw ValidationError("graph: self-loops are not representable");
        if (!g.directed && src > dst) {
            throw ValidationError("graph: undirected edges must be stored with src < dst");
        }
        if (!seen.insert({src, dst}).second) {
            throw ValidationError("graph: duplicate edge");
        }
    }
    for (double v : g.node_attrs) {
        if (!std::isfinite(v) || std::abs(v) > attribute_bound) {
            throw ValidationError("graph: node attribute not finite or outside bound " +
                                  std::to_string(attribute_bound));
        }
    }
    for (double v : g.edge_attrs) {
        if (!std::isfinite(v) || std::abs(v) > attribute_bound) {
            throw ValidationError("graph: edge attribute not finite or outside bound " +
                                  std::to_string(attribute_bound));
        }
    }
}

Graph relabel_graph(const Graph& g, const Permutation& pi) {
    if (pi.n() != g.n) throw ValidationError("relabel_graph: permutation size mismatch");
    Graph out;
    out.n = g.n;
    out.directed = g.directed;
    out.node_attr_dim = g.node_attr_dim;
    out.edge_attr_dim = g.edge_attr_dim;
    out.node_attrs.resize(g.node_attrs.size());
    for (int i = 0; i < g.n; ++i) {
        const double* src = g.node_attr(pi(i));
        std::copy(src, src + g.node_attr_dim,
                  out.node_attrs.begin() +
                      static_cast<std::size_t>(i) * static_cast<std::size_t>(g.node_attr_dim));
    }
    const Permutation inv = pi.inverse();
    // Keep (edge, attribute) rows paired, then normalize undirected order.
    std::vector<std::size_t> order(g.edges.size());
    std::vector<std::pair<int, int>> mapped(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int a = inv(g.edges[e].first);
        int b = inv(g.edges[e].second);
        if (!g.directed && a > b) std::swap(a, b);
        mapped[e] = {a, b};
        order[e] = e;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return mapped[x] < mapped[y]; });
    out.edges.reserve(g.edges.size());
    out.edge_attrs.reserve(g.edge_attrs.size());
    for (std::size_t e : order) {
        out.edges.push_back(mapped[e]);
        const double* src = g.edge_attr(e);
        out.edge_attrs.insert(out.edge_attrs.end(), src, src + g.edge_attr_dim);
    }
    return out;
}

DenseTensor graph_to_tensor(const Graph& g) {
    const int d = g.tensor_channels();
    DenseTensor t(2, g.n, d);
    double* data = t.data();
    const std::size_t ch = static_cast<std::size_t>(d);
    const std::size_t n = static_cast<std::size_t>(g.n);
    for (std::size_t i = 0; i < n; ++i) {
        double* cell = data + (i * n + i) * ch;
        if (g.node_attr_dim > 0) {
            const double* a = g.node_attr(static_cast<int>(i));
            std::copy(a, a + g.node_attr_dim, cell);
        } else {
            cell[0] = 1.0;  // presence marker for unattributed nodes
        }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [src, dst] = g.edges[e];
        double* fwd = data + (static_cast<std::size_t>(src) * n + static_cast<std::size_t>(dst)) * ch;
        if (g.edge_attr_dim > 0) {
            const double* a = g.edge_attr(e);
            std::copy(a, a + g.edge_attr_dim, fwd);
        } else {
            fwd[0] = 1.0;  // presence marker for unattributed edges
        }
        if (!g.directed) {
            double* bwd = data + (static_cast<std::size_t>(dst) * n + static_cast<std::size_t>(src)) * ch;
            std::copy(fwd, fwd + d, bwd);
        }
    }
    return t;
}

}  // namespace grnf
