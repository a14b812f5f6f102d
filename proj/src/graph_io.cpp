#include "grnf/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "grnf/errors.hpp"
#include "grnf/rng.hpp"

namespace grnf {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw ValidationError("write failure on " + path);
}

Graph graph_from_json(const json& j, double attribute_bound) {
    Graph g;
    g.n = j.at("n").get<int>();
    g.directed = j.value("directed", false);

    const auto& nodes = j.at("nodes");
    if (!nodes.is_array() || nodes.size() != static_cast<std::size_t>(std::max(g.n, 0))) {
        throw ValidationError("graph json: nodes must list each of the n nodes once");
    }
    // First pass fixes the attribute arity; ids must cover 0..n-1 exactly.
    g.node_attr_dim = nodes.empty() ? 0 : static_cast<int>(nodes.front().value("attr", json::array()).size());
    g.node_attrs.assign(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.node_attr_dim), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(std::max(g.n, 0)), 0);
    for (const auto& node : nodes) {
        const int id = node.at("id").get<int>();
        if (id < 0 || id >= g.n) throw ValidationError("graph json: node id out of range");
        if (seen[static_cast<std::size_t>(id)]) throw ValidationError("graph json: duplicate node id");
        seen[static_cast<std::size_t>(id)] = 1;
        const auto attr = node.value("attr", json::array());
        if (static_cast<int>(attr.size()) != g.node_attr_dim) {
            throw ValidationError("graph json: node attribute arity is not uniform");
        }
        for (int c = 0; c < g.node_attr_dim; ++c) {
            g.node_attrs[static_cast<std::size_t>(id) * static_cast<std::size_t>(g.node_attr_dim) +
                         static_cast<std::size_t>(c)] = attr[static_cast<std::size_t>(c)].get<double>();
        }
    }

    const auto edges = j.value("edges", json::array());
    g.edge_attr_dim =
        edges.empty() ? 0 : static_cast<int>(edges.front().value("attr", json::array()).size());
    struct Row {
        int src, dst;
        std::vector<double> attr;
    };
    std::vector<Row> rows;
    rows.reserve(edges.size());
    for (const auto& edge : edges) {
        Row row;
        row.src = edge.at("src").get<int>();
        row.dst = edge.at("dst").get<int>();
        const auto attr = edge.value("attr", json::array());
        if (static_cast<int>(attr.size()) != g.edge_attr_dim) {
            throw ValidationError("graph json: edge attribute arity is not uniform");
        }
        row.attr = attr.get<std::vector<double>>();
        if (!g.directed && row.src > row.dst) std::swap(row.src, row.dst);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    for (const auto& row : rows) {
        g.edges.emplace_back(row.src, row.dst);
        g.edge_attrs.insert(g.edge_attrs.end(), row.attr.begin(), row.attr.end());
    }
    validate_graph(g, attribute_bound);
    return g;
}

json graph_to_json(const Graph& g) {
    json nodes = json::array();
    for (int i = 0; i < g.n; ++i) {
        json node{{"id", i}};
        if (g.node_attr_dim > 0) {
            node["attr"] = std::vector<double>(g.node_attr(i), g.node_attr(i) + g.node_attr_dim);
        }
        nodes.push_back(std::move(node));
    }
    json edges = json::array();
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        json edge{{"src", g.edges[e].first}, {"dst", g.edges[e].second}};
        if (g.edge_attr_dim > 0) {
            edge["attr"] = std::vector<double>(g.edge_attr(e), g.edge_attr(e) + g.edge_attr_dim);
        }
        edges.push_back(std::move(edge));
    }
    return json{{"n", g.n}, {"directed", g.directed}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace

Graph parse_graph_json(const std::string& text, double attribute_bound) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("graph json: parse failure: ") + e.what());
    }
    try {
        return graph_from_json(j, attribute_bound);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("graph json: schema violation: ") + e.what());
    }
}

std::string write_graph_json(const Graph& g) { return graph_to_json(g).dump(2) + "\n"; }

Graph load_graph(const std::string& path, double attribute_bound) {
    return parse_graph_json(read_file(path), attribute_bound);
}

void save_graph(const Graph& g, const std::string& path) { write_file(path, write_graph_json(g)); }

Corpus parse_corpus_jsonl(const std::string& text, double attribute_bound) {
    Corpus corpus;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ValidationError("corpus line " + std::to_string(line_no) + ": parse failure: " +
                                  e.what());
        }
        try {
            corpus.graphs.push_back(graph_from_json(j.at("graph"), attribute_bound));
            corpus.labels.push_back(j.at("label").get<int>());
        } catch (const json::exception& e) {
            throw ValidationError("corpus line " + std::to_string(line_no) +
                                  ": schema violation: " + e.what());
        }
    }
    if (corpus.graphs.empty()) throw ValidationError("corpus: no graphs found");
    return corpus;
}

std::string write_corpus_jsonl(const Corpus& corpus) {
    if (corpus.graphs.size() != corpus.labels.size()) {
        throw ValidationError("corpus: graphs and labels differ in length");
    }
    std::string out;
    for (std::size_t i = 0; i < corpus.graphs.size(); ++i) {
        json j{{"graph", graph_to_json(corpus.graphs[i])}, {"label", corpus.labels[i]}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

Corpus load_corpus(const std::string& path, double attribute_bound) {
    return parse_corpus_jsonl(read_file(path), attribute_bound);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    write_file(path, write_corpus_jsonl(corpus));
}

// ===== Benchmark flat files =====

namespace {

std::vector<std::vector<double>> parse_numeric_rows(const std::string& path) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        std::vector<double> row;
        std::string cell;
        std::istringstream cells(line);
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError(path + ": non-numeric cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> parse_int_column(const std::string& path) {
    std::vector<int> out;
    for (const auto& row : parse_numeric_rows(path)) {
        if (row.size() != 1) throw ValidationError(path + ": expected one value per line");
        out.push_back(static_cast<int>(std::llround(row[0])));
    }
    return out;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TuDataset parse_tu_dataset(const std::string& directory, const std::string& name) {
    const std::string prefix = directory + "/" + name + "_";
    const auto edge_rows = parse_numeric_rows(prefix + "A.txt");
    const auto indicator = parse_int_column(prefix + "graph_indicator.txt");
    const auto graph_labels = parse_int_column(prefix + "graph_labels.txt");
    const int total_nodes = static_cast<int>(indicator.size());
    const int graph_count = static_cast<int>(graph_labels.size());
    for (int gi : indicator) {
        if (gi < 1 || gi > graph_count) {
            throw ValidationError("graph_indicator refers to a graph without a label");
        }
    }

    // Optional per-node channels: one-hot node labels first, then attributes.
    std::vector<int> node_labels;
    std::vector<int> label_channel;  // node label value -> channel
    int onehot_dim = 0;
    if (file_exists(prefix + "node_labels.txt")) {
        node_labels = parse_int_column(prefix + "node_labels.txt");
        if (static_cast<int>(node_labels.size()) != total_nodes) {
            throw ValidationError("node_labels length does not match graph_indicator");
        }
        std::set<int> distinct(node_labels.begin(), node_labels.end());
        std::map<int, int> channel_of;
        for (int v : distinct) channel_of[v] = onehot_dim++;
        label_channel.reserve(node_labels.size());
        for (int v : node_labels) label_channel.push_back(channel_of[v]);
    }
    std::vector<std::vector<double>> node_attr_rows;
    int attr_dim = 0;
    if (file_exists(prefix + "node_attributes.txt")) {
        node_attr_rows = parse_numeric_rows(prefix + "node_attributes.txt");
        if (static_cast<int>(node_attr_rows.size()) != total_nodes) {
            throw ValidationError("node_attributes length does not match graph_indicator");
        }
        attr_dim = static_cast<int>(node_attr_rows.front().size());
        for (const auto& row : node_attr_rows) {
            if (static_cast<int>(row.size()) != attr_dim) {
                throw ValidationError("node_attributes arity is not uniform");
            }
        }
    }
    std::vector<std::vector<double>> edge_attr_rows;
    int edge_dim = 0;
    if (file_exists(prefix + "edge_attributes.txt")) {
        edge_attr_rows = parse_numeric_rows(prefix + "edge_attributes.txt");
        if (edge_attr_rows.size() != edge_rows.size()) {
            throw ValidationError("edge_attributes length does not match A.txt");
        }
        edge_dim = static_cast<int>(edge_attr_rows.front().size());
    }

    // Global node id -> (graph, local id), locals in ascending global order.
    std::vector<int> local_id(static_cast<std::size_t>(total_nodes));
    std::vector<int> node_count(static_cast<std::size_t>(graph_count), 0);
    for (int v = 0; v < total_nodes; ++v) {
        const int gi = indicator[static_cast<std::size_t>(v)] - 1;
        local_id[static_cast<std::size_t>(v)] = node_count[static_cast<std::size_t>(gi)]++;
    }

    TuDataset data;
    const int node_dim = onehot_dim + attr_dim;
    data.corpus.graphs.resize(static_cast<std::size_t>(graph_count));
    data.corpus.labels = graph_labels;
    for (int gi = 0; gi < graph_count; ++gi) {
        Graph& g = data.corpus.graphs[static_cast<std::size_t>(gi)];
        g.n = node_count[static_cast<std::size_t>(gi)];
        if (g.n == 0) throw ValidationError("graph " + std::to_string(gi + 1) + " has no nodes");
        g.node_attr_dim = node_dim;
        g.node_attrs.assign(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(node_dim), 0.0);
        g.edge_attr_dim = edge_dim;
    }
    for (int v = 0; v < total_nodes; ++v) {
        const int gi = indicator[static_cast<std::size_t>(v)] - 1;
        Graph& g = data.corpus.graphs[static_cast<std::size_t>(gi)];
        if (node_dim == 0) continue;
        double* row = g.node_attrs.data() +
                      static_cast<std::size_t>(local_id[static_cast<std::size_t>(v)]) *
                          static_cast<std::size_t>(node_dim);
        if (onehot_dim > 0) row[label_channel[static_cast<std::size_t>(v)]] = 1.0;
        for (int c = 0; c < attr_dim; ++c) {
            row[onehot_dim + c] = node_attr_rows[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)];
        }
    }

    // Symmetrize edges; when both orientations appear, the src < dst row's
    // attributes win. Self-loops are dropped and counted.
    struct PendingEdge {
        std::size_t row;
        bool forward;  // row listed src < dst
    };
    std::vector<std::map<std::pair<int, int>, PendingEdge>> pending(
        static_cast<std::size_t>(graph_count));
    for (std::size_t r = 0; r < edge_rows.size(); ++r) {
        const auto& row = edge_rows[r];
        if (row.size() != 2) throw ValidationError("A.txt: expected two ids per line");
        const int a = static_cast<int>(std::llround(row[0]));
        const int b = static_cast<int>(std::llround(row[1]));
        if (a < 1 || a > total_nodes || b < 1 || b > total_nodes) {
            throw ValidationError("A.txt: node id out of range");
        }
        if (a == b) {
            ++data.dropped_self_loops;
            continue;
        }
        const int gi = indicator[static_cast<std::size_t>(a - 1)] - 1;
        if (indicator[static_cast<std::size_t>(b - 1)] - 1 != gi) {
            throw ValidationError("A.txt: edge crosses graph boundaries");
        }
        const int la = local_id[static_cast<std::size_t>(a - 1)];
        const int lb = local_id[static_cast<std::size_t>(b - 1)];
        const bool forward = la < lb;
        const std::pair<int, int> key{std::min(la, lb), std::max(la, lb)};
        auto& slot = pending[static_cast<std::size_t>(gi)];
        auto it = slot.find(key);
        if (it == slot.end()) {
            slot[key] = PendingEdge{r, forward};
        } else if (forward && !it->second.forward) {
            it->second = PendingEdge{r, forward};
        }
    }
    for (int gi = 0; gi < graph_count; ++gi) {
        Graph& g = data.corpus.graphs[static_cast<std::size_t>(gi)];
        for (const auto& [key, pe] : pending[static_cast<std::size_t>(gi)]) {
            g.edges.push_back(key);
            if (edge_dim > 0) {
                const auto& attr = edge_attr_rows[pe.row];
                if (static_cast<int>(attr.size()) != edge_dim) {
                    throw ValidationError("edge_attributes arity is not uniform");
                }
                g.edge_attrs.insert(g.edge_attrs.end(), attr.begin(), attr.end());
            }
        }
        // Benchmark attributes are unbounded; require finiteness only.
        for (double v : g.node_attrs) {
            if (!std::isfinite(v)) throw ValidationError("node attribute is not finite");
        }
        for (double v : g.edge_attrs) {
            if (!std::isfinite(v)) throw ValidationError("edge attribute is not finite");
        }
    }
    return data;
}

// ===== Stochastic block model =====

std::vector<Graph> sbm_generate(const SbmParams& params, int count, std::uint64_t seed) {
    if (params.n < 1) throw ValidationError("sbm: n must be positive");
    int total = 0;
    for (int size : params.communities) {
        if (size < 1) throw ValidationError("sbm: community sizes must be positive");
        total += size;
    }
    if (total != params.n) throw ValidationError("sbm: community sizes must sum to n");
    if (params.p_in < 0.0 || params.p_in > 1.0 || params.p_out < 0.0 || params.p_out > 1.0) {
        throw ValidationError("sbm: probabilities must lie in [0,1]");
    }
    if (count < 0) throw ValidationError("sbm: count must be non-negative");

    std::vector<int> community(static_cast<std::size_t>(params.n));
    int node = 0;
    for (std::size_t c = 0; c < params.communities.size(); ++c) {
        for (int i = 0; i < params.communities[c]; ++i) {
            community[static_cast<std::size_t>(node++)] = static_cast<int>(c);
        }
    }

    std::vector<Graph> graphs;
    graphs.reserve(static_cast<std::size_t>(count));
    for (int index = 0; index < count; ++index) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
        Graph g;
        g.n = params.n;
        for (int i = 0; i < params.n; ++i) {
            for (int j = i + 1; j < params.n; ++j) {
                const double p = community[static_cast<std::size_t>(i)] ==
                                         community[static_cast<std::size_t>(j)]
                                     ? params.p_in
                                     : params.p_out;
                if (rng.uniform01() < p) g.edges.emplace_back(i, j);
            }
        }
        graphs.push_back(std::move(g));
    }
    return graphs;
}

}  // namespace grnf
