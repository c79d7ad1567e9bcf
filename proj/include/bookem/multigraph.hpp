#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bookem {

using Vertex = int;
using EdgeId = int;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

struct Edge {
    Vertex u = -1;
    Vertex v = -1;
};

/// Undirected multigraph over dense vertex ids 0..n-1. Parallel edges are
/// allowed, self-loops are rejected at insertion. Vertex-id order doubles as
/// the fixed global vertex order used by the type machinery.
class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(int n) : inc_(static_cast<size_t>(n)) {}

    int num_vertices() const { return static_cast<int>(inc_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    Vertex add_vertex() {
        inc_.emplace_back();
        return num_vertices() - 1;
    }

    EdgeId add_edge(Vertex u, Vertex v) {
        if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices())
            throw ContractViolation("add_edge: endpoint out of range");
        if (u == v) throw ContractViolation("add_edge: self-loops are rejected");
        EdgeId e = num_edges();
        edges_.push_back({u, v});
        inc_[static_cast<size_t>(u)].push_back(e);
        inc_[static_cast<size_t>(v)].push_back(e);
        return e;
    }

    const Edge& edge(EdgeId e) const {
        if (e < 0 || e >= num_edges()) throw ContractViolation("edge: unknown edge id");
        return edges_[static_cast<size_t>(e)];
    }

    Vertex other(EdgeId e, Vertex w) const {
        const Edge& ed = edge(e);
        return ed.u == w ? ed.v : ed.u;
    }

    std::span<const EdgeId> incident(Vertex v) const {
        return {inc_[static_cast<size_t>(v)].data(), inc_[static_cast<size_t>(v)].size()};
    }

    int degree(Vertex v) const { return static_cast<int>(inc_[static_cast<size_t>(v)].size()); }

    const std::vector<Edge>& edges() const { return edges_; }

    bool is_connected() const;
    /// Vertex sets of connected components, each sorted; isolated vertices
    /// form their own components.
    std::vector<std::vector<Vertex>> connected_components() const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> inc_;
};

/// One biconnected component (or single edge), with a map back to the parent.
struct Block {
    MultiGraph graph;                  // local vertex ids 0..k-1
    std::vector<Vertex> to_parent;     // local -> parent vertex id (injective)
    std::vector<EdgeId> edge_to_parent;  // local edge -> parent edge id
};

struct BlockDecomposition {
    std::vector<Block> blocks;
    std::vector<Vertex> cut_vertices;  // sorted parent vertex ids
};

/// Biconnected components of a connected multigraph. Throws on disconnected
/// input; connected components are the caller's concern.
BlockDecomposition blocks(const MultiGraph& g);

/// Complement of a spanning forest; minimum by the standard exchange fact.
std::vector<EdgeId> feedback_edge_set(const MultiGraph& g);

/// Contract edge e, merging its endpoints into one vertex. Parallel edges
/// produced by the contraction are kept, self-loops are dropped. Vertex ids
/// are re-packed to stay dense.
MultiGraph contract_edge(const MultiGraph& g, EdgeId e);

/// Replace edge e by a path of two edges through one fresh vertex (id = n).
MultiGraph subdivide_edge(const MultiGraph& g, EdgeId e);

/// Parse either the "u v" edge-list format ('#' comments, blank lines
/// ignored) or the JSON document {"n": int, "edges": [[u,v], ...]}.
/// Edge-list vertex labels are normalized to 0..n-1 in first-appearance order.
MultiGraph parse_graph(std::string_view text);

std::string to_edge_list(const MultiGraph& g);
std::string to_json(const MultiGraph& g);

/// Induced sub-multigraph on an edge subset, keeping only touched vertices.
/// Fills optional maps from local ids back to g's ids.
MultiGraph edge_subgraph(const MultiGraph& g, std::span<const EdgeId> edges,
                         std::vector<Vertex>* vertex_map = nullptr,
                         std::vector<EdgeId>* edge_map = nullptr);

}  // namespace bookem
