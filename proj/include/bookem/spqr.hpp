#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bookem/multigraph.hpp"

namespace bookem {

enum class SpqrKind { S, P, Q, R };

struct SpqrEdgeTag {
    enum Kind { Real, Virtual, Reference } kind = Real;
    int child = -1;     // tree node on the far side (Q node for Real, subtree for Virtual)
    EdgeId g_edge = -1;  // for Real / Reference-at-root-child edges
};

struct SpqrNode {
    SpqrKind kind = SpqrKind::Q;
    MultiGraph skeleton;            // local vertex ids
    std::vector<Vertex> skel_to_g;  // local -> input graph vertex
    std::vector<SpqrEdgeTag> tags;  // per skeleton edge
    int parent = -1;
    EdgeId ref_edge = -1;  // local skeleton edge carrying the Reference tag (-1 at root)
    Vertex pole_s = -1, pole_t = -1;  // reference edge endpoints in G ids, pole_s < pole_t
    std::vector<int> children;
};

/// Rooted SPQR-tree: Q-nodes for every real edge, S/P/R nodes from the
/// canonical split decomposition (bond-bond and polygon-polygon merged).
/// The root is the Q-node of the chosen reference edge.
struct SpqrTree {
    std::vector<SpqrNode> nodes;
    int root = -1;
    EdgeId ref_g_edge = -1;

    const SpqrNode& node(int id) const { return nodes[static_cast<size_t>(id)]; }
};

/// Build the SPQR-tree of a biconnected multigraph with m >= 2 rooted at the
/// Q-node of edge ref.
SpqrTree build_spqr(const MultiGraph& g, EdgeId ref);

/// Pertinent graph of node b: skeleton minus reference edge with every
/// virtual/real edge replaced by its expansion. vertex_map gives local -> G.
MultiGraph pertinent_graph(const SpqrTree& t, const MultiGraph& g, int b,
                           std::vector<Vertex>* vertex_map = nullptr,
                           std::vector<EdgeId>* edge_map = nullptr);

/// G edge ids inside Pe(b), sorted.
std::vector<EdgeId> pertinent_edges(const SpqrTree& t, int b);

/// G vertices inside Pe(b), poles included, sorted.
std::vector<Vertex> pertinent_vertices(const SpqrTree& t, const MultiGraph& g, int b);

/// Indented text dump (debug only, no stability guarantee).
std::string dump(const SpqrTree& t);

/// DOT-like structural output (debug only).
std::string dump_dot(const SpqrTree& t);

/// Structural checks: skeleton kinds, no adjacent S-S / P-P, reconstruction
/// identity. Throws ContractViolation on failure.
void validate_spqr(const SpqrTree& t, const MultiGraph& g);

/// Canonical string of the unrooted tree shape with (kind, skeleton size)
/// labels; equal strings <=> isomorphic unrooted trees under that labeling.
std::string unrooted_canonical_form(const SpqrTree& t);

}  // namespace bookem
