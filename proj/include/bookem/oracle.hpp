#pragma once

#include <optional>
#include <vector>

#include "bookem/multigraph.hpp"

namespace bookem {

/// Spine order plus page assignment. Pages are 1-based.
struct BookEmbedding {
    std::vector<Vertex> order;
    std::vector<int> pages;  // indexed by edge id
};

/// Cyclic permutation of V(G); a witness when G plus its edges is planar.
struct HamiltonianWitness {
    std::vector<Vertex> cycle;
};

/// Conflict graph feasibility for one fixed spine order: edges of g are
/// nodes, adjacency is strict interleaving. Bipartite test for pages == 2,
/// exhaustive coloring otherwise. Returns nullopt when infeasible.
std::optional<std::vector<int>> pages_given_order(const MultiGraph& g,
                                                  const std::vector<Vertex>& order, int pages);

struct OracleResult {
    bool yes = false;
    std::vector<Vertex> order;  // feasible spine order on yes
};

/// Exhaustive SUBHAM decision over spine orders (vertex 0 pinned first,
/// reflections pruned). Throws when n exceeds the cap.
OracleResult brute_force_subham(const MultiGraph& g, int cap = 11);

/// Exhaustive Book Thickness decision; caps at 8 vertices for pages >= 3.
bool brute_force_book_thickness(const MultiGraph& g, int pages, int cap = 8);

/// True iff order covers V(g), pages lie in [1, pages] and no two same-page
/// edges strictly interleave.
bool verify_embedding(const MultiGraph& g, const BookEmbedding& emb, int pages);

/// True iff h is a Hamiltonian cyclic permutation and g plus h is planar.
bool verify_witness(const MultiGraph& g, const HamiltonianWitness& h);

/// Strict interleaving test for two edges under position ranks.
bool edges_conflict(const MultiGraph& g, EdgeId a, EdgeId b, const std::vector<int>& pos);

}  // namespace bookem
