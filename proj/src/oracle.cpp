#include "bookem/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "bookem/planarity.hpp"

namespace bookem {

bool edges_conflict(const MultiGraph& g, EdgeId a, EdgeId b, const std::vector<int>& pos) {
    auto [a1, a2] = std::minmax(pos[static_cast<size_t>(g.edge(a).u)], pos[static_cast<size_t>(g.edge(a).v)]);
    auto [b1, b2] = std::minmax(pos[static_cast<size_t>(g.edge(b).u)], pos[static_cast<size_t>(g.edge(b).v)]);
    // strict interleaving; shared endpoints and parallel edges never conflict
    return (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2);
}

namespace {

std::vector<std::vector<int>> conflict_graph(const MultiGraph& g, const std::vector<int>& pos) {
    int m = g.num_edges();
    std::vector<std::vector<int>> adj(static_cast<size_t>(m));
    for (EdgeId a = 0; a < m; ++a)
        for (EdgeId b = a + 1; b < m; ++b)
            if (edges_conflict(g, a, b, pos)) {
                adj[static_cast<size_t>(a)].push_back(b);
                adj[static_cast<size_t>(b)].push_back(a);
            }
    return adj;
}

std::optional<std::vector<int>> two_color(const std::vector<std::vector<int>>& adj) {
    int m = static_cast<int>(adj.size());
    std::vector<int> color(static_cast<size_t>(m), 0);
    for (int s = 0; s < m; ++s) {
        if (color[static_cast<size_t>(s)] != 0) continue;
        color[static_cast<size_t>(s)] = 1;
        std::vector<int> st = {s};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : adj[static_cast<size_t>(v)]) {
                if (color[static_cast<size_t>(w)] == 0) {
                    color[static_cast<size_t>(w)] = 3 - color[static_cast<size_t>(v)];
                    st.push_back(w);
                } else if (color[static_cast<size_t>(w)] == color[static_cast<size_t>(v)]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

bool k_color(const std::vector<std::vector<int>>& adj, int k, std::vector<int>& color, size_t i) {
    if (i == adj.size()) return true;
    for (int c = 1; c <= k; ++c) {
        bool ok = true;
        for (int w : adj[i])
            if (static_cast<size_t>(w) < i && color[static_cast<size_t>(w)] == c) {
                ok = false;
                break;
            }
        if (!ok) continue;
        color[i] = c;
        if (k_color(adj, k, color, i + 1)) return true;
    }
    color[i] = 0;
    return false;
}

}  // namespace

std::optional<std::vector<int>> pages_given_order(const MultiGraph& g,
                                                  const std::vector<Vertex>& order, int pages) {
    int n = g.num_vertices();
    if (static_cast<int>(order.size()) != n)
        throw ContractViolation("pages_given_order: order is not a permutation");
    std::vector<int> pos(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < order.size(); ++i) {
        Vertex v = order[i];
        if (v < 0 || v >= n || pos[static_cast<size_t>(v)] != -1)
            throw ContractViolation("pages_given_order: order is not a permutation");
        pos[static_cast<size_t>(v)] = static_cast<int>(i);
    }
    auto adj = conflict_graph(g, pos);
    if (pages >= 2) {
        // quick bipartite path covers pages == 2 exactly
        if (pages == 2) {
            auto col = two_color(adj);
            if (!col) return std::nullopt;
            return col;
        }
        std::vector<int> color(adj.size(), 0);
        if (k_color(adj, pages, color, 0)) return color;
        return std::nullopt;
    }
    if (pages == 1) {
        for (const auto& nb : adj)
            if (!nb.empty()) return std::nullopt;
        return std::vector<int>(adj.size(), 1);
    }
    if (g.num_edges() == 0) return std::vector<int>{};
    return std::nullopt;
}

namespace {

// Enumerate spine orders with vertex 0 pinned at position 0 and the mirror
// order pruned (order[1] < order[n-1]); conflicts are rotation- and
// reflection-invariant, so this is exhaustive for the decision.
template <typename Fn>
bool for_each_order(int n, Fn&& fn) {
    std::vector<Vertex> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (n <= 2) return fn(order);
    std::vector<Vertex> rest(order.begin() + 1, order.end());
    do {
        if (n >= 3 && rest.front() > rest.back()) continue;
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        if (fn(order)) return true;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return false;
}

}  // namespace

OracleResult brute_force_subham(const MultiGraph& g, int cap) {
    int n = g.num_vertices();
    if (n > cap) throw ContractViolation("brute_force_subham: size cap exceeded");
    OracleResult res;
    if (n == 0) {
        res.yes = true;
        return res;
    }
    for_each_order(n, [&](const std::vector<Vertex>& order) {
        if (pages_given_order(g, order, 2)) {
            res.yes = true;
            res.order = order;
            return true;
        }
        return false;
    });
    return res;
}

bool brute_force_book_thickness(const MultiGraph& g, int pages, int cap) {
    int n = g.num_vertices();
    if (pages >= 3 && n > cap) throw ContractViolation("brute_force_book_thickness: size cap exceeded");
    if (pages <= 2 && n > 11) throw ContractViolation("brute_force_book_thickness: size cap exceeded");
    if (n == 0) return true;
    return for_each_order(n, [&](const std::vector<Vertex>& order) {
        return pages_given_order(g, order, pages).has_value();
    });
}

bool verify_embedding(const MultiGraph& g, const BookEmbedding& emb, int pages) {
    int n = g.num_vertices();
    if (static_cast<int>(emb.order.size()) != n) return false;
    std::vector<int> pos(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < emb.order.size(); ++i) {
        Vertex v = emb.order[i];
        if (v < 0 || v >= n || pos[static_cast<size_t>(v)] != -1) return false;
        pos[static_cast<size_t>(v)] = static_cast<int>(i);
    }
    if (static_cast<int>(emb.pages.size()) != g.num_edges()) return false;
    for (int p : emb.pages)
        if (p < 1 || p > pages) return false;
    for (EdgeId a = 0; a < g.num_edges(); ++a)
        for (EdgeId b = a + 1; b < g.num_edges(); ++b)
            if (emb.pages[static_cast<size_t>(a)] == emb.pages[static_cast<size_t>(b)] &&
                edges_conflict(g, a, b, pos))
                return false;
    return true;
}

bool verify_witness(const MultiGraph& g, const HamiltonianWitness& h) {
    int n = g.num_vertices();
    if (static_cast<int>(h.cycle.size()) != n) return false;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (Vertex v : h.cycle) {
        if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) return false;
        seen[static_cast<size_t>(v)] = 1;
    }
    if (n < 3) return true;  // any graph on <= 2 vertices is subhamiltonian
    return planar_with_cycle(g, h.cycle);
}

}  // namespace bookem
