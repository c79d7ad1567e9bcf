#pragma once

// Shared test-only helpers: small-graph construction, an exhaustive
// non-isomorphic connected-graph generator, a rotation-system planarity
// oracle, and a deterministic rng. Everything here is deliberately
// independent of the library's own algorithms wherever it serves as an
// oracle.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "bookem/multigraph.hpp"

namespace testsup {

using bookem::EdgeId;
using bookem::MultiGraph;
using bookem::Vertex;

inline MultiGraph cycle(int n) {
    MultiGraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

inline MultiGraph complete(int n) {
    MultiGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

inline MultiGraph theta(int parallel_edges = 3) {
    MultiGraph g(2);
    for (int i = 0; i < parallel_edges; ++i) g.add_edge(0, 1);
    return g;
}

/// Goldner-Harary graph: 11-vertex maximal planar, non-Hamiltonian. Built as
/// the triangular bipyramid (apexes 0,1 over triangle 2,3,4) with one new
/// vertex stellating each of its six faces.
inline MultiGraph goldner_harary() {
    MultiGraph g(11);
    int tri[3] = {2, 3, 4};
    for (int apex : {0, 1})
        for (int c : tri) g.add_edge(apex, c);
    g.add_edge(2, 3);
    g.add_edge(3, 4);
    g.add_edge(4, 2);
    Vertex next = 5;
    for (int apex : {0, 1})
        for (int i = 0; i < 3; ++i) {
            Vertex s = next++;
            g.add_edge(s, apex);
            g.add_edge(s, tri[i]);
            g.add_edge(s, tri[(i + 1) % 3]);
        }
    return g;
}

/// splitmix64, for deterministic cross-platform test randomness.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

/// Adjacency bitmask canonical form: minimum over all vertex permutations.
inline uint64_t canonical_mask(int n, uint64_t mask) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    auto bit = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        int idx = 0;
        for (int a = 0; a < i; ++a) idx += n - 1 - a;
        idx += j - i - 1;
        return idx;
    };
    uint64_t best = ~0ull;
    do {
        uint64_t m = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (mask >> bit(i, j) & 1) m |= 1ull << bit(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
        best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// All connected simple graphs on exactly n vertices, one per isomorphism
/// class, built by extending the (n-1)-vertex classes with one new vertex.
/// Counts for n = 1..7: 1, 1, 2, 6, 21, 112, 853.
inline std::vector<MultiGraph> connected_graphs(int n) {
    auto bit = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        int idx = 0;
        for (int a = 0; a < i; ++a) idx += n - 1 - a;
        idx += j - i - 1;
        return idx;
    };
    std::vector<uint64_t> masks;
    if (n == 1) {
        masks.push_back(0);
    } else {
        std::vector<MultiGraph> prev = connected_graphs(n - 1);
        std::set<uint64_t> seen;
        for (const MultiGraph& p : prev) {
            uint64_t base = 0;
            for (const bookem::Edge& e : p.edges()) base |= 1ull << bit(e.u, e.v);
            int new_v = n - 1;
            for (uint64_t nb = 1; nb < (1ull << (n - 1)); ++nb) {
                uint64_t m = base;
                for (int j = 0; j < n - 1; ++j)
                    if (nb >> j & 1) m |= 1ull << bit(j, new_v);
                uint64_t canon = canonical_mask(n, m);
                if (seen.insert(canon).second) masks.push_back(canon);
            }
        }
    }
    std::vector<MultiGraph> out;
    for (uint64_t m : masks) {
        MultiGraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (m >> bit(i, j) & 1) g.add_edge(i, j);
        out.push_back(std::move(g));
    }
    return out;
}

/// Rotation-system planarity oracle: a graph is planar iff some rotation
/// system has Euler-consistent face count. Exponential; only for tiny
/// inputs. Independent of the library's planarity code.
inline bool planar_by_rotation_search(const MultiGraph& g) {
    int n = g.num_vertices();
    int m = g.num_edges();
    if (m == 0) return true;
    // per-vertex incident dart lists
    std::vector<std::vector<int>> darts(static_cast<size_t>(n));
    for (EdgeId e = 0; e < m; ++e) {
        darts[static_cast<size_t>(g.edge(e).u)].push_back(2 * e);
        darts[static_cast<size_t>(g.edge(e).v)].push_back(2 * e + 1);
    }
    // count faces of one rotation assignment
    auto count_faces = [&](const std::vector<std::vector<int>>& rot) {
        std::vector<int> nxt(static_cast<size_t>(2 * m), -1);
        for (const auto& r : rot)
            for (size_t i = 0; i < r.size(); ++i) {
                int d = r[i];
                int succ = r[(i + 1) % r.size()];
                nxt[static_cast<size_t>(d)] = succ;
            }
        std::vector<char> used(static_cast<size_t>(2 * m), 0);
        int faces = 0;
        for (int d0 = 0; d0 < 2 * m; ++d0) {
            if (used[static_cast<size_t>(d0)]) continue;
            faces++;
            int d = d0;
            do {
                used[static_cast<size_t>(d)] = 1;
                d = nxt[static_cast<size_t>(d ^ 1)];
            } while (d != d0);
        }
        return faces;
    };
    // per component with edges: n_i - m_i + f_i = 2; orbits count every
    // component's outer face separately and isolated vertices have none
    int target = 0;
    for (const auto& comp : g.connected_components()) {
        int mi = 0;
        for (Vertex v : comp) mi += g.degree(v);
        mi /= 2;
        if (mi > 0) target += 2 - static_cast<int>(comp.size()) + mi;
    }

    // DFS over rotations: first vertex's rotation fixed up to cyclic shift.
    std::vector<std::vector<int>> rot(static_cast<size_t>(n));
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == n) return count_faces(rot) == target;
        std::vector<int>& ds = darts[static_cast<size_t>(v)];
        if (ds.size() <= 2) {
            rot[static_cast<size_t>(v)] = ds;
            return rec(v + 1);
        }
        std::vector<int> perm(ds.begin() + 1, ds.end());
        std::sort(perm.begin(), perm.end());
        do {
            rot[static_cast<size_t>(v)] = {ds[0]};
            rot[static_cast<size_t>(v)].insert(rot[static_cast<size_t>(v)].end(), perm.begin(), perm.end());
            if (rec(v + 1)) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };
    return rec(0);
}

}  // namespace testsup
