#include "bookem/planarity.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace bookem {

void CombinatorialEmbedding::recompute_faces(const MultiGraph& g) {
    int nd = 2 * g.num_edges();
    std::vector<int> rot_pos(static_cast<size_t>(nd), -1);
    for (const auto& rot : rotation)
        for (size_t i = 0; i < rot.size(); ++i) rot_pos[static_cast<size_t>(rot[i])] = static_cast<int>(i);
    face_of.assign(static_cast<size_t>(nd), -1);
    face_darts.clear();
    // darts absent from every rotation (partial embeddings) carry no face
    for (int d0 = 0; d0 < nd; ++d0) {
        if (rot_pos[static_cast<size_t>(d0)] == -1) continue;
        if (face_of[static_cast<size_t>(d0)] != -1) continue;
        int f = num_faces();
        face_darts.emplace_back();
        int d = d0;
        do {
            face_of[static_cast<size_t>(d)] = f;
            face_darts.back().push_back(d);
            int t = twin(d);
            Vertex v = tail(g, t);
            const auto& rot = rotation[static_cast<size_t>(v)];
            int pos = rot_pos[static_cast<size_t>(t)];
            d = rot[(static_cast<size_t>(pos) + 1) % rot.size()];
        } while (d != d0);
    }
    if (outer_face >= num_faces()) outer_face = 0;
}

std::vector<Vertex> CombinatorialEmbedding::face_vertices(const MultiGraph& g, int f) const {
    std::vector<Vertex> out;
    for (int d : face_darts[static_cast<size_t>(f)]) out.push_back(tail(g, d));
    return out;
}

namespace {

// Demoucron-Malgrange-Pertuiset face insertion on a simple biconnected
// graph with n >= 3. Returns false on non-planar input.
bool dmp_embed(const MultiGraph& g, CombinatorialEmbedding& emb) {
    int n = g.num_vertices();
    int m = g.num_edges();
    // Find an initial cycle by DFS.
    std::vector<EdgeId> via(static_cast<size_t>(n), -1);
    std::vector<Vertex> parent(static_cast<size_t>(n), -1);
    std::vector<int> state(static_cast<size_t>(n), 0);
    std::vector<Vertex> cyc;
    {
        std::vector<Vertex> st = {0};
        state[0] = 1;
        EdgeId back = -1;
        Vertex back_from = -1, back_to = -1;
        while (!st.empty() && back == -1) {
            Vertex v = st.back();
            st.pop_back();
            for (EdgeId e : g.incident(v)) {
                if (e == via[static_cast<size_t>(v)]) continue;
                Vertex w = g.other(e, v);
                if (state[static_cast<size_t>(w)] == 0) {
                    state[static_cast<size_t>(w)] = 1;
                    via[static_cast<size_t>(w)] = e;
                    parent[static_cast<size_t>(w)] = v;
                    st.push_back(w);
                } else {
                    back = e;
                    back_from = v;
                    back_to = w;
                    break;
                }
            }
        }
        if (back == -1) return true;  // forest; callers never pass one
        // Walk tree path back_from -> back_to. back_to is an ancestor of
        // back_from in DFS order only for the stack-based search if we are
        // lucky; walk both ancestor chains instead.
        std::vector<Vertex> chain_a, chain_b;
        for (Vertex x = back_from; x != -1; x = parent[static_cast<size_t>(x)]) chain_a.push_back(x);
        for (Vertex x = back_to; x != -1; x = parent[static_cast<size_t>(x)]) chain_b.push_back(x);
        std::set<Vertex> in_a(chain_a.begin(), chain_a.end());
        Vertex meet = -1;
        for (Vertex x : chain_b)
            if (in_a.count(x)) {
                meet = x;
                break;
            }
        for (Vertex x : chain_a) {
            cyc.push_back(x);
            if (x == meet) break;
        }
        std::vector<Vertex> tailv;
        for (Vertex x : chain_b) {
            if (x == meet) break;
            tailv.push_back(x);
        }
        std::reverse(tailv.begin(), tailv.end());
        for (Vertex x : tailv) cyc.push_back(x);
    }

    auto find_edge = [&](Vertex a, Vertex b) -> EdgeId {
        for (EdgeId e : g.incident(a))
            if (g.other(e, a) == b) return e;
        return -1;
    };

#ifdef BOOKEM_DMP_TRACE
    fprintf(stderr, "init cycle:");
    for (Vertex v : cyc) fprintf(stderr, " %d", v);
    fprintf(stderr, "\n");
#endif
    emb.rotation.assign(static_cast<size_t>(n), {});
    std::vector<char> in_h_v(static_cast<size_t>(n), 0);
    std::vector<char> in_h_e(static_cast<size_t>(m), 0);
    int embedded = 0;
    for (size_t i = 0; i < cyc.size(); ++i) {
        Vertex a = cyc[i];
        Vertex b = cyc[(i + 1) % cyc.size()];
        EdgeId e = find_edge(a, b);
        assert(e != -1 && !in_h_e[static_cast<size_t>(e)]);
        in_h_e[static_cast<size_t>(e)] = 1;
        in_h_v[static_cast<size_t>(a)] = 1;
        embedded++;
        int d = 2 * e + (g.edge(e).u == a ? 0 : 1);
        emb.rotation[static_cast<size_t>(a)].push_back(d);
        emb.rotation[static_cast<size_t>(b)].insert(emb.rotation[static_cast<size_t>(b)].begin(),
                                                    CombinatorialEmbedding::twin(d));
    }
    emb.recompute_faces(g);

    while (embedded < m) {
        // Collect fragments relative to the embedded subgraph H.
        struct Fragment {
            std::vector<EdgeId> edges;
            std::vector<Vertex> attachments;  // sorted
        };
        std::vector<Fragment> frags;
        std::vector<int> comp(static_cast<size_t>(n), -1);
        for (Vertex s = 0; s < n; ++s) {
            if (in_h_v[static_cast<size_t>(s)] || comp[static_cast<size_t>(s)] != -1) continue;
            Fragment fr;
            std::set<Vertex> att;
            std::set<EdgeId> taken;
            std::vector<Vertex> st = {s};
            comp[static_cast<size_t>(s)] = static_cast<int>(frags.size());
            while (!st.empty()) {
                Vertex v = st.back();
                st.pop_back();
                for (EdgeId e : g.incident(v)) {
                    Vertex w = g.other(e, v);
                    if (in_h_v[static_cast<size_t>(w)]) {
                        taken.insert(e);
                        att.insert(w);
                    } else {
                        if (comp[static_cast<size_t>(w)] == -1) {
                            comp[static_cast<size_t>(w)] = comp[static_cast<size_t>(s)];
                            st.push_back(w);
                        }
                        taken.insert(e);
                    }
                }
            }
            fr.edges.assign(taken.begin(), taken.end());
            fr.attachments.assign(att.begin(), att.end());
            frags.push_back(std::move(fr));
        }
        for (EdgeId e = 0; e < m; ++e) {
            if (in_h_e[static_cast<size_t>(e)]) continue;
            Vertex u = g.edge(e).u, v = g.edge(e).v;
            if (in_h_v[static_cast<size_t>(u)] && in_h_v[static_cast<size_t>(v)]) {
                Fragment fr;
                fr.edges = {e};
                fr.attachments = {std::min(u, v), std::max(u, v)};
                frags.push_back(std::move(fr));
            }
        }
        assert(!frags.empty());

        // Face -> vertex set, then admissibility per fragment.
        std::vector<std::set<Vertex>> face_verts(static_cast<size_t>(emb.num_faces()));
        for (int f = 0; f < emb.num_faces(); ++f)
            for (int d : emb.face_darts[static_cast<size_t>(f)])
                face_verts[static_cast<size_t>(f)].insert(emb.tail(g, d));

        int best = -1;
        std::vector<int> best_adm;
        for (size_t fi = 0; fi < frags.size(); ++fi) {
            std::vector<int> adm;
            for (int f = 0; f < emb.num_faces(); ++f) {
                bool ok = true;
                for (Vertex a : frags[fi].attachments)
                    if (!face_verts[static_cast<size_t>(f)].count(a)) {
                        ok = false;
                        break;
                    }
                if (ok) adm.push_back(f);
            }
#ifdef BOOKEM_DMP_TRACE
            fprintf(stderr, "frag %zu: edges=%zu att=", fi, frags[fi].edges.size());
            for (Vertex a : frags[fi].attachments) fprintf(stderr, "%d,", a);
            fprintf(stderr, " adm=%zu\n", adm.size());
#endif
            if (adm.empty()) return false;  // fragment cannot be embedded
            if (best == -1 || adm.size() < best_adm.size()) {
                best = static_cast<int>(fi);
                best_adm = adm;
                if (best_adm.size() == 1) break;
            }
        }

        const Fragment& fr = frags[static_cast<size_t>(best)];
        int face = best_adm.front();

        // Alpha-path through the fragment between two attachments.
        std::vector<Vertex> path;
        std::vector<EdgeId> path_edges;
        if (fr.edges.size() == 1) {
            EdgeId e = fr.edges[0];
            path = {g.edge(e).u, g.edge(e).v};
            path_edges = {e};
        } else {
            Vertex a = fr.attachments[0];
            std::vector<EdgeId> how(static_cast<size_t>(n), -1);
            std::vector<char> vis(static_cast<size_t>(n), 0);
            std::vector<char> frag_edge(static_cast<size_t>(m), 0);
            for (EdgeId e : fr.edges) frag_edge[static_cast<size_t>(e)] = 1;
            std::vector<Vertex> queue = {a};
            vis[static_cast<size_t>(a)] = 1;
            Vertex found = -1;
            for (size_t qi = 0; qi < queue.size() && found == -1; ++qi) {
                Vertex v = queue[qi];
                if (in_h_v[static_cast<size_t>(v)] && v != a) continue;
                for (EdgeId e : g.incident(v)) {
                    if (!frag_edge[static_cast<size_t>(e)]) continue;
                    Vertex w = g.other(e, v);
                    if (vis[static_cast<size_t>(w)]) continue;
                    vis[static_cast<size_t>(w)] = 1;
                    how[static_cast<size_t>(w)] = e;
                    queue.push_back(w);
                    if (in_h_v[static_cast<size_t>(w)]) {
                        found = w;
                        break;
                    }
                }
            }
            assert(found != -1);
            Vertex x = found;
            path.push_back(x);
            while (x != a) {
                EdgeId e = how[static_cast<size_t>(x)];
                path_edges.push_back(e);
                x = g.other(e, x);
                path.push_back(x);
            }
            std::reverse(path.begin(), path.end());
            std::reverse(path_edges.begin(), path_edges.end());
        }

        // Locate endpoints on the face walk and splice the path in.
        Vertex a = path.front(), b = path.back();
#ifdef BOOKEM_DMP_TRACE
        fprintf(stderr, "insert path");
        for (Vertex v : path) fprintf(stderr, " %d", v);
        fprintf(stderr, " into face %d {", face);
        for (int d : emb.face_darts[static_cast<size_t>(face)]) fprintf(stderr, "%d ", emb.tail(g, d));
        fprintf(stderr, "}\n");
#endif
        const auto& walk = emb.face_darts[static_cast<size_t>(face)];
        int out_a = -1, out_b = -1;  // walk dart with tail a resp. b
        for (int d : walk) {
            Vertex t = emb.tail(g, d);
            if (t == a && out_a == -1) out_a = d;
            if (t == b && out_b == -1) out_b = d;
        }
        assert(out_a != -1 && out_b != -1 && a != b);

        auto insert_before = [&](Vertex v, int anchor, int nd) {
            auto& rot = emb.rotation[static_cast<size_t>(v)];
            auto it = std::find(rot.begin(), rot.end(), anchor);
            assert(it != rot.end());
            rot.insert(it, nd);
        };
        for (size_t k = 0; k < path_edges.size(); ++k) {
            EdgeId e = path_edges[k];
            Vertex tl = path[k], hd = path[k + 1];
            int fd = 2 * e + (g.edge(e).u == tl ? 0 : 1);
            if (k == 0)
                insert_before(tl, out_a, fd);
            else
                emb.rotation[static_cast<size_t>(tl)].push_back(fd);
            if (k + 1 == path_edges.size())
                insert_before(hd, out_b, CombinatorialEmbedding::twin(fd));
            else
                emb.rotation[static_cast<size_t>(hd)].push_back(CombinatorialEmbedding::twin(fd));
            in_h_e[static_cast<size_t>(e)] = 1;
            in_h_v[static_cast<size_t>(tl)] = 1;
            in_h_v[static_cast<size_t>(hd)] = 1;
            embedded++;
        }
        emb.recompute_faces(g);
    }
    return true;
}

// Embed one biconnected block (multigraph). Parallel bundles are collapsed
// for DMP and re-inserted next to their siblings afterwards.
bool embed_block(const MultiGraph& g, CombinatorialEmbedding& emb) {
    int n = g.num_vertices();
    int m = g.num_edges();
    emb.rotation.assign(static_cast<size_t>(n), {});
    if (m == 0) {
        emb.recompute_faces(g);
        return true;
    }
    if (n <= 2) {
        // Bundle of parallel edges; nest them.
        for (EdgeId e = 0; e < m; ++e) {
            int d = 2 * e + (g.edge(e).u == 0 ? 0 : 1);
            emb.rotation[0].push_back(d);
            if (n == 2)
                emb.rotation[1].insert(emb.rotation[1].begin(), CombinatorialEmbedding::twin(d));
        }
        emb.recompute_faces(g);
        return true;
    }

    // Simplify parallel bundles.
    std::map<std::pair<Vertex, Vertex>, std::vector<EdgeId>> bundles;
    for (EdgeId e = 0; e < m; ++e) {
        auto key = std::minmax(g.edge(e).u, g.edge(e).v);
        bundles[{key.first, key.second}].push_back(e);
    }
    MultiGraph simple(n);
    std::vector<EdgeId> rep;  // simple edge -> representative edge of g
    for (const auto& [key, list] : bundles) {
        simple.add_edge(key.first, key.second);
        rep.push_back(list.front());
    }
    if (simple.num_edges() > 3 * n - 6) return false;  // Euler bound

    CombinatorialEmbedding se;
    if (simple.num_edges() < 3)
        throw ContractViolation("embed_block: block with n >= 3 is not biconnected");
    if (!dmp_embed(simple, se)) return false;

    // Translate the simple embedding back, expanding bundles in place.
    for (Vertex v = 0; v < n; ++v) {
        for (int sd : se.rotation[static_cast<size_t>(v)]) {
            EdgeId s_e = CombinatorialEmbedding::dart_edge(sd);
            Vertex w = simple.other(s_e, v);
            const auto& bundle = bundles.at(std::minmax(v, w));
            // All copies of the bundle, nested: ascending edge id at the
            // smaller endpoint, descending at the larger one.
            std::vector<EdgeId> order = bundle;
            if (v > w) std::reverse(order.begin(), order.end());
            for (EdgeId e : order) {
                int d = 2 * e + (g.edge(e).u == v ? 0 : 1);
                emb.rotation[static_cast<size_t>(v)].push_back(d);
            }
        }
    }
    (void)rep;
    emb.recompute_faces(g);
    return true;
}

}  // namespace

std::optional<CombinatorialEmbedding> planar_embedding(const MultiGraph& g) {
    CombinatorialEmbedding emb;
    emb.rotation.assign(static_cast<size_t>(g.num_vertices()), {});
    auto comps = g.connected_components();
    for (const auto& comp : comps) {
        if (comp.size() == 1 && g.degree(comp[0]) == 0) continue;
        std::vector<EdgeId> comp_edges;
        {
            std::vector<char> in_comp(static_cast<size_t>(g.num_vertices()), 0);
            for (Vertex v : comp) in_comp[static_cast<size_t>(v)] = 1;
            for (EdgeId e = 0; e < g.num_edges(); ++e)
                if (in_comp[static_cast<size_t>(g.edge(e).u)]) comp_edges.push_back(e);
        }
        std::vector<Vertex> vmap;
        std::vector<EdgeId> emap;
        MultiGraph cg = edge_subgraph(g, comp_edges, &vmap, &emap);
        BlockDecomposition bd = blocks(cg);
        for (const Block& blk : bd.blocks) {
            CombinatorialEmbedding be;
            if (!embed_block(blk.graph, be)) return std::nullopt;
            // Splice block rotations into the global embedding; cut vertices
            // accumulate one contiguous run per block.
            for (Vertex lv = 0; lv < blk.graph.num_vertices(); ++lv) {
                Vertex cv = blk.to_parent[static_cast<size_t>(lv)];
                Vertex gv = vmap[static_cast<size_t>(cv)];
                for (int d : be.rotation[static_cast<size_t>(lv)]) {
                    EdgeId le = CombinatorialEmbedding::dart_edge(d);
                    EdgeId ge = emap[static_cast<size_t>(blk.edge_to_parent[static_cast<size_t>(le)])];
                    int gd = 2 * ge + (g.edge(ge).u == gv ? 0 : 1);
                    emb.rotation[static_cast<size_t>(gv)].push_back(gd);
                }
            }
        }
    }
    emb.recompute_faces(g);
    return emb;
}

bool planar(const MultiGraph& g) { return planar_embedding(g).has_value(); }

std::vector<std::vector<std::pair<Vertex, EdgeId>>> faces(const MultiGraph& g,
                                                          const CombinatorialEmbedding& emb) {
    if (!validate_embedding(g, emb))
        throw ContractViolation("faces: inconsistent rotation system");
    std::vector<std::vector<std::pair<Vertex, EdgeId>>> out;
    for (const auto& fd : emb.face_darts) {
        std::vector<std::pair<Vertex, EdgeId>> walk;
        for (int d : fd) walk.emplace_back(emb.tail(g, d), CombinatorialEmbedding::dart_edge(d));
        out.push_back(std::move(walk));
    }
    return out;
}

bool planar_with_cycle(const MultiGraph& g, const std::vector<Vertex>& h) {
    int n = g.num_vertices();
    if (n < 3) throw ContractViolation("planar_with_cycle: needs |V| >= 3");
    if (static_cast<int>(h.size()) != n)
        throw ContractViolation("planar_with_cycle: h is not a permutation");
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (Vertex v : h) {
        if (v < 0 || v >= n || seen[static_cast<size_t>(v)])
            throw ContractViolation("planar_with_cycle: h is not a permutation");
        seen[static_cast<size_t>(v)] = 1;
    }
    MultiGraph gh(n);
    for (const Edge& e : g.edges()) gh.add_edge(e.u, e.v);
    for (int i = 0; i < n; ++i) gh.add_edge(h[static_cast<size_t>(i)], h[static_cast<size_t>((i + 1) % n)]);
    return planar(gh);
}

bool validate_embedding(const MultiGraph& g, const CombinatorialEmbedding& emb) {
    int nd = 2 * g.num_edges();
    if (emb.num_vertices() != g.num_vertices()) return false;
    if (emb.num_darts() != nd) return false;
    std::vector<int> seen(static_cast<size_t>(nd), 0);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        for (int d : emb.rotation[static_cast<size_t>(v)]) {
            if (d < 0 || d >= nd) return false;
            if (emb.tail(g, d) != v) return false;
            seen[static_cast<size_t>(d)]++;
        }
    }
    for (int c : seen)
        if (c != 1) return false;
    std::vector<int> face_seen(static_cast<size_t>(nd), 0);
    for (const auto& fd : emb.face_darts)
        for (int d : fd) face_seen[static_cast<size_t>(d)]++;
    for (int c : face_seen)
        if (c != 1) return false;
    // Euler per connected component: n - m + f == 2 (counting one outer face
    // per component).
    auto comps = g.connected_components();
    std::vector<int> comp_of(static_cast<size_t>(g.num_vertices()), -1);
    for (size_t c = 0; c < comps.size(); ++c)
        for (Vertex v : comps[c]) comp_of[static_cast<size_t>(v)] = static_cast<int>(c);
    std::vector<int> cn(comps.size(), 0), cm(comps.size(), 0), cf(comps.size(), 0);
    for (size_t c = 0; c < comps.size(); ++c) cn[c] = static_cast<int>(comps[c].size());
    for (const Edge& e : g.edges()) cm[static_cast<size_t>(comp_of[static_cast<size_t>(e.u)])]++;
    for (const auto& fd : emb.face_darts) {
        if (fd.empty()) return false;
        cf[static_cast<size_t>(comp_of[static_cast<size_t>(emb.tail(g, fd[0]))])]++;
    }
    for (size_t c = 0; c < comps.size(); ++c) {
        if (cm[c] == 0) continue;  // isolated vertex: no faces recorded
        if (cn[c] - cm[c] + cf[c] != 2) return false;
    }
    return true;
}

}  // namespace bookem
