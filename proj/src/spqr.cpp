#include "bookem/spqr.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace bookem {

namespace {

// Intermediate piece of the split decomposition, kept in input-graph vertex
// ids. Virtual edges carry a twin-pair id shared with exactly one other
// piece.
struct PEdge {
    bool virt = false;
    int id = -1;  // g edge id, or twin-pair id when virt
    Vertex u = -1, v = -1;
};

struct Piece {
    std::vector<PEdge> edges;
    enum Kind { Undecided, Bond, Polygon, Rigid } kind = Undecided;
};

std::vector<Vertex> piece_vertices(const Piece& p) {
    std::set<Vertex> vs;
    for (const PEdge& e : p.edges) {
        vs.insert(e.u);
        vs.insert(e.v);
    }
    return {vs.begin(), vs.end()};
}

// Connected components of the piece after deleting vertices a and b;
// each component is a set of edge indices. Direct a-b edges excluded.
std::vector<std::vector<int>> classes_minus_pair(const Piece& p, Vertex a, Vertex b,
                                                 std::vector<int>* direct) {
    std::map<Vertex, std::vector<int>> inc;
    for (size_t i = 0; i < p.edges.size(); ++i) {
        const PEdge& e = p.edges[i];
        if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
            if (direct) direct->push_back(static_cast<int>(i));
            continue;
        }
        inc[e.u].push_back(static_cast<int>(i));
        inc[e.v].push_back(static_cast<int>(i));
    }
    std::set<Vertex> seen = {a, b};
    std::vector<std::vector<int>> comps;
    for (auto& [s, _] : inc) {
        if (seen.count(s)) continue;
        std::set<int> comp_edges;
        std::vector<Vertex> stack = {s};
        seen.insert(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (int ei : inc[v]) {
                comp_edges.insert(ei);
                const PEdge& e = p.edges[static_cast<size_t>(ei)];
                Vertex w = e.u == v ? e.v : e.u;
                if (w == a || w == b || seen.count(w)) continue;
                seen.insert(w);
                stack.push_back(w);
            }
        }
        comps.emplace_back(comp_edges.begin(), comp_edges.end());
    }
    return comps;
}

// Separation pair per the multigraph rules: k classes with the exclusions
// (k == 2 with a single-edge class; k == 3 all single edges).
bool is_separation_pair(const Piece& p, Vertex a, Vertex b) {
    std::vector<int> direct;
    auto comps = classes_minus_pair(p, a, b, &direct);
    size_t k = comps.size() + direct.size();
    if (k < 2) return false;
    if (k == 2 && !direct.empty()) return false;
    if (k == 3 && comps.empty()) return false;
    return true;
}

std::optional<std::pair<Vertex, Vertex>> find_separation_pair(const Piece& p) {
    std::vector<Vertex> vs = piece_vertices(p);
    // adjacency with parallel multiplicities
    std::map<std::pair<Vertex, Vertex>, int> mult;
    for (const PEdge& e : p.edges) {
        auto key = std::minmax(e.u, e.v);
        mult[{key.first, key.second}]++;
    }
    std::set<std::pair<Vertex, Vertex>> candidates;
    for (auto& [key, c] : mult)
        if (c >= 2) candidates.insert(key);
    // cut vertices of p - a for every a
    for (Vertex a : vs) {
        std::map<Vertex, std::vector<std::pair<Vertex, int>>> adj;
        for (size_t i = 0; i < p.edges.size(); ++i) {
            const PEdge& e = p.edges[i];
            if (e.u == a || e.v == a) continue;
            adj[e.u].emplace_back(e.v, static_cast<int>(i));
            adj[e.v].emplace_back(e.u, static_cast<int>(i));
        }
        if (adj.empty()) continue;
        // Tarjan articulation points on the remaining graph
        std::map<Vertex, int> disc, low;
        int timer = 0;
        std::set<Vertex> cuts;
        struct Frame {
            Vertex v;
            int via;
            size_t i = 0;
            int children = 0;
            bool skipped = false;
        };
        for (auto& [root, _] : adj) {
            if (disc.count(root)) continue;
            std::vector<Frame> st;
            st.push_back({root, -1, 0, 0, false});
            disc[root] = low[root] = timer++;
            int root_children = 0;
            while (!st.empty()) {
                Frame& f = st.back();
                auto& nb = adj[f.v];
                if (f.i < nb.size()) {
                    auto [w, ei] = nb[f.i++];
                    if (ei == f.via && !f.skipped) {
                        f.skipped = true;
                        continue;
                    }
                    if (!disc.count(w)) {
                        disc[w] = low[w] = timer++;
                        if (f.v == root) root_children++;
                        st.push_back({w, ei, 0, 0, false});
                    } else {
                        low[f.v] = std::min(low[f.v], disc[w]);
                    }
                } else {
                    Frame done = st.back();
                    st.pop_back();
                    if (st.empty()) break;
                    Frame& parent = st.back();
                    low[parent.v] = std::min(low[parent.v], low[done.v]);
                    if (parent.v != root && low[done.v] >= disc[parent.v]) cuts.insert(parent.v);
                }
            }
            if (root_children > 1) cuts.insert(root);
        }
        for (Vertex b : cuts) {
            auto key = std::minmax(a, b);
            candidates.insert({key.first, key.second});
        }
        // disconnected after removing a alone cannot happen (biconnected)
    }
    std::optional<std::pair<Vertex, Vertex>> best;
    for (const auto& cand : candidates) {
        if (is_separation_pair(p, cand.first, cand.second)) {
            if (!best || cand < *best) best = cand;
        }
    }
    return best;
}

bool is_bond(const Piece& p) {
    return piece_vertices(p).size() == 2;
}

bool is_polygon(const Piece& p) {
    auto vs = piece_vertices(p);
    if (vs.size() < 3 || vs.size() != p.edges.size()) return false;
    std::map<Vertex, int> deg;
    for (const PEdge& e : p.edges) {
        deg[e.u]++;
        deg[e.v]++;
    }
    for (auto& [v, d] : deg)
        if (d != 2) return false;
    return true;  // connected by construction
}

}  // namespace

SpqrTree build_spqr(const MultiGraph& g, EdgeId ref) {
    if (g.num_edges() < 2) throw ContractViolation("build_spqr: need at least 2 edges");
    if (!g.is_connected()) throw ContractViolation("build_spqr: input must be biconnected");
    {
        BlockDecomposition bd = blocks(g);
        if (bd.blocks.size() != 1)
            throw ContractViolation("build_spqr: input must be biconnected");
    }
    if (ref < 0 || ref >= g.num_edges()) throw ContractViolation("build_spqr: unknown reference edge");

    // ---- phase 1: split into bond / polygon / rigid pieces --------------
    int next_pair = 0;
    std::vector<Piece> done;
    std::vector<Piece> work;
    {
        Piece whole;
        for (EdgeId e = 0; e < g.num_edges(); ++e)
            whole.edges.push_back({false, e, g.edge(e).u, g.edge(e).v});
        work.push_back(std::move(whole));
    }
    while (!work.empty()) {
        Piece p = std::move(work.back());
        work.pop_back();
        if (is_bond(p)) {
            p.kind = Piece::Bond;
            done.push_back(std::move(p));
            continue;
        }
        if (is_polygon(p)) {
            p.kind = Piece::Polygon;
            done.push_back(std::move(p));
            continue;
        }
        auto pair = find_separation_pair(p);
        if (!pair) {
            p.kind = Piece::Rigid;
            done.push_back(std::move(p));
            continue;
        }
        auto [a, b] = *pair;
        std::vector<int> direct;
        auto comps = classes_minus_pair(p, a, b, &direct);
        size_t k = comps.size() + direct.size();
        assert(k >= 2);
        if (k == 2) {
            // two big classes joined directly by one twin pair
            assert(direct.empty() && comps.size() == 2);
            int pid = next_pair++;
            for (int side = 0; side < 2; ++side) {
                Piece q;
                for (int ei : comps[static_cast<size_t>(side)])
                    q.edges.push_back(p.edges[static_cast<size_t>(ei)]);
                q.edges.push_back({true, pid, a, b});
                work.push_back(std::move(q));
            }
        } else {
            // star split: a bond over {a,b} with one virtual per big class
            Piece bond;
            for (int ei : direct) bond.edges.push_back(p.edges[static_cast<size_t>(ei)]);
            for (const auto& comp : comps) {
                int pid = next_pair++;
                bond.edges.push_back({true, pid, a, b});
                Piece q;
                for (int ei : comp) q.edges.push_back(p.edges[static_cast<size_t>(ei)]);
                q.edges.push_back({true, pid, a, b});
                work.push_back(std::move(q));
            }
            bond.kind = Piece::Bond;
            done.push_back(std::move(bond));
        }
    }

    // ---- phase 2: merge adjacent bonds and adjacent polygons -------------
    // twin pair id -> (piece, edge index) on both sides
    auto locate_pairs = [&](const std::vector<Piece>& pieces) {
        std::map<int, std::vector<std::pair<int, int>>> loc;
        for (size_t pi = 0; pi < pieces.size(); ++pi)
            for (size_t ei = 0; ei < pieces[pi].edges.size(); ++ei)
                if (pieces[pi].edges[ei].virt)
                    loc[pieces[pi].edges[ei].id].emplace_back(static_cast<int>(pi),
                                                              static_cast<int>(ei));
        return loc;
    };
    bool merged = true;
    while (merged) {
        merged = false;
        auto loc = locate_pairs(done);
        for (auto& [pid, sides] : loc) {
            assert(sides.size() == 2);
            auto [p1, e1] = sides[0];
            auto [p2, e2] = sides[1];
            if (p1 == p2) continue;
            Piece::Kind k1 = done[static_cast<size_t>(p1)].kind;
            Piece::Kind k2 = done[static_cast<size_t>(p2)].kind;
            if ((k1 == Piece::Bond && k2 == Piece::Bond) ||
                (k1 == Piece::Polygon && k2 == Piece::Polygon)) {
                Piece mergedPiece;
                mergedPiece.kind = k1;
                for (size_t i = 0; i < done[static_cast<size_t>(p1)].edges.size(); ++i)
                    if (static_cast<int>(i) != e1)
                        mergedPiece.edges.push_back(done[static_cast<size_t>(p1)].edges[i]);
                for (size_t i = 0; i < done[static_cast<size_t>(p2)].edges.size(); ++i)
                    if (static_cast<int>(i) != e2)
                        mergedPiece.edges.push_back(done[static_cast<size_t>(p2)].edges[i]);
                std::vector<Piece> next;
                for (size_t i = 0; i < done.size(); ++i)
                    if (static_cast<int>(i) != p1 && static_cast<int>(i) != p2)
                        next.push_back(std::move(done[i]));
                next.push_back(std::move(mergedPiece));
                done = std::move(next);
                merged = true;
                break;
            }
        }
    }

    // ---- phase 3: build the rooted tree ----------------------------------
    SpqrTree t;
    t.ref_g_edge = ref;
    // piece nodes first
    std::vector<int> piece_node(done.size(), -1);
    for (size_t pi = 0; pi < done.size(); ++pi) {
        SpqrNode node;
        switch (done[pi].kind) {
            case Piece::Bond:
                node.kind = done[pi].edges.size() >= 3 ? SpqrKind::P : SpqrKind::Q;
                break;
            case Piece::Polygon:
                node.kind = SpqrKind::S;
                break;
            default:
                node.kind = SpqrKind::R;
                break;
        }
        piece_node[pi] = static_cast<int>(t.nodes.size());
        t.nodes.push_back(std::move(node));
    }
    // Q nodes for real edges; the piece holding each real edge becomes its
    // neighbor. Exception: a 2-edge whole-graph bond is itself the Q node.
    std::map<EdgeId, int> q_of_edge;
    bool trivial_bond = done.size() == 1 && done[0].kind == Piece::Bond && done[0].edges.size() == 2;
    if (!trivial_bond) {
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
            SpqrNode q;
            q.kind = SpqrKind::Q;
            q_of_edge[e] = static_cast<int>(t.nodes.size());
            t.nodes.push_back(std::move(q));
        }
    }

    // adjacency between tree nodes: (node, node) via twin pairs and via real
    // edges (piece <-> q node)
    struct Link {
        int other;     // neighbouring tree node
        PEdge edge;    // the connecting edge as seen from this side
    };
    std::map<int, std::vector<Link>> adj;
    {
        auto loc = locate_pairs(done);
        for (auto& [pid, sides] : loc) {
            int n1 = piece_node[static_cast<size_t>(sides[0].first)];
            int n2 = piece_node[static_cast<size_t>(sides[1].first)];
            PEdge pe = done[static_cast<size_t>(sides[0].first)]
                           .edges[static_cast<size_t>(sides[0].second)];
            adj[n1].push_back({n2, pe});
            adj[n2].push_back({n1, pe});
        }
        if (!trivial_bond) {
            for (size_t pi = 0; pi < done.size(); ++pi)
                for (const PEdge& e : done[pi].edges)
                    if (!e.virt) {
                        int qn = q_of_edge.at(e.id);
                        adj[piece_node[pi]].push_back({qn, e});
                        adj[qn].push_back({piece_node[pi], e});
                    }
        }
    }

    // root at the Q node of ref (or the trivial bond)
    t.root = trivial_bond ? piece_node[0] : q_of_edge.at(ref);
    {
        std::vector<int> order = {t.root};
        std::vector<char> seen(t.nodes.size(), 0);
        seen[static_cast<size_t>(t.root)] = 1;
        for (size_t i = 0; i < order.size(); ++i) {
            int v = order[i];
            for (const Link& l : adj[v]) {
                if (seen[static_cast<size_t>(l.other)]) continue;
                seen[static_cast<size_t>(l.other)] = 1;
                t.nodes[static_cast<size_t>(l.other)].parent = v;
                t.nodes[static_cast<size_t>(v)].children.push_back(l.other);
                order.push_back(l.other);
            }
        }
    }

    // skeletons, tags, poles
    auto build_skeleton = [&](int node_id, const std::vector<PEdge>& edges) {
        SpqrNode& node = t.nodes[static_cast<size_t>(node_id)];
        std::map<Vertex, int> local;
        for (const PEdge& e : edges) {
            for (Vertex v : {e.u, e.v})
                if (!local.count(v)) {
                    int lid = static_cast<int>(local.size());
                    local[v] = lid;
                }
        }
        node.skel_to_g.assign(local.size(), -1);
        for (auto& [gv, lv] : local) node.skel_to_g[static_cast<size_t>(lv)] = gv;
        node.skeleton = MultiGraph(static_cast<int>(local.size()));
        node.tags.clear();
        for (const PEdge& e : edges) {
            node.skeleton.add_edge(local.at(e.u), local.at(e.v));
            SpqrEdgeTag tag;
            if (e.virt) {
                // which neighbour does this twin pair lead to?
                int nb = -1;
                for (const Link& l : adj[node_id])
                    if (l.edge.virt && l.edge.id == e.id) nb = l.other;
                assert(nb != -1);
                if (nb == node.parent) {
                    tag.kind = SpqrEdgeTag::Reference;
                } else {
                    tag.kind = SpqrEdgeTag::Virtual;
                    tag.child = nb;
                }
            } else {
                int qn = trivial_bond ? -1 : q_of_edge.at(e.id);
                tag.g_edge = e.id;
                if (qn == node.parent && qn != -1) {
                    tag.kind = SpqrEdgeTag::Reference;
                } else {
                    tag.kind = SpqrEdgeTag::Real;
                    tag.child = qn;
                }
            }
            node.tags.push_back(tag);
        }
        node.ref_edge = -1;
        for (size_t i = 0; i < node.tags.size(); ++i)
            if (node.tags[i].kind == SpqrEdgeTag::Reference) node.ref_edge = static_cast<int>(i);
    };
    for (size_t pi = 0; pi < done.size(); ++pi) build_skeleton(piece_node[pi], done[pi].edges);
    if (!trivial_bond) {
        for (auto& [ge, qn] : q_of_edge) {
            // Q skeleton: the real edge plus one virtual edge standing for
            // the rest of the graph
            std::vector<PEdge> edges;
            edges.push_back({false, ge, g.edge(ge).u, g.edge(ge).v});
            // the virtual side: parent or single child
            SpqrNode& q = t.nodes[static_cast<size_t>(qn)];
            int nb = q.parent != -1 ? q.parent : (q.children.empty() ? -1 : q.children[0]);
            if (nb != -1) {
                PEdge ve{true, -1000 - static_cast<int>(ge), g.edge(ge).u, g.edge(ge).v};
                edges.push_back(ve);
            }
            std::map<Vertex, int> local;
            for (const PEdge& e : edges)
                for (Vertex v : {e.u, e.v})
                    if (!local.count(v)) {
                        int lid = static_cast<int>(local.size());
                        local[v] = lid;
                    }
            q.skel_to_g.assign(local.size(), -1);
            for (auto& [gv, lv] : local) q.skel_to_g[static_cast<size_t>(lv)] = gv;
            q.skeleton = MultiGraph(static_cast<int>(local.size()));
            q.tags.clear();
            q.ref_edge = -1;
            for (size_t i = 0; i < edges.size(); ++i) {
                const PEdge& e = edges[i];
                q.skeleton.add_edge(local.at(e.u), local.at(e.v));
                SpqrEdgeTag tag;
                if (!e.virt) {
                    tag.kind = SpqrEdgeTag::Real;
                    tag.g_edge = e.id;
                    tag.child = -1;
                } else if (q.parent != -1 && nb == q.parent) {
                    tag.kind = SpqrEdgeTag::Reference;
                    tag.g_edge = ge;
                    q.ref_edge = static_cast<int>(i);
                } else {
                    tag.kind = SpqrEdgeTag::Virtual;
                    tag.child = nb;
                }
                q.tags.push_back(tag);
            }
        }
    }
    // poles: endpoints of the edge toward the parent (the g edge for the
    // root Q node)
    for (size_t ni = 0; ni < t.nodes.size(); ++ni) {
        SpqrNode& node = t.nodes[ni];
        Vertex a, b;
        if (node.ref_edge != -1) {
            const Edge& e = node.skeleton.edge(node.ref_edge);
            a = node.skel_to_g[static_cast<size_t>(e.u)];
            b = node.skel_to_g[static_cast<size_t>(e.v)];
        } else {
            a = g.edge(ref).u;
            b = g.edge(ref).v;
        }
        node.pole_s = std::min(a, b);
        node.pole_t = std::max(a, b);
    }
    return t;
}

namespace {

void collect_real_edges(const SpqrTree& t, int b, std::vector<EdgeId>& out) {
    const SpqrNode& node = t.node(b);
    for (size_t i = 0; i < node.tags.size(); ++i) {
        const SpqrEdgeTag& tag = node.tags[i];
        if (node.ref_edge == static_cast<int>(i)) continue;
        switch (tag.kind) {
            case SpqrEdgeTag::Real:
                out.push_back(tag.g_edge);
                break;
            case SpqrEdgeTag::Virtual:
                collect_real_edges(t, tag.child, out);
                break;
            case SpqrEdgeTag::Reference:
                break;
        }
    }
}

}  // namespace

std::vector<EdgeId> pertinent_edges(const SpqrTree& t, int b) {
    if (b < 0 || b >= static_cast<int>(t.nodes.size()))
        throw ContractViolation("pertinent_edges: unknown node");
    std::vector<EdgeId> real;
    collect_real_edges(t, b, real);
    std::sort(real.begin(), real.end());
    return real;
}

MultiGraph pertinent_graph(const SpqrTree& t, const MultiGraph& g, int b,
                           std::vector<Vertex>* vertex_map, std::vector<EdgeId>* edge_map) {
    std::vector<EdgeId> real = pertinent_edges(t, b);
    return edge_subgraph(g, real, vertex_map, edge_map);
}

std::vector<Vertex> pertinent_vertices(const SpqrTree& t, const MultiGraph& g, int b) {
    std::set<Vertex> vs;
    for (EdgeId e : pertinent_edges(t, b)) {
        vs.insert(g.edge(e).u);
        vs.insert(g.edge(e).v);
    }
    vs.insert(t.node(b).pole_s);
    vs.insert(t.node(b).pole_t);
    return {vs.begin(), vs.end()};
}

std::string dump(const SpqrTree& t) {
    std::ostringstream os;
    auto kind_char = [](SpqrKind k) {
        switch (k) {
            case SpqrKind::S: return 'S';
            case SpqrKind::P: return 'P';
            case SpqrKind::Q: return 'Q';
            case SpqrKind::R: return 'R';
        }
        return '?';
    };
    std::function<void(int, int)> rec = [&](int b, int depth) {
        const SpqrNode& node = t.node(b);
        for (int i = 0; i < depth; ++i) os << "  ";
        os << kind_char(node.kind) << " node " << b << " skeleton(n=" << node.skeleton.num_vertices()
           << ",m=" << node.skeleton.num_edges() << ") poles=(" << node.pole_s << "," << node.pole_t
           << ")\n";
        for (int c : node.children) rec(c, depth + 1);
    };
    if (t.root != -1) rec(t.root, 0);
    return os.str();
}

std::string dump_dot(const SpqrTree& t) {
    std::ostringstream os;
    os << "graph spqr {\n";
    auto kind_char = [](SpqrKind k) {
        switch (k) {
            case SpqrKind::S: return 'S';
            case SpqrKind::P: return 'P';
            case SpqrKind::Q: return 'Q';
            case SpqrKind::R: return 'R';
        }
        return '?';
    };
    for (size_t i = 0; i < t.nodes.size(); ++i)
        os << "  n" << i << " [label=\"" << kind_char(t.nodes[i].kind) << i << "\"];\n";
    for (size_t i = 0; i < t.nodes.size(); ++i)
        for (int c : t.nodes[i].children) os << "  n" << i << " -- n" << c << ";\n";
    os << "}\n";
    return os.str();
}

void validate_spqr(const SpqrTree& t, const MultiGraph& g) {
    std::multiset<EdgeId> reals;
    for (const SpqrNode& node : t.nodes) {
        // kind constraints
        switch (node.kind) {
            case SpqrKind::Q:
                if (node.skeleton.num_edges() != 2 || node.skeleton.num_vertices() != 2)
                    throw ContractViolation("validate_spqr: Q skeleton is not a 2-bond");
                break;
            case SpqrKind::P:
                if (node.skeleton.num_vertices() != 2 || node.skeleton.num_edges() < 3)
                    throw ContractViolation("validate_spqr: P skeleton is not a >=3 bond");
                break;
            case SpqrKind::S: {
                if (node.skeleton.num_vertices() < 3 ||
                    node.skeleton.num_vertices() != node.skeleton.num_edges())
                    throw ContractViolation("validate_spqr: S skeleton is not a cycle");
                for (Vertex v = 0; v < node.skeleton.num_vertices(); ++v)
                    if (node.skeleton.degree(v) != 2)
                        throw ContractViolation("validate_spqr: S skeleton is not a cycle");
                break;
            }
            case SpqrKind::R: {
                std::set<std::pair<Vertex, Vertex>> simple;
                for (const Edge& e : node.skeleton.edges()) {
                    auto key = std::minmax(e.u, e.v);
                    if (!simple.insert({key.first, key.second}).second)
                        throw ContractViolation("validate_spqr: R skeleton is not simple");
                }
                break;
            }
        }
        // adjacency constraints
        if (node.parent != -1) {
            SpqrKind pk = t.node(node.parent).kind;
            if (node.kind == SpqrKind::S && pk == SpqrKind::S)
                throw ContractViolation("validate_spqr: adjacent S nodes");
            if (node.kind == SpqrKind::P && pk == SpqrKind::P)
                throw ContractViolation("validate_spqr: adjacent P nodes");
        }
        if (node.kind == SpqrKind::Q)
            for (const SpqrEdgeTag& tag : node.tags)
                if (tag.kind == SpqrEdgeTag::Real && tag.child == -1) reals.insert(tag.g_edge);
    }
    if (t.nodes.size() == 1) {
        // trivial 2-bond
        if (g.num_edges() != 2) throw ContractViolation("validate_spqr: trivial tree mismatch");
        return;
    }
    // each real edge lives in exactly one Q node
    if (reals.size() != static_cast<size_t>(g.num_edges()))
        throw ContractViolation("validate_spqr: real edge count mismatch");
    std::set<EdgeId> uniq(reals.begin(), reals.end());
    if (uniq.size() != reals.size())
        throw ContractViolation("validate_spqr: duplicated real edge");
    // reconstruction identity: expanding from the root reproduces E(g)
    std::vector<EdgeId> expanded = pertinent_edges(t, t.root);
    if (static_cast<int>(expanded.size()) != g.num_edges())
        throw ContractViolation("validate_spqr: reconstruction size mismatch");
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (expanded[static_cast<size_t>(e)] != e)
            throw ContractViolation("validate_spqr: reconstruction identity fails");
}

std::string unrooted_canonical_form(const SpqrTree& t) {
    size_t n = t.nodes.size();
    auto label = [&](int v) {
        const SpqrNode& node = t.node(v);
        char k = node.kind == SpqrKind::S   ? 'S'
                 : node.kind == SpqrKind::P ? 'P'
                 : node.kind == SpqrKind::Q ? 'Q'
                                            : 'R';
        return std::string(1, k) + std::to_string(node.skeleton.num_vertices()) + "." +
               std::to_string(node.skeleton.num_edges());
    };
    // AHU-style canonical string rooted at the tree centroid(s)
    std::vector<std::vector<int>> adj(n);
    for (size_t i = 0; i < n; ++i)
        for (int c : t.nodes[i].children) {
            adj[i].push_back(c);
            adj[static_cast<size_t>(c)].push_back(static_cast<int>(i));
        }
    // find centroid(s)
    std::vector<int> size(n, 0);
    std::function<void(int, int)> compute_size = [&](int v, int p) {
        size[static_cast<size_t>(v)] = 1;
        for (int w : adj[static_cast<size_t>(v)])
            if (w != p) {
                compute_size(w, v);
                size[static_cast<size_t>(v)] += size[static_cast<size_t>(w)];
            }
    };
    compute_size(t.root, -1);
    int total = static_cast<int>(n);
    std::vector<int> centroids;
    std::function<void(int, int)> find_centroid = [&](int v, int p) {
        int heaviest = total - size[static_cast<size_t>(v)];
        for (int w : adj[static_cast<size_t>(v)])
            if (w != p) heaviest = std::max(heaviest, size[static_cast<size_t>(w)]);
        if (heaviest <= total / 2) centroids.push_back(v);
        for (int w : adj[static_cast<size_t>(v)])
            if (w != p) find_centroid(w, v);
    };
    find_centroid(t.root, -1);
    std::function<std::string(int, int)> canon = [&](int v, int p) -> std::string {
        std::vector<std::string> subs;
        for (int w : adj[static_cast<size_t>(v)])
            if (w != p) subs.push_back(canon(w, v));
        std::sort(subs.begin(), subs.end());
        std::string s = "(" + label(v);
        for (auto& sub : subs) s += sub;
        s += ")";
        return s;
    };
    std::vector<std::string> forms;
    for (int c : centroids) forms.push_back(canon(c, -1));
    std::sort(forms.begin(), forms.end());
    return forms.front();
}

}  // namespace bookem
