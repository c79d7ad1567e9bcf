#include "bookem/multigraph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include <json.hpp>

namespace bookem {

bool MultiGraph::is_connected() const {
    return connected_components().size() <= 1;
}

std::vector<std::vector<Vertex>> MultiGraph::connected_components() const {
    int n = num_vertices();
    std::vector<int> comp(static_cast<size_t>(n), -1);
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (comp[static_cast<size_t>(s)] != -1) continue;
        int c = static_cast<int>(out.size());
        out.emplace_back();
        stack.push_back(s);
        comp[static_cast<size_t>(s)] = c;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            out[static_cast<size_t>(c)].push_back(v);
            for (EdgeId e : incident(v)) {
                Vertex w = other(e, v);
                if (comp[static_cast<size_t>(w)] == -1) {
                    comp[static_cast<size_t>(w)] = c;
                    stack.push_back(w);
                }
            }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

namespace {

// Iterative Hopcroft-Tarjan over edges; groups edges into biconnected
// components. Works on multigraphs (a parallel copy of the tree edge counts
// as a back edge).
std::vector<std::vector<EdgeId>> biconnected_edge_components(const MultiGraph& g, Vertex root) {
    std::vector<int> disc(static_cast<size_t>(g.num_vertices()), -1);
    std::vector<int> low(static_cast<size_t>(g.num_vertices()), -1);
    std::vector<EdgeId> edge_stack;
    std::vector<std::vector<EdgeId>> comps;
    int timer = 0;

    struct Frame {
        Vertex v;
        EdgeId via;  // tree edge used to enter v, -1 at root
        size_t ei = 0;
        bool skipped_via = false;
    };
    std::vector<Frame> st;
    st.push_back({root, -1, 0, false});
    disc[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = timer++;
    while (!st.empty()) {
        Frame& f = st.back();
        auto inc = g.incident(f.v);
        if (f.ei < inc.size()) {
            EdgeId e = inc[f.ei++];
            if (e == f.via && !f.skipped_via) {
                f.skipped_via = true;
                continue;
            }
            Vertex w = g.other(e, f.v);
            if (disc[static_cast<size_t>(w)] == -1) {
                edge_stack.push_back(e);
                disc[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = timer++;
                st.push_back({w, e, 0, false});
            } else if (disc[static_cast<size_t>(w)] < disc[static_cast<size_t>(f.v)]) {
                edge_stack.push_back(e);
                low[static_cast<size_t>(f.v)] =
                    std::min(low[static_cast<size_t>(f.v)], disc[static_cast<size_t>(w)]);
            }
        } else {
            Frame done = st.back();
            st.pop_back();
            if (st.empty()) break;
            Frame& p = st.back();
            low[static_cast<size_t>(p.v)] =
                std::min(low[static_cast<size_t>(p.v)], low[static_cast<size_t>(done.v)]);
            if (low[static_cast<size_t>(done.v)] >= disc[static_cast<size_t>(p.v)]) {
                comps.emplace_back();
                while (true) {
                    EdgeId e = edge_stack.back();
                    edge_stack.pop_back();
                    comps.back().push_back(e);
                    if (e == done.via) break;
                }
            }
        }
    }
    return comps;
}

}  // namespace

BlockDecomposition blocks(const MultiGraph& g) {
    if (!g.is_connected())
        throw ContractViolation("blocks: input must be connected");
    BlockDecomposition out;
    if (g.num_edges() == 0) return out;

    auto comps = biconnected_edge_components(g, 0);
    // A vertex is a cut vertex iff it lies in more than one block.
    std::vector<int> block_count(static_cast<size_t>(g.num_vertices()), 0);
    for (auto& comp : comps) {
        std::sort(comp.begin(), comp.end());
        std::vector<char> seen(static_cast<size_t>(g.num_vertices()), 0);
        for (EdgeId e : comp) {
            for (Vertex v : {g.edge(e).u, g.edge(e).v}) {
                if (!seen[static_cast<size_t>(v)]) {
                    seen[static_cast<size_t>(v)] = 1;
                    block_count[static_cast<size_t>(v)]++;
                }
            }
        }
        Block b;
        b.graph = edge_subgraph(g, comp, &b.to_parent, &b.edge_to_parent);
        out.blocks.push_back(std::move(b));
    }
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (block_count[static_cast<size_t>(v)] > 1) out.cut_vertices.push_back(v);
    return out;
}

std::vector<EdgeId> feedback_edge_set(const MultiGraph& g) {
    int n = g.num_vertices();
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<char> tree(static_cast<size_t>(g.num_edges()), 0);
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (seen[static_cast<size_t>(s)]) continue;
        seen[static_cast<size_t>(s)] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (EdgeId e : g.incident(v)) {
                Vertex w = g.other(e, v);
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    tree[static_cast<size_t>(e)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
        if (!tree[static_cast<size_t>(e)]) out.push_back(e);
    return out;
}

MultiGraph contract_edge(const MultiGraph& g, EdgeId e) {
    const Edge& ed = g.edge(e);
    Vertex keep = std::min(ed.u, ed.v);
    Vertex drop = std::max(ed.u, ed.v);
    MultiGraph out(g.num_vertices() - 1);
    auto remap = [&](Vertex v) -> Vertex {
        if (v == drop) return keep;
        return v > drop ? v - 1 : v;
    };
    for (EdgeId i = 0; i < g.num_edges(); ++i) {
        if (i == e) continue;
        Vertex a = remap(g.edge(i).u);
        Vertex b = remap(g.edge(i).v);
        if (a == b) continue;  // contraction-created self-loop dropped
        out.add_edge(a, b);
    }
    return out;
}

MultiGraph subdivide_edge(const MultiGraph& g, EdgeId e) {
    const Edge& ed = g.edge(e);
    MultiGraph out(g.num_vertices() + 1);
    Vertex mid = g.num_vertices();
    for (EdgeId i = 0; i < g.num_edges(); ++i) {
        if (i == e) continue;
        out.add_edge(g.edge(i).u, g.edge(i).v);
    }
    out.add_edge(ed.u, mid);
    out.add_edge(mid, ed.v);
    return out;
}

namespace {

MultiGraph parse_json_graph(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("invalid JSON graph: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw ParseError("JSON graph needs fields \"n\" and \"edges\"");
    int n = j.at("n").get<int>();
    if (n < 0) throw ParseError("JSON graph: n must be non-negative");
    MultiGraph g(n);
    for (const auto& pair : j.at("edges")) {
        if (!pair.is_array() || pair.size() != 2)
            throw ParseError("JSON graph: each edge must be a [u,v] pair");
        int u = pair[0].get<int>();
        int v = pair[1].get<int>();
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError("JSON graph: edge endpoint out of range");
        if (u == v) throw ParseError("JSON graph: self-loop rejected");
        g.add_edge(u, v);
    }
    return g;
}

}  // namespace

MultiGraph parse_graph(std::string_view text) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json_graph(text);

    std::map<long long, Vertex> label_to_id;
    std::vector<std::pair<Vertex, Vertex>> edge_list;
    auto intern = [&](long long label) {
        auto it = label_to_id.find(label);
        if (it != label_to_id.end()) return it->second;
        Vertex id = static_cast<Vertex>(label_to_id.size());
        label_to_id.emplace(label, id);
        return id;
    };

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        line_no++;
        if (size_t h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        std::string s(line);
        std::istringstream iss(s);
        long long a, b;
        if (!(iss >> a)) continue;  // blank / comment-only line
        if (!(iss >> b)) throw ParseError("line " + std::to_string(line_no) + ": expected \"u v\"");
        std::string rest;
        if (iss >> rest)
            throw ParseError("line " + std::to_string(line_no) + ": trailing tokens");
        if (a < 0 || b < 0)
            throw ParseError("line " + std::to_string(line_no) + ": negative vertex label");
        if (a == b) throw ParseError("line " + std::to_string(line_no) + ": self-loop rejected");
        Vertex ua = intern(a);
        Vertex ub = intern(b);
        edge_list.emplace_back(ua, ub);
    }
    MultiGraph g(static_cast<int>(label_to_id.size()));
    for (auto [u, v] : edge_list) g.add_edge(u, v);
    return g;
}

std::string to_edge_list(const MultiGraph& g) {
    std::ostringstream os;
    os << "# " << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
    for (const Edge& e : g.edges()) os << e.u << " " << e.v << "\n";
    return os.str();
}

std::string to_json(const MultiGraph& g) {
    nlohmann::json j;
    j["n"] = g.num_vertices();
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges()) j["edges"].push_back({e.u, e.v});
    return j.dump();
}

MultiGraph edge_subgraph(const MultiGraph& g, std::span<const EdgeId> edges,
                         std::vector<Vertex>* vertex_map, std::vector<EdgeId>* edge_map) {
    std::vector<Vertex> vmap;
    std::vector<int> local(static_cast<size_t>(g.num_vertices()), -1);
    auto intern = [&](Vertex v) {
        if (local[static_cast<size_t>(v)] == -1) {
            local[static_cast<size_t>(v)] = static_cast<int>(vmap.size());
            vmap.push_back(v);
        }
        return local[static_cast<size_t>(v)];
    };
    std::vector<std::pair<Vertex, Vertex>> es;
    std::vector<EdgeId> emap;
    for (EdgeId e : edges) {
        const Edge& ed = g.edge(e);
        Vertex lu = intern(ed.u);
        Vertex lv = intern(ed.v);
        es.emplace_back(lu, lv);
        emap.push_back(e);
    }
    MultiGraph out(static_cast<int>(vmap.size()));
    for (auto [u, v] : es) out.add_edge(u, v);
    if (vertex_map) *vertex_map = std::move(vmap);
    if (edge_map) *edge_map = std::move(emap);
    return out;
}

}  // namespace bookem
