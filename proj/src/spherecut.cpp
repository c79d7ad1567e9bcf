#include "bookem/spherecut.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <set>

namespace bookem {

int SubcurveTable::intern(Vertex u, Vertex v, int face) {
    if (u > v) std::swap(u, v);
    auto key = std::make_tuple(u, v, face);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = size();
    curves_.push_back({u, v, face});
    index_.emplace(key, id);
    return id;
}

std::vector<Vertex> WeakNoose::boundary_sorted() const {
    std::vector<Vertex> out = verts;
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<WeakNoose> make_weak_noose(const SubcurveTable& table, std::vector<int> curve_ids) {
    std::sort(curve_ids.begin(), curve_ids.end());
    curve_ids.erase(std::unique(curve_ids.begin(), curve_ids.end()), curve_ids.end());
    if (curve_ids.empty()) return std::nullopt;
    // Arc nooses traverse each face once, but the xor framework's triangles
    // legitimately put all three subcurves into one face; face multiplicity
    // is therefore not restricted here.
    std::map<Vertex, std::vector<int>> inc;
    for (int c : curve_ids) {
        inc[table.at(c).u].push_back(c);
        inc[table.at(c).v].push_back(c);
    }
    if (inc.size() != curve_ids.size()) return std::nullopt;
    for (auto& [v, cs] : inc)
        if (cs.size() != 2) return std::nullopt;
    WeakNoose noose;
    Vertex start = inc.begin()->first;
    const auto& at_start = inc.at(start);
    int first_curve;
    if (curve_ids.size() == 2) {
        first_curve = std::min(at_start[0], at_start[1]);
    } else {
        auto other_end = [&](int c, Vertex v) {
            const Subcurve& sc = table.at(c);
            return sc.u == v ? sc.v : sc.u;
        };
        Vertex n0 = other_end(at_start[0], start);
        Vertex n1 = other_end(at_start[1], start);
        first_curve = n0 < n1 ? at_start[0] : at_start[1];
    }
    Vertex cur = start;
    int cur_curve = first_curve;
    do {
        noose.verts.push_back(cur);
        noose.curves.push_back(cur_curve);
        const Subcurve& sc = table.at(cur_curve);
        Vertex nxt = sc.u == cur ? sc.v : sc.u;
        const auto& cs = inc.at(nxt);
        cur_curve = cs[0] == cur_curve ? cs[1] : cs[0];
        cur = nxt;
    } while (cur != start && noose.verts.size() <= curve_ids.size());
    if (noose.curves.size() != curve_ids.size()) return std::nullopt;  // several cycles
    return noose;
}

std::optional<WeakNoose> xor_nooses(const SubcurveTable& table, const WeakNoose& a,
                                    const WeakNoose& b) {
    std::set<int> sym(a.curves.begin(), a.curves.end());
    for (int c : b.curves) {
        if (!sym.insert(c).second) sym.erase(c);
    }
    return make_weak_noose(table, {sym.begin(), sym.end()});
}

// ---------------------------------------------------------------------------
// Overlay
// ---------------------------------------------------------------------------

Overlay build_overlay(const MultiGraph& sk, const CombinatorialEmbedding& emb,
                      const SubcurveTable& table, EdgeId ref) {
    Overlay ov;
    ov.skeleton_edges = sk.num_edges();
    ov.graph = MultiGraph(sk.num_vertices());
    for (const Edge& e : sk.edges()) ov.graph.add_edge(e.u, e.v);
    for (int s = 0; s < table.size(); ++s) ov.graph.add_edge(table.at(s).u, table.at(s).v);

    int nf = emb.num_faces();
    std::vector<std::vector<int>> chords(static_cast<size_t>(nf));
    for (int s = 0; s < table.size(); ++s) chords[static_cast<size_t>(table.at(s).face)].push_back(s);
    std::vector<std::map<Vertex, int>> walk_pos(static_cast<size_t>(nf));
    std::vector<int> walk_len(static_cast<size_t>(nf), 0);
    for (int f = 0; f < nf; ++f) {
        const auto& fd = emb.face_darts[static_cast<size_t>(f)];
        walk_len[static_cast<size_t>(f)] = static_cast<int>(fd.size());
        for (size_t i = 0; i < fd.size(); ++i) {
            Vertex v = emb.tail(sk, fd[i]);
            if (!walk_pos[static_cast<size_t>(f)].emplace(v, static_cast<int>(i)).second)
                throw ContractViolation("build_overlay: face walk repeats a vertex");
        }
    }
    for (int f = 0; f < nf; ++f) {
        const auto& cs = chords[static_cast<size_t>(f)];
        int p = walk_len[static_cast<size_t>(f)];
        for (size_t i = 0; i < cs.size(); ++i)
            for (size_t j = i + 1; j < cs.size(); ++j) {
                const Subcurve& a = table.at(cs[i]);
                const Subcurve& b = table.at(cs[j]);
                if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v) continue;
                int a1 = walk_pos[static_cast<size_t>(f)].at(a.u);
                int a2 = walk_pos[static_cast<size_t>(f)].at(a.v);
                int b1 = walk_pos[static_cast<size_t>(f)].at(b.u);
                int b2 = walk_pos[static_cast<size_t>(f)].at(b.v);
                auto inside = [&](int x, int lo, int hi) {
                    int span = (hi - lo + p) % p;
                    int off = (x - lo + p) % p;
                    return off > 0 && off < span;
                };
                if (inside(b1, a1, a2) != inside(b2, a1, a2))
                    throw ContractViolation("build_overlay: crossing subcurves");
            }
    }

    // rotations: splice chord darts into each corner slot, ordered by
    // descending forward walk distance of the far endpoint
    ov.emb.rotation.assign(static_cast<size_t>(sk.num_vertices()), {});
    for (Vertex v = 0; v < sk.num_vertices(); ++v) {
        for (int d : emb.rotation[static_cast<size_t>(v)]) {
            int f = emb.face_of[static_cast<size_t>(d)];
            std::vector<std::pair<int, int>> here;  // (distance, subcurve)
            for (int s : chords[static_cast<size_t>(f)]) {
                const Subcurve& sc = table.at(s);
                if (sc.u != v && sc.v != v) continue;
                Vertex w = sc.u == v ? sc.v : sc.u;
                int p = walk_len[static_cast<size_t>(f)];
                int dist = (walk_pos[static_cast<size_t>(f)].at(w) -
                            walk_pos[static_cast<size_t>(f)].at(v) + p) % p;
                here.emplace_back(dist, s);
            }
            std::sort(here.begin(), here.end(), std::greater<>());
            for (auto& [dist, s] : here) {
                EdgeId oe = ov.skeleton_edges + s;
                int od = 2 * oe + (ov.graph.edge(oe).u == v ? 0 : 1);
                ov.emb.rotation[static_cast<size_t>(v)].push_back(od);
            }
            ov.emb.rotation[static_cast<size_t>(v)].push_back(d);
        }
    }
    ov.emb.recompute_faces(ov.graph);
    if (!validate_embedding(ov.graph, ov.emb))
        throw ContractViolation("build_overlay: overlay embedding inconsistent");
    ov.outside_seeds = {ov.emb.face_of[static_cast<size_t>(2 * ref)],
                        ov.emb.face_of[static_cast<size_t>(2 * ref + 1)]};
    return ov;
}

std::vector<char> Overlay::inside_faces(const WeakNoose& noose) const {
    std::vector<char> blocked(static_cast<size_t>(graph.num_edges()), 0);
    for (int c : noose.curves) blocked[static_cast<size_t>(skeleton_edges + c)] = 1;
    std::vector<char> outside(static_cast<size_t>(emb.num_faces()), 0);
    std::vector<int> stack;
    for (int f : outside_seeds)
        if (!outside[static_cast<size_t>(f)]) {
            outside[static_cast<size_t>(f)] = 1;
            stack.push_back(f);
        }
    while (!stack.empty()) {
        int f = stack.back();
        stack.pop_back();
        for (int d : emb.face_darts[static_cast<size_t>(f)]) {
            EdgeId e = CombinatorialEmbedding::dart_edge(d);
            if (blocked[static_cast<size_t>(e)]) continue;
            int g = emb.face_of[static_cast<size_t>(CombinatorialEmbedding::twin(d))];
            if (!outside[static_cast<size_t>(g)]) {
                outside[static_cast<size_t>(g)] = 1;
                stack.push_back(g);
            }
        }
    }
    std::vector<char> inside(static_cast<size_t>(emb.num_faces()), 0);
    for (size_t f = 0; f < inside.size(); ++f) inside[f] = !outside[f];
    for (int c : noose.curves) {
        EdgeId e = skeleton_edges + c;
        int f1 = emb.face_of[static_cast<size_t>(2 * e)];
        int f2 = emb.face_of[static_cast<size_t>(2 * e + 1)];
        if (inside[static_cast<size_t>(f1)] == inside[static_cast<size_t>(f2)])
            throw ContractViolation("inside_faces: curve set does not separate");
    }
    return inside;
}

std::vector<EdgeId> Overlay::enclosed_edges(const WeakNoose& noose) const {
    auto inside = inside_faces(noose);
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < skeleton_edges; ++e)
        if (inside[static_cast<size_t>(emb.face_of[static_cast<size_t>(2 * e)])] &&
            inside[static_cast<size_t>(emb.face_of[static_cast<size_t>(2 * e + 1)])])
            out.push_back(e);
    return out;
}

NoosePairContext make_pair_context(const SubcurveTable& table, const Overlay& overlay,
                                   const WeakNoose& o1, const WeakNoose& o2) {
    NoosePairContext ctx;
    ctx.o1 = o1;
    ctx.o2 = o2;
    std::set<int> s1(o1.curves.begin(), o1.curves.end());
    for (int c : o2.curves)
        if (s1.count(c)) ctx.shared_curves.push_back(c);
    std::sort(ctx.shared_curves.begin(), ctx.shared_curves.end());
    auto res = xor_nooses(table, o1, o2);
    if (!res) return ctx;  // region_ok stays false
    ctx.result = *res;
    std::set<Vertex> result_b(ctx.result.verts.begin(), ctx.result.verts.end());
    std::set<Vertex> shared_b;
    for (int c : ctx.shared_curves) {
        shared_b.insert(table.at(c).u);
        shared_b.insert(table.at(c).v);
    }
    for (Vertex v : shared_b)
        if (!result_b.count(v)) ctx.vanishing.push_back(v);
    try {
        auto in1 = overlay.inside_faces(o1);
        auto in2 = overlay.inside_faces(o2);
        bool ok = true;
        for (size_t f = 0; f < in1.size(); ++f)
            if (in1[f] && in2[f]) ok = false;
        for (int c : ctx.shared_curves) {
            EdgeId e = overlay.skeleton_edges + c;
            int f1 = overlay.emb.face_of[static_cast<size_t>(2 * e)];
            int f2 = overlay.emb.face_of[static_cast<size_t>(2 * e + 1)];
            bool split = (in1[static_cast<size_t>(f1)] && in2[static_cast<size_t>(f2)]) ||
                         (in2[static_cast<size_t>(f1)] && in1[static_cast<size_t>(f2)]);
            if (!split) ok = false;
        }
        ctx.region_ok = ok;
    } catch (const ContractViolation&) {
        ctx.region_ok = false;
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Noose of an edge part via its boundary walk
// ---------------------------------------------------------------------------

namespace {

struct NooseBuilder {
    const MultiGraph& sk;
    const CombinatorialEmbedding& emb;

    // Next in-part dart after twin(d) in the rotation at head(d); records
    // whether any skipped dart leaves the part.
    int next_on_boundary(const std::vector<char>& in_part, int d, bool* contact) const {
        int t = CombinatorialEmbedding::twin(d);
        Vertex v = emb.tail(sk, t);
        const auto& rot = emb.rotation[static_cast<size_t>(v)];
        size_t pos = 0;
        while (rot[pos] != t) pos++;
        *contact = false;
        for (size_t step = 1; step <= rot.size(); ++step) {
            int cand = rot[(pos + step) % rot.size()];
            if (in_part[static_cast<size_t>(CombinatorialEmbedding::dart_edge(cand))]) return cand;
            *contact = true;
        }
        return t;  // unreachable for connected parts
    }

    // Boundary subcurves of a connected edge part whose complement is
    // connected too; nullopt when no noose realizes the separation.
    std::optional<std::vector<std::tuple<Vertex, Vertex, int>>> boundary(
        const std::vector<EdgeId>& part) const {
        std::vector<char> in_part(static_cast<size_t>(sk.num_edges()), 0);
        for (EdgeId e : part) in_part[static_cast<size_t>(e)] = 1;
        std::vector<int> orbit(static_cast<size_t>(2 * sk.num_edges()), -1);
        std::vector<char> orbit_contact;
        std::vector<int> orbit_start;
        for (EdgeId e : part)
            for (int d : {2 * e, 2 * e + 1}) {
                if (orbit[static_cast<size_t>(d)] != -1) continue;
                int id = static_cast<int>(orbit_start.size());
                orbit_start.push_back(d);
                orbit_contact.push_back(0);
                int cur = d;
                do {
                    orbit[static_cast<size_t>(cur)] = id;
                    bool contact = false;
                    cur = next_on_boundary(in_part, cur, &contact);
                    if (contact) orbit_contact[static_cast<size_t>(id)] = 1;
                } while (cur != d);
            }
        int touch_orbit = -1;
        for (size_t i = 0; i < orbit_start.size(); ++i) {
            if (orbit_contact[i]) {
                if (touch_orbit != -1) return std::nullopt;  // complement seen from two sides
                touch_orbit = static_cast<int>(i);
            }
        }
        if (touch_orbit == -1) return std::nullopt;

        std::vector<std::pair<Vertex, int>> touches;  // (vertex, face entered after it)
        int d0 = orbit_start[static_cast<size_t>(touch_orbit)];
        int d = d0;
        do {
            bool contact = false;
            int nxt = next_on_boundary(in_part, d, &contact);
            if (contact)
                touches.emplace_back(emb.head(sk, d), emb.face_of[static_cast<size_t>(nxt)]);
            d = nxt;
        } while (d != d0);
        if (touches.size() < 2) return std::nullopt;
        std::vector<std::tuple<Vertex, Vertex, int>> out;
        std::set<Vertex> seen_v;
        std::set<int> seen_f;
        for (size_t i = 0; i < touches.size(); ++i) {
            Vertex a = touches[i].first;
            Vertex b = touches[(i + 1) % touches.size()].first;
            int face = touches[i].second;
            if (a == b) return std::nullopt;
            if (!seen_v.insert(a).second) return std::nullopt;
            if (!seen_f.insert(face).second) return std::nullopt;
            out.emplace_back(a, b, face);
        }
        return out;
    }
};

bool edges_connected(const MultiGraph& g, const std::vector<EdgeId>& part) {
    if (part.empty()) return false;
    std::map<EdgeId, int> idx;
    for (size_t i = 0; i < part.size(); ++i) idx[part[i]] = static_cast<int>(i);
    std::vector<char> seen(part.size(), 0);
    std::vector<EdgeId> stack = {part[0]};
    seen[0] = 1;
    size_t cnt = 1;
    while (!stack.empty()) {
        EdgeId e = stack.back();
        stack.pop_back();
        for (Vertex v : {g.edge(e).u, g.edge(e).v})
            for (EdgeId f : g.incident(v)) {
                auto it = idx.find(f);
                if (it != idx.end() && !seen[static_cast<size_t>(it->second)]) {
                    seen[static_cast<size_t>(it->second)] = 1;
                    cnt++;
                    stack.push_back(f);
                }
            }
    }
    return cnt == part.size();
}

struct ScdBuilder {
    const MultiGraph& sk;
    const CombinatorialEmbedding& emb;
    SubcurveTable& table;
    NooseBuilder nb;
    // committed curves of the partial decomposition; new nooses must not
    // cross them inside a face
    std::map<int, int> use_count;
    std::vector<int> journal;
    std::vector<std::map<Vertex, int>> walk_pos;

    void init_walks() {
        walk_pos.assign(static_cast<size_t>(emb.num_faces()), {});
        for (int f = 0; f < emb.num_faces(); ++f) {
            const auto& fd = emb.face_darts[static_cast<size_t>(f)];
            for (size_t i = 0; i < fd.size(); ++i)
                walk_pos[static_cast<size_t>(f)].emplace(emb.tail(sk, fd[i]),
                                                         static_cast<int>(i));
        }
    }

    size_t mark() const { return journal.size(); }
    void commit(const WeakNoose& n) {
        for (int c : n.curves) {
            use_count[c]++;
            journal.push_back(c);
        }
    }
    void rollback(size_t m) {
        while (journal.size() > m) {
            int c = journal.back();
            journal.pop_back();
            if (--use_count[c] == 0) use_count.erase(c);
        }
    }

    bool curves_cross(int a, int b) const {
        if (a == b) return false;
        const Subcurve& ca = table.at(a);
        const Subcurve& cb = table.at(b);
        if (ca.face != cb.face) return false;
        if (ca.u == cb.u || ca.u == cb.v || ca.v == cb.u || ca.v == cb.v) return false;
        const auto& pos = walk_pos[static_cast<size_t>(ca.face)];
        int p = static_cast<int>(pos.size());
        int a1 = pos.at(ca.u), a2 = pos.at(ca.v), b1 = pos.at(cb.u), b2 = pos.at(cb.v);
        auto inside = [&](int x, int lo, int hi) {
            int span = (hi - lo + p) % p;
            int off = (x - lo + p) % p;
            return off > 0 && off < span;
        };
        return inside(b1, a1, a2) != inside(b2, a1, a2);
    }

    bool crosses_used(const WeakNoose& n) const {
        for (int c : n.curves)
            for (auto& [d, cnt] : use_count)
                if (curves_cross(c, d)) return true;
        return false;
    }

    std::optional<WeakNoose> noose_of(const std::vector<EdgeId>& part,
                                      const std::vector<EdgeId>& complement) {
        if (!edges_connected(sk, part)) return std::nullopt;
        if (!edges_connected(sk, complement)) return std::nullopt;
        auto b = nb.boundary(part);
        if (!b) return std::nullopt;
        std::vector<int> ids;
        for (auto& [u, v, f] : *b) ids.push_back(table.intern(u, v, f));
        return make_weak_noose(table, ids);
    }

    std::vector<std::vector<EdgeId>> candidates(const std::vector<EdgeId>& part) {
        std::vector<std::vector<EdgeId>> out;
        std::set<std::vector<EdgeId>> seen;
        auto add = [&](std::vector<EdgeId> b) {
            std::sort(b.begin(), b.end());
            if (b.empty() || b.size() >= part.size()) return;
            if (seen.insert(b).second) out.push_back(std::move(b));
        };
        std::set<EdgeId> in_part(part.begin(), part.end());
        // dual-ball growth from a few seed edges
        size_t step = std::max<size_t>(1, part.size() / 4);
        for (size_t si = 0; si < part.size(); si += step) {
            EdgeId seed = part[si];
            std::vector<EdgeId> order;
            std::set<EdgeId> vis = {seed};
            order.push_back(seed);
            for (size_t qi = 0; qi < order.size(); ++qi) {
                EdgeId e = order[qi];
                for (int d : {2 * e, 2 * e + 1}) {
                    int f = emb.face_of[static_cast<size_t>(d)];
                    for (int fd : emb.face_darts[static_cast<size_t>(f)]) {
                        EdgeId g2 = CombinatorialEmbedding::dart_edge(fd);
                        if (in_part.count(g2) && !vis.count(g2)) {
                            vis.insert(g2);
                            order.push_back(g2);
                        }
                    }
                }
            }
            add({order.begin(), order.begin() + static_cast<long>(order.size() / 2)});
            add({order.begin(),
                 order.begin() + static_cast<long>(std::max<size_t>(1, order.size() / 3))});
        }
        // vertex-BFS ball
        {
            EdgeId seed = part.front();
            std::vector<EdgeId> order = {seed};
            std::set<EdgeId> vis = {seed};
            for (size_t qi = 0; qi < order.size(); ++qi) {
                EdgeId e = order[qi];
                for (Vertex v : {sk.edge(e).u, sk.edge(e).v})
                    for (EdgeId f : sk.incident(v))
                        if (in_part.count(f) && !vis.count(f)) {
                            vis.insert(f);
                            order.push_back(f);
                        }
            }
            add({order.begin(), order.begin() + static_cast<long>(order.size() / 2)});
        }
        // single-edge peels
        for (EdgeId e : part) add({e});
        return out;
    }

    struct BuiltPart {
        std::vector<EdgeId> edges;
        WeakNoose noose;
        int left = -1, right = -1;
    };

    std::optional<int> build(std::vector<EdgeId> part, const WeakNoose& noose,
                             std::vector<BuiltPart>& out, int depth) {
        if (depth > 4 * sk.num_edges() + 16)
            throw ContractViolation("build_spherecut: runaway recursion");
        BuiltPart bp;
        bp.edges = part;
        bp.noose = noose;
        if (part.size() == 1) {
            out.push_back(std::move(bp));
            return static_cast<int>(out.size()) - 1;
        }
        std::vector<EdgeId> all(static_cast<size_t>(sk.num_edges()));
        std::iota(all.begin(), all.end(), 0);
        struct Cand {
            long score;
            std::vector<EdgeId> b, rest;
            WeakNoose noose_b, noose_r;
        };
        std::vector<Cand> cands;
        for (auto& b : candidates(part)) {
            std::vector<EdgeId> rest;
            std::set<EdgeId> bset(b.begin(), b.end());
            for (EdgeId e : part)
                if (!bset.count(e)) rest.push_back(e);
            std::vector<EdgeId> comp_b, comp_r;
            for (EdgeId e : all)
                if (!bset.count(e)) comp_b.push_back(e);
            std::set<EdgeId> rset(rest.begin(), rest.end());
            for (EdgeId e : all)
                if (!rset.count(e)) comp_r.push_back(e);
            auto noose_b = noose_of(b, comp_b);
            if (!noose_b) continue;
            auto noose_r = noose_of(rest, comp_r);
            if (!noose_r) continue;
            if (crosses_used(*noose_b) || crosses_used(*noose_r)) continue;
            bool mutual = false;
            for (int c1 : noose_b->curves)
                for (int c2 : noose_r->curves)
                    if (curves_cross(c1, c2)) mutual = true;
            if (mutual) continue;
            long widest = std::max(noose_b->size(), noose_r->size());
            long imbalance =
                std::labs(static_cast<long>(b.size()) - static_cast<long>(rest.size()));
            cands.push_back({widest * 1000 + imbalance, std::move(b), std::move(rest),
                             std::move(*noose_b), std::move(*noose_r)});
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Cand& a, const Cand& b) { return a.score < b.score; });
        for (auto& c : cands) {
            size_t out_mark = out.size();
            size_t jm = mark();
            commit(c.noose_b);
            commit(c.noose_r);
            auto li = build(c.b, c.noose_b, out, depth + 1);
            if (li) {
                auto ri = build(c.rest, c.noose_r, out, depth + 1);
                if (ri) {
                    bp.left = *li;
                    bp.right = *ri;
                    out.push_back(std::move(bp));
                    return static_cast<int>(out.size()) - 1;
                }
            }
            out.resize(out_mark);
            rollback(jm);
        }
        return std::nullopt;
    }
};

}  // namespace

SphereCutDecomposition build_spherecut(const MultiGraph& sk, const CombinatorialEmbedding& emb,
                                       EdgeId ref) {
    if (sk.num_edges() < 3) throw ContractViolation("build_spherecut: need >= 3 edges");
    {
        BlockDecomposition bd = blocks(sk);
        if (bd.blocks.size() != 1)
            throw ContractViolation("build_spherecut: skeleton must be biconnected");
    }
    SphereCutDecomposition scd;
    scd.emb = emb;
    scd.ref = ref;

    ScdBuilder builder{sk, emb, scd.table, NooseBuilder{sk, emb}, {}, {}, {}};
    builder.init_walks();

    std::vector<EdgeId> root_part;
    for (EdgeId e = 0; e < sk.num_edges(); ++e)
        if (e != ref) root_part.push_back(e);

    bool is_cycle = true;
    for (Vertex v = 0; v < sk.num_vertices(); ++v)
        if (sk.degree(v) != 2) is_cycle = false;

    std::vector<ScdBuilder::BuiltPart> built;
    std::optional<int> root_idx;
    auto root_noose = builder.noose_of(root_part, {ref});
    if (!root_noose) throw ContractViolation("build_spherecut: root noose failed");

    if (is_cycle && sk.num_vertices() >= 3) {
        // caterpillar: peel edges in cyclic order from the reference edge
        std::vector<EdgeId> order;
        Vertex start = std::min(sk.edge(ref).u, sk.edge(ref).v);
        Vertex cur = start;
        EdgeId via = ref;
        while (true) {
            EdgeId nxt = -1;
            for (EdgeId e : sk.incident(cur))
                if (e != via) nxt = e;
            if (nxt == ref || nxt == -1) break;
            order.push_back(nxt);
            cur = sk.other(nxt, cur);
            via = nxt;
        }
        assert(order.size() == root_part.size());
        std::function<std::optional<int>(size_t)> prefix = [&](size_t k) -> std::optional<int> {
            std::vector<EdgeId> part(order.begin(), order.begin() + static_cast<long>(k));
            std::vector<EdgeId> comp;
            std::set<EdgeId> pset(part.begin(), part.end());
            for (EdgeId e = 0; e < sk.num_edges(); ++e)
                if (!pset.count(e)) comp.push_back(e);
            auto noose = builder.noose_of(part, comp);
            if (!noose) return std::nullopt;
            ScdBuilder::BuiltPart bp;
            bp.edges = part;
            std::sort(bp.edges.begin(), bp.edges.end());
            bp.noose = *noose;
            if (k > 1) {
                auto li = prefix(k - 1);
                if (!li) return std::nullopt;
                std::vector<EdgeId> single = {order[k - 1]};
                std::vector<EdgeId> scomp;
                for (EdgeId e = 0; e < sk.num_edges(); ++e)
                    if (e != order[k - 1]) scomp.push_back(e);
                auto snoose = builder.noose_of(single, scomp);
                if (!snoose) return std::nullopt;
                ScdBuilder::BuiltPart leaf;
                leaf.edges = single;
                leaf.noose = *snoose;
                built.push_back(std::move(leaf));
                bp.left = *li;
                bp.right = static_cast<int>(built.size()) - 1;
            }
            built.push_back(std::move(bp));
            return static_cast<int>(built.size()) - 1;
        };
        root_idx = prefix(order.size());
    }
    if (!root_idx) {
        built.clear();
        builder.rollback(0);
        builder.commit(*root_noose);
        root_idx = builder.build(root_part, *root_noose, built, 0);
    }
    if (!root_idx) throw ContractViolation("build_spherecut: no valid decomposition found");

    // compact the subcurve table to the curves actually used; candidate
    // probing interned more
    {
        SubcurveTable compact;
        std::map<int, int> remap_curve;
        for (const auto& bp : built)
            for (int c : bp.noose.curves)
                if (!remap_curve.count(c)) {
                    const Subcurve& sc = scd.table.at(c);
                    remap_curve[c] = compact.intern(sc.u, sc.v, sc.face);
                }
        for (auto& bp : built) {
            std::vector<int> ids;
            for (int c : bp.noose.curves) ids.push_back(remap_curve.at(c));
            auto n = make_weak_noose(compact, ids);
            if (!n) throw ContractViolation("build_spherecut: compaction broke a noose");
            bp.noose = *n;
        }
        scd.table = compact;
    }

    // re-index breadth-first with the root part at index 0
    std::vector<int> remap(built.size(), -1);
    scd.parts.resize(built.size());
    std::vector<int> order_ids;
    order_ids.push_back(*root_idx);
    remap[static_cast<size_t>(*root_idx)] = 0;
    for (size_t qi = 0; qi < order_ids.size(); ++qi) {
        int b = order_ids[qi];
        for (int c : {built[static_cast<size_t>(b)].left, built[static_cast<size_t>(b)].right})
            if (c != -1) {
                remap[static_cast<size_t>(c)] = static_cast<int>(order_ids.size());
                order_ids.push_back(c);
            }
    }
    for (size_t i = 0; i < order_ids.size(); ++i) {
        const auto& bp = built[static_cast<size_t>(order_ids[i])];
        ScdPart& p = scd.parts[i];
        p.edges = bp.edges;
        p.noose = bp.noose;
        p.left = bp.left == -1 ? -1 : remap[static_cast<size_t>(bp.left)];
        p.right = bp.right == -1 ? -1 : remap[static_cast<size_t>(bp.right)];
    }
    for (size_t i = 0; i < scd.parts.size(); ++i)
        for (int c : {scd.parts[i].left, scd.parts[i].right})
            if (c != -1) scd.parts[static_cast<size_t>(c)].parent = static_cast<int>(i);

    scd.width = 0;
    for (const ScdPart& p : scd.parts) scd.width = std::max(scd.width, p.noose.size());

    scd.overlay = build_overlay(sk, emb, scd.table, ref);
    return scd;
}

// ---------------------------------------------------------------------------
// XOR plans
// ---------------------------------------------------------------------------

XorPlan xor_plan(const SphereCutDecomposition& scd, int parent_part, int left_part,
                 int right_part) {
    const ScdPart& pp = scd.part(parent_part);
    if (!((pp.left == left_part && pp.right == right_part) ||
          (pp.left == right_part && pp.right == left_part)))
        throw ContractViolation("xor_plan: arcs are not in parent/child relation");
    const WeakNoose& oP = pp.noose;
    const WeakNoose& oL = scd.part(left_part).noose;
    const WeakNoose& oR = scd.part(right_part).noose;

    std::set<int> sym;
    for (const WeakNoose* o : {&oP, &oL, &oR})
        for (int c : o->curves) {
            if (!sym.insert(c).second) sym.erase(c);
        }
    XorPlan plan;
    auto boundary_overlap = [&](const WeakNoose& a, const WeakNoose& b) {
        auto sa = a.boundary_sorted();
        auto sb = b.boundary_sorted();
        std::vector<Vertex> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::back_inserter(inter));
        return static_cast<int>(inter.size());
    };
    auto step_xor = [&](const WeakNoose& a, const WeakNoose& b) {
        auto r = xor_nooses(scd.table, a, b);
        if (!r) throw ContractViolation("xor_plan: step does not form a weak noose");
        return *r;
    };

    if (sym.empty()) {
        plan.steps.push_back({XorStep::ChildLeft, XorStep::ChildRight, step_xor(oL, oR)});
    } else {
        // the leftover consists of one or two triangles, each taking exactly
        // one subcurve from O_P, O_L and O_R
        std::vector<int> fromP, fromL, fromR;
        std::set<int> inL(oL.curves.begin(), oL.curves.end());
        std::set<int> inR(oR.curves.begin(), oR.curves.end());
        for (int c : sym) {
            if (inL.count(c))
                fromL.push_back(c);
            else if (inR.count(c))
                fromR.push_back(c);
            else
                fromP.push_back(c);
        }
        auto edge_less = [&](const WeakNoose& tri) {
            try {
                return scd.overlay.enclosed_edges(tri).empty();
            } catch (const ContractViolation&) {
                return false;
            }
        };
        std::vector<WeakNoose> tris;
        if (sym.size() == 3) {
            if (fromP.size() != 1 || fromL.size() != 1 || fromR.size() != 1)
                throw ContractViolation("xor_plan: leftover is not a triangle");
            auto tri = make_weak_noose(scd.table, {fromP[0], fromL[0], fromR[0]});
            if (!tri) throw ContractViolation("xor_plan: leftover is not a triangle");
            tris.push_back(std::move(*tri));
        } else if (sym.size() == 6) {
            if (fromP.size() != 2 || fromL.size() != 2 || fromR.size() != 2)
                throw ContractViolation("xor_plan: leftover is not two triangles");
            bool found = false;
            for (int a = 0; a < 2 && !found; ++a)
                for (int b = 0; b < 2 && !found; ++b) {
                    auto t1 = make_weak_noose(
                        scd.table, {fromP[0], fromL[static_cast<size_t>(a)],
                                    fromR[static_cast<size_t>(b)]});
                    auto t2 = make_weak_noose(
                        scd.table, {fromP[1], fromL[static_cast<size_t>(1 - a)],
                                    fromR[static_cast<size_t>(1 - b)]});
                    if (t1 && t2 && t1->size() == 3 && t2->size() == 3 && edge_less(*t1) &&
                        edge_less(*t2)) {
                        tris = {std::move(*t1), std::move(*t2)};
                        found = true;
                    }
                }
            if (!found) throw ContractViolation("xor_plan: cannot split leftover into triangles");
        } else {
            throw ContractViolation("xor_plan: leftover has unexpected size");
        }
        plan.triangles = tris;
        if (tris.size() == 1) {
            const WeakNoose& t1 = tris[0];
            if (boundary_overlap(oL, t1) == 2) {
                plan.steps.push_back({XorStep::ChildLeft, XorStep::Triangle1, step_xor(oL, t1)});
                plan.steps.push_back(
                    {XorStep::Step0, XorStep::ChildRight, step_xor(plan.steps[0].result, oR)});
            } else if (boundary_overlap(oR, t1) == 2) {
                plan.steps.push_back({XorStep::ChildRight, XorStep::Triangle1, step_xor(oR, t1)});
                plan.steps.push_back(
                    {XorStep::Step0, XorStep::ChildLeft, step_xor(plan.steps[0].result, oL)});
            } else {
                throw ContractViolation("xor_plan: triangle fits neither child");
            }
        } else {
            const WeakNoose* tl = nullptr;
            const WeakNoose* tr = nullptr;
            if (boundary_overlap(oL, tris[0]) == 2 && boundary_overlap(oR, tris[1]) == 2) {
                tl = &tris[0];
                tr = &tris[1];
            } else if (boundary_overlap(oL, tris[1]) == 2 && boundary_overlap(oR, tris[0]) == 2) {
                tl = &tris[1];
                tr = &tris[0];
            } else {
                throw ContractViolation("xor_plan: cannot pair triangles with children");
            }
            plan.steps.push_back({XorStep::ChildLeft,
                                  tl == &tris[0] ? XorStep::Triangle1 : XorStep::Triangle2,
                                  step_xor(oL, *tl)});
            plan.steps.push_back({XorStep::ChildRight,
                                  tr == &tris[0] ? XorStep::Triangle1 : XorStep::Triangle2,
                                  step_xor(oR, *tr)});
            plan.steps.push_back({XorStep::Step0, XorStep::Step1,
                                  step_xor(plan.steps[0].result, plan.steps[1].result)});
        }
    }
    const WeakNoose& last = plan.steps.back().result;
    if (!(last == oP))
        throw ContractViolation("xor_plan: plan does not replay to the parent noose");
    int bound = 1 + std::max({oP.size(), oL.size(), oR.size()});
    for (const XorStep& s : plan.steps)
        if (s.result.size() > bound)
            throw ContractViolation("xor_plan: intermediate noose exceeds the size bound");
    for (const WeakNoose& tri : plan.triangles)
        if (!scd.overlay.enclosed_edges(tri).empty())
            throw ContractViolation("xor_plan: triangle encloses skeleton edges");
    return plan;
}

void validate_spherecut(const MultiGraph& sk, const SphereCutDecomposition& scd) {
    std::set<EdgeId> seen_leaf_edges;
    for (const ScdPart& p : scd.parts) {
        if ((p.left == -1) != (p.right == -1))
            throw ContractViolation("validate_spherecut: half-split part");
        if (p.left == -1) {
            if (p.edges.size() != 1) throw ContractViolation("validate_spherecut: bad leaf");
            if (!seen_leaf_edges.insert(p.edges[0]).second)
                throw ContractViolation("validate_spherecut: duplicated leaf edge");
        } else {
            std::vector<EdgeId> merged = scd.part(p.left).edges;
            merged.insert(merged.end(), scd.part(p.right).edges.begin(),
                          scd.part(p.right).edges.end());
            std::sort(merged.begin(), merged.end());
            if (merged != p.edges)
                throw ContractViolation("validate_spherecut: children do not partition the part");
        }
        if (p.noose.verts.size() != p.noose.curves.size())
            throw ContractViolation("validate_spherecut: noose size mismatch");
    }
    if (seen_leaf_edges.size() + 1 != static_cast<size_t>(sk.num_edges()))
        throw ContractViolation("validate_spherecut: leaves miss edges");
    for (const ScdPart& p : scd.parts) {
        auto enc = scd.overlay.enclosed_edges(p.noose);
        if (enc != p.edges)
            throw ContractViolation("validate_spherecut: noose encloses wrong edge set");
    }
    for (size_t i = 0; i < scd.parts.size(); ++i)
        if (scd.parts[i].left != -1)
            xor_plan(scd, static_cast<int>(i), scd.parts[i].left, scd.parts[i].right);
}

}  // namespace bookem
