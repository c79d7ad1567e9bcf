#include "bookem/types.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>

namespace bookem {

// ---------------------------------------------------------------------------
// Dyck words
// ---------------------------------------------------------------------------

std::string dyck_encode(const std::vector<std::pair<int, int>>& matching,
                        const std::vector<int>& order, int start, bool clockwise) {
    std::map<int, int> partner;
    for (auto& [a, b] : matching) {
        partner[a] = b;
        partner[b] = a;
    }
    std::vector<int> walk = order;
    if (!clockwise) std::reverse(walk.begin(), walk.end());
    auto it = std::find(walk.begin(), walk.end(), start);
    if (it == walk.end()) throw ContractViolation("dyck_encode: start not in order");
    std::rotate(walk.begin(), it, walk.end());
    std::string word;
    std::vector<int> stack;
    std::set<int> opened;
    for (int x : walk) {
        auto p = partner.find(x);
        if (p == partner.end()) continue;
        if (!opened.count(x)) {
            word += '[';
            opened.insert(p->second);
            stack.push_back(x);
        } else {
            word += ']';
            if (stack.empty() || stack.back() != p->second)
                throw ContractViolation("dyck_encode: matching crosses the order");
            stack.pop_back();
        }
    }
    if (!stack.empty()) throw ContractViolation("dyck_encode: matching crosses the order");
    return word;
}

std::vector<std::pair<int, int>> dyck_decode(const std::string& word,
                                             const std::vector<int>& matched_in_walk_order) {
    if (word.size() != matched_in_walk_order.size())
        throw ContractViolation("dyck_decode: length mismatch");
    std::vector<std::pair<int, int>> out;
    std::vector<int> stack;
    for (size_t i = 0; i < word.size(); ++i) {
        if (word[i] == '[') {
            stack.push_back(matched_in_walk_order[i]);
        } else if (word[i] == ']') {
            if (stack.empty()) throw ContractViolation("dyck_decode: not a Dyck word");
            out.emplace_back(stack.back(), matched_in_walk_order[i]);
            stack.pop_back();
        } else {
            throw ContractViolation("dyck_decode: bad symbol");
        }
    }
    if (!stack.empty()) throw ContractViolation("dyck_decode: not a Dyck word");
    return out;
}

// ---------------------------------------------------------------------------
// SPQR types
// ---------------------------------------------------------------------------

bool SpqrType::slot_exists(int slot) const {
    switch (slot) {
        case SLOT_S:
        case SLOT_T:
            return true;
        case SLOT_R:
            return psi_r >= 1;
        case SLOT_RP:
            return psi_r == 2;
        case SLOT_L:
            return psi_l >= 1;
        case SLOT_LP:
            return psi_l == 2;
    }
    return false;
}

namespace {

bool slots_cross(int a1, int a2, int b1, int b2) {
    auto inside = [](int x, int lo, int hi) {
        int span = (hi - lo + 6) % 6;
        int off = (x - lo + 6) % 6;
        return off > 0 && off < span;
    };
    return inside(b1, a1, a2) != inside(b2, a1, a2);
}

}  // namespace

bool SpqrType::valid() const {
    if (psi_l > 2 || psi_r > 2) return false;
    for (int slot = 0; slot < 6; ++slot) {
        int p = match[static_cast<size_t>(slot)];
        if (p == -1) continue;
        if (!slot_exists(slot) || !slot_exists(p)) return false;
        if (p == slot) return false;
        if (match[static_cast<size_t>(p)] != slot) return false;
    }
    // psi slots must be matched
    for (int slot : {SLOT_R, SLOT_RP, SLOT_L, SLOT_LP})
        if (slot_exists(slot) && match[static_cast<size_t>(slot)] == -1) return false;
    // S disjoint from V(M)
    if (s_in_S && match[SLOT_S] != -1) return false;
    if (t_in_S && match[SLOT_T] != -1) return false;
    // non-crossing w.r.t. (s, r, r', t, l', l)
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) {
            int pa = match[static_cast<size_t>(a)];
            int pb = match[static_cast<size_t>(b)];
            if (pa == -1 || pb == -1 || pa == b) continue;
            if (a < pa && b < pb && slots_cross(a, pa, b, pb)) return false;
        }
    return true;
}

uint32_t SpqrType::key() const {
    uint32_t k = psi_l | (psi_r << 2) | (static_cast<uint32_t>(s_in_S) << 4) |
                 (static_cast<uint32_t>(t_in_S) << 5);
    for (int slot = 0; slot < 6; ++slot)
        k |= static_cast<uint32_t>(match[static_cast<size_t>(slot)] + 1)
             << (6 + 3 * slot);
    return k;
}

SpqrType SpqrType::mirrored() const {
    auto swap_slot = [](int s) -> int {
        switch (s) {
            case SLOT_L: return SLOT_R;
            case SLOT_R: return SLOT_L;
            case SLOT_LP: return SLOT_RP;
            case SLOT_RP: return SLOT_LP;
        }
        return s;
    };
    SpqrType out;
    out.psi_l = psi_r;
    out.psi_r = psi_l;
    out.s_in_S = s_in_S;
    out.t_in_S = t_in_S;
    for (int slot = 0; slot < 6; ++slot) {
        int p = match[static_cast<size_t>(slot)];
        out.match[static_cast<size_t>(swap_slot(slot))] =
            p == -1 ? -1 : static_cast<int8_t>(swap_slot(p));
    }
    return out;
}

int SpqrType::goodness() const {
    if (dirty()) return -1;
    int edges = 0;
    for (int slot = 0; slot < 6; ++slot)
        if (match[static_cast<size_t>(slot)] > slot) edges++;
    if (psi_l == 0 && psi_r == 0 && edges == 0) return 0;
    if (psi_l == 1 && psi_r == 1 && edges == 1 && match[SLOT_L] == SLOT_R) return 1;
    if (psi_l == 2 && psi_r == 2 && edges == 2 && match[SLOT_L] == SLOT_R &&
        match[SLOT_LP] == SLOT_RP)
        return 2;
    return -1;
}

SpqrType make_spqr_type(int psi_l, int psi_r, const std::vector<std::pair<int, int>>& pairs,
                        bool s_in_S, bool t_in_S) {
    SpqrType t;
    t.psi_l = static_cast<uint8_t>(psi_l);
    t.psi_r = static_cast<uint8_t>(psi_r);
    t.s_in_S = s_in_S;
    t.t_in_S = t_in_S;
    for (auto& [a, b] : pairs) {
        t.match[static_cast<size_t>(a)] = static_cast<int8_t>(b);
        t.match[static_cast<size_t>(b)] = static_cast<int8_t>(a);
    }
    if (!t.valid()) throw ContractViolation("make_spqr_type: invalid type");
    return t;
}

const std::vector<SpqrType>& all_spqr_types() {
    static const std::vector<SpqrType> table = [] {
        std::vector<SpqrType> out;
        for (int pl = 0; pl <= 2; ++pl)
            for (int pr = 0; pr <= 2; ++pr) {
                SpqrType base;
                base.psi_l = static_cast<uint8_t>(pl);
                base.psi_r = static_cast<uint8_t>(pr);
                std::vector<int> slots;
                for (int s = 0; s < 6; ++s)
                    if (base.slot_exists(s)) slots.push_back(s);
                // all matchings over the available slots
                std::function<void(SpqrType&, size_t)> rec = [&](SpqrType& t, size_t i) {
                    if (i == slots.size()) {
                        if (!t.valid()) return;
                        for (int s_bit = 0; s_bit < 2; ++s_bit)
                            for (int t_bit = 0; t_bit < 2; ++t_bit) {
                                SpqrType u = t;
                                u.s_in_S = s_bit;
                                u.t_in_S = t_bit;
                                if (u.valid()) out.push_back(u);
                            }
                        return;
                    }
                    int a = slots[i];
                    if (t.match[static_cast<size_t>(a)] != -1) {
                        rec(t, i + 1);
                        return;
                    }
                    // leave unmatched (only legal for s and t)
                    if (a == SLOT_S || a == SLOT_T) rec(t, i + 1);
                    for (size_t j = i + 1; j < slots.size(); ++j) {
                        int b = slots[j];
                        if (t.match[static_cast<size_t>(b)] != -1) continue;
                        t.match[static_cast<size_t>(a)] = static_cast<int8_t>(b);
                        t.match[static_cast<size_t>(b)] = static_cast<int8_t>(a);
                        rec(t, i + 1);
                        t.match[static_cast<size_t>(a)] = -1;
                        t.match[static_cast<size_t>(b)] = -1;
                    }
                };
                rec(base, 0);
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }();
    return table;
}

const std::vector<SpqrType>& q_node_type_table() {
    static const std::vector<SpqrType> table = [] {
        std::vector<SpqrType> out;
        auto add = [&](int pl, int pr, std::vector<std::pair<int, int>> pairs, bool sS, bool tS) {
            out.push_back(make_spqr_type(pl, pr, pairs, sS, tS));
        };
        // psi_{0,0}
        add(0, 0, {}, true, true);
        add(0, 0, {}, false, false);
        add(0, 0, {{SLOT_S, SLOT_T}}, false, false);
        // psi_{1,0} and mirrored psi_{0,1}
        for (bool mirror : {false, true}) {
            int L = mirror ? SLOT_R : SLOT_L;
            int pl = mirror ? 0 : 1, pr = mirror ? 1 : 0;
            add(pl, pr, {{L, SLOT_S}}, false, false);
            add(pl, pr, {{L, SLOT_S}}, false, true);
            add(pl, pr, {{L, SLOT_T}}, false, false);
            add(pl, pr, {{L, SLOT_T}}, true, false);
        }
        // psi_{1,1}
        for (bool sS : {false, true})
            for (bool tS : {false, true}) add(1, 1, {{SLOT_L, SLOT_R}}, sS, tS);
        add(1, 1, {{SLOT_L, SLOT_S}, {SLOT_T, SLOT_R}}, false, false);
        add(1, 1, {{SLOT_L, SLOT_T}, {SLOT_S, SLOT_R}}, false, false);
        // psi_{2,0} and mirrored psi_{0,2}
        for (bool mirror : {false, true}) {
            int L = mirror ? SLOT_R : SLOT_L;
            int LP = mirror ? SLOT_RP : SLOT_LP;
            int pl = mirror ? 0 : 2, pr = mirror ? 2 : 0;
            for (bool sS : {false, true})
                for (bool tS : {false, true}) add(pl, pr, {{L, LP}}, sS, tS);
            add(pl, pr, {{SLOT_S, SLOT_T}, {L, LP}}, false, false);
            add(pl, pr, {{L, SLOT_S}, {LP, SLOT_T}}, false, false);
        }
        // psi_{2,1} and mirrored psi_{1,2}
        for (bool mirror : {false, true}) {
            int L = mirror ? SLOT_R : SLOT_L;
            int LP = mirror ? SLOT_RP : SLOT_LP;
            int R = mirror ? SLOT_L : SLOT_R;
            int pl = mirror ? 1 : 2, pr = mirror ? 2 : 1;
            add(pl, pr, {{L, R}, {LP, SLOT_T}}, true, false);
            add(pl, pr, {{L, LP}, {SLOT_S, R}}, false, false);
            add(pl, pr, {{L, LP}, {SLOT_S, R}}, false, true);
            add(pl, pr, {{L, LP}, {SLOT_T, R}}, false, false);
            add(pl, pr, {{L, LP}, {SLOT_T, R}}, true, false);
        }
        // psi_{2,2}
        add(2, 2, {{SLOT_L, SLOT_LP}, {SLOT_S, SLOT_R}, {SLOT_T, SLOT_RP}}, false, false);
        add(2, 2, {{SLOT_R, SLOT_RP}, {SLOT_L, SLOT_S}, {SLOT_LP, SLOT_T}}, false, false);
        add(2, 2, {{SLOT_L, SLOT_LP}, {SLOT_R, SLOT_RP}, {SLOT_S, SLOT_T}}, false, false);
        for (bool sS : {false, true})
            for (bool tS : {false, true})
                add(2, 2, {{SLOT_L, SLOT_LP}, {SLOT_R, SLOT_RP}}, sS, tS);
        add(2, 2, {{SLOT_L, SLOT_R}, {SLOT_LP, SLOT_RP}}, true, true);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }();
    return table;
}

std::string describe(const SpqrType& t) {
    static const char* names[6] = {"s", "r", "r'", "t", "l'", "l"};
    std::string out = "(psi " + std::to_string(t.psi_l) + "," + std::to_string(t.psi_r) + "; M{";
    for (int slot = 0; slot < 6; ++slot) {
        int p = t.match[static_cast<size_t>(slot)];
        if (p > slot) {
            out += names[slot];
            out += names[p];
            out += " ";
        }
    }
    out += "}; S{";
    if (t.s_in_S) out += "s";
    if (t.t_in_S) out += "t";
    out += "})";
    return out;
}

// ---------------------------------------------------------------------------
// Noose types
// ---------------------------------------------------------------------------

bool NooseType::full(int noose_size) const {
    if (static_cast<int>(vrole.size()) != noose_size) return false;
    for (uint8_t r : vrole)
        if (r != static_cast<uint8_t>(VRole::InS)) return false;
    for (uint8_t p : psi)
        if (p != 0) return false;
    return true;
}

bool NooseType::empty_type() const {
    for (uint8_t r : vrole)
        if (r != static_cast<uint8_t>(VRole::Free)) return false;
    for (uint8_t p : psi)
        if (p != 0) return false;
    return true;
}

std::string NooseType::key() const {
    std::string k;
    k.reserve(vrole.size() + psi.size() + crole.size() + 2);
    for (uint8_t r : vrole) k += static_cast<char>('0' + r);
    k += '|';
    for (uint8_t p : psi) k += static_cast<char>('0' + p);
    k += '|';
    for (uint8_t c : crole) k += static_cast<char>('0' + c);
    return k;
}

namespace {

// Slots of a type in canonical walk order; each slot carries its token and
// bracket role (or none).
struct SlotSeq {
    std::vector<Token> tokens;
    std::vector<uint8_t> roles;  // VRole codes; Free/InS for vertices, Open/Close for crossings
};

SlotSeq slot_sequence(const SubcurveTable& table, const WeakNoose& noose, const NooseType& type) {
    SlotSeq seq;
    int k = noose.size();
    size_t flat = 0;
    for (int i = 0; i < k; ++i) {
        seq.tokens.push_back({false, noose.verts[static_cast<size_t>(i)], 0});
        seq.roles.push_back(type.vrole[static_cast<size_t>(i)]);
        int c = noose.curves[static_cast<size_t>(i)];
        int cnt = type.psi[static_cast<size_t>(i)];
        const Subcurve& sc = table.at(c);
        Vertex from = noose.verts[static_cast<size_t>(i)];
        // crossing index 0 sits nearer the smaller endpoint of the curve
        for (int j = 0; j < cnt; ++j) {
            int idx = (from == std::min(sc.u, sc.v)) ? j : cnt - 1 - j;
            seq.tokens.push_back({true, c, idx});
            seq.roles.push_back(type.crole[flat + static_cast<size_t>(j)]);
        }
        flat += static_cast<size_t>(cnt);
    }
    return seq;
}

// Bracket-match the slot sequence; nullopt when not well nested.
std::optional<std::vector<std::pair<Token, Token>>> match_slots(const SlotSeq& seq) {
    std::vector<std::pair<Token, Token>> out;
    std::vector<Token> stack;
    for (size_t i = 0; i < seq.tokens.size(); ++i) {
        uint8_t r = seq.roles[i];
        if (r == static_cast<uint8_t>(VRole::Open)) {
            stack.push_back(seq.tokens[i]);
        } else if (r == static_cast<uint8_t>(VRole::Close)) {
            if (stack.empty()) return std::nullopt;
            out.emplace_back(stack.back(), seq.tokens[i]);
            stack.pop_back();
        }
    }
    if (!stack.empty()) return std::nullopt;
    return out;
}

}  // namespace

TypeView view_type(const SubcurveTable& table, const WeakNoose& noose, const NooseType& type) {
    TypeView view;
    SlotSeq seq = slot_sequence(table, noose, type);
    auto m = match_slots(seq);
    if (!m) throw ContractViolation("view_type: type brackets are not well nested");
    view.matching = *m;
    for (size_t i = 0; i < noose.verts.size(); ++i)
        if (type.vrole[i] == static_cast<uint8_t>(VRole::InS))
            view.in_s.insert(noose.verts[i]);
    for (size_t i = 0; i < noose.curves.size(); ++i)
        view.psi_of_curve[noose.curves[i]] = type.psi[i];
    view.full = type.full(noose.size());
    view.empty = type.empty_type();
    return view;
}

std::optional<NooseType> type_from_view(const SubcurveTable& table, const WeakNoose& noose,
                                        const std::vector<std::pair<Token, Token>>& matching,
                                        const std::set<Vertex>& in_s,
                                        const std::map<int, int>& psi_of_curve) {
    NooseType type;
    int k = noose.size();
    type.vrole.assign(static_cast<size_t>(k), static_cast<uint8_t>(VRole::Free));
    type.psi.assign(static_cast<size_t>(k), 0);
    std::set<Token> matched;
    for (auto& [a, b] : matching) {
        matched.insert(a);
        matched.insert(b);
    }
    for (int i = 0; i < k; ++i) {
        Vertex v = noose.verts[static_cast<size_t>(i)];
        if (in_s.count(v)) {
            type.vrole[static_cast<size_t>(i)] = static_cast<uint8_t>(VRole::InS);
            if (matched.count({false, v, 0})) return std::nullopt;  // S and V(M) overlap
        }
        auto it = psi_of_curve.find(noose.curves[static_cast<size_t>(i)]);
        type.psi[static_cast<size_t>(i)] = static_cast<uint8_t>(it == psi_of_curve.end() ? 0 : it->second);
    }
    // assign bracket roles by first encounter along the canonical walk
    NooseType probe = type;
    size_t total_cross = 0;
    for (uint8_t p : type.psi) total_cross += p;
    probe.crole.assign(total_cross, static_cast<uint8_t>(VRole::Open));
    SlotSeq seq = slot_sequence(table, noose, probe);
    std::map<Token, Token> partner;
    for (auto& [a, b] : matching) {
        partner[a] = b;
        partner[b] = a;
    }
    std::set<Token> seen;
    std::vector<uint8_t> roles(seq.tokens.size(), static_cast<uint8_t>(VRole::Free));
    for (size_t i = 0; i < seq.tokens.size(); ++i) {
        const Token& tok = seq.tokens[i];
        auto it = partner.find(tok);
        if (it == partner.end()) {
            if (tok.is_cross) return std::nullopt;  // crossing points must be matched
            roles[i] = type.vrole[std::distance(
                noose.verts.begin(),
                std::find(noose.verts.begin(), noose.verts.end(), tok.a))];
            continue;
        }
        roles[i] = seen.count(it->second) ? static_cast<uint8_t>(VRole::Close)
                                          : static_cast<uint8_t>(VRole::Open);
        seen.insert(tok);
    }
    // write roles back into the type arrays
    size_t flat = 0;
    size_t pos = 0;
    for (int i = 0; i < k; ++i) {
        type.vrole[static_cast<size_t>(i)] = roles[pos++];
        for (int j = 0; j < type.psi[static_cast<size_t>(i)]; ++j) probe.crole[flat + static_cast<size_t>(j)] = roles[pos + static_cast<size_t>(j)];
        pos += type.psi[static_cast<size_t>(i)];
        flat += type.psi[static_cast<size_t>(i)];
    }
    type.crole = probe.crole;
    // restore InS markers clobbered above
    for (int i = 0; i < k; ++i)
        if (in_s.count(noose.verts[static_cast<size_t>(i)]))
            type.vrole[static_cast<size_t>(i)] = static_cast<uint8_t>(VRole::InS);
    // verify: stack pairing reproduces the intended matching
    SlotSeq final_seq = slot_sequence(table, noose, type);
    auto m = match_slots(final_seq);
    if (!m) return std::nullopt;
    std::set<std::pair<Token, Token>> want, got;
    for (auto [a, b] : matching) {
        if (b < a) std::swap(a, b);
        want.insert({a, b});
    }
    for (auto [a, b] : *m) {
        if (b < a) std::swap(a, b);
        got.insert({a, b});
    }
    if (want != got) return std::nullopt;  // crossing matching
    return type;
}

std::vector<NooseType> enumerate_types(const SubcurveTable& table, const WeakNoose& noose) {
    int k = noose.size();
    if (k > 6) throw ContractViolation("enumerate_types: noose too large for enumeration");
    std::vector<NooseType> out;
    // per-vertex roles: 4 options; per-curve: psi 0 / 1 with 2 roles / 2 with 4
    std::vector<int> vchoice(static_cast<size_t>(k), 0);
    std::vector<int> cchoice(static_cast<size_t>(k), 0);  // 0..6 encoding the 7 options
    std::function<void(int)> rec_c = [&](int ci) {
        if (ci == k) {
            NooseType t;
            for (int i = 0; i < k; ++i) t.vrole.push_back(static_cast<uint8_t>(vchoice[static_cast<size_t>(i)]));
            for (int i = 0; i < k; ++i) {
                int c = cchoice[static_cast<size_t>(i)];
                if (c == 0) {
                    t.psi.push_back(0);
                } else if (c <= 2) {
                    t.psi.push_back(1);
                } else {
                    t.psi.push_back(2);
                }
            }
            for (int i = 0; i < k; ++i) {
                int c = cchoice[static_cast<size_t>(i)];
                if (c == 1) t.crole.push_back(static_cast<uint8_t>(VRole::Open));
                if (c == 2) t.crole.push_back(static_cast<uint8_t>(VRole::Close));
                if (c >= 3) {
                    int bits = c - 3;  // 0..3: two roles
                    t.crole.push_back(static_cast<uint8_t>((bits & 2) ? VRole::Close : VRole::Open));
                    t.crole.push_back(static_cast<uint8_t>((bits & 1) ? VRole::Close : VRole::Open));
                }
            }
            SlotSeq seq = slot_sequence(table, noose, t);
            if (match_slots(seq)) out.push_back(std::move(t));
            return;
        }
        for (int c = 0; c < 7; ++c) {
            cchoice[static_cast<size_t>(ci)] = c;
            rec_c(ci + 1);
        }
    };
    std::function<void(int)> rec_v = [&](int vi) {
        if (vi == k) {
            rec_c(0);
            return;
        }
        for (int r = 0; r < 4; ++r) {
            vchoice[static_cast<size_t>(vi)] = r;
            rec_v(vi + 1);
        }
    };
    rec_v(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Compatibility and combination
// ---------------------------------------------------------------------------

namespace {

struct UnionPaths {
    // union multigraph of both matchings, walked into maximal paths/cycles
    std::vector<std::vector<Token>> paths;   // token chains, endpoints first/last
    int cycles = 0;
    std::vector<Token> one_cycle;            // the cycle when cycles == 1
};

UnionPaths walk_union(const std::vector<std::pair<Token, Token>>& m1,
                      const std::vector<std::pair<Token, Token>>& m2) {
    std::map<Token, std::vector<std::pair<Token, int>>> adj;  // token -> (other, edge id)
    int eid = 0;
    for (auto* m : {&m1, &m2})
        for (auto& [a, b] : *m) {
            adj[a].emplace_back(b, eid);
            adj[b].emplace_back(a, eid);
            eid++;
        }
    UnionPaths out;
    std::set<int> used_edges;
    // paths first: start at degree-1 tokens
    for (auto& [tok, nb] : adj) {
        if (nb.size() > 2)
            throw ContractViolation("walk_union: token with degree > 2");
        if (nb.size() != 1) continue;
        bool fresh = true;
        for (auto& [o, e] : nb)
            if (used_edges.count(e)) fresh = false;
        if (!fresh) continue;
        std::vector<Token> chain = {tok};
        Token cur = tok;
        int via = -1;
        while (true) {
            bool extended = false;
            for (auto& [o, e] : adj[cur]) {
                if (e == via || used_edges.count(e)) continue;
                used_edges.insert(e);
                chain.push_back(o);
                via = e;
                cur = o;
                extended = true;
                break;
            }
            if (!extended) break;
        }
        out.paths.push_back(std::move(chain));
    }
    // remaining edges form cycles
    for (auto& [tok, nb] : adj) {
        for (auto& [o, e] : nb) {
            if (used_edges.count(e)) continue;
            out.cycles++;
            std::vector<Token> cyc = {tok};
            Token cur = tok;
            int via = -1;
            while (true) {
                bool extended = false;
                for (auto& [o2, e2] : adj[cur]) {
                    if (e2 == via || used_edges.count(e2)) continue;
                    used_edges.insert(e2);
                    via = e2;
                    cur = o2;
                    extended = true;
                    if (cur != tok) cyc.push_back(cur);
                    break;
                }
                if (!extended) break;
            }
            out.one_cycle = cyc;
        }
    }
    return out;
}

}  // namespace

bool check_compatible(const SubcurveTable& table, const NoosePairContext& ctx,
                      const NooseType& x1, const NooseType& x2) {
    // (1) + (2): xor is a weak noose enclosing the cancelled subcurves
    if (!ctx.region_ok) return false;
    TypeView v1 = view_type(table, ctx.o1, x1);
    TypeView v2 = view_type(table, ctx.o2, x2);
    // (3): psi agreement on shared subcurves
    for (int c : ctx.shared_curves) {
        int p1 = v1.psi_of_curve.count(c) ? v1.psi_of_curve.at(c) : 0;
        int p2 = v2.psi_of_curve.count(c) ? v2.psi_of_curve.at(c) : 0;
        if (p1 != p2) return false;
    }
    // (6): full pairs only with empty
    if (v1.full || v2.full) {
        const TypeView& fullv = v1.full ? v1 : v2;
        const TypeView& other = v1.full ? v2 : v1;
        const WeakNoose& full_noose = v1.full ? ctx.o1 : ctx.o2;
        const WeakNoose& other_noose = v1.full ? ctx.o2 : ctx.o1;
        (void)fullv;
        if (!other.empty) return false;
        auto fb = full_noose.boundary_sorted();
        for (Vertex v : other_noose.boundary_sorted())
            if (!std::binary_search(fb.begin(), fb.end(), v)) return false;
    }
    // degree bookkeeping on every shared boundary vertex; vanishing vertices
    // must come out with degree exactly two
    std::set<Vertex> b1(ctx.o1.verts.begin(), ctx.o1.verts.end());
    std::set<Vertex> b2(ctx.o2.verts.begin(), ctx.o2.verts.end());
    std::set<Token> m1tok, m2tok;
    for (auto& [a, b] : v1.matching) {
        m1tok.insert(a);
        m1tok.insert(b);
    }
    for (auto& [a, b] : v2.matching) {
        m2tok.insert(a);
        m2tok.insert(b);
    }
    std::set<Vertex> vanishing(ctx.vanishing.begin(), ctx.vanishing.end());
    for (Vertex v : b1) {
        if (!b2.count(v)) continue;
        Token tok{false, v, 0};
        int deg = (v1.in_s.count(v) ? 2 : 0) + (v2.in_s.count(v) ? 2 : 0) +
                  (m1tok.count(tok) ? 1 : 0) + (m2tok.count(tok) ? 1 : 0);
        if (deg > 2) return false;
        if (vanishing.count(v) && deg != 2) return false;  // (4)
    }
    // (5): union acyclic, or a single cycle covering the result boundary
    std::vector<std::pair<Token, Token>> m1 = v1.matching, m2 = v2.matching;
    UnionPaths up;
    try {
        up = walk_union(m1, m2);
    } catch (const ContractViolation&) {
        return false;
    }
    if (up.cycles > 1) return false;
    if (up.cycles == 1) {
        if (!up.paths.empty()) return false;
        for (Vertex v : ctx.result.verts) {
            bool covered = v1.in_s.count(v) || v2.in_s.count(v) ||
                           (m1tok.count({false, v, 0}) && m2tok.count({false, v, 0}));
            if (!covered) return false;
        }
    }
    // result paths must end on the result noose
    std::set<Vertex> result_b(ctx.result.verts.begin(), ctx.result.verts.end());
    std::set<int> result_curves(ctx.result.curves.begin(), ctx.result.curves.end());
    for (auto& chain : up.paths) {
        for (const Token& end : {chain.front(), chain.back()}) {
            if (end.is_cross) {
                if (!result_curves.count(end.a)) return false;
            } else {
                if (!result_b.count(end.a)) return false;
                // an endpoint vertex must not be interior elsewhere
                if (v1.in_s.count(end.a) || v2.in_s.count(end.a)) return false;
            }
        }
    }
    // the combined matching must be non-crossing on the result noose
    std::vector<std::pair<Token, Token>> result_m;
    for (auto& chain : up.paths) result_m.emplace_back(chain.front(), chain.back());
    std::set<Vertex> result_s;
    for (Vertex v : ctx.result.verts) {
        bool interior = v1.in_s.count(v) || v2.in_s.count(v) ||
                        (m1tok.count({false, v, 0}) && m2tok.count({false, v, 0}));
        if (interior) result_s.insert(v);
    }
    std::map<int, int> result_psi;
    for (int c : ctx.result.curves) {
        if (v1.psi_of_curve.count(c)) result_psi[c] = v1.psi_of_curve.at(c);
        else if (v2.psi_of_curve.count(c)) result_psi[c] = v2.psi_of_curve.at(c);
    }
    if (up.cycles == 1 || v1.full || v2.full) {
        // full result: no matching to check
        return true;
    }
    return type_from_view(table, ctx.result, result_m, result_s, result_psi).has_value();
}

NooseType combine_types(const SubcurveTable& table, const NoosePairContext& ctx,
                        const NooseType& x1, const NooseType& x2) {
    if (!check_compatible(table, ctx, x1, x2))
        throw ContractViolation("combine_types: incompatible inputs");
    TypeView v1 = view_type(table, ctx.o1, x1);
    TypeView v2 = view_type(table, ctx.o2, x2);
    std::set<Token> m1tok, m2tok;
    for (auto& [a, b] : v1.matching) {
        m1tok.insert(a);
        m1tok.insert(b);
    }
    for (auto& [a, b] : v2.matching) {
        m2tok.insert(a);
        m2tok.insert(b);
    }
    UnionPaths up = walk_union(v1.matching, v2.matching);
    std::set<Vertex> result_s;
    for (Vertex v : ctx.result.verts) {
        bool interior = v1.in_s.count(v) || v2.in_s.count(v) ||
                        (m1tok.count({false, v, 0}) && m2tok.count({false, v, 0}));
        if (interior) result_s.insert(v);
    }
    std::map<int, int> result_psi;
    for (int c : ctx.result.curves) {
        if (v1.psi_of_curve.count(c)) result_psi[c] = v1.psi_of_curve.at(c);
        else if (v2.psi_of_curve.count(c)) result_psi[c] = v2.psi_of_curve.at(c);
    }
    if (up.cycles == 1 || v1.full || v2.full) {
        // full type on the result noose
        NooseType t;
        int k = ctx.result.size();
        t.vrole.assign(static_cast<size_t>(k), static_cast<uint8_t>(VRole::InS));
        t.psi.assign(static_cast<size_t>(k), 0);
        return t;
    }
    std::vector<std::pair<Token, Token>> result_m;
    for (auto& chain : up.paths) result_m.emplace_back(chain.front(), chain.back());
    auto t = type_from_view(table, ctx.result, result_m, result_s, result_psi);
    if (!t) throw ContractViolation("combine_types: combined matching crosses");
    return *t;
}

std::vector<std::array<NooseType, 3>> enumerate_triples(const SubcurveTable& table,
                                                        const NoosePairContext& ctx) {
    std::vector<std::array<NooseType, 3>> out;
    if (!ctx.region_ok) return out;
    auto t1 = enumerate_types(table, ctx.o1);
    auto t2 = enumerate_types(table, ctx.o2);
    for (const NooseType& x1 : t1)
        for (const NooseType& x2 : t2)
            if (check_compatible(table, ctx, x1, x2))
                out.push_back({combine_types(table, ctx, x1, x2), x1, x2});
    return out;
}

}  // namespace bookem
