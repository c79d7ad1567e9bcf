#include <doctest.h>

#include <algorithm>
#include <map>
#include <cmath>
#include <numeric>

#include "bookem/types.hpp"
#include "support.hpp"

using namespace bookem;

namespace {

// brute force: all perfect matchings on n points, filter circular crossings
int count_noncrossing_perfect(int n) {
    std::vector<int> pts(static_cast<size_t>(n));
    std::iota(pts.begin(), pts.end(), 0);
    std::function<int(std::vector<int>&, std::vector<std::pair<int, int>>&)> rec =
        [&](std::vector<int>& rest, std::vector<std::pair<int, int>>& acc) -> int {
        if (rest.empty()) {
            for (size_t i = 0; i < acc.size(); ++i)
                for (size_t j = i + 1; j < acc.size(); ++j) {
                    auto [a, b] = acc[i];
                    auto [c, d] = acc[j];
                    auto inside = [&](int x, int lo, int hi) {
                        int span = (hi - lo + n) % n;
                        int off = (x - lo + n) % n;
                        return off > 0 && off < span;
                    };
                    if (inside(c, a, b) != inside(d, a, b)) return 0;
                }
            return 1;
        }
        int first = rest.front();
        int total = 0;
        for (size_t i = 1; i < rest.size(); ++i) {
            std::vector<int> next;
            for (size_t j = 1; j < rest.size(); ++j)
                if (j != i) next.push_back(rest[j]);
            acc.emplace_back(first, rest[i]);
            total += rec(next, acc);
            acc.pop_back();
        }
        return total;
    };
    std::vector<std::pair<int, int>> acc;
    return rec(pts, acc);
}

}  // namespace

TEST_CASE("dyck encode/decode") {
    CHECK(dyck_encode({{1, 2}, {3, 4}}, {1, 2, 3, 4}, 1, true) == "[][]");
    CHECK(dyck_encode({{1, 4}, {2, 3}}, {1, 2, 3, 4}, 1, true) == "[[]]");
    // matchings "crossing the cut" stay valid: roles are relative to start
    CHECK(dyck_encode({{1, 4}, {2, 3}}, {1, 2, 3, 4}, 2, true) == "[][]");
    CHECK_THROWS_AS(dyck_encode({{1, 3}, {2, 4}}, {1, 2, 3, 4}, 1, true), ContractViolation);

    auto m = dyck_decode("[[]]", {1, 2, 3, 4});
    CHECK(m.size() == 2);
}

TEST_CASE("dyck round trip is exhaustive on <= 8 slots") {
    for (int n : {2, 4, 6, 8}) {
        std::vector<int> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        // enumerate all perfect matchings, keep non-crossing, round trip
        std::function<void(std::vector<int>, std::vector<std::pair<int, int>>)> rec =
            [&](std::vector<int> rest, std::vector<std::pair<int, int>> acc) {
                if (rest.empty()) {
                    bool crossing = false;
                    try {
                        std::string w = dyck_encode(acc, order, 0, true);
                        std::vector<int> walk_matched = order;
                        auto back = dyck_decode(w, walk_matched);
                        std::set<std::pair<int, int>> a, b;
                        for (auto [x, y] : acc) a.insert(std::minmax(x, y));
                        for (auto [x, y] : back) b.insert(std::minmax(x, y));
                        CHECK(a == b);
                    } catch (const ContractViolation&) {
                        crossing = true;
                    }
                    (void)crossing;
                    return;
                }
                int first = rest.front();
                for (size_t i = 1; i < rest.size(); ++i) {
                    std::vector<int> next;
                    for (size_t j = 1; j < rest.size(); ++j)
                        if (j != i) next.push_back(rest[j]);
                    auto acc2 = acc;
                    acc2.emplace_back(first, rest[i]);
                    rec(next, acc2);
                }
            };
        rec(order, {});
    }
}

TEST_CASE("noncrossing matching counts are Catalan numbers") {
    CHECK(count_noncrossing_perfect(2) == 1);
    CHECK(count_noncrossing_perfect(4) == 2);
    CHECK(count_noncrossing_perfect(6) == 5);
    CHECK(count_noncrossing_perfect(8) == 14);
}

TEST_CASE("q node table") {
    const auto& table = q_node_type_table();
    // frozen golden value: transcription of the published table
    CHECK(table.size() == 47);
    // every entry is valid and the table is mirror closed
    for (const SpqrType& t : table) {
        CHECK(t.valid());
        CHECK(std::find(table.begin(), table.end(), t.mirrored()) != table.end());
    }
    // psi_{0,0} group has exactly 3 types including (psi00, {}, {s,t})
    int psi00 = 0;
    bool has_full = false;
    for (const SpqrType& t : table)
        if (t.psi_l == 0 && t.psi_r == 0) {
            psi00++;
            if (t.s_in_S && t.t_in_S) has_full = true;
        }
    CHECK(psi00 == 3);
    CHECK(has_full);
    // psi_{2,2} group contains ({{l,r},{l',r'}}, {s,t})
    SpqrType cross22 = make_spqr_type(2, 2, {{SLOT_L, SLOT_R}, {SLOT_LP, SLOT_RP}}, true, true);
    CHECK(std::find(table.begin(), table.end(), cross22) != table.end());
    // the table is a subset of all structurally valid types
    const auto& all = all_spqr_types();
    for (const SpqrType& t : table)
        CHECK(std::find(all.begin(), all.end(), t) != all.end());
}

TEST_CASE("spqr type classification") {
    SpqrType good0 = make_spqr_type(0, 0, {}, false, false);
    CHECK(good0.goodness() == 0);
    SpqrType good1 = make_spqr_type(1, 1, {{SLOT_L, SLOT_R}}, false, false);
    CHECK(good1.goodness() == 1);
    SpqrType good2 =
        make_spqr_type(2, 2, {{SLOT_L, SLOT_R}, {SLOT_LP, SLOT_RP}}, false, false);
    CHECK(good2.goodness() == 2);
    SpqrType bad = make_spqr_type(2, 0, {{SLOT_L, SLOT_LP}}, false, false);
    CHECK(bad.goodness() == -1);
    CHECK(!bad.dirty());
    SpqrType dirty = make_spqr_type(0, 0, {}, true, true);
    CHECK(dirty.dirty());
    CHECK(dirty.count_s() == 2);
    SpqrType matched_s = make_spqr_type(0, 0, {{SLOT_S, SLOT_T}}, false, false);
    CHECK(matched_s.count_s() == 1);
    // crossing matching rejected
    CHECK_THROWS_AS(make_spqr_type(2, 2, {{SLOT_L, SLOT_RP}, {SLOT_LP, SLOT_R}}, false, false),
                    ContractViolation);
}

namespace {

// small synthetic noose: k curves around vertices 1..k, distinct faces
struct TinyNoose {
    SubcurveTable table;
    WeakNoose noose;
    explicit TinyNoose(int k) {
        std::vector<int> ids;
        for (int i = 0; i < k; ++i)
            ids.push_back(table.intern(i + 1, (i + 1) % k + 1, 100 + i));
        noose = *make_weak_noose(table, ids);
    }
};

}  // namespace

TEST_CASE("enumerate_types") {
    for (int k : {2, 3, 4}) {
        TinyNoose tn(k);
        auto types = enumerate_types(tn.table, tn.noose);
        // bound from the role-assignment argument
        CHECK(types.size() <= static_cast<size_t>(std::pow(28.0, k)));
        // types with M empty: every vertex in or out of S, no crossings
        int m_empty = 0;
        for (const NooseType& t : types) {
            bool has_match = false;
            for (uint8_t r : t.vrole)
                if (r >= 2) has_match = true;
            for (uint8_t p : t.psi)
                if (p) has_match = true;
            if (!has_match) m_empty++;
        }
        CHECK(m_empty == (1 << k));
        // exactly one full and one empty type
        int fulls = 0, empties = 0;
        for (const NooseType& t : types) {
            if (t.full(k)) fulls++;
            if (t.empty_type()) empties++;
        }
        CHECK(fulls == 1);
        CHECK(empties == 1);
        // no duplicates
        std::set<std::string> keys;
        for (const NooseType& t : types) CHECK(keys.insert(t.key()).second);
    }
}

TEST_CASE("enumerate_types matches an independent role-assignment oracle at k=2") {
    // independent oracle: raw role strings filtered by a from-scratch
    // circular bracket check over the explicit slot list
    TinyNoose tn(2);
    auto types = enumerate_types(tn.table, tn.noose);
    long oracle = 0;
    // slots: v1 (curve a crossings) v2 (curve b crossings)
    for (int r1 = 0; r1 < 4; ++r1)
        for (int c1 = 0; c1 < 7; ++c1)
            for (int r2 = 0; r2 < 4; ++r2)
                for (int c2 = 0; c2 < 7; ++c2) {
                    std::vector<int> word;  // 0 skip, 1 open, 2 close
                    auto role_bits = [&](int r) { return r == 2 ? 1 : (r == 3 ? 2 : 0); };
                    auto curve_bits = [&](int c, std::vector<int>& w) {
                        if (c == 0) return;
                        if (c == 1) w.push_back(1);
                        if (c == 2) w.push_back(2);
                        if (c >= 3) {
                            int bits = c - 3;
                            w.push_back((bits & 2) ? 2 : 1);
                            w.push_back((bits & 1) ? 2 : 1);
                        }
                    };
                    word.push_back(role_bits(r1));
                    curve_bits(c1, word);
                    word.push_back(role_bits(r2));
                    curve_bits(c2, word);
                    int depth = 0;
                    bool ok = true;
                    for (int w : word) {
                        if (w == 1) depth++;
                        if (w == 2) depth--;
                        if (depth < 0) ok = false;
                    }
                    if (ok && depth == 0) oracle++;
                }
    CHECK(static_cast<long>(types.size()) == oracle);
}

TEST_CASE("figure-5 style combination") {
    // Upper noose O1 over u1..u5 and the middle chain u1,u9,u10,u11,u5;
    // lower noose O2 over u1,u8,u7,u6,u5 sharing the middle chain.
    SubcurveTable table;
    auto C = [&](Vertex a, Vertex b, int f) { return table.intern(a, b, f); };
    int c12 = C(1, 2, 0), c23 = C(2, 3, 1), c34 = C(3, 4, 2), c45 = C(4, 5, 3);
    int c19 = C(1, 9, 4), c9_10 = C(9, 10, 5), c10_11 = C(10, 11, 6), c5_11 = C(5, 11, 7);
    int c18 = C(1, 8, 8), c78 = C(7, 8, 9), c67 = C(6, 7, 10), c56 = C(5, 6, 11);
    WeakNoose o1 = *make_weak_noose(table, {c12, c23, c34, c45, c5_11, c10_11, c9_10, c19});
    WeakNoose o2 = *make_weak_noose(table, {c18, c78, c67, c56, c5_11, c10_11, c9_10, c19});
    WeakNoose result = *make_weak_noose(table, {c12, c23, c34, c45, c56, c67, c78, c18});

    NoosePairContext ctx;
    ctx.o1 = o1;
    ctx.o2 = o2;
    ctx.result = result;
    ctx.shared_curves = {c19, c9_10, c10_11, c5_11};
    std::sort(ctx.shared_curves.begin(), ctx.shared_curves.end());
    ctx.vanishing = {9, 10, 11};
    ctx.region_ok = true;

    auto V = [](Vertex v) { return Token{false, v, 0}; };
    auto X = [](int curve, int idx) { return Token{true, curve, idx}; };
    // crossing points: x1=(c23,0) x2=(c34,0) x3=(c45,0) x7=(c19,0)
    // x8=(c9_10,0) x9=(c9_10,1) x10=(c5_11,0) x4=(c56,0) x5=(c67,0) x6=(c67,1)
    std::vector<std::pair<Token, Token>> m1 = {{X(c23, 0), X(c9_10, 1)},
                                               {X(c34, 0), V(5)},
                                               {V(4), X(c45, 0)},
                                               {X(c5_11, 0), V(11)},
                                               {X(c9_10, 0), X(c19, 0)}};
    std::set<Vertex> s1 = {2, 10};
    std::map<int, int> psi1 = {{c12, 0}, {c23, 1}, {c34, 1}, {c45, 1},
                               {c19, 1}, {c9_10, 2}, {c10_11, 0}, {c5_11, 1}};
    auto x1t = type_from_view(table, o1, m1, s1, psi1);
    REQUIRE(x1t.has_value());

    std::vector<std::pair<Token, Token>> m2 = {{X(c19, 0), V(8)},
                                               {X(c9_10, 0), X(c5_11, 0)},
                                               {X(c9_10, 1), V(11)},
                                               {V(5), X(c56, 0)},
                                               {X(c67, 0), X(c67, 1)}};
    std::set<Vertex> s2 = {9, 6};
    std::map<int, int> psi2 = {{c18, 0}, {c78, 0}, {c67, 2}, {c56, 1},
                               {c19, 1}, {c9_10, 2}, {c10_11, 0}, {c5_11, 1}};
    auto x2t = type_from_view(table, o2, m2, s2, psi2);
    REQUIRE(x2t.has_value());

    REQUIRE(check_compatible(table, ctx, *x1t, *x2t));
    NooseType combined = combine_types(table, ctx, *x1t, *x2t);
    TypeView cv = view_type(table, result, combined);
    // published result: M = {{x1,u8},{x2,x4},{u4,x3},{x5,x6}}, S = {u2,u5,u6}
    CHECK(cv.in_s == std::set<Vertex>{2, 5, 6});
    std::set<std::pair<Token, Token>> got;
    for (auto [a, b] : cv.matching) {
        if (b < a) std::swap(a, b);
        got.insert({a, b});
    }
    std::set<std::pair<Token, Token>> want;
    auto ins = [&](Token a, Token b) {
        if (b < a) std::swap(a, b);
        want.insert({a, b});
    };
    ins(X(c23, 0), V(8));
    ins(X(c34, 0), X(c56, 0));
    ins(V(4), X(c45, 0));
    ins(X(c67, 0), X(c67, 1));
    CHECK(got == want);
}

TEST_CASE("compatibility rejections") {
    TinyNoose tn(3);
    auto types = enumerate_types(tn.table, tn.noose);
    // two full types are never compatible (condition 6): fabricate a context
    // where o1 == o2 is nonsense, so use two disjoint tiny nooses instead
    SubcurveTable table;
    int a1 = table.intern(1, 2, 0), a2 = table.intern(2, 3, 1), a3 = table.intern(1, 3, 2);
    int b2 = table.intern(3, 4, 3), b3 = table.intern(1, 4, 4);
    WeakNoose o1 = *make_weak_noose(table, {a1, a2, a3});
    WeakNoose o2 = *make_weak_noose(table, {a3, b2, b3});  // shares curve a3
    NoosePairContext ctx;
    ctx.o1 = o1;
    ctx.o2 = o2;
    ctx.shared_curves = {a3};
    ctx.region_ok = true;  // pretend geometry is fine; type logic must still reject
    auto full1 = type_from_view(table, o1, {}, {1, 2, 3}, {});
    auto full2 = type_from_view(table, o2, {}, {1, 3, 4}, {});
    REQUIRE(full1);
    REQUIRE(full2);
    auto r = xor_nooses(table, o1, o2);
    REQUIRE(r.has_value());
    ctx.result = *r;
    CHECK(!check_compatible(table, ctx, *full1, *full2));

    // psi disagreement on a shared curve
    SubcurveTable t2;
    int s1 = t2.intern(1, 2, 0), s2 = t2.intern(2, 3, 1), s3 = t2.intern(1, 3, 2);
    int s4 = t2.intern(2, 3, 3);  // second curve between 2 and 3, other face
    WeakNoose p1 = *make_weak_noose(t2, {s1, s2, s3});
    WeakNoose p2 = *make_weak_noose(t2, {s2, s4});
    NoosePairContext cx;
    cx.o1 = p1;
    cx.o2 = p2;
    cx.shared_curves = {s2};
    cx.region_ok = true;
    cx.result = *xor_nooses(t2, p1, p2);
    auto x1 = type_from_view(t2, p1, {{Token{true, s2, 0}, Token{false, 1, 0}}}, {},
                             {{s2, 1}});
    auto x2 = type_from_view(t2, p2, {}, {}, {{s2, 0}, {s4, 0}});
    REQUIRE(x1);
    REQUIRE(x2);
    CHECK(!check_compatible(t2, cx, *x1, *x2));
}
