#include <doctest.h>

#include <numeric>

#include "bookem/planarity.hpp"
#include "support.hpp"

using namespace bookem;
using testsup::complete;
using testsup::cycle;

TEST_CASE("basic planar embeddings") {
    auto emb = planar_embedding(complete(4));
    REQUIRE(emb.has_value());
    CHECK(emb->num_faces() == 4);  // Euler: 4 - 6 + f = 2
    CHECK(validate_embedding(complete(4), *emb));

    CHECK(!planar(complete(5)));

    auto c6 = planar_embedding(cycle(6));
    REQUIRE(c6.has_value());
    CHECK(c6->num_faces() == 2);

    // K3,3 non-planar
    MultiGraph k33(6);
    for (int i = 0; i < 3; ++i)
        for (int j = 3; j < 6; ++j) k33.add_edge(i, j);
    CHECK(!planar(k33));
}

TEST_CASE("face walks") {
    MultiGraph tri = cycle(3);
    auto emb = planar_embedding(tri);
    REQUIRE(emb.has_value());
    auto fw = faces(tri, *emb);
    REQUIRE(fw.size() == 2);
    CHECK(fw[0].size() == 3);
    CHECK(fw[1].size() == 3);

    MultiGraph par(2);
    par.add_edge(0, 1);
    par.add_edge(0, 1);
    auto pe = planar_embedding(par);
    REQUIRE(pe.has_value());
    auto pw = faces(par, *pe);
    REQUIRE(pw.size() == 2);
    CHECK(pw[0].size() == 2);
    CHECK(pw[1].size() == 2);

    auto k4 = planar_embedding(complete(4));
    for (auto& w : faces(complete(4), *k4)) CHECK(w.size() == 3);

    // inconsistent rotation system -> integrity error
    CombinatorialEmbedding broken = *emb;
    broken.rotation[0].pop_back();
    CHECK_THROWS_AS(faces(tri, broken), ContractViolation);
}

TEST_CASE("multigraph and disconnected embeddings") {
    // theta graph plus a pendant and an isolated vertex
    MultiGraph g(5);
    g.add_edge(0, 1);
    g.add_edge(0, 1);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(3, 4);
    auto emb = planar_embedding(g);
    REQUIRE(emb.has_value());
    CHECK(validate_embedding(g, *emb));
}

TEST_CASE("planar_with_cycle") {
    CHECK(planar_with_cycle(complete(4), {0, 1, 2, 3}));
    CHECK(planar_with_cycle(cycle(4), {0, 1, 2, 3}));

    // K5 minus the edge {3,4}: the union with a cycle h is non-planar exactly
    // when h makes 3 and 4 cyclically adjacent (re-creating K5)
    MultiGraph k5m = complete(5);
    MultiGraph g(5);
    for (EdgeId e = 0; e < k5m.num_edges() - 1; ++e) g.add_edge(k5m.edge(e).u, k5m.edge(e).v);
    std::vector<Vertex> order(5);
    std::iota(order.begin(), order.end(), 0);
    do {
        std::vector<int> pos(5);
        for (int i = 0; i < 5; ++i) pos[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
        bool adjacent34 = (pos[3] + 1) % 5 == pos[4] || (pos[4] + 1) % 5 == pos[3];
        CHECK(planar_with_cycle(g, order) == !adjacent34);
    } while (std::next_permutation(order.begin(), order.end()));

    CHECK_THROWS_AS(planar_with_cycle(complete(4), {0, 1, 2, 2}), ContractViolation);
}

TEST_CASE("embedding agrees with rotation-search oracle on small graphs") {
    // Exhaustive: all connected simple graphs with n <= 5, plus n == 6
    // graphs with m <= 10.
    for (int n = 1; n <= 6; ++n) {
        for (const MultiGraph& g : testsup::connected_graphs(n)) {
            if (n == 6 && g.num_edges() > 10) continue;
            bool mine = planar(g);
            bool oracle = testsup::planar_by_rotation_search(g);
            CAPTURE(n);
            CAPTURE(g.num_edges());
            CHECK(mine == oracle);
            if (mine) {
                auto emb = planar_embedding(g);
                CHECK(validate_embedding(g, *emb));
            }
        }
    }
}

TEST_CASE("embedding on small multigraphs matches oracle") {
    testsup::Rng rng(0xb00c);
    for (int it = 0; it < 60; ++it) {
        int n = 2 + rng.below(4);
        int m = 1 + rng.below(8);
        MultiGraph g(n);
        for (int i = 0; i < m; ++i) {
            int u = rng.below(n), v = rng.below(n);
            if (u == v) continue;
            g.add_edge(u, v);
        }
        if (g.num_edges() == 0) continue;
        bool mine = planar(g);
        bool oracle = testsup::planar_by_rotation_search(g);
        CHECK(mine == oracle);
        if (mine) CHECK(validate_embedding(g, *planar_embedding(g)));
    }
}

TEST_CASE("incremental edge insertion is consistent") {
    // Planarity is monotone under edge deletion; inserting edges of a planar
    // graph one by one must stay planar at every prefix.
    MultiGraph g = complete(4);
    MultiGraph partial(4);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        partial.add_edge(g.edge(e).u, g.edge(e).v);
        CHECK(planar(partial));
    }
    // and for a non-planar graph, once it flips it stays flipped
    MultiGraph k5 = complete(5);
    MultiGraph p5(5);
    bool flipped = false;
    for (EdgeId e = 0; e < k5.num_edges(); ++e) {
        p5.add_edge(k5.edge(e).u, k5.edge(e).v);
        bool pl = planar(p5);
        if (!pl) flipped = true;
        if (flipped) CHECK(!pl);
    }
    CHECK(flipped);
}

TEST_CASE("goldner-harary is maximal planar") {
    MultiGraph gh = testsup::goldner_harary();
    CHECK(gh.num_vertices() == 11);
    CHECK(gh.num_edges() == 27);  // 3n - 6
    auto emb = planar_embedding(gh);
    REQUIRE(emb.has_value());
    for (auto& w : faces(gh, *emb)) CHECK(w.size() == 3);
}
