#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bookem/oracle.hpp"
#include "bookem/planarity.hpp"
#include "support.hpp"

using namespace bookem;
using testsup::complete;
using testsup::cycle;

TEST_CASE("pages_given_order basics") {
    MultiGraph tri = cycle(3);
    auto p = pages_given_order(tri, {0, 1, 2}, 2);
    REQUIRE(p.has_value());
    CHECK(pages_given_order(tri, {0, 1, 2}, 1).has_value());

    MultiGraph c4 = cycle(4);
    auto q = pages_given_order(c4, {0, 2, 1, 3}, 2);
    REQUIRE(q.has_value());
    // exactly one conflicting pair under this order, split across pages
    std::vector<int> rank(4);
    std::vector<Vertex> order = {0, 2, 1, 3};
    for (int i = 0; i < 4; ++i) rank[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
    int conflicts = 0;
    for (EdgeId a = 0; a < 4; ++a)
        for (EdgeId b = a + 1; b < 4; ++b)
            if (edges_conflict(c4, a, b, rank)) {
                conflicts++;
                CHECK((*q)[static_cast<size_t>(a)] != (*q)[static_cast<size_t>(b)]);
            }
    CHECK(conflicts == 1);

    // K4 on one page is infeasible for every order
    MultiGraph k4 = complete(4);
    std::vector<Vertex> perm(4);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        CHECK(!pages_given_order(k4, perm, 1).has_value());
    } while (std::next_permutation(perm.begin(), perm.end()));

    CHECK_THROWS_AS(pages_given_order(tri, {0, 1, 1}, 2), ContractViolation);
}

TEST_CASE("pages_given_order matches exhaustive assignment search at 2 pages") {
    // oracle-on-oracle: the bipartite test equals trying all 2^m assignments
    testsup::Rng rng(0x5eed);
    for (int it = 0; it < 40; ++it) {
        int n = 3 + rng.below(4);
        int m = 1 + rng.below(9);
        MultiGraph g(n);
        for (int i = 0; i < m; ++i) {
            int u = rng.below(n), v = rng.below(n);
            if (u != v) g.add_edge(u, v);
        }
        if (g.num_edges() == 0 || g.num_edges() > 10) continue;
        std::vector<Vertex> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (int shuffle = 0; shuffle < 3; ++shuffle) {
            std::swap(order[static_cast<size_t>(rng.below(n))],
                      order[static_cast<size_t>(rng.below(n))]);
            std::vector<int> rk(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) rk[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
            bool brute = false;
            for (uint32_t mask = 0; mask < (1u << g.num_edges()) && !brute; ++mask) {
                bool ok = true;
                for (EdgeId a = 0; a < g.num_edges() && ok; ++a)
                    for (EdgeId b = a + 1; b < g.num_edges() && ok; ++b)
                        if (((mask >> a) & 1) == ((mask >> b) & 1) && edges_conflict(g, a, b, rk))
                            ok = false;
                brute = ok;
            }
            CHECK(pages_given_order(g, order, 2).has_value() == brute);
        }
    }
}

TEST_CASE("brute_force_subham") {
    auto k4 = brute_force_subham(complete(4));
    CHECK(k4.yes);
    HamiltonianWitness w{k4.order};
    CHECK(verify_witness(complete(4), w));

    CHECK(!brute_force_subham(complete(5)).yes);
    CHECK(!brute_force_subham(complete(6)).yes);
    CHECK(brute_force_subham(testsup::theta(3)).yes);
    CHECK_THROWS_AS(brute_force_subham(complete(12)), ContractViolation);
}

TEST_CASE("every yes comes with a verifying witness") {
    testsup::Rng rng(0x77);
    for (int it = 0; it < 50; ++it) {
        int n = 4 + rng.below(4);
        MultiGraph g(n);
        int m = 3 + rng.below(10);
        for (int i = 0; i < m; ++i) {
            int u = rng.below(n), v = rng.below(n);
            if (u != v) g.add_edge(u, v);
        }
        auto res = brute_force_subham(g);
        if (res.yes) CHECK(verify_witness(g, {res.order}));
    }
}

TEST_CASE("goldner-harary is not subhamiltonian") {
    MultiGraph gh = testsup::goldner_harary();
    REQUIRE(planar(gh));
    CHECK(gh.num_edges() == 27);
    CHECK(!brute_force_subham(gh).yes);
}

TEST_CASE("book thickness oracle") {
    CHECK(brute_force_book_thickness(complete(4), 2));
    CHECK(!brute_force_book_thickness(complete(6), 2));
    CHECK(brute_force_book_thickness(cycle(5), 1));
    CHECK(brute_force_book_thickness(complete(6), 3));
    CHECK(!brute_force_book_thickness(complete(7), 3));  // K7 needs 4 pages
}

TEST_CASE("verify_embedding") {
    MultiGraph k4 = complete(4);
    // complete(4) edge order: 01,02,03,12,13,23; chords 02 and 13 interleave
    BookEmbedding good{{0, 1, 2, 3}, {1, 1, 1, 1, 2, 1}};
    CHECK(verify_embedding(k4, good, 2));
    BookEmbedding bad = good;
    bad.pages[4] = 1;
    CHECK(!verify_embedding(k4, bad, 2));

    MultiGraph empty(0);
    CHECK(verify_embedding(empty, BookEmbedding{}, 2));
}

TEST_CASE("verify_witness") {
    MultiGraph c5 = cycle(5);
    CHECK(verify_witness(c5, {{0, 1, 2, 3, 4}}));
    CHECK(verify_witness(complete(4), {{0, 1, 2, 3}}));
    CHECK(!verify_witness(c5, {{0, 1, 2, 3, 3}}));
    CHECK(!verify_witness(complete(5), {{0, 1, 2, 3, 4}}));
}

TEST_CASE("subgraph monotonicity on random chains") {
    // adding an edge never flips no -> yes
    testsup::Rng rng(0xcafe);
    for (int chain = 0; chain < 10; ++chain) {
        int n = 5 + rng.below(3);
        MultiGraph g(n);
        bool was_no = false;
        for (int step = 0; step < 12; ++step) {
            int u = rng.below(n), v = rng.below(n);
            if (u == v) continue;
            g.add_edge(u, v);
            bool yes = brute_force_subham(g).yes;
            if (was_no) CHECK(!yes);
            if (!yes) was_no = true;
        }
    }
}
