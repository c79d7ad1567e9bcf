#include <doctest.h>

#include <map>
#include <set>

#include "bookem/planarity.hpp"
#include "bookem/spqr.hpp"
#include "support.hpp"

using namespace bookem;
using testsup::complete;
using testsup::cycle;
using testsup::theta;

namespace {

int count_kind(const SpqrTree& t, SpqrKind k) {
    int c = 0;
    for (const SpqrNode& n : t.nodes)
        if (n.kind == k) c++;
    return c;
}

}  // namespace

TEST_CASE("spqr of a triple bond") {
    MultiGraph g = theta(3);
    SpqrTree t = build_spqr(g, 0);
    validate_spqr(t, g);
    CHECK(t.node(t.root).kind == SpqrKind::Q);
    // root Q over a P node with two Q leaf children
    CHECK(count_kind(t, SpqrKind::P) == 1);
    CHECK(count_kind(t, SpqrKind::Q) == 3);
    const SpqrNode& root = t.node(t.root);
    REQUIRE(root.children.size() == 1);
    const SpqrNode& p = t.node(root.children[0]);
    CHECK(p.kind == SpqrKind::P);
    CHECK(p.children.size() == 2);
    for (int c : p.children) CHECK(t.node(c).kind == SpqrKind::Q);
}

TEST_CASE("spqr of a cycle") {
    MultiGraph g = cycle(5);
    SpqrTree t = build_spqr(g, 0);
    validate_spqr(t, g);
    CHECK(count_kind(t, SpqrKind::S) == 1);
    CHECK(count_kind(t, SpqrKind::Q) == 5);
    CHECK(count_kind(t, SpqrKind::P) == 0);
    CHECK(count_kind(t, SpqrKind::R) == 0);
    const SpqrNode& root = t.node(t.root);
    CHECK(root.kind == SpqrKind::Q);
    REQUIRE(root.children.size() == 1);
    const SpqrNode& s = t.node(root.children[0]);
    CHECK(s.kind == SpqrKind::S);
    CHECK(s.children.size() == 4);  // remaining skeleton edges are Q leaves
}

TEST_CASE("spqr of K4") {
    MultiGraph g = complete(4);
    SpqrTree t = build_spqr(g, 0);
    validate_spqr(t, g);
    CHECK(count_kind(t, SpqrKind::R) == 1);
    CHECK(count_kind(t, SpqrKind::Q) == 6);
}

TEST_CASE("spqr with one P, one S, one R") {
    // K4 with one edge replaced by two parallel paths of length 2, i.e. a
    // rigid part, a bond over the split pair, and series chains.
    MultiGraph g(6);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(0, 3);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    // replace edge {2,3} by two parallel length-2 paths through 4 and 5
    g.add_edge(2, 4);
    g.add_edge(4, 3);
    g.add_edge(2, 5);
    g.add_edge(5, 3);
    SpqrTree t = build_spqr(g, 0);
    validate_spqr(t, g);
    CHECK(count_kind(t, SpqrKind::R) == 1);
    CHECK(count_kind(t, SpqrKind::P) == 1);
    CHECK(count_kind(t, SpqrKind::S) == 2);
    CHECK(count_kind(t, SpqrKind::Q) == 9);
}

TEST_CASE("pertinent graphs") {
    MultiGraph g = theta(3);
    SpqrTree t = build_spqr(g, 0);
    // a Q leaf's pertinent graph is a single real edge
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        if (t.nodes[i].kind == SpqrKind::Q && static_cast<int>(i) != t.root) {
            MultiGraph pe = pertinent_graph(t, g, static_cast<int>(i));
            CHECK(pe.num_edges() == 1);
        }
    }
    // the P child of the root expands to the graph minus the reference edge
    const SpqrNode& root = t.node(t.root);
    MultiGraph pe = pertinent_graph(t, g, root.children[0]);
    CHECK(pe.num_edges() == 2);
    CHECK(pe.num_vertices() == 2);
}

TEST_CASE("rerooting yields an isomorphic unrooted tree") {
    testsup::Rng rng(0x5bb1);
    int tested = 0;
    for (int it = 0; it < 300 && tested < 50; ++it) {
        // random cycle plus planarity-preserving chords: biconnected planar
        int n = 4 + rng.below(9);
        MultiGraph g = cycle(n);
        for (int i = 0; i < 2 * n; ++i) {
            int u = rng.below(n), v = rng.below(n);
            if (u == v) continue;
            MultiGraph trial = g;
            trial.add_edge(u, v);
            if (planar(trial)) g = trial;
        }
        tested++;
        SpqrTree t0 = build_spqr(g, 0);
        validate_spqr(t0, g);
        std::string canon = unrooted_canonical_form(t0);
        for (int trial = 0; trial < 3; ++trial) {
            EdgeId ref = rng.below(g.num_edges());
            SpqrTree t = build_spqr(g, ref);
            validate_spqr(t, g);
            CHECK(unrooted_canonical_form(t) == canon);
        }
    }
    CHECK(tested >= 50);
}

TEST_CASE("spqr rejects bad input") {
    MultiGraph path(3);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    CHECK_THROWS_AS(build_spqr(path, 0), ContractViolation);

    MultiGraph single(2);
    single.add_edge(0, 1);
    CHECK_THROWS_AS(build_spqr(single, 0), ContractViolation);
}
