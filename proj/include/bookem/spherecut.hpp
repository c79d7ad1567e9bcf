#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bookem/multigraph.hpp"
#include "bookem/planarity.hpp"

namespace bookem {

/// Noose segment between two boundary vertices through one face of the
/// fixed skeleton embedding. Identical (pair, face) values denote the
/// identical curve, so subcurves are interned by id.
struct Subcurve {
    Vertex u = -1, v = -1;  // u < v
    int face = -1;
};

class SubcurveTable {
public:
    int intern(Vertex u, Vertex v, int face);
    const Subcurve& at(int id) const { return curves_[static_cast<size_t>(id)]; }
    int size() const { return static_cast<int>(curves_.size()); }

private:
    std::vector<Subcurve> curves_;
    std::map<std::tuple<Vertex, Vertex, int>, int> index_;
};

/// Closed curve assembled from subcurves: verts[i] -- curves[i] --
/// verts[i+1 mod k]. Canonical: verts[0] is the smallest boundary vertex and
/// the walk direction is deterministic.
struct WeakNoose {
    std::vector<int> curves;
    std::vector<Vertex> verts;

    int size() const { return static_cast<int>(curves.size()); }
    std::vector<Vertex> boundary_sorted() const;
    bool operator==(const WeakNoose& o) const { return curves == o.curves && verts == o.verts; }
};

/// Canonicalize a subcurve id set into a weak noose; nullopt when the set is
/// not a single closed curve with distinct vertices and distinct faces.
std::optional<WeakNoose> make_weak_noose(const SubcurveTable& table, std::vector<int> curve_ids);

/// Symmetric difference of two weak nooses; nullopt when the result is not a
/// single closed curve.
std::optional<WeakNoose> xor_nooses(const SubcurveTable& table, const WeakNoose& a,
                                    const WeakNoose& b);

/// Skeleton plus every subcurve drawn as a chord of its face; supports exact
/// combinatorial inside/outside queries. The outside reference point is the
/// pocket of the decomposition's root edge.
struct Overlay {
    MultiGraph graph;  // skeleton edges 0..m-1, subcurve s at edge m+s
    CombinatorialEmbedding emb;
    int skeleton_edges = 0;
    std::vector<int> outside_seeds;  // overlay faces flanking the root edge

    /// Per overlay-face flag: inside the noose region. Throws when the
    /// curve set does not separate the sphere cleanly.
    std::vector<char> inside_faces(const WeakNoose& noose) const;
    /// Skeleton edges strictly inside.
    std::vector<EdgeId> enclosed_edges(const WeakNoose& noose) const;
};

Overlay build_overlay(const MultiGraph& sk, const CombinatorialEmbedding& emb,
                      const SubcurveTable& table, EdgeId ref);

/// Geometry of a single XOR step, shared by every type pair crossing it.
struct NoosePairContext {
    WeakNoose o1, o2, result;
    std::vector<int> shared_curves;      // cancelled subcurves, sorted
    std::vector<Vertex> vanishing;       // boundary vertices lost by the xor
    bool region_ok = false;              // conditions (1) and (2)
};

NoosePairContext make_pair_context(const SubcurveTable& table, const Overlay& overlay,
                                   const WeakNoose& o1, const WeakNoose& o2);

/// One part of the recursive edge bipartition. parts[0] is the root part
/// (every skeleton edge except the root edge); leaves hold single edges.
struct ScdPart {
    std::vector<EdgeId> edges;  // sorted skeleton edge ids
    WeakNoose noose;
    int left = -1, right = -1;
    int parent = -1;
};

struct SphereCutDecomposition {
    CombinatorialEmbedding emb;
    SubcurveTable table;
    Overlay overlay;
    std::vector<ScdPart> parts;
    EdgeId ref = -1;
    int width = 0;

    const ScdPart& part(int id) const { return parts[static_cast<size_t>(id)]; }
};

/// Heuristic sphere-cut decomposition of a biconnected plane multigraph,
/// rooted at the leaf of edge ref. Cycles get the caterpillar shape. Width
/// is not guaranteed optimal.
SphereCutDecomposition build_spherecut(const MultiGraph& sk, const CombinatorialEmbedding& emb,
                                       EdgeId ref);

/// One XOR step of a plan: apply lhs ^ rhs where operands are either
/// previous step results, child arc nooses, or plan triangles.
struct XorStep {
    enum Operand { ChildLeft, ChildRight, Triangle1, Triangle2, Step0, Step1 };
    Operand lhs, rhs;
    WeakNoose result;
};

struct XorPlan {
    std::vector<WeakNoose> triangles;  // at most two, edge-less
    std::vector<XorStep> steps;        // at most three; last yields the parent noose
};

/// Plan turning the child nooses of an inner node into the parent noose with
/// at most 3 xor operations and at most 2 edge-less triangles. part ids:
/// parent and its two children.
XorPlan xor_plan(const SphereCutDecomposition& scd, int parent_part, int left_part,
                 int right_part);

/// Structural validation of a decomposition (noose invariants, laminarity on
/// root paths, xor_plan replay at every inner node). Throws on failure.
void validate_spherecut(const MultiGraph& sk, const SphereCutDecomposition& scd);

}  // namespace bookem
