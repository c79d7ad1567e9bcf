#pragma once

#include <optional>
#include <vector>

#include "bookem/multigraph.hpp"

namespace bookem {

/// Rotation system plus derived face structure for a plane multigraph.
///
/// Darts: edge e yields dart 2e (tail = e.u) and dart 2e+1 (tail = e.v).
/// rotation[v] lists the darts with tail v in clockwise order. Face walks
/// are the orbits of d -> successor of twin(d) in the rotation at head(d);
/// each dart lies on exactly one walk, so every edge borders two walk
/// positions. For disconnected graphs the orbits are per-component.
struct CombinatorialEmbedding {
    std::vector<std::vector<int>> rotation;
    std::vector<int> face_of;                // dart -> face id
    std::vector<std::vector<int>> face_darts;  // face -> darts in walk order
    int outer_face = 0;

    int num_vertices() const { return static_cast<int>(rotation.size()); }
    int num_darts() const { return static_cast<int>(face_of.size()); }
    int num_faces() const { return static_cast<int>(face_darts.size()); }

    static int twin(int dart) { return dart ^ 1; }
    static EdgeId dart_edge(int dart) { return dart >> 1; }

    int tail(const MultiGraph& g, int dart) const {
        const Edge& e = g.edge(dart >> 1);
        return (dart & 1) ? e.v : e.u;
    }
    int head(const MultiGraph& g, int dart) const {
        const Edge& e = g.edge(dart >> 1);
        return (dart & 1) ? e.u : e.v;
    }

    /// Rebuild face_of / face_darts from the rotation lists.
    void recompute_faces(const MultiGraph& g);

    /// Vertices on the boundary walk of face f, in walk order (may repeat
    /// vertices when the graph is not biconnected).
    std::vector<Vertex> face_vertices(const MultiGraph& g, int f) const;
};

/// Planarity test plus embedding construction (DMP face insertion per
/// biconnected component). Returns nullopt exactly on non-planar input.
std::optional<CombinatorialEmbedding> planar_embedding(const MultiGraph& g);

bool planar(const MultiGraph& g);

/// Face boundary walks as (vertex, edge) steps; throws on an inconsistent
/// rotation system.
std::vector<std::vector<std::pair<Vertex, EdgeId>>> faces(const MultiGraph& g,
                                                          const CombinatorialEmbedding& emb);

/// True iff g plus the cycle edges of h (always added as fresh parallel
/// edges) is planar. h must be a permutation of V(g) with |V| >= 3.
bool planar_with_cycle(const MultiGraph& g, const std::vector<Vertex>& h);

/// Structural sanity of an embedding against its graph: dart bookkeeping and
/// Euler's formula per connected component.
bool validate_embedding(const MultiGraph& g, const CombinatorialEmbedding& emb);

}  // namespace bookem
