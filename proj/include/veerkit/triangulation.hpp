#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "veerkit/error.hpp"
#include "veerkit/perm.hpp"

namespace veerkit {

struct FaceGluing {
    int tet = -1;
    int face = -1;
    Perm4 perm;  // local vertices of this tet -> local vertices of `tet`
};

using GluingData = std::vector<std::array<FaceGluing, 4>>;

// One slot of an edge class: tetrahedron plus a vertex ordering whose first
// two entries are the edge endpoints.  Consecutive embeddings are glued
// across the face opposite order[2].
struct EdgeEmbedding {
    int tet;
    Perm4 order;
};

class IdealTriangulation {
public:
    static IdealTriangulation from_gluing_data(const GluingData& raw);

    int tet_count() const { return int(glue_.size()); }
    int face_count() const { return 2 * tet_count(); }
    int edge_count() const { return edge_count_; }
    int vertex_count() const { return vertex_count_; }

    const FaceGluing& gluing(int tet, int face) const { return glue_[tet][face]; }
    const GluingData& gluings() const { return glue_; }

    int edge_class(int tet, int edge) const { return edge_class_[tet][edge]; }
    int vertex_class(int tet, int vertex) const { return vertex_class_[tet][vertex]; }

    bool orientable() const { return orientable_; }
    // +1/-1 relative to tetrahedron 0 of each component; 0 if non-orientable.
    int orientation(int tet) const { return orientation_[tet]; }
    // All face pairings odd, i.e. every tetrahedron labelled positively.
    bool is_oriented() const;

    std::vector<int> edge_valences() const;
    // Cyclically ordered slots around an edge class.
    std::vector<EdgeEmbedding> edge_embeddings(int edge_class) const;

    // Euler characteristic of the link of each vertex class.
    std::vector<int> vertex_link_euler() const;

private:
    GluingData glue_;
    std::vector<std::array<int, 6>> edge_class_;
    std::vector<std::array<int, 4>> vertex_class_;
    std::vector<int> orientation_;
    std::vector<std::array<int, 2>> edge_rep_;  // (tet, edge) of first slot
    int edge_count_ = 0;
    int vertex_count_ = 0;
    bool orientable_ = false;

    void derive();
};

// Relabel: tet t becomes tet_map[t], its local vertex v becomes vertex_maps[t][v].
IdealTriangulation relabel(const IdealTriangulation& tri, const std::vector<int>& tet_map,
                           const std::vector<Perm4>& vertex_maps);

// Copy whose tetrahedra are all positively labelled.  Throws NotOrientable.
IdealTriangulation oriented_copy(const IdealTriangulation& tri);

enum class MoveKind { TwoThree, ThreeTwo };

// Bipyramid bookkeeping.  Points 0,1,2 span the equatorial triangle, 3 and 4
// are the apexes.  Each affected tetrahedron records local vertex -> point.
//
// 2-3 on face (t,f) glued to (t',f'): point 3 is vertex f of t, point 4 is
// vertex f' of t'.  The face vertices of t take points 0,1,2 in increasing
// vertex order, with 0 and 1 swapped if needed so that t's map is an even
// permutation.  New tet k (numbered old_count-2+k) has local vertices
// (k+1, k+2, 4, 3) mod 3 on the equator.
//
// 3-2 on an edge: the first embedding (t0, order) sends order[0] -> 3,
// order[1] -> 4, and order[2], order[3] to points 1, 2 (swapped to keep the
// map even).  The new tets are (0,1,2,3) and (1,0,2,4).
struct PachnerMove {
    MoveKind kind;
    int target;  // 4*tet+face for 2-3, edge class for 3-2 (in the source triangulation)
    std::vector<int> old_tets;
    std::vector<std::array<int, 4>> old_points;
    std::vector<int> new_tets;
    std::vector<std::array<int, 4>> new_points;
    std::vector<int> correspondence;  // source tet -> result tet, -1 if removed
};

struct PachnerResult {
    IdealTriangulation tri;
    PachnerMove move;
};

PachnerResult pachner_23(const IdealTriangulation& tri, int tet, int face);
PachnerResult pachner_32(const IdealTriangulation& tri, int edge_class);

// Dual edge created by a 2-3 move, as an edge class of the result.
int created_edge(const PachnerResult& r);

std::string isomorphism_signature(const IdealTriangulation& tri);
IdealTriangulation from_signature(const std::string& sig);

}  // namespace veerkit
