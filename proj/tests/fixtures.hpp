#pragma once

#include <random>
#include <vector>

#include "veerkit/triangulation.hpp"

namespace fixtures {

// Standard two-tetrahedron figure-eight knot complement.
veerkit::IdealTriangulation figure_eight();

// Brute-force orbit count of tetrahedron edge slots under face identifications,
// done by repeated relaxation rather than union-find.
int oracle_edge_orbit_count(const veerkit::IdealTriangulation& tri);
int oracle_vertex_orbit_count(const veerkit::IdealTriangulation& tri);

// Random relabelling of tets and local vertices.
veerkit::IdealTriangulation scramble(const veerkit::IdealTriangulation& tri, std::mt19937_64& rng);

struct Relabelling {
    std::vector<int> tet_map;
    std::vector<veerkit::Perm4> vertex_maps;
    veerkit::IdealTriangulation tri;
};
Relabelling scramble_with_maps(const veerkit::IdealTriangulation& tri, std::mt19937_64& rng);

// Uniformly random face pairing on n tets; odd gluing maps when `oriented`.
veerkit::IdealTriangulation random_gluing(std::mt19937_64& rng, int n, bool oriented);

// Random walk of 2-3 and 3-2 moves starting at the figure-eight.
veerkit::IdealTriangulation random_pachner_walk(std::mt19937_64& rng, int max_tets);

}  // namespace fixtures
