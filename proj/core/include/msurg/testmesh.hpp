// Deterministic procedural meshes with known analytic area and known
// plane-crossing counts, used by tests, benchmarks and the CLI generator.
#pragma once

#include "msurg/mesh.hpp"
#include "msurg/predicates.hpp"

namespace msurg {

// Unit square in z = 0 with an n x n cell grid: (n+1)^2 vertices, 2n^2
// faces, area exactly 1. Carries uvs and a 2-bone weight gradient along x.
SkinnedMesh make_plate(int n);

// Open tube of radius 0.5 around the z axis, z in [0,1]: n segments around,
// m bands tall, 2nm faces, lateral area n*sin(pi/n). 2-bone weight gradient
// along z, no uvs.
SkinnedMesh make_cylinder(int n, int m);

// Horizontal plane through cylinder(n, m) placed between two rings, so it
// crosses exactly 2n edges (one vertical and one diagonal per segment).
Plane cylinder_midplane(int m);

// Closed lat-long sphere of radius 1: n segments around and n polar bands
// (n clamped to >= 3), 2n(n-1) faces, Euler characteristic 2. 2-bone weight
// gradient along z, no uvs.
SkinnedMesh make_sphere(int n);

}  // namespace msurg
