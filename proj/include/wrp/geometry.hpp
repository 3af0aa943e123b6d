#pragma once

#include "wrp/common.hpp"
#include "wrp/pnorm.hpp"

#include <vector>

namespace wrp {

// Convex polytope given by its extreme points.
struct Polytope {
    int dim = 2;
    std::vector<Vec> vertices;
};

// Canonicalizes a point set: deduplicates (1e-9) and drops points that are
// convex combinations of the others, so `vertices` is exactly Ext(P).
Polytope make_polytope(int dim, std::vector<Vec> pts);

bool contains(const Polytope& P, const Vec& x, double tol = Tolerances::membership);

// Dimension of the affine hull (0 for a point, d for full-dimensional).
int affine_dim(const Polytope& P, double tol = Tolerances::vertex_match);

Vec centroid(const Polytope& P);

struct Region {
    Polytope polytope;
    PNorm p = PNorm::two();
    double weight = 1.0;
};

struct Subdivision {
    int dim = 2;
    std::vector<Region> regions;
    Vec box_lo, box_hi;  // bounding box over all region vertices
    int size() const { return static_cast<int>(regions.size()); }
};

// Computes the bounding box; regions keep their given order.
Subdivision make_subdivision(int dim, std::vector<Region> regions);

struct GraphEdge {
    int i, j;       // i < j
    Polytope face;  // F_ij with Ext(F_ij) = Ext(P_i) cap Ext(P_j)
};

struct AdjacencyGraph {
    int m = 0;
    std::vector<GraphEdge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;  // per region: (neighbor, edge id)
    // index into edges for {i,j}, -1 if absent
    int edge_index(int i, int j) const;
    bool has_edge(int i, int j) const { return edge_index(i, j) >= 0; }
};

// Edge {i,j} iff the regions share at least one extreme point; facet_only
// additionally requires the shared face to have affine dimension d-1.
AdjacencyGraph adjacency_graph(const Subdivision& sub, bool facet_only = false);

// Voronoi cells of the seeds clipped to the axis-aligned box [lo, hi] (2-D).
// Cells are built by successive half-plane clipping against each other seed.
Subdivision voronoi_subdivision(const std::vector<Vec>& seeds, const Vec& lo,
                                const Vec& hi);

// Lowest region index containing x (membership tolerance 1e-8).
int locate_point(const Subdivision& sub, const Vec& x);

struct SegmentPath {
    std::vector<int> regions;   // ordered, simple
    std::vector<Vec> crossings; // crossing point between consecutive regions
};

// Ordered region sequence traversed by the segment [a, b] with the crossing
// points on shared faces.  Crossings through faces of dimension < d-1 are
// resolved by deterministically perturbing b by 1e-7 and retrying.
SegmentPath segment_induced_path(const Subdivision& sub, const Vec& a, const Vec& b);

}  // namespace wrp
