#pragma once

#include <array>
#include <string>
#include <vector>

#include "berkdil/clusters.hpp"

namespace berkdil {

enum class VertexKind { distinguished, natural };

/**
 * A point on the skeleton: an internal vertex, or a position on a skeleton
 * edge (identified by its lower endpoint) at a given distance from the upper
 * endpoint.  A leaf reference is allowed but rejected by every metric
 * operation, since leaf rays have infinite length.
 */
struct TreePoint {
    int vertex = -1;
    int edge_child = -1;
    ValQ offset{0}; // from the upper (parent-side) endpoint
    int leaf = -1;

    static TreePoint at_vertex(int v);
    static TreePoint on_edge(int child, const ValQ& offset_from_upper);
    static TreePoint at_leaf(int l);
};

/**
 * Convex hull of a configuration clustered in pairs, as a finite
 * leaf-labeled metric tree.  Internal vertices are exactly the clusters of
 * cardinality >= 2, in cluster order; the edge toward the parent has length
 * equal to the cluster's relative depth.  Leaf rays (one per point) are
 * infinite and carry no metric; every query lives on the skeleton.
 * Immutable after construction; all queries are pure and safe to run
 * concurrently.
 */
struct MetricTree {
    unsigned long ell = 2;

    std::vector<std::vector<int>> members; // leaf ids below each vertex
    std::vector<VertexKind> kind;
    std::vector<int> parent; // -1 at the top vertex
    std::vector<std::vector<int>> children;
    std::vector<mpq_class> up_length; // edge toward the parent, > 0
    int root = -1;

    std::vector<std::string> leaf_labels;
    int infinity_leaf = -1;
    std::vector<int> leaf_attach; // skeleton vertex each leaf ray meets

    std::vector<std::array<int, 2>> axes; // leaf id pairs (a_i, b_i)

    int vertex_count() const { return static_cast<int>(members.size()); }
    int leaf_count() const { return static_cast<int>(leaf_labels.size()); }
    std::string dot() const;
};

/**
 * Build the hull of a paired set: one internal vertex per cluster, natural
 * when the cluster is a disjoint union of >= 2 even sub-clusters and
 * distinguished otherwise, plus one leaf ray per point and the axes of P.
 * NotClusteredInPairs unless the axes are pairwise disjoint.
 */
MetricTree hull_from_clusters(const ClusterData& cd, const Pairing& P);

/**
 * Invert the hull construction: root the tree at the infinity leaf and read
 * each vertex as the cluster of leaves below it, anchoring the top vertex at
 * depth d0.  Inverse of hull_from_clusters when d0 is the original maximal
 * depth.  NoInfinityLeaf when the tree has no leaf at infinity.
 */
ClusterData clusters_from_hull(const MetricTree& t, const ValQ& d0);

/** Path length between two skeleton points.  LeafDistanceInfinite on leaves. */
ValQ distance(const MetricTree& t, const TreePoint& x, const TreePoint& y);

/** Distance from a skeleton point to the axis path of pair i. */
ValQ distance_to_axis(const MetricTree& t, const TreePoint& x, int pair_index);

/**
 * Total length of the part of the path [x, y] lying within distance <= r of
 * some axis (closed tubular neighborhoods; piecewise-linear envelope in
 * exact arithmetic).
 */
ValQ mu(const MetricTree& t, const TreePoint& x, const TreePoint& y, const ValQ& r);

/**
 * Every pair of distinguished vertices not lying on a common axis is at
 * distance > 2r.  Equivalent to the depth criterion is_r_separated on the
 * underlying cluster data.
 */
bool separated_check_vertices(const MetricTree& t, const ValQ& r);

/** Round-trippable JSON encoding (attachments, kinds, edge lengths, axes). */
std::string tree_to_json(const MetricTree& t);
MetricTree tree_from_json(const std::string& text);

} // namespace berkdil
