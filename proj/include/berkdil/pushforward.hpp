#pragma once

#include "berkdil/berktree.hpp"

namespace berkdil {

/**
 * Parameters of the degree-p quotient map: the prime degree p, the valuation
 * vp = v(p) of p in the ground field (zero unless p is the residue
 * characteristic), and the caller's assertion that the configuration is
 * optimal.  Everything downstream is driven by the dilation radius
 * vp / (p - 1).
 */
struct PushforwardParams {
    unsigned long p = 2;
    ValQ vp{0};
    bool optimal = false;

    ValQ radius() const;        // vp / (p - 1)
    ValQ branch_radius() const; // p * vp / (p - 1)
};

/**
 * Metric effect of the quotient map on the hull: the part of the skeleton
 * within the closed radius()-neighborhood of some axis is stretched by a
 * factor of p, the rest is carried isometrically.  Each edge's new length is
 * therefore len + (p - 1) * mu(edge); the combinatorial tree, vertex kinds
 * and axes are unchanged, and leaf labels x become pi(x).
 *
 * NotSeparated unless every leaf lies on exactly one axis and
 * separated_check_vertices(t, radius()) holds.  OptimalityNotAsserted unless
 * params.optimal is set or the tree has at most four leaves (a four-point
 * set clustered in pairs is always optimal, and a two-point skeleton is
 * empty).
 */
MetricTree pushforward_hull(const MetricTree& t, const PushforwardParams& params);

/**
 * Image of a skeleton point: the same vertex, or the point of the same edge
 * whose offset grows by the stretched length above it.  Distances then obey
 *   distance(push(x), push(y)) = distance(x, y) + (p - 1) * mu(x, y, radius()).
 */
TreePoint pushforward_point(const MetricTree& t, const TreePoint& x,
                            const PushforwardParams& params);

/**
 * Predicted cluster data of the branch points of the degree-p cover defined
 * by the paired configuration: compute_clusters(S), hull_from_clusters,
 * pushforward_hull, then clusters_from_hull anchored at the depth of the
 * maximal cluster of S.  Each image cluster is checked against the
 * closed-form special cases (odd cardinality: relative depth times p; even
 * cardinality away from residue characteristic p: unchanged; even with
 * neither the cluster nor its parent a union of >= 2 even sub-clusters:
 * plus 2*vp); any mismatch is an internal error.  NoInfinityInS unless S
 * contains the point at infinity — apply a Mobius normalization first.
 */
ClusterData predict_branch_clusters(const PointSet& S, const Pairing& P,
                                    const PushforwardParams& params);

/**
 * Separation guarantee satisfied by every branch locus: distinguished
 * vertices off a common axis are more than 2 * branch_radius() apart.
 */
bool check_branch_separation(const MetricTree& tB, const PushforwardParams& params);

} // namespace berkdil
