#pragma once

#include <string>
#include <vector>

#include "berkdil/clusters.hpp"

namespace berkdil {

/** Vertex tree of a configuration plus the point -> vertex reduction map. */
struct PositionTree {
    std::vector<std::string> labels;          // point labels, aligned with r_map
    std::vector<int> parent;                  // per vertex id; the top vertex has -1
    int root = -1;
    std::vector<int> r_map;                   // label index -> vertex id (total)
    std::vector<std::vector<int>> r_preimage; // vertex id -> ascending label indices

    int vertex_count() const { return static_cast<int>(parent.size()); }
    std::string dot() const; // vertices as circles, point attachments as leaves
};

/**
 * One vertex per cluster of >= 2 finite points, edges by nesting.  Each point
 * maps to the vertex of the smallest cluster that does not split it into a
 * proper sub-cluster; infinity maps to the top vertex.
 */
PositionTree position_tree(const ClusterData& cd);
PositionTree position_tree(const PointSet& A); // |A| >= 3 (TooFewPoints)

/**
 * Commuting-isomorphism test between the trees of A and A2 through the label
 * bijection phi (phi[i] = label index in A2).  When both sets contain infinity
 * and phi matches the two, this reduces to phi carrying the clusters of A
 * exactly onto those of A2; otherwise both sets are first normalized by an
 * explicit fractional linear map sending a designated point of A (default:
 * the lexicographically last label; always its phi-image in A2) to infinity.
 */
bool same_position(const PointSet& A, const std::vector<int>& phi, const PointSet& A2,
                   int designated = -1);

} // namespace berkdil
