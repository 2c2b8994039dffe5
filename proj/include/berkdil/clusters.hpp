#pragma once

#include <array>
#include <string>
#include <vector>

#include "berkdil/projline.hpp"

namespace berkdil {

/** Labeled point configuration on the projective line over one Q_ell. */
struct PointSet {
    unsigned long ell = 2;
    std::vector<std::string> labels;
    std::vector<ProjPoint> pts;
    int infinity_index = -1;

    // validates distinct nonempty labels, pairwise distinct points
    // (PrecisionExhausted when a pair cannot be told apart), <= 1 infinity
    static PointSet make(unsigned long ell, std::vector<std::string> labels,
                         std::vector<ProjPoint> pts);

    int size() const { return static_cast<int>(labels.size()); }
    int find_label(const std::string& l) const; // -1 when absent
    bool has_infinity() const { return infinity_index >= 0; }
};

struct Cluster {
    std::vector<int> members; // ascending label indices, size >= 2, finite only
    ValQ depth;               // minimum pairwise valuation
    int parent = -1;          // index into ClusterData::clusters, -1 for the root
    std::vector<int> children;
};

/**
 * The laminar family of clusters of cardinality >= 2 with their depths.
 * Purely combinatorial + metric: point values are not retained, so the same
 * type also carries predicted data for sets whose values are unknown.
 * Clusters are sorted by (size, members) ascending; the root is last.
 */
struct ClusterData {
    unsigned long ell = 2;
    std::vector<std::string> labels;
    int infinity_index = -1;
    std::vector<Cluster> clusters;
    int root = -1; // -1 when fewer than two finite points

    int n_finite() const;
    bool even(int c) const { return clusters[c].members.size() % 2 == 0; }
    // disjoint union of >= 2 even-cardinality sub-clusters
    bool uebereven(int c) const;
    ValQ rel_depth(int c) const; // depth minus parent depth; root has none
    bool contains(int c, int label_idx) const;
    // smallest cluster containing the label; the root for infinity
    int attach(int label_idx) const;
    // sorted member-label sets of all clusters, sorted (combinatorial shape)
    std::vector<std::vector<std::string>> member_label_sets() const;
};

ClusterData compute_clusters(const PointSet& ps);

/** Threshold-sweep core over an explicit valuation matrix (shared with the
 *  numeric oracle, which accumulates raw fractions).  Off-diagonal +inf
 *  entries are rejected (duplicate points). */
ClusterData clusters_from_valuations(unsigned long ell, std::vector<std::string> labels,
                                     int infinity_index,
                                     const std::vector<std::vector<ValQ>>& vmat);

/** Partition of the labels into ordered 2-blocks (a_i, b_i). */
struct Pairing {
    std::vector<std::array<int, 2>> pairs;
    int pair_of(int label_idx) const; // -1 when absent
    int pair_containing_infinity(int infinity_index) const;
};

/**
 * The unique candidate pairing: classes of "lies in exactly the same
 * even-cardinality clusters" (infinity lies in none), validated to consist of
 * 2-blocks whose axes are pairwise disjoint.  NotClusteredInPairs otherwise.
 */
Pairing pairing_from_clusters(const ClusterData& cd);

/** Axis paths on the cluster forest are pairwise vertex-disjoint. */
bool clustered_in_pairs(const ClusterData& cd, const Pairing& P);

/**
 * The axes' closed r-neighborhoods are pairwise disjoint.  Stated on cluster
 * depths: every two clusters that are not unions of >= 2 even sub-clusters
 * and do not lie on a common axis must be more than 2r apart through their
 * meet.  Reduces to clustered_in_pairs at r = 0.
 */
bool is_r_separated(const ClusterData& cd, const Pairing& P, const ValQ& r);

struct GenusResult {
    mpq_class value;
    bool integral;
};
/** (p - 1)(n - 2)/2 for a degree-p cover branched at n points. */
GenusResult genus_of_cover(unsigned long p, unsigned long npoints);

struct TransportResult {
    PointSet image;
    ClusterData transported; // recomputed from the image (authoritative)
    bool prediction_checked = false;
    bool prediction_matches = true;
};

/**
 * Transform the set and recompute its cluster data.  When every point and
 * every image point stays finite and nonzero, the combinatorial image is also
 * predicted through the affine/reciprocal decomposition (max-valuation
 * cluster rule) and checked against the recomputation.
 */
TransportResult mobius_transport(const PointSet& ps, const Mobius& m);

} // namespace berkdil
