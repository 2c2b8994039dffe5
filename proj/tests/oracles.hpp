#pragma once

// Independent slow-path oracles and deterministic RNG helpers for the test
// suite.  Everything here is implemented from first principles (definitions,
// brute-force enumeration) so it can cross-check the library's fast paths.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "berkdil/clusters.hpp"
#include "berkdil/projline.hpp"
#include "berkdil/valuation.hpp"

#include "rng.hpp"

namespace testing {

// ------------------------------------------------------------------ clusters

// Definition-level test: a nonempty subset of the finite points is a cluster
// iff it equals the intersection of the point set with some closed disc, i.e.
// iff it is exactly { z : v(z - z0) >= m } for the minimum inner valuation m.
inline bool is_cluster_brute(const std::vector<berkdil::ExactQ>& pts, unsigned long ell,
                             const std::vector<int>& subset) {
    if (subset.empty()) return false;
    if (subset.size() == 1) return true;
    berkdil::ValQ m = berkdil::ValQ::infinity();
    for (size_t i = 0; i < subset.size(); ++i)
        for (size_t j = i + 1; j < subset.size(); ++j)
            m = berkdil::min(m, (pts[subset[i]] - pts[subset[j]]).val(ell));
    for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
        if (std::find(subset.begin(), subset.end(), k) != subset.end()) continue;
        bool inside = true;
        for (int s : subset)
            if ((pts[k] - pts[s]).val(ell) < m) { inside = false; break; }
        if (inside) return false; // disc catches a point outside the subset
    }
    return true;
}

struct BruteCluster {
    std::set<int> members;
    berkdil::ValQ depth{0};
    bool operator<(const BruteCluster& o) const { return members < o.members; }
};

// all clusters of cardinality >= 2 by full subset enumeration (n <= ~12)
inline std::vector<BruteCluster> clusters_brute(const std::vector<berkdil::ExactQ>& pts,
                                                unsigned long ell) {
    int n = static_cast<int>(pts.size());
    std::vector<BruteCluster> out;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        if (subset.size() < 2) continue;
        if (!is_cluster_brute(pts, ell, subset)) continue;
        BruteCluster c;
        c.members = std::set<int>(subset.begin(), subset.end());
        berkdil::ValQ m = berkdil::ValQ::infinity();
        for (size_t i = 0; i < subset.size(); ++i)
            for (size_t j = i + 1; j < subset.size(); ++j)
                m = berkdil::min(m, (pts[subset[i]] - pts[subset[j]]).val(ell));
        c.depth = m;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// pairing classes straight from the definition: points equivalent iff they lie
// in exactly the same even-cardinality clusters (infinity lies in none)
inline std::vector<std::set<int>> pairing_classes_brute(
    const std::vector<berkdil::ExactQ>& finite_pts, unsigned long ell, bool has_infinity) {
    auto clusters = clusters_brute(finite_pts, ell);
    int n = static_cast<int>(finite_pts.size());
    std::map<std::set<int>, std::set<int>> by_signature; // signature -> members
    for (int i = 0; i < n; ++i) {
        std::set<int> sig;
        for (size_t c = 0; c < clusters.size(); ++c)
            if (clusters[c].members.size() % 2 == 0 && clusters[c].members.count(i))
                sig.insert(static_cast<int>(c));
        by_signature[sig].insert(i);
    }
    if (has_infinity) by_signature[{}].insert(n); // infinity index = n
    std::vector<std::set<int>> out;
    for (auto& [sig, mem] : by_signature) out.push_back(mem);
    return out;
}

} // namespace testing
