#include "berkdil/position.hpp"

#include <algorithm>
#include <set>

#include "berkdil/errors.hpp"

namespace berkdil {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

PointSet apply_map(const PointSet& X, const Mobius& m) {
    std::vector<ProjPoint> img;
    img.reserve(X.pts.size());
    for (const ProjPoint& z : X.pts) img.push_back(m.apply(z));
    return PointSet::make(X.ell, X.labels, std::move(img));
}

PointSet move_to_infinity(const PointSet& X, int idx) {
    if (X.pts[idx].is_infinity()) return X;
    // z -> 1 / (z - z0)
    Mobius sigma{Scalar(X.ell, ExactQ(0)), Scalar(X.ell, ExactQ(1)),
                 Scalar(X.ell, ExactQ(1)), -X.pts[idx].value()};
    return apply_map(X, sigma);
}

// clusters of X carried through phi coincide with the clusters of Y
bool cluster_bijection(const PointSet& X, const std::vector<int>& phi, const PointSet& Y) {
    const ClusterData cx = compute_clusters(X);
    const ClusterData cy = compute_clusters(Y);
    std::set<std::vector<int>> image, target;
    for (const Cluster& c : cx.clusters) {
        std::vector<int> s;
        s.reserve(c.members.size());
        for (int i : c.members) s.push_back(phi[i]);
        std::sort(s.begin(), s.end());
        image.insert(std::move(s));
    }
    for (const Cluster& c : cy.clusters) target.insert(c.members);
    return image == target;
}

} // namespace

PositionTree position_tree(const ClusterData& cd) {
    if (cd.labels.size() < 3)
        throw TooFewPoints("a position needs at least three points");
    if (cd.root < 0) throw TooFewPoints("a position needs at least two finite points");
    PositionTree t;
    t.labels = cd.labels;
    t.parent.reserve(cd.clusters.size());
    for (const Cluster& c : cd.clusters) t.parent.push_back(c.parent);
    t.root = cd.root;
    t.r_preimage.resize(cd.clusters.size());
    t.r_map.resize(cd.labels.size());
    for (std::size_t i = 0; i < cd.labels.size(); ++i) {
        const int v = cd.attach(static_cast<int>(i));
        t.r_map[i] = v;
        t.r_preimage[v].push_back(static_cast<int>(i));
    }
    return t;
}

PositionTree position_tree(const PointSet& A) { return position_tree(compute_clusters(A)); }

std::string PositionTree::dot() const {
    std::string out = "graph position {\n  node [shape=circle];\n";
    for (int v = 0; v < vertex_count(); ++v) out += "  v" + std::to_string(v) + ";\n";
    for (int v = 0; v < vertex_count(); ++v)
        if (parent[v] >= 0)
            out += "  v" + std::to_string(v) + " -- v" + std::to_string(parent[v]) + ";\n";
    out += "  node [shape=plaintext];\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += "  " + quote(labels[i]) + " -- v" + std::to_string(r_map[i]) + ";\n";
    return out + "}\n";
}

bool same_position(const PointSet& A, const std::vector<int>& phi, const PointSet& A2,
                   int designated) {
    const int n = A.size();
    if (A2.size() != n)
        throw SizeMismatch("the two point sets differ in cardinality");
    if (static_cast<int>(phi.size()) != n)
        throw SizeMismatch("phi does not cover the first point set");
    if (n < 3) throw TooFewPoints("positions are defined for at least three points");
    std::vector<char> hit(n, 0);
    for (int x : phi) {
        if (x < 0 || x >= n || hit[x]++) throw SizeMismatch("phi is not a bijection");
    }

    if (A.infinity_index >= 0 && A2.infinity_index >= 0 &&
        phi[A.infinity_index] == A2.infinity_index)
        return cluster_bijection(A, phi, A2);

    int z0 = designated;
    if (z0 < 0) {
        z0 = 0;
        for (int i = 1; i < n; ++i)
            if (A.labels[z0] < A.labels[i]) z0 = i;
    } else if (z0 >= n) {
        throw SizeMismatch("designated point index outside the set");
    }
    return cluster_bijection(move_to_infinity(A, z0), phi, move_to_infinity(A2, phi[z0]));
}

} // namespace berkdil
