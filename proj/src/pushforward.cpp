#include "berkdil/pushforward.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "berkdil/errors.hpp"

namespace berkdil {

namespace {

void check_params(const PushforwardParams& params) {
    if (params.p < 2) throw BadInput("p", "the covering degree must be a prime >= 2");
    if (params.vp.is_infinity() || params.vp < ValQ(0))
        throw BadInput("vp", "v(p) must be a finite nonnegative rational");
}

} // namespace

ValQ PushforwardParams::radius() const {
    if (p < 2) throw BadInput("p", "the covering degree must be a prime >= 2");
    return vp * mpq_class(1, p - 1);
}

ValQ PushforwardParams::branch_radius() const {
    if (p < 2) throw BadInput("p", "the covering degree must be a prime >= 2");
    return vp * mpq_class(p, p - 1);
}

MetricTree pushforward_hull(const MetricTree& t, const PushforwardParams& params) {
    check_params(params);
    if (!params.optimal && t.leaf_count() > 4)
        throw OptimalityNotAsserted(
            "the dilation formula requires an optimal configuration; "
            "sets of more than four points need the optimality assertion");

    // The quotient is only defined when the leaves fall into fixed-point
    // pairs, one axis each.
    std::vector<int> on_axes(t.leaf_labels.size(), 0);
    for (const auto& ax : t.axes)
        for (int l : ax) {
            if (l < 0 || l >= t.leaf_count())
                throw BadInput("tree.axes", "axis endpoint is not a leaf id");
            ++on_axes[l];
        }
    for (std::size_t l = 0; l < on_axes.size(); ++l)
        if (on_axes[l] != 1)
            throw NotSeparated("leaf '" + t.leaf_labels[l] +
                               "' does not lie on exactly one axis");

    const ValQ r = params.radius();
    if (t.vertex_count() > 0 && !separated_check_vertices(t, r))
        throw NotSeparated("the axes are not " + r.str() + "-separated");

    MetricTree out = t;
    const mpq_class stretch(params.p - 1);
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (v == t.root) continue;
        const ValQ covered =
            mu(t, TreePoint::at_vertex(t.parent[v]), TreePoint::at_vertex(v), r);
        out.up_length[v] = t.up_length[v] + covered.rat() * stretch;
    }
    for (std::string& label : out.leaf_labels) label = "pi(" + label + ")";
    return out;
}

TreePoint pushforward_point(const MetricTree& t, const TreePoint& x,
                            const PushforwardParams& params) {
    check_params(params);
    if (x.leaf >= 0) return x;
    if (x.vertex >= 0) {
        if (x.vertex >= t.vertex_count()) throw BadInput("point", "no such vertex");
        return x;
    }
    if (x.edge_child < 0 || x.edge_child >= t.vertex_count())
        throw BadInput("point", "no such edge");
    const int upper = t.parent[x.edge_child];
    if (upper < 0) throw BadInput("point", "the top vertex has no upper edge");
    const ValQ covered = mu(t, TreePoint::at_vertex(upper), x, params.radius());
    return TreePoint::on_edge(x.edge_child,
                              x.offset + covered * mpq_class(params.p - 1));
}

ClusterData predict_branch_clusters(const PointSet& S, const Pairing& P,
                                    const PushforwardParams& params) {
    check_params(params);
    if (S.infinity_index < 0)
        throw NoInfinityInS(
            "the configuration must contain the point at infinity; "
            "apply a Mobius change of coordinates first");

    const ClusterData cd = compute_clusters(S);
    const MetricTree t = hull_from_clusters(cd, P);
    const MetricTree tb = pushforward_hull(t, params);
    const ValQ d0 = cd.root >= 0 ? cd.clusters[cd.root].depth : ValQ(0);
    ClusterData out = clusters_from_hull(tb, d0);

    // Cross-check the generic metric computation against the closed-form
    // depth laws wherever their hypotheses hold.
    if (out.clusters.size() != cd.clusters.size() || out.root != cd.root)
        throw std::logic_error("pushforward: cluster correspondence broken");
    for (std::size_t c = 0; c < cd.clusters.size(); ++c) {
        const int ci = static_cast<int>(c);
        if (out.clusters[c].members != cd.clusters[c].members)
            throw std::logic_error("pushforward: cluster correspondence broken");
        if (ci == cd.root) continue;
        const ValQ before = cd.rel_depth(ci);
        const ValQ after = out.rel_depth(ci);
        const int pa = cd.clusters[ci].parent;
        bool closed_form = true;
        ValQ want;
        if (cd.clusters[c].members.size() % 2 == 1)
            want = before * mpq_class(params.p);
        else if (params.vp == ValQ(0))
            want = before;
        else if (!cd.uebereven(ci) && !cd.uebereven(pa))
            want = before + params.vp + params.vp;
        else
            closed_form = false;
        if (closed_form && !(after == want))
            throw std::logic_error(
                "pushforward: dilated depth disagrees with the closed form for "
                "cluster #" + std::to_string(c));
    }
    return out;
}

bool check_branch_separation(const MetricTree& tB, const PushforwardParams& params) {
    check_params(params);
    if (tB.vertex_count() == 0) return true;
    return separated_check_vertices(tB, params.branch_radius());
}

} // namespace berkdil
