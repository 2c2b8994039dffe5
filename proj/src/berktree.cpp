#include "berkdil/berktree.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <utility>

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

// ----------------------------------------------------- skeleton metric core

// vertex distances from prefix sums toward the stored root; the metric does
// not depend on the rooting, so queries work for any anchoring
struct Metric {
    const MetricTree& t;
    std::vector<mpq_class> rd; // distance to the stored root
    std::vector<int> level;

    explicit Metric(const MetricTree& tr) : t(tr), rd(tr.vertex_count()), level(tr.vertex_count()) {
        std::vector<int> order;
        order.reserve(rd.size());
        if (t.root >= 0) order.push_back(t.root);
        for (std::size_t k = 0; k < order.size(); ++k)
            for (int c : t.children[order[k]]) {
                rd[c] = rd[order[k]] + t.up_length[c];
                level[c] = level[order[k]] + 1;
                order.push_back(c);
            }
        if (order.size() != rd.size()) throw BadInput("tree", "vertices unreachable from the root");
    }

    int lca(int u, int w) const {
        while (level[u] > level[w]) u = t.parent[u];
        while (level[w] > level[u]) w = t.parent[w];
        while (u != w) {
            u = t.parent[u];
            w = t.parent[w];
        }
        return u;
    }

    mpq_class dist(int u, int w) const { return rd[u] + rd[w] - 2 * rd[lca(u, w)]; }
};

// canonical skeleton point: a vertex, or an interior position on an edge
struct Canon {
    int vtx = -1;   // set when at a vertex
    int child = -1; // else the edge, with 0 < off < up_length[child]
    mpq_class off;
};

Canon canonical(const MetricTree& t, const TreePoint& p) {
    if (p.leaf >= 0) {
        if (p.leaf >= t.leaf_count()) throw BadInput("point", "leaf index out of range");
        throw LeafDistanceInfinite("leaf rays have infinite length; metric queries need skeleton points");
    }
    Canon c;
    if (p.vertex >= 0) {
        if (p.vertex >= t.vertex_count()) throw BadInput("point", "vertex index out of range");
        c.vtx = p.vertex;
        return c;
    }
    if (p.edge_child < 0 || p.edge_child >= t.vertex_count() || p.edge_child == t.root)
        throw BadInput("point", "edge reference is not a skeleton edge");
    if (p.offset.is_infinity()) throw BadInput("point", "offset must be finite");
    const mpq_class& off = p.offset.rat();
    const mpq_class& len = t.up_length[p.edge_child];
    if (off < 0 || off > len) throw BadInput("point", "offset exceeds the edge length");
    if (off == 0) {
        c.vtx = t.parent[p.edge_child];
    } else if (off == len) {
        c.vtx = p.edge_child;
    } else {
        c.child = p.edge_child;
        c.off = off;
    }
    return c;
}

// gates: vertices from which the rest of the tree is reached, with the cost
// of getting there
using Gate = std::pair<int, mpq_class>;

std::vector<Gate> gates(const MetricTree& t, const Canon& c) {
    if (c.vtx >= 0) return {{c.vtx, 0}};
    return {{t.parent[c.child], c.off}, {c.child, t.up_length[c.child] - c.off}};
}

mpq_class point_dist(const MetricTree& t, const Metric& m, const Canon& x, const Canon& y) {
    if (x.child >= 0 && x.child == y.child) return abs(x.off - y.off);
    mpq_class best;
    bool first = true;
    for (const Gate& gx : gates(t, x))
        for (const Gate& gy : gates(t, y)) {
            mpq_class d = gx.second + gy.second + m.dist(gx.first, gy.first);
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
    return best;
}

// the axis of pair i meets the skeleton in the path between the attachment
// vertices of its two leaf rays
struct AxisPath {
    int u, w;
    mpq_class duw;
};

AxisPath axis_path(const MetricTree& t, const Metric& m, int i) {
    if (i < 0 || i >= static_cast<int>(t.axes.size()))
        throw BadInput("pair_index", "no such axis");
    const int u = t.leaf_attach[t.axes[i][0]];
    const int w = t.leaf_attach[t.axes[i][1]];
    if (u < 0 || w < 0) throw BadInput("tree", "axis leaf is not attached to the skeleton");
    return {u, w, m.dist(u, w)};
}

mpq_class vertex_axis_dist(const Metric& m, int v, const AxisPath& ax) {
    return (m.dist(v, ax.u) + m.dist(v, ax.w) - ax.duw) / 2;
}

mpq_class point_axis_dist(const MetricTree& t, const Metric& m, const Canon& x, const AxisPath& ax) {
    mpq_class best;
    bool first = true;
    for (const Gate& g : gates(t, x)) {
        mpq_class d = g.second + vertex_axis_dist(m, g.first, ax);
        if (first || d < best) {
            best = d;
            first = false;
        }
    }
    // an interior point of an edge lying on the axis is at distance 0, which
    // the gate expansion already reports: both endpoints are then on the axis
    // and one gate cost equals the distance along the edge... except that the
    // path runs *through* the point, so take the direct formula instead
    if (x.child >= 0) {
        const int p = t.parent[x.child];
        if (vertex_axis_dist(m, p, ax) == 0 && vertex_axis_dist(m, x.child, ax) == 0) return 0;
    }
    return best;
}

// oriented decomposition of the path [x, y] into sub-segments of edges
struct Piece {
    int child;
    mpq_class s0, s1; // measured from the upper endpoint, s0 < s1
};

void add_piece(std::vector<Piece>& out, int child, mpq_class a, mpq_class b) {
    if (a > b) std::swap(a, b);
    if (a == b) return;
    out.push_back({child, std::move(a), std::move(b)});
}

std::vector<Piece> path_pieces(const MetricTree& t, const Metric& m, const Canon& x,
                               const Canon& y) {
    std::vector<Piece> out;
    if (x.child >= 0 && x.child == y.child) {
        add_piece(out, x.child, x.off, y.off);
        return out;
    }
    // pick the gate combination realizing the geodesic
    Gate bx{-1, 0}, by{-1, 0};
    mpq_class best;
    bool first = true;
    for (const Gate& gx : gates(t, x))
        for (const Gate& gy : gates(t, y)) {
            mpq_class d = gx.second + gy.second + m.dist(gx.first, gy.first);
            if (first || d < best) {
                best = d;
                bx = gx;
                by = gy;
                first = false;
            }
        }
    if (x.child >= 0)
        add_piece(out, x.child, x.off, bx.first == x.child ? t.up_length[x.child] : mpq_class(0));
    if (y.child >= 0)
        add_piece(out, y.child, y.off, by.first == y.child ? t.up_length[y.child] : mpq_class(0));
    // full edges between the two gate vertices
    int u = bx.first, w = by.first;
    while (m.level[u] > m.level[w]) {
        add_piece(out, u, 0, t.up_length[u]);
        u = t.parent[u];
    }
    while (m.level[w] > m.level[u]) {
        add_piece(out, w, 0, t.up_length[w]);
        w = t.parent[w];
    }
    while (u != w) {
        add_piece(out, u, 0, t.up_length[u]);
        add_piece(out, w, 0, t.up_length[w]);
        u = t.parent[u];
        w = t.parent[w];
    }
    return out;
}

void validate_shape(const MetricTree& t) {
    const int V = t.vertex_count();
    if ((V == 0) != (t.root < 0)) throw BadInput("tree", "root index inconsistent with vertices");
    if (t.root >= V) throw BadInput("tree", "root index out of range");
    for (int v = 0; v < V; ++v) {
        if ((t.parent[v] < 0) != (v == t.root))
            throw BadInput("tree", "exactly the root may lack a parent");
        if (t.parent[v] >= V) throw BadInput("tree", "parent index out of range");
        if (v != t.root && !(t.up_length[v] > 0))
            throw BadInput("tree", "edge lengths must be positive");
    }
    for (int l = 0; l < t.leaf_count(); ++l)
        if (t.leaf_attach[l] >= V || (V > 0 && t.leaf_attach[l] < 0))
            throw BadInput("tree", "leaf attachment out of range");
    if (t.infinity_leaf >= t.leaf_count()) throw BadInput("tree", "infinity leaf out of range");
}

} // namespace

// ------------------------------------------------------------- tree points

TreePoint TreePoint::at_vertex(int v) {
    TreePoint p;
    p.vertex = v;
    return p;
}

TreePoint TreePoint::on_edge(int child, const ValQ& offset_from_upper) {
    TreePoint p;
    p.edge_child = child;
    p.offset = offset_from_upper;
    return p;
}

TreePoint TreePoint::at_leaf(int l) {
    TreePoint p;
    p.leaf = l;
    return p;
}

// ------------------------------------------------------------ construction

MetricTree hull_from_clusters(const ClusterData& cd, const Pairing& P) {
    if (!clustered_in_pairs(cd, P))
        throw NotClusteredInPairs("the axes of the pairing are not pairwise disjoint");

    MetricTree t;
    t.ell = cd.ell;
    const int V = static_cast<int>(cd.clusters.size());
    t.members.reserve(V);
    t.kind.reserve(V);
    t.parent.reserve(V);
    t.children.reserve(V);
    t.up_length.reserve(V);
    for (int c = 0; c < V; ++c) {
        const Cluster& cl = cd.clusters[c];
        t.members.push_back(cl.members);
        t.kind.push_back(cd.uebereven(c) ? VertexKind::natural : VertexKind::distinguished);
        t.parent.push_back(cl.parent);
        t.children.push_back(cl.children);
        if (cl.parent >= 0) {
            const ValQ rel = cd.rel_depth(c);
            assert(!rel.is_infinity() && rel.rat() > 0);
            t.up_length.push_back(rel.rat());
        } else {
            t.up_length.emplace_back(0);
        }
    }
    t.root = cd.root;

    t.leaf_labels = cd.labels;
    t.infinity_leaf = cd.infinity_index;
    t.leaf_attach.reserve(cd.labels.size());
    for (int i = 0; i < static_cast<int>(cd.labels.size()); ++i)
        t.leaf_attach.push_back(cd.root >= 0 ? cd.attach(i) : -1);

    t.axes = P.pairs;
    return t;
}

ClusterData clusters_from_hull(const MetricTree& t, const ValQ& d0) {
    if (t.infinity_leaf < 0)
        throw NoInfinityLeaf("the tree has no leaf at infinity; normalize the set first");
    validate_shape(t);
    if (d0.is_infinity()) throw BadInput("d0", "the anchoring depth must be finite");

    const int n = t.leaf_count();
    std::vector<std::vector<ValQ>> vmat(n, std::vector<ValQ>(n, ValQ::infinity()));
    int finite_leaves = 0;
    for (int i = 0; i < n; ++i)
        if (i != t.infinity_leaf) ++finite_leaves;
    if (finite_leaves >= 2) {
        Metric m(t);
        // anchor depths below the attachment vertex of the infinity ray
        const int top = t.leaf_attach[t.infinity_leaf];
        // v(z_i - z_j) = depth of the meet of the two attachment vertices,
        // seen from the infinity-rooted tree; the meet depth follows from
        // distances alone, so no explicit re-rooting is needed
        for (int i = 0; i < n; ++i) {
            if (i == t.infinity_leaf) continue;
            for (int j = i + 1; j < n; ++j) {
                if (j == t.infinity_leaf) continue;
                const int a = t.leaf_attach[i], b = t.leaf_attach[j];
                mpq_class meet =
                    d0.rat() + (m.dist(top, a) + m.dist(top, b) - m.dist(a, b)) / 2;
                vmat[i][j] = vmat[j][i] = ValQ(meet);
            }
        }
    }
    return clusters_from_valuations(t.ell, t.leaf_labels, t.infinity_leaf, vmat);
}

// ----------------------------------------------------------------- queries

ValQ distance(const MetricTree& t, const TreePoint& x, const TreePoint& y) {
    Metric m(t);
    return ValQ(point_dist(t, m, canonical(t, x), canonical(t, y)));
}

ValQ distance_to_axis(const MetricTree& t, const TreePoint& x, int pair_index) {
    Metric m(t);
    const AxisPath ax = axis_path(t, m, pair_index);
    return ValQ(point_axis_dist(t, m, canonical(t, x), ax));
}

ValQ mu(const MetricTree& t, const TreePoint& x, const TreePoint& y, const ValQ& r) {
    if (!r.is_infinity() && r.rat() < 0) throw BadInput("r", "the radius must be >= 0");
    Metric m(t);
    const Canon cx = canonical(t, x), cy = canonical(t, y);
    if (r.is_infinity()) return ValQ(point_dist(t, m, cx, cy));

    std::vector<AxisPath> axes;
    axes.reserve(t.axes.size());
    for (int i = 0; i < static_cast<int>(t.axes.size()); ++i)
        axes.push_back(axis_path(t, m, i));

    mpq_class total = 0;
    for (const Piece& pc : path_pieces(t, m, cx, cy)) {
        const int p = t.parent[pc.child];
        const mpq_class& len = t.up_length[pc.child];
        std::vector<std::pair<mpq_class, mpq_class>> hit;
        for (const AxisPath& ax : axes) {
            const mpq_class dP = vertex_axis_dist(m, p, ax);
            const mpq_class dC = vertex_axis_dist(m, pc.child, ax);
            mpq_class lo = pc.s0, hi = pc.s1;
            if (dP == 0 && dC == 0) {
                // the whole edge lies on the axis
            } else if (dC == dP + len) {
                // distance grows away from the parent: dP + s <= r
                hi = std::min(hi, mpq_class(r.rat() - dP));
            } else {
                assert(dP == dC + len);
                lo = std::max(lo, mpq_class(dC + len - r.rat()));
            }
            if (lo < hi) hit.emplace_back(lo, hi);
        }
        std::sort(hit.begin(), hit.end());
        mpq_class covered_to = pc.s0;
        for (const auto& [lo, hi] : hit) {
            const mpq_class from = std::max(lo, covered_to);
            if (hi > from) {
                total += hi - from;
                covered_to = hi;
            }
        }
    }
    return ValQ(total);
}

bool separated_check_vertices(const MetricTree& t, const ValQ& r) {
    Metric m(t);
    std::vector<AxisPath> axes;
    axes.reserve(t.axes.size());
    for (int i = 0; i < static_cast<int>(t.axes.size()); ++i)
        axes.push_back(axis_path(t, m, i));

    std::vector<int> dist_vertices;
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.kind[v] == VertexKind::distinguished) dist_vertices.push_back(v);

    const ValQ bound = r * mpq_class(2);
    for (std::size_t a = 0; a < dist_vertices.size(); ++a)
        for (std::size_t b = a + 1; b < dist_vertices.size(); ++b) {
            const int v = dist_vertices[a], w = dist_vertices[b];
            bool common_axis = false;
            for (const AxisPath& ax : axes)
                if (vertex_axis_dist(m, v, ax) == 0 && vertex_axis_dist(m, w, ax) == 0) {
                    common_axis = true;
                    break;
                }
            if (common_axis) continue;
            if (!(ValQ(m.dist(v, w)) > bound)) return false;
        }
    return true;
}

// ------------------------------------------------------------------ export

std::string MetricTree::dot() const {
    std::string out = "graph hull {\n";
    for (int v = 0; v < vertex_count(); ++v) {
        out += "  v" + std::to_string(v);
        out += kind[v] == VertexKind::natural ? " [shape=doublecircle];\n" : " [shape=circle];\n";
    }
    for (int v = 0; v < vertex_count(); ++v)
        if (parent[v] >= 0)
            out += "  v" + std::to_string(v) + " -- v" + std::to_string(parent[v]) + " [label=" +
                   quote(up_length[v].get_str()) + "];\n";
    for (int l = 0; l < leaf_count(); ++l) {
        out += "  " + quote(leaf_labels[l]) + " [shape=plaintext];\n";
        if (leaf_attach[l] >= 0)
            out += "  " + quote(leaf_labels[l]) + " -- v" + std::to_string(leaf_attach[l]) +
                   " [style=dashed, label=\"inf\"];\n";
    }
    return out + "}\n";
}

std::string tree_to_json(const MetricTree& t) {
    nlohmann::json j;
    j["ell"] = t.ell;
    j["root"] = t.root;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < t.vertex_count(); ++v) {
        nlohmann::json jv;
        jv["kind"] = t.kind[v] == VertexKind::natural ? "natural" : "distinguished";
        jv["parent"] = t.parent[v];
        if (t.parent[v] >= 0) jv["up_length"] = t.up_length[v].get_str();
        j["vertices"].push_back(std::move(jv));
    }
    j["leaves"] = nlohmann::json::array();
    for (int l = 0; l < t.leaf_count(); ++l)
        j["leaves"].push_back({{"label", t.leaf_labels[l]}, {"attach", t.leaf_attach[l]}});
    j["infinity_leaf"] = t.infinity_leaf;
    j["axes"] = nlohmann::json::array();
    for (const auto& ax : t.axes) j["axes"].push_back({ax[0], ax[1]});
    return j.dump(2);
}

MetricTree tree_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw BadInput("tree", std::string("not valid JSON: ") + e.what());
    }

    MetricTree t;
    try {
        t.ell = j.at("ell").get<unsigned long>();
        t.root = j.at("root").get<int>();
        const auto& jv = j.at("vertices");
        const int V = static_cast<int>(jv.size());
        for (int v = 0; v < V; ++v) {
            const std::string kind = jv.at(v).at("kind").get<std::string>();
            if (kind == "natural")
                t.kind.push_back(VertexKind::natural);
            else if (kind == "distinguished")
                t.kind.push_back(VertexKind::distinguished);
            else
                throw BadInput("vertices.kind", "expected 'distinguished' or 'natural'");
            const int par = jv.at(v).at("parent").get<int>();
            t.parent.push_back(par);
            if (par >= 0) {
                const auto len = ValQ::parse(jv.at(v).at("up_length").get<std::string>());
                if (!len || len->is_infinity() || !(len->rat() > 0))
                    throw BadInput("vertices.up_length", "expected a positive rational");
                t.up_length.push_back(len->rat());
            } else {
                t.up_length.emplace_back(0);
            }
        }
        t.children.assign(V, {});
        t.members.assign(V, {});
        for (const auto& jl : j.at("leaves")) {
            t.leaf_labels.push_back(jl.at("label").get<std::string>());
            t.leaf_attach.push_back(jl.at("attach").get<int>());
        }
        t.infinity_leaf = j.at("infinity_leaf").get<int>();
        for (const auto& ja : j.at("axes")) {
            if (ja.size() != 2) throw BadInput("axes", "each axis is a pair of leaf ids");
            t.axes.push_back({ja.at(0).get<int>(), ja.at(1).get<int>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw BadInput("tree", std::string("malformed encoding: ") + e.what());
    }

    validate_shape(t);
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.parent[v] >= 0) t.children[t.parent[v]].push_back(v);
    Metric probe(t); // rejects parent cycles / disconnected vertices

    // members and sibling order are derived data: leaves attached below a
    // vertex, children sorted by their first member (cluster convention)
    std::vector<std::vector<int>> below(t.vertex_count());
    for (int l = 0; l < t.leaf_count(); ++l) {
        if (l == t.infinity_leaf) continue;
        for (int v = t.leaf_attach[l]; v >= 0; v = t.parent[v]) below[v].push_back(l);
    }
    for (int v = 0; v < t.vertex_count(); ++v) {
        std::sort(below[v].begin(), below[v].end());
        t.members[v] = std::move(below[v]);
    }
    for (auto& ch : t.children)
        std::sort(ch.begin(), ch.end(),
                  [&](int a, int b) { return t.members[a] < t.members[b]; });

    std::vector<std::string> seen = t.leaf_labels;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw BadInput("leaves", "leaf labels must be distinct");
    std::vector<int> in_axis(t.leaf_count(), 0);
    for (const auto& ax : t.axes) {
        if (ax[0] < 0 || ax[1] < 0 || ax[0] >= t.leaf_count() || ax[1] >= t.leaf_count() ||
            ax[0] == ax[1])
            throw BadInput("axes", "axis endpoints must be distinct leaf ids");
        if (++in_axis[ax[0]] > 1 || ++in_axis[ax[1]] > 1)
            throw BadInput("axes", "a leaf may lie on at most one axis");
    }
    return t;
}

} // namespace berkdil
