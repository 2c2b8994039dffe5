#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "berkdil/berktree.hpp"
#include "berkdil/clusters.hpp"
#include "berkdil/errors.hpp"
#include "berkdil/pushforward.hpp"
#include "rng.hpp"

using namespace berkdil;

namespace {

// build a point set from decimal/fraction strings, "inf" = point at infinity
PointSet qset(unsigned long ell, const std::vector<std::string>& labels,
              const std::vector<std::string>& values) {
    std::vector<ProjPoint> pts;
    for (const std::string& v : values) {
        if (v == "inf") {
            pts.push_back(ProjPoint::infinity());
        } else {
            mpq_class q(v);
            q.canonicalize();
            pts.push_back(ProjPoint::finite(Scalar(ell, ExactQ(q))));
        }
    }
    return PointSet::make(ell, labels, std::move(pts));
}

// point configurations rich in coincidences: digits in base ell, six places
std::vector<ExactQ> random_config(testing::Rng& rng, unsigned long ell, int n) {
    std::set<mpq_class> used;
    std::vector<ExactQ> out;
    while (static_cast<int>(out.size()) < n) {
        mpz_class z = 0, pw = 1;
        for (int k = 0; k <= 5; ++k) {
            z += mpz_class(rng.uniform(0, static_cast<long>(ell) - 1)) * pw;
            pw *= static_cast<long>(ell);
        }
        mpq_class q(z);
        q.canonicalize();
        if (used.insert(q).second) out.emplace_back(q);
    }
    return out;
}

PointSet wrap_config(unsigned long ell, const std::vector<ExactQ>& pts, bool with_inf) {
    std::vector<std::string> labels;
    std::vector<ProjPoint> pp;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        labels.push_back("z" + std::to_string(i));
        pp.push_back(ProjPoint::finite(Scalar(ell, pts[i])));
    }
    if (with_inf) {
        labels.push_back("zoo");
        pp.push_back(ProjPoint::infinity());
    }
    return PointSet::make(ell, labels, std::move(pp));
}

int vertex_with(const MetricTree& t, std::vector<std::string> want) {
    std::sort(want.begin(), want.end());
    for (int v = 0; v < t.vertex_count(); ++v) {
        std::vector<std::string> got;
        for (int m : t.members[v]) got.push_back(t.leaf_labels[m]);
        std::sort(got.begin(), got.end());
        if (got == want) return v;
    }
    return -1;
}

int cluster_with(const ClusterData& cd, std::vector<std::string> want) {
    std::sort(want.begin(), want.end());
    for (std::size_t c = 0; c < cd.clusters.size(); ++c) {
        std::vector<std::string> got;
        for (int m : cd.clusters[c].members) got.push_back(cd.labels[m]);
        std::sort(got.begin(), got.end());
        if (got == want) return static_cast<int>(c);
    }
    return -1;
}

// ---- independent path machinery on the raw parent arrays (oracle side) ----

int level_of(const MetricTree& t, int v) {
    int k = 0;
    while (t.parent[v] >= 0) {
        v = t.parent[v];
        ++k;
    }
    return k;
}

std::vector<int> vpath(const MetricTree& t, int u, int w) {
    std::vector<int> up, down;
    int la = level_of(t, u), lb = level_of(t, w);
    while (la > lb) {
        up.push_back(u);
        u = t.parent[u];
        --la;
    }
    while (lb > la) {
        down.push_back(w);
        w = t.parent[w];
        --lb;
    }
    while (u != w) {
        up.push_back(u);
        down.push_back(w);
        u = t.parent[u];
        w = t.parent[w];
    }
    up.push_back(u);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

mpq_class path_len(const MetricTree& t, const std::vector<int>& path) {
    mpq_class total = 0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const int child = t.parent[path[k]] == path[k + 1] ? path[k] : path[k + 1];
        total += t.up_length[child];
    }
    return total;
}

// point at arclength s from the start of the path
TreePoint at_param(const MetricTree& t, const std::vector<int>& path, mpq_class s) {
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const int x = path[k], y = path[k + 1];
        const int child = t.parent[x] == y ? x : y;
        const mpq_class& len = t.up_length[child];
        if (s <= len) {
            mpq_class off = child == x ? mpq_class(len - s) : s;
            return TreePoint::on_edge(child, ValQ(off));
        }
        s -= len;
    }
    return TreePoint::at_vertex(path.back());
}

// distance to an axis by scanning the axis path on a 1/8 grid; exact for
// integer edge lengths because every slope breakpoint lies on the grid
mpq_class axis_dist_oracle(const MetricTree& t, const TreePoint& p, int i) {
    const auto ap = vpath(t, t.leaf_attach[t.axes[i][0]], t.leaf_attach[t.axes[i][1]]);
    const mpq_class D = path_len(t, ap);
    REQUIRE(D.get_den() == 1);
    const long steps = 8 * mpz_class(D.get_num()).get_si();
    mpq_class best = -1;
    for (long k = 0; k <= steps; ++k) {
        mpq_class s(k, 8);
        s.canonicalize();
        const mpq_class d = distance(t, p, at_param(t, ap, s)).rat();
        if (best < 0 || d < best) best = d;
    }
    return best;
}

// tubular measure by midpoint sampling at step 1/4: with integer edge
// lengths and integer r the covered part is a union of intervals with
// half-integer endpoints, so each sample cell is entirely in or out
mpq_class mu_oracle(const MetricTree& t, int u, int w, const mpq_class& r) {
    const auto path = vpath(t, u, w);
    const mpq_class D = path_len(t, path);
    if (D == 0) return 0;
    REQUIRE(D.get_den() == 1);
    const long cells = 4 * mpz_class(D.get_num()).get_si();
    mpq_class total = 0;
    for (long k = 0; k < cells; ++k) {
        mpq_class mid(2 * k + 1, 8);
        mid.canonicalize();
        const TreePoint p = at_param(t, path, mid);
        mpq_class best = -1;
        for (int i = 0; i < static_cast<int>(t.axes.size()); ++i) {
            const mpq_class d = axis_dist_oracle(t, p, i);
            if (best < 0 || d < best) best = d;
        }
        if (best >= 0 && best <= r) total += mpq_class(1, 4);
    }
    return total;
}

struct Draw {
    PointSet ps;
    ClusterData cd;
    Pairing P;
    MetricTree t;
};

// half the draws pair up random points canonically (rejection-sampled), the
// other half plant partners next to anchors so deep pairs are frequent
std::optional<Draw> make_draw(testing::Rng& rng, int rep) {
    const unsigned long ell = (rep % 3 == 0) ? 2 : ((rep % 3 == 1) ? 3 : 5);
    const int half = static_cast<int>(rng.uniform(1, 3));
    const bool with_inf = rng.flip();
    const bool planted = rep % 2 == 0;
    try {
        PointSet ps = [&] {
            if (!planted)
                return wrap_config(ell, random_config(rng, ell, 2 * half - (with_inf ? 1 : 0)),
                                   with_inf);
            const auto anchors = random_config(rng, ell, half);
            std::vector<ExactQ> pts;
            for (int i = 0; i < half; ++i) {
                pts.push_back(anchors[i]);
                if (with_inf && i == half - 1) break; // infinity partners the last anchor
                mpz_class pw = 1;
                for (long k = rng.uniform(1, 6); k > 0; --k) pw *= static_cast<long>(ell);
                pts.emplace_back(mpq_class(anchors[i].rat() + pw));
            }
            return wrap_config(ell, pts, with_inf);
        }();
        ClusterData cd = compute_clusters(ps);
        Pairing P;
        if (planted) {
            const int n = ps.size();
            for (int k = 0; 2 * k + 1 < n; ++k) P.pairs.push_back({2 * k, 2 * k + 1});
            if (with_inf) P.pairs.push_back({n - 2, n - 1});
            if (!clustered_in_pairs(cd, P)) return std::nullopt;
        } else {
            P = pairing_from_clusters(cd);
        }
        MetricTree t = hull_from_clusters(cd, P);
        return Draw{std::move(ps), std::move(cd), std::move(P), std::move(t)};
    } catch (const ValidationError&) {
        return std::nullopt;
    } catch (const PrecisionExhausted&) {
        return std::nullopt;
    }
}

// a random skeleton point with half-integer coordinates
TreePoint pick_point(testing::Rng& rng, const MetricTree& t) {
    const int v = static_cast<int>(rng.uniform(0, t.vertex_count() - 1));
    if (v == t.root || rng.flip()) return TreePoint::at_vertex(v);
    const mpq_class& len = t.up_length[v];
    REQUIRE(len.get_den() == 1);
    const long ticks = 2 * mpz_class(len.get_num()).get_si();
    mpq_class off(rng.uniform(0, ticks), 2);
    off.canonicalize();
    return TreePoint::on_edge(v, ValQ(off));
}

} // namespace

TEST_CASE("wild quartet: the inter-axis segment stretches by twice v(p)") {
    PointSet S = qset(2, {"0", "oo", "1", "9"}, {"0", "inf", "1", "9"});
    ClusterData cd = compute_clusters(S);
    Pairing P = pairing_from_clusters(cd);
    MetricTree t = hull_from_clusters(cd, P);
    PushforwardParams params{2, ValQ(1), false};
    CHECK(params.radius() == ValQ(1));
    CHECK(params.branch_radius() == ValQ(2));

    MetricTree tb = pushforward_hull(t, params);
    const int c19 = vertex_with(t, {"1", "9"});
    REQUIRE(c19 >= 0);
    CHECK(t.up_length[c19] == 3);
    CHECK(tb.up_length[c19] == 5);
    CHECK(tb.parent == t.parent);
    CHECK(tb.kind == t.kind);
    CHECK(tb.axes == t.axes);
    CHECK(tb.leaf_attach == t.leaf_attach);
    const std::vector<std::string> pushed{"pi(0)", "pi(oo)", "pi(1)", "pi(9)"};
    CHECK(tb.leaf_labels == pushed);

    SUBCASE("points of the segment slide by the covered length above them") {
        const int root = t.root;
        auto on = [&](long num, long den) {
            mpq_class q(num, den);
            q.canonicalize();
            return TreePoint::on_edge(c19, ValQ(q));
        };
        CHECK(pushforward_point(t, TreePoint::at_vertex(root), params).vertex == root);
        CHECK(pushforward_point(t, TreePoint::at_vertex(c19), params).vertex == c19);
        CHECK(pushforward_point(t, on(1, 2), params).offset == ValQ(1));
        CHECK(pushforward_point(t, on(3, 2), params).offset == ValQ(5, 2));
        CHECK(pushforward_point(t, on(5, 2), params).offset == ValQ(4));
        CHECK(pushforward_point(t, on(3, 1), params).offset == ValQ(5));
        // the dilation law for a mixed pair of interior points
        const ValQ before = distance(t, on(1, 2), on(5, 2));
        const ValQ grown = mu(t, on(1, 2), on(5, 2), params.radius());
        const ValQ after = distance(tb, pushforward_point(t, on(1, 2), params),
                                    pushforward_point(t, on(5, 2), params));
        CHECK(before == ValQ(2));
        CHECK(grown == ValQ(1));
        CHECK(after == before + grown);
        // leaves pass through unchanged
        CHECK(pushforward_point(t, TreePoint::at_leaf(2), params).leaf == 2);
    }

    SUBCASE("the predicted branch clusters gain relative depth 2 v(p)") {
        ClusterData out = predict_branch_clusters(S, P, params);
        REQUIRE(out.clusters.size() == 2);
        const int img = cluster_with(out, {"pi(1)", "pi(9)"});
        REQUIRE(img >= 0);
        CHECK(out.rel_depth(img) == ValQ(5));
        CHECK(out.clusters[out.root].depth == cd.clusters[cd.root].depth);
        CHECK(out.infinity_index == S.infinity_index);
        CHECK(out.ell == 2);
    }

    SUBCASE("the branch locus satisfies the amplified separation bound") {
        CHECK(check_branch_separation(tb, params));
        MetricTree squeezed = tb;
        squeezed.up_length[c19] = 4; // exactly the bound: no longer strict
        CHECK_FALSE(check_branch_separation(squeezed, params));
    }

    SUBCASE("the stretched tree serializes like any other") {
        MetricTree back = tree_from_json(tree_to_json(tb));
        CHECK(back.leaf_labels == tb.leaf_labels);
        CHECK(back.parent == tb.parent);
        REQUIRE(back.up_length.size() == tb.up_length.size());
        for (std::size_t v = 0; v < tb.up_length.size(); ++v)
            CHECK(back.up_length[v] == tb.up_length[v]);
        CHECK(back.axes == tb.axes);
    }
}

TEST_CASE("tame predictions: odd clusters double, even clusters persist") {
    SUBCASE("a chain with an odd middle cluster") {
        PointSet S = qset(3, {"0", "27", "18", "1", "4", "oo"},
                          {"0", "27", "18", "1", "4", "inf"});
        ClusterData cd = compute_clusters(S);
        REQUIRE(cd.clusters.size() == 4);
        const int odd3 = cluster_with(cd, {"0", "27", "18"});
        const int pair27 = cluster_with(cd, {"0", "27"});
        const int pair14 = cluster_with(cd, {"1", "4"});
        REQUIRE(odd3 >= 0);
        CHECK(cd.rel_depth(odd3) == ValQ(2));
        CHECK(cd.rel_depth(pair27) == ValQ(1));
        CHECK(cd.rel_depth(pair14) == ValQ(1));
        Pairing P = pairing_from_clusters(cd);

        for (unsigned long p : {2ul, 3ul, 5ul}) {
            PushforwardParams params{p, ValQ(0), true};
            ClusterData out = predict_branch_clusters(S, P, params);
            REQUIRE(out.clusters.size() == 4);
            CHECK(out.rel_depth(cluster_with(out, {"pi(0)", "pi(27)", "pi(18)"})) ==
                  ValQ(2) * mpq_class(p));
            CHECK(out.rel_depth(cluster_with(out, {"pi(0)", "pi(27)"})) == ValQ(1));
            CHECK(out.rel_depth(cluster_with(out, {"pi(1)", "pi(4)"})) == ValQ(1));
            CHECK(out.clusters[out.root].depth == ValQ(0));
            CHECK(check_branch_separation(hull_from_clusters(out, P), params));
        }
    }

    SUBCASE("no odd clusters: the data comes back unchanged") {
        PointSet S = qset(3, {"a0", "b0", "a1", "b1", "a2", "oo"},
                          {"-9", "9", "3", "12", "1", "inf"});
        ClusterData cd = compute_clusters(S);
        Pairing P = pairing_from_clusters(cd);
        for (unsigned long p : {2ul, 5ul}) {
            PushforwardParams params{p, ValQ(0), true};
            ClusterData out = predict_branch_clusters(S, P, params);
            REQUIRE(out.clusters.size() == cd.clusters.size());
            for (std::size_t c = 0; c < cd.clusters.size(); ++c) {
                CHECK(out.clusters[c].members == cd.clusters[c].members);
                CHECK(out.clusters[c].depth == cd.clusters[c].depth);
                CHECK(out.clusters[c].parent == cd.clusters[c].parent);
            }
            CHECK(out.labels[0] == "pi(a0)");
            CHECK(out.labels[5] == "pi(oo)");
        }
    }

    SUBCASE("genus-one quartet away from the residue characteristic") {
        PointSet S = qset(3, {"0", "oo", "3", "12"}, {"0", "inf", "3", "12"});
        ClusterData cd = compute_clusters(S);
        Pairing P = pairing_from_clusters(cd);
        PushforwardParams params{2, ValQ(0), false}; // four points: auto-optimal
        ClusterData out = predict_branch_clusters(S, P, params);
        CHECK(out.rel_depth(cluster_with(out, {"pi(3)", "pi(12)"})) == ValQ(1));
    }
}

TEST_CASE("wild parameters on an odd-degree cover") {
    PointSet S = qset(2, {"0", "oo", "1", "9"}, {"0", "inf", "1", "9"});
    ClusterData cd = compute_clusters(S);
    Pairing P = pairing_from_clusters(cd);
    PushforwardParams params{3, ValQ(2), false}; // radius 1, branch radius 3
    CHECK(params.radius() == ValQ(1));
    CHECK(params.branch_radius() == ValQ(3));
    ClusterData out = predict_branch_clusters(S, P, params);
    const int img = cluster_with(out, {"pi(1)", "pi(9)"});
    CHECK(out.rel_depth(img) == ValQ(7)); // 3 + (3 - 1) * 2
    CHECK(check_branch_separation(hull_from_clusters(out, P), params));
}

TEST_CASE("rejected parameters and hypothesis violations") {
    PointSet S = qset(2, {"0", "oo", "1", "9"}, {"0", "inf", "1", "9"});
    ClusterData cd = compute_clusters(S);
    Pairing P = pairing_from_clusters(cd);
    MetricTree t = hull_from_clusters(cd, P);

    SUBCASE("degenerate covering degree or valuation") {
        CHECK_THROWS_AS(pushforward_hull(t, PushforwardParams{1, ValQ(0), true}), BadInput);
        CHECK_THROWS_AS(pushforward_hull(t, PushforwardParams{0, ValQ(0), true}), BadInput);
        CHECK_THROWS_AS(pushforward_hull(t, PushforwardParams{2, ValQ(-1), true}), BadInput);
        CHECK_THROWS_AS(pushforward_hull(t, PushforwardParams{2, ValQ::infinity(), true}),
                        BadInput);
        CHECK_THROWS_AS((PushforwardParams{1, ValQ(0), true}.radius()), BadInput);
    }

    SUBCASE("optimality is an input assertion beyond four points") {
        PointSet big = qset(3, {"0", "27", "18", "1", "4", "oo"},
                            {"0", "27", "18", "1", "4", "inf"});
        ClusterData bcd = compute_clusters(big);
        Pairing bp = pairing_from_clusters(bcd);
        MetricTree bt = hull_from_clusters(bcd, bp);
        PushforwardParams tame{2, ValQ(0), false};
        CHECK_THROWS_AS(pushforward_hull(bt, tame), OptimalityNotAsserted);
        tame.optimal = true;
        CHECK_NOTHROW(pushforward_hull(bt, tame));
    }

    SUBCASE("separation fails when the radius swallows the gap") {
        // the only inter-axis segment has length 3, so radius 3/2 is too big
        PushforwardParams wild{2, ValQ(3, 2), false};
        CHECK_THROWS_AS(pushforward_hull(t, wild), NotSeparated);
        // a chain set whose closest distinguished vertices sit 1 apart
        PointSet big = qset(3, {"0", "27", "18", "1", "4", "oo"},
                            {"0", "27", "18", "1", "4", "inf"});
        ClusterData bcd = compute_clusters(big);
        MetricTree bt = hull_from_clusters(bcd, pairing_from_clusters(bcd));
        CHECK_THROWS_AS(pushforward_hull(bt, PushforwardParams{2, ValQ(1), true}),
                        NotSeparated);
    }

    SUBCASE("every leaf must lie on exactly one axis") {
        MetricTree broken = t;
        broken.axes = {t.axes[0], t.axes[0]}; // two leaves doubled, two missing
        CHECK_THROWS_AS(pushforward_hull(broken, PushforwardParams{2, ValQ(0), true}),
                        NotSeparated);
        broken.axes = {t.axes[0]};
        CHECK_THROWS_AS(pushforward_hull(broken, PushforwardParams{2, ValQ(0), true}),
                        NotSeparated);
        broken.axes = {t.axes[0], {1, 9}};
        CHECK_THROWS_AS(pushforward_hull(broken, PushforwardParams{2, ValQ(0), true}),
                        BadInput);
    }

    SUBCASE("prediction needs the point at infinity") {
        PointSet fin = qset(2, {"0", "64", "1", "9"}, {"0", "64", "1", "9"});
        ClusterData fcd = compute_clusters(fin);
        Pairing fp = pairing_from_clusters(fcd);
        CHECK_THROWS_AS(predict_branch_clusters(fin, fp, PushforwardParams{2, ValQ(0), true}),
                        NoInfinityInS);
    }

    SUBCASE("point images validate their anchors") {
        PushforwardParams params{2, ValQ(1), false};
        CHECK_THROWS_AS(pushforward_point(t, TreePoint::at_vertex(7), params), BadInput);
        CHECK_THROWS_AS(pushforward_point(t, TreePoint::on_edge(t.root, ValQ(0)), params),
                        BadInput);
        CHECK_THROWS_AS(pushforward_point(t, TreePoint::on_edge(9, ValQ(0)), params),
                        BadInput);
    }

    SUBCASE("two points and infinity: an empty skeleton maps to itself") {
        PointSet tiny = qset(2, {"5", "oo"}, {"5", "inf"});
        ClusterData tcd = compute_clusters(tiny);
        Pairing tp = pairing_from_clusters(tcd);
        MetricTree tt = hull_from_clusters(tcd, tp);
        PushforwardParams params{2, ValQ(1), false};
        MetricTree out = pushforward_hull(tt, params);
        CHECK(out.vertex_count() == 0);
        const std::vector<std::string> tiny_labels{"pi(5)", "pi(oo)"};
        CHECK(out.leaf_labels == tiny_labels);
        ClusterData pred = predict_branch_clusters(tiny, tp, params);
        CHECK(pred.clusters.empty());
        CHECK(check_branch_separation(out, params));
    }
}

TEST_CASE("random paired sets obey the dilation laws") {
    testing::Rng rng(73014509);
    int used = 0, tame = 0, wild = 0, law_pairs = 0, predicted = 0;
    for (int rep = 0; rep < 520 && used < 170; ++rep) {
        auto d = make_draw(rng, rep);
        const unsigned long p = (rng.uniform(0, 2) == 0) ? 2 : (rng.flip() ? 3 : 5);
        const long mult = rng.uniform(0, 2);
        if (!d) continue;
        PushforwardParams params{p, ValQ(mult * static_cast<long>(p - 1)), true};
        const ValQ r = params.radius();
        if (d->t.vertex_count() > 0 && !separated_check_vertices(d->t, r)) continue;
        ++used;
        (params.vp == ValQ(0) ? tame : wild)++;

        MetricTree tb = pushforward_hull(d->t, params);

        // shape is untouched, labels are pushed through pi(.)
        CHECK(tb.parent == d->t.parent);
        CHECK(tb.kind == d->t.kind);
        CHECK(tb.children == d->t.children);
        CHECK(tb.axes == d->t.axes);
        CHECK(tb.leaf_attach == d->t.leaf_attach);
        for (int l = 0; l < d->t.leaf_count(); ++l)
            CHECK(tb.leaf_labels[l] == "pi(" + d->t.leaf_labels[l] + ")");

        // every edge grows by (p - 1) times its sampled tubular measure
        for (int v = 0; v < d->t.vertex_count(); ++v) {
            if (v == d->t.root) continue;
            const mpq_class covered = mu_oracle(d->t, d->t.parent[v], v, r.rat());
            CHECK(tb.up_length[v] ==
                  d->t.up_length[v] + covered * mpq_class(params.p - 1));
        }

        // the pointwise dilation law on random skeleton points
        if (d->t.vertex_count() > 0) {
            for (int trial = 0; trial < 3; ++trial) {
                const TreePoint x = pick_point(rng, d->t);
                const TreePoint y = pick_point(rng, d->t);
                const ValQ lhs = distance(tb, pushforward_point(d->t, x, params),
                                          pushforward_point(d->t, y, params));
                CHECK(lhs == distance(d->t, x, y) +
                                 mu(d->t, x, y, r) * mpq_class(params.p - 1));
                ++law_pairs;
            }
        }

        // amplified separation of the image, and the closed-form depth laws
        CHECK(check_branch_separation(tb, params));
        if (d->ps.infinity_index >= 0) {
            ClusterData out = predict_branch_clusters(d->ps, d->P, params);
            ++predicted;
            REQUIRE(out.clusters.size() == d->cd.clusters.size());
            CHECK(out.root == d->cd.root);
            for (std::size_t c = 0; c < out.clusters.size(); ++c) {
                CHECK(out.clusters[c].members == d->cd.clusters[c].members);
                if (static_cast<int>(c) == d->cd.root) {
                    CHECK(out.clusters[c].depth == d->cd.clusters[c].depth);
                    continue;
                }
                const ValQ before = d->cd.rel_depth(static_cast<int>(c));
                const ValQ after = out.rel_depth(static_cast<int>(c));
                if (d->cd.clusters[c].members.size() % 2 == 1) {
                    CHECK(after == before * mpq_class(params.p));
                } else if (params.vp == ValQ(0)) {
                    CHECK(after == before);
                } else if (!d->cd.uebereven(static_cast<int>(c)) &&
                           !d->cd.uebereven(d->cd.clusters[c].parent)) {
                    CHECK(after == before + params.vp + params.vp);
                } else {
                    CHECK(after >= before); // no closed form; dilation never shrinks
                }
            }
        }
    }
    CHECK(used >= 170);
    CHECK(tame >= 40);
    CHECK(wild >= 40);
    CHECK(law_pairs >= 200);
    CHECK(predicted >= 40);
}
