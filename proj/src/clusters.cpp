#include "berkdil/clusters.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "berkdil/errors.hpp"

namespace berkdil {

namespace {

// --- small sorted-vector set helpers (members lists are sorted ascending) ---

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint_from(const std::vector<int>& a, const std::vector<int>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return false;
    }
    return true;
}

std::vector<int> complement_in(const std::vector<int>& all, const std::vector<int>& a) {
    std::vector<int> out;
    std::set_difference(all.begin(), all.end(), a.begin(), a.end(), std::back_inserter(out));
    return out;
}

struct Dsu {
    std::vector<int> up;
    explicit Dsu(int n) : up(n) {
        for (int i = 0; i < n; ++i) up[i] = i;
    }
    int find(int x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void unite(int x, int y) { up[find(x)] = find(y); }
};

void validate_pairing(const ClusterData& cd, const Pairing& P) {
    const int n = static_cast<int>(cd.labels.size());
    std::vector<char> seen(n, 0);
    for (const auto& pr : P.pairs)
        for (int x : pr) {
            if (x < 0 || x >= n)
                throw SizeMismatch("pairing refers to a label index outside the set");
            if (seen[x]++)
                throw SizeMismatch("pairing repeats the label '" + cd.labels[x] + "'");
        }
    if (2 * P.pairs.size() != cd.labels.size())
        throw SizeMismatch("pairing does not cover every label");
}

// ancestor chain attach-vertex .. root, as cluster indices
std::vector<int> chain_to_root(const ClusterData& cd, int c) {
    std::vector<int> out;
    for (; c != -1; c = cd.clusters[c].parent) out.push_back(c);
    return out;
}

// vertices of the path between two forest vertices (inclusive)
std::vector<int> forest_path(const ClusterData& cd, int u, int w) {
    const std::vector<int> a = chain_to_root(cd, u);
    const std::vector<int> b = chain_to_root(cd, w);
    std::set<int> in_b(b.begin(), b.end());
    std::vector<int> out;
    int lca = -1;
    for (int v : a) {
        if (in_b.count(v)) {
            lca = v;
            break;
        }
        out.push_back(v);
    }
    if (lca == -1)
        throw std::logic_error("cluster forest is not rooted at a common cluster");
    out.push_back(lca);
    for (int v : b) {
        if (v == lca) break;
        out.push_back(v);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------- PointSet

PointSet PointSet::make(unsigned long ell, std::vector<std::string> labels,
                        std::vector<ProjPoint> pts) {
    if (labels.size() != pts.size())
        throw SizeMismatch("labels and points differ in length");
    if (labels.empty()) throw TooFewPoints("the point set is empty");
    PointSet ps;
    ps.ell = ell;
    ps.labels = std::move(labels);
    ps.pts = std::move(pts);
    for (std::size_t i = 0; i < ps.labels.size(); ++i) {
        if (ps.labels[i].empty()) throw BadInput("labels", "labels must be nonempty");
        for (std::size_t j = 0; j < i; ++j)
            if (ps.labels[i] == ps.labels[j])
                throw BadInput("labels", "duplicate label '" + ps.labels[i] + "'");
    }
    for (std::size_t i = 0; i < ps.pts.size(); ++i) {
        if (ps.pts[i].is_infinity()) {
            if (ps.infinity_index >= 0)
                throw ValidationError("points '" + ps.labels[ps.infinity_index] + "' and '" +
                                      ps.labels[i] + "' coincide (both infinite)");
            ps.infinity_index = static_cast<int>(i);
        } else if (ps.pts[i].value().ell() != ell) {
            throw BadInput("points", "point '" + ps.labels[i] + "' lives over a different prime");
        }
    }
    for (std::size_t i = 0; i < ps.pts.size(); ++i) {
        if (ps.pts[i].is_infinity()) continue;
        for (std::size_t j = 0; j < i; ++j) {
            if (ps.pts[j].is_infinity()) continue;
            switch ((ps.pts[i].value() - ps.pts[j].value()).zeroness()) {
            case Zeroness::zero:
                throw ValidationError("points '" + ps.labels[j] + "' and '" + ps.labels[i] +
                                      "' coincide");
            case Zeroness::unknown:
                throw PrecisionExhausted("points '" + ps.labels[j] + "' and '" + ps.labels[i] +
                                         "' cannot be distinguished at the working precision");
            case Zeroness::nonzero:
                break;
            }
        }
    }
    return ps;
}

int PointSet::find_label(const std::string& l) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == l) return static_cast<int>(i);
    return -1;
}

// ------------------------------------------------------------- ClusterData

int ClusterData::n_finite() const {
    return static_cast<int>(labels.size()) - (infinity_index >= 0 ? 1 : 0);
}

bool ClusterData::uebereven(int c) const {
    const Cluster& cl = clusters.at(c);
    std::size_t covered = 0;
    for (int ch : cl.children) {
        if (clusters[ch].members.size() % 2 != 0) return false;
        covered += clusters[ch].members.size();
    }
    return covered == cl.members.size();
}

ValQ ClusterData::rel_depth(int c) const {
    const Cluster& cl = clusters.at(c);
    if (cl.parent < 0) throw std::logic_error("the root cluster has no relative depth");
    return cl.depth - clusters[cl.parent].depth;
}

bool ClusterData::contains(int c, int label_idx) const {
    const auto& m = clusters.at(c).members;
    return std::binary_search(m.begin(), m.end(), label_idx);
}

int ClusterData::attach(int label_idx) const {
    if (label_idx < 0 || label_idx >= static_cast<int>(labels.size()))
        throw std::logic_error("label index out of range");
    if (root < 0) throw std::logic_error("no clusters: attachment undefined");
    if (label_idx == infinity_index) return root;
    for (std::size_t c = 0; c < clusters.size(); ++c) // sorted by size: first hit is smallest
        if (contains(static_cast<int>(c), label_idx)) return static_cast<int>(c);
    throw std::logic_error("finite label missing from the root cluster");
}

std::vector<std::vector<std::string>> ClusterData::member_label_sets() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(clusters.size());
    for (const Cluster& c : clusters) {
        std::vector<std::string> s;
        s.reserve(c.members.size());
        for (int i : c.members) s.push_back(labels[i]);
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --------------------------------------------------------- cluster finding

ClusterData clusters_from_valuations(unsigned long ell, std::vector<std::string> labels,
                                     int infinity_index,
                                     const std::vector<std::vector<ValQ>>& vmat) {
    const int n = static_cast<int>(labels.size());
    if (vmat.size() != labels.size())
        throw SizeMismatch("valuation matrix does not match the label count");
    for (const auto& row : vmat)
        if (row.size() != labels.size())
            throw SizeMismatch("valuation matrix is not square");

    ClusterData cd;
    cd.ell = ell;
    cd.labels = std::move(labels);
    cd.infinity_index = infinity_index;

    std::vector<int> fin;
    for (int i = 0; i < n; ++i)
        if (i != infinity_index) fin.push_back(i);
    if (fin.size() < 2) return cd;

    std::set<ValQ> thresholds; // ValQ::operator< orders ascending, +inf last
    for (std::size_t a = 0; a < fin.size(); ++a)
        for (std::size_t b = a + 1; b < fin.size(); ++b) {
            const ValQ& v = vmat[fin[a]][fin[b]];
            if (v.is_infinity())
                throw ValidationError("points '" + cd.labels[fin[a]] + "' and '" +
                                      cd.labels[fin[b]] + "' coincide");
            thresholds.insert(v);
        }

    Dsu dsu(n);
    std::set<std::vector<int>> seen;
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        for (std::size_t a = 0; a < fin.size(); ++a)
            for (std::size_t b = a + 1; b < fin.size(); ++b)
                if (*it <= vmat[fin[a]][fin[b]]) dsu.unite(fin[a], fin[b]);
        std::map<int, std::vector<int>> comp;
        for (int i : fin) comp[dsu.find(i)].push_back(i);
        for (auto& [_, members] : comp) {
            if (members.size() < 2) continue;
            if (seen.insert(members).second)
                cd.clusters.push_back(Cluster{members, *it, -1, {}});
        }
    }

    std::sort(cd.clusters.begin(), cd.clusters.end(), [](const Cluster& x, const Cluster& y) {
        if (x.members.size() != y.members.size()) return x.members.size() < y.members.size();
        return x.members < y.members;
    });
    for (std::size_t c = 0; c < cd.clusters.size(); ++c)
        for (std::size_t d = c + 1; d < cd.clusters.size(); ++d)
            if (cd.clusters[d].members.size() > cd.clusters[c].members.size() &&
                subset_of(cd.clusters[c].members, cd.clusters[d].members)) {
                cd.clusters[c].parent = static_cast<int>(d);
                cd.clusters[d].children.push_back(static_cast<int>(c));
                break;
            }
    for (Cluster& c : cd.clusters)
        std::sort(c.children.begin(), c.children.end(), [&](int x, int y) {
            return cd.clusters[x].members.front() < cd.clusters[y].members.front();
        });
    cd.root = static_cast<int>(cd.clusters.size()) - 1;
    if (cd.clusters[cd.root].members.size() != fin.size())
        throw std::logic_error("threshold sweep did not terminate in the full set");
    return cd;
}

ClusterData compute_clusters(const PointSet& ps) {
    const int n = ps.size();
    std::vector<std::vector<ValQ>> vmat(n, std::vector<ValQ>(n, ValQ::infinity()));
    for (int i = 0; i < n; ++i) {
        if (ps.pts[i].is_infinity()) continue;
        for (int j = 0; j < i; ++j) {
            if (ps.pts[j].is_infinity()) continue;
            const ValQ v = (ps.pts[i].value() - ps.pts[j].value()).val();
            vmat[i][j] = v;
            vmat[j][i] = v;
        }
    }
    return clusters_from_valuations(ps.ell, ps.labels, ps.infinity_index, vmat);
}

// ----------------------------------------------------------------- pairing

int Pairing::pair_of(int label_idx) const {
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k][0] == label_idx || pairs[k][1] == label_idx) return static_cast<int>(k);
    return -1;
}

int Pairing::pair_containing_infinity(int infinity_index) const {
    if (infinity_index < 0) return -1;
    return pair_of(infinity_index);
}

Pairing pairing_from_clusters(const ClusterData& cd) {
    const int n = static_cast<int>(cd.labels.size());
    if (n % 2 != 0)
        throw NotClusteredInPairs("an odd number of points cannot fall into 2-blocks");

    // class of a point: the even clusters it lies in (infinity lies in none)
    std::map<std::vector<int>, std::vector<int>> classes;
    for (int i = 0; i < n; ++i) {
        std::vector<int> sig;
        if (i != cd.infinity_index)
            for (std::size_t c = 0; c < cd.clusters.size(); ++c)
                if (cd.even(static_cast<int>(c)) && cd.contains(static_cast<int>(c), i))
                    sig.push_back(static_cast<int>(c));
        classes[sig].push_back(i);
    }

    Pairing P;
    for (auto& [_, members] : classes) {
        if (members.size() != 2) {
            std::string who;
            for (int i : members) who += (who.empty() ? "'" : ", '") + cd.labels[i] + "'";
            throw NotClusteredInPairs("the points " + who +
                                      " lie in exactly the same even clusters");
        }
        int a = members[0], b = members[1]; // ascending, so infinity (if present)
        if (a == cd.infinity_index) std::swap(a, b); // never leads its pair by accident
        P.pairs.push_back({a, b});
    }
    std::sort(P.pairs.begin(), P.pairs.end(),
              [](const std::array<int, 2>& x, const std::array<int, 2>& y) {
                  return x[0] < y[0];
              });
    if (!clustered_in_pairs(cd, P))
        throw NotClusteredInPairs("the axes of the candidate 2-blocks are not disjoint");
    return P;
}

bool clustered_in_pairs(const ClusterData& cd, const Pairing& P) {
    validate_pairing(cd, P);
    if (cd.root < 0) return true; // at most one pair, nothing to collide with
    std::vector<int> owner(cd.clusters.size(), -1);
    for (std::size_t k = 0; k < P.pairs.size(); ++k)
        for (int v : forest_path(cd, cd.attach(P.pairs[k][0]), cd.attach(P.pairs[k][1]))) {
            if (owner[v] != -1) return false;
            owner[v] = static_cast<int>(k);
        }
    return true;
}

bool is_r_separated(const ClusterData& cd, const Pairing& P, const ValQ& r) {
    if (r < ValQ(0)) throw BadInput("r", "the separation radius must be nonnegative");
    if (!clustered_in_pairs(cd, P)) return false;
    if (cd.clusters.empty()) return true; // at most one finite point: no vertices
    const ValQ two_r = r + r;

    // Once the axes are disjoint, every vertex lies on at most one of them.
    // A cluster that is not a union of >= 2 even sub-clusters always lies on
    // exactly one axis (an odd cluster splits some pair, an even one is the
    // meet of some pair), and those are the vertices the tubular
    // neighborhoods are pinned to: the neighborhoods stay disjoint iff every
    // two such vertices on distinct axes are more than 2r apart.  Beware of
    // shortening the pairwise sweep to parent/sibling comparisons: a chain
    // of intervening uebereven clusters can hide the closest pair.
    std::vector<int> owner(cd.clusters.size(), -1);
    for (std::size_t k = 0; k < P.pairs.size(); ++k)
        for (int v : forest_path(cd, cd.attach(P.pairs[k][0]), cd.attach(P.pairs[k][1])))
            owner[v] = static_cast<int>(k);

    std::vector<int> pinned;
    for (std::size_t c = 0; c < cd.clusters.size(); ++c)
        if (!cd.uebereven(static_cast<int>(c))) pinned.push_back(static_cast<int>(c));

    std::vector<char> anc(cd.clusters.size(), 0);
    for (std::size_t x = 0; x < pinned.size(); ++x)
        for (std::size_t y = x + 1; y < pinned.size(); ++y) {
            const int c1 = pinned[x], c2 = pinned[y];
            if (owner[c1] != -1 && owner[c1] == owner[c2]) continue;
            anc.assign(anc.size(), 0);
            for (int a = c1; a != -1; a = cd.clusters[a].parent) anc[a] = 1;
            int meet = c2;
            while (!anc[meet]) meet = cd.clusters[meet].parent;
            const ValQ gap = (cd.clusters[c1].depth - cd.clusters[meet].depth) +
                             (cd.clusters[c2].depth - cd.clusters[meet].depth);
            if (!(gap > two_r)) return false;
        }
    return true;
}

// ------------------------------------------------------------------- genus

GenusResult genus_of_cover(unsigned long p, unsigned long npoints) {
    if (p < 2) throw BadInput("p", "the cover degree must be at least 2");
    mpq_class g(mpz_class(p - 1) * (mpz_class(npoints) - 2), 2);
    g.canonicalize();
    return GenusResult{g, g.get_den() == 1};
}

// --------------------------------------------------------------- transport

TransportResult mobius_transport(const PointSet& ps, const Mobius& m) {
    TransportResult out;
    std::vector<ProjPoint> img;
    img.reserve(ps.pts.size());
    for (const ProjPoint& z : ps.pts) img.push_back(m.apply(z));
    out.image = PointSet::make(ps.ell, ps.labels, std::move(img));
    out.transported = compute_clusters(out.image);

    try {
        const Zeroness cz = m.c.zeroness();
        if (cz == Zeroness::unknown) return out; // shape of the map undecidable

        const ClusterData base = compute_clusters(ps);
        std::vector<std::vector<int>> predicted;
        if (cz == Zeroness::zero) {
            // affine map: the finite combinatorics carry over verbatim
            for (const Cluster& c : base.clusters) predicted.push_back(c.members);
        } else {
            // m = affine . (1/z) . (c z + d); the reciprocal leg moves clusters
            // by the max-valuation rule, provided nothing touches 0 or infinity
            if (ps.has_infinity() || out.image.has_infinity()) return out;
            const int n = ps.size();
            std::vector<ValQ> vals;
            vals.reserve(n);
            for (int i = 0; i < n; ++i) vals.push_back((m.c * ps.pts[i].value() + m.d).val());
            ValQ top = vals[0];
            for (const ValQ& v : vals) top = max(top, v);
            std::vector<int> s, full;
            for (int i = 0; i < n; ++i) {
                full.push_back(i);
                if (vals[i] == top) s.push_back(i);
            }

            std::vector<std::vector<int>> family;
            for (const Cluster& c : base.clusters) family.push_back(c.members);
            for (int i = 0; i < n; ++i) family.push_back({i});
            for (const auto& S : family) {
                std::vector<int> image_set;
                if (disjoint_from(S, s) || (S.size() < s.size() && subset_of(S, s)))
                    image_set = S; // realized by a disc avoiding 0: carries over
                else if (subset_of(s, S))
                    image_set = complement_in(full, S); // cut by valuation: flips
                else
                    throw std::logic_error("max-valuation subset is not a cluster");
                if (image_set.size() >= 2) predicted.push_back(std::move(image_set));
            }
            // the top cluster itself survives when its depth exceeds the common
            // valuation of its members: some disc realizing it avoids 0 as well
            if (s.size() >= 2) {
                ValQ ds = ValQ::infinity();
                for (std::size_t a = 0; a < s.size(); ++a)
                    for (std::size_t b = a + 1; b < s.size(); ++b)
                        ds = min(ds, (m.c * (ps.pts[s[a]].value() - ps.pts[s[b]].value())).val());
                if (ds > top) predicted.push_back(s);
            }
            predicted.push_back(full);
        }
        std::sort(predicted.begin(), predicted.end());
        predicted.erase(std::unique(predicted.begin(), predicted.end()), predicted.end());

        std::vector<std::vector<int>> actual;
        for (const Cluster& c : out.transported.clusters) actual.push_back(c.members);
        std::sort(actual.begin(), actual.end());
        out.prediction_checked = true;
        out.prediction_matches = (predicted == actual);
    } catch (const PrecisionExhausted&) {
        out.prediction_checked = false; // undecidable at working precision; the
        out.prediction_matches = true;  // recomputed data above already stands
    }
    return out;
}

} // namespace berkdil
