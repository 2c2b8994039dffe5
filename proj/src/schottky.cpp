#include "berkdil/schottky.hpp"

#include <algorithm>

#include "berkdil/errors.hpp"

namespace berkdil {

namespace {

Scalar exact_scalar(unsigned long ell, long n) { return Scalar(ell, ExactQ(n)); }

// v(s) when determinate, the certified bound of a tracked zero, +inf on an
// exact zero.  Never throws: usable wherever a lower bound is enough.
ValQ lower_val(const Scalar& s) {
    if (s.exact()) return s.as_exact().val(s.ell());
    const PadicApprox& p = s.as_padic();
    if (p.is_exact_zero()) return ValQ::infinity();
    if (p.is_tracked_zero()) return ValQ(p.abs_precision());
    return p.val();
}

// v(s), insisting on a determinate answer (PrecisionExhausted otherwise).
ValQ exact_val(const Scalar& s) { return s.val(); }

// valuation of the difference of two projective points; +inf when both are
// the point at infinity, zero (no agreement) when exactly one is.
ValQ point_gap(const ProjPoint& x, const ProjPoint& y) {
    if (x.is_infinity() && y.is_infinity()) return ValQ::infinity();
    if (x.is_infinity() || y.is_infinity()) return ValQ(0);
    return lower_val(x.value() - y.value());
}

// Least distance between two distinct pair axes of the hull: both gates of
// the connecting geodesic are skeleton vertices lying on their axis, so the
// minimum over on-axis vertex pairs is exact.  +inf with fewer than two axes.
ValQ min_axis_gap(const MetricTree& t) {
    int naxes = static_cast<int>(t.axes.size());
    std::vector<std::vector<int>> on_axis(naxes);
    for (int l = 0; l < naxes; ++l)
        for (int v = 0; v < t.vertex_count(); ++v)
            if (distance_to_axis(t, TreePoint::at_vertex(v), l) == ValQ(0))
                on_axis[l].push_back(v);
    ValQ best = ValQ::infinity();
    for (int l = 0; l < naxes; ++l)
        for (int m = l + 1; m < naxes; ++m)
            for (int u : on_axis[l])
                for (int w : on_axis[m])
                    best = min(best,
                               distance(t, TreePoint::at_vertex(u), TreePoint::at_vertex(w)));
    return best;
}

// One factor (z - gamma(a)) / (z - gamma(b)), with an infinite orbit point
// (or an infinite z) dropping its side of the fraction.
struct FactorParts {
    Scalar num, den;
    bool zero_hit = false;
    bool pole_hit = false;
};

FactorParts factor_at(unsigned long ell, const ProjPoint& ga, const ProjPoint& gb,
                      const ProjPoint& z) {
    FactorParts f{exact_scalar(ell, 1), exact_scalar(ell, 1), false, false};
    if (z.is_infinity()) {
        f.zero_hit = ga.is_infinity();
        f.pole_hit = gb.is_infinity();
        return f;
    }
    if (!ga.is_infinity()) {
        Scalar d = z.value() - ga.value();
        switch (scalar_zeroness(d)) {
            case Zeroness::zero: f.zero_hit = true; break;
            case Zeroness::unknown:
                throw PrecisionExhausted(
                    "theta: cannot tell the point apart from a zero of the product");
            case Zeroness::nonzero: f.num = d; break;
        }
    }
    if (!gb.is_infinity()) {
        Scalar d = z.value() - gb.value();
        switch (scalar_zeroness(d)) {
            case Zeroness::zero: f.pole_hit = true; break;
            case Zeroness::unknown:
                throw PrecisionExhausted(
                    "theta: cannot tell the point apart from a pole of the product");
            case Zeroness::nonzero: f.den = d; break;
        }
    }
    return f;
}

// tail floor ingredients shared by theta and the branch-point scan
struct TailParts {
    ValQ boundary = ValQ::infinity(); // min v(term - 1) over the outermost shell
    ValQ length = ValQ::infinity();   // (L+1) * (axis_gap - 2 * radius)
    bool complete = false;            // the enumeration exhausted the group
    ValQ floor() const {
        if (complete) return ValQ::infinity();
        if (boundary.is_infinity()) return length;
        return min(boundary, length);
    }
};

ValQ hat_gap(const WhittakerGroup& G) {
    return G.axis_gap - G.radius() * mpq_class(2);
}

} // namespace

ValQ WhittakerGroup::radius() const { return vp / (p - 1); }

WhittakerGroup make_whittaker_group(const PointSet& S, const Pairing& P, unsigned long p,
                                    long prec, bool optimal) {
    if (p < 2) throw BadInput("p", "the covering degree must be at least 2");
    if (p != 2 && prec < 1)
        throw BadInput("precision",
                       "odd p needs at least one relative digit for the root of unity");
    std::vector<int> seen(S.size(), 0);
    for (const auto& pr : P.pairs)
        for (int ix : pr) {
            if (ix < 0 || ix >= S.size())
                throw BadInput("pairing", "label index out of range");
            ++seen[ix];
        }
    for (int c : seen)
        if (c != 1) throw BadInput("pairing", "the pairs must partition the labels");

    WhittakerGroup G;
    G.p = p;
    G.ell = S.ell;
    G.vp = (S.ell == p) ? ValQ(1) : ValQ(0);

    ClusterData cd = compute_clusters(S);
    if (!clustered_in_pairs(cd, P))
        throw NotClusteredInPairs("the axes of the pairing are not pairwise disjoint");
    ValQ r = G.vp / (p - 1);
    if (!is_r_separated(cd, P, r))
        throw NotSeparated("the axes are not " + r.str() + "-separated");
    if (!optimal && S.size() > 4)
        throw OptimalityNotAsserted(
            "the group construction requires an optimal configuration; "
            "sets of more than four points need the optimality assertion");

    G.zeta = (p == 2) ? exact_scalar(S.ell, -1) : hensel_root_of_unity(p, S.ell, prec);
    for (const auto& pr : P.pairs) {
        const ProjPoint& a = S.pts[pr[0]];
        const ProjPoint& b = S.pts[pr[1]];
        G.fixed_pairs.push_back({a, b});
        G.generators.push_back(order_p_fixing(a, b, p, G.zeta));
    }
    G.axis_gap = min_axis_gap(hull_from_clusters(cd, P));
    return G;
}

long ReducedWord::total_exponent() const {
    long t = 0;
    for (const auto& s : syllables) t += s[1];
    return t;
}

std::string ReducedWord::str() const {
    if (syllables.empty()) return "e";
    std::string out;
    for (const auto& s : syllables) {
        if (!out.empty()) out += ' ';
        out += "s" + std::to_string(s[0]);
        if (s[1] != 1) out += "^" + std::to_string(s[1]);
    }
    return out;
}

std::vector<ReducedWord> enumerate_words(const WhittakerGroup& G, int L, WordFilter filter) {
    if (L < 0) throw BadInput("max_words", "the truncation length cannot be negative");
    int ng = static_cast<int>(G.generators.size());
    int top = static_cast<int>(G.p) - 1;
    std::vector<ReducedWord> out{ReducedWord{}};
    std::vector<ReducedWord> cur{ReducedWord{}};
    for (int t = 1; t <= L && !cur.empty(); ++t) {
        std::vector<ReducedWord> next;
        for (const auto& w : cur)
            for (int i = 0; i < ng; ++i) {
                if (!w.syllables.empty() && w.syllables.back()[0] == i) continue;
                for (int n = 1; n <= top; ++n) {
                    ReducedWord e = w;
                    e.syllables.push_back({i, n});
                    next.push_back(std::move(e));
                }
            }
        cur = std::move(next);
        out.insert(out.end(), cur.begin(), cur.end());
    }
    if (filter == WordFilter::GAMMA) {
        std::vector<ReducedWord> kept;
        for (auto& w : out)
            if (w.total_exponent() % static_cast<long>(G.p) == 0) kept.push_back(std::move(w));
        out = std::move(kept);
    }
    return out;
}

Mobius word_element(const WhittakerGroup& G, const ReducedWord& w) {
    Mobius m = Mobius::identity(G.ell);
    for (const auto& s : w.syllables) {
        if (s[0] < 0 || s[0] >= static_cast<int>(G.generators.size()))
            throw BadInput("word", "generator index out of range");
        m = m.compose(G.generators[s[0]].pow(static_cast<unsigned long>(s[1])));
    }
    return m;
}

ThetaResult theta(const WhittakerGroup& G, Subgroup sub, const ProjPoint& a,
                  const ProjPoint& b, const ProjPoint& z, int L) {
    if (proj_point_equal(a, b, G.ell))
        throw BadInput("pair", "the zero and the pole of the product coincide");
    WordFilter filter = (sub == Subgroup::GAMMA) ? WordFilter::GAMMA : WordFilter::ALL;
    std::vector<ReducedWord> words = enumerate_words(G, L, filter);

    int shell = words.back().length(); // outermost length present
    Scalar prod = exact_scalar(G.ell, 1);
    bool zero_hit = false, pole_hit = false, pole_at_identity = false;
    std::string pole_word;
    TailParts tail;
    for (const ReducedWord& w : words) {
        Mobius m = word_element(G, w);
        FactorParts f = factor_at(G.ell, m.apply(a), m.apply(b), z);
        if (f.zero_hit) zero_hit = true;
        if (f.pole_hit) {
            pole_hit = true;
            if (w.length() == 0) pole_at_identity = true;
            else if (pole_word.empty()) pole_word = w.str();
        }
        if (zero_hit || pole_hit) continue;
        prod = prod * f.num / f.den;
        if (w.length() == shell && shell > 0)
            tail.boundary = min(tail.boundary, lower_val((f.num - f.den) / f.den));
    }
    if (zero_hit && pole_hit)
        throw BadInput("pair", "the point lies on both the zero and the pole orbit");
    if (pole_hit && !pole_at_identity)
        throw PoleHit("the point meets the pole orbit at the word " + pole_word);

    ThetaResult out;
    out.truncation_length = L;
    out.words = static_cast<long>(words.size());
    if (zero_hit) {
        out.value = ProjPoint::finite(exact_scalar(G.ell, 0));
        return out; // the truncation is exact; floors stay infinite
    }
    if (pole_hit) {
        out.value = ProjPoint::infinity();
        return out;
    }
    out.value = ProjPoint::finite(prod);
    tail.complete = (G.genus() == 0) && (filter == WordFilter::GAMMA || L >= 1);
    if (!tail.complete) tail.length = hat_gap(G) * mpq_class(L + 1);
    out.boundary_floor = tail.boundary;
    out.length_floor = tail.length;
    out.tail_floor = tail.floor();
    return out;
}

ThetaConsistency theta_gamma0_consistency(const WhittakerGroup& G, const ProjPoint& a,
                                          const ProjPoint& b, const ProjPoint& z, int L) {
    int idx = -1;
    for (size_t i = 0; i < G.fixed_pairs.size(); ++i) {
        bool fwd = proj_point_equal(G.fixed_pairs[i][0], a, G.ell) &&
                   proj_point_equal(G.fixed_pairs[i][1], b, G.ell);
        bool rev = proj_point_equal(G.fixed_pairs[i][0], b, G.ell) &&
                   proj_point_equal(G.fixed_pairs[i][1], a, G.ell);
        if (fwd || rev) { // the generator fixes both ends, either orientation works
            idx = static_cast<int>(i);
            break;
        }
    }
    if (idx < 0)
        throw BadInput("pair", "{a, b} must be one of the generator fixed pairs");

    ThetaConsistency rep;
    rep.pair_index = idx;
    rep.direct = theta(G, Subgroup::GAMMA0, a, b, z, L);
    rep.base = theta(G, Subgroup::GAMMA, a, b, z, L);
    rep.power = rep.base.value.is_infinity()
                    ? ProjPoint::infinity()
                    : ProjPoint::finite(rep.base.value.value().pow(G.p));
    rep.floor = min(rep.direct.tail_floor, rep.base.tail_floor);
    rep.discrepancy = point_gap(rep.direct.value, rep.power);
    rep.consistent = rep.discrepancy > rep.floor;

    // The subgroup words extended by the powers of the matched generator
    // repeat each factor p times (the generator fixes a and b), so this
    // product must reproduce the p-th power on the nose -- a check that the
    // generators really fix their pairs, run through actual matrix products.
    std::vector<ReducedWord> gwords = enumerate_words(G, L, WordFilter::GAMMA);
    Scalar mprod = exact_scalar(G.ell, 1);
    bool mzero = false, mpole = false;
    for (const ReducedWord& w : gwords) {
        Mobius m = word_element(G, w);
        for (unsigned long n = 0; n < G.p; ++n) {
            Mobius e = (n == 0) ? m : m.compose(G.generators[idx].pow(n));
            FactorParts f = factor_at(G.ell, e.apply(a), e.apply(b), z);
            mzero = mzero || f.zero_hit;
            mpole = mpole || f.pole_hit;
            if (mzero || mpole) continue;
            mprod = mprod * f.num / f.den;
        }
    }
    ProjPoint matched = mzero ? ProjPoint::finite(exact_scalar(G.ell, 0))
                              : (mpole ? ProjPoint::infinity() : ProjPoint::finite(mprod));
    rep.matched_discrepancy = point_gap(matched, rep.power);

    // the truncation error at z has valuation >= v(value) + tail floor
    auto error_floor = [](const ThetaResult& t) {
        if (t.value.is_infinity()) return ValQ::infinity();
        return lower_val(t.value.value()) + t.tail_floor;
    };
    for (const Mobius& s : G.generators) {
        try {
            ThetaResult moved = theta(G, Subgroup::GAMMA0, a, b, s.apply(z), L);
            rep.invariance.push_back(point_gap(moved.value, rep.direct.value));
            rep.invariance_floor.push_back(min(error_floor(rep.direct), error_floor(moved)));
        } catch (const PoleHit&) {
            // s moves a pole of the product to another pole of the product
            if (!rep.direct.value.is_infinity()) throw;
            rep.invariance.push_back(ValQ::infinity());
            rep.invariance_floor.push_back(ValQ::infinity());
        }
    }
    for (size_t j = 0; j < rep.invariance.size(); ++j)
        rep.consistent = rep.consistent && rep.invariance[j] >= rep.invariance_floor[j];
    return rep;
}

BranchPoints branch_points_numeric(const PointSet& S, const Pairing& P,
                                   const WhittakerGroup& G, int max_length,
                                   int pair_index) {
    if (pair_index < 0) {
        pair_index = 0;
        for (size_t i = 0; i < P.pairs.size(); ++i)
            if (S.pts[P.pairs[i][0]].is_infinity() || S.pts[P.pairs[i][1]].is_infinity()) {
                pair_index = static_cast<int>(i);
                break;
            }
    }
    if (pair_index >= static_cast<int>(P.pairs.size()))
        throw BadInput("pair_index", "no such pair");
    if (max_length < 1)
        throw BadInput("max_words", "the length cap must be at least 1");
    if (G.fixed_pairs.size() != P.pairs.size())
        throw SizeMismatch("the group has " + std::to_string(G.fixed_pairs.size()) +
                           " generators but the pairing has " +
                           std::to_string(P.pairs.size()) + " pairs");
    for (size_t i = 0; i < P.pairs.size(); ++i)
        if (!proj_point_equal(G.fixed_pairs[i][0], S.pts[P.pairs[i][0]], G.ell) ||
            !proj_point_equal(G.fixed_pairs[i][1], S.pts[P.pairs[i][1]], G.ell))
            throw BadInput("pairing", "the group's fixed pairs do not match the configuration");

    // keep infinity at infinity whenever the normalizing pair contains it
    ProjPoint a = S.pts[P.pairs[pair_index][0]];
    ProjPoint b = S.pts[P.pairs[pair_index][1]];
    if (a.is_infinity()) std::swap(a, b);

    // orbit of (a, b), extended shell by shell as the truncation grows; the
    // enumeration is stable under a larger cap, so earlier words keep their
    // indices and only the new shell costs anything
    std::vector<ReducedWord> words;
    std::vector<ProjPoint> ga, gb;
    auto extend_orbit = [&](int L) {
        std::vector<ReducedWord> upto = enumerate_words(G, L, WordFilter::ALL);
        for (size_t i = words.size(); i < upto.size(); ++i) {
            Mobius m = word_element(G, upto[i]);
            ga.push_back(m.apply(a));
            gb.push_back(m.apply(b));
            words.push_back(upto[i]);
        }
    };

    std::vector<std::string> out_labels;
    for (const std::string& l : S.labels) out_labels.push_back("pi(" + l + ")");

    int n = S.size();
    std::vector<Scalar> prod(n, exact_scalar(G.ell, 1));
    std::vector<char> zero_hit(n, 0), pole_hit(n, 0);
    BranchPoints res;
    std::vector<std::vector<std::string>> prev_shape;
    std::vector<ValQ> prev_depths;
    bool have_prev = false;

    size_t next_word = 0;
    for (int L = 1; L <= max_length; ++L) {
        extend_orbit(L);
        ValQ shell_min = ValQ::infinity();
        int shell_len = 0;
        while (next_word < words.size() && words[next_word].length() <= L) {
            const ReducedWord& w = words[next_word];
            for (int s = 0; s < n; ++s) {
                FactorParts f = factor_at(G.ell, ga[next_word], gb[next_word], S.pts[s]);
                if (f.zero_hit) zero_hit[s] = 1;
                if (f.pole_hit) {
                    // the identity pole is the normalization b -> infinity; any
                    // later hit on the same point (b fixed by a generator) is
                    // the same pole, but a fresh pole elsewhere is fatal
                    if (w.length() > 0 && !pole_hit[s])
                        throw PoleHit("the point '" + S.labels[s] +
                                      "' meets the pole orbit at the word " + w.str());
                    pole_hit[s] = 1;
                }
                if (zero_hit[s] || pole_hit[s]) continue;
                prod[s] = prod[s] * f.num / f.den;
                if (w.length() > shell_len) {
                    shell_len = w.length();
                    shell_min = ValQ::infinity();
                }
                if (w.length() == shell_len)
                    shell_min = min(shell_min, lower_val((f.num - f.den) / f.den));
            }
            ++next_word;
        }
        TailParts tail;
        tail.boundary = shell_min;
        tail.complete = (G.genus() == 0);
        if (!tail.complete) tail.length = hat_gap(G) * mpq_class(L + 1);
        ValQ floor = tail.floor();

        std::vector<ProjPoint> values;
        for (int s = 0; s < n; ++s) {
            if (zero_hit[s]) values.push_back(ProjPoint::finite(exact_scalar(G.ell, 0)));
            else if (pole_hit[s]) values.push_back(ProjPoint::infinity());
            else values.push_back(ProjPoint::finite(prod[s]));
        }

        std::string line = "L=" + std::to_string(L) + ": floor=" + floor.str();
        try {
            PointSet img = PointSet::make(G.ell, out_labels, values);
            ClusterData cd = compute_clusters(img);
            ValQ max_pair{0};
            bool any_pair = false;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (values[i].is_infinity() || values[j].is_infinity()) continue;
                    ValQ v = exact_val(values[i].value() - values[j].value());
                    max_pair = any_pair ? max(max_pair, v) : v;
                    any_pair = true;
                }
            std::vector<std::vector<std::string>> shape = cd.member_label_sets();
            std::vector<ValQ> depths;
            for (size_t c = 0; c < cd.clusters.size(); ++c)
                if (static_cast<int>(c) != cd.root) depths.push_back(cd.rel_depth(c));

            line += " clusters=" + std::to_string(cd.clusters.size()) +
                    " max_pairwise=" + (any_pair ? max_pair.str() : "none");
            bool stable = have_prev && shape == prev_shape && depths == prev_depths;
            bool certified = tail.complete || (any_pair && max_pair < floor) || !any_pair;
            if ((stable || tail.complete) && certified) {
                res.log.push_back(line + " (stable)");
                res.points = img;
                res.clusters = cd;
                res.used_length = L;
                res.tail_floor = floor;
                return res;
            }
            prev_shape = std::move(shape);
            prev_depths = std::move(depths);
            have_prev = true;
        } catch (const ValidationError& e) {
            // transient collision of images at a short truncation
            line += " unresolved (" + std::string(e.what()) + ")";
            have_prev = false;
        }
        res.log.push_back(line);
    }
    std::string why = "branch points did not stabilize by word length " +
                      std::to_string(max_length);
    for (const std::string& l : res.log) why += "\n  " + l;
    throw NonConvergence(why);
}

namespace {

// dense polynomial in w = z - 1, low degree first
using Poly = std::vector<Scalar>;

Poly poly_mul(unsigned long ell, const Poly& f, const Poly& g) {
    Poly h(f.size() + g.size() - 1, exact_scalar(ell, 0));
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) h[i + j] = h[i + j] + f[i] * g[j];
    return h;
}

Poly poly_sub(unsigned long ell, const Poly& f, const Poly& g) {
    Poly h(std::max(f.size(), g.size()), exact_scalar(ell, 0));
    for (size_t i = 0; i < h.size(); ++i) {
        if (i < f.size()) h[i] = h[i] + f[i];
        if (i < g.size()) h[i] = h[i] - g[i];
    }
    return h;
}

// Valuation of a polynomial at the generic point of the disc of logarithmic
// radius d around the expansion center: min_k v(c_k) + k*d.  Exact for every
// rational d; +inf only for the zero polynomial.  PrecisionExhausted when a
// tracked-zero coefficient could undercut the determinate minimum.
ValQ gauss_val(const Poly& f, const ValQ& d) {
    ValQ best = ValQ::infinity();
    for (size_t k = 0; k < f.size(); ++k) {
        const Scalar& c = f[k];
        if (!c.exact() && c.as_padic().is_tracked_zero()) continue;
        ValQ v = lower_val(c);
        if (v.is_infinity()) continue;
        best = min(best, v + d * mpq_class(static_cast<unsigned long>(k)));
    }
    for (size_t k = 0; k < f.size(); ++k) {
        const Scalar& c = f[k];
        if (c.exact() || !c.as_padic().is_tracked_zero()) continue;
        ValQ bound = ValQ(c.as_padic().abs_precision()) +
                     d * mpq_class(static_cast<unsigned long>(k));
        if (bound < best)
            throw PrecisionExhausted(
                "disc valuation: a coefficient known only to " + bound.str() +
                " could undercut the minimum " + best.str());
    }
    return best;
}

// numerator / denominator of a truncated product, as polynomials in z - 1
struct RatioPolys {
    Poly num, den;
    std::vector<std::array<Poly, 2>> shell; // per-word factors on the boundary
};

RatioPolys product_polys(const WhittakerGroup& G, const std::vector<ReducedWord>& words,
                         const ProjPoint& a, const ProjPoint& b) {
    RatioPolys rp;
    rp.num = {exact_scalar(G.ell, 1)};
    rp.den = {exact_scalar(G.ell, 1)};
    int shell_len = words.back().length();
    Scalar one = exact_scalar(G.ell, 1);
    for (const ReducedWord& w : words) {
        Mobius m = word_element(G, w);
        ProjPoint ga = m.apply(a), gb = m.apply(b);
        Poly fn{one}, fd{one};
        if (!ga.is_infinity()) fn = {one - ga.value(), one}; // (z-1) + (1 - ga)
        if (!gb.is_infinity()) fd = {one - gb.value(), one};
        rp.num = poly_mul(G.ell, rp.num, fn);
        rp.den = poly_mul(G.ell, rp.den, fd);
        if (w.length() == shell_len && shell_len > 0) rp.shell.push_back({fn, fd});
    }
    return rp;
}

// v at the generic point of the radius-d disc of (product - 1)
ValQ generic_drop(unsigned long ell, const RatioPolys& rp, const ValQ& d) {
    return gauss_val(poly_sub(ell, rp.num, rp.den), d) - gauss_val(rp.den, d);
}

ValQ shell_floor_at(unsigned long ell, const RatioPolys& rp, const ValQ& d) {
    ValQ best = ValQ::infinity();
    for (const auto& f : rp.shell)
        best = min(best, gauss_val(poly_sub(ell, f[0], f[1]), d) - gauss_val(f[1], d));
    return best;
}

bool is_integer(const ValQ& v) {
    return !v.is_infinity() && v.rat().get_den() == 1;
}

} // namespace

SegmentReport check_segment_formulas(const PointSet& S, const Pairing& P,
                                     const WhittakerGroup& G, const std::vector<ValQ>& ds,
                                     int L) {
    SegmentReport rep;
    Scalar one = exact_scalar(G.ell, 1);

    // the normalized frame: a pair {0, infinity} and a pair containing 1
    int zero_idx = -1, one_idx = -1, inf_idx = S.infinity_index;
    for (int i = 0; i < S.size(); ++i) {
        if (S.pts[i].is_infinity()) continue;
        if (scalar_zeroness(S.pts[i].value()) == Zeroness::zero) zero_idx = i;
        if (scalar_zeroness(S.pts[i].value() - one) == Zeroness::zero) one_idx = i;
    }
    if (zero_idx < 0 || inf_idx < 0 || P.pair_of(zero_idx) < 0 ||
        P.pair_of(zero_idx) != P.pair_of(inf_idx))
        throw HypothesesUnmet("need a pair equal to {0, infinity}");
    rep.axis_pair = P.pair_of(zero_idx);
    if (one_idx < 0 || P.pair_of(one_idx) < 0 || P.pair_of(one_idx) == rep.axis_pair)
        throw HypothesesUnmet("need a second pair containing the point 1");
    rep.unit_pair = P.pair_of(one_idx);
    int partner_idx = P.pairs[rep.unit_pair][0] == one_idx ? P.pairs[rep.unit_pair][1]
                                                           : P.pairs[rep.unit_pair][0];
    const ProjPoint& a_pt = S.pts[partner_idx];  // the zero of the product
    const ProjPoint& b_pt = S.pts[one_idx];      // the pole, normalized to 1
    Scalar lambda = a_pt.value() - one;
    rep.v_p = G.vp;
    rep.v_lambda = exact_val(lambda);
    ValQ r = G.radius();
    rep.break_low = r;
    rep.break_high = rep.v_lambda - r;

    // the integral disc must be a cluster boundary through 0, not uebereven
    ClusterData cd = compute_clusters(S);
    if (cd.root < 0) throw HypothesesUnmet("too few finite points");
    int c0 = -1;
    for (int c = cd.attach(zero_idx); c >= 0; c = cd.clusters[c].parent)
        if (cd.clusters[c].depth == ValQ(0)) {
            c0 = c;
            break;
        }
    if (c0 < 0 || cd.uebereven(c0))
        throw HypothesesUnmet("the points at integral distance from 0 must form a "
                              "non-uebereven cluster of depth 0");
    // the unit pair's meet must sit exactly at depth v(lambda), not uebereven
    int ci = cd.attach(one_idx);
    while (ci >= 0 && !cd.contains(ci, partner_idx)) ci = cd.clusters[ci].parent;
    if (ci < 0 || cd.clusters[ci].depth != rep.v_lambda || cd.uebereven(ci))
        throw HypothesesUnmet("the pair through 1 must meet in a non-uebereven cluster "
                              "at depth " + rep.v_lambda.str());
    // the connecting path must clear every other pair's tube
    MetricTree t = hull_from_clusters(cd, P);
    std::vector<int> up_i, up_j;
    for (int v = ci; v >= 0; v = t.parent[v]) up_i.push_back(v);
    for (int v = c0; v >= 0; v = t.parent[v]) up_j.push_back(v);
    std::vector<int> path;
    for (int v : up_i) {
        path.push_back(v);
        if (std::find(up_j.begin(), up_j.end(), v) != up_j.end()) break;
    }
    for (int v : up_j) {
        if (std::find(path.begin(), path.end(), v) != path.end()) break;
        path.push_back(v);
    }
    for (int v : path)
        for (int l = 0; l < static_cast<int>(P.pairs.size()); ++l) {
            if (l == rep.axis_pair || l == rep.unit_pair) continue;
            if (!(distance_to_axis(t, TreePoint::at_vertex(v), l) > r))
                throw HypothesesUnmet(
                    "the segment passes through the tube of pair " + std::to_string(l));
        }

    std::vector<ReducedWord> gamma_words = enumerate_words(G, L, WordFilter::GAMMA);
    std::vector<ReducedWord> all_words = enumerate_words(G, L, WordFilter::ALL);
    RatioPolys base = product_polys(G, gamma_words, a_pt, b_pt);
    RatioPolys full = product_polys(G, all_words, a_pt, b_pt);
    ValQ length_floor = hat_gap(G) * mpq_class(L + 1);

    // branch formulas agree where they meet (identities in v_p, v_lambda)
    auto base_at = [&](const ValQ& d) {
        return d <= r ? rep.v_p + rep.v_lambda - d * mpq_class(G.p)
                      : rep.v_lambda - d;
    };
    auto full_at = [&](const ValQ& d) {
        if (d <= r) return rep.v_p + rep.v_p + rep.v_lambda - d * mpq_class(G.p);
        if (d <= rep.break_high) return rep.v_p + rep.v_lambda - d;
        return (rep.v_lambda - d) * mpq_class(G.p);
    };
    rep.breakpoints_consistent =
        rep.v_p + rep.v_lambda - r * mpq_class(G.p) == rep.v_lambda - r &&
        rep.v_p + rep.v_lambda - rep.break_high == (rep.v_lambda - rep.break_high) * mpq_class(G.p);

    // value at 0 (certified only past the tail floor)
    ThetaResult at0 = theta(G, Subgroup::GAMMA, a_pt, b_pt,
                            ProjPoint::finite(exact_scalar(G.ell, 0)), L);
    ThetaResult at0f = theta(G, Subgroup::GAMMA0, a_pt, b_pt,
                             ProjPoint::finite(exact_scalar(G.ell, 0)), L);
    rep.at_zero = exact_val(at0.value.value() - one);
    rep.full_at_zero = exact_val(at0f.value.value() - one);
    if (!(at0.tail_floor > rep.at_zero) || !(at0f.tail_floor > rep.full_at_zero))
        throw PrecisionExhausted("segment check at 0: tail floor " +
                                 min(at0.tail_floor, at0f.tail_floor).str() +
                                 " does not clear the observed valuation; raise the length");
    bool all_ok = rep.breakpoints_consistent &&
                  rep.at_zero == rep.v_p + rep.v_lambda &&
                  rep.full_at_zero == rep.v_p + rep.v_p + rep.v_lambda;

    for (const ValQ& d : ds) {
        if (d.is_infinity()) throw BadInput("samples", "the radii must be finite");
        SegmentSample smp;
        smp.d = d;
        smp.base_expected = base_at(d);
        smp.full_expected = full_at(d);
        smp.base_observed = generic_drop(G.ell, base, d);
        smp.full_observed = generic_drop(G.ell, full, d);
        smp.tail_floor = min(min(shell_floor_at(G.ell, base, d), shell_floor_at(G.ell, full, d)),
                             length_floor);
        ValQ need = max(max(smp.base_expected, smp.base_observed),
                        max(smp.full_expected, smp.full_observed));
        if (!(smp.tail_floor > need))
            throw PrecisionExhausted("segment check at d=" + d.str() + ": tail floor " +
                                     smp.tail_floor.str() + " does not clear " + need.str() +
                                     "; raise the length");
        smp.ok = smp.base_observed == smp.base_expected &&
                 smp.full_observed == smp.full_expected;

        if (is_integer(d)) {
            // a rational point at distance d from 1: residue-generic when the
            // base field admits one at this radius, and never so close to the
            // limit set that the boundary terms sink below the main term
            long dl = d.rat().get_num().get_si();
            mpq_class step = 1;
            for (long i = 0; i < (dl >= 0 ? dl : -dl); ++i)
                step *= static_cast<long>(G.ell);
            if (dl < 0) step = 1 / step;
            ValQ generic_target = min(d * mpq_class(G.p), rep.v_p + d);
            bool have = false;
            Scalar best = one;
            ThetaResult best_th;
            ValQ best_main, best_v1ap;
            for (unsigned long u = 1; u <= 6 * G.ell; ++u) {
                if (u % G.ell == 0) continue;
                Scalar cand(G.ell, ExactQ(mpq_class(1 + mpq_class(u) * step)));
                bool clash = false;
                for (int i = 0; i < S.size(); ++i)
                    if (!S.pts[i].is_infinity() &&
                        scalar_zeroness(S.pts[i].value() - cand) == Zeroness::zero)
                        clash = true;
                if (clash) continue;
                ValQ v1ap, main;
                ThetaResult th;
                try {
                    v1ap = exact_val(one - cand.pow(G.p));
                    th = theta(G, Subgroup::GAMMA, a_pt, b_pt, ProjPoint::finite(cand), L);
                    main = exact_val(th.value.value() - one);
                } catch (const PoleHit&) {
                    continue;
                } catch (const PrecisionExhausted&) {
                    continue;
                }
                if (!(th.tail_floor > main)) continue; // uncertified at this length
                bool generic = v1ap == generic_target;
                if (!have || (generic && !smp.point_generic)) {
                    have = true;
                    best = cand;
                    best_th = th;
                    best_main = main;
                    best_v1ap = v1ap;
                    smp.point_generic = generic;
                }
                if (smp.point_generic) break;
            }
            if (have) {
                smp.point_checked = true;
                smp.point = best;
                smp.point_main = best_main;
                Scalar diff = best_th.value.value() - one;
                bool point_ok = smp.point_main == rep.v_p + rep.v_lambda - best_v1ap;
                Scalar main_first = Scalar(G.ell, ExactQ(static_cast<long>(G.p))) * lambda /
                                    (one - best.pow(G.p));
                smp.residual_first = lower_val(diff - main_first);
                point_ok = point_ok && smp.residual_first > smp.point_main;
                if (d > r) {
                    Scalar main_second = lambda / (one - best);
                    smp.residual_second = lower_val(diff - main_second);
                    point_ok = point_ok && smp.residual_second > smp.point_main;
                }
                smp.ok = smp.ok && point_ok;
            }
        }
        all_ok = all_ok && smp.ok;
        rep.samples.push_back(std::move(smp));
    }
    rep.all_ok = all_ok;
    return rep;
}

} // namespace berkdil
