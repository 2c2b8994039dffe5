#pragma once

#include <array>
#include <string>
#include <vector>

#include "berkdil/berktree.hpp"
#include "berkdil/clusters.hpp"
#include "berkdil/projline.hpp"

namespace berkdil {

/**
 * Free product of g+1 cyclic groups of prime order p acting on the projective
 * line: generator s_i has order p and fixes exactly the pair (a_i, b_i), all
 * sharing one multiplier zeta (a primitive p-th root of unity).  Immutable
 * after construction; safe to share across threads.
 */
struct WhittakerGroup {
    unsigned long p = 2;
    unsigned long ell = 2;
    std::vector<Mobius> generators;                    // s_0 .. s_g
    std::vector<std::array<ProjPoint, 2>> fixed_pairs; // (a_i, b_i) per generator
    Scalar zeta;
    ValQ vp{0};                       // valuation of p in the base field
    ValQ axis_gap = ValQ::infinity(); // least distance between two pair axes

    int genus() const { return static_cast<int>(generators.size()) - 1; }
    // radius of the tubular neighborhoods the pairing must keep disjoint
    ValQ radius() const;
};

/**
 * Build the group of a paired configuration: one order-p generator per pair
 * of P, in pair order, via order_p_fixing with a shared root of unity (the
 * exact value -1 for p = 2, Hensel-lifted to `prec` relative digits for odd
 * p, which restricts odd p to ell = 1 mod p).  The configuration must be
 * clustered in v(p)/(p-1)-separated pairs, and more than four points
 * additionally need the optimality assertion, as in pushforward_hull.
 */
WhittakerGroup make_whittaker_group(const PointSet& S, const Pairing& P, unsigned long p,
                                    long prec = 0, bool optimal = false);

/**
 * Reduced word on the generators: syllables s_i^n with exponents in
 * {1, .., p-1} and adjacent generator indices distinct.  The empty word is
 * the identity.  The first syllable is the outermost factor (it acts last).
 */
struct ReducedWord {
    std::vector<std::array<int, 2>> syllables; // (generator index, exponent)

    int length() const { return static_cast<int>(syllables.size()); }
    long total_exponent() const;
    std::string str() const; // "e", "s0", "s1^2 s0", ..
};

enum class WordFilter { ALL, GAMMA };

/**
 * Every reduced word of length <= L exactly once, in length-then-
 * lexicographic order (syllables compared by index, then exponent).  The
 * GAMMA filter keeps the words of total exponent divisible by p, which form
 * the index-p free subgroup.  Count at length t >= 1 before filtering:
 * (g+1)(p-1) * (g(p-1))^(t-1).
 */
std::vector<ReducedWord> enumerate_words(const WhittakerGroup& G, int L, WordFilter filter);

/** The transformation of a word (product of generator powers, first syllable
 *  outermost). */
Mobius word_element(const WhittakerGroup& G, const ReducedWord& w);

enum class Subgroup { GAMMA, GAMMA0 };

/**
 * Truncated theta product.  `value` is an exact 0 or infinity when z hits the
 * zero or pole of a retained factor at the identity word; then the truncation
 * is already exact and the floors are infinite.
 *
 * tail_floor is a lower bound on v(term - 1) over every omitted factor: the
 * smaller (conservative) of an empirical boundary estimate (the minimum over
 * the outermost retained shell of words) and the per-length geometric bound
 * (L+1) * (axis_gap - 2 * radius).  It is monotone nondecreasing in L on a
 * fixed instance, and +inf once the enumeration exhausts the group (g = 0).
 */
struct ThetaResult {
    ProjPoint value;
    int truncation_length = 0; // the requested cap L
    ValQ tail_floor = ValQ::infinity();
    ValQ boundary_floor = ValQ::infinity(); // empirical part of tail_floor
    ValQ length_floor = ValQ::infinity();   // geometric part of tail_floor
    long words = 0;                         // factors retained
};

/**
 * Partial product of (z - gamma(a)) / (z - gamma(b)) over the words of the
 * chosen subgroup of length <= L.  An infinite gamma(a) or gamma(b) (or an
 * infinite z) drops its side of the factor; z equal to gamma(a) gives the
 * exact value 0.  PoleHit when z meets gamma(b) at a nonidentity word (the
 * identity pole gives the exact value infinity); PrecisionExhausted when a
 * factor cannot be told apart from 0 at working precision.
 */
ThetaResult theta(const WhittakerGroup& G, Subgroup sub, const ProjPoint& a,
                  const ProjPoint& b, const ProjPoint& z, int L);

/**
 * Agreement report between the full-group product and the p-th power of the
 * subgroup product at one point.  `matched_discrepancy` re-evaluates the full
 * product over the subgroup words extended by the powers of the generator
 * fixing (a, b) -- term by term a p-fold repetition, so it must be infinite
 * (exact agreement) whenever the arithmetic is exact.  `discrepancy` compares
 * the plain length-truncation instead and is only bounded below by the tail
 * floors; `consistent` asserts discrepancy > floor.  `invariance[j]` is the
 * valuation of Theta0(s_j(z)) - Theta0(z), provably at least
 * `invariance_floor[j]` (each evaluation's tail floor shifted by its value's
 * valuation, minimized over the two).
 */
struct ThetaConsistency {
    int pair_index = -1;
    ThetaResult direct; // full group, truncated at L
    ThetaResult base;   // subgroup, truncated at L
    ProjPoint power;    // base.value ^ p
    ValQ discrepancy = ValQ::infinity();
    ValQ matched_discrepancy = ValQ::infinity();
    ValQ floor = ValQ::infinity(); // min of the two tail floors
    std::vector<ValQ> invariance;
    std::vector<ValQ> invariance_floor;
    bool consistent = false;
};

/** {a, b} must be one of the group's fixed pairs, in either orientation
 *  (BadInput otherwise). */
ThetaConsistency theta_gamma0_consistency(const WhittakerGroup& G, const ProjPoint& a,
                                          const ProjPoint& b, const ProjPoint& z, int L);

/**
 * Branch points of the degree-p cover: the images of S under the full-group
 * product normalized at the chosen pair, which lands at 0 and infinity.
 * Labels gain a "pi(..)" wrapper.  A negative pair_index selects the pair
 * containing the point at infinity when there is one (pair 0 otherwise), and
 * whenever the selected pair contains infinity the normalization is oriented
 * to keep it at infinity, so the output cluster data lives in coordinates
 * comparable with the input's.  The truncation length is raised until the
 * combinatorial cluster data and relative depths of the output agree across
 * two consecutive lengths and every pairwise valuation lies strictly below
 * the common tail floor; NonConvergence past max_length.  The convergence
 * log keeps one line per length tried.
 */
struct BranchPoints {
    PointSet points;
    ClusterData clusters; // recomputed from `points`
    int used_length = 0;
    ValQ tail_floor = ValQ::infinity();
    std::vector<std::string> log;
};

BranchPoints branch_points_numeric(const PointSet& S, const Pairing& P,
                                   const WhittakerGroup& G, int max_length,
                                   int pair_index = -1);

/**
 * One radius of the segment sweep.  `base_observed` / `full_observed` are the
 * Gauss valuations of (product - 1) on the disc of logarithmic radius d
 * around 1 -- the valuation at the generic point, computed exactly for any
 * rational d from the coefficients of the truncated product written as a
 * ratio of polynomials in (z - 1).  The expected values follow the piecewise
 * formulas: two branches with breakpoint v(p)/(p-1) for the subgroup product
 * and three branches for the full product.  At integer d a rational sample
 * point a with v(a - 1) = d is also evaluated directly: `point_main` must
 * equal v(p) + v(lambda) - v(1 - a^p), and the residuals against the two
 * closed-form leading terms, 1 + p*lambda*(1 - a^p)^-1 everywhere and
 * 1 + lambda*(1 - a)^-1 past the breakpoint, must exceed the leading
 * valuation.  `point_generic` records whether a residue-generic sample
 * exists; the piecewise comparison of the point value is skipped otherwise.
 */
struct SegmentSample {
    ValQ d;
    ValQ base_observed;
    ValQ base_expected;
    ValQ full_observed;
    ValQ full_expected;
    ValQ tail_floor;
    bool point_checked = false;
    bool point_generic = false;
    Scalar point;          // the rational sample a, when checked
    ValQ point_main;       // v(product(a) - 1)
    ValQ residual_first;   // v(product(a) - 1 - p*lambda*(1-a^p)^-1)
    ValQ residual_second;  // v(product(a) - 1 - lambda*(1-a)^-1), past the breakpoint
    bool ok = false;
};

/**
 * Sweep report.  The instance must present the normalized frame: one pair
 * equal to {0, infinity} (axis_pair), another containing 1 (unit_pair), the
 * integral disc a non-uebereven cluster boundary, the unit pair's meet a
 * non-uebereven cluster at depth v(lambda), and the path between the two
 * meets clear of every other pair's tubular neighborhood -- HypothesesUnmet
 * otherwise.  `breakpoints_consistent` checks the adjacent branch formulas
 * agree at both breakpoints.  at_zero / full_at_zero are the valuations of
 * (product(0) - 1), expected v(p) + v(lambda) and 2v(p) + v(lambda).
 */
struct SegmentReport {
    int axis_pair = -1;
    int unit_pair = -1;
    ValQ v_p;
    ValQ v_lambda;
    ValQ break_low;  // v(p)/(p-1)
    ValQ break_high; // v(lambda) - v(p)/(p-1)
    bool breakpoints_consistent = false;
    ValQ at_zero;
    ValQ full_at_zero;
    std::vector<SegmentSample> samples;
    bool all_ok = false;
};

/** PrecisionExhausted when the tail floor at some requested radius fails to
 *  clear the value it is supposed to certify (raise L). */
SegmentReport check_segment_formulas(const PointSet& S, const Pairing& P,
                                     const WhittakerGroup& G, const std::vector<ValQ>& ds,
                                     int L);

} // namespace berkdil
