#pragma once

#include <optional>
#include <string>
#include <utility>

#include "berkdil/valuation.hpp"

namespace berkdil {

/** Point of the projective line: a field element or the point at infinity. */
class ProjPoint {
  public:
    ProjPoint() = default;
    static ProjPoint finite(Scalar s) {
        ProjPoint p;
        p.v_ = std::move(s);
        return p;
    }
    static ProjPoint infinity() { return ProjPoint(); }

    bool is_infinity() const { return !v_.has_value(); }
    const Scalar& value() const;
    // homogeneous coordinates [x0 : x1], infinity = [1 : 0]
    std::pair<Scalar, Scalar> homogeneous(unsigned long ell) const;
    std::string str() const;

  private:
    std::optional<Scalar> v_;
};

/**
 * Fractional linear transformation z -> (a z + b) / (c z + d), represented by
 * its matrix modulo scaling.
 */
struct Mobius {
    Scalar a, b, c, d;

    unsigned long ell() const { return a.ell(); }
    Scalar det() const { return a * d - b * c; }

    static Mobius identity(unsigned long ell);
    static Mobius affine(unsigned long ell, const ExactQ& u, const ExactQ& t); // z -> u z + t
    static Mobius reciprocal(unsigned long ell);                               // z -> 1/z

    ProjPoint apply(const ProjPoint& z) const;
    Mobius compose(const Mobius& o) const; // this after o
    Mobius inverse() const;                // adjugate (projective inverse)
    Mobius pow(unsigned long n) const;
};

/**
 * Exact projective equality (all six 2x2 minors of the stacked coefficient
 * rows vanish).  PrecisionExhausted when approximations leave it undecidable.
 */
bool proj_equal(const Mobius& m, const Mobius& n);
/** No minor is certainly nonzero: equality cannot be ruled out at precision. */
bool proj_consistent(const Mobius& m, const Mobius& n);

bool proj_point_equal(const ProjPoint& x, const ProjPoint& y, unsigned long ell);

/**
 * The order-p transformation with fixed points a, b and multiplier zeta
 * (a primitive p-th root of unity): conjugate of diag(zeta, 1) by the matrix
 * with columns b, a.  DegenerateFixedPoints when a = b.
 */
Mobius order_p_fixing(const ProjPoint& a, const ProjPoint& b, unsigned long p,
                      const Scalar& zeta);

} // namespace berkdil
