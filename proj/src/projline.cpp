#include "berkdil/projline.hpp"

#include <array>
#include <stdexcept>

namespace berkdil {

const Scalar& ProjPoint::value() const {
    if (!v_) throw std::logic_error("ProjPoint: infinity has no value");
    return *v_;
}

std::pair<Scalar, Scalar> ProjPoint::homogeneous(unsigned long ell) const {
    if (is_infinity()) return {Scalar(ell, ExactQ(1)), Scalar(ell, ExactQ(0))};
    return {*v_, Scalar(ell, ExactQ(1))};
}

std::string ProjPoint::str() const { return is_infinity() ? "inf" : v_->str(); }

Mobius Mobius::identity(unsigned long ell) {
    Scalar one(ell, ExactQ(1)), zero(ell, ExactQ(0));
    return {one, zero, zero, one};
}

Mobius Mobius::affine(unsigned long ell, const ExactQ& u, const ExactQ& t) {
    if (u.is_zero()) throw std::logic_error("Mobius::affine: zero scale");
    return {Scalar(ell, u), Scalar(ell, t), Scalar(ell, ExactQ(0)), Scalar(ell, ExactQ(1))};
}

Mobius Mobius::reciprocal(unsigned long ell) {
    Scalar one(ell, ExactQ(1)), zero(ell, ExactQ(0));
    return {zero, one, one, zero};
}

ProjPoint Mobius::apply(const ProjPoint& z) const {
    auto [x0, x1] = z.homogeneous(ell());
    Scalar num = a * x0 + b * x1;
    Scalar den = c * x0 + d * x1;
    switch (den.zeroness()) {
        case Zeroness::zero:
            if (num.zeroness() == Zeroness::zero)
                throw std::logic_error("Mobius::apply: singular matrix");
            return ProjPoint::infinity();
        case Zeroness::unknown:
            throw PrecisionExhausted(
                "matrix application lands indistinguishably close to infinity");
        default:
            return ProjPoint::finite(num / den);
    }
}

Mobius Mobius::compose(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mobius Mobius::inverse() const { return {d, -b, -c, a}; }

Mobius Mobius::pow(unsigned long n) const {
    Mobius r = identity(ell());
    for (unsigned long i = 0; i < n; ++i) r = r.compose(*this);
    return r;
}

namespace {

std::array<Scalar, 4> row(const Mobius& m) { return {m.a, m.b, m.c, m.d}; }

// zeroness of each of the six 2x2 minors of the stacked 2x4 coefficient rows
std::array<Zeroness, 6> minors(const Mobius& m, const Mobius& n) {
    auto r1 = row(m), r2 = row(n);
    std::array<Zeroness, 6> out;
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            out[k++] = (r1[i] * r2[j] - r1[j] * r2[i]).zeroness();
    return out;
}

} // namespace

bool proj_equal(const Mobius& m, const Mobius& n) {
    bool undecided = false;
    for (Zeroness z : minors(m, n)) {
        if (z == Zeroness::nonzero) return false;
        if (z == Zeroness::unknown) undecided = true;
    }
    if (undecided)
        throw PrecisionExhausted("projective equality undecidable at working precision");
    return true;
}

bool proj_consistent(const Mobius& m, const Mobius& n) {
    for (Zeroness z : minors(m, n))
        if (z == Zeroness::nonzero) return false;
    return true;
}

bool proj_point_equal(const ProjPoint& x, const ProjPoint& y, unsigned long ell) {
    auto [x0, x1] = x.homogeneous(ell);
    auto [y0, y1] = y.homogeneous(ell);
    switch ((x0 * y1 - y0 * x1).zeroness()) {
        case Zeroness::zero: return true;
        case Zeroness::nonzero: return false;
        default:
            throw PrecisionExhausted("point equality undecidable at working precision");
    }
}

Mobius order_p_fixing(const ProjPoint& a, const ProjPoint& b, unsigned long p,
                      const Scalar& zeta) {
    unsigned long ell = zeta.ell();
    if (p < 2) throw std::logic_error("order_p_fixing: p must be >= 2");
    if (proj_point_equal(a, b, ell))
        throw DegenerateFixedPoints("the two fixed points coincide: " + a.str());
    auto [a0, a1] = a.homogeneous(ell);
    auto [b0, b1] = b.homogeneous(ell);
    // conjugate diag(zeta, 1) by M = (b | a); adj(M) in place of the inverse
    return {zeta * b0 * a1 - a0 * b1, a0 * b0 * (Scalar(ell, ExactQ(1)) - zeta),
            a1 * b1 * (zeta - Scalar(ell, ExactQ(1))), a1 * b0 - zeta * a0 * b1};
}

} // namespace berkdil
