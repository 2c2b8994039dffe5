#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>

#include "berkdil/errors.hpp"

namespace berkdil {

/**
 * Value group of the valuation: Q together with +inf.  +inf absorbs addition
 * and is the unique maximum; subtraction of +inf from anything is undefined.
 */
class ValQ {
  public:
    ValQ() : q_(0) {}
    ValQ(long n) : q_(n) {}
    ValQ(long num, unsigned long den);
    explicit ValQ(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    static ValQ infinity();

    bool is_infinity() const { return inf_; }
    // finite value; logic_error on +inf
    const mpq_class& rat() const;

    ValQ operator+(const ValQ& o) const;
    ValQ operator-(const ValQ& o) const; // rhs must be finite
    ValQ operator-() const;              // finite only
    ValQ operator*(const mpq_class& k) const; // k >= 0; +inf * 0 undefined
    ValQ operator/(unsigned long k) const;

    bool operator==(const ValQ& o) const;
    bool operator!=(const ValQ& o) const { return !(*this == o); }
    bool operator<(const ValQ& o) const;
    bool operator<=(const ValQ& o) const;
    bool operator>(const ValQ& o) const { return o < *this; }
    bool operator>=(const ValQ& o) const { return o <= *this; }

    std::string str() const; // "7", "-3/2", "+inf"
    static std::optional<ValQ> parse(const std::string& s);

  private:
    bool inf_ = false;
    mpq_class q_;
};

ValQ min(const ValQ& a, const ValQ& b);
ValQ max(const ValQ& a, const ValQ& b);

/** Exact rational field element (canonical fraction). */
class ExactQ {
  public:
    ExactQ() : q_(0) {}
    ExactQ(long n) : q_(n) {}
    explicit ExactQ(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit ExactQ(const mpz_class& num, const mpz_class& den);

    static std::optional<ExactQ> parse(const std::string& s); // "a" or "a/b"

    ExactQ operator+(const ExactQ& o) const { return ExactQ(mpq_class(q_ + o.q_)); }
    ExactQ operator-(const ExactQ& o) const { return ExactQ(mpq_class(q_ - o.q_)); }
    ExactQ operator*(const ExactQ& o) const { return ExactQ(mpq_class(q_ * o.q_)); }
    ExactQ operator/(const ExactQ& o) const;
    ExactQ operator-() const { return ExactQ(mpq_class(-q_)); }

    bool operator==(const ExactQ& o) const { return q_ == o.q_; }
    bool operator!=(const ExactQ& o) const { return q_ != o.q_; }
    bool is_zero() const { return q_ == 0; }

    // ell-adic valuation, v(ell) = 1, v(0) = +inf
    ValQ val(unsigned long ell) const;

    const mpq_class& rat() const { return q_; }
    std::string str() const;

  private:
    mpq_class q_;
};

/** ell-adic valuation of an integer; v(0) = +inf. */
ValQ val_of_mpz(const mpz_class& z, unsigned long ell);

enum class Zeroness { nonzero, zero, unknown };

/**
 * Unramified ell-adic approximation: either an exact zero, a "tracked zero"
 * (every digit vanishes up to absolute precision `floor`, so only
 * v >= floor is known), or ell^val * unit with the unit known modulo
 * ell^prec (prec >= 1 relative digits, unit in [1, ell^prec) prime to ell).
 * Operations propagate precision pessimistically and never guess: asking for
 * the valuation of a tracked zero raises PrecisionExhausted.
 */
class PadicApprox {
  public:
    static PadicApprox exact_zero(unsigned long ell);
    static PadicApprox tracked_zero(unsigned long ell, long floor);
    static PadicApprox from_unit(unsigned long ell, long val, mpz_class unit, long prec);
    // relative precision `prec`; exact rational input
    static PadicApprox from_exact(const ExactQ& x, unsigned long ell, long prec);
    // digits below absolute precision `abs` only
    static PadicApprox from_exact_abs(const ExactQ& x, unsigned long ell, long abs);

    unsigned long ell() const { return ell_; }
    bool is_exact_zero() const { return kind_ == Kind::exact_zero; }
    bool is_tracked_zero() const { return kind_ == Kind::tracked_zero; }
    Zeroness zeroness() const;
    long rel_precision() const; // normal values only
    long abs_precision() const; // val + prec, or floor for tracked zeros
    long val_long() const;      // normal values only
    const mpz_class& unit() const { return unit_; }

    ValQ val() const; // PrecisionExhausted on tracked zero

    PadicApprox operator+(const PadicApprox& o) const;
    PadicApprox operator-(const PadicApprox& o) const;
    PadicApprox operator*(const PadicApprox& o) const;
    PadicApprox operator/(const PadicApprox& o) const;
    PadicApprox operator-() const;
    PadicApprox inv() const;
    PadicApprox pow(unsigned long n) const;

    std::string str() const;

  private:
    enum class Kind { exact_zero, tracked_zero, normal };
    PadicApprox(unsigned long ell, Kind k) : ell_(ell), kind_(k) {}
    unsigned long ell_ = 2;
    Kind kind_ = Kind::exact_zero;
    long val_ = 0;
    mpz_class unit_ = 0;
    long prec_ = 0;
    long floor_ = 0;
};

/** Field element in exact or approximate mode behind one interface. */
class Scalar {
  public:
    Scalar() : ell_(2), v_(ExactQ(0)) {}
    Scalar(unsigned long ell, ExactQ x) : ell_(ell), v_(std::move(x)) {}
    Scalar(unsigned long ell, PadicApprox x);

    unsigned long ell() const { return ell_; }
    bool exact() const { return std::holds_alternative<ExactQ>(v_); }
    const ExactQ& as_exact() const;
    const PadicApprox& as_padic() const;
    PadicApprox to_padic(long rel_prec) const;

    ValQ val() const;
    Zeroness zeroness() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar pow(unsigned long n) const;

    std::string str() const;

  private:
    unsigned long ell_;
    std::variant<ExactQ, PadicApprox> v_;
};

Zeroness scalar_zeroness(const Scalar& s);

/**
 * A primitive p-th root of unity in Q_ell to `prec` relative digits.
 * p = 2 gives the exact value -1 for every ell.  Odd p requires p | ell - 1
 * (NoRootExists otherwise); the smallest primitive residue is lifted.
 */
Scalar hensel_root_of_unity(unsigned long p, unsigned long ell, long prec);

} // namespace berkdil
