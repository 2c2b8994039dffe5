#include "berkdil/valuation.hpp"

#include <stdexcept>

namespace berkdil {

// ---------------------------------------------------------------- ValQ

ValQ::ValQ(long num, unsigned long den) : q_(num, den) {
    if (den == 0) throw std::logic_error("ValQ: zero denominator");
    q_.canonicalize();
}

ValQ ValQ::infinity() {
    ValQ v;
    v.inf_ = true;
    return v;
}

const mpq_class& ValQ::rat() const {
    if (inf_) throw std::logic_error("ValQ: +inf has no rational value");
    return q_;
}

ValQ ValQ::operator+(const ValQ& o) const {
    if (inf_ || o.inf_) return infinity();
    return ValQ(mpq_class(q_ + o.q_));
}

ValQ ValQ::operator-(const ValQ& o) const {
    if (o.inf_) throw std::logic_error("ValQ: cannot subtract +inf");
    if (inf_) return infinity();
    return ValQ(mpq_class(q_ - o.q_));
}

ValQ ValQ::operator-() const {
    if (inf_) throw std::logic_error("ValQ: cannot negate +inf");
    return ValQ(mpq_class(-q_));
}

ValQ ValQ::operator*(const mpq_class& k) const {
    if (inf_) {
        if (k <= 0) throw std::logic_error("ValQ: +inf * nonpositive");
        return infinity();
    }
    return ValQ(mpq_class(q_ * k));
}

ValQ ValQ::operator/(unsigned long k) const {
    if (k == 0) throw std::logic_error("ValQ: division by zero");
    if (inf_) return infinity();
    return ValQ(mpq_class(q_ / mpq_class(static_cast<long>(k))));
}

bool ValQ::operator==(const ValQ& o) const {
    if (inf_ || o.inf_) return inf_ == o.inf_;
    return q_ == o.q_;
}

bool ValQ::operator<(const ValQ& o) const {
    if (inf_) return false;
    if (o.inf_) return true;
    return q_ < o.q_;
}

bool ValQ::operator<=(const ValQ& o) const { return *this < o || *this == o; }

std::string ValQ::str() const {
    if (inf_) return "+inf";
    return q_.get_str();
}

std::optional<ValQ> ValQ::parse(const std::string& s) {
    if (s == "+inf" || s == "inf") return infinity();
    try {
        mpq_class q(s);
        if (q.get_den() == 0) return std::nullopt;
        q.canonicalize();
        return ValQ(q);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

ValQ min(const ValQ& a, const ValQ& b) { return a <= b ? a : b; }
ValQ max(const ValQ& a, const ValQ& b) { return a <= b ? b : a; }

// ---------------------------------------------------------------- ExactQ

ExactQ::ExactQ(const mpz_class& num, const mpz_class& den) : q_(num, den) {
    if (den == 0) throw std::domain_error("ExactQ: zero denominator");
    q_.canonicalize();
}

std::optional<ExactQ> ExactQ::parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        mpq_class q(s);
        if (q.get_den() == 0) return std::nullopt;
        q.canonicalize();
        return ExactQ(q);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

ExactQ ExactQ::operator/(const ExactQ& o) const {
    if (o.q_ == 0) throw std::domain_error("ExactQ: division by zero");
    return ExactQ(mpq_class(q_ / o.q_));
}

ValQ val_of_mpz(const mpz_class& z, unsigned long ell) {
    if (z == 0) return ValQ::infinity();
    mpz_class rem, p(static_cast<unsigned long>(ell));
    mp_bitcnt_t c = mpz_remove(rem.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t());
    return ValQ(static_cast<long>(c));
}

ValQ ExactQ::val(unsigned long ell) const {
    if (q_ == 0) return ValQ::infinity();
    ValQ vn = val_of_mpz(mpz_class(q_.get_num()), ell);
    ValQ vd = val_of_mpz(mpz_class(q_.get_den()), ell);
    return vn - vd;
}

std::string ExactQ::str() const { return q_.get_str(); }

// ---------------------------------------------------------------- PadicApprox

namespace {

mpz_class ell_pow(unsigned long ell, long k) {
    if (k < 0) throw std::logic_error("ell_pow: negative exponent");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), ell, static_cast<unsigned long>(k));
    return r;
}

long mpz_val_long(const mpz_class& z, unsigned long ell) {
    mpz_class rem, p(ell);
    return static_cast<long>(mpz_remove(rem.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t()));
}

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::logic_error("mod_inverse: not invertible");
    return r;
}

} // namespace

PadicApprox PadicApprox::exact_zero(unsigned long ell) {
    return PadicApprox(ell, Kind::exact_zero);
}

PadicApprox PadicApprox::tracked_zero(unsigned long ell, long floor) {
    PadicApprox x(ell, Kind::tracked_zero);
    x.floor_ = floor;
    return x;
}

PadicApprox PadicApprox::from_unit(unsigned long ell, long val, mpz_class unit, long prec) {
    if (prec < 1) throw std::logic_error("PadicApprox: precision must be >= 1");
    mpz_class m = ell_pow(ell, prec);
    unit %= m;
    if (unit < 0) unit += m;
    if (unit == 0 || unit % ell == 0)
        throw std::logic_error("PadicApprox: unit not prime to ell");
    PadicApprox x(ell, Kind::normal);
    x.val_ = val;
    x.unit_ = unit;
    x.prec_ = prec;
    return x;
}

PadicApprox PadicApprox::from_exact(const ExactQ& x, unsigned long ell, long prec) {
    if (x.is_zero()) return exact_zero(ell);
    if (prec < 1) throw std::logic_error("PadicApprox: precision must be >= 1");
    mpz_class num(x.rat().get_num()), den(x.rat().get_den());
    long vn = mpz_val_long(num, ell), vd = mpz_val_long(den, ell);
    mpz_class pe = ell_pow(ell, vn);
    num /= pe;
    pe = ell_pow(ell, vd);
    den /= pe;
    mpz_class m = ell_pow(ell, prec);
    mpz_class u = (num % m) * mod_inverse(den % m, m) % m;
    if (u < 0) u += m;
    return from_unit(ell, vn - vd, u, prec);
}

PadicApprox PadicApprox::from_exact_abs(const ExactQ& x, unsigned long ell, long abs) {
    if (x.is_zero()) return exact_zero(ell);
    long v = mpz_val_long(mpz_class(x.rat().get_num()), ell) -
             mpz_val_long(mpz_class(x.rat().get_den()), ell);
    if (v >= abs) return tracked_zero(ell, abs);
    return from_exact(x, ell, abs - v);
}

Zeroness PadicApprox::zeroness() const {
    switch (kind_) {
        case Kind::exact_zero: return Zeroness::zero;
        case Kind::tracked_zero: return Zeroness::unknown;
        default: return Zeroness::nonzero;
    }
}

long PadicApprox::rel_precision() const {
    if (kind_ != Kind::normal) throw std::logic_error("rel_precision: not a normal value");
    return prec_;
}

long PadicApprox::abs_precision() const {
    if (kind_ == Kind::normal) return val_ + prec_;
    if (kind_ == Kind::tracked_zero) return floor_;
    throw std::logic_error("abs_precision: exact zero has none");
}

long PadicApprox::val_long() const {
    if (kind_ != Kind::normal) throw std::logic_error("val_long: not a normal value");
    return val_;
}

ValQ PadicApprox::val() const {
    switch (kind_) {
        case Kind::exact_zero: return ValQ::infinity();
        case Kind::tracked_zero:
            throw PrecisionExhausted(
                "valuation of a quantity indistinguishable from zero at working precision "
                "(v >= " + std::to_string(floor_) + ")");
        default: return ValQ(val_);
    }
}

PadicApprox PadicApprox::operator+(const PadicApprox& o) const {
    if (ell_ != o.ell_) throw std::logic_error("PadicApprox: mixed primes");
    if (kind_ == Kind::exact_zero) return o;
    if (o.kind_ == Kind::exact_zero) return *this;
    if (kind_ == Kind::tracked_zero && o.kind_ == Kind::tracked_zero)
        return tracked_zero(ell_, std::min(floor_, o.floor_));
    if (kind_ == Kind::tracked_zero || o.kind_ == Kind::tracked_zero) {
        const PadicApprox& t = (kind_ == Kind::tracked_zero) ? *this : o;
        const PadicApprox& n = (kind_ == Kind::tracked_zero) ? o : *this;
        if (n.val_ >= t.floor_) return tracked_zero(ell_, t.floor_);
        long prec = std::min(t.floor_, n.val_ + n.prec_) - n.val_;
        mpz_class u = n.unit_ % ell_pow(ell_, prec);
        return from_unit(ell_, n.val_, u, prec);
    }
    long A = std::min(val_ + prec_, o.val_ + o.prec_);
    long vmin = std::min(val_, o.val_);
    long m = A - vmin;
    mpz_class mod = ell_pow(ell_, m);
    mpz_class s = (unit_ * ell_pow(ell_, val_ - vmin) + o.unit_ * ell_pow(ell_, o.val_ - vmin)) % mod;
    if (s < 0) s += mod;
    if (s == 0) return tracked_zero(ell_, A);
    long t = mpz_val_long(s, ell_);
    mpz_class u = s / ell_pow(ell_, t);
    return from_unit(ell_, vmin + t, u, A - (vmin + t));
}

PadicApprox PadicApprox::operator-() const {
    if (kind_ != Kind::normal) return *this;
    return from_unit(ell_, val_, ell_pow(ell_, prec_) - unit_, prec_);
}

PadicApprox PadicApprox::operator-(const PadicApprox& o) const { return *this + (-o); }

PadicApprox PadicApprox::operator*(const PadicApprox& o) const {
    if (ell_ != o.ell_) throw std::logic_error("PadicApprox: mixed primes");
    if (kind_ == Kind::exact_zero || o.kind_ == Kind::exact_zero) return exact_zero(ell_);
    if (kind_ == Kind::tracked_zero && o.kind_ == Kind::tracked_zero)
        return tracked_zero(ell_, floor_ + o.floor_);
    if (kind_ == Kind::tracked_zero) return tracked_zero(ell_, floor_ + o.val_);
    if (o.kind_ == Kind::tracked_zero) return tracked_zero(ell_, o.floor_ + val_);
    long prec = std::min(prec_, o.prec_);
    mpz_class u = unit_ * o.unit_ % ell_pow(ell_, prec);
    return from_unit(ell_, val_ + o.val_, u, prec);
}

PadicApprox PadicApprox::inv() const {
    if (kind_ == Kind::exact_zero) throw std::domain_error("PadicApprox: division by zero");
    if (kind_ == Kind::tracked_zero)
        throw PrecisionExhausted("division by a quantity indistinguishable from zero");
    return from_unit(ell_, -val_, mod_inverse(unit_, ell_pow(ell_, prec_)), prec_);
}

PadicApprox PadicApprox::operator/(const PadicApprox& o) const {
    if (o.kind_ == Kind::exact_zero) throw std::domain_error("PadicApprox: division by zero");
    if (o.kind_ == Kind::tracked_zero)
        throw PrecisionExhausted("division by a quantity indistinguishable from zero");
    if (kind_ == Kind::exact_zero) return exact_zero(ell_);
    if (kind_ == Kind::tracked_zero) return tracked_zero(ell_, floor_ - o.val_);
    return *this * o.inv();
}

PadicApprox PadicApprox::pow(unsigned long n) const {
    if (n == 0) return from_unit(ell_, 0, 1, kind_ == Kind::normal ? prec_ : 1);
    PadicApprox r = *this;
    for (unsigned long i = 1; i < n; ++i) r = r * *this;
    return r;
}

std::string PadicApprox::str() const {
    switch (kind_) {
        case Kind::exact_zero: return "0";
        case Kind::tracked_zero:
            return "O(" + std::to_string(ell_) + "^" + std::to_string(floor_) + ")";
        default:
            return std::to_string(ell_) + "^" + std::to_string(val_) + "*(" +
                   unit_.get_str() + " + O(" + std::to_string(ell_) + "^" +
                   std::to_string(prec_) + "))";
    }
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(unsigned long ell, PadicApprox x) : ell_(ell), v_(std::move(x)) {
    if (std::get<PadicApprox>(v_).ell() != ell_)
        throw std::logic_error("Scalar: ell mismatch");
}

const ExactQ& Scalar::as_exact() const {
    if (!exact()) throw std::logic_error("Scalar: not exact");
    return std::get<ExactQ>(v_);
}

const PadicApprox& Scalar::as_padic() const {
    if (exact()) throw std::logic_error("Scalar: not approximate");
    return std::get<PadicApprox>(v_);
}

PadicApprox Scalar::to_padic(long rel_prec) const {
    if (exact()) return PadicApprox::from_exact(as_exact(), ell_, rel_prec);
    return as_padic();
}

ValQ Scalar::val() const {
    if (exact()) return as_exact().val(ell_);
    return as_padic().val();
}

Zeroness Scalar::zeroness() const {
    if (exact()) return as_exact().is_zero() ? Zeroness::zero : Zeroness::nonzero;
    return as_padic().zeroness();
}

Zeroness scalar_zeroness(const Scalar& s) { return s.zeroness(); }

namespace {

// relative precision at which an exact operand joins a multiplicative op
long mul_prec(const PadicApprox& p) {
    return (!p.is_exact_zero() && !p.is_tracked_zero()) ? p.rel_precision() : 1;
}

} // namespace

Scalar Scalar::operator+(const Scalar& o) const {
    if (ell_ != o.ell_) throw std::logic_error("Scalar: ell mismatch");
    if (exact() && o.exact()) return Scalar(ell_, as_exact() + o.as_exact());
    if (exact()) {
        if (o.as_padic().is_exact_zero()) return *this;
        return Scalar(ell_, PadicApprox::from_exact_abs(as_exact(), ell_,
                                                        o.as_padic().abs_precision()) +
                                o.as_padic());
    }
    if (o.exact()) return o + *this;
    return Scalar(ell_, as_padic() + o.as_padic());
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (ell_ != o.ell_) throw std::logic_error("Scalar: ell mismatch");
    if (exact() && o.exact()) return Scalar(ell_, as_exact() * o.as_exact());
    if (exact()) {
        if (as_exact().is_zero() || o.as_padic().is_exact_zero())
            return Scalar(ell_, ExactQ(0));
        return Scalar(ell_, PadicApprox::from_exact(as_exact(), ell_, mul_prec(o.as_padic())) *
                                o.as_padic());
    }
    if (o.exact()) return o * *this;
    return Scalar(ell_, as_padic() * o.as_padic());
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (ell_ != o.ell_) throw std::logic_error("Scalar: ell mismatch");
    if (o.zeroness() == Zeroness::zero) throw std::domain_error("Scalar: division by zero");
    if (o.zeroness() == Zeroness::unknown)
        throw PrecisionExhausted("division by a quantity indistinguishable from zero");
    if (exact() && o.exact()) return Scalar(ell_, as_exact() / o.as_exact());
    if (zeroness() == Zeroness::zero) return Scalar(ell_, ExactQ(0));
    if (exact())
        return Scalar(ell_, PadicApprox::from_exact(as_exact(), ell_, mul_prec(o.as_padic())) /
                                o.as_padic());
    if (o.exact())
        return Scalar(ell_, as_padic() /
                                PadicApprox::from_exact(o.as_exact(), ell_, mul_prec(as_padic())));
    return Scalar(ell_, as_padic() / o.as_padic());
}

Scalar Scalar::operator-() const {
    if (exact()) return Scalar(ell_, ExactQ(-as_exact()));
    return Scalar(ell_, -as_padic());
}

Scalar Scalar::pow(unsigned long n) const {
    if (exact()) {
        ExactQ r(1);
        for (unsigned long i = 0; i < n; ++i) r = r * as_exact();
        return Scalar(ell_, r);
    }
    return Scalar(ell_, as_padic().pow(n));
}

std::string Scalar::str() const {
    return exact() ? as_exact().str() : as_padic().str();
}

// ---------------------------------------------------------------- hensel

Scalar hensel_root_of_unity(unsigned long p, unsigned long ell, long prec) {
    if (p < 2) throw NoRootExists("order of the root of unity must be >= 2");
    if (p == 2) return Scalar(ell, ExactQ(-1));
    if (ell == p || (ell - 1) % p != 0)
        throw NoRootExists("a primitive " + std::to_string(p) +
                           "-th root of unity does not exist in Q_" + std::to_string(ell));
    if (prec < 1) throw std::logic_error("hensel_root_of_unity: precision must be >= 1");

    mpz_class lz(ell), pz(p);
    mpz_class r = 0;
    for (unsigned long c = 2; c < ell; ++c) {
        mpz_class cz(c), rr;
        mpz_powm(rr.get_mpz_t(), cz.get_mpz_t(), pz.get_mpz_t(), lz.get_mpz_t());
        if (rr == 1) { r = cz; break; }
    }
    if (r == 0) throw std::logic_error("hensel_root_of_unity: residue search failed");

    // Newton iteration on f(x) = x^p - 1; f'(x) is a unit, so digits double
    long k = 1;
    mpz_class x = r;
    while (k < prec) {
        k = std::min(2 * k, prec);
        mpz_class mod = ell_pow(ell, k);
        mpz_class xp;
        mpz_powm(xp.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t(), mod.get_mpz_t());
        mpz_class xpm1;
        mpz_class pm1 = pz - 1;
        mpz_powm(xpm1.get_mpz_t(), x.get_mpz_t(), pm1.get_mpz_t(), mod.get_mpz_t());
        mpz_class deriv = pz * xpm1 % mod;
        mpz_class step = (xp - 1) * mod_inverse(deriv, mod) % mod;
        x = (x - step) % mod;
        if (x < 0) x += mod;
    }
    return Scalar(ell, PadicApprox::from_unit(ell, 0, x, prec));
}

} // namespace berkdil
