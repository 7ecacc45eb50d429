#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hompart {

using bigint = boost::multiprecision::cpp_int;

/**
 * Exact nonnegative rational. Every comparison in the library that decides a
 * mathematical statement goes through this type or through Threshold below;
 * no floating point is ever consulted on a counting path.
 *
 * Invariants: den > 0, gcd(num, den) = 1.
 */
class Ratio {
public:
    Ratio() : num_(0), den_(1) {}
    Ratio(long long num, long long den) : num_(num), den_(den) { normalize(); }
    Ratio(bigint num, bigint den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    static Ratio integer(long long v) { return Ratio(v, 1); }

    const bigint& num() const { return num_; }
    const bigint& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    // a/b <=> c/d by cross multiplication.
    int cmp(const Ratio& o) const {
        bigint l = num_ * o.den_;
        bigint r = o.num_ * den_;
        return l < r ? -1 : (l == r ? 0 : 1);
    }
    bool operator<(const Ratio& o) const { return cmp(o) < 0; }
    bool operator<=(const Ratio& o) const { return cmp(o) <= 0; }
    bool operator>(const Ratio& o) const { return cmp(o) > 0; }
    bool operator>=(const Ratio& o) const { return cmp(o) >= 0; }
    bool operator==(const Ratio& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Ratio& o) const { return !(*this == o); }

    Ratio operator+(const Ratio& o) const { return Ratio(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
    Ratio operator-(const Ratio& o) const { return Ratio(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
    Ratio operator*(const Ratio& o) const { return Ratio(num_ * o.num_, den_ * o.den_); }
    Ratio operator/(const Ratio& o) const {
        if (o.num_ == 0) throw std::domain_error("Ratio: division by zero");
        return Ratio(num_ * o.den_, den_ * o.num_);
    }

    Ratio pow(unsigned e) const {
        Ratio r = integer(1);
        Ratio b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /**
     * Parses "a/b", an integer, or a plain decimal ("0.05" -> 1/20).
     * Decimals convert exactly; there is no binary-float round trip.
     */
    static Ratio parse(const std::string& s);

    std::string str() const {
        std::string r = num_.str();
        if (den_ != 1) r += "/" + den_.str();
        return r;
    }

    double to_double() const {
        return static_cast<double>(boost::multiprecision::cpp_rational(num_, den_));
    }

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("Ratio: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        bigint g = boost::multiprecision::gcd(num_ < 0 ? bigint(-num_) : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    bigint num_, den_;
};

/**
 * Exact density: a pair of integer counts with num <= den. Only a carrier;
 * all ordering questions are delegated to Ratio / Threshold so that block
 * tuples with different denominators compare exactly.
 */
struct Density {
    long long num = 0;
    long long den = 1;

    Ratio ratio() const { return Ratio(num, den); }
};

/**
 * A threshold of the form coef * base^(1/root) with rational coef, base.
 * Every irrational bound in the sources (4 eps^{1/16}, 28 eps^{1/64},
 * sqrt(delta)|B|, ...) is an instance, so one exact comparator covers them
 * all: f < coef*base^{1/root}  <=>  f^root < coef^root * base  (f, coef >= 0),
 * decided by big-integer cross multiplication.
 */
class Threshold {
public:
    static Threshold ratio(const Ratio& eps) { return Threshold(Ratio::integer(1), eps, 1); }
    static Threshold root(Ratio coef, Ratio base, unsigned r) { return Threshold(std::move(coef), std::move(base), r); }

    const Ratio& coef() const { return coef_; }
    const Ratio& base() const { return base_; }
    unsigned root_exp() const { return root_; }

    // sign(f - coef*base^{1/root}) for f = c/t >= 0.
    int cmp_fraction(long long c, long long t) const {
        // Audits fire this millions of times with a plain rational threshold;
        // 128-bit cross multiplication settles those without touching bigint.
        if (fast_ && c >= 0 && t > 0) {
            unsigned __int128 lhs = static_cast<unsigned __int128>(c) * fcd_ * fbd_;
            unsigned __int128 rhs = static_cast<unsigned __int128>(t) * fcn_ * fbn_;
            return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
        }
        return cmp_fraction(Ratio(c, t));
    }
    int cmp_fraction(const Ratio& f) const {
        bigint lhs = pow_big(f.num(), root_) * pow_big(coef_.den(), root_) * base_.den();
        bigint rhs = pow_big(coef_.num(), root_) * base_.num() * pow_big(f.den(), root_);
        return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
    }

    // f < theta
    bool below(long long c, long long t) const { return cmp_fraction(c, t) < 0; }
    bool below(const Ratio& f) const { return cmp_fraction(f) < 0; }
    // f <= theta
    bool below_eq(long long c, long long t) const { return cmp_fraction(c, t) <= 0; }
    bool below_eq(const Ratio& f) const { return cmp_fraction(f) <= 0; }
    // f > 1 - theta, i.e. (t-c)/t < theta
    bool above_one_minus(long long c, long long t) const { return below(t - c, t); }
    // f >= 1 - theta
    bool above_eq_one_minus(long long c, long long t) const { return below_eq(t - c, t); }

    // Strict homogeneity interval [0, theta) u (1-theta, 1].
    bool in_hom_interval(long long c, long long t) const {
        return below(c, t) || above_one_minus(c, t);
    }

    // Largest integer s with s <= theta * scale (the "floor(sqrt(delta)*|R|)"
    // pattern when root = 2).
    long long floor_scaled(long long scale) const;

    std::string str() const;

private:
    Threshold(Ratio coef, Ratio base, unsigned r) : coef_(std::move(coef)), base_(std::move(base)), root_(r) {
        if (r == 0) throw std::domain_error("Threshold: zero root");
        if (coef_.num() < 0 || base_.num() < 0) throw std::domain_error("Threshold: negative");
        if (root_ == 1) {
            auto fits = [](const bigint& v) { return v >= 0 && v < (bigint(1) << 32); };
            if (fits(coef_.num()) && fits(coef_.den()) && fits(base_.num()) && fits(base_.den())) {
                fast_ = true;
                fcn_ = static_cast<std::uint64_t>(coef_.num());
                fcd_ = static_cast<std::uint64_t>(coef_.den());
                fbn_ = static_cast<std::uint64_t>(base_.num());
                fbd_ = static_cast<std::uint64_t>(base_.den());
            }
        }
    }

    static bigint pow_big(const bigint& b, unsigned e) {
        bigint r = 1, x = b;
        while (e) {
            if (e & 1) r *= x;
            x *= x;
            e >>= 1;
        }
        return r;
    }

    Ratio coef_, base_;
    unsigned root_;
    bool fast_ = false;
    std::uint64_t fcn_ = 0, fcd_ = 1, fbn_ = 0, fbd_ = 1;
};

// Exact m-th root of a rational when it is a perfect power; used by the
// constants module for spot checks like (2^-64)^{1/16} = 2^-4.
bool try_exact_root(const Ratio& x, unsigned m, Ratio& out);

} // namespace hompart
