#pragma once

// Arbitrary-precision dyadic scalars m * 2^e with directed rounding.
//
// A Dyadic is kept in canonical form: the mantissa is zero or odd, so every
// value has exactly one representation and equality is structural.  Addition,
// subtraction and multiplication are exact; division and other inexact
// operations go through the directed-rounding entry points below.

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "boxroot/errors.hpp"

namespace boxroot {

enum class RoundDir { Down, Up }; // toward -inf / toward +inf

class Dyadic {
public:
    Dyadic() : mant_(0), exp_(0) {}
    Dyadic(long v) : mant_(v), exp_(0) { canonicalize(); }
    Dyadic(int v) : Dyadic(static_cast<long>(v)) {}
    Dyadic(mpz_class m, long e) : mant_(std::move(m)), exp_(e) { canonicalize(); }

    static Dyadic pow2(long k) { return Dyadic(mpz_class(1), k); }

    // Doubles are dyadic; the conversion is exact.  NaN/inf are rejected.
    static Dyadic from_double(double v) {
        if (!(v == v) || v == std::numeric_limits<double>::infinity() ||
            v == -std::numeric_limits<double>::infinity())
            throw DomainError("from_double: non-finite value");
        if (v == 0.0) return Dyadic();
        int e = 0;
        double frac = std::frexp(v, &e); // |frac| in [0.5, 1)
        mpz_class m(frac * 9007199254740992.0); // 2^53, exact
        return Dyadic(m, static_cast<long>(e) - 53);
    }

    const mpz_class& mantissa() const { return mant_; }
    long exponent() const { return exp_; }

    bool is_zero() const { return mant_ == 0; }
    int sign() const { return sgn(mant_); }

    // Bits in |mantissa|; 0 for zero.
    long bit_length() const {
        if (mant_ == 0) return 0;
        return static_cast<long>(mpz_sizeinbase(mant_.get_mpz_t(), 2));
    }

    // Smallest k with |value| <= 2^k (value nonzero).
    long mag2() const {
        assert(!is_zero());
        return exp_ + bit_length();
    }

    Dyadic operator-() const {
        Dyadic r;
        r.mant_ = -mant_;
        r.exp_ = exp_;
        return r;
    }

    Dyadic abs() const { return sign() < 0 ? -*this : *this; }

    // Exact scaling by 2^k.
    Dyadic ldexp(long k) const {
        if (is_zero()) return Dyadic();
        Dyadic r;
        r.mant_ = mant_;
        r.exp_ = exp_ + k;
        return r;
    }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        long e = std::min(a.exp_, b.exp_);
        mpz_class m = shifted(a, e) + shifted(b, e);
        return Dyadic(std::move(m), e);
    }

    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero() || b.is_zero()) return Dyadic();
        Dyadic r;
        r.mant_ = a.mant_ * b.mant_; // odd * odd stays odd
        r.exp_ = a.exp_ + b.exp_;
        return r;
    }

    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    bool operator==(const Dyadic& o) const {
        return exp_ == o.exp_ && mant_ == o.mant_; // canonical form
    }

    std::strong_ordering operator<=>(const Dyadic& o) const {
        int c = compare(*this, o);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    // Round half away handled implicitly: conversion may overflow to +-inf for
    // enormous exponents; used for display and heuristics only.
    double to_double() const {
        if (is_zero()) return 0.0;
        long len = bit_length();
        if (len <= 52) return mant_.get_d() * std::ldexp(1.0, static_cast<int>(clamp_exp(exp_)));
        mpz_class top = mant_ >> (len - 53);
        return top.get_d() * std::ldexp(1.0, static_cast<int>(clamp_exp(exp_ + len - 53)));
    }

    // Normative serialization: sign, hexadecimal mantissa, decimal exponent.
    // Example: 3/4 = 3 * 2^-2  ->  "+0x3p-2".  Zero is "+0x0p+0".
    std::string to_hex_string() const {
        std::string s = sign() < 0 ? "-" : "+";
        s += "0x";
        mpz_class a = ::abs(mant_);
        s += a.get_str(16);
        s += 'p';
        if (exp_ >= 0) s += '+';
        s += std::to_string(exp_);
        return s;
    }

    static std::optional<Dyadic> from_hex_string(std::string_view sv) {
        if (sv.size() < 6) return std::nullopt;
        int sg = 1;
        if (sv[0] == '+') sg = 1;
        else if (sv[0] == '-') sg = -1;
        else return std::nullopt;
        sv.remove_prefix(1);
        if (sv.substr(0, 2) != "0x") return std::nullopt;
        sv.remove_prefix(2);
        auto p = sv.find('p');
        if (p == std::string_view::npos || p == 0) return std::nullopt;
        std::string mant_str(sv.substr(0, p));
        std::string exp_str(sv.substr(p + 1));
        if (exp_str.empty()) return std::nullopt;
        mpz_class m;
        if (m.set_str(mant_str, 16) != 0) return std::nullopt;
        errno = 0;
        char* end = nullptr;
        long e = std::strtol(exp_str.c_str(), &end, 10);
        if (errno != 0 || end == exp_str.c_str() || *end != '\0') return std::nullopt;
        if (sg < 0) m = -m;
        return Dyadic(std::move(m), e);
    }

    // Human-facing decimal rendering, approximate beyond sig_digits.
    std::string to_decimal_string(std::size_t sig_digits = 17) const;

private:
    static long clamp_exp(long e) {
        if (e > 1 << 20) return 1 << 20;
        if (e < -(1 << 20)) return -(1 << 20);
        return e;
    }

    static mpz_class shifted(const Dyadic& d, long to_exp) {
        assert(d.exp_ >= to_exp);
        mpz_class r = d.mant_ << static_cast<unsigned long>(d.exp_ - to_exp);
        return r;
    }

    static int compare(const Dyadic& a, const Dyadic& b) {
        int sa = a.sign(), sb = b.sign();
        if (sa != sb) return sa < sb ? -1 : 1;
        if (sa == 0) return 0;
        // Same nonzero sign: compare magnitudes via mag2 first to bound shifts.
        long ma = a.mag2(), mb = b.mag2();
        if (ma != mb) {
            int mag_cmp = ma < mb ? -1 : 1;
            return sa > 0 ? mag_cmp : -mag_cmp;
        }
        long e = std::min(a.exp_, b.exp_);
        int c = cmp(shifted(a, e), shifted(b, e));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }

    void canonicalize() {
        if (mant_ == 0) {
            exp_ = 0;
            return;
        }
        auto tz = mpz_scan1(mant_.get_mpz_t(), 0);
        if (tz > 0) {
            mant_ >>= tz;
            exp_ += static_cast<long>(tz);
        }
    }

    mpz_class mant_;
    long exp_;
};

inline Dyadic min(const Dyadic& a, const Dyadic& b) { return a < b ? a : b; }
inline Dyadic max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

// Round to at most `bits` significant mantissa bits in the given direction.
inline Dyadic round_dir(const Dyadic& x, long bits, RoundDir dir) {
    assert(bits >= 1);
    long len = x.bit_length();
    if (len <= bits) return x;
    unsigned long shift = static_cast<unsigned long>(len - bits);
    mpz_class q;
    if (dir == RoundDir::Down)
        mpz_fdiv_q_2exp(q.get_mpz_t(), x.mantissa().get_mpz_t(), shift);
    else
        mpz_cdiv_q_2exp(q.get_mpz_t(), x.mantissa().get_mpz_t(), shift);
    return Dyadic(std::move(q), x.exponent() + static_cast<long>(shift));
}

inline Dyadic round_down(const Dyadic& x, long bits) { return round_dir(x, bits, RoundDir::Down); }
inline Dyadic round_up(const Dyadic& x, long bits) { return round_dir(x, bits, RoundDir::Up); }

// Magnitude never decreases; used for upper bounds on nonnegative errors.
inline Dyadic round_away(const Dyadic& x, long bits) {
    return round_dir(x, bits, x.sign() < 0 ? RoundDir::Down : RoundDir::Up);
}

// Upper bound on the rounding error of round_dir(x, bits, *): one ulp.
inline Dyadic round_error_bound(const Dyadic& x, long bits) {
    long len = x.bit_length();
    if (len <= bits) return Dyadic();
    return Dyadic::pow2(x.exponent() + (len - bits));
}

// Directed quotient a/b with about `bits` significant bits.
inline Dyadic div_dir(const Dyadic& a, const Dyadic& b, long bits, RoundDir dir) {
    if (b.is_zero()) throw DomainError("div_dir: division by zero");
    if (a.is_zero()) return Dyadic();
    long k = bits + 2 + b.bit_length() - a.bit_length();
    mpz_class num = a.mantissa(), den = b.mantissa();
    if (k > 0) num <<= static_cast<unsigned long>(k);
    else if (k < 0) den <<= static_cast<unsigned long>(-k);
    mpz_class q;
    if (dir == RoundDir::Down)
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Dyadic r(std::move(q), a.exponent() - b.exponent() - k);
    return round_dir(r, bits, dir);
}

// Upper bound on sqrt(x), about `bits` significant bits; x must be >= 0.
inline Dyadic sqrt_up(const Dyadic& x, long bits) {
    if (x.sign() < 0) throw DomainError("sqrt_up: negative argument");
    if (x.is_zero()) return Dyadic();
    long len = x.bit_length();
    long s = 2 * bits + 2 - len;
    if (s < 0) s = 0;
    if ((x.exponent() - s) % 2 != 0) ++s;
    mpz_class scaled = x.mantissa() << static_cast<unsigned long>(s);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t()); // floor sqrt
    r += 1;
    return Dyadic(std::move(r), (x.exponent() - s) / 2);
}

inline std::string Dyadic::to_decimal_string(std::size_t sig_digits) const {
    if (is_zero()) return "0";
    mpz_class a = ::abs(mant_);
    long e = exp_;
    std::string digits;
    long dec_exp; // value = 0.digits * 10^dec_exp
    if (e >= 0) {
        mpz_class v = a << static_cast<unsigned long>(e);
        digits = v.get_str(10);
        dec_exp = static_cast<long>(digits.size());
    } else {
        // a / 2^|e| = a * 5^|e| / 10^|e|
        mpz_class five = 5;
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), five.get_mpz_t(), static_cast<unsigned long>(-e));
        mpz_class v = a * scale;
        digits = v.get_str(10);
        dec_exp = static_cast<long>(digits.size()) + e; // e < 0
    }
    bool truncated = false;
    if (digits.size() > sig_digits) {
        digits.resize(sig_digits);
        truncated = true;
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string s = sign() < 0 ? "-" : "";
    if (dec_exp >= 1 && dec_exp <= static_cast<long>(digits.size())) {
        s += digits.substr(0, static_cast<std::size_t>(dec_exp));
        if (dec_exp < static_cast<long>(digits.size()))
            s += "." + digits.substr(static_cast<std::size_t>(dec_exp));
    } else if (dec_exp <= 0 && dec_exp > -6) {
        s += "0.";
        s += std::string(static_cast<std::size_t>(-dec_exp), '0');
        s += digits;
    } else if (dec_exp > 0 && dec_exp <= static_cast<long>(digits.size()) + 6) {
        s += digits;
        s += std::string(static_cast<std::size_t>(dec_exp - static_cast<long>(digits.size())), '0');
    } else {
        s += digits.substr(0, 1);
        if (digits.size() > 1) s += "." + digits.substr(1);
        s += "e" + std::to_string(dec_exp - 1);
    }
    if (truncated) s += "~";
    return s;
}

struct RoundingContext {
    long precision_bits = 64;       // target relative precision p
    long max_precision_bits = 8192; // escalation ceiling

    RoundingContext with_precision(long p) const {
        RoundingContext c = *this;
        c.precision_bits = p;
        return c;
    }
};

} // namespace boxroot
