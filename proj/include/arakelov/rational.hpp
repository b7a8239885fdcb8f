// Exact rational arithmetic on 128-bit integers, sized for the exact
// evaluation mode of the alternating binomial sums and harmonic numbers
// at small n (n <= 20 keeps every intermediate well inside __int128).

#pragma once

#include <cstdint>
#include <string>

#include "arakelov/exceptions.hpp"

namespace arakelov {

class Rational {
  public:
    using int128 = __int128;

    Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1)
        : num_(numerator), den_(denominator) {
        normalize();
    }

    static Rational from_int128(int128 numerator, int128 denominator) {
        Rational r;
        r.num_ = numerator;
        r.den_ = denominator;
        r.normalize();
        return r;
    }

    Rational operator+(const Rational& o) const {
        return from_int128(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                           checked_mul(den_, o.den_));
    }
    Rational operator-(const Rational& o) const {
        return from_int128(checked_add(checked_mul(num_, o.den_), -checked_mul(o.num_, den_)),
                           checked_mul(den_, o.den_));
    }
    Rational operator*(const Rational& o) const {
        return from_int128(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw OverflowError("rational division by zero");
        return from_int128(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
    }
    Rational operator-() const { return from_int128(-num_, den_); }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string to_string() const {
        std::string s = int128_to_string(num_);
        if (den_ != 1) s += "/" + int128_to_string(den_);
        return s;
    }

    int128 numerator() const { return num_; }
    int128 denominator() const { return den_; }

  private:
    static int128 checked_mul(int128 a, int128 b) {
        if (a == 0 || b == 0) return 0;
        int128 r = a * b;
        if (r / b != a) throw OverflowError("rational arithmetic overflow");
        return r;
    }
    static int128 checked_add(int128 a, int128 b) {
        int128 r = a + b;
        if ((b > 0 && r < a) || (b < 0 && r > a)) {
            throw OverflowError("rational arithmetic overflow");
        }
        return r;
    }
    static int128 gcd128(int128 a, int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static std::string int128_to_string(int128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        std::string out;
        while (v != 0) {
            int digit = static_cast<int>(neg ? -(v % 10) : (v % 10));
            out.insert(out.begin(), static_cast<char>('0' + digit));
            v /= 10;
        }
        if (neg) out.insert(out.begin(), '-');
        return out;
    }

    void normalize() {
        if (den_ == 0) throw OverflowError("rational with zero denominator");
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        int128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    int128 num_ = 0;
    int128 den_ = 1;
};

} // namespace arakelov
