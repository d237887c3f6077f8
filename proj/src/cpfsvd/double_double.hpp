#pragma once

// Double-double ("pair") arithmetic: an unevaluated sum hi + lo of two
// binary64 numbers with |lo| <= ulp(hi)/2, giving roughly 106 bits of mantissa.

#include <cmath>
#include <compare>
#include <string>

namespace cpfsvd {

class DoubleDouble {
public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x), lo_(0.0) {}
    constexpr DoubleDouble(double hi, double lo) : hi_(hi), lo_(lo) {}

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }

    /// Rounds to the nearest binary64.
    constexpr double to_double() const { return hi_ + lo_; }
    explicit constexpr operator double() const { return to_double(); }

    DoubleDouble operator-() const { return {-hi_, -lo_}; }

    DoubleDouble& operator+=(const DoubleDouble& b);
    DoubleDouble& operator-=(const DoubleDouble& b) { return *this += -b; }
    DoubleDouble& operator*=(const DoubleDouble& b);
    DoubleDouble& operator/=(const DoubleDouble& b);

    friend DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b) { return a += b; }
    friend DoubleDouble operator-(DoubleDouble a, const DoubleDouble& b) { return a -= b; }
    friend DoubleDouble operator*(DoubleDouble a, const DoubleDouble& b) { return a *= b; }
    friend DoubleDouble operator/(DoubleDouble a, const DoubleDouble& b) { return a /= b; }

    friend bool operator==(const DoubleDouble& a, const DoubleDouble& b)
    {
        return a.hi_ == b.hi_ && a.lo_ == b.lo_;
    }
    friend std::partial_ordering operator<=>(const DoubleDouble& a, const DoubleDouble& b)
    {
        if (auto c = a.hi_ <=> b.hi_; c != 0)
            return c;
        return a.lo_ <=> b.lo_;
    }

    /// 1/ulp(1) of the pair format, i.e. 2^-104.
    static constexpr double epsilon() { return 4.93038065763132e-32; }

private:
    double hi_ = 0.0;
    double lo_ = 0.0;
};

namespace dd {

// Error-free transformations.
inline DoubleDouble two_sum(double a, double b)
{
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline DoubleDouble quick_two_sum(double a, double b)
{
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

inline DoubleDouble two_prod(double a, double b)
{
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace dd

inline DoubleDouble& DoubleDouble::operator+=(const DoubleDouble& b)
{
    DoubleDouble s = dd::two_sum(hi_, b.hi_);
    DoubleDouble t = dd::two_sum(lo_, b.lo_);
    double e = s.lo_ + t.hi_;
    s = dd::quick_two_sum(s.hi_, e);
    e = s.lo_ + t.lo_;
    *this = dd::quick_two_sum(s.hi_, e);
    return *this;
}

inline DoubleDouble& DoubleDouble::operator*=(const DoubleDouble& b)
{
    DoubleDouble p = dd::two_prod(hi_, b.hi_);
    double e = p.lo_ + (hi_ * b.lo_ + lo_ * b.hi_);
    *this = dd::quick_two_sum(p.hi_, e);
    return *this;
}

inline DoubleDouble& DoubleDouble::operator/=(const DoubleDouble& b)
{
    double q1 = hi_ / b.hi_;
    DoubleDouble r = *this - DoubleDouble(q1) * b;
    double q2 = r.hi_ / b.hi_;
    r -= DoubleDouble(q2) * b;
    double q3 = r.hi_ / b.hi_;
    DoubleDouble q = dd::quick_two_sum(q1, q2);
    *this = q + DoubleDouble(q3);
    return *this;
}

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi() < 0.0 ? -a : a; }
inline DoubleDouble conj(const DoubleDouble& a) { return a; }
inline DoubleDouble ldexp(const DoubleDouble& a, int e)
{
    return {std::ldexp(a.hi(), e), std::ldexp(a.lo(), e)};
}
inline bool isfinite(const DoubleDouble& a) { return std::isfinite(a.hi()); }

DoubleDouble sqrt(const DoubleDouble& a);
DoubleDouble floor(const DoubleDouble& a);
DoubleDouble exp(const DoubleDouble& a);
DoubleDouble log(const DoubleDouble& a);
DoubleDouble pow(const DoubleDouble& base, const DoubleDouble& exponent);

/// Decimal scientific notation with `digits` significant digits (1..32).
std::string to_string(const DoubleDouble& a, int digits = 32);

/// Parses decimal text (as produced by to_string) to double-double accuracy.
DoubleDouble parse_double_double(const std::string& text);

} // namespace cpfsvd
