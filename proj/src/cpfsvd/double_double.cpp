#include "cpfsvd/double_double.hpp"

#include <cctype>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cpfsvd {

namespace {

constexpr DoubleDouble kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

// 1/k! for k = 3..17
constexpr DoubleDouble kInvFact[] = {
    {1.66666666666666657e-01, 9.25185853854297066e-18},
    {4.16666666666666644e-02, 2.31296463463574266e-18},
    {8.33333333333333322e-03, 1.15648231731787138e-19},
    {1.38888888888888894e-03, -5.30054395437357706e-20},
    {1.98412698412698413e-04, 1.72095582934207053e-22},
    {2.48015873015873016e-05, 2.15119478667758816e-23},
    {2.75573192239858925e-06, -1.85839327404647208e-22},
    {2.75573192239858883e-07, 2.37677146222502973e-23},
    {2.50521083854417202e-08, -1.44881407093591197e-24},
    {2.08767569878681002e-09, -1.20734505911325997e-25},
    {1.60590438368216133e-10, 1.25852945887520981e-26},
    {1.14707455977297245e-11, 2.06555127528307454e-28},
    {7.64716373181981641e-13, 7.03872877733453001e-30},
    {4.77947733238738525e-14, 4.39920548583408126e-31},
    {2.81145725434552060e-15, 1.65088427308614326e-31},
};

DoubleDouble sqr(const DoubleDouble& a) { return a * a; }

DoubleDouble power_of_ten(int e)
{
    DoubleDouble result(1.0);
    DoubleDouble base(10.0);
    int n = e < 0 ? -e : e;
    while (n > 0) {
        if (n & 1)
            result *= base;
        base *= base;
        n >>= 1;
    }
    return e < 0 ? DoubleDouble(1.0) / result : result;
}

} // namespace

DoubleDouble sqrt(const DoubleDouble& a)
{
    if (a.hi() == 0.0)
        return {};
    if (a.hi() < 0.0)
        return {std::numeric_limits<double>::quiet_NaN()};
    double x = 1.0 / std::sqrt(a.hi());
    double ax = a.hi() * x;
    return DoubleDouble(ax) + DoubleDouble((a - sqr(DoubleDouble(ax))).hi() * (x * 0.5));
}

DoubleDouble floor(const DoubleDouble& a)
{
    double hi = std::floor(a.hi());
    double lo = 0.0;
    if (hi == a.hi()) {
        lo = std::floor(a.lo());
        return dd::quick_two_sum(hi, lo);
    }
    return {hi, lo};
}

DoubleDouble exp(const DoubleDouble& a)
{
    // exp(a) = 2^m * exp(r)^512 with |r| <= ln2/1024
    constexpr double inv_k = 1.0 / 512.0;

    if (a.hi() <= -709.0)
        return {};
    if (a.hi() >= 709.0)
        return {std::numeric_limits<double>::infinity()};
    if (a.hi() == 0.0 && a.lo() == 0.0)
        return {1.0};

    double m = std::floor(a.hi() / kLn2.hi() + 0.5);
    DoubleDouble r = (a - kLn2 * DoubleDouble(m)) * DoubleDouble(inv_k);

    // expm1(r) by Taylor series
    DoubleDouble p = sqr(r);
    DoubleDouble s = r + ldexp(p, -1);
    const double thresh = inv_k * DoubleDouble::epsilon();
    for (const auto& c : kInvFact) {
        p *= r;
        DoubleDouble t = p * c;
        s += t;
        if (std::abs(t.hi()) <= thresh)
            break;
    }

    // (1 + s)^2 - 1 = 2s + s^2, repeated log2(k) times
    for (int i = 0; i < 9; ++i)
        s = ldexp(s, 1) + sqr(s);
    s += DoubleDouble(1.0);
    return ldexp(s, static_cast<int>(m));
}

DoubleDouble log(const DoubleDouble& a)
{
    if (a.hi() <= 0.0)
        return {std::numeric_limits<double>::quiet_NaN()};
    if (a.hi() == 1.0 && a.lo() == 0.0)
        return {};
    // One Newton step on exp(x) = a from the binary64 logarithm.
    DoubleDouble x(std::log(a.hi()));
    x = x + a * exp(-x) - DoubleDouble(1.0);
    return x;
}

DoubleDouble pow(const DoubleDouble& base, const DoubleDouble& exponent)
{
    return exp(exponent * log(base));
}

std::string to_string(const DoubleDouble& a, int digits)
{
    if (digits < 1 || digits > 32)
        throw std::invalid_argument("to_string: digits must be in [1, 32]");
    if (std::isnan(a.hi()))
        return "nan";
    if (std::isinf(a.hi()))
        return a.hi() > 0 ? "inf" : "-inf";

    std::string out;
    DoubleDouble r = a;
    if (r.hi() < 0.0) {
        out += '-';
        r = -r;
    }
    if (r.hi() == 0.0) {
        out += "0.";
        out.append(static_cast<size_t>(digits - 1), '0');
        out += "e+00";
        return out;
    }

    int e = static_cast<int>(std::floor(std::log10(r.hi())));
    r /= power_of_ten(e);
    if (r.hi() >= 10.0) {
        r /= DoubleDouble(10.0);
        ++e;
    } else if (r.hi() < 1.0) {
        r *= DoubleDouble(10.0);
        --e;
    }

    // one guard digit for rounding
    std::vector<int> d(static_cast<size_t>(digits) + 1);
    for (auto& di : d) {
        DoubleDouble f = floor(r);
        di = static_cast<int>(f.to_double());
        r = (r - f) * DoubleDouble(10.0);
    }
    // digit extraction can leave values outside [0, 9]; normalize
    for (size_t i = d.size() - 1; i > 0; --i) {
        while (d[i] < 0) {
            d[i] += 10;
            --d[i - 1];
        }
        while (d[i] > 9) {
            d[i] -= 10;
            ++d[i - 1];
        }
    }
    if (d.back() >= 5) {
        ++d[d.size() - 2];
    }
    d.pop_back();
    for (size_t i = d.size() - 1; i > 0 && d[i] > 9; --i) {
        d[i] -= 10;
        ++d[i - 1];
    }
    if (d[0] > 9) {
        d.insert(d.begin() + 1, 0);
        d[0] = 1;
        d.pop_back();
        ++e;
    }

    out += static_cast<char>('0' + d[0]);
    out += '.';
    for (size_t i = 1; i < d.size(); ++i)
        out += static_cast<char>('0' + d[i]);
    char exp_buf[16];
    std::snprintf(exp_buf, sizeof exp_buf, "e%+03d", e);
    out += exp_buf;
    return out;
}

DoubleDouble parse_double_double(const std::string& text)
{
    size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    DoubleDouble r;
    int exponent = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            r = r * DoubleDouble(10.0) + DoubleDouble(c - '0');
            if (seen_point)
                --exponent;
            seen_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit)
        throw std::invalid_argument("parse_double_double: no digits in '" + text + "'");
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        size_t used = 0;
        exponent += std::stoi(text.substr(i + 1), &used);
        i += 1 + used;
    }
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    if (i != text.size())
        throw std::invalid_argument("parse_double_double: trailing characters in '" + text + "'");
    if (exponent != 0)
        r = exponent > 0 ? r * power_of_ten(exponent) : r / power_of_ten(-exponent);
    return negative ? -r : r;
}

} // namespace cpfsvd
