#include "ordermech/rational.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ordermech {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;

static Rat pow10_rat(long e10) {
    Int ten(10);
    if (e10 >= 0) return Rat(boost::multiprecision::pow(ten, static_cast<unsigned>(e10)));
    return Rat(1) / Rat(boost::multiprecision::pow(ten, static_cast<unsigned>(-e10)));
}

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rat r(mant);
    Int two(2);
    if (exp >= 0)
        r *= Rat(boost::multiprecision::pow(two, static_cast<unsigned>(exp)));
    else
        r /= Rat(boost::multiprecision::pow(two, static_cast<unsigned>(-exp)));
    return r;
}

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat num = rat_from_string(s.substr(0, slash));
        Rat den = rat_from_string(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        return num / den;
    }
    // Decimal / scientific form: parse mantissa exactly, apply 10^exp.
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos) {
        std::string t = s;
        long e10 = 0;
        auto epos = t.find_first_of("eE");
        if (epos != std::string::npos) {
            e10 = std::stol(t.substr(epos + 1));
            t = t.substr(0, epos);
        }
        auto dot = t.find('.');
        if (dot != std::string::npos) {
            e10 -= static_cast<long>(t.size() - dot - 1);
            t.erase(dot, 1);
        }
        if (t.empty() || t == "-" || t == "+") throw std::invalid_argument("bad literal: " + s);
        return Rat(Int(t)) * pow10_rat(e10);
    }
    return Rat(Int(s));
}

std::string rat_to_string(const Rat& x) {
    Int num(numerator(x));
    Int den(denominator(x));
    if (den == 1) return num.str();
    // Render short terminating decimals directly (den = 2^a * 5^b, small).
    Int d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    int digits = std::max(twos, fives);
    if (d == 1 && digits <= 12) {
        Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(digits));
        Int scaled = num * (scale / den);
        bool neg = scaled < 0;
        if (neg) scaled = -scaled;
        std::string body = scaled.str();
        if (static_cast<int>(body.size()) <= digits)
            body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
        body.insert(body.size() - static_cast<size_t>(digits), ".");
        return (neg ? "-" : "") + body;
    }
    return num.str() + "/" + den.str();
}

std::string rat_to_decimal(const Rat& x, int significant_digits) {
    std::ostringstream os;
    os.precision(significant_digits);
    os << x.convert_to<boost::multiprecision::mpf_float_100>();
    return os.str();
}

}  // namespace ordermech
