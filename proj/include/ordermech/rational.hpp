#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ordermech {

// Exact rational scalar used throughout the library. All curve and dual
// computations are exact; doubles appear only at I/O boundaries.
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rat(num, den);
}

// Doubles are dyadic rationals; the conversion is exact.
Rat rat_from_double(double x);

// Accepts "p/q", plain integers, and decimal strings ("0.125", "-3.5e2").
Rat rat_from_string(const std::string& s);

// Shortest faithful rendering: integers and short decimals as-is,
// everything else as "p/q".
std::string rat_to_string(const Rat& x);

// Fixed-precision decimal rendering (used by CSV export).
std::string rat_to_decimal(const Rat& x, int significant_digits = 12);

}  // namespace ordermech
