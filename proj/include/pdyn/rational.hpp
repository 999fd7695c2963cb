#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace pdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;  // always kept in lowest terms

// 2^e for any integer e.
Rat pow2(int e);

// Smallest L >= 0 with 2^(-L) <= delta. Requires delta > 0. Capped at `cap`
// (returns cap when delta is that small).
int log2_ceil_inv(const Rat& delta, int cap = 256);

// Smallest r >= 0 with 2^(-(r+1)) < eps: symbol agreement out to radius r
// forces shift-metric distance strictly below eps. Requires eps > 0.
int strict_agreement_radius(const Rat& eps, int cap = 256);

// Exact log2 of a positive integer if it is a power of two.
bool is_power_of_two(const BigInt& n, long long* log2_out);

// Parses "3/4", "-7", "0.25", "1e-3"-free plain decimals. Throws Error(ParseError).
Rat rat_from_string(const std::string& s);

// Serializes as "num/den" (den always present), the wire format for exact values.
std::string rat_to_string(const Rat& r);

double rat_to_double(const Rat& r);
Rat rat_from_double(double x);  // exact binary value of the double

// Bit size of numerator plus denominator; used to guard against blowup in
// exact power iterations.
size_t rat_bits(const Rat& r);

}  // namespace pdyn
