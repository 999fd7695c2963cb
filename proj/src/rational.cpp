#include "pdyn/rational.hpp"

#include "pdyn/errors.hpp"

#include <cmath>
#include <sstream>

namespace pdyn {

Rat pow2(int e) {
  BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
  return e >= 0 ? Rat(p) : Rat(1, p);
}

int log2_ceil_inv(const Rat& delta, int cap) {
  if (delta <= 0) throw Error("PreconditionViolation", "delta must be positive");
  // smallest L with 1 <= delta * 2^L
  Rat v = delta;
  int L = 0;
  while (v < 1 && L < cap) {
    v *= 2;
    ++L;
  }
  return L;
}

int strict_agreement_radius(const Rat& eps, int cap) {
  if (eps <= 0) throw Error("PreconditionViolation", "eps must be positive");
  // smallest r >= 0 with 2^-(r+1) < eps
  Rat v = eps * 2;  // want 2^-r < 2*eps, i.e. 1 < 2*eps*2^r
  int r = 0;
  while (v <= 1 && r < cap) {
    v *= 2;
    ++r;
  }
  return r;
}

bool is_power_of_two(const BigInt& n, long long* log2_out) {
  if (n <= 0) return false;
  BigInt v = n;
  long long e = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++e;
  }
  if (v != 1) return false;
  if (log2_out) *log2_out = e;
  return true;
}

Rat rat_from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error("ParseError", "empty rational literal");
  auto slash = t.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(t.substr(0, slash));
      BigInt den(t.substr(slash + 1));
      if (den == 0) throw Error("ParseError", "zero denominator in '" + s + "'");
      return Rat(num, den);
    }
    auto dot = t.find('.');
    if (dot == std::string::npos) return Rat(BigInt(t));
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    BigInt num(ip);
    BigInt den(1);
    for (char c : fp) {
      if (!isdigit(static_cast<unsigned char>(c)))
        throw Error("ParseError", "bad decimal '" + s + "'");
      num = num * 10 + (c - '0');
      den *= 10;
    }
    Rat r(num, den);
    return neg ? -r : r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("ParseError", "bad rational literal '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw Error("DomainViolation", "non-finite double");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  long long mant = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(mant);
  return exp >= 0 ? r * pow2(exp) : r * pow2(exp);
}

size_t rat_bits(const Rat& r) {
  return msb(abs(numerator(r)) + 1) + msb(denominator(r) + 1);
}

}  // namespace pdyn
