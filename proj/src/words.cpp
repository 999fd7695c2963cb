#include "pdyn/words.hpp"

#include "pdyn/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pdyn {

namespace {

long long pos_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long lcm_capped(long long a, long long b, long long cap = 1 << 16) {
  long long g = std::gcd(a, b);
  long long l = a / g * b;
  return std::min(l, cap);
}

}  // namespace

char BiSeq::at(long long n) const {
  long long rel = n - offset;
  long long clen = static_cast<long long>(core.size());
  if (rel >= 0 && rel < clen) return core[static_cast<size_t>(rel)];
  if (rel < 0) return left[static_cast<size_t>(pos_mod(rel, (long long)left.size()))];
  return right[static_cast<size_t>(pos_mod(rel - clen, (long long)right.size()))];
}

BiSeq BiSeq::shifted(long long m) const {
  BiSeq s = *this;
  s.offset -= m;
  return s;
}

void BiSeq::ensure_core_covers(long long a, long long b) {
  if (a > b) return;
  long long clen = static_cast<long long>(core.size());
  long long lo = std::min(a, offset);
  long long hi = std::max(b, offset + clen - 1);
  std::string fresh;
  fresh.reserve(static_cast<size_t>(hi - lo + 1));
  for (long long n = lo; n <= hi; ++n) fresh += at(n);
  // Re-phase the periodic tails against the new core boundaries so every
  // symbol of the sequence is unchanged.
  std::string new_left = window(lo - (long long)left.size(), lo - 1);
  std::string new_right = window(hi + 1, hi + (long long)right.size());
  core = std::move(fresh);
  left = std::move(new_left);
  right = std::move(new_right);
  offset = lo;
}

void BiSeq::set_symbol(long long n, char c) {
  ensure_core_covers(n, n);
  core[static_cast<size_t>(n - offset)] = c;
}

std::string BiSeq::window(long long a, long long b) const {
  std::string w;
  for (long long n = a; n <= b; ++n) w += at(n);
  return w;
}

BiSeq BiSeq::periodic(const std::string& word) {
  if (word.empty()) throw Error("PreconditionViolation", "empty periodic word");
  BiSeq s;
  s.left = word;
  s.core.clear();
  s.right = word;
  s.offset = 0;
  return s;
}

long long BiSeq::compare_bound(const BiSeq& a, const BiSeq& b) {
  long long clen_a = static_cast<long long>(a.core.size());
  long long clen_b = static_cast<long long>(b.core.size());
  long long right_start = std::max(a.offset + clen_a, b.offset + clen_b);
  long long left_start = std::min(a.offset, b.offset);
  long long lr = lcm_capped((long long)a.right.size(), (long long)b.right.size());
  long long ll = lcm_capped((long long)a.left.size(), (long long)b.left.size());
  return std::max(std::llabs(right_start + lr), std::llabs(left_start - ll)) + 1;
}

std::optional<long long> first_disagreement(const BiSeq& a, const BiSeq& b) {
  long long bound = BiSeq::compare_bound(a, b);
  for (long long m = 0; m <= bound; ++m) {
    if (a.at(m) != b.at(m)) return m;
    if (m > 0 && a.at(-m) != b.at(-m)) return m;
  }
  return std::nullopt;
}

bool biseq_equal(const BiSeq& a, const BiSeq& b) {
  return !first_disagreement(a, b).has_value();
}

Rat biseq_distance(const BiSeq& a, const BiSeq& b) {
  auto m = first_disagreement(a, b);
  if (!m) return Rat(0);
  return pow2(static_cast<int>(-*m));
}

std::string BiSeq::encode() const {
  std::ostringstream os;
  os << left << "|" << core << "|" << right << "@" << offset;
  return os.str();
}

BiSeq BiSeq::decode(const std::string& text) {
  auto p1 = text.find('|');
  auto p2 = text.find('|', p1 == std::string::npos ? 0 : p1 + 1);
  auto at_pos = text.rfind('@');
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw Error("ParseError", "bad bi-sequence '" + text + "'");
  BiSeq s;
  s.left = text.substr(0, p1);
  s.core = text.substr(p1 + 1, p2 - p1 - 1);
  if (at_pos != std::string::npos && at_pos > p2) {
    s.right = text.substr(p2 + 1, at_pos - p2 - 1);
    s.offset = std::stoll(text.substr(at_pos + 1));
  } else {
    s.right = text.substr(p2 + 1);
    s.offset = 0;
  }
  if (s.left.empty() || s.right.empty())
    throw Error("ParseError", "bi-sequence periods must be non-empty: '" + text + "'");
  return s;
}

char OneSeq::at(long long n) const {
  long long clen = static_cast<long long>(core.size());
  if (n < clen) return core[static_cast<size_t>(n)];
  return tail[static_cast<size_t>(pos_mod(n - clen, (long long)tail.size()))];
}

OneSeq OneSeq::shifted(long long m) const {
  if (m < 0) throw Error("NegativeIterateOnNonInvertible", "one-sided shift");
  OneSeq s = *this;
  for (long long i = 0; i < m; ++i) {
    if (!s.core.empty()) {
      s.core.erase(s.core.begin());
    } else {
      std::rotate(s.tail.begin(), s.tail.begin() + 1, s.tail.end());
    }
  }
  return s;
}

void OneSeq::ensure_core_covers(long long b) {
  long long clen = static_cast<long long>(core.size());
  if (b < clen) return;
  std::string fresh = core;
  for (long long n = clen; n <= b; ++n) fresh += at(n);
  std::string new_tail = window(b + 1, b + (long long)tail.size());
  core = std::move(fresh);
  tail = std::move(new_tail);
}

void OneSeq::set_symbol(long long n, char c) {
  if (n < 0) throw Error("DomainViolation", "negative index in one-sided sequence");
  ensure_core_covers(n);
  core[static_cast<size_t>(n)] = c;
}

std::string OneSeq::window(long long a, long long b) const {
  std::string w;
  for (long long n = std::max(a, 0LL); n <= b; ++n) w += at(n);
  return w;
}

long long OneSeq::compare_bound(const OneSeq& a, const OneSeq& b) {
  long long start = std::max((long long)a.core.size(), (long long)b.core.size());
  return start + lcm_capped((long long)a.tail.size(), (long long)b.tail.size()) + 1;
}

std::optional<long long> first_disagreement(const OneSeq& a, const OneSeq& b) {
  long long bound = OneSeq::compare_bound(a, b);
  for (long long n = 0; n <= bound; ++n)
    if (a.at(n) != b.at(n)) return n;
  return std::nullopt;
}

bool oneseq_equal(const OneSeq& a, const OneSeq& b) {
  return !first_disagreement(a, b).has_value();
}

Rat oneseq_distance(const OneSeq& a, const OneSeq& b) {
  auto m = first_disagreement(a, b);
  if (!m) return Rat(0);
  return pow2(static_cast<int>(-*m));
}

std::string OneSeq::encode() const { return core + "|" + tail; }

OneSeq OneSeq::decode(const std::string& text) {
  auto p = text.rfind('|');
  if (p == std::string::npos) throw Error("ParseError", "bad one-sided sequence '" + text + "'");
  OneSeq s;
  s.core = text.substr(0, p);
  s.tail = text.substr(p + 1);
  if (s.tail.empty()) throw Error("ParseError", "one-sided tail must be non-empty");
  return s;
}

}  // namespace pdyn
