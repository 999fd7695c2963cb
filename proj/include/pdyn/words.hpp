#pragma once

#include "pdyn/rational.hpp"

#include <optional>
#include <string>

namespace pdyn {

// Eventually periodic bi-infinite symbol sequence over digits '0'..'9':
//
//   s_n = core[n - offset]                            offset <= n < offset+|core|
//   s_n = left[(n - offset) mod |left|]               n < offset
//   s_n = right[(n - offset - |core|) mod |right|]    n >= offset+|core|
//
// left and right are non-empty; core may be empty. This class is closed under
// the shift and its inverse, contains all periodic points, and keeps the
// dyadic metric exact.
struct BiSeq {
  std::string left = "0";
  std::string core;
  std::string right = "0";
  long long offset = 0;

  char at(long long n) const;

  // sigma^m, where (sigma s)_n = s_{n+1}
  BiSeq shifted(long long m) const;

  // materializes [a, b] into core so symbols there can be edited in place
  void ensure_core_covers(long long a, long long b);
  void set_symbol(long long n, char c);

  std::string window(long long a, long long b) const;  // s_a .. s_b inclusive

  // fully periodic point with s_n = word[n mod |word|]
  static BiSeq periodic(const std::string& word);
  static BiSeq constant(char c) { return periodic(std::string(1, c)); }

  // Scan bound past which two sequences are determined by their periods:
  // disagreement, equality and distance checks only look at |n| <= bound.
  static long long compare_bound(const BiSeq& a, const BiSeq& b);

  std::string encode() const;                    // "left|core|right@offset"
  static BiSeq decode(const std::string& text);  // throws Error(ParseError)
};

// min |n| with a_n != b_n, or nullopt when the sequences are equal
std::optional<long long> first_disagreement(const BiSeq& a, const BiSeq& b);

bool biseq_equal(const BiSeq& a, const BiSeq& b);

// d(a, b) = 2^(-min{|n| : a_n != b_n}), d(a, a) = 0. Exact dyadic.
Rat biseq_distance(const BiSeq& a, const BiSeq& b);

// Eventually periodic one-sided sequence: s_n = core[n] for n < |core|,
// else tail[(n - |core|) mod |tail|]; indices n >= 0, tail non-empty.
struct OneSeq {
  std::string core;
  std::string tail = "0";

  char at(long long n) const;
  OneSeq shifted(long long m) const;  // m >= 0 only
  void ensure_core_covers(long long b);
  void set_symbol(long long n, char c);
  std::string window(long long a, long long b) const;

  static long long compare_bound(const OneSeq& a, const OneSeq& b);

  std::string encode() const;  // "core|tail"
  static OneSeq decode(const std::string& text);
};

std::optional<long long> first_disagreement(const OneSeq& a, const OneSeq& b);
bool oneseq_equal(const OneSeq& a, const OneSeq& b);
// d(a, b) = 2^(-min{n >= 0 : a_n != b_n})
Rat oneseq_distance(const OneSeq& a, const OneSeq& b);

}  // namespace pdyn
