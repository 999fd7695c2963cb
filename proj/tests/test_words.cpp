#include "pdyn/words.hpp"

#include "pdyn/errors.hpp"

#include <doctest.h>

using namespace pdyn;

TEST_CASE("biseq indexing and periodic extension") {
  BiSeq s;  // ...000.000...
  CHECK(s.at(0) == '0');
  CHECK(s.at(-100) == '0');

  BiSeq p = BiSeq::periodic("01");
  CHECK(p.at(0) == '0');
  CHECK(p.at(1) == '1');
  CHECK(p.at(2) == '0');
  CHECK(p.at(-1) == '1');
  CHECK(p.at(-2) == '0');

  BiSeq m;
  m.left = "01";
  m.core = "111";
  m.right = "10";
  m.offset = -1;
  CHECK(m.at(-1) == '1');
  CHECK(m.at(1) == '1');
  CHECK(m.at(2) == '1');  // right period starts at 2: "10" -> '1'
  CHECK(m.at(3) == '0');
  CHECK(m.at(4) == '1');
  CHECK(m.at(-2) == '1');  // left period ends just before offset: ...0101|111
  CHECK(m.at(-3) == '0');
}

TEST_CASE("shift moves the origin") {
  BiSeq p = BiSeq::periodic("011");
  BiSeq q = p.shifted(2);
  for (long long n = -6; n <= 6; ++n) CHECK(q.at(n) == p.at(n + 2));
}

TEST_CASE("core extension preserves every symbol") {
  BiSeq m;
  m.left = "01";
  m.core = "2";
  m.right = "012";
  m.offset = 3;
  std::vector<char> before;
  for (long long n = -20; n <= 20; ++n) before.push_back(m.at(n));
  m.ensure_core_covers(-7, 11);
  size_t i = 0;
  for (long long n = -20; n <= 20; ++n, ++i) CHECK(m.at(n) == before[i]);
  CHECK(m.offset <= -7);
}

TEST_CASE("set_symbol and window") {
  BiSeq s = BiSeq::periodic("0");
  s.set_symbol(-3, '1');
  s.set_symbol(4, '1');
  CHECK(s.window(-4, 5) == "0100000010");
}

TEST_CASE("equality sees through representation differences") {
  BiSeq a = BiSeq::periodic("0101");
  BiSeq b = BiSeq::periodic("01");
  CHECK(biseq_equal(a, b));
  BiSeq c = b;
  c.set_symbol(7, c.at(7));  // force a core, same sequence
  CHECK(biseq_equal(b, c));
  BiSeq d = b.shifted(1);  // 1010... differs at 0
  CHECK(!biseq_equal(b, d));
  CHECK(biseq_equal(d, b.shifted(-1)));  // period 2
}

TEST_CASE("dyadic distance") {
  BiSeq zero = BiSeq::constant('0');
  BiSeq e0 = zero;
  e0.set_symbol(0, '1');  // ...000.1000...
  CHECK(biseq_distance(e0, zero) == Rat(1));
  BiSeq e3 = zero;
  e3.set_symbol(3, '1');
  CHECK(biseq_distance(e3, zero) == Rat(1, 8));
  BiSeq em2 = zero;
  em2.set_symbol(-2, '1');
  CHECK(biseq_distance(em2, zero) == Rat(1, 4));
  CHECK(biseq_distance(zero, zero) == Rat(0));
}

TEST_CASE("biseq encode round trip") {
  BiSeq m;
  m.left = "01";
  m.core = "110";
  m.right = "1";
  m.offset = -2;
  BiSeq r = BiSeq::decode(m.encode());
  CHECK(biseq_equal(m, r));
  CHECK_THROWS_AS(BiSeq::decode("||@0"), Error);
}

TEST_CASE("one-sided sequences") {
  OneSeq s{"10", "01"};  // 1 0 | 0 1 0 1 ...
  CHECK(s.at(0) == '1');
  CHECK(s.at(1) == '0');
  CHECK(s.at(2) == '0');
  CHECK(s.at(3) == '1');
  CHECK(s.at(4) == '0');
  OneSeq t = s.shifted(1);
  for (long long n = 0; n <= 8; ++n) CHECK(t.at(n) == s.at(n + 1));
  OneSeq u = s.shifted(3);  // shift into the tail rotates it
  for (long long n = 0; n <= 8; ++n) CHECK(u.at(n) == s.at(n + 3));

  OneSeq zero{"", "0"};
  OneSeq e2{"001", "0"};
  CHECK(oneseq_distance(zero, e2) == Rat(1, 4));
  CHECK(oneseq_equal(zero, OneSeq{"000", "0"}));
  CHECK_THROWS_AS(s.shifted(-1), Error);
}

TEST_CASE("rational helpers") {
  CHECK(rat_from_string("3/4") == Rat(3, 4));
  CHECK(rat_from_string("0.25") == Rat(1, 4));
  CHECK(rat_from_string("-1.5") == Rat(-3, 2));
  CHECK(rat_from_string("7") == Rat(7));
  CHECK(rat_to_string(Rat(3, 10)) == "3/10");
  CHECK_THROWS_AS(rat_from_string("x"), Error);
  CHECK_THROWS_AS(rat_from_string("1/0"), Error);

  CHECK(log2_ceil_inv(Rat(1, 2)) == 1);
  CHECK(log2_ceil_inv(Rat(1)) == 0);
  CHECK(log2_ceil_inv(Rat(3, 10)) == 2);   // 2^-2 = 1/4 <= 3/10
  CHECK(log2_ceil_inv(Rat(1, 8)) == 3);
  CHECK(strict_agreement_radius(Rat(1, 4)) == 2);  // 2^-3 < 1/4
  CHECK(strict_agreement_radius(Rat(1)) == 0);     // 2^-1 < 1
  CHECK(strict_agreement_radius(Rat(3, 10)) == 1);

  long long e = 0;
  CHECK(is_power_of_two(BigInt(4096), &e));
  CHECK(e == 12);
  CHECK(!is_power_of_two(BigInt(12), &e));

  CHECK(rat_from_double(0.375) == Rat(3, 8));
  CHECK(rat_bits(Rat(3, 8)) > 0);
}
