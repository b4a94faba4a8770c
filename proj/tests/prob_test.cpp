#include <doctest.h>

#include "relcheck/prob.hpp"

using namespace relcheck;
using namespace relcheck::prob;

namespace {

Params m_is(BitVec m) { return Params{{"m", m}}; }

// Independent count: tapes of s cells where the first cell xor m equals c.
std::uint64_t otp_mass_oracle(unsigned q, std::size_t s, std::uint64_t m, std::uint64_t c) {
  std::uint64_t cells = std::uint64_t{1} << q;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < cells; ++k) hits += ((m ^ k) == c);
  std::uint64_t rest = 1;
  for (std::size_t i = 1; i < s; ++i) rest *= cells;
  return hits * rest;
}

}  // namespace

TEST_CASE("bit vectors") {
  CHECK(to_string(make_bv(2, 1)) == "01");
  CHECK((make_bv(2, 1) ^ make_bv(2, 3)) == make_bv(2, 2));
  CHECK_THROWS_AS(make_bv(2, 4), WidthMismatch);
  CHECK_THROWS_AS(make_bv(1, 0) ^ make_bv(2, 0), WidthMismatch);
  CHECK(to_string(Tape{make_bv(2, 3), make_bv(2, 1)}) == "[11,01]");
}

TEST_CASE("run_rand examples") {
  auto r = run_rand(*otp(), m_is(make_bv(2, 1)), Tape{make_bv(2, 3)});
  REQUIRE(r.result);
  CHECK(*r.result == make_bv(2, 2));
  CHECK(r.next == 1);

  auto zero = return_v(const_v(make_bv(1, 0)));
  auto z = run_rand(*zero, {}, Tape{make_bv(1, 1)});
  CHECK(*z.result == make_bv(1, 0));
  CHECK(z.next == 0);

  auto two = parse_rand_prog("(sample a (sample b (return (xor (var a) (var b)))))", 1);
  CHECK_FALSE(run_rand(*two, {}, Tape{make_bv(1, 1)}).result.has_value());
  CHECK(sample_count(*two) == 2);
}

TEST_CASE("parsing sampling programs") {
  auto p = parse_rand_prog("(sample k (return (xor (param m) (var k))))", 2);
  CHECK(to_string(*p) == to_string(*otp()));
  CHECK_THROWS_AS(parse_rand_prog("(return (var k))", 2), ParseError);
  CHECK_THROWS_AS(parse_rand_prog("(return 4)", 2), ParseError);
  auto c = parse_rand_prog("(return 3)", 2);
  CHECK(*run_rand(*c, {}, {}).result == make_bv(2, 3));
}

TEST_CASE("mass examples") {
  CHECK(mass(*otp(), m_is(make_bv(1, 0)), point(make_bv(1, 1)), 1, 1) == 1);
  auto zero = return_v(const_v(make_bv(1, 0)));
  CHECK(mass(*zero, {}, point(make_bv(1, 0)), 1, 1) == 2);
  for (std::uint64_t m = 0; m < 4; ++m) {
    for (std::uint64_t c = 0; c < 4; ++c) {
      CHECK(mass(*otp(), m_is(make_bv(2, m)), point(make_bv(2, c)), 2, 2) == 4);
    }
  }
}

TEST_CASE("pr examples") {
  CHECK(to_string(pr(*otp(), m_is(make_bv(2, 3)), point(make_bv(2, 0)), 2, 1)) == "1/4");
  auto c = return_v(const_v(make_bv(2, 2)));
  CHECK(pr(*c, {}, point(make_bv(2, 2)), 2, 1) == make_rational(1, 1));
  CHECK(pr(*otp(), m_is(make_bv(1, 1)), point(make_bv(1, 0)), 1, 1) == make_rational(1, 2));
  CHECK(make_rational(6, 8) == Rational{3, 4});
  CHECK(to_string(make_rational(0, 5)) == "0");
  CHECK(make_rational(0, 5) == Rational{0, 1});
}

TEST_CASE("otp secrecy over small widths") {
  for (unsigned q = 1; q <= 3; ++q) {
    for (std::size_t s = 1; s <= 2; ++s) {
      std::uint64_t top = std::uint64_t{1} << q;
      for (std::uint64_t m0 = 0; m0 < top; ++m0) {
        for (std::uint64_t m1 = 0; m1 < top; ++m1) {
          for (std::uint64_t c = 0; c < top; ++c) {
            auto r = check_otp_secrecy(q, s, make_bv(q, m0), make_bv(q, m1), make_bv(q, c));
            CHECK(r.passed());
            CHECK(r.mass0 == otp_mass_oracle(q, s, m0, c));
            CHECK(r.pr0 == make_rational(1, top));
          }
        }
      }
    }
  }
}

TEST_CASE("tape enumeration") {
  std::vector<Tape> seen;
  for_each_tape(1, 2, [&](const Tape& t) { seen.push_back(t); });
  REQUIRE(seen.size() == 4);
  CHECK(seen[1] == Tape{make_bv(1, 0), make_bv(1, 1)});
  CHECK(tape_count(2, 3) == 64);
  CHECK_THROWS_AS(tape_count(16, 2), BudgetExceeded);
  CHECK(tape_count(16, 2, std::uint64_t{1} << 32) == std::uint64_t{1} << 32);
}

TEST_CASE("property: normalization and uniformity") {
  auto ident = sample_bind("k", return_v(var_v("k")));
  auto two = parse_rand_prog("(sample a (sample b (return (xor (var a) (var b)))))", 2);
  for (unsigned q = 1; q <= 3; ++q) {
    std::uint64_t top = std::uint64_t{1} << q;
    for (std::size_t s = 0; s <= 2; ++s) {
      auto none = [](const std::optional<BitVec>& r) { return !r.has_value(); };
      std::uint64_t sum = 0;
      for (std::uint64_t c = 0; c < top; ++c) sum += mass(*two, {}, point(make_bv(q, c)), q, s);
      CHECK(sum + mass(*two, {}, none, q, s) == tape_count(q, s));
      if (s >= 2) CHECK(mass(*two, {}, none, q, s) == 0);
      if (s == 0) continue;
      for (std::uint64_t c = 0; c < top; ++c) {
        CHECK(mass(*ident, {}, point(make_bv(q, c)), q, s) == tape_count(q, s - 1));
      }
    }
  }
}

TEST_CASE("property: tape suffix irrelevance") {
  Rng rng(51);
  auto two = parse_rand_prog("(sample a (sample b (return (xor (var a) (xor (var b) 1)))))", 3);
  for (int i = 0; i < 500; ++i) {
    Tape t;
    for (int k = 0; k < 4; ++k) t.push_back(make_bv(3, rng.below(8)));
    Tape u = t;
    u[2] = make_bv(3, rng.below(8));
    u[3] = make_bv(3, rng.below(8));
    auto a = run_rand(*two, {}, t);
    auto b = run_rand(*two, {}, u);
    CHECK(a.result == b.result);
    CHECK(a.next == b.next);
  }
}

TEST_CASE("mass_leq with the otp bijection") {
  for (unsigned q = 1; q <= 2; ++q) {
    std::uint64_t top = std::uint64_t{1} << q;
    for (std::uint64_t m0 = 0; m0 < top; ++m0) {
      for (std::uint64_t m1 = 0; m1 < top; ++m1) {
        for (std::uint64_t c = 0; c < top; ++c) {
          auto M0 = make_bv(q, m0), M1 = make_bv(q, m1), C = make_bv(q, c);
          auto r = mass_leq_check(*otp(), m_is(M0), *otp(), m_is(M1), point(C), point(C),
                                  otp_bijection(q, 2, M0, M1), q, 2);
          CHECK(r.passed());
          CHECK(r.mass1 <= r.mass2);
          auto id = mass_leq_check(*otp(), m_is(M0), *otp(), m_is(M1), point(C), point(C), identity_bijection(q, 2),
                                   q, 2);
          if (m0 == m1) {
            CHECK(id.passed());
          } else {
            REQUIRE_FALSE(id.passed());
            CHECK((*id.counterexample)[0] == (C ^ M0));
          }
        }
      }
    }
  }
}

TEST_CASE("bijections are self-inverse") {
  Rng rng(52);
  auto b = otp_bijection(3, 3, make_bv(3, 5), make_bv(3, 2));
  for (int i = 0; i < 100; ++i) {
    Tape t{make_bv(3, rng.below(8)), make_bv(3, rng.below(8)), make_bv(3, rng.below(8))};
    CHECK(b.apply(b.apply(t)) == t);
    CHECK(b.apply(t)[0] == (t[0] ^ make_bv(3, 7)));
    CHECK(b.apply(t)[1] == t[1]);
  }
}
