#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "scg/core.hpp"
#include "scg/error.hpp"
#include "scg/instances.hpp"

using namespace scg;
using namespace scg::testing;

namespace {

ErrorKind error_of(RawInstance raw) {
  try {
    validate_instance(std::move(raw));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kParseError;
}

std::string message_of(RawInstance raw) {
  try {
    validate_instance(std::move(raw));
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("validate_instance accepts the fixtures") {
  CHECK(t1().num_agents() == 2);
  const Instance d = table1();
  CHECK(d.num_states() == 2);
  CHECK(d.cost(0, 0, 3) == 10);
  CHECK(d.cost(1, 1, 1) == 5);
}

TEST_CASE("validate_instance rejects broken instances") {
  RawInstance d = table1().raw();
  SUBCASE("prior sums to 1.1") {
    d.states[0].prior = Rational(6, 10);
    d.states[1].prior = Rational(5, 10);
    CHECK(error_of(d) == ErrorKind::kPriorNotNormalized);
  }
  SUBCASE("non-monotone cost") {
    d.states[1].costs[0][2] = 0;
    CHECK(error_of(d) == ErrorKind::kCostNotMonotone);
    CHECK(message_of(d).find("states[1]") != std::string::npos);
  }
  SUBCASE("negative cost") {
    d.states[0].costs[1][0] = -1;
    CHECK(error_of(d) == ErrorKind::kNegativeCost);
  }
  SUBCASE("empty action set") {
    d.action_sets[2].clear();
    CHECK(error_of(d) == ErrorKind::kEmptyActionSet);
    CHECK(message_of(d).find("action_sets[2]") != std::string::npos);
  }
  SUBCASE("cost table of wrong length") {
    d.states[0].costs[0].pop_back();
    CHECK(error_of(d) == ErrorKind::kDimensionMismatch);
  }
  SUBCASE("action outside the resources") {
    d.action_sets[0] = {0, 5};
    CHECK(error_of(d) == ErrorKind::kInvalidAction);
  }
}

TEST_CASE("expected cost functions on the table1 fixture") {
  const Instance d = table1();
  const std::vector<Rational> point{Rational(1), Rational(0)};
  const auto c1 = expected_cost_functions<Rational>(d, point);
  CHECK(c1.at(0, 1) == 1);
  CHECK(c1.at(0, 3) == 10);
  CHECK(c1.at(1, 1) == 9);
  CHECK(c1.at(1, 2) == 10);

  const std::vector<Rational> mixed{Rational(6, 10), Rational(4, 10)};
  const auto c = expected_cost_functions<Rational>(d, mixed);
  CHECK(c.at(0, 3) == Rational(38, 5));
  CHECK(c.at(1, 1) == Rational(37, 5));
  CHECK(c.at(1, 2) == 8);

  const std::vector<Rational> bad{Rational(1)};
  CHECK_THROWS_AS(expected_cost_functions<Rational>(d, bad), Error);
}

TEST_CASE("point-mass posterior gives the state table") {
  const Instance inst = gen_random({4, 3, 3, 5, false});
  for (int s = 0; s < 3; ++s) {
    std::vector<Rational> p(3, Rational(0));
    p[s] = 1;
    const auto mixed = expected_cost_functions<Rational>(inst, p);
    const auto direct = state_cost_table<Rational>(inst, s);
    for (int r = 0; r < 3; ++r) {
      for (int n = 1; n <= 4; ++n) CHECK(mixed.at(r, n) == direct.at(r, n));
    }
  }
}

TEST_CASE("social cost and potential") {
  const Instance d = table1();
  const auto c1 = state_cost_table<Rational>(d, 0);
  CHECK(social_cost(c1, {2, 1}) == 11);
  CHECK(potential(c1, {2, 1}) == 11);
  CHECK(social_cost(c1, {3, 0}) == 30);

  const std::vector<Rational> mixed{Rational(6, 10), Rational(4, 10)};
  CHECK(social_cost(expected_cost_functions<Rational>(d, mixed), {2, 1}) == Rational(47, 5));

  const auto t = state_cost_table<Rational>(t1(), 0);
  CHECK(potential(t, {1, 1}) == 2);
  CHECK(potential(t, {2, 0}) == 3);
  CHECK(social_cost(t, {2, 0}) == 4);
}

TEST_CASE("expected costs are linear in the posterior") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = gen_random({3, 3, 3, 100 + static_cast<std::uint64_t>(trial), false});
    auto random_posterior = [&] {
      std::vector<Rational> p(3);
      Rational total = 0;
      for (auto& v : p) {
        v = Rational(static_cast<long>(rng() % 50 + 1));
        total += v;
      }
      for (auto& v : p) v /= total;
      return p;
    };
    const auto p = random_posterior();
    const auto q = random_posterior();
    const Rational alpha(static_cast<long>(rng() % 7), 7);
    std::vector<Rational> mix(3);
    for (int s = 0; s < 3; ++s) mix[s] = alpha * p[s] + (1 - alpha) * q[s];
    const auto cp = expected_cost_functions<Rational>(inst, p);
    const auto cq = expected_cost_functions<Rational>(inst, q);
    const auto cm = expected_cost_functions<Rational>(inst, mix);
    for (int r = 0; r < 3; ++r) {
      for (int n = 1; n <= 3; ++n) {
        CHECK(cm.at(r, n) == alpha * cp.at(r, n) + (1 - alpha) * cq.at(r, n));
        if (n > 1) CHECK(cm.at(r, n - 1) <= cm.at(r, n));
      }
    }
    // Float mode within 1e-12.
    std::vector<double> pd = as_doubles(p), qd = as_doubles(q), md(3);
    const double a = to_double(alpha);
    for (int s = 0; s < 3; ++s) md[s] = a * pd[s] + (1 - a) * qd[s];
    const auto fp = expected_cost_functions<double>(inst, pd);
    const auto fq = expected_cost_functions<double>(inst, qd);
    const auto fm = expected_cost_functions<double>(inst, md);
    for (int r = 0; r < 3; ++r) {
      for (int n = 1; n <= 3; ++n) {
        CHECK(std::abs(fm.at(r, n) - (a * fp.at(r, n) + (1 - a) * fq.at(r, n))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("configuration enumeration") {
  using V = std::vector<Configuration>;
  CHECK(enumerate_configurations(t1()) == V{{0, 2}, {1, 1}, {2, 0}});

  const Instance forced = make_instance(2, {{{1, 2}, {1, 2}}}, {Rational(1)}, {{0}, {0}});
  CHECK(enumerate_configurations(forced) == V{{2, 0}});

  const Instance mixed = make_instance(2, {{{1, 2}, {1, 2}}}, {Rational(1)}, {{0}, {0, 1}});
  CHECK(enumerate_configurations(mixed) == V{{1, 1}, {2, 0}});

  CHECK(count_compositions(20, 3) == 231);
  CHECK(enumerate_configurations(gen_random({20, 3, 1, 1, false})).size() == 231);
  CHECK_THROWS_AS(enumerate_configurations(gen_random({20, 3, 1, 1, false}), 100), Error);
}

TEST_CASE("enumeration covers every profile's configuration") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = gen_random({4, 3, 1, seed, true});
    const auto configs = enumerate_configurations(inst);
    const std::set<Configuration> listed(configs.begin(), configs.end());
    CHECK(std::is_sorted(configs.begin(), configs.end()));
    for (const auto& n : configs) {
      int total = 0;
      for (int v : n) total += v;
      CHECK(total == 4);
    }
    std::set<Configuration> realized;
    for (const auto& a : all_profiles(inst)) realized.insert(config_of_profile(inst, a));
    CHECK(realized == listed);
  }
}

TEST_CASE("config_of_profile") {
  CHECK(config_of_profile(t1(), {0, 1}) == Configuration{1, 1});
  CHECK(config_of_profile(t1(), {0, 0}) == Configuration{2, 0});
  CHECK(config_of_profile(table1(), {0, 0, 1}) == Configuration{2, 1});
  const Instance forced = make_instance(2, {{{1, 2}, {1, 2}}}, {Rational(1)}, {{0}, {0, 1}});
  CHECK_THROWS_AS(config_of_profile(forced, {1, 1}), Error);
  CHECK_THROWS_AS(config_of_profile(forced, {0}), Error);
}

TEST_CASE("rational parsing is exact and base 10") {
  CHECK(parse_rational("0.10") == Rational(1, 10));
  CHECK(parse_rational("0.99") == Rational(99, 100));
  CHECK(parse_rational("007") == 7);
  CHECK(parse_rational("010/3") == Rational(10, 3));
  CHECK(parse_rational("-1.25e-3") == Rational(-1, 800));
  CHECK(parse_rational("1e2") == 100);
  CHECK(parse_rational(" 3/6 ") == Rational(1, 2));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("0") == 0);
  for (const char* bad : {"", "1/0", "abc", "1.2.3", "1e", "--1", "1/-2"}) {
    CHECK_THROWS_AS(parse_rational(bad), Error);
  }
  CHECK(format_rational(Rational(-6, 4)) == "-3/2");
  CHECK(format_rational(Rational(8)) == "8");
  CHECK(parse_rational(format_rational(Rational(123456789, 1000))) == Rational(123456789, 1000));
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_probability("1/3") == 1.0 / 3);
}
