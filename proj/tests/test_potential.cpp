#include <cmath>

#include "doctest.h"
#include "qsplit/errors.hpp"
#include "qsplit/potential.hpp"

using namespace qsplit;

namespace {

ErrorKind kind_of(const PotentialSpec& spec) {
  try {
    validate(spec);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("rectangular barrier geometry") {
  const Potential p = rectangular(500.0, 5.0, 0.3, 0.067);
  CHECK(p.a() == 500.0);
  CHECK(p.b() == 505.0);
  CHECK(p.width() == 5.0);
  CHECK(p.midpoint() == 502.5);
  CHECK(p.sum() == 1005.0);
  CHECK(p.symmetric());
  CHECK_FALSE(p.is_delta());
  CHECK(p.max_abs_height() == 0.3);
  REQUIRE(p.edges().size() == 2);
  CHECK(p.edges()[0] == 500.0);
  CHECK(p.edges()[1] == 505.0);
}

TEST_CASE("evaluate uses left-closed segments") {
  const Potential p = validate({10.0, 16.0, {{2.0, 0.1}, {2.0, -0.2}, {2.0, 0.1}}, std::nullopt, 1.0});
  CHECK(p.evaluate(9.999) == 0.0);
  CHECK(p.evaluate(10.0) == 0.1);
  CHECK(p.evaluate(12.0) == -0.2);
  CHECK(p.evaluate(13.9) == -0.2);
  CHECK(p.evaluate(14.0) == 0.1);
  CHECK(p.evaluate(16.0) == 0.0);
  CHECK(p.symmetric());
}

TEST_CASE("mirror symmetry detection") {
  CHECK(validate({1.0, 4.0, {{1.0, 0.2}, {1.0, 0.5}, {1.0, 0.2}}, std::nullopt, 1.0}).symmetric());
  CHECK_FALSE(validate({1.0, 4.0, {{1.0, 0.2}, {1.0, 0.5}, {1.0, 0.3}}, std::nullopt, 1.0}).symmetric());
  CHECK_FALSE(validate({1.0, 4.0, {{1.5, 0.2}, {1.5, 0.5}}, std::nullopt, 1.0}).symmetric());
}

TEST_CASE("zero-width segments are dropped") {
  const Potential p = validate({1.0, 3.0, {{0.0, 9.0}, {2.0, 0.4}}, std::nullopt, 1.0});
  CHECK(p.segments().size() == 1);
  CHECK(p.symmetric());
}

TEST_CASE("delta spike") {
  const Potential p = delta_potential(100.0, 0.05, 0.067);
  CHECK(p.is_delta());
  CHECK(p.a() == p.b());
  CHECK(p.symmetric());
  CHECK(p.delta()->strength == 0.05);
  CHECK_THROWS_AS(p.evaluate(100.0), Error);
}

TEST_CASE("validation errors are typed") {
  CHECK(kind_of({0.0, 5.0, {{5.0, 0.3}}, std::nullopt, 1.0}) == ErrorKind::NonPositiveA);
  CHECK(kind_of({-1.0, 5.0, {{6.0, 0.3}}, std::nullopt, 1.0}) == ErrorKind::NonPositiveA);
  CHECK(kind_of({1.0, 5.0, {{3.0, 0.3}}, std::nullopt, 1.0}) == ErrorKind::GapError);
  CHECK(kind_of({1.0, 5.0, {{4.0, 0.3}}, std::nullopt, 0.0}) == ErrorKind::NonPositiveMass);
  CHECK(kind_of({5.0, 1.0, {}, std::nullopt, 1.0}) == ErrorKind::GapError);
  PotentialSpec both{1.0, 1.0, {{0.0, 0.1}}, DeltaSpike{1.0, 0.1}, 1.0};
  CHECK(kind_of(both) == ErrorKind::Config);
  CHECK(is_config_error(ErrorKind::GapError));
  CHECK_FALSE(is_config_error(ErrorKind::ParityMismatch));
}

TEST_CASE("shifted keeps shape") {
  const Potential p = validate({10.0, 13.0, {{1.0, 0.1}, {2.0, 0.4}}, std::nullopt, 0.5});
  const Potential q = p.shifted(7.5);
  CHECK(q.a() == 17.5);
  CHECK(q.b() == 20.5);
  for (double x = 9.0; x < 14.0; x += 0.37) CHECK(q.evaluate(x + 7.5) == p.evaluate(x));
}
