#include "doctest.h"
#include "hd/deformation.hpp"

using namespace hd;

namespace {

const std::map<QuadUnit, long> kTangent = {{QuadUnit::Ell, 8}, {QuadUnit::MinusEll, 8}, {QuadUnit::MinusOne, 16}};

}  // namespace

TEST_CASE("V_y requires ell = 3 mod 4 and is non-split") {
  CHECK_THROWS(buildVy(QuadUnit::Ell, 5));
  CHECK_THROWS(buildVy(QuadUnit::Ell, 9));
  for (auto y : allQuadUnits()) CHECK_NOTHROW(buildVy(y, 7));
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(GroupModel::named("Z2xZ2", 3)));
  CHECK_FALSE(isNonSplit(splitAnalogue(ctx)));
}

TEST_CASE("tangent counts over the dual numbers") {
  for (auto y : allQuadUnits()) {
    auto t = tangentSpace(buildVy(y, 3));
    CHECK(t.count == kTangent.at(y));
    CHECK(t.powerOfTwo);
  }
}

TEST_CASE("normal forms agree with the raw enumeration at length two") {
  for (auto y : allQuadUnits()) {
    auto P = buildVy(y, 3);
    for (auto A : {ringDual(), ringZ4()}) {
      auto E = enumerateLifts(P, A);
      auto raw = rawLiftClasses(P, A);
      CHECK(static_cast<long>(E.classCount()) == raw.classes);
      CHECK(raw.lifts > raw.classes);
    }
  }
}

TEST_CASE("every normal-form lift is a valid quasi-lift") {
  for (auto y : allQuadUnits()) {
    auto P = buildVy(y, 3);
    for (auto A : defaultTestRings()) {
      auto E = enumerateLifts(P, A);
      REQUIRE(E.classCount() > 0);
      for (std::size_t c = 0; c < E.classCount(); ++c) {
        auto r = checkLift(E, E.reps[c]);
        CHECK_MESSAGE(r.ok, quadUnitName(y) << " " << A->name() << ": " << r.failure);
      }
    }
  }
}

TEST_CASE("versality over the default rings") {
  for (auto y : allQuadUnits()) {
    auto rep = verifyVersality(buildVy(y, 3), defaultTestRings());
    CHECK_MESSAGE(rep.ok, rep.toJson().dump());
  }
  auto rep = verifyVersality(buildVy(QuadUnit::Ell, 3), {ringF2u3()});
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].nonProflatMissedByFl > 0);
  CHECK(rep.rows[0].morphisms == 64);
  CHECK(rep.rows[0].proflatMorphisms == 32);
}

TEST_CASE("the versal ring truncates to a finite ring") {
  auto R = versalSpec(QuadUnit::Ell, false).truncated(2, 3);
  CHECK(R->length() > 0);
}

TEST_CASE("a trivial factor of order 3 does not change the counts") {
  for (auto y : allQuadUnits()) {
    auto rep = inflationCheck(buildVy(y, 3), {3}, {ringF2(), ringDual(), ringZ4()});
    CHECK_MESSAGE(rep.ok, rep.toJson().dump());
  }
}
