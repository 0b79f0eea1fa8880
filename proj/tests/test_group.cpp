#include <random>

#include "doctest.h"
#include "hd/group.hpp"

using namespace hd;

namespace {

GroupModel caseB(int level, int w2Level, std::vector<int> td = {}, int d = 1, int ell = 3) {
  GroupModel m;
  m.kase = 'B';
  m.p = 2;
  m.ell = ell;
  m.f = 1;
  m.d = d;
  m.r = 1;
  m.level = level;
  m.w2Level = w2Level;
  m.tildeDelta1 = td;
  return m;
}

}  // namespace

TEST_CASE("realize: Z2 x Z/2 and the trivial group") {
  for (int L = 1; L <= 4; ++L) {
    auto G = FiniteGroup::realize(GroupModel::named("Z2xZ2", L));
    CHECK(G->order() == (1u << (L + 1)));
    CHECK(G->isAbelian());
  }
  CHECK(FiniteGroup::trivial()->order() == 1);
}

TEST_CASE("realize: case B with w1 w2 w1^-1 = w2^3") {
  auto G = FiniteGroup::realize(caseB(2, 2));
  CHECK(G->order() == 16);
  int w1 = G->gen(G->genIndex("w1")), w2 = G->gen(G->genIndex("w2"));
  // multiplication-table checks of every relation
  CHECK(G->mul(G->mul(w1, w2), G->inv(w1)) == G->pow(w2, 3));
  CHECK(G->pow(w1, 4) == 0);
  CHECK(G->pow(w2, 4) == 0);
  for (std::size_t a = 0; a < G->order(); ++a)
    for (std::size_t b = 0; b < G->order(); ++b)
      for (std::size_t c = 0; c < G->order(); c += 5)
        CHECK(G->mul(G->mul(a, b), c) == G->mul(a, G->mul(b, c)));
  CHECK(G->mul(w1, w2) != G->mul(w2, w1));
  // level violating the congruence condition
  CHECK_THROWS(FiniteGroup::realize(caseB(0, 2)));
  CHECK_THROWS(FiniteGroup::realize(caseB(1, 2, {5})));  // 3 has order 4 mod 5
  CHECK_NOTHROW(FiniteGroup::realize(caseB(2, 2, {5})));
  auto H = FiniteGroup::realize(caseB(1, 2, {}, 3, 5));
  CHECK(H->order() == 3 * 2 * 4);
  CHECK(H->pow(H->phiBar(), 3) == H->gen(H->genIndex("w1")));
}

TEST_CASE("group algebra augmentation is multiplicative") {
  auto A = ringZ4();
  GroupAlgebra B(A, FiniteGroup::realize(caseB(1, 2)));
  std::mt19937 rng(1);
  for (int it = 0; it < 20; ++it) {
    Vec x = B.zero(), y = B.zero();
    for (auto& e : x) e = rng() % 4;
    for (auto& e : y) e = rng() % 4;
    CHECK(A->equal(B.augmentation(B.mul(x, y)), A->mul(B.augmentation(x), B.augmentation(y))));
  }
  for (std::size_t g = 0; g < B.group().order(); ++g)
    CHECK(A->equal(B.augmentation(B.groupElement(static_cast<int>(g))), A->one()));
}

TEST_CASE("normal form basis") {
  auto A = ringF2();
  auto G = FiniteGroup::realize(caseB(2, 2));
  NormalFormBasis nf(A, G, 1);
  REQUIRE(nf.invertible());
  GroupAlgebra B(A, G);
  Vec one = nf.toNormalForm(B.groupElement(0));
  Vec expect(G->order(), 0);
  expect[nf.labelIndex({0, 0, 0, 0, 0})] = 1;
  CHECK(one == expect);
  int w2 = G->gen(G->genIndex("w2"));
  Vec z = nf.toNormalForm(B.groupElement(G->pow(w2, 2)));
  Vec e2(G->order(), 0);
  e2[nf.labelIndex({0, 0, 0, 0, 0})] = 1;
  e2[nf.labelIndex({0, 0, 0, 0, 1})] = 1;
  CHECK(z == e2);
  std::mt19937 rng(3);
  for (int it = 0; it < 50; ++it) {
    Vec x = B.zero();
    for (auto& e : x) e = rng() % 2;
    CHECK(nf.fromNormalForm(nf.toNormalForm(x)) == x);
    CHECK(nf.toNormalForm(nf.fromNormalForm(x)) == x);
  }
  NormalFormBasis rh(A, G, 1, true);
  CHECK(rh.invertible());
}

TEST_CASE("quotient length and injectivity of right multiplication") {
  for (auto A : {ringF2(), ringZ4()}) {
    // w2 of order 8 and s = 1, so N' stays below the number of c-values (4)
    auto G = FiniteGroup::realize(caseB(1, 3));
    GroupAlgebra B(A, G);
    int s = 1;
    int w2 = G->gen(G->genIndex("w2"));
    NormalFormBasis nf(A, G, s);
    // over Z/4 the relation (y-1)^4 = 2(y-1)^2 (y = w2^2) leaks into lower labels once N' > 2
    int maxNp = A->zq().m() == 1 ? 3 : 2;
    for (int Np = 1; Np <= maxNp; ++Np) {
      Vec e = B.pow(B.sub(B.groupElement(G->pow(w2, 2)), B.groupElement(0)), Np);
      std::vector<Vec> rows;
      for (std::size_t g = 0; g < G->order(); ++g) rows.push_back(B.mul(B.groupElement(static_cast<int>(g)), e));
      Howell J = A->zq().howell(rows, B.dim());
      long quotientLen = static_cast<long>(B.dim()) * A->zq().m() - A->zq().logSize(J);
      long labelsBelow = 0;
      for (const auto& l : nf.labels()) labelsBelow += l.c < Np;
      CHECK(quotientLen == labelsBelow * A->length());
      // x -> x*e is injective on the span of labels with c < 4 - Np
      for (const auto& l : nf.labels()) {
        if (l.c >= 4 - Np) continue;
        Vec zz(G->order() * A->dim(), 0);
        zz[nf.labelIndex(l) * A->dim()] = 1;
        Vec x = nf.fromNormalForm(zz);
        CHECK_FALSE(B.equal(B.mul(x, e), B.zero()));
      }
    }
  }
}

TEST_CASE("ideal generator commutes past Phi") {
  auto A = ringF2();
  auto G = FiniteGroup::realize(caseB(2, 2));
  auto c = commuteIdealGenerator(A, G, 1, 1);
  CHECK(c.conjugationIdentity);
  CHECK(c.factorIdentity);
  CHECK(c.twoSided);
  auto full = commuteIdealGenerator(A, G, 4, 1);
  CHECK(full.conjugationIdentity);
  CHECK(full.literalIdentity);  // both sides vanish
  auto Z4 = commuteIdealGenerator(ringZ4(), FiniteGroup::realize(caseB(1, 2, {}, 3, 5)), 1, 2);
  CHECK(Z4.conjugationIdentity);
  CHECK(Z4.twoSided);
}

TEST_CASE("group model JSON") {
  auto m = caseB(2, 2, {5});
  auto back = GroupModel::fromJson(m.toJson());
  CHECK(FiniteGroup::realize(back)->order() == FiniteGroup::realize(m)->order());
}
