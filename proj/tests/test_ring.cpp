#include <random>

#include "doctest.h"
#include "hd/ring.hpp"

using namespace hd;

namespace {

Elem randomElem(std::mt19937& rng, const Ring& A) {
  Elem e(A.dim());
  for (auto& x : e) x = rng() % A.zq().q();
  return A.reduce(e);
}

Elem randomMax(std::mt19937& rng, const Ring& A) {
  for (;;) {
    Elem e = randomElem(rng, A);
    if (A.inMaximalIdeal(e)) return e;
  }
}

Elem randomUnit(std::mt19937& rng, const Ring& A) {
  for (;;) {
    Elem e = randomElem(rng, A);
    if (A.isUnit(e)) return e;
  }
}

}  // namespace

TEST_CASE("Z/4 and F2[u]/(u^3)") {
  auto z4 = ringZ4();
  CHECK(z4->dim() == 1);
  int units = 0;
  for (const Elem& e : z4->elements()) units += z4->isUnit(e);
  CHECK(units == 2);
  CHECK(z4->equal(z4->inv(z4->constant(3)), z4->constant(3)));
  CHECK(z4->equal(z4->inv(z4->one()), z4->one()));

  auto f = ringF2u3();
  CHECK(f->dim() == 3);
  CHECK(f->nilpotencyIndex() == 3);
  CHECK_FALSE(f->isUnit(f->var(0)));
  CHECK_THROWS(f->inv(f->var(0)));
}

TEST_CASE("truncated versal ring length matches a monomial count") {
  // Z/4[t1,t2,t3] truncated at degree 3 has 10 monomials (length 20 over Z/2);
  // the only surviving multiple of t2*t3*(2+t3) is 2*t2*t3, which spans a copy of Z/2.
  std::vector<std::string> v{"t1", "t2", "t3"};
  Poly rel{{{0, 1, 1}, 2}, {{0, 1, 2}, 1}};
  auto R = Ring::quotient(Modulus::make(2, 2), v, 3, {rel});
  long monomials = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; a + b < 3; ++b)
      for (int c = 0; a + b + c < 3; ++c) ++monomials;
  CHECK(R->length() == 2 * monomials - 1);
  CHECK(R->length() == 19);
  CHECK(R->isZero(R->fromPoly(rel)));
}

TEST_CASE("inconsistent presentation is rejected") {
  CHECK_THROWS(Ring::quotient(Modulus::make(2, 2), {"x"}, 3, {Poly{{{0}, 1}, {{1}, 1}}}));
}

TEST_CASE("local ring dichotomy and nilpotency on default rings") {
  for (RingPtr A : {ringF2(), ringDual(), ringZ4(), ringF2u3(), ringZ4u()}) {
    long card = 1;
    for (long i = 0; i < A->length(); ++i) card *= 2;
    auto els = A->elements();
    CHECK(static_cast<long>(els.size()) == card);
    // brute-force unit test: a unit is exactly an element with an inverse
    for (const Elem& a : els) {
      bool hasInverse = false;
      for (const Elem& b : els)
        if (A->equal(A->mul(a, b), A->one())) hasInverse = true;
      CHECK(hasInverse == A->isUnit(a));
      CHECK(A->isUnit(a) != A->inMaximalIdeal(a));
      if (A->isUnit(a)) CHECK(A->equal(A->mul(a, A->inv(a)), A->one()));
    }
    // m^N = 0 and m^(N-1) != 0 checked on products of elements
    std::vector<Elem> m;
    for (const Elem& a : els)
      if (A->inMaximalIdeal(a)) m.push_back(a);
    int N = A->nilpotencyIndex();
    std::vector<Elem> prods{A->one()};
    for (int k = 0; k < N; ++k) {
      std::vector<Elem> next;
      for (const Elem& x : prods)
        for (const Elem& y : m) next.push_back(A->mul(x, y));
      prods = next;
      bool allZero = true;
      for (const Elem& x : prods) allZero = allZero && A->isZero(x);
      CHECK(allZero == (k + 1 == N));
    }
  }
}

TEST_CASE("ring JSON round trip") {
  auto A = ringZ4u();
  auto B = Ring::fromJson(A->toJson());
  CHECK(B->length() == A->length());
  CHECK(B->dim() == A->dim());
}

TEST_CASE("weierstrass examples over Z/4") {
  auto A = ringZ4();
  auto c = [&](long long x) { return A->constant(x); };
  auto f = TruncatedSeries::fromCoeffs(A, 8, {c(2), c(2), c(1)});
  auto w = weierstrass(f);
  CHECK(w.n == 2);
  CHECK(w.u.equal(TruncatedSeries::fromCoeffs(A, 8, {c(1)})));
  // (x^2+2x+2)(1+x) expanded by hand: x^3 + 3x^2 + 4x + 2 = x^3 + 3x^2 + 2
  auto g = TruncatedSeries::fromCoeffs(A, 8, {c(2), c(0), c(3), c(1)});
  auto w2 = weierstrass(g);
  REQUIRE(w2.n == 2);
  CHECK(A->equal(w2.h[0], c(2)));
  CHECK(A->equal(w2.h[1], c(2)));
  CHECK(A->equal(w2.h[2], c(1)));
  CHECK(w2.u.equal(TruncatedSeries::fromCoeffs(A, 8, {c(1), c(1)})));
  auto unit = TruncatedSeries::fromCoeffs(A, 8, {c(3), c(2), c(1)});
  auto w3 = weierstrass(unit);
  CHECK(w3.n == 0);
  CHECK(w3.u.equal(unit));
  CHECK_THROWS(weierstrass(TruncatedSeries::fromCoeffs(A, 8, {c(2), c(2)})));
}

TEST_CASE("weierstrass recovers random factorizations and division identity") {
  std::mt19937 rng(17);
  for (RingPtr A : {ringZ4(), ringF2u3(), Ring::zmod(2, 3)}) {
    const int T = 12;
    for (int it = 0; it < 30; ++it) {
      int n = 1 + rng() % 3;
      std::vector<Elem> h(n + 1);
      for (int i = 0; i < n; ++i) h[i] = randomMax(rng, *A);
      h[n] = A->one();
      int du = rng() % (T - n);
      std::vector<Elem> u(du + 1);
      u[0] = randomUnit(rng, *A);
      for (int i = 1; i <= du; ++i) u[i] = randomElem(rng, *A);
      auto prod = polyMul(*A, h, u);
      auto f = TruncatedSeries::fromCoeffs(A, T, prod);
      auto w = weierstrass(f);
      REQUIRE(w.n == n);
      for (int i = 0; i <= n; ++i) CHECK(A->equal(w.h[i], h[i]));
      CHECK(w.u.equal(TruncatedSeries::fromCoeffs(A, T, u)));
      // division identity
      std::vector<Elem> gc(T);
      for (auto& e : gc) e = randomElem(rng, *A);
      auto g = TruncatedSeries::fromCoeffs(A, T, gc);
      auto [q, r] = weierstrassDivide(g, f);
      CHECK(static_cast<int>(r.size()) == n);
      auto back = q.mul(f).add(TruncatedSeries::fromCoeffs(A, T, r));
      CHECK(back.equal(g));
    }
  }
}

TEST_CASE("weierstrassDivide trivial cases") {
  auto A = ringF2u3();
  Elem u = A->var(0);
  auto f = TruncatedSeries::fromCoeffs(A, 8, {u, u, A->one()});
  auto [q, r] = weierstrassDivide(f, f);
  CHECK(q.equal(TruncatedSeries::fromCoeffs(A, 8, {A->one()})));
  for (auto& e : r) CHECK(A->isZero(e));
  auto [q0, r0] = weierstrassDivide(TruncatedSeries::zero(A, 8), f);
  CHECK(q0.degree() == -1);
  for (auto& e : r0) CHECK(A->isZero(e));
}
