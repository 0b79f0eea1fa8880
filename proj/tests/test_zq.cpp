#include <random>
#include <set>

#include "doctest.h"
#include "hd/zq.hpp"

using namespace hd;

namespace {

// all vectors of the row span, by enumerating every coefficient tuple
std::set<Vec> bruteSpan(const Zq& z, const Mat& m) {
  std::set<Vec> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m.r; ++i) total *= z.q();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t t = idx;
    Vec v(m.c, 0);
    for (std::size_t i = 0; i < m.r; ++i) {
      u64 c = t % z.q();
      t /= z.q();
      z.axpy(v, c, m.rowVec(i));
    }
    out.insert(v);
  }
  return out;
}

std::vector<Vec> allVectors(const Zq& z, std::size_t n) {
  std::vector<Vec> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= z.q();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t t = idx;
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) { v[i] = t % z.q(); t /= z.q(); }
    out.push_back(v);
  }
  return out;
}

Mat randomMat(std::mt19937& rng, const Zq& z, std::size_t r, std::size_t c) {
  Mat m(r, c);
  for (auto& e : m.a) e = rng() % z.q();
  return m;
}

}  // namespace

TEST_CASE("howell: identity and zero") {
  Zq z(2, 3);
  Howell h = z.howell(Mat::identity(2));
  CHECK(h.rows == Mat::identity(2));
  Howell h0 = z.howell(Mat(2, 2));
  CHECK(h0.rows.r == 0);
}

TEST_CASE("howell: [[2,4],[0,4]] over Z/8 matches brute-force span") {
  Zq z(2, 3);
  Mat m(2, 2);
  m(0, 0) = 2; m(0, 1) = 4; m(1, 1) = 4;
  Howell h = z.howell(m);
  CHECK(bruteSpan(z, h.rows) == bruteSpan(z, m));
  CHECK(z.howell(h.rows) == h);
  CHECK(z.logSize(h) == 3);  // |span| = 8
}

TEST_CASE("howell: canonical under random row operations, membership exact") {
  std::mt19937 rng(7);
  for (int p : {2, 3}) {
    Zq z(p, p == 2 ? 3 : 2);
    for (int it = 0; it < 60; ++it) {
      std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
      if (r * c > 6) c = 2;
      Mat m = randomMat(rng, z, r, c);
      for (std::size_t i = 0; i < m.r; ++i)
        for (std::size_t j = 0; j < m.c; ++j)
          if (rng() % 3 == 0) m(i, j) = z.mul(m(i, j), p);
      // random unimodular mixing plus a redundant row
      Mat n = m;
      for (int k = 0; k < 5 && n.r > 1; ++k) {
        std::size_t a = rng() % n.r, b = rng() % n.r;
        if (a == b) continue;
        Vec ra = n.rowVec(a);
        z.axpy(ra, rng() % z.q(), n.rowVec(b));
        n.setRow(a, ra);
      }
      Vec extra(n.c, 0);
      z.axpy(extra, rng() % z.q(), m.rowVec(0));
      n.appendRow(extra);
      Howell hm = z.howell(m), hn = z.howell(n);
      CHECK(hm == hn);
      auto span = bruteSpan(z, m);
      CHECK(z.logSize(hm) >= 0);
      std::size_t card = 1;
      for (long i = 0; i < z.logSize(hm); ++i) card *= p;
      CHECK(card == span.size());
      if (m.c <= 3) {
        for (const Vec& v : allVectors(z, m.c)) CHECK(z.contains(hm, v) == (span.count(v) == 1));
      }
    }
  }
}

TEST_CASE("solve: small cases against brute force") {
  Zq z(2, 2);
  {
    auto x = z.solve(Mat::identity(3), Vec{1, 2, 3});
    REQUIRE(x);
    CHECK(*x == Vec{1, 2, 3});
  }
  Mat two(1, 1);
  two(0, 0) = 2;
  auto x = z.solve(two, Vec{2});
  REQUIRE(x);
  CHECK(z.mul((*x)[0], 2) == 2);
  CHECK_FALSE(z.solve(two, Vec{1}));
  int found = 0;
  for (u64 t = 0; t < 4; ++t)
    if (z.mul(t, 2) == 1) ++found;
  CHECK(found == 0);

  std::mt19937 rng(11);
  for (int it = 0; it < 200; ++it) {
    std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
    Mat m = randomMat(rng, z, r, c);
    for (auto& e : m.a)
      if (rng() % 2) e = z.mul(e, 2);
    Vec b(c);
    for (auto& e : b) e = rng() % 4;
    bool brute = false;
    for (const Vec& v : allVectors(z, r))
      if (z.mul(v, m) == b) { brute = true; break; }
    auto s = z.solve(m, b);
    CHECK(brute == s.has_value());
    if (s) CHECK(z.mul(*s, m) == b);
  }
}

TEST_CASE("kernel: examples and duality with the image") {
  Zq z4(2, 2);
  CHECK(z4.kernel(Mat::identity(3)).rows.r == 0);
  Mat two(1, 1);
  two(0, 0) = 2;
  Howell k = z4.kernel(two);
  REQUIRE(k.rows.r == 1);
  CHECK(k.rows(0, 0) == 2);
  Zq z2(2, 1);
  Mat ones(2, 2);
  ones.a = {1, 1, 1, 1};
  Howell k2 = z2.kernel(ones);
  REQUIRE(k2.rows.r == 1);
  CHECK(k2.rows.rowVec(0) == Vec{1, 1});

  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    Zq& z = (it % 2) ? z4 : z2;
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 3;
    if (z.q() == 4 && r > 3) r = 3;  // rows * log2 q <= 16 with room
    Mat m = randomMat(rng, z, r, c);
    Howell k = z.kernel(m);
    for (std::size_t i = 0; i < k.rows.r; ++i) CHECK(z.mul(k.rows.rowVec(i), m) == Vec(c, 0));
    std::size_t kerCount = 0;
    for (const Vec& v : allVectors(z, r)) {
      bool inKer = z.mul(v, m) == Vec(c, 0);
      if (inKer) ++kerCount;
      CHECK(inKer == z.contains(k, v));
    }
    std::size_t imCount = bruteSpan(z, m).size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= z.q();
    CHECK(kerCount * imCount == total);
  }
}

TEST_CASE("quotientStructure") {
  Zq z(2, 2);
  CHECK(z.quotientStructure(z.howell(Mat::identity(2)), 2).empty());
  CHECK(z.quotientStructure(z.zeroSpan(1), 1) == std::vector<u64>{4});
  Mat two(1, 1);
  two(0, 0) = 2;
  CHECK(z.quotientStructure(z.howell(two), 1) == std::vector<u64>{2});
  std::mt19937 rng(3);
  for (int it = 0; it < 50; ++it) {
    Mat m = randomMat(rng, z, 1 + rng() % 3, 1 + rng() % 3);
    for (auto& e : m.a)
      if (rng() % 2) e = z.mul(e, 2);
    Howell h = z.howell(m);
    auto f = z.quotientStructure(h, m.c);
    std::size_t prod = 1;
    for (u64 d : f) { prod *= d; CHECK(z.q() % d == 0); }
    std::size_t total = 1;
    for (std::size_t i = 0; i < m.c; ++i) total *= 4;
    CHECK(prod * bruteSpan(z, m).size() == total);
  }
}

TEST_CASE("intersection and inverse") {
  Zq z(2, 2);
  std::mt19937 rng(9);
  for (int it = 0; it < 40; ++it) {
    Mat a = randomMat(rng, z, 2, 2), b = randomMat(rng, z, 2, 2);
    auto sa = bruteSpan(z, a), sb = bruteSpan(z, b);
    Howell i = z.intersect(z.howell(a), z.howell(b));
    for (const Vec& v : allVectors(z, 2)) CHECK(z.contains(i, v) == (sa.count(v) && sb.count(v)));
    auto inv = z.inverse(a);
    if (inv) CHECK(z.mul(a, *inv) == Mat::identity(2));
  }
}
