// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hd/deformation.hpp"
#include "hd/perfection.hpp"
#include "hd/quadratic.hpp"
#include "hd/resolution.hpp"

using namespace hd;

namespace {

// time limits in seconds
constexpr double kLimit[10] = {0, 5, 30, 300, 600, 900, 1200, 60, 60, 600};
constexpr int kPerfectionSamplesPerCase = 10;
constexpr int kWeierstrassTrials = 100;
constexpr int kWeierstrassPrecision = 12;
constexpr int kNormalFormTrials = 1000;

struct Verdict {
  bool ok = false;
  std::string detail;
};

CtxPtr ctxZ2xZ2(int L) { return makeContext(ringF2(), FiniteGroup::realize(GroupModel::named("Z2xZ2", L))); }

std::string join(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

Verdict groupCohomologyDims() {
  auto rep = groupCohomology(GroupModel::named("Z2xZ2", 2), 3, 2);
  return {rep.stable && rep.dims == std::vector<long>{1, 2, 2, 2}, "dims " + join(rep.dims)};
}

Verdict cupProducts() {
  const int L = 3;
  auto ctx = ctxZ2xZ2(L), ctx2 = ctxZ2xZ2(L + 1);
  LevelCohomology H(ctx, 3), H2(ctx2, 3);
  InflationMap inf(H, H2);
  const Zq& z = ctx->zq();
  std::map<QuadUnit, Vec> h;
  for (auto y : allQuadUnits()) h[y] = H.extensionClass(quadCharacter(y));
  auto stableZero = [&](const Vec& c) { return H2.isZero(2, inf.apply(2, c)); };
  Vec ll = H.cup(1, h[QuadUnit::Ell], 1, h[QuadUnit::Ell]);
  Vec lm = H.cup(1, h[QuadUnit::Ell], 1, h[QuadUnit::MinusOne]);
  Vec lml = H.cup(1, h[QuadUnit::Ell], 1, h[QuadUnit::MinusEll]);
  bool llNonzero = !stableZero(ll), lmNonzero = !stableZero(lm), distinct = !stableZero(z.add(ll, lm));
  // the functional on H^2 sending h_l u h_l and h_l u h_-1 to the nontrivial symbol value
  int phi = -1;
  for (int x = 0; x < 2 && phi < 0; ++x)
    for (int y = 0; y < 2 && phi < 0; ++y) {
      Vec c = lml;
      if (x) c = z.add(c, ll);
      if (y) c = z.add(c, lm);
      if (stableZero(c)) phi = (x + y) % 2;
    }
  bool symbol = phi == 0;
  std::ostringstream os;
  os << "l.l " << (llNonzero ? "!=0" : "=0") << ", l.-1 " << (lmNonzero ? "!=0" : "=0") << ", functional(l.-l) = "
     << phi << ", l.l " << (distinct ? "!=" : "==") << " l.-1";
  return {llNonzero && lmNonzero && symbol && distinct, os.str()};
}

Verdict extDims() {
  const std::map<QuadUnit, long> lower = {{QuadUnit::Ell, 3}, {QuadUnit::MinusEll, 3}, {QuadUnit::MinusOne, 4}};
  bool ok = true;
  std::ostringstream os;
  for (auto y : allQuadUnits()) {
    auto make = [y](CtxPtr c) {
      Complex V = complexV(c, y);
      return std::make_pair(V, V);
    };
    auto r = hyperExt(make, ringF2(), GroupModel::named("Z2xZ2", 2), 2, 1, -4);
    auto t = tangentSpace(buildVy(y, 3));
    bool good = r.stable && r.dim >= lower.at(y) && t.powerOfTwo && r.dim == t.dim;
    ok = ok && good;
    os << quadUnitName(y) << ": ext " << r.dim << " tangent " << t.dim << "; ";
  }
  return {ok, os.str()};
}

Verdict tangentCounts() {
  const std::map<QuadUnit, long> expect = {{QuadUnit::Ell, 8}, {QuadUnit::MinusEll, 8}, {QuadUnit::MinusOne, 16}};
  bool ok = true;
  std::ostringstream os;
  for (auto y : allQuadUnits()) {
    auto P = buildVy(y, 3);
    auto t = tangentSpace(P);
    ok = ok && t.count == expect.at(y) && t.powerOfTwo;
    os << quadUnitName(y) << ": " << t.count;
    for (auto A : {ringDual(), ringZ4()}) {
      auto E = enumerateLifts(P, A);
      auto raw = rawLiftClasses(P, A);
      ok = ok && static_cast<long>(E.classCount()) == raw.classes;
      os << " [" << A->name() << " nf " << E.classCount() << " raw " << raw.classes << "]";
    }
    os << "; ";
  }
  return {ok, os.str()};
}

Verdict versality() {
  bool ok = true;
  std::ostringstream os;
  for (auto y : allQuadUnits()) {
    auto rep = verifyVersality(buildVy(y, 3), defaultTestRings());
    bool bij = false;
    for (const auto& row : rep.rows) {
      ok = ok && row.surjective;
      if (row.ring == ringDual()->name()) bij = row.bijective;
    }
    ok = ok && rep.ok && bij;
    os << quadUnitName(y) << (rep.ok ? " surjective" : " NOT surjective") << (bij ? ", bijective over k[e]" : ", not bijective over k[e]") << "; ";
  }
  auto rep = verifyVersality(buildVy(QuadUnit::Ell, 3), {ringF2u3()});
  long missed = rep.rows.empty() ? 0 : rep.rows[0].nonProflatMissedByFl;
  ok = ok && missed > 0;
  os << "l over F2[u]/(u^3): " << missed << " lambda!=0 classes hit by R only";
  return {ok, os.str()};
}

Verdict perfection() {
  int total = 0, passed = 0;
  int fa = 0, fb = 0, fc = 0, fd = 0;
  std::ostringstream fails;
  for (char kase : {'A', 'B'})
    for (int seed = 1; seed <= kPerfectionSamplesPerCase; ++seed) {
      ++total;
      auto s = randomSample(kase, seed);
      std::vector<long> ranks[2];
      bool a = true, b = true, c = true;
      for (int i = 0; i < 2; ++i) {
        auto r = perfect(sampleInput(s, 2 + i), s.n1, s.n2);
        bool traced = r.ok && replayTrace(r.trace.toJson()).ok;
        a = a && traced;
        b = b && r.aFree;
        c = c && r.supportOk;
        ranks[i] = r.aRanks;
      }
      bool d = a && ranks[0] == ranks[1];
      fa += !a, fb += !b, fc += !c, fd += !d;
      if (a && b && c && d)
        ++passed;
      else
        fails << " " << kase << seed << "(" << join(ranks[0]) << "|" << join(ranks[1]) << ")";
    }
  std::ostringstream os;
  os << passed << "/" << total << " samples; failures (a) " << fa << " (b) " << fb << " (c) " << fc << " (d) " << fd;
  if (passed < total) os << ";" << fails.str();
  return {passed == total && total >= 20, os.str()};
}

Elem randomElem(std::mt19937& rng, const Ring& A) {
  Elem e(A.dim());
  for (auto& x : e) x = rng() % A.zq().q();
  return A.reduce(e);
}

Elem randomWhere(std::mt19937& rng, const Ring& A, const std::function<bool(const Elem&)>& pred) {
  for (;;) {
    Elem e = randomElem(rng, A);
    if (pred(e)) return e;
  }
}

Verdict weierstrassSuite() {
  std::mt19937 rng(20261018);
  const int T = kWeierstrassPrecision;
  bool ok = true;
  std::ostringstream os;
  for (RingPtr A : {ringZ4(), ringF2u3(), Ring::zmod(2, 3)}) {
    int recovered = 0, divided = 0;
    for (int it = 0; it < kWeierstrassTrials; ++it) {
      int n = 1 + rng() % 3;
      std::vector<Elem> h(n + 1);
      for (int i = 0; i < n; ++i) h[i] = randomWhere(rng, *A, [&](const Elem& e) { return A->inMaximalIdeal(e); });
      h[n] = A->one();
      int du = rng() % (T - n);
      std::vector<Elem> u(du + 1);
      u[0] = randomWhere(rng, *A, [&](const Elem& e) { return A->isUnit(e); });
      for (int i = 1; i <= du; ++i) u[i] = randomElem(rng, *A);
      auto f = TruncatedSeries::fromCoeffs(A, T, polyMul(*A, h, u));
      auto w = weierstrass(f);
      bool same = w.n == n && w.u.equal(TruncatedSeries::fromCoeffs(A, T, u));
      for (int i = 0; same && i <= n; ++i) same = A->equal(w.h[i], h[i]);
      recovered += same;
      std::vector<Elem> gc(T);
      for (auto& e : gc) e = randomElem(rng, *A);
      auto g = TruncatedSeries::fromCoeffs(A, T, gc);
      auto [q, r] = weierstrassDivide(g, f);
      divided += static_cast<int>(r.size()) == n && q.mul(f).add(TruncatedSeries::fromCoeffs(A, T, r)).equal(g);
    }
    ok = ok && recovered == kWeierstrassTrials && divided == kWeierstrassTrials;
    os << A->name() << ": " << recovered << " recovered, " << divided << " divisions; ";
  }
  return {ok, os.str()};
}

Verdict normalForms() {
  std::mt19937 rng(7);
  bool ok = true;
  std::ostringstream os;
  for (int level : {2, 3}) {
    GroupModel m;
    m.kase = 'B';
    m.p = 2;
    m.ell = 3;
    m.f = 1;
    m.d = 1;
    m.r = 1;
    m.level = level;
    m.w2Level = level;
    auto A = ringF2();
    auto G = FiniteGroup::realize(m);
    NormalFormBasis nf(A, G, 1);
    GroupAlgebra B(A, G);
    int good = 0;
    for (int it = 0; it < kNormalFormTrials; ++it) {
      Vec x = B.zero();
      for (auto& e : x) e = rng() % 2;
      good += nf.invertible() && nf.fromNormalForm(nf.toNormalForm(x)) == x && nf.toNormalForm(nf.fromNormalForm(x)) == x;
    }
    ok = ok && good == kNormalFormTrials;
    os << "level " << level << " (|G| = " << G->order() << "): " << good << "/" << kNormalFormTrials << "; ";
  }
  return {ok, os.str()};
}

Verdict inflation() {
  bool ok = true;
  std::ostringstream os;
  for (auto y : allQuadUnits()) {
    auto rep = inflationCheck(buildVy(y, 3), {3}, defaultTestRings());
    ok = ok && rep.ok;
    os << quadUnitName(y) << ":";
    for (const auto& r : rep.rows) os << " " << r.ring << " " << r.base << "->" << r.inflated;
    os << "; ";
  }
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  bool reportOnly = false;
  app.add_option("--only", only, "run only these criteria");
  app.add_flag("--report-only", reportOnly, "exit 0 once every selected criterion has produced a verdict");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"group cohomology", groupCohomologyDims}, {"cup products", cupProducts},   {"Ext^1 dimensions", extDims},
      {"tangent counts", tangentCounts},         {"versality", versality},        {"perfection", perfection},
      {"Weierstrass", weierstrassSuite},         {"normal forms", normalForms}, {"inflation", inflation}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool inTime = secs < kLimit[id];
    bool pass = v.ok && inTime;
    failed += !pass;
    std::printf("criterion %d %-17s %s  %.1fs/%.0fs  %s%s\n", id, criteria[i].first.c_str(), pass ? "PASS" : "FAIL", secs,
                kLimit[id], v.detail.c_str(), inTime ? "" : " [time limit exceeded]");
    std::fflush(stdout);
  }
  return reportOnly || failed == 0 ? 0 : 1;
}
