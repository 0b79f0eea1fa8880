#include "doctest.h"
#include "hd/deformation.hpp"
#include "hd/perfection.hpp"
#include "hd/resolution.hpp"

using namespace hd;

namespace {

GroupModel caseB(int level, int w2Level) {
  GroupModel m;
  m.kase = 'B';
  m.p = 2;
  m.ell = 3;
  m.f = 1;
  m.d = 1;
  m.r = 1;
  m.level = level;
  m.w2Level = w2Level;
  return m;
}

GModule byMatrices(CtxPtr ctx, const std::vector<std::vector<std::vector<long long>>>& mats) {
  const Ring& A = *ctx->A;
  std::vector<std::vector<std::vector<Elem>>> gm;
  for (const auto& m : mats) {
    std::vector<std::vector<Elem>> W;
    for (const auto& row : m) {
      std::vector<Elem> r;
      for (long long x : row) r.push_back(A.constant(x));
      W.push_back(r);
    }
    gm.push_back(W);
  }
  return GModule::freeOverA(ctx, mats.front().size(), gm);
}

GModule trivialModule(CtxPtr ctx, std::size_t rank) {
  std::vector<std::vector<long long>> I(rank, std::vector<long long>(rank, 0));
  for (std::size_t i = 0; i < rank; ++i) I[i][i] = 1;
  return byMatrices(ctx, std::vector<std::vector<std::vector<long long>>>(ctx->G->numGens(), I));
}

// first (N, N') with (W^N - 1)^N' = 0 on M, scanning like the specification of the search
std::pair<int, int> bruteAnnihilator(const GModule& M) {
  const Zq& z = M.zq();
  const FiniteGroup& G = M.group();
  const int idx = G.genIndex("w2");
  const int order = static_cast<int>(G.genOrder(static_cast<std::size_t>(idx)));
  const Mat& W = M.gens[static_cast<std::size_t>(idx)];
  auto power = [&](Mat X, int e) {
    Mat out = Mat::identity(X.r);
    for (int i = 0; i < e; ++i) out = z.mul(out, X);
    return out;
  };
  const int maxNp = std::max(1L, M.fiberDim());
  for (int N = 1; N < order; N *= 2)
    for (int Np = 1; Np <= maxNp; ++Np) {
      Mat E = power(z.sub(power(W, N), Mat::identity(M.n)), Np);
      if (z.containsAll(M.rel, E)) return {N, Np};
    }
  return {order, 1};
}

Complex coneOfIdentity(const GModule& M) {
  Complex C;
  C.ctx = M.ctx;
  C.lo = -1;
  C.terms = {M, M};
  C.d = {Mat::identity(M.n)};
  return C;
}

}  // namespace

TEST_CASE("findAnnihilator examples agree with a direct scan") {
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(caseB(2, 2)));
  GModule k = trivialModule(ctx, 1);
  auto a = findAnnihilator(k);
  CHECK(a.N == 1);
  CHECK(a.Nprime == 1);
  CHECK(a.verified);
  // w1 trivial, w2 swapping the two coordinates
  GModule swap = byMatrices(ctx, {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}});
  swap.validate();
  auto b = findAnnihilator(swap);
  CHECK(b.N == 1);
  CHECK(b.Nprime == 2);
  CHECK(std::make_pair(b.N, b.Nprime) == bruteAnnihilator(swap));
  for (auto A : {ringF2(), ringZ4()}) {
    auto c2 = makeContext(A, FiniteGroup::realize(caseB(2, 2)));
    GModule B = GModule::freeOverB(c2, 1);
    auto w = findAnnihilator(B);
    CHECK(std::make_pair(w.N, w.Nprime) == bruteAnnihilator(B));
    CHECK(annihilates(B, w.generator));
  }
}

TEST_CASE("Artin-Rees complement examples") {
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(GroupModel::named("Z2", 3)));
  const Zq& z = ctx->zq();
  GModule M = GModule::freeOverB(ctx, 1);  // F2[x]/(x^8)
  REQUIRE(M.n == 8);

  auto w0 = arComplement(M, z.zeroSpan(M.n));
  CHECK(z.logSize(w0.Mprime) == 8);
  CHECK(w0.quotientLength == 0);

  // socle spanned by the norm element
  GroupAlgebra alg(ctx->A, ctx->G);
  Vec norm(8, 1);
  Howell T = M.submodule({norm});
  CHECK(z.logSize(T) == 1);
  auto w = arComplement(M, T);
  // direct scan of the ideals (x^j) against the socle
  Vec x = alg.sub(alg.groupElement(ctx->G->gen(0)), alg.groupElement(0));
  int firstJ = -1;
  for (int j = 1; j <= 9 && firstJ < 0; ++j) {
    Howell I = M.submodule({alg.pow(x, static_cast<unsigned>(j))});
    if (z.logSize(z.intersect(I, T)) == 0) firstJ = j;
  }
  CHECK(firstJ == 8);
  CHECK(w.q == firstJ - 1);
  CHECK(z.logSize(w.Mprime) == 0);
  CHECK(w.intersectionZero);
  CHECK(w.submodule);
  REQUIRE(w.ideal.size() == 1);
  CHECK(w.ideal[0].h.size() == 2);

  // T = M with trivial w1-action: F = x, q = 0, M' = I M = 0
  GModule k2 = trivialModule(ctx, 2);
  auto wt = arComplement(k2, z.howell(Mat::identity(2)));
  CHECK(wt.q == 0);
  CHECK(z.logSize(wt.Mprime) == 0);
  CHECK(wt.ideal[0].F.size() == 2);
  CHECK(wt.quotientGenerators == 2);
}

TEST_CASE("monic annihilators are Weierstrass-prepared") {
  // A = Z/4, w1 acting by 3: F(x) = x - 2 kills M
  auto ctx = makeContext(ringZ4(), FiniteGroup::realize(GroupModel::named("Z2", 2)));
  GModule M = byMatrices(ctx, {{{3}}});
  M.validate();
  const Zq& z = ctx->zq();
  auto xs = centralVariables(*ctx->G);
  REQUIRE(xs.size() == 1);
  auto ma = monicAnnihilator(M, z.howell(Mat::identity(M.n)), M.rel, xs[0]);
  REQUIRE(ma.h.size() == 2);
  CHECK(ma.divides);
  // h(s - 1) = h(2) = 0 in Z/4
  const Ring& A = *ctx->A;
  Elem v = A.add(ma.h[0], A.mul(ma.h[1], A.constant(2)));
  CHECK(A.isZero(v));
  CHECK(A.inMaximalIdeal(ma.h[0]));

  auto fc = freeCover(M);
  CHECK(fc.surjective);
  CHECK(fc.aFree);
  CHECK(fc.aRank == 1);
  CHECK(fc.expectedRank == 1);
}

TEST_CASE("free covers of k in case B and of free modules") {
  for (auto A : {ringF2(), ringZ4()}) {
    auto ctx = makeContext(A, FiniteGroup::realize(caseB(2, 1)));
    GModule k = trivialModule(ctx, 1);
    auto fc = freeCover(k);
    CHECK(fc.generators == 1);
    CHECK(fc.aFree);
    CHECK(fc.surjective);
    CHECK(fc.aRank == 1);
    CHECK(fc.aRank == fc.expectedRank);
    // phi is the augmentation: every group element maps to the generator
    const std::size_t kd = A->dim();
    for (std::size_t g = 0; g < ctx->G->order(); ++g) CHECK(fc.phi(g * kd, 0) == 1);

    GModule B = GModule::freeOverB(ctx, 2);
    auto fb = freeCover(B);
    CHECK(fb.identity);
    CHECK(fb.aRank == static_cast<long>(2 * ctx->G->order()));
  }
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(caseB(2, 2)));
  GModule swap = byMatrices(ctx, {{{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}});
  auto fs = freeCover(swap);
  CHECK(fs.aFree);
  CHECK(fs.surjective);
  CHECK(fs.aRank == fs.expectedRank);
}

TEST_CASE("an already perfect complex is returned unchanged") {
  auto P = buildVy(QuadUnit::Ell, 3);
  Complex V = P.base();
  auto r = perfect(V, -1, 0);
  CHECK(r.ok);
  CHECK(r.shortCircuit);
  CHECK(r.aRanks == std::vector<long>{2, 2});
  CHECK(r.L.hash() == V.hash());

  auto E = enumerateLifts(P, ringF2u3());
  REQUIRE(E.classCount() > 1);
  for (std::size_t c : {std::size_t{0}, E.classCount() - 1}) {
    Complex L = liftComplex(P, ringF2u3(), E.table, E.lifts[E.reps[c]].data);
    auto rl = perfect(L, -1, 0);
    CHECK(rl.ok);
    CHECK(rl.aRanks == std::vector<long>{2, 2});
  }
}

TEST_CASE("acyclic inputs give the zero complex") {
  for (auto model : {GroupModel::named("Z2xZ2", 2), caseB(2, 2)}) {
    auto ctx = makeContext(ringF2(), FiniteGroup::realize(model));
    Complex C = coneOfIdentity(trivialModule(ctx, 1));
    auto R = resolveComplex(C, -3);
    for (const Complex& P : {C, R.L}) {
      auto r = perfect(P, -1, 0);
      CHECK_MESSAGE(r.ok, r.failure);
      CHECK(r.aRanks == std::vector<long>{0, 0});
      CHECK(r.L.trimmed().empty());
      CHECK(replayTrace(r.trace.toJson()).ok);
    }
  }
}

TEST_CASE("case B: the unit ideal runs the section and splice") {
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(caseB(2, 2)));
  auto R = resolveComplex(coneOfIdentity(trivialModule(ctx, 1)), -3);
  auto s = annihilationPass(R.L, -1, 0);
  int claims = 0, splices = 0;
  for (const auto& l : s.legs) {
    CHECK_MESSAGE(l.cert.ok, l.stage << " " << l.details.dump());
    if (l.details.value("claim", 0) == 1) ++claims;
    if (l.details.value("claim", 0) == 3) ++splices;
  }
  CHECK(claims == 2);
  CHECK(splices == 1);
  CHECK(s.details["J"].is_object());
  CHECK(s.details["J"]["containedInEach"] == true);
  for (const auto& M : s.out.terms) CHECK(M.logSize() == 0);
}

TEST_CASE("case B: H^0 = k is killed by w2 - 1 after the first pass") {
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(caseB(2, 2)));
  auto R = resolveComplex(Complex::single(trivialModule(ctx, 1), 0), -2);
  auto s = annihilationPass(R.L, 0, 0);
  GroupAlgebra alg(ctx->A, ctx->G);
  Vec e = alg.sub(alg.groupElement(ctx->G->gen(static_cast<std::size_t>(ctx->G->genIndex("w2")))), alg.groupElement(0));
  CHECK(annihilates(s.out.term(0), e));
  CHECK(s.legs.back().cert.ok);
  // the section fails at finite level and the pass escalates to J = 0
  CHECK(s.details["J"] == "zero");
  CHECK(!s.details["escalations"].empty());

  auto r = perfect(R.L, 0, 0);
  CHECK_MESSAGE(r.ok, r.failure);
  CHECK(r.aRanks == std::vector<long>{1});
}

TEST_CASE("k in degree zero has level-independent output ranks") {
  std::vector<long> first;
  for (int level : {2, 3}) {
    auto ctx = makeContext(ringZ4(), FiniteGroup::realize(GroupModel::named("Z2xZ2", level)));
    auto R = resolveComplex(Complex::single(trivialModule(ctx, 1), 0), -2);
    auto r = perfect(R.L, 0, 0);
    REQUIRE_MESSAGE(r.ok, r.failure);
    CHECK(r.aFree);
    if (first.empty())
      first = r.aRanks;
    else
      CHECK(r.aRanks == first);
  }
  CHECK(first == std::vector<long>{1});
}

TEST_CASE("random samples: verified traces, free terms, mutation detection") {
  for (char kase : {'A', 'B'}) {
    auto s = randomSample(kase, 2);
    auto P = sampleInput(s, 2);
    auto r = perfect(P, s.n1, s.n2);
    REQUIRE_MESSAGE(r.ok, r.failure);
    CHECK(r.aFree);
    CHECK(r.supportOk);
    auto j = r.trace.toJson();
    CHECK(replayTrace(j).ok);

    // corrupt one map entry of the step-3 leg
    int leg = -1;
    for (std::size_t i = 0; i < r.trace.legs.size(); ++i)
      if (r.trace.legs[i].stage == "step3") leg = static_cast<int>(i);
    REQUIRE(leg >= 0);
    auto bad = j;
    auto& maps = bad["legs"][static_cast<std::size_t>(leg)]["map"];
    bool changed = false;
    for (auto& [deg, m] : maps.items()) {
      if (changed) break;
      auto& rows = m;
      for (std::size_t a = 0; a < rows.size() && !changed; ++a)
        for (std::size_t b = 0; b < rows[a].size() && !changed; ++b) {
          rows[a][b] = (rows[a][b].get<u64>() + 1) % s.A->zq().q();
          changed = true;
        }
    }
    REQUIRE(changed);
    auto rep = replayTrace(bad);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failingLeg == leg);

    // corrupt a complex: the hash no longer matches
    auto bad2 = j;
    bad2["legs"][0]["output"]["lo"] = bad2["legs"][0]["output"]["lo"].get<int>() - 1;
    auto rep2 = replayTrace(bad2);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.failingLeg == 0);
  }
}
