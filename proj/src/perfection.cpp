#include "hd/perfection.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "hd/resolution.hpp"

namespace hd {

namespace {

std::vector<Vec> rowsOf(const Mat& m) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < m.r; ++i) out.push_back(m.rowVec(i));
  return out;
}

Howell fullSpan(const GModule& M) { return M.zq().howell(Mat::identity(M.n)); }

Mat groupMatrix(const GModule& M, int g) {
  const FiniteGroup& G = M.group();
  std::vector<int> word;
  while (g != 0) {
    word.push_back(G.parentGen(g));
    g = G.parent(g);
  }
  Mat R = Mat::identity(M.n);
  for (auto it = word.rbegin(); it != word.rend(); ++it) R = M.zq().mul(R, M.gens[static_cast<std::size_t>(*it)]);
  return R;
}

Mat matPow(const Zq& z, const Mat& X, long e) {
  Mat out = Mat::identity(X.r), b = X;
  while (e > 0) {
    if (e & 1) out = z.mul(out, b);
    b = z.mul(b, b);
    e >>= 1;
  }
  return out;
}

Vec concat(const std::vector<Vec>& parts) {
  Vec out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Howell blockRelations(const Zq& z, const std::vector<Howell>& rels) {
  std::size_t total = 0;
  for (const auto& h : rels) total += h.cols;
  std::vector<Vec> rows;
  std::size_t off = 0;
  for (const auto& h : rels) {
    for (std::size_t i = 0; i < h.rows.r; ++i) {
      Vec v(total, 0);
      for (std::size_t j = 0; j < h.cols; ++j) v[off + j] = h.rows(i, j);
      rows.push_back(std::move(v));
    }
    off += h.cols;
  }
  return z.howell(rows, total);
}

Mat columns(const Mat& m, std::size_t c0, std::size_t c1) { return submatrix(m, 0, m.r, c0, c1); }

GModule withRelations(const GModule& M, const Howell& rel) {
  GModule Q = M;
  Q.rel = rel;
  Q.freeA = Q.freeB = -1;
  return Q;
}

Complex brutalBelow(const Complex& C, int top) {
  Complex out = C;
  while (!out.terms.empty() && out.hi() > top) {
    out.terms.pop_back();
    if (!out.d.empty()) out.d.pop_back();
  }
  return out;
}

// the last w2 generator index, or -1
int w2Index(const FiniteGroup& G, int j) {
  const auto& m = G.model();
  if (m.kase != 'B' || m.r < 1) return -1;
  return G.genIndex(m.r == 1 ? "w2" : "w2_" + std::to_string(j));
}

bool caseBWithW2(const FiniteGroup& G) { return G.model().kase == 'B' && G.model().r >= 1; }

std::vector<Elem> binomialMinusOne(const Ring& A, long o) {
  // (1+x)^o - 1, coefficients mod q via Pascal's rule
  const Zq& z = A.zq();
  std::vector<u64> row{1};
  for (long i = 0; i < o; ++i) {
    std::vector<u64> next(row.size() + 1, 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] = z.add(next[j], row[j]);
      next[j + 1] = z.add(next[j + 1], row[j]);
    }
    row = std::move(next);
  }
  std::vector<Elem> out;
  for (std::size_t j = 0; j < row.size(); ++j) out.push_back(A.constant(static_cast<long long>(row[j])));
  out[0] = A.zero();
  return out;
}

nlohmann::json polyJson(const Ring& A, const std::vector<Elem>& f) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : f) j.push_back(A.format(c));
  return j;
}

// Y_q = I^{q+1} S + base, stopping when Y_q meets T + base inside base.
ComplementWitness complementInSpan(const GModule& M, const Howell& S, const Howell& T, const Howell& base) {
  const Zq& z = M.zq();
  ComplementWitness w;
  const Howell Tb = z.sum(T, base.rows);
  std::vector<Mat> H;
  for (const auto& x : centralVariables(M.group())) {
    w.ideal.push_back(monicAnnihilator(M, Tb, base, x));
    H.push_back(polynomialAction(M, x, w.ideal.back().h));
  }
  auto step = [&](const Howell& Y) {
    Howell out = base;
    for (const auto& Hj : H) out = z.sum(out, z.mul(Y.rows, Hj));
    return out;
  };
  const long baseSize = z.logSize(base);
  Howell Y = step(S);
  for (int q = 0;; ++q) {
    if (z.logSize(z.intersect(Y, Tb)) == baseSize) {
      w.q = q;
      break;
    }
    Howell next = step(Y);
    if (next == Y || q > 4 * static_cast<int>(M.n) * M.zq().m() + 8)
      throw std::logic_error("complement: powers of the annihilating ideal stabilized before separating T");
    Y = next;
  }
  w.Mprime = Y;
  w.intersectionZero = true;
  return w;
}

void finishWitness(const GModule& M, ComplementWitness& w, const Howell& T) {
  const Zq& z = M.zq();
  w.intersectionZero = z.logSize(z.intersect(w.Mprime, z.sum(T, M.rel.rows))) == z.logSize(M.rel);
  bool stable = z.subset(M.rel, w.Mprime);
  for (const auto& R : M.gens) stable = stable && z.containsAll(w.Mprime, z.mul(w.Mprime.rows, R));
  for (const auto& X : M.vars) stable = stable && z.containsAll(w.Mprime, z.mul(w.Mprime.rows, X));
  w.submodule = stable;
  GModule Q = withRelations(M, w.Mprime);
  w.quotientGenerators = Q.fiberDim();
  w.quotientLength = Q.logSize();
}

TraceLeg makeLeg(const std::string& stage, bool forward, const Complex& in, const Complex& out, ChainMap map,
                 nlohmann::json details) {
  TraceLeg leg;
  leg.stage = stage;
  leg.forward = forward;
  leg.input = in;
  leg.output = out;
  leg.map = std::move(map);
  leg.inputHash = in.hash();
  leg.outputHash = out.hash();
  leg.cert = forward ? checkQuasiIso(in, out, leg.map) : checkQuasiIso(out, in, leg.map);
  leg.details = std::move(details);
  return leg;
}

Complex assemble(CtxPtr ctx, int lo, std::vector<GModule> terms, std::vector<Mat> d, bool openBelow) {
  Complex C;
  C.ctx = std::move(ctx);
  C.lo = lo;
  C.terms = std::move(terms);
  C.d = std::move(d);
  C.openBelow = openBelow;
  return C;
}

// tau_{>= n} with the n-th term divided by boundaries; identity coordinates
std::pair<Complex, ChainMap> goodTruncation(const Complex& C, int n) {
  std::vector<GModule> terms;
  std::vector<Mat> d;
  ChainMap f;
  for (int i = n; i <= C.hi(); ++i) {
    GModule T = C.term(i);
    if (i == n) T = withRelations(T, C.ctx->zq().sum(T.rel, C.diff(n - 1)));
    terms.push_back(T);
    if (i < C.hi()) d.push_back(C.diff(i));
    f.f[i] = Mat::identity(T.n);
  }
  return {assemble(C.ctx, n, std::move(terms), std::move(d), false), f};
}

// Same complex in compact coordinates, with the coordinate change from C.
std::pair<Complex, ChainMap> compactComplex(const Complex& C) {
  const Zq& z = C.ctx->zq();
  std::vector<Compacted> cs;
  for (const auto& M : C.terms) cs.push_back(compact(M));
  std::vector<GModule> terms;
  std::vector<Mat> d;
  ChainMap f;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    terms.push_back(cs[i].C);
    f.f[C.lo + static_cast<int>(i)] = cs[i].toC;
    if (i + 1 < cs.size()) d.push_back(z.mul(z.mul(cs[i].fromC, C.d[i]), cs[i + 1].toC));
  }
  return {assemble(C.ctx, C.lo, std::move(terms), std::move(d), C.openBelow), f};
}

// Pullback construction downward from `top`: L^i covers
// {(c, l) in C^i + L^{i+1} : dc = pi(l), dl = 0}; optionally with an extra summand covering Z^i(C).
struct Tower {
  std::map<int, GModule> L;
  std::map<int, Mat> d, pi;
  std::map<int, nlohmann::json> details;
};

Tower pullbackTower(const Complex& C, int top, int bottom, bool overB, bool cycleSummand) {
  const auto ctx = C.ctx;
  const Zq& z = ctx->zq();
  Tower t;
  auto Lterm = [&](int i) { return t.L.count(i) ? t.L.at(i) : GModule::freeOverB(ctx, 0); };
  auto Cterm = [&](int i) { return i > top ? GModule::zero(ctx) : C.term(i); };
  for (int i = top; i >= bottom; --i) {
    GModule Ci = Cterm(i), C1 = Cterm(i + 1), L1 = Lterm(i + 1), L2 = Lterm(i + 2);
    Mat dC = i + 1 > top ? Mat(Ci.n, 0) : C.diff(i);
    Mat p1 = t.pi.count(i + 1) ? t.pi.at(i + 1) : Mat(L1.n, C1.n);
    Mat dL1 = t.d.count(i + 1) ? t.d.at(i + 1) : Mat(L1.n, L2.n);
    GModule X = directSum(Ci, L1);
    Mat Phi(X.n, C1.n + L2.n);
    for (std::size_t r = 0; r < Ci.n; ++r)
      for (std::size_t c = 0; c < C1.n; ++c) Phi(r, c) = dC(r, c);
    for (std::size_t r = 0; r < L1.n; ++r) {
      for (std::size_t c = 0; c < C1.n; ++c) Phi(Ci.n + r, c) = z.neg(p1(r, c));
      for (std::size_t c = 0; c < L2.n; ++c) Phi(Ci.n + r, C1.n + c) = dL1(r, c);
    }
    Howell span = z.preimage(Phi, directSum(C1, L2).rel);
    nlohmann::json det;
    GModule F;
    Mat tau;  // F -> X
    if (overB) {
      auto gens = X.generators(span);
      F = GModule::freeOverB(ctx, gens.size());
      tau = freeMap(F, X, gens);
      det["generators"] = gens.size();
    } else {
      Subquotient sq = subquotient(X, span, X.rel);
      FreeCover fc = freeCover(sq.mod);
      Compacted cf = compact(fc.F);
      F = cf.C;
      tau = z.mul(z.mul(cf.fromC, fc.phi), sq.lift);
      det["pullbackCover"] = fc.details;
    }
    Mat piF = columns(tau, 0, Ci.n), dF = columns(tau, Ci.n, X.n);
    if (cycleSummand && Ci.n > 0) {
      Howell Zc = z.preimage(dC, C1.rel);
      Subquotient sq = subquotient(Ci, Zc, Ci.rel);
      FreeCover fc = freeCover(sq.mod);
      Compacted cf = compact(fc.F);
      Mat tau1 = z.mul(z.mul(cf.fromC, fc.phi), sq.lift);
      F = directSum(cf.C, F);
      piF = vstack(tau1, piF);
      dF = vstack(Mat(cf.C.n, L1.n), dF);
      det["cycleCover"] = fc.details;
    }
    t.L[i] = F;
    t.pi[i] = piF;
    t.d[i] = dF;
    t.details[i] = det;
  }
  return t;
}

// Complex from a tower in degrees [bottom, top], glued to C above top by d^{top} = pi^{top} d_C^{top}.
std::pair<Complex, ChainMap> spliceTower(const Complex& C, const Tower& t, int top, int bottom) {
  const Zq& z = C.ctx->zq();
  std::vector<GModule> terms;
  std::vector<Mat> d;
  ChainMap f;
  for (int i = bottom; i <= std::max(top, C.hi()); ++i) {
    if (i <= top) {
      terms.push_back(t.L.at(i));
      f.f[i] = t.pi.at(i);
    } else {
      terms.push_back(C.term(i));
      f.f[i] = Mat::identity(C.term(i).n);
    }
  }
  for (int i = bottom; i < std::max(top, C.hi()); ++i) {
    if (i < top)
      d.push_back(t.d.at(i));
    else if (i == top)
      d.push_back(z.mul(t.pi.at(i), C.diff(i)));
    else
      d.push_back(C.diff(i));
  }
  return {assemble(C.ctx, bottom, std::move(terms), std::move(d), true), f};
}

// zero B-free terms below a bounded complex, making it open below `lo`
Complex padBelow(const Complex& C, int lo) {
  Complex out = C;
  if (out.empty()) out.lo = lo + 1;
  while (out.lo > lo) {
    GModule Z = GModule::freeOverB(C.ctx, 0);
    out.d.insert(out.d.begin(), Mat(0, out.terms.empty() ? 0 : out.terms.front().n));
    if (out.terms.empty()) out.d.clear();
    out.terms.insert(out.terms.begin(), Z);
    --out.lo;
  }
  out.openBelow = true;
  return out;
}

nlohmann::json chainMapJson(const ChainMap& f) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [deg, m] : f.f) j[std::to_string(deg)] = matJson(m);
  return j;
}

}  // namespace

Mat algebraAction(const GModule& M, const Vec& e) {
  const Ring& A = M.ring();
  const Zq& z = M.zq();
  const std::size_t k = A.dim(), N = M.group().order();
  Mat out(M.n, M.n);
  for (std::size_t g = 0; g < N; ++g) {
    Elem c(e.begin() + static_cast<long>(g * k), e.begin() + static_cast<long>((g + 1) * k));
    if (A.isZero(c)) continue;
    out = z.add(out, z.mul(groupMatrix(M, static_cast<int>(g)), M.ringAction(c)));
  }
  return out;
}

bool annihilates(const GModule& M, const Vec& e) {
  if (M.n == 0) return true;
  return M.zq().containsAll(M.rel, algebraAction(M, e));
}

nlohmann::json AnnihilatorWitness::toJson() const {
  return {{"j", j}, {"N", N}, {"Nprime", Nprime}, {"zero", zero}, {"verified", verified}};
}

AnnihilatorWitness annihilatorElement(CtxPtr ctx, int j, int N, int Nprime) {
  const FiniteGroup& G = *ctx->G;
  const int idx = w2Index(G, j);
  if (idx < 0) throw std::invalid_argument("annihilator: the group has no w2 generator");
  GroupAlgebra alg(ctx->A, ctx->G);
  Vec w = alg.groupElement(G.gen(static_cast<std::size_t>(idx)));
  Vec e = alg.pow(alg.sub(alg.pow(w, static_cast<unsigned>(N)), alg.groupElement(0)), static_cast<unsigned>(Nprime));
  AnnihilatorWitness a;
  a.j = j;
  a.N = N;
  a.Nprime = Nprime;
  a.generator = e;
  a.zero = alg.equal(e, alg.zero());
  return a;
}

AnnihilatorWitness findAnnihilator(const GModule& M, int j) {
  const FiniteGroup& G = M.group();
  const int idx = w2Index(G, j);
  if (idx < 0) throw std::invalid_argument("annihilator: the group has no w2 generator");
  const long order = static_cast<long>(G.genOrder(static_cast<std::size_t>(idx)));
  const long maxNp = std::max(1L, M.fiberDim());
  for (long N = 1; N < order; N *= G.model().p)
    for (long Np = 1; Np <= maxNp; ++Np) {
      auto a = annihilatorElement(M.ctx, j, static_cast<int>(N), static_cast<int>(Np));
      if (annihilates(M, a.generator)) {
        a.verified = true;
        return a;
      }
    }
  auto a = annihilatorElement(M.ctx, j, static_cast<int>(order), 1);
  a.verified = annihilates(M, a.generator);
  return a;
}

std::vector<CentralVariable> centralVariables(const FiniteGroup& G) {
  const auto& m = G.model();
  std::vector<CentralVariable> out;
  auto orderOf = [&](int c) {
    long o = 1;
    for (int x = c; x != 0; x = G.mul(x, c)) ++o;
    return o;
  };
  if (m.kase == 'A') {
    for (int j = 0; j < m.s; ++j) {
      CentralVariable x;
      x.name = m.s == 1 ? "w1" : "w1_" + std::to_string(j + 1);
      x.gen = G.genIndex(x.name);
      x.element = G.gen(static_cast<std::size_t>(x.gen));
      x.order = orderOf(x.element);
      out.push_back(x);
    }
    return out;
  }
  CentralVariable x;
  x.gen = G.genIndex("w1");
  const int w = G.gen(static_cast<std::size_t>(x.gen));
  for (int z = 1;; ++z) {
    int c = G.pow(w, z);
    bool central = true;
    for (std::size_t s = 0; s < G.numGens() && central; ++s)
      central = G.mul(c, G.gen(s)) == G.mul(G.gen(s), c);
    if (central) {
      x.z = z;
      x.element = c;
      x.name = z == 1 ? "w1" : "w1^" + std::to_string(z);
      x.order = orderOf(c);
      break;
    }
  }
  out.push_back(x);
  return out;
}

nlohmann::json MonicAnnihilator::toJson(const Ring& A) const {
  return {{"variable", x.name}, {"F", polyJson(A, F)}, {"h", polyJson(A, h)}, {"divides", divides}};
}

Mat polynomialAction(const GModule& M, const CentralVariable& x, const std::vector<Elem>& h) {
  const Zq& z = M.zq();
  Mat X = z.sub(matPow(z, M.gens[static_cast<std::size_t>(x.gen)], x.z), Mat::identity(M.n));
  Mat acc = M.ringAction(h.back());
  for (std::size_t i = h.size() - 1; i-- > 0;) acc = z.add(z.mul(acc, X), M.ringAction(h[i]));
  return acc;
}

Vec polynomialElement(CtxPtr ctx, const CentralVariable& x, const std::vector<Elem>& h) {
  GroupAlgebra alg(ctx->A, ctx->G);
  Vec xe = alg.sub(alg.groupElement(x.element), alg.groupElement(0));
  Vec acc = alg.element(0, h.back());
  for (std::size_t i = h.size() - 1; i-- > 0;) acc = alg.add(alg.mul(acc, xe), alg.element(0, h[i]));
  return acc;
}

MonicAnnihilator monicAnnihilator(const GModule& M, const Howell& T, const Howell& base, const CentralVariable& x) {
  const Zq& z = M.zq();
  const Ring& A = M.ring();
  const std::size_t k = A.dim();
  MonicAnnihilator out;
  out.x = x;
  Mat X = z.sub(matPow(z, M.gens[static_cast<std::size_t>(x.gen)], x.z), Mat::identity(M.n));
  const auto& RB = M.basisActions();
  std::vector<Vec> gens;
  for (const auto& g : M.generators(z.sum(T, M.rel.rows)))
    if (!z.contains(base, g)) gens.push_back(g);
  const std::size_t S = gens.size();
  const Howell bigRel = blockRelations(z, std::vector<Howell>(S, base));
  // powers[i][s] = t_s X^i
  std::vector<std::vector<Vec>> powers{gens};
  const int cap = static_cast<int>(M.n) * z.m() + 2;
  for (int n = 0; n <= cap; ++n) {
    if (n > 0) {
      std::vector<Vec> next;
      for (const auto& v : powers.back()) next.push_back(z.mul(v, X));
      powers.push_back(std::move(next));
    }
    if (S == 0) {
      out.F = {A.one()};
      break;
    }
    std::vector<Vec> target;
    for (const auto& v : powers[static_cast<std::size_t>(n)]) target.push_back(z.scale(v, z.q() - 1));
    Vec b = concat(target);
    Mat F(static_cast<std::size_t>(n) * k, S * M.n);
    for (int i = 0; i < n; ++i)
      for (std::size_t bb = 0; bb < k; ++bb) {
        std::vector<Vec> parts;
        for (std::size_t s = 0; s < S; ++s) parts.push_back(z.mul(powers[static_cast<std::size_t>(i)][s], RB[bb]));
        F.setRow(static_cast<std::size_t>(i) * k + bb, concat(parts));
      }
    std::optional<Vec> u;
    if (n == 0) {
      if (z.containsAll(bigRel, Mat::fromRows({b}, S * M.n))) u = Vec{};
    } else {
      u = solveModulo(z, F, b, bigRel);
    }
    if (u) {
      out.F.clear();
      for (int i = 0; i < n; ++i) {
        Elem c(k, 0);
        for (std::size_t bb = 0; bb < k; ++bb) c[bb] = (*u)[static_cast<std::size_t>(i) * k + bb];
        out.F.push_back(A.reduce(c));
      }
      out.F.push_back(A.one());
      break;
    }
    if (n == cap) throw std::logic_error("monic annihilator: no annihilating polynomial found");
  }
  const int deg = static_cast<int>(out.F.size()) - 1;
  if (deg == 0) {
    out.h = {A.one()};
  } else {
    auto w = weierstrass(TruncatedSeries::fromCoeffs(M.ctx->A, deg + 1, out.F));
    out.h = w.h;
  }
  auto target = binomialMinusOne(A, x.order);
  auto [quo, rem] = polyDivMonic(A, target, out.h);
  out.divides = std::all_of(rem.begin(), rem.end(), [&](const Elem& e) { return A.isZero(e); });
  if (!out.divides) out.h = target;
  Mat H = polynomialAction(M, x, out.h);
  if (!z.containsAll(base, z.mul(z.sum(T, base.rows).rows, H)))
    throw std::logic_error("monic annihilator: h(x) does not annihilate T");
  return out;
}

nlohmann::json ComplementWitness::toJson(const Ring& A) const {
  nlohmann::json id = nlohmann::json::array();
  for (const auto& m : ideal) id.push_back(m.toJson(A));
  return {{"q", q},
          {"ideal", id},
          {"quotientGenerators", quotientGenerators},
          {"quotientLength", quotientLength},
          {"intersectionZero", intersectionZero},
          {"submodule", submodule},
          {"chain", chain}};
}

ComplementWitness arComplement(const GModule& M, const Howell& T) {
  ComplementWitness w = complementInSpan(M, fullSpan(M), M.zq().sum(T, M.rel.rows), M.rel);
  finishWitness(M, w, T);
  return w;
}

ComplementWitness arComplementChain(const GModule& M, const Howell& T, const Vec& epsilon) {
  const Zq& z = M.zq();
  const Mat E = algebraAction(M, epsilon);
  const Howell Tr = z.sum(T, M.rel.rows);
  Howell Mn = M.rel;
  ComplementWitness last;
  std::vector<long> chain{z.logSize(Mn)};
  for (int iter = 0;; ++iter) {
    Howell K = z.preimage(E, Mn);
    ComplementWitness w = complementInSpan(M, K, Tr, Mn);
    if (iter > 0 && z.subset(w.Mprime, Mn)) break;
    last = w;
    Mn = z.sum(Mn, w.Mprime.rows);
    chain.push_back(z.logSize(Mn));
    if (iter > static_cast<int>(M.n) * z.m() + 2) throw std::logic_error("complement chain: no termination");
  }
  last.Mprime = Mn;
  last.chain = chain;
  finishWitness(M, last, T);
  return last;
}

Compacted compact(const GModule& M) {
  const Zq& z = M.zq();
  Compacted out;
  if (M.n == 0) {
    out.C = M;
    return out;
  }
  Subquotient sq = subquotient(M, fullSpan(M), M.rel);
  out.C = sq.mod;
  out.fromC = sq.lift;
  const std::size_t k = sq.mod.n;
  out.toC = Mat(M.n, k);
  Solver solver(z, vstack(sq.lift, M.rel.rows));
  for (std::size_t i = 0; i < M.n; ++i) {
    auto x = solver.solve(M.unit(i));
    if (!x) throw std::logic_error("compact: coordinate not generated");
    for (std::size_t j = 0; j < k; ++j) out.toC(i, j) = (*x)[j];
  }
  return out;
}

FreeCover freeCover(const GModule& M) {
  const Zq& z = M.zq();
  const auto ctx = M.ctx;
  const FiniteGroup& G = M.group();
  FreeCover fc;
  if (M.freeB >= 0) {
    fc.F = M;
    fc.phi = Mat::identity(M.n);
    fc.identity = true;
    fc.generators = M.freeB;
    fc.aRank = fc.expectedRank = static_cast<long>(M.freeB * G.order());
    fc.aFree = fc.surjective = true;
    fc.details = {{"identity", true}, {"aRank", fc.aRank}};
    return fc;
  }
  if (M.logSize() == 0) {
    fc.F = GModule::freeOverB(ctx, 0);
    fc.phi = Mat(0, M.n);
    fc.aFree = fc.surjective = true;
    fc.details = {{"zero", true}, {"aRank", 0}};
    return fc;
  }
  const auto gens = M.generators(fullSpan(M));
  const std::size_t m = gens.size();
  const GModule F0 = GModule::freeOverB(ctx, m);
  std::vector<Vec> elements;
  nlohmann::json ideal = nlohmann::json::array();
  double expected = static_cast<double>(m * G.order());
  for (const auto& x : centralVariables(G)) {
    auto ma = monicAnnihilator(M, fullSpan(M), M.rel, x);
    elements.push_back(polynomialElement(ctx, x, ma.h));
    ideal.push_back(ma.toJson(M.ring()));
    expected *= static_cast<double>(ma.h.size() - 1) / static_cast<double>(x.order);
  }
  std::optional<AnnihilatorWitness> eps;
  long o2 = 1;
  if (caseBWithW2(G)) {
    eps = findAnnihilator(M);
    o2 = static_cast<long>(G.genOrder(static_cast<std::size_t>(w2Index(G, 1))));
  }
  const std::size_t blk = G.order() * M.ring().dim();
  nlohmann::json escalations = nlohmann::json::array();
  for (;;) {
    std::vector<Vec> all = elements;
    if (eps && !eps->zero) all.push_back(eps->generator);
    std::vector<Vec> relVecs;
    for (std::size_t i = 0; i < m; ++i)
      for (const auto& e : all) {
        Vec v(F0.n, 0);
        std::copy(e.begin(), e.end(), v.begin() + static_cast<long>(i * blk));
        relVecs.push_back(v);
      }
    GModule D = relVecs.empty() ? F0 : quotientModule(F0, Mat::fromRows(relVecs, F0.n));
    if (!relVecs.empty()) D.freeB = -1;
    if (eps && !eps->zero && !D.isAFree()) {
      escalations.push_back(eps->toJson());
      const int N = static_cast<int>(std::min<long>(static_cast<long>(eps->N) * G.model().p, o2));
      eps = annihilatorElement(ctx, 1, N, eps->Nprime);
      eps->verified = annihilates(M, eps->generator);
      continue;
    }
    fc.F = D;
    break;
  }
  if (eps && !eps->zero)
    expected *= static_cast<double>(std::min<long>(static_cast<long>(eps->N) * eps->Nprime, o2)) / static_cast<double>(o2);
  fc.phi = freeMap(F0, M, gens);
  fc.generators = static_cast<long>(m);
  if (!isHomomorphism(fc.F, M, fc.phi)) throw std::logic_error("freeCover: relations do not map to zero");
  fc.surjective = z.logSize(z.sum(M.rel, fc.phi)) == static_cast<long>(M.n) * z.m();
  fc.aFree = fc.F.isAFree();
  fc.aRank = fc.F.fiberDim();
  fc.expectedRank = static_cast<long>(expected + 0.5);
  fc.details = {{"generators", m}, {"ideal", ideal}, {"aRank", fc.aRank}, {"expectedRank", fc.expectedRank},
                {"aFree", fc.aFree}, {"surjective", fc.surjective}};
  if (eps) fc.details["annihilator"] = eps->toJson();
  if (!escalations.empty()) fc.details["escalations"] = escalations;
  if (!fc.aFree || !fc.surjective) throw std::logic_error("freeCover: cover is not an A-free surjection");
  return fc;
}

nlohmann::json TraceLeg::toJson() const {
  return {{"stage", stage},
          {"direction", forward ? "forward" : "backward"},
          {"inputHash", inputHash},
          {"outputHash", outputHash},
          {"input", input.toJson()},
          {"output", output.toJson()},
          {"map", chainMapJson(map)},
          {"certificate", cert.toJson()},
          {"details", details}};
}

nlohmann::json PipelineTrace::toJson() const {
  nlohmann::json ls = nlohmann::json::array();
  for (const auto& l : legs) ls.push_back(l.toJson());
  return {{"ring", ring},
          {"group", group},
          {"n1", n1},
          {"n2", n2},
          {"legs", ls},
          {"finalHash", legs.empty() ? std::string() : legs.back().outputHash},
          {"ok", ok}};
}

nlohmann::json ReplayReport::toJson() const {
  return {{"ok", ok}, {"failingLeg", failingLeg}, {"reason", reason}};
}

ReplayReport replayTrace(const nlohmann::json& trace) {
  ReplayReport rep;
  try {
    auto ctx = makeContext(Ring::fromJson(trace.at("ring")), FiniteGroup::realize(GroupModel::fromJson(trace.at("group"))));
    const auto& legs = trace.at("legs");
    std::string prev;
    for (std::size_t i = 0; i < legs.size(); ++i) {
      rep.failingLeg = static_cast<int>(i);
      const auto& l = legs[i];
      Complex in = Complex::fromJson(ctx, l.at("input")), out = Complex::fromJson(ctx, l.at("output"));
      if (in.hash() != l.at("inputHash").get<std::string>()) {
        rep.reason = "input hash mismatch";
        return rep;
      }
      if (out.hash() != l.at("outputHash").get<std::string>()) {
        rep.reason = "output hash mismatch";
        return rep;
      }
      if (i > 0 && l.at("inputHash").get<std::string>() != prev) {
        rep.reason = "input does not match the previous output";
        return rep;
      }
      prev = l.at("outputHash").get<std::string>();
      const bool fwd = l.at("direction").get<std::string>() == "forward";
      const Complex& src = fwd ? in : out;
      const Complex& dst = fwd ? out : in;
      ChainMap f;
      for (const auto& [deg, m] : l.at("map").items()) {
        int d = std::stoi(deg);
        f.f[d] = matFromJson(m, src.term(d).n, dst.term(d).n);
      }
      auto cert = checkQuasiIso(src, dst, f);
      if (!cert.ok) {
        rep.reason = "certificate: " + cert.reason;
        return rep;
      }
    }
    if (trace.contains("finalHash") && !legs.empty() && trace.at("finalHash").get<std::string>() != prev) {
      rep.failingLeg = static_cast<int>(legs.size()) - 1;
      rep.reason = "final hash mismatch";
      return rep;
    }
    rep.ok = true;
    rep.failingLeg = -1;
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.reason = std::string("malformed trace: ") + e.what();
  }
  return rep;
}

namespace {

// Claims of the annihilation step for given annihilator exponents; nullopt on failure.
std::optional<PassResult> annihilationClaims(const Complex& P, int n1, int n2,
                                             const std::vector<std::pair<int, int>>& exps, std::string& why) {
  const auto ctx = P.ctx;
  const Zq& z = ctx->zq();
  GroupAlgebra alg(ctx->A, ctx->G);
  std::vector<Vec> I;
  for (const auto& [N, Np] : exps)
    I.push_back(Np == 0 ? alg.groupElement(0) : annihilatorElement(ctx, 1, N, Np).generator);
  PassResult res;
  Complex cur = P;
  const GModule Bmod = GModule::freeOverB(ctx, 1);
  for (int j = n2; j >= n1; --j) {
    Vec e = alg.groupElement(0);
    for (int i = j; i <= n2; ++i) e = alg.mul(e, I[static_cast<std::size_t>(i - n1)]);
    GModule Qj = cur.term(j), Qj1 = cur.term(j - 1);
    if (Qj.freeB < 0) {
      why = "term in degree " + std::to_string(j) + " is not B-free";
      return std::nullopt;
    }
    const Howell Bj = z.sum(Qj.rel, cur.diff(j - 1));
    // left annihilator of e: kernel of a -> a e
    Mat right(Bmod.n, Bmod.n);
    for (std::size_t r = 0; r < Bmod.n; ++r) right.setRow(r, alg.mul(Bmod.unit(r), e));
    Howell ann = z.preimage(right, Bmod.rel);
    std::vector<Mat> annActs;
    for (const auto& a : Bmod.generators(ann)) annActs.push_back(algebraAction(Qj1, a));
    Mat Fm = cur.diff(j - 1);
    std::vector<Howell> rels{Qj.rel};
    for (const auto& Am : annActs) {
      Fm = hstack(Fm, Am);
      rels.push_back(Qj1.rel);
    }
    const Howell bigRel = blockRelations(z, rels);
    const Mat E = algebraAction(Qj, e);
    std::vector<Vec> ts, ebs;
    for (int k = 0; k < Qj.freeB; ++k) {
      Vec eb = Qj.reduce(z.mul(Qj.freeGenerator(static_cast<std::size_t>(k)), E));
      if (!z.contains(Bj, eb)) {
        why = "J Q^" + std::to_string(j) + " is not inside the boundaries";
        return std::nullopt;
      }
      Vec b = eb;
      b.resize(Fm.c, 0);
      auto t = solveModulo(z, Fm, b, bigRel);
      if (!t) {
        why = "no section with the annihilator of J in degree " + std::to_string(j);
        return std::nullopt;
      }
      ts.push_back(*t);
      ebs.push_back(eb);
    }
    Howell S1 = Qj1.submodule(ts), S0 = Qj.submodule(ebs);
    if (z.logSize(S1) - z.logSize(Qj1.rel) != z.logSize(S0) - z.logSize(Qj.rel)) {
      why = "the killed subcomplex is not acyclic in degree " + std::to_string(j);
      return std::nullopt;
    }
    Complex Q1 = cur;
    Q1.terms[static_cast<std::size_t>(j - 1 - cur.lo)] = withRelations(Qj1, S1);
    Q1.terms[static_cast<std::size_t>(j - cur.lo)] = withRelations(Qj, S0);
    try {
      Q1.validate();
    } catch (const std::exception& ex) {
      why = ex.what();
      return std::nullopt;
    }
    res.legs.push_back(makeLeg("step1", true, cur, Q1, identityMap(cur), {{"claim", 1}, {"degree", j}}));
    if (j > n1) {
      Tower t = pullbackTower(brutalBelow(Q1, j - 1), j - 1, cur.lo, true, false);
      auto [T, tau] = spliceTower(Q1, t, j - 1, cur.lo);
      res.legs.push_back(makeLeg("step1", false, Q1, T, tau, {{"claim", 3}, {"degree", j}}));
      cur = T;
    } else {
      cur = Q1;
    }
  }
  res.out = cur;
  return res;
}

}  // namespace

PassResult annihilationPass(const Complex& Pin, int n1, int n2) {
  const Complex P = Pin.openBelow ? Pin : padBelow(Pin, std::min(Pin.lo, n1 - 2));
  if (P.lo > n1 - 1) throw std::invalid_argument("annihilation: input must be known below n1");
  if (P.hi() > n2) throw std::invalid_argument("annihilation: input extends above n2");
  const auto ctx = P.ctx;
  const FiniteGroup& G = *ctx->G;
  PassResult res;
  Complex cur = P;
  nlohmann::json det;
  if (caseBWithW2(G)) {
    det["case"] = "B";
    const int order = static_cast<int>(G.genOrder(static_cast<std::size_t>(w2Index(G, 1))));
    std::vector<std::pair<int, int>> exps;
    nlohmann::json wit = nlohmann::json::array();
    for (int i = n1; i <= n2; ++i) {
      auto H = cohomologyAt(P, i);
      if (H.logSize == 0) {
        exps.emplace_back(1, 0);
        wit.push_back({{"degree", i}, {"unit", true}});
      } else {
        auto a = findAnnihilator(H.H.mod);
        exps.emplace_back(a.N, a.Nprime);
        auto j = a.toJson();
        j["degree"] = i;
        wit.push_back(j);
      }
    }
    det["witnesses"] = wit;
    nlohmann::json esc = nlohmann::json::array();
    for (;;) {
      bool zero = std::any_of(exps.begin(), exps.end(), [&](auto& e) { return e.second > 0 && e.first >= order; });
      if (zero) {
        det["J"] = "zero";
        break;
      }
      std::string why;
      auto attempt = annihilationClaims(P, n1, n2, exps, why);
      if (attempt) {
        res.legs = attempt->legs;
        cur = attempt->out;
        nlohmann::json ex = nlohmann::json::array();
        int Nprod = 1, Nsum = 0;
        for (auto& [N, Np] : exps) {
          ex.push_back({N, Np});
          Nprod *= N;
          Nsum += Np;
        }
        det["J"] = {{"exponents", ex}, {"N", Nprod}, {"Nprime", Nsum}};
        // J_{n1} inside every J_i, and B (w2^N - 1)^N' inside J_{n1}
        GroupAlgebra alg(ctx->A, ctx->G);
        const GModule Bmod = GModule::freeOverB(ctx, 1);
        std::vector<Howell> Js;
        for (int j = n1; j <= n2; ++j) {
          Vec e = alg.groupElement(0);
          for (int i = j; i <= n2; ++i) {
            auto [N, Np] = exps[static_cast<std::size_t>(i - n1)];
            e = alg.mul(e, Np == 0 ? alg.groupElement(0) : annihilatorElement(ctx, 1, N, Np).generator);
          }
          Js.push_back(Bmod.submodule({e}));
        }
        bool chain = true;
        for (const auto& Ji : Js) chain = chain && ctx->zq().subset(Js.front(), Ji);
        bool inside = ctx->zq().subset(Bmod.submodule({annihilatorElement(ctx, 1, std::min(Nprod, order), std::max(Nsum, 1)).generator}),
                                       Js.front());
        det["J"]["containedInEach"] = chain;
        det["J"]["productIdealInside"] = inside;
        break;
      }
      esc.push_back({{"reason", why}, {"exponents", exps}});
      for (auto& [N, Np] : exps)
        if (Np > 0) N = std::min(N * G.model().p, order);
    }
    det["escalations"] = esc;
  } else {
    det["case"] = "A";
  }
  auto [Q, f] = goodTruncation(cur, n1);
  res.legs.push_back(makeLeg("step1", true, cur, Q, f, det));
  res.out = Q;
  res.details = det;
  return res;
}

PassResult finitenessPass(const Complex& Qin, int n1, int n2, const nlohmann::json& step1) {
  const Zq& z = Qin.ctx->zq();
  Complex Q = Qin;
  std::optional<Vec> eps;
  if (step1.is_object() && step1.contains("J") && step1["J"].is_object()) {
    int N = step1["J"]["N"], Np = step1["J"]["Nprime"];
    if (Np > 1) eps = annihilatorElement(Q.ctx, 1, N, Np).generator;
  }
  nlohmann::json terms = nlohmann::json::array();
  for (int n0 = std::max(n1, Q.lo); n0 <= std::min(n2, Q.hi()); ++n0) {
    GModule M = Q.term(n0);
    Howell Z = z.preimage(Q.diff(n0), Q.term(n0 + 1).rel);
    ComplementWitness w = eps ? arComplementChain(M, Z, *eps) : arComplement(M, Z);
    if (!w.intersectionZero || !w.submodule) throw std::logic_error("finiteness: complement check failed");
    const std::size_t idx = static_cast<std::size_t>(n0 - Q.lo);
    Q.terms[idx] = withRelations(M, w.Mprime);
    if (n0 < Q.hi()) {
      GModule N = Q.terms[idx + 1];
      Q.terms[idx + 1] = withRelations(N, N.submodule(rowsOf(z.mul(w.Mprime.rows, Q.diff(n0)))));
    }
    auto j = w.toJson(M.ring());
    j["degree"] = n0;
    j["aGenerators"] = Q.terms[idx].fiberDim();
    j["length"] = Q.terms[idx].logSize();
    terms.push_back(j);
  }
  Q.validate();
  auto [Qc, f] = compactComplex(Q);
  nlohmann::json det = {{"terms", terms}, {"chain", eps.has_value()}};
  PassResult res;
  res.legs.push_back(makeLeg("step2", true, Qin, Qc, f, det));
  res.out = Qc;
  res.details = det;
  return res;
}

PassResult freeTermsPass(const Complex& Q, int n1, int n2) {
  Tower t = pullbackTower(Q, n2, n1 - 2, false, true);
  std::vector<GModule> terms;
  std::vector<Mat> d;
  ChainMap pi;
  nlohmann::json det = nlohmann::json::object();
  for (int i = n1 - 2; i <= n2; ++i) {
    terms.push_back(t.L.at(i));
    pi.f[i] = t.pi.at(i);
    if (i < n2) d.push_back(t.d.at(i));
    det[std::to_string(i)] = t.details.at(i);
  }
  Complex L = assemble(Q.ctx, n1 - 2, std::move(terms), std::move(d), true);
  L.validate();
  PassResult res;
  auto tor = checkTorDimension(L, n1);
  det["torDimension"] = {{"ok", tor.ok}, {"degree", tor.degree}, {"testModule", tor.testModule}};
  if (!tor.ok)
    throw std::runtime_error("tor-dimension check failed in degree " + std::to_string(tor.degree) + " for " +
                             tor.testModule);
  res.legs.push_back(makeLeg("step3", false, Q, L, pi, det));
  res.out = L;
  res.details = det;
  return res;
}

PassResult truncationPass(const Complex& L, int n1) {
  auto [T, f] = goodTruncation(L, n1);
  auto [C, g] = compactComplex(T);
  const Zq& z = L.ctx->zq();
  ChainMap h;
  for (const auto& [deg, m] : f.f) h.f[deg] = z.mul(m, g.f.at(deg));
  nlohmann::json ranks = nlohmann::json::object();
  bool free = true;
  for (int i = C.lo; i <= C.hi(); ++i) {
    ranks[std::to_string(i)] = C.term(i).fiberDim();
    free = free && C.term(i).isAFree();
  }
  nlohmann::json det = {{"aRanks", ranks}, {"aFree", free}};
  PassResult res;
  res.legs.push_back(makeLeg("truncate", true, L, C, h, det));
  res.out = C;
  res.details = det;
  return res;
}

nlohmann::json PerfectResult::toJson() const {
  nlohmann::json legs = nlohmann::json::array();
  for (const auto& l : trace.legs)
    legs.push_back({{"stage", l.stage}, {"ok", l.cert.ok}, {"outputHash", l.outputHash}});
  return {{"ok", ok},         {"failure", failure},   {"aRanks", aRanks}, {"aFree", aFree},
          {"supportOk", supportOk}, {"shortCircuit", shortCircuit}, {"legs", legs},
          {"finalHash", trace.legs.empty() ? std::string() : trace.legs.back().outputHash}};
}

PerfectResult perfect(const Complex& Pin, int n1, int n2) {
  PerfectResult res;
  const auto ctx = Pin.ctx;
  res.trace.ring = ctx->A->toJson();
  res.trace.group = ctx->G->model().toJson();
  res.trace.n1 = n1;
  res.trace.n2 = n2;
  auto add = [&](const PassResult& p) {
    for (const auto& l : p.legs) res.trace.legs.push_back(l);
  };
  try {
    if (n1 > n2) throw std::invalid_argument("perfect: empty degree range");
    Complex P = Pin;
    bool bounded = !P.openBelow;
    bool aFree = bounded, bFree = true;
    for (const auto& M : P.terms) {
      aFree = aFree && M.isAFree();
      bFree = bFree && M.freeB >= 0;
    }
    if (bounded && aFree && P.trimmed().empty()) {
      res.shortCircuit = true;
    } else if (bounded && aFree) {
      Complex T = P.trimmed();
      res.shortCircuit = T.lo >= n1 && T.hi() <= n2;
    }
    if (res.shortCircuit && isAcyclic(P)) {
      Complex Z = Complex::zero(ctx, n1);
      res.trace.legs.push_back(makeLeg("truncate", true, P, Z, ChainMap{}, {{"alreadyPerfect", true}, {"acyclic", true}}));
      res.L = Z;
    } else if (res.shortCircuit) {
      res.trace.legs.push_back(makeLeg("truncate", true, P, P, identityMap(P), {{"alreadyPerfect", true}}));
      res.L = P;
    } else {
      if (!bFree) {
        if (!bounded) throw std::invalid_argument("perfect: an open complex must have B-free terms");
        auto R = resolveComplex(P, n1 - 2);
        Complex L = R.L.openBelow ? R.L : padBelow(R.L, n1 - 2);
        res.trace.legs.push_back(makeLeg("resolve", false, P, L, R.rho, {{"bottom", n1 - 2}}));
        P = L;
      } else if (bounded) {
        Complex L = padBelow(P, std::min(P.lo, n1 - 2));
        res.trace.legs.push_back(makeLeg("resolve", true, P, L, identityMap(P), {{"bottom", L.lo}}));
        P = L;
      }
      if (P.lo > n1 - 2) throw std::invalid_argument("perfect: input must be known down to n1 - 2");
      if (P.hi() > n2) {
        for (int i = n2 + 1; i <= P.hi(); ++i)
          if (cohomologyAt(P, i).logSize != 0)
            throw std::runtime_error("cohomology in degree " + std::to_string(i) + " lies above n2");
        throw std::invalid_argument("perfect: input has terms above n2");
      }
      for (int i = P.firstReliable(); i < n1; ++i)
        if (cohomologyAt(P, i).logSize != 0)
          throw std::runtime_error("cohomology in degree " + std::to_string(i) + " lies below n1");
      auto tor = checkTorDimension(P, n1);
      if (!tor.ok)
        throw std::runtime_error("tor-dimension check failed in degree " + std::to_string(tor.degree) + " for " +
                                 tor.testModule);
      auto s1 = annihilationPass(P, n1, n2);
      add(s1);
      auto s2 = finitenessPass(s1.out, n1, n2, s1.details);
      add(s2);
      auto s3 = freeTermsPass(s2.out, n1, n2);
      add(s3);
      auto s4 = truncationPass(s3.out, n1);
      add(s4);
      res.L = s4.out;
    }
    bool ok = true;
    for (std::size_t i = 0; i < res.trace.legs.size(); ++i) {
      const auto& l = res.trace.legs[i];
      if (!l.cert.ok) {
        ok = false;
        res.failure = "leg " + std::to_string(i) + " (" + l.stage + "): " + l.cert.reason;
        break;
      }
      if (i > 0 && l.inputHash != res.trace.legs[i - 1].outputHash) {
        ok = false;
        res.failure = "leg " + std::to_string(i) + " does not continue the previous one";
        break;
      }
    }
    res.aFree = true;
    for (int i = n1; i <= n2; ++i) {
      GModule M = res.L.term(i);
      res.aRanks.push_back(M.fiberDim());
      res.aFree = res.aFree && M.isAFree();
    }
    Complex T = res.L.trimmed();
    res.supportOk = !res.L.openBelow && (T.empty() || (T.lo >= n1 && T.hi() <= n2));
    res.ok = ok && res.aFree && res.supportOk;
    if (ok && !res.ok) res.failure = !res.aFree ? "terms are not A-free" : "terms outside [n1, n2]";
  } catch (const std::exception& e) {
    res.ok = false;
    res.failure = e.what();
  }
  res.trace.ok = res.ok;
  return res;
}

nlohmann::json PerfectionSample::toJson() const {
  return {{"model", model.toJson()}, {"ring", A->toJson()}, {"n1", n1}, {"n2", n2}, {"seed", seed}};
}

namespace {

GModule permutationModule(CtxPtr ctx, const std::vector<int>& H) {
  const FiniteGroup& G = *ctx->G;
  const Ring& A = *ctx->A;
  std::vector<int> coset(G.order(), -1), reps;
  for (int g = 0; g < static_cast<int>(G.order()); ++g) {
    if (coset[static_cast<std::size_t>(g)] >= 0) continue;
    const int idx = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int h : H) coset[static_cast<std::size_t>(G.mul(g, h))] = idx;
  }
  const std::size_t rank = reps.size();
  std::vector<std::vector<std::vector<Elem>>> mats;
  for (std::size_t s = 0; s < G.numGens(); ++s) {
    std::vector<std::vector<Elem>> W(rank, std::vector<Elem>(rank, A.zero()));
    for (std::size_t i = 0; i < rank; ++i)
      W[i][static_cast<std::size_t>(coset[static_cast<std::size_t>(G.mul(G.gen(s), reps[i]))])] = A.one();
    mats.push_back(std::move(W));
  }
  return GModule::freeOverA(ctx, rank, mats);
}

std::vector<int> closure(const FiniteGroup& G, const std::vector<int>& gens) {
  std::set<int> S{0};
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    int a = frontier.back();
    frontier.pop_back();
    for (int g : gens) {
      int b = G.mul(a, g);
      if (S.insert(b).second) frontier.push_back(b);
    }
  }
  return {S.begin(), S.end()};
}

struct Summand {
  std::vector<int> H;
  std::vector<int> reps;
};

// Random B-linear map out of a sum of permutation modules into the span `inside` of N.
Mat randomHom(const GModule& V, const std::vector<std::vector<int>>& subgroups, const GModule& N, const Howell& inside,
              std::mt19937_64& rng) {
  const Zq& z = N.zq();
  const FiniteGroup& G = N.group();
  const std::size_t k = N.ring().dim();
  const auto& RB = N.basisActions();
  Mat out(V.n, N.n);
  std::size_t row = 0;
  for (const auto& H : subgroups) {
    // H-fixed vectors of N inside `inside`
    Mat stack(N.n, 0);
    for (int h : H) stack = hstack(stack, z.sub(groupMatrix(N, h), Mat::identity(N.n)));
    Howell fix = z.intersect(z.preimage(stack, blockRelations(z, std::vector<Howell>(H.size(), N.rel))), inside);
    Vec m(N.n, 0);
    std::uniform_int_distribution<u64> coin(0, z.q() - 1);
    for (std::size_t i = 0; i < fix.rows.r; ++i) z.axpy(m, coin(rng), fix.rows.rowVec(i));
    std::vector<int> coset(G.order(), -1), reps;
    for (int g = 0; g < static_cast<int>(G.order()); ++g) {
      if (coset[static_cast<std::size_t>(g)] >= 0) continue;
      const int idx = static_cast<int>(reps.size());
      reps.push_back(g);
      for (int h : H) coset[static_cast<std::size_t>(G.mul(g, h))] = idx;
    }
    for (int g : reps) {
      Vec gm = N.act(g, m);
      for (std::size_t b = 0; b < k; ++b) out.setRow(row++, N.reduce(z.mul(gm, RB[b])));
    }
  }
  return out;
}

}  // namespace

PerfectionSample randomSample(char kase, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + (kase == 'B' ? 17 : 3));
  PerfectionSample s;
  s.seed = seed;
  const std::vector<RingPtr> rings{ringF2(), ringZ4(), ringDual()};
  s.A = rings[seed % rings.size()];
  if (kase == 'A') {
    s.model = GroupModel::named("Z2xZ2", 1);
  } else {
    GroupModel m;
    m.kase = 'B';
    m.p = 2;
    m.ell = 3;
    m.f = 1;
    m.d = 1;
    m.r = 1;
    m.w2Level = 2;
    m.level = 1;
    s.model = m;
  }
  auto ctx = makeContext(s.A, FiniteGroup::realize(s.model));
  const FiniteGroup& G = *ctx->G;
  const int nterms = 2 + static_cast<int>(rng() % 2);
  s.n2 = 0;
  s.n1 = 1 - nterms;
  std::vector<std::vector<std::vector<int>>> subgroups;
  std::vector<GModule> terms;
  for (int t = 0; t < nterms; ++t) {
    const int count = 1 + static_cast<int>(rng() % 2);
    std::vector<std::vector<int>> hs;
    GModule M = GModule::zero(ctx);
    for (int c = 0; c < count; ++c) {
      std::vector<int> gens;
      const int ng = static_cast<int>(rng() % 3);
      for (int i = 0; i < ng; ++i) gens.push_back(static_cast<int>(rng() % G.order()));
      auto H = closure(G, gens);
      if (H.size() == G.order() && rng() % 2) H = {0};
      hs.push_back(H);
      GModule P = permutationModule(ctx, H);
      M = c == 0 ? P : directSum(M, P);
    }
    subgroups.push_back(hs);
    terms.push_back(M);
  }
  std::vector<Mat> d(static_cast<std::size_t>(nterms - 1));
  const Zq& z = ctx->zq();
  for (int t = nterms - 2; t >= 0; --t) {
    const GModule& N = terms[static_cast<std::size_t>(t + 1)];
    Howell inside = (t + 1 == nterms - 1) ? z.howell(Mat::identity(N.n))
                                          : z.preimage(d[static_cast<std::size_t>(t + 1)], terms[static_cast<std::size_t>(t + 2)].rel);
    d[static_cast<std::size_t>(t)] = randomHom(terms[static_cast<std::size_t>(t)], subgroups[static_cast<std::size_t>(t)], N, inside, rng);
  }
  s.V = assemble(ctx, s.n1, terms, d, false);
  s.V.validate();
  return s;
}

Complex sampleInput(const PerfectionSample& s, int level) {
  auto ctx = makeContext(s.A, FiniteGroup::realize(s.model.atLevel(level)));
  Complex V = s.V.inflate(ctx);
  V.validate();
  auto R = resolveComplex(V, s.n1 - 2);
  return R.L.openBelow ? R.L : padBelow(R.L, s.n1 - 2);
}

}  // namespace hd
