#include "hd/deformation.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace hd {

namespace {

bool isPrime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// 2x2 arithmetic over a ring table
struct M2Ops {
  const RingTable& T;
  std::vector<int> invT;
  explicit M2Ops(const RingTable& t) : T(t), invT(t.size(), -1) {
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = 0; b < t.size(); ++b)
        if (t.mul(a, b) == t.one) invT[a] = static_cast<int>(b);
  }
  M2 mul(const M2& x, const M2& y) const {
    auto dot = [&](int a, int b, int c, int d) { return T.add(T.mul(a, b), T.mul(c, d)); };
    return {dot(x[0], y[0], x[1], y[2]), dot(x[0], y[1], x[1], y[3]), dot(x[2], y[0], x[3], y[2]),
            dot(x[2], y[1], x[3], y[3])};
  }
  M2 inv(const M2& x) const {
    int det = T.sub(T.mul(x[0], x[3]), T.mul(x[1], x[2]));
    int di = invT[det];
    if (di < 0) throw std::logic_error("M2: singular matrix");
    return {T.mul(di, x[3]), T.mul(di, T.negT[x[1]]), T.mul(di, T.negT[x[2]]), T.mul(di, x[0])};
  }
  M2 identity() const { return {T.one, T.zero, T.zero, T.one}; }
  M2 scalar(int s) const { return {s, T.zero, T.zero, s}; }
  M2 swap() const { return {T.zero, T.one, T.one, T.zero}; }
  M2 pow(M2 x, long e) const {
    M2 r = identity();
    while (e > 0) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }
  M2 residue(const M2& x) const {
    M2 r;
    for (int i = 0; i < 4; ++i) r[i] = static_cast<int>(T.ring->residue(T.elems[x[i]]));
    return r;
  }
};

std::vector<int> unitsLifting1(const RingTable& T) {
  std::vector<int> out;
  for (std::size_t a = 0; a < T.size(); ++a)
    if (T.ring->residue(T.elems[a]) == 1) out.push_back(static_cast<int>(a));
  return out;
}

// all matrices whose entrywise residues are `r` (entries 0 or 1)
std::vector<M2> matrixLifts(const RingTable& T, const M2& r) {
  std::vector<std::vector<int>> byRes(2);
  for (std::size_t a = 0; a < T.size(); ++a) byRes[T.ring->residue(T.elems[a])].push_back(static_cast<int>(a));
  std::vector<M2> out;
  for (int a : byRes[r[0]])
    for (int b : byRes[r[1]])
      for (int c : byRes[r[2]])
        for (int d : byRes[r[3]]) out.push_back({a, b, c, d});
  return out;
}

// group generator orders of the problem's group, in generator order
std::vector<long> genOrders(const DeformationProblem& P) {
  std::vector<long> o = {1L << P.level, 2};
  for (int q : P.Qprime) o.push_back(q);
  return o;
}

// residues of the V_y matrices in the standard bases {1, g}
LiftData residueShapeRaw(const DeformationProblem& P) {
  auto chi = quadCharacter(P.y);
  M2 I = {1, 0, 0, 1}, S = {0, 1, 1, 0};
  LiftData L;
  L.actM1 = {chi[0] ? S : I, chi[1] ? S : I};
  L.act0 = {I, S};
  for (std::size_t i = 0; i < P.Qprime.size(); ++i) {
    L.actM1.push_back(I);
    L.act0.push_back(I);
  }
  L.d = {1, 1, 1, 1};
  return L;
}

// Strict isomorphisms congruent to the identity that keep P^0 = A<w2> in shape:
// X on P^{-1} arbitrary, Y on P^0 commuting with the swap.
struct IsoGroup {
  std::vector<std::pair<M2, M2>> X, Y;  // (matrix, inverse)
};
IsoGroup isoGroup(const M2Ops& ops) {
  const RingTable& T = ops.T;
  IsoGroup g;
  for (const M2& x : matrixLifts(T, {1, 0, 0, 1})) {
    M2 xi = ops.inv(x);
    g.X.push_back({x, xi});
    if (ops.mul(x, ops.swap()) == ops.mul(ops.swap(), x)) g.Y.push_back({x, xi});
  }
  return g;
}

LiftData transform(const M2Ops& ops, const LiftData& L, const std::pair<M2, M2>& X, const std::pair<M2, M2>& Y) {
  LiftData out;
  for (const M2& w : L.actM1) out.actM1.push_back(ops.mul(ops.mul(X.first, w), X.second));
  for (const M2& w : L.act0) out.act0.push_back(ops.mul(ops.mul(Y.first, w), Y.second));
  out.d = ops.mul(ops.mul(X.first, L.d), Y.second);
  return out;
}

struct KeyHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ull;
    return h;
  }
};

// Assigns orbit indices to `items` (lifts with P^0 in shape) under the strict isomorphism group.
std::vector<int> orbitClasses(const M2Ops& ops, const std::vector<LiftData>& items, std::size_t& nclasses) {
  std::unordered_map<std::vector<int>, std::size_t, KeyHash> index;
  for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i].key(), i);
  IsoGroup G = isoGroup(ops);
  std::vector<int> cls(items.size(), -1);
  nclasses = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (cls[i] >= 0) continue;
    const int c = static_cast<int>(nclasses++);
    cls[i] = c;
    for (const auto& X : G.X)
      for (const auto& Y : G.Y) {
        auto it = index.find(transform(ops, items[i], X, Y).key());
        if (it != index.end() && cls[it->second] < 0) cls[it->second] = c;
      }
  }
  return cls;
}

int canonicalGenerator(const RingTable& T, int x) {
  auto idealOf = [&](int g) {
    std::set<int> s;
    for (std::size_t r = 0; r < T.size(); ++r) s.insert(T.mul(g, static_cast<int>(r)));
    return s;
  };
  auto target = idealOf(x);
  for (std::size_t g = 0; g < T.size(); ++g)
    if (idealOf(static_cast<int>(g)) == target) return static_cast<int>(g);
  return x;
}

long logCount(long n) {
  long l = 0;
  while (n > 1) {
    n /= 2;
    ++l;
  }
  return l;
}

// number of elements of the ideal (x) and of Ann(x)
long idealSize(const RingTable& T, int x) {
  std::set<int> s;
  for (std::size_t r = 0; r < T.size(); ++r) s.insert(T.mul(x, static_cast<int>(r)));
  return static_cast<long>(s.size());
}
long annSize(const RingTable& T, int x) {
  long n = 0;
  for (std::size_t r = 0; r < T.size(); ++r) n += T.mul(x, static_cast<int>(r)) == T.zero;
  return n;
}

QuasiLift makeLift(const DeformationProblem& P, const RingTable& T, const M2Ops& ops,
                   std::vector<std::pair<std::string, int>> params) {
  QuasiLift q;
  q.params = std::move(params);
  auto get = [&](const char* n) { return q.param(n); };
  const int one = T.one, zero = T.zero;
  const int s1 = get("s1"), s2 = get("s2"), ms2 = T.negT[s2];
  LiftData& L = q.data;
  L.act0 = {ops.scalar(s1), ops.swap()};
  if (P.y == QuadUnit::MinusOne) {
    const int r1 = get("r1"), c = get("c");
    const int r2 = T.add(ms2, T.mul(c, T.sub(r1, s1)));
    L.actM1 = {{s1, one, zero, r1}, {ms2, c, zero, r2}};
    L.d = {ms2, one, zero, zero};
    q.lambda = zero;
  } else {
    const int a = get("a");
    const int b = T.mul(s2, T.sub(a, s1));
    L.actM1 = {{a, b, b, a}, ops.swap()};
    L.d = {ms2, one, one, ms2};
    q.lambda = canonicalGenerator(T, T.sub(one, T.mul(s2, s2)));
  }
  for (std::size_t i = 0; i < P.Qprime.size(); ++i) {
    L.actM1.push_back(ops.identity());
    L.act0.push_back(ops.identity());
  }
  q.proflat = q.lambda == zero;
  return q;
}

std::string paramKey(const std::vector<std::pair<std::string, int>>& ps) {
  std::string s;
  for (const auto& [n, v] : ps) s += n + "=" + std::to_string(v) + ";";
  return s;
}

nlohmann::json m2Json(const RingTable& T, const M2& m) {
  const Ring& A = *T.ring;
  return nlohmann::json::array({nlohmann::json::array({A.format(T.elems[m[0]]), A.format(T.elems[m[1]])}),
                                nlohmann::json::array({A.format(T.elems[m[2]]), A.format(T.elems[m[3]])})});
}

Poly polyOf(std::initializer_list<std::pair<Exps, long long>> terms) {
  Poly p;
  for (const auto& [e, c] : terms) p[e] += c;
  return p;
}

}  // namespace

std::vector<int> LiftData::key() const {
  std::vector<int> k;
  for (const M2& m : actM1) k.insert(k.end(), m.begin(), m.end());
  for (const M2& m : act0) k.insert(k.end(), m.begin(), m.end());
  k.insert(k.end(), d.begin(), d.end());
  return k;
}

int QuasiLift::param(const std::string& name) const {
  for (const auto& [n, v] : params)
    if (n == name) return v;
  throw std::out_of_range("QuasiLift: no parameter " + name);
}

GroupModel DeformationProblem::model() const {
  GroupModel m = GroupModel::named("Z2xZ2", level);
  m.Qprime = Qprime;
  return m;
}

CtxPtr DeformationProblem::context(RingPtr A) const { return makeContext(std::move(A), FiniteGroup::realize(model())); }

Complex DeformationProblem::base() const { return complexV(context(ringF2()), y); }

DeformationProblem buildVy(QuadUnit y, int ell, int level) {
  if (!isPrime(ell) || ell % 4 != 3) throw std::invalid_argument("ell must be a prime congruent to 3 mod 4");
  DeformationProblem P;
  P.y = y;
  P.ell = ell;
  P.level = level;
  Complex V = P.base();
  V.validate();
  for (const auto& H : cohomology(V))
    if (H.logSize != 1) throw std::logic_error("V_y: cohomology is not k in degrees -1 and 0");
  if (!isNonSplit(V, level)) throw std::logic_error("V_y: the k-invariant vanishes");
  return P;
}

bool isNonSplit(const Complex& V, int level) {
  auto ctx = makeContext(ringF2(), FiniteGroup::realize(GroupModel::named("Z2xZ2", level)));
  LevelCohomology H(ctx, 2);
  Vec beta = H.kInvariant(V.inflate(ctx));
  return !H.isZero(2, beta);
}

Complex splitAnalogue(CtxPtr ctx) {
  Complex V = complexV(ctx, QuadUnit::Ell);
  const Ring& A = *ctx->A;
  Elem o = A.one(), z = A.zero();
  std::vector<std::vector<std::vector<Elem>>> triv(ctx->G->numGens(), {{o, z}, {z, o}});
  V.terms[0] = GModule::freeOverA(ctx, 2, triv);
  return V;
}

LiftEnumeration enumerateLifts(const DeformationProblem& P, RingPtr A) {
  LiftEnumeration E;
  E.problem = P;
  E.ring = A;
  E.table = RingTable::build(A);
  const RingTable& T = E.table;
  M2Ops ops(T);
  auto u1 = unitsLifting1(T);
  auto mA = T.maximalIdeal();
  auto all = [&] {
    std::vector<int> v(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) v[i] = static_cast<int>(i);
    return v;
  }();
  const int one = T.one;
  for (int s1 : u1)
    for (int s2 : u1) {
      const int defect = T.sub(one, T.mul(s2, s2));  // 1 - s2^2
      if (P.y == QuadUnit::MinusOne) {
        if (defect != T.zero) continue;
        for (int r1 : u1)
          for (int c : mA) {
            // c (2 s2 - (r1 - s1) c) = 0
            int two_s2 = T.add(s2, s2);
            if (T.mul(c, T.sub(two_s2, T.mul(T.sub(r1, s1), c))) != T.zero) continue;
            E.lifts.push_back(makeLift(P, T, ops, {{"s1", s1}, {"s2", s2}, {"r1", r1}, {"c", c}}));
          }
      } else {
        const auto& aRange = P.y == QuadUnit::Ell ? u1 : mA;
        for (int a : aRange) {
          if (T.mul(T.sub(a, s1), defect) != T.zero) continue;
          E.lifts.push_back(makeLift(P, T, ops, {{"s1", s1}, {"s2", s2}, {"a", a}}));
        }
      }
    }
  (void)all;
  std::vector<LiftData> items;
  for (const auto& q : E.lifts) items.push_back(q.data);
  std::size_t nc = 0;
  E.classOf = orbitClasses(ops, items, nc);
  E.reps.assign(nc, 0);
  for (std::size_t i = E.lifts.size(); i-- > 0;) E.reps[E.classOf[i]] = i;
  return E;
}

Complex liftComplex(const DeformationProblem& P, RingPtr A, const RingTable& T, const LiftData& L) {
  auto ctx = P.context(A);
  auto toElems = [&](const M2& m) {
    return std::vector<std::vector<Elem>>{{T.elems[m[0]], T.elems[m[1]]}, {T.elems[m[2]], T.elems[m[3]]}};
  };
  std::vector<std::vector<std::vector<Elem>>> am, a0;
  for (const M2& m : L.actM1) am.push_back(toElems(m));
  for (const M2& m : L.act0) a0.push_back(toElems(m));
  GModule Pm = GModule::freeOverA(ctx, 2, am), P0 = GModule::freeOverA(ctx, 2, a0);
  const std::size_t k = A->dim();
  Mat d(Pm.n, P0.n);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Mat blk = A->mulMatrix(T.elems[L.d[i * 2 + j]]);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) d(i * k + a, j * k + b) = blk(a, b);
    }
  Complex C;
  C.ctx = ctx;
  C.lo = -1;
  C.terms = {Pm, P0};
  C.d = {d};
  return C;
}

LiftCheck checkLift(const LiftEnumeration& E, std::size_t i) {
  LiftCheck r;
  auto fail = [&](std::string why) {
    r.ok = false;
    r.failure = std::move(why);
    return r;
  };
  const RingTable& T = E.table;
  const QuasiLift& q = E.lifts.at(i);
  Complex C = liftComplex(E.problem, E.ring, T, q.data);
  try {
    C.validate();
  } catch (const std::exception& e) {
    return fail(std::string("invalid complex: ") + e.what());
  }
  // reduction: the fixed normal-form reduction of V_y
  M2Ops ops(T);
  DeformationProblem P = E.problem;
  RingTable F = RingTable::build(ringF2());
  M2Ops fops(F);
  std::vector<std::pair<std::string, int>> unitParams;
  for (const auto& [n, v] : q.params) unitParams.push_back({n, (n == "c" || (n == "a" && P.y == QuadUnit::MinusEll)) ? F.zero : F.one});
  LiftData red = makeLift(P, F, fops, unitParams).data;
  LiftData mine;
  for (const M2& m : q.data.actM1) mine.actM1.push_back(ops.residue(m));
  for (const M2& m : q.data.act0) mine.act0.push_back(ops.residue(m));
  mine.d = ops.residue(q.data.d);
  auto asBits = [&](const LiftData& L, const RingTable& RT) {
    std::vector<int> k;
    for (int x : L.key()) k.push_back(static_cast<int>(RT.ring->residue(RT.elems[x])));
    return k;
  };
  if (mine.key() != asBits(red, F)) return fail("reduction differs from V_y");
  // the reduction is quasi-isomorphic to V_y: same k-invariant class is checked via non-splitness
  auto H0 = cohomologyAt(C, 0), Hm1 = cohomologyAt(C, -1);
  const long len = E.ring->length();
  if (H0.logSize != len - logCount(idealSize(T, q.lambda))) return fail("H^0 is not A/(lambda)");
  if (H0.H.mod.fiberDim() > 1) return fail("H^0 is not cyclic");
  if (Hm1.logSize != logCount(annSize(T, q.lambda))) return fail("H^-1 is not Ann(lambda)");
  bool free0 = H0.H.mod.isAFree() && Hm1.H.mod.isAFree();
  if (free0 != q.proflat) return fail("proflat flag disagrees with the cohomology");
  return r;
}

RawCount rawLiftClasses(const DeformationProblem& P, RingPtr A) {
  RingTable T = RingTable::build(A);
  M2Ops ops(T);
  LiftData shape = residueShapeRaw(P);
  auto orders = genOrders(P);
  const std::size_t ng = orders.size();

  auto ordered = [&](const std::vector<M2>& ms) {
    for (std::size_t g = 0; g < ng; ++g)
      if (ops.pow(ms[g], orders[g]) != ops.identity()) return false;
    for (std::size_t g = 0; g < ng; ++g)
      for (std::size_t h = g + 1; h < ng; ++h)
        if (ops.mul(ms[g], ms[h]) != ops.mul(ms[h], ms[g])) return false;
    return true;
  };
  // candidate action tuples on a term, generator by generator
  auto tuples = [&](const std::vector<std::vector<M2>>& perGen) {
    std::vector<std::vector<M2>> out = {{}};
    for (std::size_t g = 0; g < ng; ++g) {
      std::vector<std::vector<M2>> next;
      for (const auto& t : out)
        for (const M2& m : perGen[g]) {
          if (ops.pow(m, orders[g]) != ops.identity()) continue;
          bool ok = true;
          for (const M2& prev : t)
            if (ops.mul(prev, m) != ops.mul(m, prev)) {
              ok = false;
              break;
            }
          if (!ok) continue;
          auto u = t;
          u.push_back(m);
          next.push_back(std::move(u));
        }
      out = std::move(next);
    }
    return out;
  };
  std::vector<std::vector<M2>> genM1, gen0;
  for (std::size_t g = 0; g < ng; ++g) genM1.push_back(matrixLifts(T, shape.actM1[g]));
  std::vector<M2> scalars;
  for (int s : unitsLifting1(T)) scalars.push_back(ops.scalar(s));
  gen0.push_back(scalars);
  gen0.push_back({ops.swap()});
  for (std::size_t g = 2; g < ng; ++g) gen0.push_back(matrixLifts(T, shape.act0[g]));
  auto cM1 = tuples(genM1), c0 = tuples(gen0);
  auto dLifts = matrixLifts(T, shape.d);

  std::vector<LiftData> valid;
  for (const auto& am : cM1)
    for (const auto& a0 : c0) {
      if (!ordered(am) || !ordered(a0)) continue;
      for (const M2& d : dLifts) {
        bool eq = true;
        for (std::size_t g = 0; g < ng && eq; ++g) eq = ops.mul(am[g], d) == ops.mul(d, a0[g]);
        if (!eq) continue;
        LiftData L;
        L.actM1 = am;
        L.act0 = a0;
        L.d = d;
        valid.push_back(std::move(L));
      }
    }
  RawCount rc;
  rc.lifts = static_cast<long>(valid.size());
  std::size_t nc = 0;
  orbitClasses(ops, valid, nc);
  rc.classes = static_cast<long>(nc);
  return rc;
}

nlohmann::json LiftEnumeration::toJson() const {
  nlohmann::json classes = nlohmann::json::array();
  const Ring& A = *ring;
  for (std::size_t c = 0; c < reps.size(); ++c) {
    const QuasiLift& q = lifts[reps[c]];
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [n, v] : q.params) params[n] = A.format(table.elems[v]);
    nlohmann::json mats = {{"P-1", nlohmann::json::array()}, {"P0", nlohmann::json::array()},
                           {"d", m2Json(table, q.data.d)}};
    for (const M2& m : q.data.actM1) mats["P-1"].push_back(m2Json(table, m));
    for (const M2& m : q.data.act0) mats["P0"].push_back(m2Json(table, m));
    long members = std::count(classOf.begin(), classOf.end(), static_cast<int>(c));
    classes.push_back({{"parameters", params},
                       {"lambda", A.format(table.elems[q.lambda])},
                       {"proflat", q.proflat},
                       {"members", members},
                       {"matrices", mats}});
  }
  return {{"y", quadUnitName(problem.y)}, {"ring", A.name()}, {"liftCount", lifts.size()},
          {"classCount", reps.size()}, {"classes", classes}};
}

TangentReport tangentSpace(const DeformationProblem& P) {
  TangentReport r;
  r.y = P.y;
  r.count = static_cast<long>(enumerateLifts(P, ringDual()).classCount());
  r.powerOfTwo = r.count > 0 && (r.count & (r.count - 1)) == 0;
  r.dim = r.powerOfTwo ? static_cast<int>(logCount(r.count)) : -1;
  return r;
}

nlohmann::json TangentReport::toJson() const {
  return {{"y", quadUnitName(y)}, {"ring", "F2[e]/(e^2)"}, {"count", count}, {"dim", dim}, {"powerOfTwo", powerOfTwo}};
}

VersalRingSpec versalSpec(QuadUnit y, bool proflat) {
  VersalRingSpec s;
  s.y = y;
  s.proflat = proflat;
  // t3 (2 + t3) and t2 t3 (2 + t3) in the variables t1, t2, t3
  Poly t3_2_t3 = polyOf({{{0, 0, 1}, 2}, {{0, 0, 2}, 1}});
  Poly t2t3_2_t3 = polyOf({{{0, 1, 1}, 2}, {{0, 1, 2}, 1}});
  if (y == QuadUnit::MinusOne) {
    s.vars = {"t1", "t2", "t3", "t4"};
    // t2 (2 + t2), t4 (2 + 2 t2 - t3 t4)
    s.relations = {polyOf({{{0, 1, 0, 0}, 2}, {{0, 2, 0, 0}, 1}}),
                   polyOf({{{0, 0, 0, 1}, 2}, {{0, 1, 0, 1}, 2}, {{0, 0, 1, 2}, -1}})};
    s.presentation = "W[[t1,t2,t3,t4]]/(t2(2+t2), t4(2+2t2-t3t4))";
  } else {
    s.vars = {"t1", "t2", "t3"};
    if (y == QuadUnit::Ell && !proflat) {
      s.relations = {t2t3_2_t3};
      s.presentation = "W[[t1,t2,t3]]/(t2t3(2+t3))";
    } else {
      s.relations = {t3_2_t3};
      s.presentation = "W[[t1,t2,t3]]/(t3(2+t3))";
    }
  }
  return s;
}

RingPtr VersalRingSpec::truncated(int m, int T) const {
  auto R = Ring::quotient(Modulus::make(2, m), vars, T, relations);
  std::const_pointer_cast<Ring>(R)->setName(presentation + " mod (2^" + std::to_string(m) + ", deg " +
                                            std::to_string(T) + ")");
  return R;
}

nlohmann::json VersalRingSpec::toJson() const {
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& p : relations) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [e, c] : p) {
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) mono += vars[i] + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
      r[mono.empty() ? "1" : mono] = c;
    }
    rels.push_back(r);
  }
  return {{"y", quadUnitName(y)}, {"proflat", proflat}, {"presentation", presentation}, {"variables", vars},
          {"relations", rels}};
}

namespace {

// normal-form parameters of the specialization t -> values
std::vector<std::pair<std::string, int>> dictionary(QuadUnit y, const RingTable& T, const std::vector<int>& t) {
  const int one = T.one;
  const int s1 = T.add(one, t[0]);
  if (y == QuadUnit::MinusOne) return {{"s1", s1}, {"s2", T.add(one, t[1])}, {"r1", T.add(s1, t[2])}, {"c", t[3]}};
  const int s2 = T.add(one, t[2]);
  const int a = y == QuadUnit::Ell ? T.add(s1, t[1]) : T.add(T.add(s1, one), t[1]);
  return {{"s1", s1}, {"s2", s2}, {"a", a}};
}

// all assignments of the variables to m_A killing the relations
std::vector<std::vector<int>> morphisms(const VersalRingSpec& s, const RingTable& T) {
  auto mA = T.maximalIdeal();
  std::vector<std::vector<int>> out, cur = {{}};
  for (std::size_t v = 0; v < s.vars.size(); ++v) {
    std::vector<std::vector<int>> next;
    for (const auto& c : cur)
      for (int x : mA) {
        auto u = c;
        u.push_back(x);
        next.push_back(std::move(u));
      }
    cur = std::move(next);
  }
  for (const auto& t : cur) {
    std::vector<Elem> vals;
    for (int x : t) vals.push_back(T.elems[x]);
    bool ok = true;
    for (const auto& r : s.relations)
      if (!T.ring->isZero(evalPoly(*T.ring, r, vals))) {
        ok = false;
        break;
      }
    if (ok) out.push_back(t);
  }
  return out;
}

}  // namespace

VersalityReport verifyVersality(const DeformationProblem& P, const std::vector<RingPtr>& rings) {
  VersalityReport rep;
  rep.y = P.y;
  rep.ok = true;
  VersalRingSpec R = versalSpec(P.y, false), Rfl = versalSpec(P.y, true);
  for (const auto& A : rings) {
    LiftEnumeration E = enumerateLifts(P, A);
    const RingTable& T = E.table;
    std::map<std::string, std::size_t> byParams;
    for (std::size_t i = 0; i < E.lifts.size(); ++i) byParams[paramKey(E.lifts[i].params)] = i;
    VersalityRow row;
    row.ring = A->name();
    row.classes = static_cast<long>(E.classCount());
    auto hits = [&](const VersalRingSpec& s, long& count) {
      std::vector<long> h(E.classCount(), 0);
      for (const auto& t : morphisms(s, T)) {
        ++count;
        auto it = byParams.find(paramKey(dictionary(P.y, T, t)));
        if (it == byParams.end()) throw std::logic_error("versality: specialization outside the normal form");
        ++h[E.classOf[it->second]];
      }
      return h;
    };
    auto hR = hits(R, row.morphisms);
    auto hF = hits(Rfl, row.proflatMorphisms);
    row.bijective = row.morphisms == row.classes;
    for (std::size_t c = 0; c < E.classCount(); ++c) {
      const bool pf = E.lifts[E.reps[c]].proflat;
      row.proflatClasses += pf;
      row.hit += hR[c] > 0;
      row.hitByProflat += hF[c] > 0;
      if (hR[c] == 0) row.misses.push_back("class " + std::to_string(c));
      if (hR[c] != 1) row.bijective = false;
      if (!pf && hR[c] > 0 && hF[c] == 0) ++row.nonProflatMissedByFl;
    }
    row.surjective = row.hit == row.classes;
    row.proflatExact = true;
    for (std::size_t c = 0; c < E.classCount(); ++c)
      if ((hF[c] > 0) != E.lifts[E.reps[c]].proflat) row.proflatExact = false;
    bool dual = A->dim() == 2 && A->zq().q() == 2;
    rep.ok = rep.ok && row.surjective && row.proflatExact && (!dual || row.bijective);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

nlohmann::json VersalityRow::toJson() const {
  return {{"ring", ring},
          {"classes", classes},
          {"morphisms", morphisms},
          {"proflatMorphisms", proflatMorphisms},
          {"hit", hit},
          {"proflatClasses", proflatClasses},
          {"hitByProflat", hitByProflat},
          {"surjective", surjective},
          {"bijective", bijective},
          {"proflatExact", proflatExact},
          {"nonProflatMissedByFl", nonProflatMissedByFl},
          {"misses", misses}};
}

nlohmann::json VersalityReport::toJson() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) rs.push_back(r.toJson());
  return {{"y", quadUnitName(y)},
          {"R", versalSpec(y, false).presentation},
          {"Rfl", versalSpec(y, true).presentation},
          {"rings", rs},
          {"ok", ok}};
}

InflationReport inflationCheck(const DeformationProblem& P, const std::vector<int>& extra,
                               const std::vector<RingPtr>& rings) {
  InflationReport rep;
  rep.y = P.y;
  rep.extra = extra;
  rep.ok = true;
  DeformationProblem Q = P;
  Q.Qprime.insert(Q.Qprime.end(), extra.begin(), extra.end());
  for (int e : extra)
    if (e % 2 == 0) throw std::invalid_argument("inflationCheck: the extra factor must have odd order");
  for (const auto& A : rings) {
    InflationRow row;
    row.ring = A->name();
    row.base = rawLiftClasses(P, A).classes;
    row.inflated = rawLiftClasses(Q, A).classes;
    rep.ok = rep.ok && row.base == row.inflated;
    rep.rows.push_back(row);
  }
  return rep;
}

nlohmann::json InflationReport::toJson() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) rs.push_back({{"ring", r.ring}, {"base", r.base}, {"inflated", r.inflated}});
  return {{"y", quadUnitName(y)}, {"extra", extra}, {"rings", rs}, {"ok", ok}};
}

std::vector<RingPtr> defaultTestRings() { return {ringF2(), ringDual(), ringZ4(), ringF2u3(), ringZ4u()}; }

}  // namespace hd
