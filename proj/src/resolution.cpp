#include "hd/resolution.hpp"

#include <algorithm>
#include <stdexcept>

namespace hd {

namespace {

using ActionTable = std::vector<std::vector<Vec>>;  // [coordinate][g*k+b] -> unit_c * R_g * X_b

ActionTable buildTable(const GModule& D) {
  const std::size_t N = D.group().order(), k = D.ring().dim();
  const auto& B = D.basisActions();
  ActionTable t(D.n);
  for (std::size_t c = 0; c < D.n; ++c) {
    auto orb = D.orbit(D.unit(c));
    t[c].reserve(N * k);
    for (std::size_t g = 0; g < N; ++g)
      for (std::size_t b = 0; b < k; ++b) t[c].push_back(D.reduce(D.zq().mul(orb[g], B[b])));
  }
  return t;
}

// sum over (g,b) of y[off + g*k + b] * (v * R_g * X_b)
Vec applyBlock(const Zq& z, const ActionTable& t, std::size_t dn, const Vec& y, std::size_t off, std::size_t Nk,
               const Vec& v) {
  Vec out(dn, 0);
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c] == 0) continue;
    for (std::size_t s = 0; s < Nk; ++s) {
      u64 a = y[off + s];
      if (a) z.axpy(out, z.mul(a, v[c]), t[c][s]);
    }
  }
  return out;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec v(a);
  v.insert(v.end(), b.begin(), b.end());
  return v;
}

std::size_t rankOf(const GModule& M) {
  if (M.n == 0) return 0;
  if (M.freeB < 0) throw std::invalid_argument("expected a B-free module");
  return static_cast<std::size_t>(M.freeB);
}

}  // namespace

std::vector<std::size_t> FreeResolution::ranks() const {
  std::vector<std::size_t> r;
  for (int i = L.lo; i <= L.hi(); ++i) r.push_back(rank(i));
  return r;
}

std::size_t FreeResolution::rank(int deg) const { return rankOf(L.term(deg)); }

FreeResolution resolveComplex(const Complex& Cin, int bottom) {
  Complex C = Cin.trimmed();
  FreeResolution R;
  R.target = C;
  R.bottom = bottom;
  const auto ctx = C.ctx;
  if (C.empty()) {
    R.L = Complex::zero(ctx, 0);
    return R;
  }
  bool allFree = !C.openBelow;
  for (const auto& M : C.terms) allFree = allFree && M.freeB >= 0;
  if (allFree) {
    R.L = C;
    R.rho = identityMap(C);
    return R;
  }
  if (C.openBelow) throw std::invalid_argument("resolveComplex: target must be bounded");
  const Zq& z = ctx->zq();
  const int top = C.hi();
  bottom = std::min(bottom, top);
  std::map<int, GModule> Lt;
  std::map<int, Mat> dL;
  auto Lterm = [&](int i) { return (i <= top && Lt.count(i)) ? Lt.at(i) : GModule::freeOverB(ctx, 0); };
  for (int i = top; i >= bottom; --i) {
    GModule Ci = C.term(i), C1 = C.term(i + 1);
    GModule L1 = Lterm(i + 1), L2 = Lterm(i + 2);
    Mat dC = C.diff(i);
    Mat r1 = R.rho.at(Complex::zero(ctx), C, i + 1);
    if (r1.r != L1.n) r1 = Mat(L1.n, C1.n);
    Mat dL1 = dL.count(i + 1) ? dL.at(i + 1) : Mat(L1.n, L2.n);
    GModule X = directSum(Ci, L1);
    Mat Phi(X.n, C1.n + L2.n);
    for (std::size_t r = 0; r < Ci.n; ++r)
      for (std::size_t c = 0; c < C1.n; ++c) Phi(r, c) = dC(r, c);
    for (std::size_t r = 0; r < L1.n; ++r) {
      for (std::size_t c = 0; c < C1.n; ++c) Phi(Ci.n + r, c) = z.neg(r1(r, c));
      for (std::size_t c = 0; c < L2.n; ++c) Phi(Ci.n + r, C1.n + c) = dL1(r, c);
    }
    Howell span = z.preimage(Phi, directSum(C1, L2).rel);
    auto gens = X.generators(span);
    GModule Li = GModule::freeOverB(ctx, gens.size());
    std::vector<Vec> cparts, fparts;
    for (const auto& g : gens) {
      cparts.emplace_back(g.begin(), g.begin() + static_cast<long>(Ci.n));
      fparts.emplace_back(g.begin() + static_cast<long>(Ci.n), g.end());
    }
    R.rho.f[i] = freeMap(Li, Ci, cparts);
    dL[i] = freeMap(Li, L1, fparts);
    Lt[i] = Li;
  }
  // exact below the bottom when nothing is left to cover
  bool closed = bottom <= C.lo;
  if (closed) {
    GModule Lb = Lt.at(bottom);
    Mat both = hstack(R.rho.f.at(bottom), dL.at(bottom));
    Howell k = z.preimage(both, directSum(C.term(bottom), Lterm(bottom + 1)).rel);
    closed = z.logSize(k) == z.logSize(Lb.rel);
  }
  int lo = bottom;
  if (closed)
    while (lo < top && Lt.at(lo).n == 0) ++lo;
  R.L.ctx = ctx;
  R.L.lo = lo;
  R.L.openBelow = !closed;
  for (int i = lo; i <= top; ++i) R.L.terms.push_back(Lt.at(i));
  for (int i = lo; i < top; ++i) R.L.d.push_back(dL.at(i));
  for (auto it = R.rho.f.begin(); it != R.rho.f.end();) it = it->first < lo ? R.rho.f.erase(it) : std::next(it);
  return R;
}

FreeResolution resolveModule(const GModule& M, int depth) { return resolveComplex(Complex::single(M, 0), -depth); }

std::optional<ChainMap> liftChainMap(const LiftRequest& req) {
  const Complex& F = *req.F;
  const Complex& E = *req.E;
  const Zq& z = F.ctx->zq();
  const bool useRho = req.D && req.rho && req.f;
  ChainMap g;
  if (F.empty()) return g;
  for (int i = F.hi(); i >= std::max(req.stopDeg, F.lo); --i) {
    auto sd = req.seed.f.find(i);
    if (sd != req.seed.f.end()) {
      g.f[i] = sd->second;
      continue;
    }
    GModule Fi = F.term(i), Ei = E.term(i), E1 = E.term(i + 1);
    const std::size_t r = rankOf(Fi);
    GModule Di = useRho ? req.D->term(i) : GModule::zero(F.ctx);
    Mat rhoi = useRho ? req.rho->at(E, *req.D, i) : Mat(Ei.n, 0);
    Mat A = hstack(rhoi, E.diff(i));
    Howell rel = directSum(Di, E1).rel;
    Solver sol(z, vstack(A, rel.rows));
    Mat gnext = g.at(F, E, i + 1);
    Mat dF = F.diff(i);
    Mat fi = useRho ? req.f->at(F, *req.D, i) : Mat(Fi.n, 0);
    std::vector<Vec> images;
    for (std::size_t j = 0; j < r; ++j) {
      Vec e = Fi.freeGenerator(j);
      Vec rhs = concat(z.mul(e, fi), z.mul(z.mul(e, dF), gnext));
      auto x = sol.solve(rhs);
      if (!x) return std::nullopt;
      images.push_back(Ei.reduce(Vec(x->begin(), x->begin() + static_cast<long>(Ei.n))));
    }
    g.f[i] = r ? freeMap(Fi, Ei, images) : Mat(0, Ei.n);
  }
  return g;
}

std::optional<ChainMap> liftAlong(const Complex& F, const FreeResolution& R, const ChainMap& f, int stopDeg) {
  LiftRequest q;
  q.F = &F;
  q.E = &R.L;
  q.D = &R.target;
  q.rho = &R.rho;
  q.f = &f;
  q.stopDeg = stopDeg;
  return liftChainMap(q);
}

std::optional<std::map<int, Mat>> findHomotopy(const Complex& F, const Complex& E, const ChainMap& g1,
                                               const ChainMap& g2, int stopDeg, const Complex* D,
                                               const ChainMap* rho) {
  const Zq& z = F.ctx->zq();
  std::map<int, Mat> h;
  auto hAt = [&](int i) {
    auto it = h.find(i);
    return it != h.end() ? it->second : Mat(F.term(i).n, E.term(i - 1).n);
  };
  for (int i = F.hi(); i >= std::max(stopDeg, F.lo); --i) {
    GModule Fi = F.term(i), Em = E.term(i - 1), Ei = E.term(i);
    const std::size_t r = rankOf(Fi);
    const bool useRho = D && rho;
    GModule Dm = useRho ? D->term(i - 1) : GModule::zero(F.ctx);
    Mat rhom = useRho ? rho->at(E, *D, i - 1) : Mat(Em.n, 0);
    Solver sol(z, vstack(hstack(E.diff(i - 1), rhom), directSum(Ei, Dm).rel.rows));
    Mat diff = z.sub(g1.at(F, E, i), g2.at(F, E, i));
    Mat dh = z.mul(F.diff(i), hAt(i + 1));
    std::vector<Vec> images;
    for (std::size_t j = 0; j < r; ++j) {
      Vec e = Fi.freeGenerator(j);
      Vec rhs = z.sub(z.mul(e, diff), z.mul(e, dh));
      rhs.resize(rhs.size() + Dm.n, 0);
      auto x = sol.solve(rhs);
      if (!x) return std::nullopt;
      images.push_back(Em.reduce(Vec(x->begin(), x->begin() + static_cast<long>(Em.n))));
    }
    h[i] = r ? freeMap(Fi, Em, images) : Mat(0, Em.n);
  }
  return h;
}

std::vector<ChainMap> chainMapSpace(const Complex& F, const Complex& E, int lo, int hi) {
  const Zq& z = F.ctx->zq();
  const std::size_t Nk = F.ctx->G->order() * F.ctx->A->dim();
  // unknowns: images of generators of F^i in E^i for i in [lo, hi]
  std::map<int, std::size_t> uoff;
  std::size_t U = 0;
  for (int i = lo; i <= hi; ++i) {
    uoff[i] = U;
    U += rankOf(F.term(i)) * E.term(i).n;
  }
  // constraints: squares between i and i+1 for i in [lo-1, hi], on generators of F^i
  std::map<int, std::size_t> coff;
  std::size_t K = 0;
  std::vector<Vec> relRows;
  for (int i = lo - 1; i <= hi; ++i) {
    coff[i] = K;
    const GModule E1 = E.term(i + 1);
    const std::size_t r = rankOf(F.term(i));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t t = 0; t < E1.rel.rows.r; ++t) {
        relRows.push_back(E1.rel.rows.rowVec(t));
        relRows.back().insert(relRows.back().begin(), K + j * E1.n, 0);
      }
    K += r * E1.n;
  }
  for (auto& v : relRows) v.resize(K, 0);
  Mat Phi(U, K);
  for (int i = lo; i <= hi; ++i) {
    const GModule Fi = F.term(i), Ei = E.term(i), E1 = E.term(i + 1), Fm = F.term(i - 1);
    const std::size_t r = rankOf(Fi), rm = rankOf(Fm);
    if (Ei.n == 0) continue;
    ActionTable t = buildTable(Ei);
    Mat dE = E.diff(i), dFm = F.diff(i - 1);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t c = 0; c < Ei.n; ++c) {
        std::size_t row = uoff[i] + j * Ei.n + c;
        // square at i: -g^i(e_j) d_E
        for (std::size_t s = 0; s < E1.n; ++s) Phi(row, coff[i] + j * E1.n + s) = z.neg(dE(c, s));
        // square at i-1: (e_j' d_F) g^i
        Vec uc = Ei.unit(c);
        for (std::size_t jp = 0; jp < rm; ++jp) {
          Vec y = z.mul(Fm.freeGenerator(jp), dFm);
          Vec v = applyBlock(z, t, Ei.n, y, j * Nk, Nk, uc);
          for (std::size_t s = 0; s < Ei.n; ++s) Phi(row, coff[i - 1] + jp * Ei.n + s) = z.add(Phi(row, coff[i - 1] + jp * Ei.n + s), v[s]);
        }
      }
  }
  Howell sol = z.preimage(Phi, z.howell(relRows, K));
  // trivial part: images lying in the relations
  std::vector<Vec> triv;
  for (int i = lo; i <= hi; ++i) {
    const GModule Ei = E.term(i);
    const std::size_t r = rankOf(F.term(i));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t t = 0; t < Ei.rel.rows.r; ++t) {
        Vec v(U, 0);
        for (std::size_t s = 0; s < Ei.n; ++s) v[uoff[i] + j * Ei.n + s] = Ei.rel.rows(t, s);
        triv.push_back(std::move(v));
      }
  }
  Howell T = z.howell(triv, U);
  std::vector<ChainMap> out;
  for (std::size_t row = 0; row < sol.rows.r; ++row) {
    Vec v = sol.rows.rowVec(row);
    if (z.contains(T, v)) continue;
    T = z.sum(T, Mat::fromRows({v}, U));
    ChainMap g;
    for (int i = lo; i <= hi; ++i) {
      const GModule Fi = F.term(i), Ei = E.term(i);
      const std::size_t r = rankOf(Fi);
      std::vector<Vec> images;
      for (std::size_t j = 0; j < r; ++j)
        images.emplace_back(v.begin() + static_cast<long>(uoff[i] + j * Ei.n),
                            v.begin() + static_cast<long>(uoff[i] + (j + 1) * Ei.n));
      g.f[i] = r ? freeMap(Fi, Ei, images) : Mat(0, Ei.n);
    }
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------- Hom complex

HomComplex::HomComplex(const Complex& F, const Complex& D) : F_(F), D_(D) {
  const RingPtr A = F.ctx->A;
  const Zq& z = A->zq();
  auto ctxA = makeContext(A, FiniteGroup::trivial());
  H_ = Complex::zero(ctxA, 0);
  if (F.empty() || D.empty()) {
    reliable_ = 0;
    return;
  }
  const std::size_t Nk = F.ctx->G->order() * A->dim();
  const int nlo = D.lo - F.hi(), nhi = D.hi() - F.lo;
  reliable_ = F.openBelow ? D.lo - F.lo - 1 : nhi;
  for (int deg = D.lo; deg <= D.hi(); ++deg) dAct_[deg] = buildTable(D.term(deg));
  H_.lo = nlo;
  for (int n = nlo; n <= nhi; ++n) {
    std::size_t off = 0;
    auto& bl = blocks_[n];
    std::vector<Vec> rel;
    std::vector<std::pair<std::size_t, const GModule*>> pieces;
    std::vector<GModule> keep;
    for (int i = F.lo; i <= F.hi(); ++i) {
      int deg = i + n;
      if (deg < D.lo || deg > D.hi()) continue;
      std::size_t r = rankOf(F.term(i));
      const GModule& Dm = D.terms[static_cast<std::size_t>(deg - D.lo)];
      if (r == 0 || Dm.n == 0) continue;
      bl.emplace_back(i, off);
      for (std::size_t j = 0; j < r; ++j) pieces.emplace_back(off + j * Dm.n, &Dm);
      off += r * Dm.n;
    }
    GModule M;
    M.ctx = ctxA;
    M.n = off;
    for (const auto& [o, Dm] : pieces)
      for (std::size_t t = 0; t < Dm->rel.rows.r; ++t) {
        Vec v(off, 0);
        for (std::size_t s = 0; s < Dm->n; ++s) v[o + s] = Dm->rel.rows(t, s);
        rel.push_back(std::move(v));
      }
    M.rel = z.howell(rel, off);
    for (std::size_t v = 0; v < A->vars().size(); ++v) {
      Mat X(off, off);
      for (const auto& [o, Dm] : pieces)
        for (std::size_t a = 0; a < Dm->n; ++a)
          for (std::size_t b = 0; b < Dm->n; ++b) X(o + a, o + b) = Dm->vars[v](a, b);
      M.vars.push_back(std::move(X));
    }
    H_.terms.push_back(std::move(M));
  }
  for (int n = nlo; n < nhi; ++n) {
    const GModule& Hn = H_.terms[static_cast<std::size_t>(n - nlo)];
    const GModule& Hn1 = H_.terms[static_cast<std::size_t>(n + 1 - nlo)];
    Mat Dm(Hn.n, Hn1.n);
    const u64 sgn = (n % 2 == 0) ? z.q() - 1 : 1;  // -(-1)^n
    for (const auto& [i, off] : blocks_[n]) {
      const int deg = i + n;
      const GModule& Dd = D.terms[static_cast<std::size_t>(deg - D.lo)];
      const std::size_t r = rankOf(F.term(i));
      // d_D phi(e): block i in degree n+1
      if (deg + 1 <= D.hi()) {
        const std::size_t d1n = D.term(deg + 1).n;
        if (d1n > 0) {
          std::size_t off2 = offset(n + 1, i);
          Mat dD = D.diff(deg);
          for (std::size_t j = 0; j < r; ++j)
            for (std::size_t c = 0; c < Dd.n; ++c)
              for (std::size_t s = 0; s < d1n; ++s) Dm(off + j * Dd.n + c, off2 + j * d1n + s) = dD(c, s);
        }
      }
      // phi(d_F e) for e in F^{i-1}: block i-1 in degree n+1
      if (i - 1 >= F.lo) {
        const GModule Fm = F.term(i - 1);
        const std::size_t rm = rankOf(Fm);
        if (rm == 0) continue;
        std::size_t off3 = offset(n + 1, i - 1);
        const Mat dF = F.diff(i - 1);
        const auto& tab = dAct_.at(deg);
        for (std::size_t jp = 0; jp < rm; ++jp) {
          Vec y = z.mul(Fm.freeGenerator(jp), dF);
          for (std::size_t j = 0; j < r; ++j)
            for (std::size_t c = 0; c < Dd.n; ++c) {
              Vec v = applyBlock(z, tab, Dd.n, y, j * Nk, Nk, Dd.unit(c));
              for (std::size_t s = 0; s < Dd.n; ++s)
                if (v[s]) Dm(off + j * Dd.n + c, off3 + jp * Dd.n + s) = z.mul(sgn, v[s]);
            }
        }
      }
    }
    H_.d.push_back(std::move(Dm));
  }
}

std::size_t HomComplex::offset(int n, int i) const {
  auto it = blocks_.find(n);
  if (it != blocks_.end())
    for (const auto& [bi, off] : it->second)
      if (bi == i) return off;
  throw std::logic_error("HomComplex: missing block");
}

std::vector<Vec> HomComplex::component(int n, const Vec& phi, int i) const {
  std::vector<Vec> out;
  const std::size_t r = rankOf(F_.term(i));
  const GModule Dm = D_.term(i + n);
  auto it = blocks_.find(n);
  bool present = false;
  std::size_t off = 0;
  if (it != blocks_.end())
    for (const auto& [bi, o] : it->second)
      if (bi == i) present = true, off = o;
  for (std::size_t j = 0; j < r; ++j) {
    if (!present)
      out.emplace_back(Dm.n, 0);
    else
      out.emplace_back(phi.begin() + static_cast<long>(off + j * Dm.n), phi.begin() + static_cast<long>(off + (j + 1) * Dm.n));
  }
  return out;
}

Vec HomComplex::fromComponents(int n, const std::map<int, std::vector<Vec>>& images) const {
  Vec v(H_.term(n).n, 0);
  for (const auto& [i, imgs] : images) {
    if (imgs.empty()) continue;
    std::size_t off = offset(n, i);
    const std::size_t dn = D_.term(i + n).n;
    for (std::size_t j = 0; j < imgs.size(); ++j)
      for (std::size_t s = 0; s < dn; ++s) v[off + j * dn + s] = imgs[j][s];
  }
  return v;
}

Vec HomComplex::evaluate(int n, const Vec& phi, int i, const Vec& y) const {
  const int deg = i + n;
  const GModule Dm = D_.term(deg);
  if (Dm.n == 0) return Vec(0);
  const Zq& z = Dm.zq();
  const std::size_t Nk = F_.ctx->G->order() * F_.ctx->A->dim();
  auto comps = component(n, phi, i);
  Vec out(Dm.n, 0);
  const auto& tab = dAct_.at(deg);
  for (std::size_t j = 0; j < comps.size(); ++j) out = z.add(out, applyBlock(z, tab, Dm.n, y, j * Nk, Nk, comps[j]));
  return Dm.reduce(out);
}

Vec HomComplex::precomposeShifted(const HomComplex& source, const Vec& phi, int n, const ChainMap& g, int shift) const {
  const int m = n + shift;
  const Zq& z = F_.ctx->zq();
  std::map<int, std::vector<Vec>> images;
  auto it = source.blocks_.find(m);
  if (it == source.blocks_.end()) return Vec(source.H_.term(m).n, 0);
  for (const auto& [i, off] : it->second) {
    (void)off;
    const GModule Fi = source.F_.term(i);
    const std::size_t r = rankOf(Fi);
    auto gi = g.f.find(i);
    std::vector<Vec> imgs;
    for (std::size_t j = 0; j < r; ++j) {
      if (gi == g.f.end()) {
        imgs.emplace_back(source.D_.term(i + m).n, 0);
        continue;
      }
      Vec y = z.mul(Fi.freeGenerator(j), gi->second);
      imgs.push_back(evaluate(n, phi, i + shift, y));
    }
    images[i] = std::move(imgs);
  }
  return source.fromComponents(m, images);
}

long classRank(const Complex& H, int n, const std::vector<Vec>& cocycles) {
  const Zq& z = H.ctx->zq();
  const GModule M = H.term(n);
  Howell B = z.sum(M.rel, H.diff(n - 1));
  if (cocycles.empty()) return 0;
  Howell S = z.sum(B, Mat::fromRows(cocycles, M.n));
  return z.logSize(S) - z.logSize(B);
}

bool isCoboundary(const Complex& H, int n, const Vec& c) {
  const Zq& z = H.ctx->zq();
  const GModule M = H.term(n);
  return z.contains(z.sum(M.rel, H.diff(n - 1)), c);
}

// ---------------------------------------------------------- group cohomology

LevelCohomology::LevelCohomology(CtxPtr ctx, int maxDegree) : ctx_(std::move(ctx)), maxDeg_(maxDegree) {
  const Ring& A = *ctx_->A;
  std::vector<std::vector<std::vector<Elem>>> triv(ctx_->G->numGens(), {{A.one()}});
  k_ = GModule::freeOverA(ctx_, 1, triv);
  res_ = resolveModule(k_, maxDegree + 2);
  hom_ = std::make_shared<HomComplex>(res_.L, Complex::single(k_, 0));
}

long LevelCohomology::dim(int s) const {
  if (s > hom_->maxReliable()) throw std::out_of_range("cohomology degree beyond the computed range");
  return cohomologyAt(hom_->complex(), s).logSize;
}

std::vector<Vec> LevelCohomology::basis(int s) const {
  auto H = cohomologyAt(hom_->complex(), s);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < H.H.lift.r; ++i) out.push_back(H.H.lift.rowVec(i));
  return out;
}

Vec LevelCohomology::extensionClass(const std::vector<int>& chi) const {
  const Ring& A = *ctx_->A;
  const Zq& z = A.zq();
  Elem o = A.one(), zero = A.zero();
  std::vector<std::vector<std::vector<Elem>>> mats;
  for (int c : chi) mats.push_back(c ? std::vector<std::vector<Elem>>{{zero, o}, {o, zero}}
                                     : std::vector<std::vector<Elem>>{{o, zero}, {zero, o}});
  GModule X = GModule::freeOverA(ctx_, 2, mats);
  const Complex& F = res_.L;
  GModule F0 = F.term(0), Fm = F.term(-1);
  std::vector<Vec> img0;
  for (std::size_t j = 0; j < rankOf(F0); ++j) {
    // the generator goes to rho(e_j) * (first basis vector)
    Vec r = z.mul(F0.freeGenerator(j), res_.rho.f.at(0));
    Vec v(X.n, 0);
    for (std::size_t b = 0; b < A.dim(); ++b) v[b] = r[b];
    img0.push_back(v);
  }
  Mat g0 = freeMap(F0, X, img0);
  std::vector<Vec> vals;
  for (std::size_t j = 0; j < rankOf(Fm); ++j) {
    Vec v = X.reduce(z.mul(z.mul(Fm.freeGenerator(j), F.diff(-1)), g0));
    // v lies in the kernel of the augmentation: v = (a, a)
    Vec a(v.begin(), v.begin() + static_cast<long>(A.dim()));
    Vec b(v.begin() + static_cast<long>(A.dim()), v.end());
    if (!A.equal(a, b)) throw std::logic_error("extensionClass: image outside the augmentation kernel");
    vals.push_back(a);
  }
  return hom_->fromComponents(1, {{-1, vals}});
}

Vec LevelCohomology::kInvariant(const Complex& V) const {
  const Zq& z = ctx_->zq();
  auto H0 = cohomologyAt(V, 0), Hm = cohomologyAt(V, -1);
  if (H0.logSize != 1 || Hm.logSize != 1) throw std::invalid_argument("kInvariant: expects H^-1 = H^0 = k");
  const Complex& F = res_.L;
  GModule F0 = F.term(0), V0 = V.term(0);
  std::vector<Vec> img0;
  for (std::size_t j = 0; j < rankOf(F0); ++j) img0.push_back(H0.H.lift.rowVec(0));
  LiftRequest q;
  q.F = &F;
  q.E = &V;
  q.seed.f[0] = freeMap(F0, V0, img0);
  q.stopDeg = -1;
  auto g = liftChainMap(q);
  if (!g) throw std::logic_error("kInvariant: lifting failed");
  GModule Fm2 = F.term(-2), Vm = V.term(-1);
  Vec zgen = Hm.H.lift.rowVec(0);
  Solver sol(z, vstack(Mat::fromRows({zgen}, Vm.n), Vm.rel.rows));
  std::vector<Vec> vals;
  for (std::size_t j = 0; j < rankOf(Fm2); ++j) {
    Vec y = z.mul(z.mul(Fm2.freeGenerator(j), F.diff(-2)), g->at(F, V, -1));
    auto x = sol.solve(y);
    if (!x) throw std::logic_error("kInvariant: value is not a cycle");
    Vec a(1, (*x)[0]);
    vals.push_back(a);
  }
  return hom_->fromComponents(2, {{-2, vals}});
}

ChainMap LevelCohomology::liftClass(int a, const Vec& alpha) const {
  const Complex& F = res_.L;
  Complex E = shift(F, a);
  Complex D = Complex::single(k_, -a);
  ChainMap rho;
  rho.f[-a] = res_.rho.f.at(0);
  ChainMap f;
  GModule Fa = F.term(-a);
  f.f[-a] = rankOf(Fa) ? freeMap(Fa, k_, hom_->component(a, alpha, -a)) : Mat(0, k_.n);
  LiftRequest q;
  q.F = &F;
  q.E = &E;
  q.D = &D;
  q.rho = &rho;
  q.f = &f;
  q.stopDeg = F.lo;
  auto g = liftChainMap(q);
  if (!g) throw std::logic_error("liftClass: lifting failed");
  return *g;
}

Vec LevelCohomology::cup(int a, const Vec& alpha, int b, const Vec& beta) const {
  if (a + b > maxDeg_) throw std::out_of_range("cup: degree beyond the computed range");
  ChainMap g = liftClass(a, alpha);
  return hom_->precomposeShifted(*hom_, beta, b, g, a);
}

InflationMap::InflationMap(const LevelCohomology& small, const LevelCohomology& big) : small_(small), big_(big) {
  const auto& Rs = small.resolution();
  const auto& Rb = big.resolution();
  Complex E = Rs.L.inflate(big.ctx());
  Complex D = Rs.target.inflate(big.ctx());
  LiftRequest q;
  q.F = &Rb.L;
  q.E = &E;
  q.D = &D;
  q.rho = &Rs.rho;
  q.f = &Rb.rho;
  q.stopDeg = std::max(Rb.L.lo, Rs.L.lo);
  auto g = liftChainMap(q);
  if (!g) throw std::logic_error("inflation: lifting failed");
  g_ = *g;
}

Vec InflationMap::apply(int s, const Vec& c) const { return small_.hom().precomposeShifted(big_.hom(), c, s, g_, 0); }

long InflationMap::rank(int s) const {
  std::vector<Vec> imgs;
  for (const auto& c : small_.basis(s)) imgs.push_back(apply(s, c));
  return classRank(big_.hom().complex(), s, imgs);
}

nlohmann::json GroupCohomologyReport::toJson() const {
  return {{"dims", dims}, {"finiteDims", finiteDims}, {"level", level}, {"stable", stable}};
}

GroupCohomologyReport groupCohomology(const GroupModel& model, int maxDegree, int level) {
  RingPtr k = Ring::zmod(model.p, 1);
  std::vector<std::unique_ptr<LevelCohomology>> lc;
  for (int t = 0; t < 3; ++t)
    lc.push_back(std::make_unique<LevelCohomology>(makeContext(k, FiniteGroup::realize(model.atLevel(level + t))), maxDegree));
  InflationMap m01(*lc[0], *lc[1]), m12(*lc[1], *lc[2]), m02(*lc[0], *lc[2]);
  GroupCohomologyReport rep;
  rep.level = level;
  rep.stable = true;
  for (int s = 0; s <= maxDegree; ++s) {
    long r01 = m01.rank(s), r12 = m12.rank(s), r02 = m02.rank(s);
    rep.finiteDims.push_back(lc[0]->dim(s));
    rep.dims.push_back(r02);
    rep.stable = rep.stable && r01 == r02 && r12 == r02;
  }
  return rep;
}

std::vector<long> gradedDiagonalBetti(int T, int maxDegree) {
  RingPtr A = Ring::quotient(Modulus::make(2, 1), {"x1", "x2"}, T + 1, {Poly{{{T, 0}, 1}}, Poly{{{0, 2}, 1}}});
  auto ctx = makeContext(A, FiniteGroup::trivial());
  const Zq& z = A->zq();
  const std::size_t k = A->dim();
  std::vector<int> bdeg;
  for (const auto& e : A->basisExps()) bdeg.push_back(e[0] + e[1]);
  // current free module with generator degrees, and the submodule to cover
  std::vector<int> gdeg = {0};
  GModule L = GModule::freeOverB(ctx, 1);
  auto coordDeg = [&](const std::vector<int>& gd, std::size_t c) { return gd[c / k] + bdeg[c % k]; };
  // kernel of the augmentation: the maximal ideal
  std::vector<Vec> mrows;
  for (std::size_t b = 0; b < k; ++b)
    if (bdeg[b] > 0) mrows.push_back(L.unit(b));
  Howell K = z.howell(mrows, L.n);
  std::vector<long> out = {1};
  for (int s = 1; s <= maxDegree; ++s) {
    // m*K
    std::vector<Vec> mk;
    for (std::size_t r = 0; r < K.rows.r; ++r)
      for (const auto& X : L.vars) mk.push_back(z.mul(K.rows.rowVec(r), X));
    Howell W = z.howell(mk, L.n);
    std::vector<Vec> chosen;
    std::vector<int> cdeg;
    int maxd = 0;
    for (std::size_t c = 0; c < L.n; ++c) maxd = std::max(maxd, coordDeg(gdeg, c));
    for (int d = 0; d <= maxd; ++d) {
      std::vector<Vec> units;
      for (std::size_t c = 0; c < L.n; ++c)
        if (coordDeg(gdeg, c) == d) units.push_back(L.unit(c));
      if (units.empty()) continue;
      Howell Kd = z.intersect(K, z.howell(units, L.n));
      for (std::size_t r = 0; r < Kd.rows.r; ++r) {
        Vec v = Kd.rows.rowVec(r);
        if (z.contains(W, v)) continue;
        chosen.push_back(v);
        cdeg.push_back(d);
        W = z.sum(W, L.submodule({v}));
      }
    }
    long diag = std::count(cdeg.begin(), cdeg.end(), s);
    out.push_back(diag);
    GModule L2 = GModule::freeOverB(ctx, chosen.size());
    Mat d = freeMap(L2, L, chosen);
    K = z.preimage(d, L.rel);
    L = L2;
    gdeg = cdeg;
  }
  return out;
}

nlohmann::json ExtReport::toJson() const {
  return {{"n", n}, {"bottom", bottom}, {"dim", dim}, {"finiteDims", finiteDims}, {"ranks", ranks}, {"stable", stable}};
}

long hyperExtAtLevel(const Complex& C, const Complex& D, int n, int bottom, std::vector<Vec>* basis) {
  FreeResolution R = resolveComplex(C, bottom);
  HomComplex H(R.L, D);
  if (n > H.maxReliable()) throw std::runtime_error("hyperExt: insufficient depth for degree " + std::to_string(n));
  auto cg = cohomologyAt(H.complex(), n);
  if (basis)
    for (std::size_t i = 0; i < cg.H.lift.r; ++i) basis->push_back(cg.H.lift.rowVec(i));
  return cg.logSize;
}

ExtReport hyperExt(const std::function<std::pair<Complex, Complex>(CtxPtr)>& make, RingPtr A, const GroupModel& model,
                   int level, int n, int bottom) {
  ExtReport rep;
  rep.n = n;
  rep.bottom = bottom;
  struct Lvl {
    CtxPtr ctx;
    Complex C, D;
    FreeResolution R;
    std::shared_ptr<HomComplex> H;
    std::vector<Vec> basis;
  };
  std::vector<Lvl> lv;
  for (int t = 0; t < 3; ++t) {
    Lvl l;
    l.ctx = makeContext(A, FiniteGroup::realize(model.atLevel(level + t)));
    std::tie(l.C, l.D) = make(l.ctx);
    l.R = resolveComplex(l.C, bottom);
    l.H = std::make_shared<HomComplex>(l.R.L, l.D);
    if (n > l.H->maxReliable()) throw std::runtime_error("hyperExt: insufficient depth for degree " + std::to_string(n));
    auto cg = cohomologyAt(l.H->complex(), n);
    rep.finiteDims.push_back(cg.logSize);
    for (std::size_t i = 0; i < cg.H.lift.r; ++i) l.basis.push_back(cg.H.lift.rowVec(i));
    lv.push_back(std::move(l));
  }
  auto infRank = [&](const Lvl& a, const Lvl& b) {
    Complex E = a.R.L.inflate(b.ctx);
    Complex D = a.R.target.inflate(b.ctx);
    LiftRequest q;
    q.F = &b.R.L;
    q.E = &E;
    q.D = &D;
    q.rho = &a.R.rho;
    q.f = &b.R.rho;
    q.stopDeg = std::max(a.R.L.lo, b.R.L.lo);
    auto g = liftChainMap(q);
    if (!g) throw std::logic_error("hyperExt: inflation lift failed");
    std::vector<Vec> imgs;
    for (const auto& c : a.basis) imgs.push_back(a.H->precomposeShifted(*b.H, c, n, *g, 0));
    return classRank(b.H->complex(), n, imgs);
  };
  rep.ranks = {infRank(lv[0], lv[1]), infRank(lv[1], lv[2]), infRank(lv[0], lv[2])};
  rep.dim = rep.ranks[2];
  rep.stable = rep.ranks[0] == rep.ranks[2] && rep.ranks[1] == rep.ranks[2];
  return rep;
}

}  // namespace hd
