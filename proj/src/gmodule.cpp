#include "hd/gmodule.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace hd {

CtxPtr makeContext(RingPtr A, GroupPtr G) { return std::make_shared<const Context>(Context{std::move(A), std::move(G)}); }

namespace {

Mat zeroMat(std::size_t r, std::size_t c) { return Mat(r, c); }

std::vector<Vec> rowsOf(const Mat& m) {
  std::vector<Vec> out;
  out.reserve(m.r);
  for (std::size_t i = 0; i < m.r; ++i) out.push_back(m.rowVec(i));
  return out;
}

Howell blockRel(const Zq& z, const Howell& base, std::size_t copies) {
  std::size_t k = base.cols;
  std::vector<Vec> rows;
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < base.rows.r; ++i) {
      Vec v(copies * k, 0);
      for (std::size_t j = 0; j < k; ++j) v[c * k + j] = base.rows(i, j);
      rows.push_back(std::move(v));
    }
  return z.howell(rows, copies * k);
}

bool isPGroup(const FiniteGroup& G) {
  std::size_t o = G.order();
  std::size_t p = static_cast<std::size_t>(G.model().p);
  while (o % p == 0) o /= p;
  return o == 1;
}

}  // namespace

nlohmann::json matJson(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.r; ++i) rows.push_back(m.rowVec(i));
  return rows;
}

Mat matFromJson(const nlohmann::json& j, std::size_t r, std::size_t c) {
  Mat m(r, c);
  if (j.size() != r) throw std::invalid_argument("matrix: row count mismatch");
  for (std::size_t i = 0; i < r; ++i) {
    if (j[i].size() != c) throw std::invalid_argument("matrix: column count mismatch");
    for (std::size_t k = 0; k < c; ++k) m(i, k) = j[i][k].get<u64>();
  }
  return m;
}

// ------------------------------------------------------------------ modules

GModule GModule::zero(CtxPtr ctx) {
  GModule M;
  M.ctx = ctx;
  M.n = 0;
  M.rel = ctx->zq().zeroSpan(0);
  M.gens.assign(ctx->G->numGens(), Mat(0, 0));
  M.vars.assign(ctx->A->vars().size(), Mat(0, 0));
  M.freeB = M.freeA = 0;
  return M;
}

GModule GModule::freeOverB(CtxPtr ctx, std::size_t rank) {
  const Ring& A = *ctx->A;
  const FiniteGroup& G = *ctx->G;
  const std::size_t N = G.order(), k = A.dim();
  GModule M;
  M.ctx = ctx;
  M.n = rank * N * k;
  M.freeB = static_cast<int>(rank);
  M.rel = blockRel(A.zq(), A.relations(), rank * N);
  for (std::size_t s = 0; s < G.numGens(); ++s) {
    Mat R(M.n, M.n);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t g = 0; g < N; ++g) {
        std::size_t h = static_cast<std::size_t>(G.leftGen(s, static_cast<int>(g)));
        for (std::size_t j = 0; j < k; ++j) R((i * N + g) * k + j, (i * N + h) * k + j) = 1;
      }
    M.gens.push_back(std::move(R));
  }
  for (std::size_t v = 0; v < A.vars().size(); ++v) {
    Mat X(M.n, M.n);
    const Mat& xv = A.varMatrix(v);
    for (std::size_t b = 0; b < rank * N; ++b)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) X(b * k + i, b * k + j) = xv(i, j);
    M.vars.push_back(std::move(X));
  }
  return M;
}

GModule GModule::freeOverA(CtxPtr ctx, std::size_t rank, const std::vector<std::vector<std::vector<Elem>>>& genMats) {
  const Ring& A = *ctx->A;
  const FiniteGroup& G = *ctx->G;
  const std::size_t k = A.dim();
  if (genMats.size() != G.numGens()) throw std::invalid_argument("freeOverA: one matrix per group generator expected");
  GModule M;
  M.ctx = ctx;
  M.n = rank * k;
  M.freeA = static_cast<int>(rank);
  M.rel = blockRel(A.zq(), A.relations(), rank);
  for (const auto& W : genMats) {
    if (W.size() != rank) throw std::invalid_argument("freeOverA: matrix size mismatch");
    Mat R(M.n, M.n);
    for (std::size_t i = 0; i < rank; ++i) {
      if (W[i].size() != rank) throw std::invalid_argument("freeOverA: matrix size mismatch");
      for (std::size_t j = 0; j < rank; ++j) {
        Mat blk = A.mulMatrix(W[i][j]);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) R(i * k + a, j * k + b) = blk(a, b);
      }
    }
    M.gens.push_back(std::move(R));
  }
  for (std::size_t v = 0; v < A.vars().size(); ++v) {
    Mat X(M.n, M.n);
    const Mat& xv = A.varMatrix(v);
    for (std::size_t b = 0; b < rank; ++b)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) X(b * k + i, b * k + j) = xv(i, j);
    M.vars.push_back(std::move(X));
  }
  return M;
}

GModule GModule::inflate(CtxPtr bigger) const {
  GModule M;
  M.ctx = bigger;
  M.n = n;
  M.rel = rel;
  M.vars = vars;
  M.freeA = freeA;
  const auto& names = ctx->G->genNames();
  for (const auto& name : bigger->G->genNames()) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      M.gens.push_back(Mat::identity(n));
    else
      M.gens.push_back(gens[static_cast<std::size_t>(it - names.begin())]);
  }
  return M;
}

bool GModule::isZero(const Vec& v) const {
  Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; });
}

Vec GModule::unit(std::size_t i) const {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

Vec GModule::freeGenerator(std::size_t j) const {
  const Elem one = ring().one();
  const std::size_t k = ring().dim();
  std::size_t base;
  if (freeB >= 0)
    base = j * group().order() * k;
  else if (freeA >= 0)
    base = j * k;
  else
    throw std::logic_error("freeGenerator: module is not free");
  Vec v(n, 0);
  for (std::size_t b = 0; b < k; ++b) v[base + b] = one[b];
  return v;
}

const std::vector<Mat>& GModule::basisActions() const {
  if (basisCache_) return *basisCache_;
  auto out = std::make_shared<std::vector<Mat>>();
  const Ring& A = ring();
  for (const auto& e : A.basisExps()) {
    Mat X = Mat::identity(n);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (int t = 0; t < e[v]; ++t) X = zq().mul(X, vars[v]);
    out->push_back(std::move(X));
  }
  basisCache_ = out;
  return *basisCache_;
}

Mat GModule::ringAction(const Elem& a) const {
  Mat X(n, n);
  const auto& B = basisActions();
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j]) X = zq().add(X, zq().scale(B[j], a[j]));
  return X;
}

Vec GModule::act(int g, const Vec& v) const {
  std::vector<int> word;
  const FiniteGroup& G = group();
  while (g != 0) {
    word.push_back(G.parentGen(g));
    g = G.parent(g);
  }
  Vec w = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) w = zq().mul(w, gens[static_cast<std::size_t>(*it)]);
  return w;
}

std::vector<Vec> GModule::orbit(const Vec& v) const {
  const FiniteGroup& G = group();
  std::vector<Vec> out(G.order());
  out[0] = v;
  for (int g : G.bfsOrder()) {
    if (g == 0) continue;
    out[static_cast<std::size_t>(g)] =
        zq().mul(out[static_cast<std::size_t>(G.parent(g))], gens[static_cast<std::size_t>(G.parentGen(g))]);
  }
  return out;
}

Howell GModule::submodule(const std::vector<Vec>& vs) const {
  std::vector<Vec> rows = rowsOf(rel.rows);
  const auto& B = basisActions();
  for (const auto& v : vs)
    for (const auto& w : orbit(v))
      for (const auto& X : B) rows.push_back(zq().mul(w, X));
  return zq().howell(rows, n);
}

Howell GModule::radicalTimes() const {
  std::vector<Vec> rows = rowsOf(rel.rows);
  const u64 p = static_cast<u64>(zq().p());
  for (std::size_t i = 0; i < n; ++i) {
    Vec e = unit(i);
    for (const auto& R : gens) rows.push_back(zq().sub(zq().mul(e, R), e));
    for (const auto& X : vars) rows.push_back(zq().mul(e, X));
    rows.push_back(zq().scale(e, p));
  }
  return zq().howell(rows, n);
}

std::vector<Vec> GModule::generators(const Howell& span) const {
  std::vector<Vec> chosen;
  if (isPGroup(group())) {
    // minimal generators: a basis of span / rad(B)*span
    std::vector<Vec> rows = rowsOf(rel.rows);
    const u64 p = static_cast<u64>(zq().p());
    for (std::size_t i = 0; i < span.rows.r; ++i) {
      Vec e = span.rows.rowVec(i);
      for (const auto& R : gens) rows.push_back(zq().sub(zq().mul(e, R), e));
      for (const auto& X : vars) rows.push_back(zq().mul(e, X));
      rows.push_back(zq().scale(e, p));
    }
    Howell T = zq().howell(rows, n);
    for (std::size_t i = 0; i < span.rows.r; ++i) {
      Vec v = span.rows.rowVec(i);
      if (zq().contains(T, v)) continue;
      chosen.push_back(v);
      T = zq().sum(T, Mat::fromRows({v}, n));
    }
    return chosen;
  }
  Howell T = rel;
  for (std::size_t i = 0; i < span.rows.r; ++i) {
    Vec v = span.rows.rowVec(i);
    if (zq().contains(T, v)) continue;
    chosen.push_back(v);
    T = submodule(chosen);
  }
  return chosen;
}

long GModule::fiberDim() const {
  std::vector<Vec> rows = rowsOf(rel.rows);
  const u64 p = static_cast<u64>(zq().p());
  for (std::size_t i = 0; i < n; ++i) {
    Vec e = unit(i);
    for (const auto& X : vars) rows.push_back(zq().mul(e, X));
    rows.push_back(zq().scale(e, p));
  }
  return static_cast<long>(n) * zq().m() - zq().logSize(zq().howell(rows, n));
}

bool GModule::isAFree() const { return logSize() == ring().length() * fiberDim(); }

bool congruent(const Zq& z, const Mat& a, const Mat& b, const Howell& rel) {
  if (a.r != b.r || a.c != b.c) return false;
  for (std::size_t i = 0; i < a.r; ++i)
    if (!z.contains(rel, z.sub(a.rowVec(i), b.rowVec(i)))) return false;
  return true;
}

std::optional<Vec> solveModulo(const Zq& z, const Mat& F, const Vec& b, const Howell& rel) {
  auto x = z.solve(vstack(F, rel.rows), b);
  if (!x) return std::nullopt;
  return Vec(x->begin(), x->begin() + static_cast<long>(F.r));
}

void GModule::validate() const {
  const Zq& z = zq();
  const Ring& A = ring();
  const FiniteGroup& G = group();
  if (gens.size() != G.numGens() || vars.size() != A.vars().size())
    throw std::invalid_argument("module: wrong number of action matrices");
  for (const auto& M : gens)
    if (M.r != n || M.c != n) throw std::invalid_argument("module: action matrix has wrong shape");
  for (const auto& M : vars)
    if (M.r != n || M.c != n) throw std::invalid_argument("module: ring action matrix has wrong shape");
  if (rel.cols != n) throw std::invalid_argument("module: relation width mismatch");
  for (const auto& M : gens)
    if (!z.containsAll(rel, z.mul(rel.rows, M))) throw std::invalid_argument("module: group action does not preserve relations");
  for (const auto& M : vars)
    if (!z.containsAll(rel, z.mul(rel.rows, M))) throw std::invalid_argument("module: ring action does not preserve relations");
  // ring structure: X_{b_j} X_v = X_{b_j * x_v}
  const auto& B = basisActions();
  for (std::size_t j = 0; j < A.dim(); ++j)
    for (std::size_t v = 0; v < vars.size(); ++v) {
      Elem prod = A.mul(A.monomial(A.basisExps()[j]), A.var(v));
      if (!congruent(z, z.mul(B[j], vars[v]), ringAction(prod), rel))
        throw std::invalid_argument("module: ring action violates the ring relations");
    }
  for (const auto& R : gens)
    for (const auto& X : vars)
      if (!congruent(z, z.mul(R, X), z.mul(X, R), rel)) throw std::invalid_argument("module: group and ring actions do not commute");
  if (freeB >= 0) return;  // permutation actions are correct by construction
  // group relations: vec[s*h] = vec[h]*R_s for all s, h on test vectors
  std::vector<Vec> probes;
  const double cost = static_cast<double>(n) * n * n * static_cast<double>(G.order()) * G.numGens();
  if (cost < 4e8) {
    for (std::size_t i = 0; i < n; ++i) probes.push_back(unit(i));
  } else {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    for (int t = 0; t < 12; ++t) {
      Vec v(n);
      for (auto& x : v) x = z.red(rng());
      probes.push_back(v);
    }
  }
  for (const auto& v : probes) {
    auto orb = orbit(v);
    for (std::size_t s = 0; s < G.numGens(); ++s)
      for (std::size_t h = 0; h < G.order(); ++h) {
        const Vec& lhs = orb[static_cast<std::size_t>(G.leftGen(s, static_cast<int>(h)))];
        Vec rhs = z.mul(orb[h], gens[s]);
        if (!z.contains(rel, z.sub(lhs, rhs))) throw std::invalid_argument("module: group relations fail for the action");
      }
  }
}

nlohmann::json GModule::toJson() const {
  nlohmann::json j;
  j["n"] = n;
  if (freeB >= 0) {
    j["freeB"] = freeB;
    return j;
  }
  if (freeA >= 0) j["freeA"] = freeA;
  j["relations"] = matJson(rel.rows);
  nlohmann::json acts = nlohmann::json::object();
  for (std::size_t s = 0; s < gens.size(); ++s) acts[group().genNames()[s]] = matJson(gens[s]);
  j["actions"] = acts;
  nlohmann::json ra = nlohmann::json::object();
  for (std::size_t v = 0; v < vars.size(); ++v) ra[ring().vars()[v]] = matJson(vars[v]);
  j["ringActions"] = ra;
  return j;
}

GModule GModule::fromJson(CtxPtr ctx, const nlohmann::json& j) {
  if (j.contains("freeB")) {
    GModule M = freeOverB(ctx, j.at("freeB").get<std::size_t>());
    if (j.contains("n") && j.at("n").get<std::size_t>() != M.n) throw std::invalid_argument("module: rank mismatch");
    return M;
  }
  GModule M;
  M.ctx = ctx;
  M.n = j.at("n").get<std::size_t>();
  const Zq& z = ctx->zq();
  const auto& rj = j.value("relations", nlohmann::json::array());
  M.rel = z.howell(matFromJson(rj, rj.size(), M.n));
  for (const auto& name : ctx->G->genNames()) {
    if (!j.at("actions").contains(name)) throw std::invalid_argument("module: missing action for " + name);
    M.gens.push_back(matFromJson(j.at("actions").at(name), M.n, M.n));
  }
  for (const auto& name : ctx->A->vars()) {
    if (!j.at("ringActions").contains(name)) throw std::invalid_argument("module: missing ring action for " + name);
    M.vars.push_back(matFromJson(j.at("ringActions").at(name), M.n, M.n));
  }
  if (j.contains("freeA")) M.freeA = j.at("freeA").get<int>();
  M.validate();
  if (M.freeA >= 0 && M.logSize() != M.freeA * ctx->A->length()) throw std::invalid_argument("module: not A-free of the stated rank");
  return M;
}

GModule directSum(const GModule& a, const GModule& b) {
  const Zq& z = a.zq();
  GModule M;
  M.ctx = a.ctx;
  M.n = a.n + b.n;
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < a.rel.rows.r; ++i) {
    Vec v(M.n, 0);
    for (std::size_t j = 0; j < a.n; ++j) v[j] = a.rel.rows(i, j);
    rows.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < b.rel.rows.r; ++i) {
    Vec v(M.n, 0);
    for (std::size_t j = 0; j < b.n; ++j) v[a.n + j] = b.rel.rows(i, j);
    rows.push_back(std::move(v));
  }
  M.rel = z.howell(rows, M.n);
  for (std::size_t s = 0; s < a.gens.size(); ++s) M.gens.push_back(blockDiag(a.gens[s], b.gens[s]));
  for (std::size_t v = 0; v < a.vars.size(); ++v) M.vars.push_back(blockDiag(a.vars[v], b.vars[v]));
  if (a.freeB >= 0 && b.freeB >= 0) M.freeB = a.freeB + b.freeB;
  if (a.freeA >= 0 && b.freeA >= 0) M.freeA = a.freeA + b.freeA;
  return M;
}

Subquotient subquotient(const GModule& M, const Howell& Z, const Howell& Bsp) {
  const Zq& z = M.zq();
  // a Z/q-generating set of Z modulo Bsp
  std::vector<Vec> picked;
  Howell T = Bsp;
  for (std::size_t i = 0; i < Z.rows.r; ++i) {
    Vec v = Z.rows.rowVec(i);
    if (z.contains(T, v)) continue;
    picked.push_back(v);
    T = z.sum(T, Mat::fromRows({v}, M.n));
  }
  const std::size_t k = picked.size();
  Mat Zg = Mat::fromRows(picked, M.n);
  Subquotient out;
  out.lift = Zg;
  GModule& H = out.mod;
  H.ctx = M.ctx;
  H.n = k;
  H.rel = k ? z.preimage(Zg, Bsp) : z.zeroSpan(0);
  Solver solver(z, vstack(Zg, Bsp.rows));
  auto induce = [&](const Mat& act) {
    Mat R(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      auto x = solver.solve(z.mul(picked[i], act));
      if (!x) throw std::logic_error("subquotient: Z is not stable under the action");
      for (std::size_t j = 0; j < k; ++j) R(i, j) = (*x)[j];
    }
    return R;
  };
  for (const auto& R : M.gens) H.gens.push_back(induce(R));
  for (const auto& X : M.vars) H.vars.push_back(induce(X));
  return out;
}

GModule quotientModule(const GModule& M, const Mat& extra) {
  GModule Q = M;
  Q.rel = M.submodule(rowsOf(extra));
  Q.freeA = Q.freeB = -1;
  return Q;
}

Mat freeMap(const GModule& F, const GModule& T, const std::vector<Vec>& images) {
  if (F.freeB < 0) throw std::invalid_argument("freeMap: source must be B-free");
  if (images.size() != static_cast<std::size_t>(F.freeB)) throw std::invalid_argument("freeMap: one image per generator");
  const std::size_t N = F.group().order(), k = F.ring().dim();
  const Zq& z = F.zq();
  const auto& B = T.basisActions();
  Mat out(F.n, T.n);
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto orb = T.orbit(images[i]);
    for (std::size_t g = 0; g < N; ++g)
      for (std::size_t j = 0; j < k; ++j) {
        Vec row = T.reduce(z.mul(orb[g], B[j]));
        std::copy(row.begin(), row.end(), out.row((i * N + g) * k + j));
      }
  }
  return out;
}

bool isHomomorphism(const GModule& S, const GModule& T, const Mat& f) {
  const Zq& z = S.zq();
  if (f.r != S.n || f.c != T.n) return false;
  if (!z.containsAll(T.rel, z.mul(S.rel.rows, f))) return false;
  for (std::size_t s = 0; s < S.gens.size(); ++s)
    if (!congruent(z, z.mul(S.gens[s], f), z.mul(f, T.gens[s]), T.rel)) return false;
  for (std::size_t v = 0; v < S.vars.size(); ++v)
    if (!congruent(z, z.mul(S.vars[v], f), z.mul(f, T.vars[v]), T.rel)) return false;
  return true;
}

// ---------------------------------------------------------------- complexes

Complex Complex::zero(CtxPtr ctx, int lo) {
  Complex C;
  C.ctx = std::move(ctx);
  C.lo = lo;
  return C;
}

Complex Complex::single(const GModule& M, int deg) {
  Complex C;
  C.ctx = M.ctx;
  C.lo = deg;
  C.terms.push_back(M);
  return C;
}

GModule Complex::term(int deg) const {
  if (deg < lo || deg > hi()) return GModule::zero(ctx);
  return terms[static_cast<std::size_t>(deg - lo)];
}

Mat Complex::diff(int deg) const {
  if (deg < lo || deg + 1 > hi()) return zeroMat(term(deg).n, term(deg + 1).n);
  return d[static_cast<std::size_t>(deg - lo)];
}

void Complex::validate() const {
  if (!terms.empty() && d.size() + 1 != terms.size()) throw std::invalid_argument("complex: differential count mismatch");
  const Zq& z = ctx->zq();
  for (const auto& M : terms) M.validate();
  for (int i = lo; i < hi(); ++i) {
    const GModule S = term(i), T = term(i + 1);
    if (!isHomomorphism(S, T, diff(i)))
      throw std::invalid_argument("complex: differential in degree " + std::to_string(i) + " is not a module map");
    if (i + 1 < hi()) {
      Mat dd = z.mul(diff(i), diff(i + 1));
      if (!congruent(z, dd, Mat(dd.r, dd.c), term(i + 2).rel))
        throw std::invalid_argument("complex: d^2 != 0 at degree " + std::to_string(i));
    }
  }
}

Complex Complex::trimmed() const {
  Complex C = *this;
  auto isNull = [](const GModule& M) { return M.n == 0 || M.logSize() == 0; };
  while (!C.terms.empty() && isNull(C.terms.back())) {
    C.terms.pop_back();
    if (!C.d.empty()) C.d.pop_back();
  }
  if (!C.openBelow)
    while (!C.terms.empty() && isNull(C.terms.front())) {
      C.terms.erase(C.terms.begin());
      if (!C.d.empty()) C.d.erase(C.d.begin());
      ++C.lo;
    }
  return C;
}

Complex Complex::inflate(CtxPtr bigger) const {
  Complex C = *this;
  C.ctx = bigger;
  for (auto& M : C.terms) M = M.inflate(bigger);
  return C;
}

nlohmann::json Complex::toJson() const {
  nlohmann::json j;
  j["lo"] = lo;
  j["openBelow"] = openBelow;
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& M : terms) ts.push_back(M.toJson());
  j["terms"] = ts;
  nlohmann::json ds = nlohmann::json::array();
  for (const auto& m : d) ds.push_back(matJson(m));
  j["differentials"] = ds;
  return j;
}

Complex Complex::fromJson(CtxPtr ctx, const nlohmann::json& j) {
  Complex C;
  C.ctx = ctx;
  C.lo = j.value("lo", 0);
  C.openBelow = j.value("openBelow", false);
  for (const auto& t : j.at("terms")) C.terms.push_back(GModule::fromJson(ctx, t));
  const auto& ds = j.value("differentials", nlohmann::json::array());
  if (!C.terms.empty() && ds.size() + 1 != C.terms.size()) throw std::invalid_argument("complex: differential count mismatch");
  for (std::size_t i = 0; i < ds.size(); ++i) C.d.push_back(matFromJson(ds[i], C.terms[i].n, C.terms[i + 1].n));
  C.validate();
  return C;
}

std::string fnvHash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Complex::hash() const { return fnvHash(toJson().dump()); }

Mat ChainMap::at(const Complex& S, const Complex& T, int deg) const {
  auto it = f.find(deg);
  if (it != f.end()) return it->second;
  return Mat(S.term(deg).n, T.term(deg).n);
}

bool isChainMap(const Complex& S, const Complex& T, const ChainMap& f, std::string* why) {
  const Zq& z = S.ctx->zq();
  int lo = std::min(S.lo, T.lo), hi = std::max(S.hi(), T.hi());
  if (S.openBelow || T.openBelow) lo = std::max(S.openBelow ? S.lo : lo, T.openBelow ? T.lo : lo);
  for (int i = lo; i <= hi; ++i) {
    GModule a = S.term(i), b = T.term(i);
    Mat fi = f.at(S, T, i);
    if (!isHomomorphism(a, b, fi)) {
      if (why) *why = "component in degree " + std::to_string(i) + " is not a module map";
      return false;
    }
    Mat lhs = z.mul(S.diff(i), f.at(S, T, i + 1));
    Mat rhs = z.mul(fi, T.diff(i));
    if (!congruent(z, lhs, rhs, T.term(i + 1).rel)) {
      if (why) *why = "square between degrees " + std::to_string(i) + " and " + std::to_string(i + 1) + " does not commute";
      return false;
    }
  }
  return true;
}

ChainMap identityMap(const Complex& C) {
  ChainMap f;
  for (int i = C.lo; i <= C.hi(); ++i) f.f[i] = Mat::identity(C.term(i).n);
  return f;
}

ChainMap compose(const Complex& A, const Complex& B, const Complex& C, const ChainMap& f, const ChainMap& g) {
  ChainMap h;
  const Zq& z = A.ctx->zq();
  for (int i = A.lo; i <= A.hi(); ++i) h.f[i] = z.mul(f.at(A, B, i), g.at(B, C, i));
  return h;
}

CohomologyGroup cohomologyAt(const Complex& C, int deg) {
  const Zq& z = C.ctx->zq();
  GModule M = C.term(deg);
  CohomologyGroup H;
  H.degree = deg;
  H.Z = z.preimage(C.diff(deg), C.term(deg + 1).rel);
  if (M.n == 0) H.Z = z.zeroSpan(0);
  H.B = z.sum(M.rel, C.diff(deg - 1));
  H.logSize = z.logSize(H.Z) - z.logSize(H.B);
  H.H = subquotient(M, H.Z, H.B);
  H.invariants = z.quotientStructure(H.H.mod.rel, H.H.mod.n);
  return H;
}

std::vector<CohomologyGroup> cohomology(const Complex& C) {
  std::vector<CohomologyGroup> out;
  for (int i = C.firstReliable(); i <= C.hi(); ++i) out.push_back(cohomologyAt(C, i));
  return out;
}

bool isAcyclic(const Complex& C) {
  for (const auto& H : cohomology(C))
    if (H.logSize != 0) return false;
  return true;
}

Complex shift(const Complex& C, int n) {
  Complex S = C;
  S.lo = C.lo - n;
  if (n % 2 != 0)
    for (auto& m : S.d) m = C.ctx->zq().scale(m, C.ctx->zq().q() - 1);
  return S;
}

Complex cone(const Complex& C, const Complex& D, const ChainMap& f) {
  const Zq& z = C.ctx->zq();
  Complex K;
  K.ctx = C.ctx;
  int lo = std::min(C.lo - 1, D.lo), hi = std::max(C.hi() - 1, D.hi());
  if (C.empty()) lo = D.lo, hi = D.hi();
  if (D.empty() && !C.empty()) lo = C.lo - 1, hi = C.hi() - 1;
  if (C.openBelow || D.openBelow) {
    int known = lo;
    if (C.openBelow) known = std::max(known, C.lo - 1);
    if (D.openBelow) known = std::max(known, D.lo);
    lo = known;
    K.openBelow = true;
  }
  K.lo = lo;
  for (int i = lo; i <= hi; ++i) K.terms.push_back(directSum(C.term(i + 1), D.term(i)));
  for (int i = lo; i < hi; ++i) {
    GModule c1 = C.term(i + 1), d0 = D.term(i), c2 = C.term(i + 2), d1 = D.term(i + 1);
    Mat m(c1.n + d0.n, c2.n + d1.n);
    Mat dc = z.scale(C.diff(i + 1), z.q() - 1);
    Mat fi = f.at(C, D, i + 1);
    Mat dd = D.diff(i);
    for (std::size_t r = 0; r < c1.n; ++r) {
      for (std::size_t c = 0; c < c2.n; ++c) m(r, c) = dc(r, c);
      for (std::size_t c = 0; c < d1.n; ++c) m(r, c2.n + c) = fi(r, c);
    }
    for (std::size_t r = 0; r < d0.n; ++r)
      for (std::size_t c = 0; c < d1.n; ++c) m(c1.n + r, c2.n + c) = dd(r, c);
    K.d.push_back(std::move(m));
  }
  return K;
}

nlohmann::json QuasiIsoCertificate::toJson() const {
  nlohmann::json j;
  j["ok"] = ok;
  j["chainMap"] = chainMap;
  if (!ok) {
    j["failingDegree"] = failingDegree;
    j["reason"] = reason;
  }
  nlohmann::json ds = nlohmann::json::array();
  for (const auto& d : degrees) {
    nlohmann::json e;
    e["degree"] = d.degree;
    e["injective"] = d.injective;
    e["surjective"] = d.surjective;
    e["preimages"] = d.preimages;
    e["kernelClasses"] = d.kernelClasses;
    ds.push_back(e);
  }
  j["degrees"] = ds;
  return j;
}

QuasiIsoCertificate checkQuasiIso(const Complex& C, const Complex& D, const ChainMap& f) {
  QuasiIsoCertificate cert;
  std::string why;
  cert.chainMap = isChainMap(C, D, f, &why);
  if (!cert.chainMap) {
    cert.reason = "not a chain map: " + why;
    return cert;
  }
  const Zq& z = C.ctx->zq();
  int lo = std::min(C.empty() ? D.lo : C.lo, D.empty() ? C.lo : D.lo);
  if (C.openBelow) lo = std::max(lo, C.firstReliable());
  if (D.openBelow) lo = std::max(lo, D.firstReliable());
  int hi = std::max(C.empty() ? lo : C.hi(), D.empty() ? lo : D.hi());
  cert.ok = true;
  for (int i = lo; i <= hi; ++i) {
    CohomologyGroup hc = cohomologyAt(C, i), hd = cohomologyAt(D, i);
    Mat fi = f.at(C, D, i);
    QuasiIsoDegree q;
    q.degree = i;
    // injectivity: cycles mapping into boundaries are boundaries
    Howell K = C.term(i).n ? z.intersect(z.preimage(fi, hd.B), hc.Z) : z.zeroSpan(0);
    q.injective = true;
    for (std::size_t r = 0; r < K.rows.r; ++r)
      if (!z.contains(hc.B, K.rows.rowVec(r))) {
        q.injective = false;
        q.kernelClasses.push_back(K.rows.rowVec(r));
      }
    // surjectivity: f(Z_C) + B_D contains Z_D
    Mat img = z.mul(hc.Z.rows, fi);
    Howell S = z.sum(hd.B, img);
    q.surjective = z.subset(hd.Z, S);
    if (q.surjective && hd.Z.rows.r) {
      Solver sol(z, vstack(img, hd.B.rows));
      for (std::size_t r = 0; r < hd.Z.rows.r && r < 16; ++r) {
        auto x = sol.solve(hd.Z.rows.rowVec(r));
        Vec c(C.term(i).n, 0);
        for (std::size_t t = 0; t < hc.Z.rows.r; ++t) z.axpy(c, (*x)[t], hc.Z.rows.rowVec(t));
        q.preimages.push_back(C.term(i).reduce(c));
      }
    }
    if ((!q.injective || !q.surjective) && cert.ok) {
      cert.ok = false;
      cert.failingDegree = i;
      cert.reason = !q.injective ? "induced map on cohomology is not injective" : "induced map on cohomology is not surjective";
    }
    cert.degrees.push_back(std::move(q));
  }
  return cert;
}

std::vector<Howell> ringIdeals(const Ring& A) {
  const Zq& z = A.zq();
  const std::size_t k = A.dim();
  std::vector<Howell> ideals;
  auto add = [&](const Howell& h) {
    for (const auto& o : ideals)
      if (o == h) return false;
    ideals.push_back(h);
    return true;
  };
  auto principal = [&](const Elem& a) {
    std::vector<Vec> rows = {A.reduce(a)};
    for (std::size_t j = 0; j < k; ++j) rows.push_back(A.mul(a, A.monomial(A.basisExps()[j])));
    return z.sum(A.relations(), Mat::fromRows(rows, k));
  };
  for (const auto& a : A.elements()) add(principal(a));
  for (bool grew = true; grew;) {
    grew = false;
    std::size_t cnt = ideals.size();
    for (std::size_t i = 0; i < cnt; ++i)
      for (std::size_t j = i + 1; j < cnt; ++j)
        if (add(z.sum(ideals[i], ideals[j]))) grew = true;
  }
  return ideals;
}

TorDimensionReport checkTorDimension(const Complex& C, int N) {
  TorDimensionReport rep;
  const Ring& A = *C.ctx->A;
  const Zq& z = A.zq();
  for (const auto& I : ringIdeals(A)) {
    if (z.logSize(I) - z.logSize(A.relations()) == A.length()) continue;  // S = 0
    Complex S = C;
    S.terms.clear();
    for (int i = C.lo; i <= C.hi(); ++i) {
      const GModule& M = C.terms[static_cast<std::size_t>(i - C.lo)];
      std::vector<Vec> rows;
      for (std::size_t r = 0; r < I.rows.r; ++r) {
        Mat X = M.ringAction(I.rows.rowVec(r));
        for (std::size_t t = 0; t < M.n; ++t) rows.push_back(X.rowVec(t));
      }
      S.terms.push_back(quotientModule(M, Mat::fromRows(rows, M.n)));
    }
    for (int i = S.firstReliable(); i < N && i <= S.hi(); ++i) {
      if (cohomologyAt(S, i).logSize != 0) {
        rep.ok = false;
        rep.degree = i;
        std::string g;
        for (std::size_t r = 0; r < I.rows.r; ++r) g += (r ? ", " : "") + A.format(I.rows.rowVec(r));
        rep.testModule = "A/(" + (g.empty() ? std::string("0") : g) + ")";
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace hd
