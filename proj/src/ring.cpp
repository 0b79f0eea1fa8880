#include "hd/ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hd {

namespace {

void enumerateMonomials(std::size_t nv, int T, std::vector<Exps>& out) {
  // descending total degree, lexicographic within a degree; constant last
  for (int deg = T - 1; deg >= 0; --deg) {
    Exps e(nv, 0);
    std::vector<Exps> layer;
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
      if (i + 1 == nv) {
        e[i] = left;
        layer.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[i] = k;
        self(self, i + 1, left - k);
      }
    };
    if (nv == 0) {
      if (deg == 0) layer.push_back({});
    } else {
      rec(rec, 0, deg);
    }
    out.insert(out.end(), layer.begin(), layer.end());
  }
}

int degreeOf(const Exps& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

RingPtr Ring::quotient(Modulus mod, std::vector<std::string> vars, int truncation,
                       const std::vector<Poly>& relations) {
  if (truncation < 1) throw std::invalid_argument("quotientRing: truncation degree must be >= 1");
  if (vars.empty()) truncation = 1;
  std::shared_ptr<Ring> r(new Ring());
  r->zq_ = Zq(mod);
  r->vars_ = std::move(vars);
  r->T_ = truncation;
  r->relPolys_ = relations;
  r->build(relations);
  return r;
}

void Ring::build(const std::vector<Poly>& relations) {
  const std::size_t nv = vars_.size();
  enumerateMonomials(nv, T_, monos_);
  for (std::size_t i = 0; i < monos_.size(); ++i) monoIndex_[monos_[i]] = i;
  const std::size_t M = monos_.size();
  std::vector<Vec> rows;
  for (const Poly& f : relations) {
    for (const auto& [e, c] : f)
      if (e.size() != nv) throw std::invalid_argument("quotientRing: relation arity mismatch");
    for (const Exps& s : monos_) {
      Vec v(M, 0);
      bool any = false;
      for (const auto& [e, c] : f) {
        Exps t(nv);
        for (std::size_t k = 0; k < nv; ++k) t[k] = e[k] + s[k];
        if (degreeOf(t) >= T_) continue;
        std::size_t idx = monoIndex_.at(t);
        v[idx] = zq_.add(v[idx], zq_.fromInt(c));
        any = true;
      }
      if (any) rows.push_back(std::move(v));
    }
  }
  fullRel_ = zq_.howell(rows, M);
  constIndex_ = monoIndex_.at(Exps(nv, 0));
  {
    Vec one(M, 0);
    one[constIndex_] = 1;
    if (zq_.contains(fullRel_, one)) throw std::invalid_argument("quotientRing: inconsistent presentation (1 in ideal)");
  }
  std::vector<char> unitPivot(M, 0);
  for (std::size_t i = 0; i < fullRel_.size(); ++i)
    if (fullRel_.pivotVal[i] == 0) unitPivot[fullRel_.pivotCols[i]] = 1;
  std::vector<long> pos(M, -1);
  for (std::size_t i = 0; i < M; ++i)
    if (!unitPivot[i]) {
      pos[i] = static_cast<long>(keep_.size());
      keep_.push_back(i);
      basis_.push_back(monos_[i]);
    }
  const std::size_t K = keep_.size();
  std::vector<Vec> krows;
  for (std::size_t i = 0; i < fullRel_.size(); ++i) {
    if (fullRel_.pivotVal[i] == 0) continue;
    Vec v(K, 0);
    for (std::size_t j = 0; j < K; ++j) v[j] = fullRel_.rows(i, keep_[j]);
    krows.push_back(std::move(v));
  }
  rel_ = zq_.howell(krows, K);
  constIndex_ = static_cast<std::size_t>(pos[constIndex_]);

  auto monoElem = [&](const Exps& t) {
    Elem out(K, 0);
    if (degreeOf(t) >= T_) return out;
    Vec full(M, 0);
    full[monoIndex_.at(t)] = 1;
    full = zq_.reduce(fullRel_, full);
    for (std::size_t j = 0; j < K; ++j) out[j] = full[keep_[j]];
    return reduce(out);
  };
  table_.assign(K, std::vector<Elem>(K));
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      Exps t(nv);
      for (std::size_t k = 0; k < nv; ++k) t[k] = basis_[i][k] + basis_[j][k];
      table_[i][j] = monoElem(t);
    }
  // structure constants: commutativity and associativity on basis triples
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      if (!equal(table_[i][j], table_[j][i])) throw std::logic_error("ring: product not commutative");
      for (std::size_t k = 0; k < K; ++k) {
        Elem ek(K, 0), ei(K, 0);
        ek[k] = 1;
        ei[i] = 1;
        if (!equal(mul(table_[i][j], ek), mul(ei, table_[j][k]))) throw std::logic_error("ring: product not associative");
      }
    }
  for (std::size_t v = 0; v < nv; ++v) varMats_.push_back(mulMatrix(var(v)));
  for (std::size_t j = 0; j < K; ++j) {
    Elem e(K, 0);
    e[j] = 1;
    basisMats_.push_back(mulMatrix(e));
  }
  length_ = static_cast<long>(K) * zq_.m() - zq_.logSize(rel_);
  // nilpotency index of the maximal ideal
  std::vector<Vec> gens;
  for (std::size_t j = 0; j < K; ++j) {
    Elem e(K, 0);
    e[j] = (j == constIndex_) ? static_cast<u64>(zq_.p()) : 1;
    gens.push_back(reduce(e));
  }
  Howell mpow = zq_.sum(zq_.howell(gens, K), rel_.rows);
  Howell relOnly = rel_;
  nilIndex_ = 1;
  while (!zq_.subset(mpow, relOnly)) {
    std::vector<Vec> next;
    for (std::size_t i = 0; i < mpow.size(); ++i)
      for (const Vec& g : gens) next.push_back(mul(mpow.rows.rowVec(i), g));
    mpow = zq_.sum(zq_.howell(next, K), rel_.rows);
    ++nilIndex_;
    if (nilIndex_ > 1000) throw std::logic_error("ring: maximal ideal not nilpotent");
  }
}

std::string Ring::label(std::size_t i) const {
  const Exps& e = basis_[i];
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (!e[k]) continue;
    if (!s.empty()) s += "*";
    s += vars_[k];
    if (e[k] > 1) s += "^" + std::to_string(e[k]);
  }
  return s.empty() ? "1" : s;
}

Elem Ring::one() const {
  Elem e(dim(), 0);
  e[constIndex_] = 1;
  return reduce(e);
}

Elem Ring::constant(long long c) const {
  Elem e(dim(), 0);
  e[constIndex_] = zq_.fromInt(c);
  return reduce(e);
}

Elem Ring::monomial(const Exps& t) const {
  if (degreeOf(t) >= T_) return zero();
  Vec full(monos_.size(), 0);
  full[monoIndex_.at(t)] = 1;
  full = zq_.reduce(fullRel_, full);
  Elem out(dim(), 0);
  for (std::size_t j = 0; j < dim(); ++j) out[j] = full[keep_[j]];
  return reduce(out);
}

Elem Ring::var(std::size_t i) const {
  Exps e(vars_.size(), 0);
  e.at(i) = 1;
  return monomial(e);
}

Elem Ring::fromPoly(const Poly& p) const {
  Elem out = zero();
  for (const auto& [e, c] : p) zq_.axpy(out, zq_.fromInt(c), monomial(e));
  return reduce(out);
}

Elem Ring::mul(const Elem& a, const Elem& b) const {
  const std::size_t K = dim();
  Elem out(K, 0);
  for (std::size_t i = 0; i < K; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < K; ++j) {
      if (!b[j]) continue;
      zq_.axpy(out, zq_.mul(a[i], b[j]), table_[i][j]);
    }
  }
  return reduce(out);
}

Elem Ring::pow(const Elem& a, u64 e) const {
  Elem r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

bool Ring::isZero(const Elem& a) const {
  Elem r = reduce(a);
  return std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; });
}

u64 Ring::residue(const Elem& a) const { return reduce(a)[constIndex_] % zq_.p(); }

Elem Ring::inv(const Elem& a) const {
  if (!isUnit(a)) throw std::domain_error("invert: element is not a unit");
  // x * mu(a) = 1 modulo the additive relations
  Mat sys = vstack(mulMatrix(a), rel_.rows);
  auto x = zq_.solve(sys, one());
  if (!x) throw std::logic_error("invert: no solution for a unit");
  Elem r(x->begin(), x->begin() + dim());
  return reduce(r);
}

Mat Ring::mulMatrix(const Elem& a) const {
  Mat m(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Elem e(dim(), 0);
    e[i] = 1;
    m.setRow(i, mul(e, a));
  }
  return m;
}

std::vector<Elem> Ring::elements() const {
  const std::size_t K = dim();
  std::vector<u64> range(K, zq_.q());
  for (std::size_t i = 0; i < rel_.size(); ++i) range[rel_.pivotCols[i]] = zq_.ppow(rel_.pivotVal[i]);
  std::vector<Elem> out;
  Elem cur(K, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == K) {
      out.push_back(cur);
      return;
    }
    for (u64 v = 0; v < range[i]; ++v) {
      cur[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::string Ring::format(const Elem& a) const {
  Elem r = reduce(a);
  std::string s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!r[i]) continue;
    if (!s.empty()) s += " + ";
    std::string l = label(i);
    if (l == "1")
      s += std::to_string(r[i]);
    else if (r[i] == 1)
      s += l;
    else
      s += std::to_string(r[i]) + "*" + l;
  }
  return s.empty() ? "0" : s;
}

Exps Ring::parseMonomial(const std::string& s, const std::vector<std::string>& vars) {
  Exps e(vars.size(), 0);
  std::string t;
  for (char ch : s)
    if (ch != ' ') t += ch;
  if (t.empty() || t == "1") return e;
  std::stringstream ss(t);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    std::string name = factor;
    int power = 1;
    auto caret = factor.find('^');
    if (caret != std::string::npos) {
      name = factor.substr(0, caret);
      power = std::stoi(factor.substr(caret + 1));
    }
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw std::invalid_argument("unknown variable in monomial: " + name);
    e[it - vars.begin()] += power;
  }
  return e;
}

Poly Ring::parsePoly(const nlohmann::json& j, const std::vector<std::string>& vars) {
  if (!j.is_object()) throw std::invalid_argument("polynomial must be a monomial->coefficient map");
  Poly p;
  for (auto it = j.begin(); it != j.end(); ++it) p[parseMonomial(it.key(), vars)] += it.value().get<long long>();
  return p;
}

RingPtr Ring::fromJson(const nlohmann::json& j) {
  Modulus mod = Modulus::make(j.at("modulus").at("p").get<int>(), j.at("modulus").at("m").get<int>());
  std::vector<std::string> vars = j.value("variables", std::vector<std::string>{});
  int T = j.value("truncationDegree", 1);
  std::vector<Poly> rels;
  if (j.contains("relations"))
    for (const auto& r : j.at("relations")) rels.push_back(parsePoly(r, vars));
  auto r = quotient(mod, vars, T, rels);
  if (j.contains("name")) std::const_pointer_cast<Ring>(r)->setName(j.at("name").get<std::string>());
  return r;
}

nlohmann::json Ring::toJson() const {
  nlohmann::json j;
  j["modulus"] = {{"p", zq_.p()}, {"m", zq_.m()}};
  j["variables"] = vars_;
  j["truncationDegree"] = T_;
  nlohmann::json rels = nlohmann::json::array();
  for (const Poly& f : relPolys_) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [e, c] : f) {
      std::string s;
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (!e[k]) continue;
        if (!s.empty()) s += "*";
        s += vars_[k];
        if (e[k] > 1) s += "^" + std::to_string(e[k]);
      }
      o[s.empty() ? "1" : s] = c;
    }
    rels.push_back(o);
  }
  j["relations"] = rels;
  if (!name_.empty()) j["name"] = name_;
  return j;
}

Elem evalPoly(const Ring& A, const Poly& f, const std::vector<Elem>& values) {
  Elem out = A.zero();
  for (const auto& [e, c] : f) {
    if (e.size() != values.size()) throw std::invalid_argument("evalPoly: arity mismatch");
    Elem t = A.constant(c);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k]) t = A.mul(t, A.pow(values[k], static_cast<u64>(e[k])));
    out = A.add(out, t);
  }
  return out;
}

// ---------------------------------------------------------------- series

TruncatedSeries TruncatedSeries::zero(RingPtr A, int T) {
  TruncatedSeries s;
  s.c.assign(T, A->zero());
  s.ring = std::move(A);
  s.T = T;
  return s;
}

TruncatedSeries TruncatedSeries::fromCoeffs(RingPtr A, int T, const std::vector<Elem>& cs) {
  TruncatedSeries s = zero(A, T);
  for (std::size_t i = 0; i < cs.size() && static_cast<int>(i) < T; ++i) s.c[i] = A->reduce(cs[i]);
  return s;
}

TruncatedSeries TruncatedSeries::add(const TruncatedSeries& o) const {
  TruncatedSeries s = *this;
  for (int i = 0; i < T; ++i) s.c[i] = ring->add(c[i], o.c[i]);
  return s;
}

TruncatedSeries TruncatedSeries::sub(const TruncatedSeries& o) const {
  TruncatedSeries s = *this;
  for (int i = 0; i < T; ++i) s.c[i] = ring->sub(c[i], o.c[i]);
  return s;
}

TruncatedSeries TruncatedSeries::mul(const TruncatedSeries& o) const {
  TruncatedSeries s = zero(ring, T);
  for (int i = 0; i < T; ++i) {
    if (ring->isZero(c[i])) continue;
    for (int j = 0; i + j < T; ++j) {
      if (ring->isZero(o.c[j])) continue;
      s.c[i + j] = ring->add(s.c[i + j], ring->mul(c[i], o.c[j]));
    }
  }
  return s;
}

TruncatedSeries TruncatedSeries::inverse() const {
  const Ring& A = *ring;
  Elem inv0 = A.inv(c[0]);
  TruncatedSeries s = zero(ring, T);
  s.c[0] = inv0;
  for (int k = 1; k < T; ++k) {
    Elem acc = A.zero();
    for (int i = 1; i <= k; ++i) acc = A.add(acc, A.mul(c[i], s.c[k - i]));
    s.c[k] = A.neg(A.mul(acc, inv0));
  }
  return s;
}

bool TruncatedSeries::equal(const TruncatedSeries& o) const {
  if (T != o.T) return false;
  for (int i = 0; i < T; ++i)
    if (!ring->equal(c[i], o.c[i])) return false;
  return true;
}

int TruncatedSeries::degree() const {
  for (int i = T - 1; i >= 0; --i)
    if (!ring->isZero(c[i])) return i;
  return -1;
}

std::string TruncatedSeries::format() const {
  std::string s;
  for (int i = 0; i < T; ++i) {
    if (ring->isZero(c[i])) continue;
    if (!s.empty()) s += " + ";
    s += "(" + ring->format(c[i]) + ")";
    if (i == 1) s += "x";
    if (i > 1) s += "x^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

int distinguishedDegree(const TruncatedSeries& f) {
  for (int i = 0; i < f.T; ++i)
    if (f.ring->isUnit(f.c[i])) return i;
  throw std::domain_error("weierstrass: series vanishes modulo the maximal ideal up to truncation");
}

std::vector<Elem> polyMul(const Ring& A, const std::vector<Elem>& a, const std::vector<Elem>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Elem> out(a.size() + b.size() - 1, A.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = A.add(out[i + j], A.mul(a[i], b[j]));
  return out;
}

std::pair<std::vector<Elem>, std::vector<Elem>> polyDivMonic(const Ring& A, const std::vector<Elem>& a,
                                                             const std::vector<Elem>& monic) {
  const std::size_t n = monic.size() - 1;
  std::vector<Elem> r = a;
  std::vector<Elem> q;
  if (r.size() > n) q.assign(r.size() - n, A.zero());
  for (std::size_t k = r.size(); k-- > n;) {
    Elem lead = r[k];
    if (A.isZero(lead)) continue;
    q[k - n] = lead;
    for (std::size_t i = 0; i <= n; ++i) r[k - n + i] = A.sub(r[k - n + i], A.mul(lead, monic[i]));
  }
  r.resize(std::min(r.size(), n), A.zero());
  while (r.size() < n) r.push_back(A.zero());
  return {q, r};
}

WeierstrassFactorization weierstrass(const TruncatedSeries& f) {
  const Ring& A = *f.ring;
  const int n = distinguishedDegree(f);
  const int T = f.T;
  WeierstrassFactorization w;
  w.n = n;
  if (n == 0) {
    w.h = {A.one()};
    w.u = f;
    return w;
  }
  // f = L + x^n U; iterate w_{k+1} = high_n(x^n - w_k U^{-1} L) over the m_A-adic filtration
  const int N = A.nilpotencyIndex();
  const int P = std::max(T, (N + 3) * n + 1);
  TruncatedSeries U = TruncatedSeries::zero(f.ring, P), L = TruncatedSeries::zero(f.ring, P);
  for (int i = 0; i < T; ++i) {
    if (i < n)
      L.c[i] = f.c[i];
    else
      U.c[i - n] = f.c[i];
  }
  TruncatedSeries S = U.inverse().mul(L);
  TruncatedSeries g = TruncatedSeries::zero(f.ring, P);
  g.c[n] = A.one();
  TruncatedSeries wk = TruncatedSeries::zero(f.ring, P);
  for (int it = 0; it <= N + 1; ++it) {
    TruncatedSeries t = g.sub(wk.mul(S));
    TruncatedSeries nw = TruncatedSeries::zero(f.ring, P);
    for (int i = n; i < P; ++i) nw.c[i - n] = t.c[i];
    wk = nw;
  }
  TruncatedSeries rem = g.sub(wk.mul(S));
  w.h.assign(n + 1, A.zero());
  for (int i = 0; i < n; ++i) w.h[i] = A.neg(rem.c[i]);
  w.h[n] = A.one();
  // u = f / h exactly as polynomials
  std::vector<Elem> fp(f.c.begin(), f.c.end());
  auto [quo, r] = polyDivMonic(A, fp, w.h);
  for (const Elem& e : r)
    if (!A.isZero(e)) throw std::logic_error("weierstrass: preparation failed to divide");
  w.u = TruncatedSeries::fromCoeffs(f.ring, T, quo);
  if (!A.isUnit(w.u.c[0])) throw std::logic_error("weierstrass: unit part not a unit");
  for (int i = 0; i < n; ++i)
    if (!A.inMaximalIdeal(w.h[i])) throw std::logic_error("weierstrass: non-leading coefficient not in m_A");
  return w;
}

std::pair<TruncatedSeries, std::vector<Elem>> weierstrassDivide(const TruncatedSeries& g,
                                                               const TruncatedSeries& f) {
  const Ring& A = *f.ring;
  WeierstrassFactorization w = weierstrass(f);
  std::vector<Elem> gp(g.c.begin(), g.c.end());
  auto [Q, r] = polyDivMonic(A, gp, w.h);
  TruncatedSeries q = TruncatedSeries::fromCoeffs(f.ring, f.T, Q).mul(w.u.inverse());
  return {q, r};
}

// ---------------------------------------------------------------- tables

int RingTable::index(const Elem& e) const {
  auto it = idx_.find(ring->reduce(e));
  if (it == idx_.end()) throw std::out_of_range("RingTable: element not found");
  return it->second;
}

int RingTable::fromInt(long long c) const { return index(ring->constant(c)); }

std::vector<int> RingTable::maximalIdeal() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (!unit[i]) out.push_back(static_cast<int>(i));
  return out;
}

RingTable RingTable::build(RingPtr A) {
  RingTable t;
  t.ring = A;
  t.elems = A->elements();
  for (std::size_t i = 0; i < t.elems.size(); ++i) t.idx_[t.elems[i]] = static_cast<int>(i);
  const std::size_t n = t.elems.size();
  t.addT.assign(n, std::vector<int>(n));
  t.mulT.assign(n, std::vector<int>(n));
  t.negT.resize(n);
  t.unit.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.negT[i] = t.index(A->neg(t.elems[i]));
    t.unit[i] = A->isUnit(t.elems[i]);
    for (std::size_t j = 0; j < n; ++j) {
      t.addT[i][j] = t.index(A->add(t.elems[i], t.elems[j]));
      t.mulT[i][j] = t.index(A->mul(t.elems[i], t.elems[j]));
    }
  }
  t.zero = t.index(A->zero());
  t.one = t.index(A->one());
  return t;
}

namespace {
RingPtr named(RingPtr r, const char* n) {
  std::const_pointer_cast<Ring>(r)->setName(n);
  return r;
}
}  // namespace

RingPtr Ring::zmod(int p, int m) {
  auto r = quotient(Modulus::make(p, m), {}, 1, {});
  long q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  std::const_pointer_cast<Ring>(r)->setName(m == 1 ? "F" + std::to_string(p) : "Z/" + std::to_string(q));
  return r;
}

RingPtr ringF2() { return named(Ring::zmod(2, 1), "F2"); }
RingPtr ringZ4() { return named(Ring::zmod(2, 2), "Z/4"); }
RingPtr ringDual() { return named(Ring::quotient(Modulus::make(2, 1), {"e"}, 2, {}), "F2[e]/(e^2)"); }
RingPtr ringF2u3() { return named(Ring::quotient(Modulus::make(2, 1), {"u"}, 3, {}), "F2[u]/(u^3)"); }
RingPtr ringZ4u() {
  return named(Ring::quotient(Modulus::make(2, 2), {"u"}, 3, {Poly{{{2}, 1}}, Poly{{{1}, 2}}}), "Z/4[u]/(u^2,2u)");
}

}  // namespace hd
