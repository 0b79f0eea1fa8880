#include "hd/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace hd {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

long long modpow(long long b, long long e, long long m) {
  if (m == 1) return 0;
  long long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = static_cast<long long>((__int128)r * b % m);
    b = static_cast<long long>((__int128)b * b % m);
    e >>= 1;
  }
  return r;
}

long long modinv(long long a, long long m) {
  long long g = m, x = 0, x1 = 1, aa = ((a % m) + m) % m;
  while (aa) {
    long long t = g / aa;
    g -= t * aa;
    std::swap(g, aa);
    x -= t * x1;
    std::swap(x, x1);
  }
  if (g != 1) throw std::invalid_argument("group model: non-invertible exponent");
  return ((x % m) + m) % m;
}

bool isPrime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

GroupModel GroupModel::fromJson(const nlohmann::json& j) {
  GroupModel g;
  std::string c = j.value("case", std::string("A"));
  if (c != "A" && c != "B") throw std::invalid_argument("group model: case must be A or B");
  g.kase = c[0];
  g.p = j.value("p", 2);
  g.ell = j.value("ell", 3);
  g.f = j.value("f", 1);
  g.d = j.value("d", 1);
  g.r = j.value("r", g.kase == 'B' ? 1 : 0);
  g.level = j.value("level", 1);
  g.s = j.value("s", 1);
  g.w2Level = j.value("w2Level", 1);
  g.tildeDelta1 = j.value("tildeDelta1", std::vector<int>{});
  g.Q = j.value("Q", std::vector<int>{});
  g.Qprime = j.value("Qprime", std::vector<int>{});
  return g;
}

nlohmann::json GroupModel::toJson() const {
  return {{"case", std::string(1, kase)}, {"p", p},          {"ell", ell},         {"f", f},
          {"d", d},                      {"r", r},          {"level", level},     {"s", s},
          {"w2Level", w2Level},          {"tildeDelta1", tildeDelta1}, {"Q", Q}, {"Qprime", Qprime}};
}

GroupModel GroupModel::named(const std::string& name, int level) {
  GroupModel g;
  g.kase = 'A';
  g.p = 2;
  g.level = level;
  if (name == "Z2xZ2") {
    g.s = 1;
    g.Q = {2};
  } else if (name == "Z/2") {
    g.s = 0;
    g.Q = {2};
  } else if (name == "Z2") {
    g.s = 1;
  } else {
    throw std::invalid_argument("unknown group name: " + name);
  }
  return g;
}

GroupPtr FiniteGroup::trivial() {
  GroupModel m;
  m.s = 0;
  return realize(m);
}

GroupPtr FiniteGroup::realize(const GroupModel& model) {
  std::shared_ptr<FiniteGroup> G(new FiniteGroup());
  G->model_ = model;
  const int p = model.p;
  if (!isPrime(p)) throw std::invalid_argument("group model: p must be prime");
  if (model.level < 0) throw std::invalid_argument("group model: negative level");
  const long long pl = ipow(p, model.level);
  if (model.kase == 'A') {
    for (int i = 0; i < model.s; ++i) {
      G->radix_.push_back(pl);
      G->genNames_.push_back(model.s == 1 ? "w1" : "w1_" + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < model.Q.size(); ++i) {
      long long o = model.Q[i];
      long long t = o;
      while (t % p == 0) t /= p;
      if (o < 1 || t != 1) throw std::invalid_argument("group model: Q orders must be powers of p");
      G->radix_.push_back(o);
      G->genNames_.push_back(model.Q.size() == 1 ? "w2" : "w2_" + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < model.Qprime.size(); ++i) {
      long long o = model.Qprime[i];
      if (o < 1 || o % p == 0) throw std::invalid_argument("group model: Q' orders must be prime to p");
      G->radix_.push_back(o);
      G->genNames_.push_back("v" + std::to_string(i + 1));
    }
    G->order_ = 1;
    for (long long o : G->radix_) G->order_ *= static_cast<std::size_t>(o);
    for (std::size_t i = 0; i < G->radix_.size(); ++i) {
      std::vector<long long> x(G->radix_.size(), 0);
      x[i] = 1;
      G->genElems_.push_back(G->encode(x));
      G->genOrders_.push_back(static_cast<std::size_t>(G->radix_[i]));
    }
  } else {
    if (!isPrime(model.ell) || model.ell == p) throw std::invalid_argument("group model: ell must be a prime different from p");
    if (model.d < 1 || model.d % p == 0) throw std::invalid_argument("group model: d must be prime to p");
    if (model.r < 1) throw std::invalid_argument("group model: case B needs r >= 1");
    const long long q = ipow(model.ell, model.f);
    G->topOrder_ = model.d * pl;
    G->radix_.push_back(G->topOrder_);
    const long long w2o = ipow(p, model.w2Level);
    for (int j = 0; j < model.r; ++j) G->radix_.push_back(w2o);
    for (int o : model.tildeDelta1) {
      if (o < 1 || o % p == 0 || o % model.ell == 0)
        throw std::invalid_argument("group model: tilde Delta_1 orders must be prime to p and ell");
      G->radix_.push_back(o);
    }
    // congruence condition for the quotient to exist at this level
    for (std::size_t i = 1; i < G->radix_.size(); ++i) {
      long long o = G->radix_[i];
      if (modpow(q, G->topOrder_, o) != 1 % o)
        throw std::invalid_argument("group model: level violates the congruence condition ell^(f*d*p^level) = 1");
    }
    G->qinvPow_.assign(G->radix_.size(), {});
    for (std::size_t i = 1; i < G->radix_.size(); ++i) {
      long long o = G->radix_[i];
      long long qi = (o == 1) ? 0 : modinv(q % o, o);
      auto& tab = G->qinvPow_[i];
      tab.resize(G->topOrder_);
      long long cur = 1 % o;
      for (long long t = 0; t < G->topOrder_; ++t) {
        tab[t] = cur;
        cur = (o == 1) ? 0 : cur * qi % o;
      }
    }
    G->order_ = 1;
    for (long long o : G->radix_) G->order_ *= static_cast<std::size_t>(o);
    std::vector<long long> x(G->radix_.size(), 0);
    x[0] = model.d % G->topOrder_;
    G->genNames_.push_back("w1");
    G->genElems_.push_back(G->encode(x));
    G->genOrders_.push_back(static_cast<std::size_t>(pl));
    if (model.d > 1) {
      long long cL = pl * modinv(pl % model.d, model.d);
      x[0] = cL % G->topOrder_;
      G->genNames_.push_back("sigma");
      G->genElems_.push_back(G->encode(x));
      G->genOrders_.push_back(static_cast<std::size_t>(model.d));
    }
    x[0] = 0;
    for (int j = 0; j < model.r; ++j) {
      std::vector<long long> y(G->radix_.size(), 0);
      y[1 + j] = 1;
      G->genNames_.push_back(model.r == 1 ? "w2" : "w2_" + std::to_string(j + 1));
      G->genElems_.push_back(G->encode(y));
      G->genOrders_.push_back(static_cast<std::size_t>(w2o));
    }
    for (std::size_t i = 0; i < model.tildeDelta1.size(); ++i) {
      std::vector<long long> y(G->radix_.size(), 0);
      y[1 + model.r + i] = 1;
      G->genNames_.push_back("xi" + std::to_string(i + 1));
      G->genElems_.push_back(G->encode(y));
      G->genOrders_.push_back(static_cast<std::size_t>(model.tildeDelta1[i]));
    }
  }
  G->finish();
  // relation checks
  for (std::size_t i = 0; i < G->numGens(); ++i) {
    int g = G->gen(i);
    std::size_t o = G->genOrders_[i];
    if (G->pow(g, static_cast<long long>(o)) != 0) throw std::logic_error("group: generator order relation fails");
    for (std::size_t k = 1; k < o; ++k)
      if (o % k == 0 && G->pow(g, static_cast<long long>(k)) == 0) throw std::logic_error("group: generator order too small");
  }
  if (model.kase == 'A') {
    for (std::size_t i = 0; i < G->numGens(); ++i)
      for (std::size_t j = 0; j < G->numGens(); ++j)
        if (G->mul(G->gen(i), G->gen(j)) != G->mul(G->gen(j), G->gen(i))) throw std::logic_error("group: not abelian");
  } else {
    const long long q = ipow(model.ell, model.f);
    int w1 = G->gen(0);
    int w1i = G->inv(w1);
    for (int j = 0; j < model.r; ++j) {
      int w2 = G->gen(G->genIndex(model.r == 1 ? "w2" : "w2_" + std::to_string(j + 1)));
      long long o = G->radix_[1 + j];
      long long e = modpow(q, model.d, o);
      if (G->mul(G->mul(w1, w2), w1i) != G->pow(w2, e)) throw std::logic_error("group: w1 conjugation relation fails");
      if (model.d > 1) {
        int sg = G->gen(1);
        long long cL = pl * modinv(pl % model.d, model.d);
        long long es = modpow(q, cL, o);
        if (G->mul(G->mul(sg, w2), G->inv(sg)) != G->pow(w2, es)) throw std::logic_error("group: sigma relation fails");
      }
    }
    if (model.d > 1 && G->mul(w1, G->gen(1)) != G->mul(G->gen(1), w1)) throw std::logic_error("group: w1, sigma do not commute");
    if (G->pow(G->phiBar(), model.d) != w1) throw std::logic_error("group: Phi^d != w1");
  }
  if (G->bfs_.size() != G->order_) throw std::logic_error("group: generators do not generate");
  return G;
}

void FiniteGroup::finish() {
  leftGen_.assign(numGens(), std::vector<int>(order_));
  for (std::size_t s = 0; s < numGens(); ++s)
    for (std::size_t g = 0; g < order_; ++g) leftGen_[s][g] = mul(genElems_[s], static_cast<int>(g));
  parent_.assign(order_, -1);
  parentGen_.assign(order_, -1);
  std::vector<char> seen(order_, 0);
  std::deque<int> dq{0};
  seen[0] = 1;
  while (!dq.empty()) {
    int g = dq.front();
    dq.pop_front();
    bfs_.push_back(g);
    for (std::size_t s = 0; s < numGens(); ++s) {
      int h = leftGen_[s][g];
      if (seen[h]) continue;
      seen[h] = 1;
      parent_[h] = g;
      parentGen_[h] = static_cast<int>(s);
      dq.push_back(h);
    }
  }
}

int FiniteGroup::genIndex(const std::string& name) const {
  auto it = std::find(genNames_.begin(), genNames_.end(), name);
  if (it == genNames_.end()) throw std::out_of_range("group: no generator " + name);
  return static_cast<int>(it - genNames_.begin());
}

std::vector<long long> FiniteGroup::decode(int g) const {
  std::vector<long long> x(radix_.size());
  long long t = g;
  for (std::size_t i = radix_.size(); i-- > 0;) {
    x[i] = t % radix_[i];
    t /= radix_[i];
  }
  return x;
}

int FiniteGroup::encode(const std::vector<long long>& x) const {
  long long t = 0;
  for (std::size_t i = 0; i < radix_.size(); ++i) {
    long long v = x[i] % radix_[i];
    if (v < 0) v += radix_[i];
    t = t * radix_[i] + v;
  }
  return static_cast<int>(t);
}

int FiniteGroup::mul(int a, int b) const {
  auto x = decode(a), y = decode(b);
  std::vector<long long> z(radix_.size());
  if (model_.kase == 'A') {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
  } else {
    z[0] = x[0] + y[0];
    long long t = y[0];
    for (std::size_t i = 1; i < z.size(); ++i) z[i] = x[i] * qinvPow_[i][t] % radix_[i] + y[i];
  }
  return encode(z);
}

int FiniteGroup::inv(int a) const {
  auto x = decode(a);
  std::vector<long long> z(radix_.size());
  if (model_.kase == 'A') {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = -x[i];
  } else {
    z[0] = -x[0];
    long long t = ((-x[0]) % topOrder_ + topOrder_) % topOrder_;
    for (std::size_t i = 1; i < z.size(); ++i) z[i] = -(x[i] * qinvPow_[i][t] % radix_[i]);
  }
  return encode(z);
}

int FiniteGroup::pow(int a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  int r = 0, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

int FiniteGroup::phiBar() const {
  if (model_.kase != 'B') throw std::logic_error("phiBar: case B only");
  std::vector<long long> x(radix_.size(), 0);
  x[0] = 1 % topOrder_;
  return encode(x);
}

std::string FiniteGroup::format(int g) const {
  auto x = decode(g);
  std::string s;
  auto term = [&](const std::string& n, long long e) {
    if (!e) return;
    if (!s.empty()) s += "*";
    s += n;
    if (e != 1) s += "^" + std::to_string(e);
  };
  if (model_.kase == 'A') {
    for (std::size_t i = 0; i < x.size(); ++i) term(genNames_[i], x[i]);
  } else {
    term("Phi", x[0]);
    for (int j = 0; j < model_.r; ++j) term(model_.r == 1 ? "w2" : "w2_" + std::to_string(j + 1), x[1 + j]);
    for (std::size_t i = 0; i < model_.tildeDelta1.size(); ++i) term("xi" + std::to_string(i + 1), x[1 + model_.r + i]);
  }
  return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------- group algebra

Vec GroupAlgebra::element(int g, const Elem& coeff) const {
  Vec v = zero();
  Elem c = A_->reduce(coeff);
  std::copy(c.begin(), c.end(), v.begin() + static_cast<std::size_t>(g) * A_->dim());
  return v;
}

Elem GroupAlgebra::coeff(const Vec& x, int g) const {
  std::size_t k = A_->dim();
  return Elem(x.begin() + g * k, x.begin() + (g + 1) * k);
}

Vec GroupAlgebra::reduce(const Vec& x) const {
  Vec v = x;
  std::size_t k = A_->dim();
  for (std::size_t g = 0; g < G_->order(); ++g) {
    Elem e = A_->reduce(Elem(v.begin() + g * k, v.begin() + (g + 1) * k));
    std::copy(e.begin(), e.end(), v.begin() + g * k);
  }
  return v;
}

Vec GroupAlgebra::add(const Vec& x, const Vec& y) const { return reduce(A_->zq().add(x, y)); }
Vec GroupAlgebra::sub(const Vec& x, const Vec& y) const { return reduce(A_->zq().sub(x, y)); }

Vec GroupAlgebra::scale(const Vec& x, const Elem& a) const {
  Vec v = zero();
  for (std::size_t g = 0; g < G_->order(); ++g) {
    Elem e = A_->mul(coeff(x, static_cast<int>(g)), a);
    std::copy(e.begin(), e.end(), v.begin() + g * A_->dim());
  }
  return v;
}

Vec GroupAlgebra::mul(const Vec& x, const Vec& y) const {
  const std::size_t n = G_->order(), k = A_->dim();
  std::vector<int> sx, sy;
  for (std::size_t g = 0; g < n; ++g) {
    if (!A_->isZero(coeff(x, static_cast<int>(g)))) sx.push_back(static_cast<int>(g));
    if (!A_->isZero(coeff(y, static_cast<int>(g)))) sy.push_back(static_cast<int>(g));
  }
  Vec out = zero();
  for (int g : sx) {
    Elem a = coeff(x, g);
    for (int h : sy) {
      Elem p = A_->mul(a, coeff(y, h));
      std::size_t gh = static_cast<std::size_t>(G_->mul(g, h));
      for (std::size_t j = 0; j < k; ++j) out[gh * k + j] = A_->zq().add(out[gh * k + j], p[j]);
    }
  }
  return reduce(out);
}

Vec GroupAlgebra::pow(const Vec& x, unsigned e) const {
  Vec r = groupElement(0), b = x;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Elem GroupAlgebra::augmentation(const Vec& x) const {
  Elem s = A_->zero();
  for (std::size_t g = 0; g < G_->order(); ++g) s = A_->add(s, coeff(x, static_cast<int>(g)));
  return s;
}

bool GroupAlgebra::equal(const Vec& x, const Vec& y) const { return reduce(x) == reduce(y); }

// ---------------------------------------------------------------- normal forms

NormalFormBasis::NormalFormBasis(RingPtr A, GroupPtr G, int s, bool rightHanded)
    : alg_(std::move(A), std::move(G)), s_(s) {
  const FiniteGroup& g = alg_.group();
  const GroupModel& m = g.model();
  if (m.kase != 'B' || m.r != 1) throw std::invalid_argument("normal form: case B model with r = 1 required");
  if (s < 0 || s > m.w2Level) throw std::invalid_argument("normal form: need 0 <= s <= w2 level");
  const Zq& zq = alg_.ring().zq();
  const long long ps = ipow(m.p, s), pl = ipow(m.p, m.level), pc = ipow(m.p, m.w2Level - s);
  std::size_t nxi = 1;
  for (int o : m.tildeDelta1) nxi *= static_cast<std::size_t>(o);
  // binomial expansions of (y-1)^k over Z/q, as coefficient lists on y^i
  auto binomRows = [&](long long K) {
    std::vector<Vec> rows(K);
    Vec cur{1};
    for (long long k = 0; k < K; ++k) {
      rows[k] = cur;
      Vec nx(cur.size() + 1, 0);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        nx[i + 1] = zq.add(nx[i + 1], cur[i]);
        nx[i] = zq.sub(nx[i], cur[i]);
      }
      cur = nx;
    }
    return rows;
  };
  auto bw1 = binomRows(pl);
  auto bw2 = binomRows(pc);
  const int w1 = g.gen(g.genIndex("w1"));
  const int w2 = g.gen(g.genIndex("w2"));
  const int sigma = m.d > 1 ? g.gen(g.genIndex("sigma")) : 0;
  const int w2ps = g.pow(w2, ps);
  std::vector<int> xis;
  for (std::size_t t = 0; t < nxi; ++t) {
    std::vector<long long> x(1 + m.r + m.tildeDelta1.size(), 0);
    std::size_t rest = t;
    for (std::size_t i = m.tildeDelta1.size(); i-- > 0;) {
      x[1 + m.r + i] = static_cast<long long>(rest % m.tildeDelta1[i]);
      rest /= m.tildeDelta1[i];
    }
    xis.push_back(g.encode(x));
  }
  const std::size_t N = g.order();
  C_ = Mat(N, N);
  std::size_t row = 0;
  for (int u = 0; u < m.d; ++u)
    for (long long a = 0; a < pl; ++a)
      for (std::size_t xi = 0; xi < nxi; ++xi)
        for (long long b = 0; b < ps; ++b)
          for (long long c = 0; c < pc; ++c) {
            labels_.push_back({u, static_cast<int>(a), static_cast<int>(xi), static_cast<int>(b), static_cast<int>(c)});
            int su = g.pow(sigma, u), xb = g.mul(xis[xi], g.pow(w2, b));
            for (std::size_t i = 0; i < bw1[a].size(); ++i) {
              if (!bw1[a][i]) continue;
              for (std::size_t j = 0; j < bw2[c].size(); ++j) {
                if (!bw2[c][j]) continue;
                int w1i = g.pow(w1, static_cast<long long>(i)), w2j = g.pow(w2ps, static_cast<long long>(j));
                int el = rightHanded ? g.mul(g.mul(g.mul(w2j, xb), w1i), su) : g.mul(g.mul(g.mul(su, w1i), xb), w2j);
                C_(row, el) = zq.add(C_(row, el), zq.mul(bw1[a][i], bw2[c][j]));
              }
            }
            ++row;
          }
  auto inv = zq.inverse(C_);
  invertible_ = inv.has_value();
  if (invertible_) Cinv_ = *inv;
}

std::size_t NormalFormBasis::labelIndex(const NFLabel& l) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) return i;
  throw std::out_of_range("normal form: unknown label");
}

Vec NormalFormBasis::toNormalForm(const Vec& x) const {
  if (!invertible_) throw std::logic_error("normal form: change of basis not invertible");
  const Ring& A = alg_.ring();
  const std::size_t N = labels_.size(), k = A.dim();
  Vec out(N * k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    Vec col(N);
    for (std::size_t g = 0; g < N; ++g) col[g] = x[g * k + j];
    Vec z = A.zq().mul(col, Cinv_);
    for (std::size_t l = 0; l < N; ++l) out[l * k + j] = z[l];
  }
  for (std::size_t l = 0; l < N; ++l) {
    Elem e = A.reduce(Elem(out.begin() + l * k, out.begin() + (l + 1) * k));
    std::copy(e.begin(), e.end(), out.begin() + l * k);
  }
  return out;
}

Vec NormalFormBasis::fromNormalForm(const Vec& z) const {
  const Ring& A = alg_.ring();
  const std::size_t N = labels_.size(), k = A.dim();
  Vec out(N * k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    Vec col(N);
    for (std::size_t l = 0; l < N; ++l) col[l] = z[l * k + j];
    Vec x = A.zq().mul(col, C_);
    for (std::size_t g = 0; g < N; ++g) out[g * k + j] = x[g];
  }
  return alg_.reduce(out);
}

nlohmann::json CommuteCertificate::toJson() const {
  return {{"N", N}, {"Nprime", Nprime}, {"conjugationIdentity", conjugationIdentity},
          {"literalIdentity", literalIdentity}, {"factorIdentity", factorIdentity}, {"twoSided", twoSided}};
}

CommuteCertificate commuteIdealGenerator(RingPtr A, GroupPtr G, int N, int Nprime) {
  GroupAlgebra B(A, G);
  const FiniteGroup& g = *G;
  const GroupModel& m = g.model();
  if (m.kase != 'B') throw std::invalid_argument("commuteIdealGenerator: case B only");
  const long long q = ipow(m.ell, m.f);
  const int w2 = g.gen(g.genIndex(m.r == 1 ? "w2" : "w2_1"));
  const Vec one = B.groupElement(0);
  const Vec phi = B.groupElement(g.phiBar()), phiInv = B.groupElement(g.inv(g.phiBar()));
  auto gen = [&](long long e) { return B.pow(B.sub(B.groupElement(g.pow(w2, e)), one), static_cast<unsigned>(Nprime)); };
  Vec e = gen(N), eq = gen(q * N);
  CommuteCertificate c;
  c.N = N;
  c.Nprime = Nprime;
  Vec lhs = B.mul(e, phiInv);
  c.conjugationIdentity = B.equal(lhs, B.mul(phiInv, eq));
  c.literalIdentity = B.equal(lhs, B.mul(phi, eq));
  Vec geo = B.zero();
  for (long long i = 0; i < q; ++i) geo = B.add(geo, B.groupElement(g.pow(w2, i * N)));
  Vec base = B.sub(B.groupElement(g.pow(w2, N)), one);
  c.factorIdentity = B.equal(B.sub(B.groupElement(g.pow(w2, q * N)), one), B.mul(geo, base));
  std::vector<Vec> left, right;
  for (std::size_t h = 0; h < g.order(); ++h)
    for (std::size_t j = 0; j < A->dim(); ++j) {
      Elem bj(A->dim(), 0);
      bj[j] = 1;
      Vec x = B.element(static_cast<int>(h), bj);
      left.push_back(B.mul(x, e));
      right.push_back(B.mul(e, x));
    }
  const Zq& zq = A->zq();
  Howell lrel, rrel;
  // spans taken modulo the additive relations of A in each coordinate block
  std::vector<Vec> relRows;
  for (std::size_t h = 0; h < g.order(); ++h)
    for (std::size_t i = 0; i < A->relations().size(); ++i) {
      Vec v = B.zero();
      for (std::size_t j = 0; j < A->dim(); ++j) v[h * A->dim() + j] = A->relations().rows(i, j);
      relRows.push_back(v);
    }
  left.insert(left.end(), relRows.begin(), relRows.end());
  right.insert(right.end(), relRows.begin(), relRows.end());
  lrel = zq.howell(left, B.dim());
  rrel = zq.howell(right, B.dim());
  c.twoSided = lrel == rrel;
  return c;
}

}  // namespace hd
