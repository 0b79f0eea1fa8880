#include "hd/zq.hpp"

#include <algorithm>

namespace hd {

void Mat::setRow(std::size_t i, const Vec& v) { std::copy(v.begin(), v.end(), row(i)); }

void Mat::appendRow(const Vec& v) {
  if (r == 0 && c == 0) c = v.size();
  if (v.size() != c) throw std::invalid_argument("appendRow: width mismatch");
  a.insert(a.end(), v.begin(), v.end());
  ++r;
}

bool Mat::isZero() const {
  return std::all_of(a.begin(), a.end(), [](u64 x) { return x == 0; });
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::fromRows(const std::vector<Vec>& rows, std::size_t cols) {
  Mat m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.setRow(i, rows[i]);
  return m;
}

Modulus Modulus::make(int p, int m) {
  if (p < 2 || m < 1) throw std::invalid_argument("modulus: need prime p and m >= 1");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("modulus: p not prime");
  Modulus r;
  r.p = p;
  r.m = m;
  r.q = 1;
  for (int i = 0; i < m; ++i) {
    r.q *= static_cast<u64>(p);
    if (r.q > (1ull << 30)) throw std::invalid_argument("modulus too large");
  }
  return r;
}

Zq::Zq(Modulus mod) : mod_(mod) {
  pow2_ = (mod_.q & (mod_.q - 1)) == 0;
  mask_ = mod_.q - 1;
}

u64 Zq::fromInt(long long x) const {
  long long q = static_cast<long long>(mod_.q);
  long long r = x % q;
  if (r < 0) r += q;
  return static_cast<u64>(r);
}

int Zq::val(u64 x) const {
  if (x == 0) return mod_.m;
  int v = 0;
  while (x % mod_.p == 0) {
    x /= mod_.p;
    ++v;
  }
  return v;
}

u64 Zq::ppow(int v) const {
  u64 r = 1;
  for (int i = 0; i < v; ++i) r *= mod_.p;
  return r;
}

u64 Zq::invUnit(u64 u) const {
  // extended Euclid
  long long a = static_cast<long long>(red(u)), b = static_cast<long long>(mod_.q);
  long long x0 = 1, x1 = 0;
  while (b) {
    long long t = a / b;
    a -= t * b;
    std::swap(a, b);
    x0 -= t * x1;
    std::swap(x0, x1);
  }
  if (a != 1) throw std::domain_error("invUnit: not a unit");
  return fromInt(x0);
}

Mat Zq::mul(const Mat& x, const Mat& y) const {
  if (x.c != y.r) throw std::invalid_argument("mul: shape mismatch");
  Mat z(x.r, y.c);
  std::vector<u64> acc(y.c);
  for (std::size_t i = 0; i < x.r; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const u64* xr = x.row(i);
    for (std::size_t k = 0; k < x.c; ++k) {
      u64 s = xr[k];
      if (!s) continue;
      const u64* yr = y.row(k);
      for (std::size_t j = 0; j < y.c; ++j) acc[j] = red(acc[j] + s * yr[j]);
    }
    std::copy(acc.begin(), acc.end(), z.row(i));
  }
  return z;
}

Vec Zq::mul(const Vec& v, const Mat& x) const {
  if (v.size() != x.r) throw std::invalid_argument("vec*mat: shape mismatch");
  Vec out(x.c, 0);
  for (std::size_t k = 0; k < x.r; ++k) {
    u64 s = v[k];
    if (!s) continue;
    const u64* xr = x.row(k);
    for (std::size_t j = 0; j < x.c; ++j) out[j] = red(out[j] + s * xr[j]);
  }
  return out;
}

Mat Zq::add(const Mat& x, const Mat& y) const {
  if (x.r != y.r || x.c != y.c) throw std::invalid_argument("add: shape mismatch");
  Mat z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] = red(z.a[i] + y.a[i]);
  return z;
}

Mat Zq::sub(const Mat& x, const Mat& y) const {
  if (x.r != y.r || x.c != y.c) throw std::invalid_argument("sub: shape mismatch");
  Mat z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] = red(z.a[i] + mod_.q - y.a[i]);
  return z;
}

Mat Zq::scale(const Mat& x, u64 s) const {
  Mat z = x;
  for (auto& e : z.a) e = red(e * s);
  return z;
}

Vec Zq::add(const Vec& x, const Vec& y) const {
  Vec z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = red(z[i] + y[i]);
  return z;
}

Vec Zq::sub(const Vec& x, const Vec& y) const {
  Vec z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = red(z[i] + mod_.q - y[i]);
  return z;
}

Vec Zq::scale(const Vec& x, u64 s) const {
  Vec z = x;
  for (auto& e : z) e = red(e * s);
  return z;
}

void Zq::axpy(Vec& y, u64 s, const Vec& x) const {
  s = red(s);
  if (!s) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = red(y[i] + s * x[i]);
}

Howell Zq::howell(const Mat& m) const {
  std::vector<Vec> rows;
  rows.reserve(m.r);
  for (std::size_t i = 0; i < m.r; ++i) rows.push_back(m.rowVec(i));
  return howell(rows, m.c);
}

Howell Zq::howell(const std::vector<Vec>& input, std::size_t cols) const {
  std::vector<Vec> pending;
  pending.reserve(input.size());
  for (const auto& v : input) {
    if (v.size() != cols) throw std::invalid_argument("howell: width mismatch");
    bool nz = false;
    for (u64 x : v)
      if (red(x)) { nz = true; break; }
    if (!nz) continue;
    Vec w(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) w[j] = red(v[j]);
    pending.push_back(std::move(w));
  }
  std::vector<Vec> out;
  std::vector<std::size_t> pc;
  std::vector<int> pv;
  const u64 q = mod_.q;
  for (std::size_t c = 0; c < cols && !pending.empty(); ++c) {
    int best = mod_.m;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      u64 x = pending[i][c];
      if (!x) continue;
      int v = val(x);
      if (v < best) {
        best = v;
        bi = i;
        if (v == 0) break;
      }
    }
    if (best == mod_.m) continue;
    Vec piv = std::move(pending[bi]);
    pending[bi] = std::move(pending.back());
    pending.pop_back();
    u64 pb = ppow(best);
    u64 unit = piv[c] / pb;
    u64 inv = invUnit(unit);
    for (std::size_t j = c; j < cols; ++j) piv[j] = red(piv[j] * inv);
    // piv[c] == p^best now (mod q)
    std::size_t w = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      Vec& r = pending[i];
      u64 x = r[c];
      if (x) {
        u64 f = q - x / pb;  // subtract (x/p^v)*piv
        for (std::size_t j = c; j < cols; ++j) r[j] = red(r[j] + f * piv[j]);
      }
      bool nz = false;
      for (std::size_t j = c + 1; j < cols; ++j)
        if (r[j]) { nz = true; break; }
      if (nz) {
        if (w != i) pending[w] = std::move(r);
        ++w;
      }
    }
    pending.resize(w);
    if (best > 0) {
      Vec extra(cols, 0);
      u64 f = ppow(mod_.m - best);
      bool nz = false;
      for (std::size_t j = c + 1; j < cols; ++j) {
        extra[j] = red(piv[j] * f);
        if (extra[j]) nz = true;
      }
      if (nz) pending.push_back(std::move(extra));
    }
    out.push_back(std::move(piv));
    pc.push_back(c);
    pv.push_back(best);
  }
  // back-reduce entries above pivots
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t c = pc[i];
    u64 pb = ppow(pv[i]);
    for (std::size_t k = 0; k < i; ++k) {
      u64 x = out[k][c];
      u64 t = x / pb;
      if (!t) continue;
      u64 f = q - t;
      for (std::size_t j = c; j < cols; ++j) out[k][j] = red(out[k][j] + f * out[i][j]);
    }
  }
  Howell h;
  h.cols = cols;
  h.rows = Mat::fromRows(out, cols);
  h.pivotCols = std::move(pc);
  h.pivotVal = std::move(pv);
  return h;
}

Howell Zq::zeroSpan(std::size_t cols) const {
  Howell h;
  h.cols = cols;
  h.rows = Mat(0, cols);
  return h;
}

Vec Zq::reduce(const Howell& h, Vec x) const {
  if (x.size() != h.cols) throw std::invalid_argument("reduce: width mismatch");
  for (auto& e : x) e = red(e);
  const u64 q = mod_.q;
  for (std::size_t i = 0; i < h.rows.r; ++i) {
    std::size_t c = h.pivotCols[i];
    u64 t = x[c] / ppow(h.pivotVal[i]);
    if (!t) continue;
    u64 f = q - t;
    const u64* r = h.rows.row(i);
    for (std::size_t j = c; j < h.cols; ++j) x[j] = red(x[j] + f * r[j]);
  }
  return x;
}

bool Zq::contains(const Howell& h, const Vec& x) const {
  Vec r = reduce(h, x);
  return std::all_of(r.begin(), r.end(), [](u64 e) { return e == 0; });
}

bool Zq::containsAll(const Howell& h, const Mat& rows) const {
  for (std::size_t i = 0; i < rows.r; ++i)
    if (!contains(h, rows.rowVec(i))) return false;
  return true;
}

bool Zq::subset(const Howell& small, const Howell& big) const { return containsAll(big, small.rows); }

Howell Zq::sum(const Howell& a, const Howell& b) const { return howell(vstack(a.rows, b.rows)); }

Howell Zq::sum(const Howell& a, const Mat& extra) const {
  if (extra.r == 0) return a;
  return howell(vstack(a.rows, extra));
}

Howell Zq::intersect(const Howell& a, const Howell& b) const {
  if (a.rows.r == 0 || b.rows.r == 0) return zeroSpan(a.cols);
  // combinations x*A = y*B
  Mat st = vstack(a.rows, b.rows);
  Howell k = kernel(st);
  Mat xa(k.rows.r, a.rows.r);
  for (std::size_t i = 0; i < k.rows.r; ++i)
    for (std::size_t j = 0; j < a.rows.r; ++j) xa(i, j) = k.rows(i, j);
  return howell(mul(xa, a.rows));
}

long Zq::logSize(const Howell& h) const {
  long s = 0;
  for (int v : h.pivotVal) s += mod_.m - v;
  return s;
}

std::optional<Vec> Zq::solve(const Mat& m, const Vec& b) const {
  if (b.size() != m.c) throw std::invalid_argument("solve: dimension mismatch");
  Mat aug = hstack(m, Mat::identity(m.r));
  Howell h = howell(aug);
  Vec x(m.c + m.r, 0);
  for (std::size_t j = 0; j < m.c; ++j) x[j] = red(b[j]);
  x = reduce(h, x);
  for (std::size_t j = 0; j < m.c; ++j)
    if (x[j]) return std::nullopt;
  Vec sol(m.r);
  for (std::size_t j = 0; j < m.r; ++j) sol[j] = neg(x[m.c + j]);
  return sol;
}

Solver::Solver(const Zq& z, const Mat& m) : z_(z), r_(m.r), c_(m.c), h_(z.howell(hstack(m, Mat::identity(m.r)))) {}

std::optional<Vec> Solver::solve(const Vec& b) const {
  if (b.size() != c_) throw std::invalid_argument("solve: dimension mismatch");
  Vec x(c_ + r_, 0);
  for (std::size_t j = 0; j < c_; ++j) x[j] = z_.red(b[j]);
  x = z_.reduce(h_, x);
  for (std::size_t j = 0; j < c_; ++j)
    if (x[j]) return std::nullopt;
  Vec sol(r_);
  for (std::size_t j = 0; j < r_; ++j) sol[j] = z_.neg(x[c_ + j]);
  return sol;
}

Howell Zq::kernel(const Mat& m) const {
  Mat aug = hstack(m, Mat::identity(m.r));
  Howell h = howell(aug);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < h.rows.r; ++i) {
    if (h.pivotCols[i] < m.c) continue;
    rows.emplace_back(h.rows.row(i) + m.c, h.rows.row(i) + m.c + m.r);
  }
  Howell k;
  k.cols = m.r;
  k.rows = Mat::fromRows(rows, m.r);
  for (std::size_t i = 0; i < h.rows.r; ++i) {
    if (h.pivotCols[i] < m.c) continue;
    k.pivotCols.push_back(h.pivotCols[i] - m.c);
    k.pivotVal.push_back(h.pivotVal[i]);
  }
  return k;
}

Howell Zq::preimage(const Mat& f, const Howell& target) const {
  // kernel of [F; T] restricted to the first block
  Mat st = vstack(f, target.rows);
  Howell k = kernel(st);
  Mat x(k.rows.r, f.r);
  for (std::size_t i = 0; i < k.rows.r; ++i)
    for (std::size_t j = 0; j < f.r; ++j) x(i, j) = k.rows(i, j);
  return howell(x);
}

std::vector<u64> Zq::quotientStructure(const Howell& span, std::size_t ambient) const {
  if (span.cols != ambient) throw std::invalid_argument("quotientStructure: ambient mismatch");
  Mat a = span.rows;
  std::size_t rk = 0;
  std::vector<int> vals;
  std::size_t R = a.r, C = a.c;
  while (rk < R && rk < C) {
    int best = mod_.m;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = rk; i < R; ++i)
      for (std::size_t j = rk; j < C; ++j) {
        u64 x = a(i, j);
        if (!x) continue;
        int v = val(x);
        if (v < best) { best = v; bi = i; bj = j; }
      }
    if (best == mod_.m) break;
    for (std::size_t j = 0; j < C; ++j) std::swap(a(rk, j), a(bi, j));
    for (std::size_t i = 0; i < R; ++i) std::swap(a(i, rk), a(i, bj));
    u64 pb = ppow(best);
    u64 inv = invUnit(a(rk, rk) / pb);
    for (std::size_t j = 0; j < C; ++j) a(rk, j) = red(a(rk, j) * inv);
    for (std::size_t i = rk + 1; i < R; ++i) {
      u64 t = a(i, rk) / pb;
      if (!t) continue;
      for (std::size_t j = 0; j < C; ++j) a(i, j) = red(a(i, j) + (mod_.q - t) * a(rk, j));
    }
    for (std::size_t j = rk + 1; j < C; ++j) {
      u64 t = a(rk, j) / pb;
      if (!t) continue;
      for (std::size_t i = 0; i < R; ++i) a(i, j) = red(a(i, j) + (mod_.q - t) * a(i, rk));
    }
    vals.push_back(best);
    ++rk;
  }
  std::vector<u64> out;
  for (std::size_t i = rk; i < ambient; ++i) out.push_back(mod_.q);
  for (auto it = vals.rbegin(); it != vals.rend(); ++it)
    if (*it > 0) out.push_back(ppow(*it));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Mat> Zq::inverse(const Mat& m) const {
  if (m.r != m.c) return std::nullopt;
  Howell h = howell(hstack(m, Mat::identity(m.r)));
  if (h.rows.r < m.r) return std::nullopt;
  for (std::size_t i = 0; i < m.r; ++i)
    if (h.pivotCols[i] != i || h.pivotVal[i] != 0) return std::nullopt;
  return submatrix(h.rows, 0, m.r, m.c, 2 * m.c);
}

Mat hstack(const Mat& x, const Mat& y) {
  if (x.r != y.r) throw std::invalid_argument("hstack: row mismatch");
  Mat z(x.r, x.c + y.c);
  for (std::size_t i = 0; i < x.r; ++i) {
    std::copy(x.row(i), x.row(i) + x.c, z.row(i));
    std::copy(y.row(i), y.row(i) + y.c, z.row(i) + x.c);
  }
  return z;
}

Mat vstack(const Mat& x, const Mat& y) {
  if (x.r == 0 && x.c == 0) return y;
  if (y.r == 0 && y.c == 0) return x;
  if (x.c != y.c) throw std::invalid_argument("vstack: column mismatch");
  Mat z(x.r + y.r, x.c);
  std::copy(x.a.begin(), x.a.end(), z.a.begin());
  std::copy(y.a.begin(), y.a.end(), z.a.begin() + x.a.size());
  return z;
}

Mat blockDiag(const Mat& x, const Mat& y) {
  Mat z(x.r + y.r, x.c + y.c);
  for (std::size_t i = 0; i < x.r; ++i) std::copy(x.row(i), x.row(i) + x.c, z.row(i));
  for (std::size_t i = 0; i < y.r; ++i) std::copy(y.row(i), y.row(i) + y.c, z.row(x.r + i) + x.c);
  return z;
}

Mat transpose(const Mat& x) {
  Mat z(x.c, x.r);
  for (std::size_t i = 0; i < x.r; ++i)
    for (std::size_t j = 0; j < x.c; ++j) z(j, i) = x(i, j);
  return z;
}

Mat submatrix(const Mat& x, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
  Mat z(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) z(i - r0, j - c0) = x(i, j);
  return z;
}

}  // namespace hd
