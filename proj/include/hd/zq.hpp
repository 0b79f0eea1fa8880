#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hd {

using u64 = std::uint64_t;
using Vec = std::vector<u64>;

// Dense matrix over Z/q, row-major. Vectors are rows and act on the left: v*M.
struct Mat {
  std::size_t r = 0, c = 0;
  std::vector<u64> a;

  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r(rows), c(cols), a(rows * cols, 0) {}

  u64& operator()(std::size_t i, std::size_t j) { return a[i * c + j]; }
  u64 operator()(std::size_t i, std::size_t j) const { return a[i * c + j]; }
  const u64* row(std::size_t i) const { return a.data() + i * c; }
  u64* row(std::size_t i) { return a.data() + i * c; }
  Vec rowVec(std::size_t i) const { return Vec(row(i), row(i) + c); }
  void setRow(std::size_t i, const Vec& v);
  void appendRow(const Vec& v);
  bool isZero() const;
  bool operator==(const Mat& o) const { return r == o.r && c == o.c && a == o.a; }

  static Mat identity(std::size_t n);
  static Mat fromRows(const std::vector<Vec>& rows, std::size_t cols);
};

struct Modulus {
  int p = 2, m = 1;
  u64 q = 2;
  static Modulus make(int p, int m);
  bool operator==(const Modulus& o) const { return p == o.p && m == o.m; }
};

// Howell form: rows in echelon shape, pivots normalized to powers of p,
// entries above pivots reduced, and the Howell closure property.
struct Howell {
  std::size_t cols = 0;
  Mat rows;
  std::vector<std::size_t> pivotCols;
  std::vector<int> pivotVal;  // pivot = p^pivotVal
  std::size_t size() const { return rows.r; }
  bool operator==(const Howell& o) const { return cols == o.cols && rows == o.rows; }
};

// All arithmetic over Z/p^m.
class Zq {
 public:
  Zq() : Zq(Modulus::make(2, 1)) {}
  explicit Zq(Modulus mod);
  Zq(int p, int m) : Zq(Modulus::make(p, m)) {}

  const Modulus& modulus() const { return mod_; }
  u64 q() const { return mod_.q; }
  int p() const { return mod_.p; }
  int m() const { return mod_.m; }

  u64 red(u64 x) const { return pow2_ ? (x & mask_) : (x % mod_.q); }
  u64 fromInt(long long x) const;
  u64 add(u64 x, u64 y) const { return red(x + y); }
  u64 sub(u64 x, u64 y) const { return red(x + mod_.q - y); }
  u64 neg(u64 x) const { return red(mod_.q - x); }
  u64 mul(u64 x, u64 y) const { return red(x * y); }
  int val(u64 x) const;              // p-adic valuation, m for zero
  u64 ppow(int v) const;             // p^v (v <= m)
  u64 invUnit(u64 u) const;          // u must be prime to p
  bool isUnit(u64 x) const { return x % mod_.p != 0; }

  Mat mul(const Mat& x, const Mat& y) const;
  Vec mul(const Vec& v, const Mat& x) const;
  Mat add(const Mat& x, const Mat& y) const;
  Mat sub(const Mat& x, const Mat& y) const;
  Mat scale(const Mat& x, u64 s) const;
  Vec add(const Vec& x, const Vec& y) const;
  Vec sub(const Vec& x, const Vec& y) const;
  Vec scale(const Vec& x, u64 s) const;
  void axpy(Vec& y, u64 s, const Vec& x) const;  // y += s*x

  Howell howell(const Mat& m) const;
  Howell howell(const std::vector<Vec>& rows, std::size_t cols) const;
  Howell zeroSpan(std::size_t cols) const;
  Vec reduce(const Howell& h, Vec x) const;
  bool contains(const Howell& h, const Vec& x) const;
  bool containsAll(const Howell& h, const Mat& rows) const;
  bool subset(const Howell& small, const Howell& big) const;
  Howell sum(const Howell& a, const Howell& b) const;
  Howell sum(const Howell& a, const Mat& extra) const;
  Howell intersect(const Howell& a, const Howell& b) const;
  // log_p of the cardinality of the row span
  long logSize(const Howell& h) const;

  std::optional<Vec> solve(const Mat& m, const Vec& b) const;
  Howell kernel(const Mat& m) const;
  // preimage {x : x*F in target}
  Howell preimage(const Mat& f, const Howell& target) const;
  // Smith invariants of Z/q^ambient / span, as moduli d_i > 1
  std::vector<u64> quotientStructure(const Howell& span, std::size_t ambient) const;
  std::optional<Mat> inverse(const Mat& m) const;

 private:
  Modulus mod_;
  bool pow2_ = false;
  u64 mask_ = 0;
};

// Repeated solves of x*M = b against one matrix.
class Solver {
 public:
  Solver(const Zq& z, const Mat& m);
  std::optional<Vec> solve(const Vec& b) const;
  std::size_t rows() const { return r_; }

 private:
  Zq z_;
  std::size_t r_ = 0, c_ = 0;
  Howell h_;
};

Mat hstack(const Mat& x, const Mat& y);
Mat vstack(const Mat& x, const Mat& y);
Mat blockDiag(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);
Mat submatrix(const Mat& x, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1);

}  // namespace hd
