#pragma once
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hd/zq.hpp"
#include "json.hpp"

namespace hd {

using Exps = std::vector<int>;
using Poly = std::map<Exps, long long>;  // monomial exponents -> integer coefficient
using Elem = Vec;                        // coordinates in the ring basis

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// Finite local commutative Z/p^m-algebra: a truncated polynomial ring modulo an ideal.
class Ring {
 public:
  static RingPtr quotient(Modulus mod, std::vector<std::string> vars, int truncation,
                          const std::vector<Poly>& relations);
  static RingPtr zmod(int p, int m);
  static RingPtr fromJson(const nlohmann::json& j);
  nlohmann::json toJson() const;
  static Poly parsePoly(const nlohmann::json& j, const std::vector<std::string>& vars);
  static Exps parseMonomial(const std::string& s, const std::vector<std::string>& vars);

  const Zq& zq() const { return zq_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }
  int truncation() const { return T_; }
  const std::vector<Exps>& basisExps() const { return basis_; }
  std::string label(std::size_t i) const;
  std::string name() const { return name_; }
  void setName(std::string n) { name_ = std::move(n); }
  const Howell& relations() const { return rel_; }

  Elem zero() const { return Elem(dim(), 0); }
  Elem one() const;
  Elem constant(long long c) const;
  Elem var(std::size_t i) const;
  Elem monomial(const Exps& e) const;
  Elem fromPoly(const Poly& p) const;
  Elem reduce(Elem a) const { return zq_.reduce(rel_, std::move(a)); }
  Elem add(const Elem& a, const Elem& b) const { return reduce(zq_.add(a, b)); }
  Elem sub(const Elem& a, const Elem& b) const { return reduce(zq_.sub(a, b)); }
  Elem neg(const Elem& a) const { return reduce(zq_.scale(a, zq_.q() - 1)); }
  Elem scale(const Elem& a, u64 s) const { return reduce(zq_.scale(a, s)); }
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, u64 e) const;
  bool isZero(const Elem& a) const;
  bool equal(const Elem& a, const Elem& b) const { return isZero(zq_.sub(a, b)); }
  u64 residue(const Elem& a) const;
  bool isUnit(const Elem& a) const { return residue(a) != 0; }
  bool inMaximalIdeal(const Elem& a) const { return residue(a) == 0; }
  Elem inv(const Elem& a) const;

  // matrix of b -> b*a in the basis (row convention)
  Mat mulMatrix(const Elem& a) const;
  const Mat& varMatrix(std::size_t v) const { return varMats_[v]; }
  const Mat& basisMatrix(std::size_t j) const { return basisMats_[j]; }

  int nilpotencyIndex() const { return nilIndex_; }
  long length() const { return length_; }  // log_p |A|
  std::vector<Elem> elements() const;
  std::string format(const Elem& a) const;

 private:
  Ring() = default;
  void build(const std::vector<Poly>& relations);

  Zq zq_;
  std::vector<std::string> vars_;
  int T_ = 1;
  std::string name_;
  std::vector<Poly> relPolys_;
  std::vector<Exps> monos_;               // all monomials of degree < T
  std::map<Exps, std::size_t> monoIndex_;
  Howell fullRel_;
  std::vector<std::size_t> keep_;          // monomial indices kept as basis
  std::vector<Exps> basis_;
  Howell rel_;                             // additive relations in basis coordinates
  std::vector<std::vector<Elem>> table_;   // basis products
  std::vector<Mat> varMats_, basisMats_;
  std::size_t constIndex_ = 0;
  int nilIndex_ = 1;
  long length_ = 0;
};

// Substitute ring elements for the variables of a polynomial.
Elem evalPoly(const Ring& A, const Poly& f, const std::vector<Elem>& values);

// Element of A[[x]] truncated at degree T.
struct TruncatedSeries {
  RingPtr ring;
  int T = 0;
  std::vector<Elem> c;

  static TruncatedSeries zero(RingPtr A, int T);
  static TruncatedSeries fromCoeffs(RingPtr A, int T, const std::vector<Elem>& cs);
  TruncatedSeries add(const TruncatedSeries& o) const;
  TruncatedSeries sub(const TruncatedSeries& o) const;
  TruncatedSeries mul(const TruncatedSeries& o) const;
  TruncatedSeries inverse() const;
  bool equal(const TruncatedSeries& o) const;
  int degree() const;  // highest nonzero coefficient, -1 for zero
  std::string format() const;
};

struct WeierstrassFactorization {
  int n = 0;
  std::vector<Elem> h;  // monic, degree n: n+1 coefficients
  TruncatedSeries u;
};

WeierstrassFactorization weierstrass(const TruncatedSeries& f);
// g = quotient*f + remainder up to truncation, deg remainder < n
std::pair<TruncatedSeries, std::vector<Elem>> weierstrassDivide(const TruncatedSeries& g,
                                                               const TruncatedSeries& f);
int distinguishedDegree(const TruncatedSeries& f);

// Dense polynomial helpers over A (coefficient lists, low degree first).
std::vector<Elem> polyMul(const Ring& A, const std::vector<Elem>& a, const std::vector<Elem>& b);
// division by a monic polynomial; returns (quotient, remainder)
std::pair<std::vector<Elem>, std::vector<Elem>> polyDivMonic(const Ring& A, const std::vector<Elem>& a,
                                                             const std::vector<Elem>& monic);

// Small rings materialized as operation tables, for exhaustive enumeration.
struct RingTable {
  RingPtr ring;
  std::vector<Elem> elems;
  std::vector<std::vector<int>> addT, mulT;
  std::vector<int> negT;
  std::vector<char> unit;
  int zero = 0, one = 0;
  std::size_t size() const { return elems.size(); }
  int index(const Elem& e) const;
  int add(int a, int b) const { return addT[a][b]; }
  int sub(int a, int b) const { return addT[a][negT[b]]; }
  int mul(int a, int b) const { return mulT[a][b]; }
  int fromInt(long long c) const;
  std::vector<int> maximalIdeal() const;
  static RingTable build(RingPtr A);

 private:
  std::map<Elem, int> idx_;
};

// The default small test rings.
RingPtr ringF2();
RingPtr ringDual();       // F2[e]/(e^2)
RingPtr ringZ4();
RingPtr ringF2u3();       // F2[u]/(u^3)
RingPtr ringZ4u();        // Z/4[u]/(u^2, 2u)

}  // namespace hd
