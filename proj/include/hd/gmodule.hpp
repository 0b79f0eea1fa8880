#pragma once
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hd/group.hpp"
#include "hd/ring.hpp"
#include "json.hpp"

namespace hd {

// Coefficient ring and finite group shared by the modules of a computation.
struct Context {
  RingPtr A;
  GroupPtr G;
  const Zq& zq() const { return A->zq(); }
};
using CtxPtr = std::shared_ptr<const Context>;
CtxPtr makeContext(RingPtr A, GroupPtr G);

// A finite A[G]-module: the quotient of (Z/q)^n by `rel`, with one matrix per
// group generator and per ring variable (row vectors, v -> v*M).
// For g, h in G the action matrices compose as R_{gh} = R_h * R_g.
struct GModule {
  CtxPtr ctx;
  std::size_t n = 0;
  Howell rel;
  std::vector<Mat> gens;
  std::vector<Mat> vars;
  int freeB = -1;  // >= 0: B^freeB with coordinates (generator, group element, ring basis)
  int freeA = -1;  // >= 0: A^freeA with coordinates (generator, ring basis)

  const Zq& zq() const { return ctx->zq(); }
  const Ring& ring() const { return *ctx->A; }
  const FiniteGroup& group() const { return *ctx->G; }

  static GModule zero(CtxPtr ctx);
  static GModule freeOverB(CtxPtr ctx, std::size_t rank);
  // A^rank with generator actions given by rank x rank matrices over A
  static GModule freeOverA(CtxPtr ctx, std::size_t rank,
                           const std::vector<std::vector<std::vector<Elem>>>& genMats);
  // the same underlying data viewed over another group through generator names
  GModule inflate(CtxPtr bigger) const;

  Vec zeroVec() const { return Vec(n, 0); }
  Vec reduce(const Vec& v) const { return zq().reduce(rel, v); }
  bool isZero(const Vec& v) const;
  long logSize() const { return static_cast<long>(n) * zq().m() - zq().logSize(rel); }
  Vec unit(std::size_t i) const;
  // j-th free generator of a B-free or A-free module
  Vec freeGenerator(std::size_t j) const;

  Mat ringAction(const Elem& a) const;
  const std::vector<Mat>& basisActions() const;
  Vec act(int g, const Vec& v) const;
  // v*R_g for every g, indexed by group element
  std::vector<Vec> orbit(const Vec& v) const;
  // Z/q-span of the A[G]-submodule generated by vs, together with rel
  Howell submodule(const std::vector<Vec>& vs) const;
  // rad(B)*M + p*M when G is a p-group; the whole B-submodule machinery otherwise
  Howell radicalTimes() const;
  // a generating set of the B-submodule `span` (which must contain rel)
  std::vector<Vec> generators(const Howell& span) const;
  // dimension of M/m_A M over the residue field
  long fiberDim() const;
  // A-free test: length(M) = length(A) * dim_k(M/m_A M)
  bool isAFree() const;

  void validate() const;
  nlohmann::json toJson() const;
  static GModule fromJson(CtxPtr ctx, const nlohmann::json& j);

 private:
  mutable std::shared_ptr<std::vector<Mat>> basisCache_;
};

GModule directSum(const GModule& a, const GModule& b);
// x*Zgen presents the subquotient Z/Bsp; `lift` maps coordinates back into M
struct Subquotient {
  GModule mod;
  Mat lift;
};
Subquotient subquotient(const GModule& M, const Howell& Z, const Howell& Bsp);
GModule quotientModule(const GModule& M, const Mat& extraRelations);

// rows of a - b lie in rel
bool congruent(const Zq& z, const Mat& a, const Mat& b, const Howell& rel);
// solve x*F = b modulo rel of the target
std::optional<Vec> solveModulo(const Zq& z, const Mat& F, const Vec& b, const Howell& rel);

// B-linear map out of B^r determined by the images of the free generators.
Mat freeMap(const GModule& F, const GModule& T, const std::vector<Vec>& images);
// Checks that f : S -> T is well defined, A-linear and G-equivariant.
bool isHomomorphism(const GModule& S, const GModule& T, const Mat& f);

// Bounded complex; terms[k] sits in degree lo+k and d[k] : terms[k] -> terms[k+1].
// openBelow marks a truncated bounded-above complex whose lowest computed degree
// has unknown terms below it, so its cohomology there is not meaningful.
struct Complex {
  CtxPtr ctx;
  int lo = 0;
  std::vector<GModule> terms;
  std::vector<Mat> d;
  bool openBelow = false;

  static Complex zero(CtxPtr ctx, int lo = 0);
  static Complex single(const GModule& M, int deg);
  int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
  bool empty() const { return terms.empty(); }
  GModule term(int deg) const;
  Mat diff(int deg) const;  // degree deg -> deg+1
  // lowest degree where cohomology is determined
  int firstReliable() const { return openBelow ? lo + 1 : lo; }
  void validate() const;
  // drops zero terms at both ends
  Complex trimmed() const;
  Complex inflate(CtxPtr bigger) const;
  nlohmann::json toJson() const;
  static Complex fromJson(CtxPtr ctx, const nlohmann::json& j);
  std::string hash() const;
};

// Degreewise maps; missing degrees are zero.
struct ChainMap {
  std::map<int, Mat> f;
  Mat at(const Complex& S, const Complex& T, int deg) const;
};
bool isChainMap(const Complex& S, const Complex& T, const ChainMap& f, std::string* why = nullptr);
ChainMap identityMap(const Complex& C);
ChainMap compose(const Complex& A, const Complex& B, const Complex& C, const ChainMap& f, const ChainMap& g);

struct CohomologyGroup {
  int degree = 0;
  long logSize = 0;                 // log_p |H|
  std::vector<u64> invariants;      // cyclic factors Z/d
  Howell Z, B;                      // cycles (with rel) and boundaries (with rel)
  Subquotient H;
};
CohomologyGroup cohomologyAt(const Complex& C, int deg);
std::vector<CohomologyGroup> cohomology(const Complex& C);
bool isAcyclic(const Complex& C);

Complex shift(const Complex& C, int n);  // C[n]^i = C^{i+n}
Complex cone(const Complex& C, const Complex& D, const ChainMap& f);

struct QuasiIsoDegree {
  int degree = 0;
  bool injective = false, surjective = false;
  std::vector<Vec> preimages;      // for each generator of Z_D: a cycle of C hitting it mod B_D
  std::vector<Vec> kernelClasses;  // cycles of C killed by f but not boundaries
};
struct QuasiIsoCertificate {
  bool ok = false;
  bool chainMap = false;
  int failingDegree = 0;
  std::string reason;
  std::vector<QuasiIsoDegree> degrees;
  nlohmann::json toJson() const;
};
QuasiIsoCertificate checkQuasiIso(const Complex& C, const Complex& D, const ChainMap& f);

// All ideals of the (finite) coefficient ring, as Z/q-spans of ring coordinates.
std::vector<Howell> ringIdeals(const Ring& A);
struct TorDimensionReport {
  bool ok = true;
  int degree = 0;
  std::string testModule;
};
// H^i(S (x)_A C) = 0 for all i < N and every cyclic S = A/I
TorDimensionReport checkTorDimension(const Complex& C, int N);

std::string fnvHash(const std::string& s);
nlohmann::json matJson(const Mat& m);
Mat matFromJson(const nlohmann::json& j, std::size_t r, std::size_t c);

}  // namespace hd
