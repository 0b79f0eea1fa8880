#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hd/gmodule.hpp"

namespace hd {

// A complex L of B-free modules with a surjective quasi-isomorphism rho : L -> target,
// built downward from the top degree (pullback construction). L is computed down to
// `bottom` and is open below there.
struct FreeResolution {
  Complex L;
  Complex target;
  ChainMap rho;
  int bottom = 0;
  std::vector<std::size_t> ranks() const;  // B-ranks from L.lo to L.hi
  std::size_t rank(int deg) const;
};

// Resolves C down to degree `bottom`. With a p-group the generators are chosen minimally.
FreeResolution resolveComplex(const Complex& C, int bottom);
FreeResolution resolveModule(const GModule& M, int depth);  // M in degree 0, resolution in [-depth, 0]

// Lifting g : F -> E of a chain map f : F -> D along rho : E -> D, degree by degree from the
// top down to stopDeg, so that g*rho = f and d_F*g = g*d_E where defined. F must be B-free.
// `seed` fixes components in given degrees. Returns nullopt if some equation has no solution.
struct LiftRequest {
  const Complex* F = nullptr;
  const Complex* E = nullptr;
  const Complex* D = nullptr;    // optional
  const ChainMap* rho = nullptr; // E -> D
  const ChainMap* f = nullptr;   // F -> D
  ChainMap seed;
  int stopDeg = 0;
};
std::optional<ChainMap> liftChainMap(const LiftRequest& req);
// lift along a resolution: g : F -> R.L with g*rho = f
std::optional<ChainMap> liftAlong(const Complex& F, const FreeResolution& R, const ChainMap& f, int stopDeg);

// Homotopy h with g1 - g2 = d_F h + h d_E on degrees >= stopDeg (F B-free; E must be
// known in degree stopDeg - 1). When g1 and g2
// agree after rho : E -> D, passing rho makes the search keep rho*h = 0, which always
// succeeds over a resolution built by resolveComplex.
std::optional<std::map<int, Mat>> findHomotopy(const Complex& F, const Complex& E, const ChainMap& g1,
                                               const ChainMap& g2, int stopDeg, const Complex* D = nullptr,
                                               const ChainMap* rho = nullptr);

// Linear space of chain maps F -> E in degrees [lo, hi], F B-free; each basis element
// is a chain map. Components outside [lo, hi] are zero.
std::vector<ChainMap> chainMapSpace(const Complex& F, const Complex& E, int lo, int hi);

// Hom_B(F, D) for a B-free F, as a complex of A-modules (trivial group).
// Hom^n = prod_i (D^{i+n})^{rank F^i}; (D phi)(e) = d_D phi(e) - (-1)^n phi(d_F e).
class HomComplex {
 public:
  HomComplex(const Complex& F, const Complex& D);
  const Complex& complex() const { return H_; }
  // highest degree n whose cohomology only uses computed terms of F
  int maxReliable() const { return reliable_; }
  // phi(y) for phi in Hom^n and y in F^i
  Vec evaluate(int n, const Vec& phi, int i, const Vec& y) const;
  // the component of phi on the generators of F^i, as a list of images
  std::vector<Vec> component(int n, const Vec& phi, int i) const;
  Vec fromComponents(int n, const std::map<int, std::vector<Vec>>& images) const;
  // phi o g as an element of Hom^n(F', D) where g : F' -> F[shift] (g^i : F'^i -> F^{i+shift})
  Vec precomposeShifted(const HomComplex& source, const Vec& phi, int n, const ChainMap& g, int shift) const;
  const Complex& F() const { return F_; }
  const Complex& D() const { return D_; }

 private:
  Complex F_, D_, H_;
  int reliable_ = 0;
  std::map<int, std::vector<std::pair<int, std::size_t>>> blocks_;  // n -> (i, offset)
  std::map<int, std::vector<std::vector<Vec>>> dAct_;  // degree of D -> [coordinate][g*k+b] -> image
  std::size_t offset(int n, int i) const;
};

// Rank over k of the span of classes (cocycles) modulo coboundaries in degree n.
long classRank(const Complex& H, int n, const std::vector<Vec>& cocycles);
bool isCoboundary(const Complex& H, int n, const Vec& cocycle);

// H^s(Gamma_L, D) via a resolution of the trivial module, at one finite level.
class LevelCohomology {
 public:
  LevelCohomology(CtxPtr ctx, int maxDegree);
  const CtxPtr& ctx() const { return ctx_; }
  const FreeResolution& resolution() const { return res_; }
  const HomComplex& hom() const { return *hom_; }
  long dim(int s) const;
  std::vector<Vec> basis(int s) const;  // cocycles representing a k-basis of H^s
  bool isZero(int s, const Vec& c) const { return isCoboundary(hom_->complex(), s, c); }
  // class of the extension 0 -> k -> k[Gamma/ker chi] -> k -> 0, chi given on generators
  Vec extensionClass(const std::vector<int>& chi) const;
  // class of a two-term complex V^{-1} -> V^0 with H^{-1} = H^0 = k (its k-invariant)
  Vec kInvariant(const Complex& V) const;
  // Yoneda product: beta (deg b) o lift(alpha (deg a)), in degree a+b
  Vec cup(int a, const Vec& alpha, int b, const Vec& beta) const;
  // lift of a cocycle to a chain map F -> F[a]
  ChainMap liftClass(int a, const Vec& alpha) const;
  int maxDegree() const { return maxDeg_; }

 private:
  CtxPtr ctx_;
  int maxDeg_;
  GModule k_;
  FreeResolution res_;
  std::shared_ptr<HomComplex> hom_;
};

// Map on H^s induced by inflation from level `small` to level `big` (one more or more levels up).
// Returns the images of the cocycles of `small` as cocycles of `big`.
class InflationMap {
 public:
  InflationMap(const LevelCohomology& small, const LevelCohomology& big);
  Vec apply(int s, const Vec& c) const;
  long rank(int s) const;  // rank of H^s(small) -> H^s(big)

 private:
  const LevelCohomology& small_;
  const LevelCohomology& big_;
  ChainMap g_;  // F_big -> Inf(F_small)
};

struct GroupCohomologyReport {
  std::vector<long> dims;         // colimit dimensions for s = 0..maxDegree
  std::vector<long> finiteDims;   // dimensions at the base level
  int level = 0;
  bool stable = false;            // ranks of L->L+1, L+1->L+2 and L->L+2 agree
  nlohmann::json toJson() const;
};
// Continuous cohomology H^s(Gamma, F_p) as a colimit over the finite levels L, L+1, L+2.
GroupCohomologyReport groupCohomology(const GroupModel& model, int maxDegree, int level);

// Generators of a minimal graded free resolution of k over F_2[x1,x2]/(x1^T, x2^2) whose
// internal degree equals the homological degree, for s = 0..maxDegree.
std::vector<long> gradedDiagonalBetti(int T, int maxDegree);

struct ExtReport {
  int n = 0;
  int bottom = 0;                 // resolutions computed down to this degree
  long dim = 0;                   // colimit dimension (stable inflation rank)
  std::vector<long> finiteDims;   // at the levels L, L+1, L+2
  std::vector<long> ranks;        // inflation ranks L->L+1, L+1->L+2, L->L+2
  bool stable = false;
  nlohmann::json toJson() const;
};
// dim_k Ext^n(C, D) at one finite level: H^n(Hom(resolveComplex(C, bottom), D)).
// Throws if the resolution is too short for degree n.
long hyperExtAtLevel(const Complex& C, const Complex& D, int n, int bottom, std::vector<Vec>* basis = nullptr);
// Ext^n(C, D) over the profinite group as a colimit over three consecutive levels;
// make(ctx) must build the pair (C, D) over the given context.
ExtReport hyperExt(const std::function<std::pair<Complex, Complex>(CtxPtr)>& make, RingPtr A,
                   const GroupModel& model, int level, int n, int bottom);

}  // namespace hd
