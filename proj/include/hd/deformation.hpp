#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "hd/quadratic.hpp"
#include "hd/resolution.hpp"

namespace hd {

// Deformations of the two-term complexes V_y over small test rings.
struct DeformationProblem {
  QuadUnit y = QuadUnit::Ell;
  int ell = 3;
  int level = 3;                 // w1 has order 2^level in the realized group
  std::vector<int> Qprime;       // extra trivially acting factors of order prime to 2

  GroupModel model() const;
  CtxPtr context(RingPtr A) const;
  Complex base() const;          // V_y over F2
};

// Throws unless ell is a prime congruent to 3 mod 4.
DeformationProblem buildVy(QuadUnit y, int ell, int level = 3);
// k-invariant of a two-term complex with H^{-1} = H^0 = k over the Z_2 x Z/2 model
bool isNonSplit(const Complex& V, int level = 3);
// V_l with the trivial action on the degree -1 term (the class h_l u h_1 = 0)
Complex splitAnalogue(CtxPtr ctx);

// 2x2 matrix over a RingTable, row-major, acting on row vectors.
using M2 = std::array<int, 4>;

// A rank-(2,2) complex P^{-1} -> P^0 over A: one matrix per group generator on each
// term, and the differential.
struct LiftData {
  std::vector<M2> actM1, act0;
  M2 d{};
  bool operator==(const LiftData& o) const = default;
  std::vector<int> key() const;
};

struct QuasiLift {
  std::vector<std::pair<std::string, int>> params;  // normal-form parameters (ring table indices)
  LiftData data;
  int lambda = 0;   // canonical generator of the ideal (1 - s2^2); 0 for y = -1
  bool proflat = true;
  int param(const std::string& name) const;
};

struct LiftEnumeration {
  DeformationProblem problem;
  RingPtr ring;
  RingTable table;
  std::vector<QuasiLift> lifts;
  std::vector<int> classOf;          // lift -> class index
  std::vector<std::size_t> reps;     // class -> representative lift
  std::size_t classCount() const { return reps.size(); }
  nlohmann::json toJson() const;
};

// All normal-form quasi-lifts of V_y over A, grouped into isomorphism classes by
// strict isomorphisms congruent to the identity modulo m_A.
LiftEnumeration enumerateLifts(const DeformationProblem& problem, RingPtr A);
// The complex of a lift over the problem's group.
Complex liftComplex(const DeformationProblem& problem, RingPtr A, const RingTable& T, const LiftData& L);

struct LiftCheck {
  bool ok = true;
  std::string failure;
};
// group relations, equivariance, reduction, H^0 = A/(lambda), H^{-1} = Ann(lambda), proflat <=> lambda = 0
LiftCheck checkLift(const LiftEnumeration& E, std::size_t i);

// Class count of all equivariant rank-(2,2) lifts with P^0 = A<w2> (w1 acting by a scalar
// lifting 1, w2 by the swap), every other matrix lifting V_y entrywise, modulo strict
// isomorphisms congruent to the identity.
struct RawCount {
  long lifts = 0;
  long classes = 0;
};
RawCount rawLiftClasses(const DeformationProblem& problem, RingPtr A);

struct TangentReport {
  QuadUnit y = QuadUnit::Ell;
  long count = 0;
  int dim = -1;          // log2(count), -1 if count is not a power of 2
  bool powerOfTwo = false;
  nlohmann::json toJson() const;
};
TangentReport tangentSpace(const DeformationProblem& problem);

// Presentation W[[t_1..t_n]]/(relations) with the dictionary to normal-form parameters.
struct VersalRingSpec {
  QuadUnit y = QuadUnit::Ell;
  bool proflat = false;
  std::vector<std::string> vars;
  std::vector<Poly> relations;
  std::string presentation;
  // truncated model W/2^m[t]/(relations, deg >= T)
  RingPtr truncated(int m, int T) const;
  nlohmann::json toJson() const;
};
VersalRingSpec versalSpec(QuadUnit y, bool proflat);

struct VersalityRow {
  std::string ring;
  long classes = 0, morphisms = 0, proflatMorphisms = 0;
  long hit = 0, hitByProflat = 0, proflatClasses = 0;
  bool surjective = false, bijective = false, proflatExact = false;
  long nonProflatMissedByFl = 0;  // lambda != 0 classes hit by R but not by R^fl
  std::vector<std::string> misses;
  nlohmann::json toJson() const;
};
struct VersalityReport {
  QuadUnit y = QuadUnit::Ell;
  std::vector<VersalityRow> rows;
  bool ok = false;
  nlohmann::json toJson() const;
};
VersalityReport verifyVersality(const DeformationProblem& problem, const std::vector<RingPtr>& rings);

struct InflationRow {
  std::string ring;
  long base = 0, inflated = 0;
};
struct InflationReport {
  QuadUnit y = QuadUnit::Ell;
  std::vector<int> extra;
  std::vector<InflationRow> rows;
  bool ok = false;
  nlohmann::json toJson() const;
};
InflationReport inflationCheck(const DeformationProblem& problem, const std::vector<int>& extra,
                               const std::vector<RingPtr>& rings);

std::vector<RingPtr> defaultTestRings();

}  // namespace hd
