#pragma once
#include <memory>
#include <string>
#include <vector>

#include "hd/ring.hpp"
#include "json.hpp"

namespace hd {

// Parameters of a finite-level model of the profinite group.
struct GroupModel {
  char kase = 'A';  // 'A' abelian, 'B' semidirect
  int p = 2;
  int ell = 3, f = 1, d = 1, r = 0;
  int level = 1;     // w1 has order p^level
  int s = 1;         // case A: number of Z_p factors
  int w2Level = 1;   // case B: each w2,j has order p^w2Level
  std::vector<int> tildeDelta1, Q, Qprime;

  static GroupModel fromJson(const nlohmann::json& j);
  nlohmann::json toJson() const;
  // "Z2xZ2" (Z_2 x Z/2), "Z/2", "Z2"
  static GroupModel named(const std::string& name, int level);
  GroupModel atLevel(int L) const {
    GroupModel g = *this;
    g.level = L;
    return g;
  }
};

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// A realized finite quotient. Elements are indices 0..order-1, 0 is the identity.
class FiniteGroup {
 public:
  static GroupPtr realize(const GroupModel& model);
  static GroupPtr trivial();

  const GroupModel& model() const { return model_; }
  std::size_t order() const { return order_; }
  std::size_t numGens() const { return genElems_.size(); }
  const std::vector<std::string>& genNames() const { return genNames_; }
  int genIndex(const std::string& name) const;
  int gen(std::size_t i) const { return genElems_[i]; }
  std::size_t genOrder(std::size_t i) const { return genOrders_[i]; }
  int leftGen(std::size_t s, int g) const { return leftGen_[s][g]; }
  int mul(int a, int b) const;
  int inv(int a) const;
  int pow(int a, long long e) const;
  // BFS spanning tree: element g = gen(parentGen[g]) * parent[g]
  const std::vector<int>& bfsOrder() const { return bfs_; }
  int parent(int g) const { return parent_[g]; }
  int parentGen(int g) const { return parentGen_[g]; }

  // case B: the element Phi-bar with Phi-bar^d = w1
  int phiBar() const;
  bool isAbelian() const { return model_.kase == 'A'; }
  std::vector<long long> decode(int g) const;
  int encode(const std::vector<long long>& x) const;
  std::string format(int g) const;

 private:
  FiniteGroup() = default;
  void finish();

  GroupModel model_;
  std::size_t order_ = 1;
  // exponent layout
  std::vector<long long> radix_;
  // case B data
  long long topOrder_ = 1;           // d * p^level
  std::vector<std::vector<long long>> qinvPow_;  // [component][t] = q^{-t} mod order
  std::vector<std::string> genNames_;
  std::vector<int> genElems_;
  std::vector<std::size_t> genOrders_;
  std::vector<std::vector<int>> leftGen_;
  std::vector<int> bfs_, parent_, parentGen_;
};

// Elements of A[G] as (group element, ring coordinate) vectors of length |G|*dim(A).
class GroupAlgebra {
 public:
  GroupAlgebra(RingPtr A, GroupPtr G) : A_(std::move(A)), G_(std::move(G)) {}
  const Ring& ring() const { return *A_; }
  const FiniteGroup& group() const { return *G_; }
  RingPtr ringPtr() const { return A_; }
  GroupPtr groupPtr() const { return G_; }
  std::size_t dim() const { return G_->order() * A_->dim(); }

  Vec zero() const { return Vec(dim(), 0); }
  Vec element(int g, const Elem& coeff) const;
  Vec groupElement(int g) const { return element(g, A_->one()); }
  Elem coeff(const Vec& x, int g) const;
  Vec add(const Vec& x, const Vec& y) const;
  Vec sub(const Vec& x, const Vec& y) const;
  Vec scale(const Vec& x, const Elem& a) const;
  Vec mul(const Vec& x, const Vec& y) const;
  Vec pow(const Vec& x, unsigned e) const;
  Vec reduce(const Vec& x) const;
  Elem augmentation(const Vec& x) const;
  bool equal(const Vec& x, const Vec& y) const;

 private:
  RingPtr A_;
  GroupPtr G_;
};

struct NFLabel {
  int u, a, xi, b, c;
  bool operator==(const NFLabel& o) const = default;
};

// Change of basis between group elements and the ordered products
// sigma^u (w1-1)^a xi w2^b (w2^{p^s}-1)^c (or the mirrored order when rightHanded).
class NormalFormBasis {
 public:
  NormalFormBasis(RingPtr A, GroupPtr G, int s, bool rightHanded = false);
  const std::vector<NFLabel>& labels() const { return labels_; }
  std::size_t labelIndex(const NFLabel& l) const;
  Vec toNormalForm(const Vec& x) const;
  Vec fromNormalForm(const Vec& z) const;
  const Mat& change() const { return C_; }
  bool invertible() const { return invertible_; }
  const GroupAlgebra& algebra() const { return alg_; }

 private:
  GroupAlgebra alg_;
  int s_;
  std::vector<NFLabel> labels_;
  Mat C_, Cinv_;
  bool invertible_ = false;
};

struct CommuteCertificate {
  int N = 1, Nprime = 1;
  bool conjugationIdentity = false;   // (w2^N-1)^N' Phi^-1 = Phi^-1 (w2^{qN}-1)^N'
  bool literalIdentity = false;       // with Phi on the right-hand side instead
  bool factorIdentity = false;        // w2^{qN}-1 = (sum_i w2^{iN}) (w2^N-1)
  bool twoSided = false;              // left and right ideals have equal spans
  nlohmann::json toJson() const;
};

CommuteCertificate commuteIdealGenerator(RingPtr A, GroupPtr G, int N, int Nprime);

}  // namespace hd
