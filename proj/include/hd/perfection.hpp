#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hd/gmodule.hpp"

namespace hd {

// Action of a group algebra element e on M, as the matrix of v -> e.v.
Mat algebraAction(const GModule& M, const Vec& e);
bool annihilates(const GModule& M, const Vec& e);

// (w2^N - 1)^N' with (w2^N - 1)^N' M = 0. N runs over the divisors p^i of the order of
// w2 (or w2_j), N' over 1..max(1, A-rank of M); N = order(w2) (the zero element) always works.
struct AnnihilatorWitness {
  int j = 1;
  int N = 1, Nprime = 1;
  Vec generator;  // as an element of B
  bool zero = false;
  bool verified = false;
  nlohmann::json toJson() const;
};
AnnihilatorWitness findAnnihilator(const GModule& M, int j = 1);
AnnihilatorWitness annihilatorElement(CtxPtr ctx, int j, int N, int Nprime);

// Central element x = c - 1 of B (c = w1 in case A, a central power w1^z in case B).
struct CentralVariable {
  std::string name;   // "w1" or "w1^z"
  int gen = 0;        // generator index of w1 (or w1_j)
  int element = 0;    // c as a group element
  long order = 1;     // order of c
  int z = 1;
};
std::vector<CentralVariable> centralVariables(const FiniteGroup& G);

// Monic F with F(x) T = 0 of least degree (T a B-submodule given as a span containing `base`,
// computed modulo `base`), its Weierstrass polynomial h and the divisibility h | (1+x)^order - 1.
struct MonicAnnihilator {
  CentralVariable x;
  std::vector<Elem> F, h;  // low degree first, monic
  bool divides = false;
  nlohmann::json toJson(const Ring& A) const;
};
MonicAnnihilator monicAnnihilator(const GModule& M, const Howell& T, const Howell& base, const CentralVariable& x);
// h(x) as an element of B, and its matrix on M
Vec polynomialElement(CtxPtr ctx, const CentralVariable& x, const std::vector<Elem>& h);
Mat polynomialAction(const GModule& M, const CentralVariable& x, const std::vector<Elem>& h);

// M' = I^{q+1} M with I generated by the h_j(x_j) annihilating T, for the first q with
// T and M' meeting only in zero.
struct ComplementWitness {
  Howell Mprime;       // contains M.rel
  int q = 0;
  std::vector<MonicAnnihilator> ideal;
  long quotientGenerators = 0;   // A-generators of M/M'
  long quotientLength = 0;       // log_p |M/M'|
  bool intersectionZero = false, submodule = false;
  std::vector<long> chain;       // lengths of the M_n chain (N' > 1)
  nlohmann::json toJson(const Ring& A) const;
};
ComplementWitness arComplement(const GModule& M, const Howell& T);
// The M_n chain for J = B (w2^N - 1)^N' with N' > 1.
ComplementWitness arComplementChain(const GModule& M, const Howell& T, const Vec& epsilon);

// A B-module F, A-free and A-finite, with a surjection phi : F -> M.
struct FreeCover {
  GModule F;
  Mat phi;
  long generators = 0;
  long aRank = 0, expectedRank = 0;
  bool identity = false;   // M was B-free and F = M
  bool aFree = false, surjective = false;
  nlohmann::json details;
};
FreeCover freeCover(const GModule& M);

// Same module in a Z/q-basis of minimal size; toC : M -> C and fromC : C -> M.
struct Compacted {
  GModule C;
  Mat toC, fromC;
};
Compacted compact(const GModule& M);

struct TraceLeg {
  std::string stage;           // step1, step2, step3, truncate
  bool forward = true;         // map : input -> output, otherwise output -> input
  Complex input, output;
  ChainMap map;
  std::string inputHash, outputHash;
  QuasiIsoCertificate cert;
  nlohmann::json details;
  nlohmann::json toJson() const;
};

struct PipelineTrace {
  nlohmann::json ring, group;
  std::vector<TraceLeg> legs;
  int n1 = 0, n2 = 0;
  bool ok = false;
  nlohmann::json toJson() const;
};

struct ReplayReport {
  bool ok = false;
  int failingLeg = -1;
  std::string reason;
  nlohmann::json toJson() const;
};
// Rebuilds every complex from the JSON, checks hashes, the chain of legs and each certificate.
ReplayReport replayTrace(const nlohmann::json& trace);

struct PassResult {
  std::vector<TraceLeg> legs;
  Complex out;
  nlohmann::json details;
};
PassResult annihilationPass(const Complex& P, int n1, int n2);
PassResult finitenessPass(const Complex& Q, int n1, int n2, const nlohmann::json& step1 = {});
PassResult freeTermsPass(const Complex& Q, int n1, int n2);
PassResult truncationPass(const Complex& L, int n1);

struct PerfectResult {
  Complex L;
  PipelineTrace trace;
  bool ok = false;
  std::string failure;
  std::vector<long> aRanks;   // A-ranks of L^{n1..n2}
  bool aFree = false, supportOk = false;
  bool shortCircuit = false;
  nlohmann::json toJson() const;  // summary without the trace
};
// A bounded complex with A-free, A-finite terms quasi-isomorphic to P, with cohomology
// in [n1, n2]. P must be known down to n1 - 2 unless it is already bounded.
PerfectResult perfect(const Complex& P, int n1, int n2);

// Randomized inputs: a resolution of an A-free complex of permutation modules built at a
// small level and inflated.
struct PerfectionSample {
  GroupModel model;     // at the small level
  RingPtr A;
  int n1 = -1, n2 = 0;
  std::uint64_t seed = 0;
  Complex V;            // over the small level
  nlohmann::json toJson() const;
};
PerfectionSample randomSample(char kase, std::uint64_t seed);
Complex sampleInput(const PerfectionSample& s, int level);

}  // namespace hd
