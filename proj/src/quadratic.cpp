#include "hd/quadratic.hpp"

#include <stdexcept>

namespace hd {

QuadUnit parseQuadUnit(const std::string& s) {
  if (s == "l" || s == "ell") return QuadUnit::Ell;
  if (s == "-1") return QuadUnit::MinusOne;
  if (s == "-l" || s == "-ell") return QuadUnit::MinusEll;
  throw std::invalid_argument("unknown unit " + s + " (expected l, -1 or -l)");
}

std::string quadUnitName(QuadUnit y) {
  switch (y) {
    case QuadUnit::Ell: return "l";
    case QuadUnit::MinusOne: return "-1";
    default: return "-l";
  }
}

std::vector<QuadUnit> allQuadUnits() { return {QuadUnit::Ell, QuadUnit::MinusEll, QuadUnit::MinusOne}; }

std::vector<int> quadCharacter(QuadUnit y) {
  switch (y) {
    case QuadUnit::Ell: return {0, 1};
    case QuadUnit::MinusOne: return {1, 0};
    default: return {1, 1};
  }
}

Complex complexV(CtxPtr ctx, QuadUnit y) {
  const FiniteGroup& G = *ctx->G;
  if (G.numGens() < 2 || G.genNames()[0] != "w1" || G.genNames()[1] != "w2")
    throw std::invalid_argument("complexV: expects the group Z_2 x Z/2 (times trivially acting factors)");
  const Ring& A = *ctx->A;
  Elem o = A.one(), z = A.zero();
  std::vector<std::vector<Elem>> I = {{o, z}, {z, o}}, S = {{z, o}, {o, z}};
  auto chi = quadCharacter(y);
  std::vector<std::vector<std::vector<Elem>>> am = {chi[0] ? S : I, chi[1] ? S : I}, a0 = {I, S};
  for (std::size_t g = 2; g < G.numGens(); ++g) {
    am.push_back(I);
    a0.push_back(I);
  }
  GModule Vm = GModule::freeOverA(ctx, 2, am);
  GModule V0 = GModule::freeOverA(ctx, 2, a0);
  const std::size_t k = A.dim();
  Mat d(Vm.n, V0.n);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Mat blk = A.mulMatrix(o);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) d(i * k + a, j * k + b) = blk(a, b);
    }
  Complex C;
  C.ctx = ctx;
  C.lo = -1;
  C.terms = {Vm, V0};
  C.d = {d};
  return C;
}

namespace {

// (u*ell^a, v*ell^b) = (-1)^{a b (ell-1)/2} (u|ell)^b (v|ell)^a for units u, v in {1, -1}
int legendreSign(int u, int ell) { return u == 1 ? 1 : (((ell - 1) / 2) % 2 == 0 ? 1 : -1); }

void split(QuadUnit y, int& u, int& e) {
  switch (y) {
    case QuadUnit::Ell: u = 1, e = 1; break;
    case QuadUnit::MinusOne: u = -1, e = 0; break;
    default: u = -1, e = 1;
  }
}

}  // namespace

int hilbertSymbol(int ell, QuadUnit a, QuadUnit b) {
  if (ell % 2 == 0) throw std::invalid_argument("hilbertSymbol: ell must be odd");
  int u, alpha, v, beta;
  split(a, u, alpha);
  split(b, v, beta);
  int s = (alpha * beta * ((ell - 1) / 2)) % 2 == 0 ? 1 : -1;
  if (beta) s *= legendreSign(u, ell);
  if (alpha) s *= legendreSign(v, ell);
  return s;
}

}  // namespace hd
