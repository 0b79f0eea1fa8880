#pragma once
#include <string>
#include <vector>

#include "hd/gmodule.hpp"

namespace hd {

// The three quadratic extensions of Q_ell (ell = 3 mod 4), indexed by y in {ell, -1, -ell},
// seen as characters of Gamma = <w1> x <w2> = Z_2 x Z/2 with values in Z/2.
enum class QuadUnit { Ell, MinusOne, MinusEll };
QuadUnit parseQuadUnit(const std::string& s);  // "l" / "ell", "-1", "-l" / "-ell"
std::string quadUnitName(QuadUnit y);
std::vector<QuadUnit> allQuadUnits();
// chi_y(w1), chi_y(w2)
std::vector<int> quadCharacter(QuadUnit y);

// V_y : k[G_y] -> k[G_ell] in degrees -1, 0, each basis vector going to the sum of both,
// over the ring of the context (a Z_2 x Z/2 model; further generators act trivially).
Complex complexV(CtxPtr ctx, QuadUnit y);

// Hilbert symbol (a, b) over Q_ell for a, b in {ell, -1, -ell}, odd ell, as +1 / -1.
int hilbertSymbol(int ell, QuadUnit a, QuadUnit b);

}  // namespace hd
