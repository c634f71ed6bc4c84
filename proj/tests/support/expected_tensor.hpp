#pragma once

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qgt/cmatrix.hpp"

// Expected canonical payoff tensor for player 1, tabulated entry by entry as
// an oracle independent of the builder. Tokens: 0, r, s, t, p with optional
// leading "-" and "i" factors.

namespace qgt_test {

inline constexpr std::array<const char*, 16> kCanonicalTensorRows = {
    "r 0 r 0 0 0 0 0 r 0 r 0 0 0 0 0",
    "0 s 0 is 0 0 0 0 0 s 0 is 0 0 0 0",
    "r 0 r 0 0 0 0 0 r 0 r 0 0 0 0 0",
    "0 -is 0 s 0 0 0 0 0 -is 0 s 0 0 0 0",
    "0 0 0 0 t 0 t 0 0 0 0 0 it 0 it 0",
    "0 0 0 0 0 p 0 ip 0 0 0 0 0 ip 0 -p",
    "0 0 0 0 t 0 t 0 0 0 0 0 it 0 it 0",
    "0 0 0 0 0 -ip 0 p 0 0 0 0 0 p 0 ip",
    "r 0 r 0 0 0 0 0 r 0 r 0 0 0 0 0",
    "0 s 0 is 0 0 0 0 0 s 0 is 0 0 0 0",
    "r 0 r 0 0 0 0 0 r 0 r 0 0 0 0 0",
    "0 -is 0 s 0 0 0 0 0 -is 0 s 0 0 0 0",
    "0 0 0 0 -it 0 -it 0 0 0 0 0 t 0 t 0",
    "0 0 0 0 0 -ip 0 p 0 0 0 0 0 p 0 ip",
    "0 0 0 0 -it 0 -it 0 0 0 0 0 t 0 t 0",
    "0 0 0 0 0 -p 0 -ip 0 0 0 0 0 -ip 0 p",
};

inline qgt::Complex token_value(std::string tok, double r, double s, double t, double p) {
  qgt::Complex factor(1.0, 0.0);
  if (!tok.empty() && tok[0] == '-') {
    factor = -factor;
    tok.erase(0, 1);
  }
  if (!tok.empty() && tok[0] == 'i') {
    factor *= qgt::Complex(0.0, 1.0);
    tok.erase(0, 1);
  }
  if (tok == "0") return tok.size() == 1 ? qgt::Complex(0.0, 0.0) : throw std::runtime_error("bad token");
  if (tok == "r") return factor * r;
  if (tok == "s") return factor * s;
  if (tok == "t") return factor * t;
  if (tok == "p") return factor * p;
  throw std::runtime_error("expected_tensor: bad token '" + tok + "'");
}

// Player 1 expected tensor at the given payoffs. The player 2 tensor is the
// same pattern with the s and t values exchanged.
inline qgt::CMatrix expected_tensor(double r, double s, double t, double p) {
  qgt::CMatrix out(16, 16);
  for (std::size_t i = 0; i < 16; ++i) {
    std::istringstream row(kCanonicalTensorRows[i]);
    std::string tok;
    for (std::size_t j = 0; j < 16; ++j) {
      if (!(row >> tok)) throw std::runtime_error("expected_tensor: short row");
      out(i, j) = token_value(tok, r, s, t, p);
    }
    if (row >> tok) throw std::runtime_error("expected_tensor: long row");
  }
  return out;
}

}  // namespace qgt_test
