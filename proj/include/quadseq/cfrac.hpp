#pragma once

#include "quadseq/arith.hpp"

#include <optional>
#include <utility>
#include <vector>

// Periodic continued fractions of quadratic surds, minimal Pell solutions,
// and fundamental units of real quadratic orders.

namespace quadseq::cfrac {

using arith::Int;

// Quadratic surd (P + sqrt(N)) / Q in normal form: N > 0 non-square, Q != 0,
// Q | N - P^2. The constructor rescales (P,Q,N) when the divisibility fails;
// the represented real number is unchanged.
struct QuadSurd {
    Int P, Q, N;
    QuadSurd(Int p, Int q, Int n);
    static QuadSurd sqrt_of(const Int& n);
};

// One continued fraction step at a time; exposed so tests can walk the
// (P,Q) state sequence. floor((P + sqrt N)/Q) is exact for either sign of Q:
// P + sqrt(N) lies strictly between P+root and P+root+1.
struct SurdWalker {
    Int P, Q, N, root;
    explicit SurdWalker(const QuadSurd& s);
    Int next();
};

struct CFExpansion {
    Int radicand;             // N of the expanded surd
    std::vector<Int> head;    // partial quotients before the cycle
    std::vector<Int> period;  // minimal repeating block, never empty
    Int quotient(size_t t) const;
};

CFExpansion cf_expand(const QuadSurd& s);

// t-th convergent h_t/k_t of the expansion, 0-based; always in lowest terms.
std::pair<Int, Int> convergent(const CFExpansion& e, size_t t);

struct PellSolution {
    Int x, y;
    int norm;
};

// Minimal positive solutions of x^2 - N y^2 = +-1. The -1 entry is absent
// exactly when the period of sqrt(N) is even.
struct PellPair {
    PellSolution plus;
    std::optional<PellSolution> minus;
};

PellPair pell_min(const Int& N);  // N >= 2, non-square

// Fundamental unit (u + v sqrt D)/2 of the maximal order of fundamental
// discriminant D: u, v >= 1, u^2 - D v^2 = 4*norm, smallest such unit > 1.
struct FundamentalUnit {
    Int u, v, D;
    int norm;
    long double log_value() const;
};

FundamentalUnit fundamental_unit(const Int& D);  // D >= 5 fundamental

bool is_fundamental_discriminant(const Int& D);

// (u,v) of ((u + v sqrt D)/2)^e for e >= 1; exact integer recurrence.
std::pair<Int, Int> unit_power(const FundamentalUnit& eps, unsigned e);

// Checks that sqrt(A^2 n^2 - n) = [An-1; 1, 2A-2, 1, 2An-2] with the minimal
// period equal to that block or to a divisor of it that tiles it (n=1 gives
// period [1, 2A-2]). Requires A >= 2, n >= 1; A^2 n^2 - n is then automatic
// to be non-square.
bool verify_schinzel_pattern(const Int& A, const Int& n);

}  // namespace quadseq::cfrac
