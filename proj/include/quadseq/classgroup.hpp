#pragma once

#include "quadseq/arith.hpp"
#include "quadseq/cfrac.hpp"

#include <vector>

namespace quadseq::classgroup {

using arith::Int;

// Discriminant of the field Q(sqrt N): m when m = squarefree part of N
// is 1 mod 4, else 4m. Rejects square N.
Int fundamental_discriminant(const Int& N);

// Indefinite binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
    Int a, b, c;
    Int discriminant() const { return b * b - 4 * a * c; }
    bool operator==(const QuadForm&) const = default;
    bool operator<(const QuadForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

// Reduced: 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b.
// All comparisons are exact (D is never a square).
bool is_reduced(const QuadForm& f);

// Every reduced form of discriminant D, ordered by (a, b, c).
// D > 0, D = 0 or 1 mod 4, non-square. Cost grows linearly with D.
std::vector<QuadForm> reduced_forms(const Int& D);

// Reduction step (a,b,c) -> (c, r, (r^2-D)/(4c)) with r = -b mod 2|c|
// placed in the window (sqrt D - 2|c|, sqrt D). Permutes the reduced forms;
// its cycles are the narrow classes.
QuadForm rho(const QuadForm& f);

// Number of rho cycles on the reduced forms = narrow class number h+.
long narrow_class_number(const Int& D);

struct FieldInvariants {
    Int radicand;               // N
    Int m;                      // squarefree part of N
    Int D;                      // field discriminant
    cfrac::FundamentalUnit unit;
    long h_plus = 0;
    long h = 0;
    double L1 = 0.0;            // L(1, chi_D)
};

// Throws if a field relation is violated (D vs m, unit equation,
// h vs h_plus vs unit norm, positivity).
void validate(const FieldInvariants& inv);

// Full invariants of Q(sqrt N): exact h from form cycles, unit from the
// continued fraction, L-value from the log-sin sum (truncated series with
// a proven bound once D exceeds the exact-evaluation cap).
FieldInvariants class_number(const Int& N);

// Working precision in bits for the L-value and regulator routines.
void set_precision_bits(unsigned bits);
unsigned precision_bits();

// L(1, chi_D) = -(1/sqrt D) sum_{a=1}^{D-1} chi_D(a) log sin(pi a / D),
// evaluated at the current working precision. D fundamental, D > 1.
double L1_exact(const Int& D);

inline constexpr long kL1ExactCap = 10000000;  // largest D fed to L1_exact by class_number

struct TruncatedL {
    double value;
    double error_bound;  // tail bound actually used, <= requested tol
};

// Partial sum of chi_D(n)/n, cut once the Polya-Vinogradov tail bound
// drops to tol.
TruncatedL L1_truncated(const Int& D, double tol);

// h from the class number formula 2 h log eps = sqrt(D) L(1, chi_D),
// rounded to the nearest integer. Throws if the value is not within
// 0.25 of an integer.
long analytic_h(const Int& D);

// log((u + v sqrt D)/2)
double regulator(const cfrac::FundamentalUnit& eps);

}  // namespace quadseq::classgroup
