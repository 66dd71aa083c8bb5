#pragma once

#include "quadseq/arith.hpp"
#include "quadseq/cfrac.hpp"
#include "quadseq/classgroup.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace quadseq::family {

using arith::Int;

// d(n) = prod_{j=0}^k (n-j)^2 - n. Requires n > k, and n >= 2 when k = 0
// so the result stays >= 2.
Int d_of(long k, const Int& n);

// (A_i, N_i) with A_i = prod_{j != i} (n-j) and N_i = A_i^2 (n-i)^2 - (n-i).
// N_i always equals d_of(k, n) + i.
std::pair<Int, Int> shifted_decomposition(long k, const Int& n, long i);

// The explicit unit (x, y) = (2 A_i^2 (n-i) - 1, 2 A_i) with
// x^2 - N_i y^2 = 1 identically.
std::pair<Int, Int> family_unit(long k, const Int& n, long i);

// The exponent e >= 1 with x + y sqrt(N_i) = eps^e for the fundamental
// unit eps of the field Q(sqrt N_i). Throws if no e <= 64 works.
unsigned unit_power_check(long k, const Int& n, long i);

// (is_squarefree(C(n, k+1)), for all i: squarefree_part(n-i) >= (n-i)/(k+1)!).
// The two are reported independently; the first does not imply the second
// pointwise (k=1, n=4 is a counterexample: C(4,2)=6 but squarefree part
// of 4 is 1 < 2).
std::pair<bool, bool> discriminant_bound_check(long k, const Int& n);

// Exact decision of D_i >= (n-i)/(k+1)! for every i, without factoring the
// large cofactor c_i = A_i^2 (n-i) - 1: a floor for its squarefree part is
// certified by ruling out small square-cofactor divisors, which is enough
// except when the exact squarefree part is small and cheap to pin down.
bool discriminant_floor_check(long k, const Int& n);

struct FamilyRow {
    long i;
    Int A, x, y;
    Int N;  // d + i
    Int m;  // squarefree part of N
    Int D;  // field discriminant
};

struct FamilyInstance {
    long k = 0;
    Int n, d;
    std::vector<FamilyRow> rows;
    std::vector<long> degenerate;  // i with square N_i (provably empty, still reported)
};

FamilyInstance build_instance(long k, const Int& n);

enum class CertifyLevel {
    units,          // rows, bounds and unit checks only
    class_numbers,  // adds exact h, h+, L1 per field
};

struct FamilyCertificate {
    FamilyInstance instance;
    std::vector<classgroup::FieldInvariants> invariants;  // class_numbers level only
    std::optional<long> min_h;
    bool binomial_squarefree = false;
    bool unit_bound_ok = false;  // x_i + y_i sqrt(N_i) < 4 n^(2k+1) for all i
};

FamilyCertificate certify(long k, const Int& n,
                          CertifyLevel level = CertifyLevel::class_numbers);

// Recomputes every claim of the certificate from (k, n) and the stated
// values alone; throws logic_error on the first mismatch.
void verify_certificate(const FamilyCertificate& cert);

struct SearchResult {
    bool found = false;
    Int n;                         // smallest hit when found
    FamilyCertificate certificate; // certificate of that n
    long max_min_h = 0;            // best min_h seen when not found
};

// Smallest n in [n_min, n_max] whose fields all have class number > X.
SearchResult theorem1_search(long k, double X, const Int& n_min, const Int& n_max);

// min(floor(log(n)/5) - 1, floor((1 - 10 eps) log n / log log n)), floored
// at 0. Informational cap on usable k for a given n.
long remark1_k_bound(const Int& n, double eps);

// f(n) = prod_{i=0}^k (d(n) + i), expanded; degree 2 (k+1)^2.
arith::IntPolynomial conjecture_poly(long k);

// (B, B') = (fixed divisor of conjecture_poly(k), B / rad(B)).
std::pair<Int, Int> conjecture_constants(long k);

// Whether conjecture_poly(k) has no repeated complex roots. Decided factor
// by factor: the d+i are pairwise coprime (their differences are nonzero
// constants), so it suffices that each d+i is squarefree.
bool squarefree_root_check(long k);

struct ScanResult {
    long count_squarefree = 0;
    long count_total = 0;
    double density = 0.0;
    long bound_failures = 0;  // counted n where some D_i < (d+i)/B' (expected 0)
};

// Counts n in (k, n_max] with f(n)/B' squarefree, and checks the
// discriminant floor D_i >= (d+i)/B' at every counted n.
ScanResult conjecture_scan(long k, const Int& n_max);

// Same count restricted to the window [n_lo, n_hi] (clamped below to the
// first legal n). Counts are additive across adjacent windows; density is
// per window.
ScanResult conjecture_scan_range(long k, const Int& n_lo, const Int& n_hi);

}  // namespace quadseq::family
