#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

// Exact integer utilities: factorization, squarefree parts, Kronecker
// symbols, binomials, and dense integer polynomials. Everything here is
// deterministic; randomized steps (Pollard rho restarts, extra primality
// bases for very large inputs) run from fixed seeds.

namespace quadseq::arith {

using Int = mpz_class;

// Prime factorization of a positive integer, primes ascending.
struct Factorization {
    Int value;
    std::vector<std::pair<Int, int>> factors;

    Int squarefree_part() const;  // product of primes with odd exponent
    Int radical() const;          // product of distinct primes
    bool squarefree() const;      // all exponents equal 1
};

Int isqrt(const Int& n);    // floor(sqrt(n)), n >= 0
bool is_square(const Int& n);
bool is_prime(const Int& n);
Factorization factor(const Int& n);  // n >= 1
// Union of two factorizations with disjoint prime sets (coprime values).
Factorization merge_coprime(const Factorization& a, const Factorization& b);

Int squarefree_part(const Int& n);  // n >= 1
Int radical(const Int& n);          // n >= 1
bool is_squarefree(const Int& n);   // n >= 1

// Kronecker symbol (D/n), D on top, defined for all integers.
int kronecker(const Int& D, const Int& n);
int kronecker_ll(long long D, long long n);

Int binomial(const Int& n, unsigned long k);  // n >= 0; 0 when k > n

// Largest divisor B' of B with B/B' squarefree, i.e. B / radical(B).
Int reduced_divisor(const Int& B);  // B >= 1

// Dense integer polynomial; coeffs[i] multiplies x^i. The zero polynomial
// has an empty coefficient vector and degree -1.
struct IntPolynomial {
    std::vector<Int> coeffs;

    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Int> c);
    static IntPolynomial constant(const Int& c);
    static IntPolynomial x_power(int e);  // x^e

    int degree() const;
    bool is_zero() const { return coeffs.empty(); }
    const Int& leading() const;  // nonzero polynomial only
    Int operator()(const Int& x) const;
    IntPolynomial derivative() const;
    Int content() const;               // gcd of coefficients, >= 0
    IntPolynomial primitive_part() const;  // content 1, leading > 0

    bool operator==(const IntPolynomial&) const = default;
};

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);

// gcd of f(0), f(1), ..., f(deg f); equals gcd of f over all integers.
Int fixed_divisor(const IntPolynomial& f);  // f nonzero

// True when gcd(f, f') is constant, i.e. f has no repeated complex root.
// Primitive pseudo-remainder sequence over the integers; no floating point.
bool poly_gcd_squarefree(const IntPolynomial& f);  // f nonzero

}  // namespace quadseq::arith
