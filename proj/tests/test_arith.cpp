#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quadseq/arith.hpp"

#include <cstdint>
#include <random>
#include <vector>

using namespace quadseq::arith;

namespace {

// Oracle: factor by unbounded trial division. Slow and obviously correct;
// usable for inputs whose second-largest prime factor is < 2^20 or so.
std::vector<std::pair<Int, int>> factor_oracle(Int n) {
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Oracle: squarefree flags up to limit by sieving multiples of p^2.
std::vector<bool> squarefree_sieve(uint32_t limit) {
    std::vector<bool> sf(limit + 1, true);
    for (uint64_t p = 2; p * p <= limit; ++p)
        for (uint64_t j = p * p; j <= limit; j += p * p) sf[j] = false;
    return sf;
}

IntPolynomial poly_from(std::initializer_list<long> asc) {
    std::vector<Int> c;
    for (long v : asc) c.emplace_back(v);
    return IntPolynomial(std::move(c));
}

// (n(n-1))^2 - n and its shift product, built by hand from polynomial ops.
IntPolynomial pair_product_poly() {
    IntPolynomial x = IntPolynomial::x_power(1);
    IntPolynomial one = IntPolynomial::constant(1);
    IntPolynomial d = (x * (x - one)) * (x * (x - one)) - x;
    return d * (d + one);
}

}  // namespace

TEST_CASE("isqrt and is_square") {
    CHECK(isqrt(Int(0)) == 0);
    CHECK(isqrt(Int(1)) == 1);
    CHECK(isqrt(Int(3)) == 1);
    CHECK(isqrt(Int(4)) == 2);
    CHECK(isqrt(Int(33)) == 5);
    Int big = Int("1000000000000000000");
    CHECK(isqrt(big) == Int("1000000000"));
    CHECK(isqrt(big - 1) == Int("999999999"));
    CHECK(is_square(Int(0)));
    CHECK(is_square(Int(49)));
    CHECK(!is_square(Int(50)));
    CHECK(!is_square(Int(-4)));
    CHECK_THROWS_AS(isqrt(Int(-1)), std::invalid_argument);
    for (long n = 0; n <= 20000; ++n) {
        Int r = isqrt(Int(n));
        CHECK(r * r <= n);
        CHECK((r + 1) * (r + 1) > n);
    }
}

TEST_CASE("factor matches trial-division oracle") {
    CHECK(factor(Int(1)).factors.empty());
    auto f = factor(Int(1122));
    std::vector<std::pair<Int, int>> want = {{2, 1}, {3, 1}, {11, 1}, {17, 1}};
    CHECK(f.factors == want);
    for (long n = 1; n <= 20000; ++n) {
        CHECK(factor(Int(n)).factors == factor_oracle(Int(n)));
    }
    std::mt19937_64 rng(7);
    for (int t = 0; t < 300; ++t) {
        Int n = Int(static_cast<unsigned long>(rng() % 1000000000000ull + 2));
        CHECK(factor(n).factors == factor_oracle(n));
    }
    CHECK_THROWS_AS(factor(Int(0)), std::invalid_argument);
}

TEST_CASE("factor round-trip up to 10^6") {
    for (long n = 1; n <= 1000000; ++n) {
        auto f = factor(Int(n));
        Int prod = 1;
        for (const auto& [p, e] : f.factors) {
            CHECK(is_prime(p));
            for (int i = 0; i < e; ++i) prod *= p;
        }
        REQUIRE(prod == n);
    }
}

TEST_CASE("factor handles large composites") {
    Int p("1000000007"), q("1000000009"), m("2305843009213693951");  // m = 2^61-1
    auto f1 = factor(p * q);
    REQUIRE(f1.factors.size() == 2);
    CHECK(f1.factors[0] == std::pair<Int, int>{p, 1});
    CHECK(f1.factors[1] == std::pair<Int, int>{q, 1});
    auto f2 = factor(m * p);  // above 64 bits
    REQUIRE(f2.factors.size() == 2);
    CHECK(f2.factors[0] == std::pair<Int, int>{p, 1});
    CHECK(f2.factors[1] == std::pair<Int, int>{m, 1});
    auto f3 = factor(p * p * p);  // perfect power above 64 bits
    REQUIRE(f3.factors.size() == 1);
    CHECK(f3.factors[0] == std::pair<Int, int>{p, 3});
    auto f4 = factor(p * p * q * q);
    REQUIRE(f4.factors.size() == 2);
    CHECK(f4.factors[0] == std::pair<Int, int>{p, 2});
    CHECK(f4.factors[1] == std::pair<Int, int>{q, 2});
    // two runs give identical results
    CHECK(factor(m * p).factors == f2.factors);
}

TEST_CASE("is_prime") {
    CHECK(!is_prime(Int(0)));
    CHECK(!is_prime(Int(1)));
    CHECK(is_prime(Int(2)));
    CHECK(is_prime(Int(3)));
    CHECK(!is_prime(Int(561)));   // Carmichael
    CHECK(!is_prime(Int(46657)));  // Carmichael
    CHECK(is_prime(Int("2305843009213693951")));  // 2^61-1
    CHECK(!is_prime(Int("2305843009213693951") * Int("1000000007")));
    // around the 64-bit boundary
    CHECK(is_prime(Int("18446744073709551557")));
    CHECK(!is_prime(Int("18446744073709551617")));  // 274177 * 67280421310721
    int count = 0;
    for (long n = 2; n < 10000; ++n)
        if (is_prime(Int(n))) ++count;
    CHECK(count == 1229);
}

TEST_CASE("squarefree_part and is_squarefree") {
    CHECK(squarefree_part(Int(12)) == 3);
    CHECK(squarefree_part(Int(33)) == 33);
    CHECK(squarefree_part(Int(50)) == 2);
    CHECK(squarefree_part(Int(1)) == 1);
    auto sf = squarefree_sieve(100000);
    for (long n = 1; n <= 100000; ++n) {
        Int m = squarefree_part(Int(n));
        CHECK(is_squarefree(m));
        CHECK(is_square(Int(n) / m));
        CHECK(mpz_divisible_p(Int(n).get_mpz_t(), m.get_mpz_t()));
        CHECK(is_squarefree(Int(n)) == sf[n]);
    }
    // squarefree part is multiplicative across coprime factors
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        Int a = Int(static_cast<unsigned long>(rng() % 100000 + 1));
        Int b = Int(static_cast<unsigned long>(rng() % 100000 + 1));
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        if (g != 1) continue;
        CHECK(squarefree_part(a * b) == squarefree_part(a) * squarefree_part(b));
    }
}

TEST_CASE("merge_coprime") {
    auto ab = merge_coprime(factor(Int(12)), factor(Int(35)));
    CHECK(ab.value == 420);
    CHECK(ab.factors == factor(Int(420)).factors);
    CHECK_THROWS_AS(merge_coprime(factor(Int(6)), factor(Int(10))), std::logic_error);
}

TEST_CASE("kronecker examples and dual route") {
    CHECK(kronecker(Int(5), Int(5)) == 0);
    CHECK(kronecker(Int(8), Int(3)) == -1);
    CHECK(kronecker(Int(5), Int(4)) == 1);
    CHECK(kronecker(Int(-4), Int(5)) == 1);
    CHECK(kronecker(Int(12), Int(-1)) == 1);
    CHECK(kronecker(Int(-7), Int(-1)) == -1);
    CHECK(kronecker(Int(1), Int(0)) == 1);
    CHECK(kronecker(Int(7), Int(0)) == 0);
    // int64 fast path against gmp's implementation
    for (long d = -300; d <= 300; ++d)
        for (long n = -300; n <= 300; ++n)
            CHECK(kronecker_ll(d, n) == mpz_kronecker(Int(d).get_mpz_t(), Int(n).get_mpz_t()));
    // and through the dispatching front end on values past 64 bits
    Int big("123456789012345678901234567891");
    CHECK(kronecker(big, Int(997)) == mpz_kronecker(big.get_mpz_t(), Int(997).get_mpz_t()));
}

TEST_CASE("kronecker is completely multiplicative in the bottom argument") {
    std::vector<int8_t> chi(250001);
    for (long D = -200; D <= 200; ++D) {
        for (long x = 1; x <= 250000; ++x) chi[x] = int8_t(kronecker_ll(D, x));
        for (long m = 1; m <= 500; ++m)
            for (long n = 1; n <= 500; ++n)
                if (chi[m] * chi[n] != chi[m * n]) {
                    CAPTURE(D);
                    CAPTURE(m);
                    CAPTURE(n);
                    REQUIRE(false);
                }
    }
    CHECK(true);
}

TEST_CASE("kronecker periodicity for discriminant-shaped top arguments") {
    for (long D = -200; D <= 200; ++D) {
        long r = ((D % 4) + 4) % 4;
        if (r != 0 && r != 1) continue;
        if (D == 0) continue;
        long period = D > 0 ? D : -D;
        for (long n = 1; n <= 600; ++n)
            CHECK(kronecker_ll(D, n + period) == kronecker_ll(D, n));
    }
}

TEST_CASE("binomial") {
    CHECK(binomial(Int(7), 2) == 21);
    CHECK(binomial(Int(8), 2) == 28);
    CHECK(binomial(Int(5), 0) == 1);
    CHECK(binomial(Int(5), 7) == 0);
    CHECK(binomial(Int(2000), 5) == Int("265335665000400"));
    for (long n = 1; n <= 60; ++n)
        for (unsigned long k = 1; k <= static_cast<unsigned long>(n); ++k)
            CHECK(binomial(Int(n), k) == binomial(Int(n - 1), k - 1) + binomial(Int(n - 1), k));
}

TEST_CASE("reduced_divisor") {
    CHECK(reduced_divisor(Int(4)) == 2);
    CHECK(reduced_divisor(Int(12)) == 2);
    CHECK(reduced_divisor(Int(6)) == 1);
    CHECK(reduced_divisor(Int(1)) == 1);
    CHECK(reduced_divisor(Int(360)) == 12);  // 360 = 2^3 3^2 5, radical 30
    for (long B = 1; B <= 2000; ++B) {
        Int Bp = reduced_divisor(Int(B));
        CHECK(mpz_divisible_p(Int(B).get_mpz_t(), Bp.get_mpz_t()));
        CHECK(is_squarefree(Int(B) / Bp));
        // minimality, prime by prime: shrinking B' by any of its primes
        // leaves a non-squarefree quotient
        for (const auto& [p, e] : factor(Bp).factors)
            CHECK(!is_squarefree(Int(B) / (Bp / p)));
    }
}

TEST_CASE("polynomial basics") {
    IntPolynomial z;
    CHECK(z.degree() == -1);
    CHECK(z.is_zero());
    IntPolynomial f = poly_from({0, 1, 1});  // x^2 + x
    CHECK(f.degree() == 2);
    CHECK(f(Int(3)) == 12);
    CHECK(f(Int(-3)) == 6);
    CHECK(f.derivative() == poly_from({1, 2}));
    CHECK((f * f)(Int(3)) == 144);
    CHECK((f - f).is_zero());
    CHECK(poly_from({2, 4, 6}).content() == 2);
    CHECK(poly_from({-2, -4}).primitive_part() == poly_from({1, 2}));
    CHECK(poly_from({2, 4, -6}).primitive_part() == poly_from({-1, -2, 3}));
}

TEST_CASE("fixed_divisor examples") {
    CHECK(fixed_divisor(poly_from({0, 1, 1})) == 2);  // x^2 + x
    CHECK(fixed_divisor(poly_from({0, 1})) == 1);     // x
    CHECK(fixed_divisor(poly_from({6})) == 6);
    IntPolynomial f = pair_product_poly();
    CHECK(f.degree() == 8);
    CHECK(f(Int(2)) == 6);
    CHECK(f(Int(3)) == 1122);
    CHECK(f(Int(4)) == 19740);
    CHECK(fixed_divisor(f) == 6);
}

TEST_CASE("fixed_divisor divides everywhere, maximally") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 50; ++t) {
        std::vector<Int> c(1 + rng() % 6 + 1);
        for (Int& v : c) v = Int(long(rng() % 19) - 9);
        IntPolynomial f(std::move(c));
        if (f.is_zero()) continue;
        Int B = fixed_divisor(f);
        REQUIRE(B >= 1);
        Int twoB = 2 * B;
        bool two_b_divides_all = true;
        for (long n = -100; n <= 100; ++n) {
            Int v = f(Int(n));
            CHECK(mpz_divisible_p(v.get_mpz_t(), B.get_mpz_t()));
            if (!mpz_divisible_p(v.get_mpz_t(), twoB.get_mpz_t())) two_b_divides_all = false;
        }
        CHECK(!two_b_divides_all);
    }
}

TEST_CASE("poly_gcd_squarefree") {
    CHECK(!poly_gcd_squarefree(poly_from({0, 0, 1})));  // x^2
    CHECK(poly_gcd_squarefree(poly_from({0, -1, 1})));  // x^2 - x
    CHECK(poly_gcd_squarefree(poly_from({5})));
    CHECK(!poly_gcd_squarefree(poly_from({1, 2, 1})));  // (x+1)^2
    CHECK(!poly_gcd_squarefree(poly_from({4, 0, -4, 0, 1}) * poly_from({0, 1})));  // x(x^2-2)^2
    CHECK(poly_gcd_squarefree(pair_product_poly()));
    // (x^2+1)(x^2-2) has no repeated complex root even though it has no
    // rational one
    CHECK(poly_gcd_squarefree(poly_from({1, 0, 1}) * poly_from({-2, 0, 1})));
    CHECK(!poly_gcd_squarefree(poly_from({1, 0, 1}) * poly_from({1, 0, 1})));
}
