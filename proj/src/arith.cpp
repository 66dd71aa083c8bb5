#include "quadseq/arith.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace quadseq::arith {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = [] {
        const uint32_t limit = 10000;
        std::vector<bool> comp(limit + 1, false);
        std::vector<uint32_t> ps;
        for (uint32_t i = 2; i <= limit; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (uint64_t j = uint64_t(i) * i; j <= limit; j += i) comp[j] = true;
        }
        return ps;
    }();
    return primes;
}

u64 mulmod_u64(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

constexpr u64 kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Deterministic for all 64-bit inputs with the fixed base set.
bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : kMrBases)
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) { d >>= 1; ++s; }
    for (u64 a : kMrBases) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Strong probable prime test to base a; n odd, n > 2.
bool sprp_mpz(const Int& n, const Int& a) {
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

// The 13-base set is a proven deterministic witness set below this bound.
const Int& mr_deterministic_bound() {
    static const Int bound("3317044064679887385961981");
    return bound;
}

u64 brent_rho_u64(u64 n) {
    // n odd composite, no factor <= 10^4
    for (u64 c = 1;; ++c) {
        const u64 m = 128;
        u64 y = 2, q = 1, g = 1, x = 0, ys = 0, r = 1;
        auto step = [&](u64 v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = step(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = step(ys);
                u64 diff = x > ys ? x - ys : ys - x;
                if (diff == 0) break;
                g = std::gcd(diff, n);
            }
        }
        if (g != n && g > 1) return g;
    }
}

Int brent_rho_mpz(const Int& n) {
    for (unsigned long c = 1;; ++c) {
        const unsigned long m = 128;
        Int y = 2, q = 1, g = 1, x, ys, diff;
        unsigned long r = 1;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    diff = x - y;
                    q = q * diff % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                diff = x - ys;
                if (diff == 0) break;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n && g > 1) return g;
    }
}

void factor_u64_into(u64 n, std::map<Int, int>& out) {
    // small primes already stripped by the caller
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[Int(static_cast<unsigned long>(n))] += 1;
        return;
    }
    u64 root = u64(sqrtl((long double)n));
    while (u128(root) * root > n) --root;
    while (u128(root + 1) * (root + 1) <= n) ++root;
    if (u128(root) * root == n) {
        factor_u64_into(root, out);
        factor_u64_into(root, out);
        return;
    }
    u64 d = brent_rho_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

void factor_mpz_into(const Int& n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        factor_u64_into(mpz_get_ui(n.get_mpz_t()), out);
        return;
    }
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        // find the smallest exponent that extracts an exact root
        for (unsigned long e = 2;; ++e) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                std::map<Int, int> base;
                factor_mpz_into(root, base);
                for (const auto& [p, k] : base) out[p] += k * int(e);
                return;
            }
            if (mpz_sizeinbase(n.get_mpz_t(), 2) < e) break;
        }
    }
    Int d = brent_rho_mpz(n);
    factor_mpz_into(d, out);
    factor_mpz_into(n / d, out);
}

}  // namespace

Int isqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative input");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
    for (uint32_t p : small_primes()) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
        if (p > 200) break;
    }
    for (u64 a : kMrBases)
        if (!sprp_mpz(n, Int(static_cast<unsigned long>(a)))) return false;
    if (n < mr_deterministic_bound()) return true;
    for (u64 a : {41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97})
        if (!sprp_mpz(n, Int(static_cast<unsigned long>(a)))) return false;
    // extra rounds, seeded from the input so runs are reproducible
    std::mt19937_64 rng(0x5eedULL ^ mpz_get_ui(n.get_mpz_t()));
    for (int i = 0; i < 24; ++i) {
        Int a = Int(static_cast<unsigned long>(rng() | 2)) % (n - 3) + 2;
        if (!sprp_mpz(n, a)) return false;
    }
    return true;
}

Factorization factor(const Int& n) {
    if (n < 1) throw std::invalid_argument("factor: input must be >= 1");
    Factorization out;
    out.value = n;
    std::map<Int, int> acc;
    Int work = n;
    for (uint32_t p : small_primes()) {
        if (Int(p) * p > work) break;
        if (!mpz_divisible_ui_p(work.get_mpz_t(), p)) continue;
        int e = 0;
        do {
            mpz_divexact_ui(work.get_mpz_t(), work.get_mpz_t(), p);
            ++e;
        } while (mpz_divisible_ui_p(work.get_mpz_t(), p));
        acc[Int(p)] += e;
    }
    if (work > 1) factor_mpz_into(work, acc);
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

Factorization merge_coprime(const Factorization& a, const Factorization& b) {
    Factorization out;
    out.value = a.value * b.value;
    out.factors.reserve(a.factors.size() + b.factors.size());
    auto ia = a.factors.begin();
    auto ib = b.factors.begin();
    while (ia != a.factors.end() || ib != b.factors.end()) {
        if (ib == b.factors.end() || (ia != a.factors.end() && ia->first < ib->first)) {
            out.factors.push_back(*ia++);
        } else if (ia == a.factors.end() || ib->first < ia->first) {
            out.factors.push_back(*ib++);
        } else {
            throw std::logic_error("merge_coprime: shared prime");
        }
    }
    return out;
}

Int Factorization::squarefree_part() const {
    Int m = 1;
    for (const auto& [p, e] : factors)
        if (e % 2 == 1) m *= p;
    return m;
}

Int Factorization::radical() const {
    Int r = 1;
    for (const auto& [p, e] : factors) r *= p;
    return r;
}

bool Factorization::squarefree() const {
    for (const auto& [p, e] : factors)
        if (e > 1) return false;
    return true;
}

Int squarefree_part(const Int& n) {
    if (n < 1) throw std::invalid_argument("squarefree_part: input must be >= 1");
    return factor(n).squarefree_part();
}

Int radical(const Int& n) {
    if (n < 1) throw std::invalid_argument("radical: input must be >= 1");
    return factor(n).radical();
}

bool is_squarefree(const Int& n) {
    if (n < 1) throw std::invalid_argument("is_squarefree: input must be >= 1");
    if (n < 4) return true;
    Int work = n;
    for (uint32_t p : small_primes()) {
        if (Int(p) * p > work) return true;
        if (!mpz_divisible_ui_p(work.get_mpz_t(), p)) continue;
        mpz_divexact_ui(work.get_mpz_t(), work.get_mpz_t(), p);
        if (mpz_divisible_ui_p(work.get_mpz_t(), p)) return false;
    }
    if (work == 1) return true;
    if (is_prime(work)) return true;
    if (mpz_perfect_power_p(work.get_mpz_t())) return false;
    return factor(work).squarefree();
}

int kronecker_ll(long long a, long long b) {
    static const int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (!(a & 1) && !(b & 1)) return 0;
    int k = 1;
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k;
    }
    int v = 0;
    while (!(b & 1)) { ++v; b >>= 1; }
    if (v & 1) k *= tab2[a & 7];
    while (true) {
        if (a == 0) return b == 1 ? k : 0;
        if (a < 0) {
            a = -a;
            if (b & 2) k = -k;
        }
        v = 0;
        while (!(a & 1)) { ++v; a >>= 1; }
        if (v & 1) k *= tab2[b & 7];
        if (a & b & 2) k = -k;
        long long t = b % a;
        b = a;
        a = t;
    }
}

int kronecker(const Int& D, const Int& n) {
    if (mpz_fits_slong_p(D.get_mpz_t()) && mpz_fits_slong_p(n.get_mpz_t())) {
        long d = mpz_get_si(D.get_mpz_t());
        long m = mpz_get_si(n.get_mpz_t());
        if (d != LONG_MIN && m != LONG_MIN) return kronecker_ll(d, m);
    }
    return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t());
}

Int binomial(const Int& n, unsigned long k) {
    if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
    Int r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

Int reduced_divisor(const Int& B) {
    if (B < 1) throw std::invalid_argument("reduced_divisor: input must be >= 1");
    return B / radical(B);
}

}  // namespace quadseq::arith
