#include "quadseq/family.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace quadseq::family {

namespace {

Int pow_ui(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Int factorial(unsigned long t) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), t);
    return r;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("certificate: ") + what);
}

FamilyRow build_row(long k, const Int& n, long i) {
    auto [A, N] = shifted_decomposition(k, n, i);
    auto [x, y] = family_unit(k, n, i);
    Int t = n - i;
    Int c = N / t;  // A^2 t - 1, always coprime to t
    assert(gcd(t, c) == 1);
    Int m = arith::squarefree_part(t) * arith::squarefree_part(c);
    assert(m >= 2);
    Int D = (m % 4 == 1) ? m : 4 * m;
    return {i, A, x, y, N, m, D};
}

// x + y sqrt(N) < B for every row, decided on integers. The provable
// constant is 4: x = 2 A^2 t - 1 < 2 n^(2k+1) and y sqrt(N) < 2 A (A t)
// <= 2 n^(2k+1), and no smaller constant works for all n (the ratio tends
// to 4 along i = k).
bool unit_bound_holds(const FamilyInstance& inst) {
    Int B = 4 * pow_ui(inst.n, (unsigned long)(2 * inst.k + 1));
    for (const auto& row : inst.rows) {
        if (B <= row.x) return false;
        if ((B - row.x) * (B - row.x) <= row.y * row.y * row.N) return false;
    }
    return true;
}

arith::IntPolynomial d_polynomial(long k) {
    using arith::IntPolynomial;
    IntPolynomial p = IntPolynomial::constant(1);
    for (long j = 0; j <= k; ++j)
        p = p * IntPolynomial(std::vector<Int>{Int(-j), Int(1)});
    return p * p - IntPolynomial::x_power(1);
}

}  // namespace

Int d_of(long k, const Int& n) {
    if (k < 0 || n <= k) throw std::invalid_argument("d_of: need n > k >= 0");
    Int prod = 1;
    for (long j = 0; j <= k; ++j) prod *= n - j;
    Int d = prod * prod - n;
    if (d < 2) throw std::invalid_argument("d_of: need n >= 2 when k = 0");
    return d;
}

std::pair<Int, Int> shifted_decomposition(long k, const Int& n, long i) {
    if (i < 0 || i > k) throw std::invalid_argument("shifted_decomposition: need 0 <= i <= k");
    Int d = d_of(k, n);
    Int A = 1;
    for (long j = 0; j <= k; ++j)
        if (j != i) A *= n - j;
    Int t = n - i;
    Int N = A * A * t * t - t;
    assert(N == d + i);
    return {A, N};
}

std::pair<Int, Int> family_unit(long k, const Int& n, long i) {
    auto [A, N] = shifted_decomposition(k, n, i);
    Int t = n - i;
    Int x = 2 * A * A * t - 1;
    Int y = 2 * A;
    assert(x * x - N * y * y == 1);
    return {x, y};
}

unsigned unit_power_check(long k, const Int& n, long i) {
    auto [A, N] = shifted_decomposition(k, n, i);
    if (arith::is_square(N)) throw std::logic_error("unit_power_check: degenerate square N_i");
    FamilyRow row = build_row(k, n, i);
    cfrac::FundamentalUnit eps = cfrac::fundamental_unit(row.D);
    // x + y sqrt N in half coordinates over sqrt D: N = m s^2 and
    // sqrt N = s sqrt m, with sqrt D = sqrt m (D odd) or 2 sqrt m.
    Int s = arith::isqrt(row.N / row.m);
    Int tu = 2 * row.x;
    Int tv = (row.D == row.m) ? Int(2 * row.y * s) : Int(row.y * s);
    for (unsigned e = 1; e <= 64; ++e) {
        auto [u, v] = cfrac::unit_power(eps, e);
        if (u == tu && v == tv) return e;
        if (u > tu) break;
    }
    throw std::logic_error("unit_power_check: not a small power of the fundamental unit");
}

std::pair<bool, bool> discriminant_bound_check(long k, const Int& n) {
    d_of(k, n);  // domain check
    bool first = arith::is_squarefree(arith::binomial(n, (unsigned long)(k + 1)));
    Int F = factorial((unsigned long)(k + 1));
    bool second = true;
    for (long i = 0; i <= k; ++i) {
        Int t = n - i;
        if (arith::squarefree_part(t) * F < t) {
            second = false;
            break;
        }
    }
    return {first, second};
}

bool discriminant_floor_check(long k, const Int& n) {
    d_of(k, n);
    Int F = factorial((unsigned long)(k + 1));
    for (long i = 0; i <= k; ++i) {
        Int t = n - i;
        Int lb = arith::squarefree_part(t);  // m_i >= lb since the cofactor is coprime
        if (lb * F >= t) continue;
        // Need squarefree_part(c) >= r. Scanning s upward, the first s with
        // c/s a perfect square is exactly squarefree_part(c); no hit below r
        // certifies the floor without factoring c.
        auto [A, N] = shifted_decomposition(k, n, i);
        Int c = N / t;
        Int r = (t + lb * F - 1) / (lb * F);
        Int exact_c = 0;
        for (Int s = 1; s < r; ++s) {
            if (c % s == 0 && arith::is_square(c / s)) {
                exact_c = s;
                break;
            }
        }
        if (exact_c == 0) continue;
        Int m = lb * exact_c;
        Int D = (m % 4 == 1) ? m : 4 * m;
        if (D * F < t) return false;
    }
    return true;
}

FamilyInstance build_instance(long k, const Int& n) {
    FamilyInstance inst;
    inst.k = k;
    inst.n = n;
    inst.d = d_of(k, n);
    for (long i = 0; i <= k; ++i) {
        Int N = shifted_decomposition(k, n, i).second;
        if (arith::is_square(N)) {
            inst.degenerate.push_back(i);
            continue;
        }
        inst.rows.push_back(build_row(k, n, i));
    }
    return inst;
}

FamilyCertificate certify(long k, const Int& n, CertifyLevel level) {
    FamilyCertificate cert;
    cert.instance = build_instance(k, n);
    cert.binomial_squarefree =
        arith::is_squarefree(arith::binomial(n, (unsigned long)(k + 1)));
    cert.unit_bound_ok = unit_bound_holds(cert.instance);
    if (level == CertifyLevel::class_numbers && !cert.instance.rows.empty()) {
        long mh = std::numeric_limits<long>::max();
        for (const auto& row : cert.instance.rows) {
            classgroup::FieldInvariants inv = classgroup::class_number(row.N);
            if (inv.m != row.m || inv.D != row.D)
                throw std::logic_error("certify: inconsistent squarefree split");
            mh = std::min(mh, inv.h);
            cert.invariants.push_back(std::move(inv));
        }
        cert.min_h = mh;
    }
    return cert;
}

void verify_certificate(const FamilyCertificate& cert) {
    const FamilyInstance& inst = cert.instance;
    long k = inst.k;
    const Int& n = inst.n;
    require(inst.d == d_of(k, n), "stated d");
    require(inst.degenerate.empty(), "unexpected degenerate entries");
    require((long)inst.rows.size() == k + 1, "row count");
    for (long i = 0; i <= k; ++i) {
        const FamilyRow& row = inst.rows[(size_t)i];
        require(row.i == i, "row index");
        auto [A, N] = shifted_decomposition(k, n, i);
        auto [x, y] = family_unit(k, n, i);
        require(row.A == A && row.N == N, "stated decomposition");
        require(row.x == x && row.y == y, "stated unit");
        require(N == inst.d + i, "shift identity");
        require(row.m >= 2 && arith::is_squarefree(row.m), "m squarefree");
        require(row.N % row.m == 0 && arith::is_square(row.N / row.m),
                "m is the squarefree part");
        require(row.D == ((row.m % 4 == 1) ? row.m : 4 * row.m), "stated discriminant");
    }
    require(cert.binomial_squarefree ==
                arith::is_squarefree(arith::binomial(n, (unsigned long)(k + 1))),
            "binomial flag");
    require(cert.unit_bound_ok == unit_bound_holds(inst), "unit bound flag");
    if (cert.invariants.empty()) {
        require(!cert.min_h.has_value(), "min_h without invariants");
        return;
    }
    require(cert.min_h.has_value(), "min_h missing");
    require(cert.invariants.size() == inst.rows.size(), "invariant count");
    long mh = std::numeric_limits<long>::max();
    for (size_t j = 0; j < inst.rows.size(); ++j) {
        const auto& row = inst.rows[j];
        const auto& inv = cert.invariants[j];
        require(inv.radicand == row.N && inv.m == row.m && inv.D == row.D,
                "invariants match row");
        classgroup::validate(inv);
        cfrac::FundamentalUnit eps = cfrac::fundamental_unit(inv.D);
        require(eps.u == inv.unit.u && eps.v == inv.unit.v && eps.norm == inv.unit.norm,
                "stated fundamental unit");
        require(classgroup::narrow_class_number(inv.D) == inv.h_plus, "stated h+");
        double want, slack;
        if (inv.D <= classgroup::kL1ExactCap) {
            want = classgroup::L1_exact(inv.D);
            slack = 1e-8;
        } else {
            want = classgroup::L1_truncated(inv.D, 1e-6).value;
            slack = 2.1e-6;
        }
        require(std::abs(inv.L1 - want) <= slack, "stated L-value");
        mh = std::min(mh, inv.h);
    }
    require(*cert.min_h == mh, "stated min_h");
}

SearchResult theorem1_search(long k, double X, const Int& n_min, const Int& n_max) {
    if (k < 0) throw std::invalid_argument("theorem1_search: k >= 0");
    SearchResult res;
    Int lo = n_min;
    Int floor_n = (k == 0) ? Int(2) : Int(k + 1);
    if (lo < floor_n) lo = floor_n;
    for (Int n = lo; n <= n_max; ++n) {
        FamilyCertificate cert = certify(k, n, CertifyLevel::class_numbers);
        long mh = *cert.min_h;
        res.max_min_h = std::max(res.max_min_h, mh);
        if ((double)mh > X) {
            res.found = true;
            res.n = n;
            res.certificate = std::move(cert);
            return res;
        }
    }
    return res;
}

long remark1_k_bound(const Int& n, double eps) {
    if (n < 3) throw std::invalid_argument("remark1_k_bound: need n >= 3");
    if (!(eps > 0.0) || !(eps < 0.1))
        throw std::invalid_argument("remark1_k_bound: need eps in (0, 0.1)");
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_z(t, n.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    double ln_n = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    double lnln = std::log(ln_n);  // n >= 3 makes this positive
    long a = (long)std::floor(ln_n / 5.0) - 1;
    long b = (long)std::floor((1.0 - 10.0 * eps) * ln_n / lnln);
    return std::max(0L, std::min(a, b));
}

arith::IntPolynomial conjecture_poly(long k) {
    if (k < 0) throw std::invalid_argument("conjecture_poly: k >= 0");
    using arith::IntPolynomial;
    IntPolynomial d = d_polynomial(k);
    IntPolynomial f = IntPolynomial::constant(1);
    for (long i = 0; i <= k; ++i)
        f = f * (d + IntPolynomial::constant(i));
    return f;
}

std::pair<Int, Int> conjecture_constants(long k) {
    Int B = arith::fixed_divisor(conjecture_poly(k));
    return {B, arith::reduced_divisor(B)};
}

bool squarefree_root_check(long k) {
    if (k < 0) throw std::invalid_argument("squarefree_root_check: k >= 0");
    // The factors d+i are pairwise coprime (differences are nonzero
    // constants), so the product is squarefree iff each factor is.
    arith::IntPolynomial d = d_polynomial(k);
    for (long i = 0; i <= k; ++i)
        if (!arith::poly_gcd_squarefree(d + arith::IntPolynomial::constant(i)))
            return false;
    return true;
}

ScanResult conjecture_scan(long k, const Int& n_max) {
    return conjecture_scan_range(k, 2, n_max);
}

ScanResult conjecture_scan_range(long k, const Int& n_lo, const Int& n_hi) {
    if (k < 0) throw std::invalid_argument("conjecture_scan: k >= 0");
    Int B1 = conjecture_constants(k).second;
    arith::Factorization fB1 = arith::factor(B1);
    bool plain = (B1 == 1);
    ScanResult res;
    Int start = (k == 0) ? Int(2) : Int(k + 1);
    if (start < n_lo) start = n_lo;
    for (Int n = start; n <= n_hi; ++n) {
        ++res.count_total;
        Int d = d_of(k, n);
        if (plain) {
            // Cheap rejections valid when nothing is divided out: two even
            // N_i, or a square factor already inside some n-i.
            int evens = 0;
            for (long i = 0; i <= k; ++i)
                if ((d + i) % 2 == 0) ++evens;
            if (evens >= 2) continue;
            bool t_bad = false;
            for (long i = 0; i <= k && !t_bad; ++i)
                t_bad = !arith::is_squarefree(n - i);
            if (t_bad) continue;
        }
        std::vector<arith::Factorization> parts;
        parts.reserve((size_t)k + 1);
        std::map<Int, int> exps;
        bool square_hit = false;
        for (long i = 0; i <= k && !square_hit; ++i) {
            Int t = n - i;
            Int c = shifted_decomposition(k, n, i).second / t;
            arith::Factorization fi =
                arith::merge_coprime(arith::factor(t), arith::factor(c));
            for (const auto& [p, e] : fi.factors) {
                exps[p] += e;
                if (plain && exps[p] > 1) square_hit = true;
            }
            parts.push_back(std::move(fi));
        }
        if (square_hit) continue;
        for (const auto& [p, e] : fB1.factors) exps[p] -= e;
        bool sf = true;
        for (const auto& [p, e] : exps)
            if (e > 1) {
                sf = false;
                break;
            }
        if (!sf) continue;
        ++res.count_squarefree;
        for (long i = 0; i <= k; ++i) {
            Int m = parts[(size_t)i].squarefree_part();
            Int D = (m % 4 == 1) ? m : 4 * m;
            if (D * B1 < d + i) ++res.bound_failures;
        }
    }
    if (res.count_total > 0)
        res.density = (double)res.count_squarefree / (double)res.count_total;
    return res;
}

}  // namespace quadseq::family
