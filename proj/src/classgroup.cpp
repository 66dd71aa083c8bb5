#include "quadseq/classgroup.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace quadseq::classgroup {

using arith::is_square;
using arith::isqrt;
using arith::kronecker;
using cfrac::FundamentalUnit;
using cfrac::is_fundamental_discriminant;

namespace {

unsigned g_precision_bits = 128;

struct Real {
    mpfr_t x;
    Real() { mpfr_init2(x, g_precision_bits); }
    ~Real() { mpfr_clear(x); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
};

void require_form_discriminant(const Int& D) {
    if (D <= 0 || is_square(D))
        throw std::invalid_argument("discriminant must be positive and non-square");
    long r = mpz_fdiv_ui(D.get_mpz_t(), 4);
    if (r != 0 && r != 1) throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
}

// sqrt D - b < 2|a| < sqrt D + b, decided exactly
bool in_window(const Int& two_abs_a, const Int& b, const Int& D) {
    Int hi = two_abs_a + b;
    if (hi * hi <= D) return false;
    Int lo = two_abs_a - b;
    return lo <= 0 || lo * lo < D;
}

}  // namespace

Int fundamental_discriminant(const Int& N) {
    if (N < 2 || is_square(N)) throw std::invalid_argument("radicand must be a non-square >= 2");
    Int m = arith::squarefree_part(N);
    return mpz_fdiv_ui(m.get_mpz_t(), 4) == 1 ? m : Int(4 * m);
}

bool is_reduced(const QuadForm& f) {
    Int D = f.discriminant();
    if (D <= 0 || is_square(D)) return false;
    if (f.b <= 0 || f.b * f.b >= D) return false;
    return in_window(2 * abs(f.a), f.b, D);
}

std::vector<QuadForm> reduced_forms(const Int& D) {
    require_form_discriminant(D);
    Int s = isqrt(D);
    std::vector<QuadForm> forms;
    for (Int b = mpz_odd_p(D.get_mpz_t()) ? 1 : 2; b * b < D; b += 2) {
        Int t = (D - b * b) / 4;  // = |a|*|c| for forms with this b
        Int lo = (s - b) / 2;
        if (lo < 1) lo = 1;
        Int hi = (s + b) / 2 + 1;
        for (Int aa = lo; aa <= hi; ++aa) {
            if (!in_window(2 * aa, b, D)) continue;
            if (!mpz_divisible_p(t.get_mpz_t(), aa.get_mpz_t())) continue;
            Int cc = t / aa;
            forms.push_back({aa, b, -cc});
            forms.push_back({-aa, b, cc});
        }
    }
    std::sort(forms.begin(), forms.end());
    return forms;
}

QuadForm rho(const QuadForm& f) {
    Int D = f.discriminant();
    Int c2 = 2 * abs(f.c);
    Int s = isqrt(D);
    Int t;
    mpz_fdiv_r(t.get_mpz_t(), Int(-f.b).get_mpz_t(), c2.get_mpz_t());
    Int off;
    mpz_fdiv_r(off.get_mpz_t(), Int(s - t).get_mpz_t(), c2.get_mpz_t());
    Int r = s - off;  // the unique r = -b mod 2|c| in (sqrt D - 2|c|, sqrt D)
    return {f.c, r, (r * r - D) / (4 * f.c)};
}

long narrow_class_number(const Int& D) {
    auto forms = reduced_forms(D);
    std::map<QuadForm, size_t> index;
    for (size_t i = 0; i < forms.size(); ++i) index[forms[i]] = i;
    std::vector<bool> seen(forms.size(), false);
    long cycles = 0;
    for (size_t i = 0; i < forms.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        QuadForm g = forms[i];
        do {
            auto it = index.find(g);
            if (it == index.end()) throw std::logic_error("rho left the reduced forms");
            seen[it->second] = true;
            g = rho(g);
        } while (!(g == forms[i]));
    }
    return cycles;
}

void set_precision_bits(unsigned bits) {
    if (bits < 16 || bits > 1u << 20) throw std::invalid_argument("precision out of range");
    g_precision_bits = bits;
}

unsigned precision_bits() { return g_precision_bits; }

namespace {

double log_sin_sum(long d, mpfr_prec_t prec, double* budget_out) {
    mpfr_t pi_over_d, ang, term, acc;
    mpfr_inits2(prec, pi_over_d, ang, term, acc, (mpfr_ptr) nullptr);
    mpfr_const_pi(pi_over_d, MPFR_RNDN);
    mpfr_div_si(pi_over_d, pi_over_d, d, MPFR_RNDN);
    mpfr_set_zero(acc, 1);
    long terms = 0;
    for (long a = 1; 2 * a < d; ++a) {
        int chi = arith::kronecker_ll(d, a);
        if (chi == 0) continue;
        ++terms;
        mpfr_mul_si(ang, pi_over_d, a, MPFR_RNDN);
        mpfr_sin(term, ang, MPFR_RNDN);
        mpfr_log(term, term, MPFR_RNDN);
        if (chi > 0)
            mpfr_sub(acc, acc, term, MPFR_RNDN);  // result carries the -1/sqrt(D) sign
        else
            mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    mpfr_t root;
    mpfr_init2(root, prec);
    mpfr_set_si(root, d, MPFR_RNDN);
    mpfr_sqrt(root, root, MPFR_RNDN);
    mpfr_mul_2ui(acc, acc, 1, MPFR_RNDN);  // pair a and D-a: chi is even
    mpfr_div(acc, acc, root, MPFR_RNDN);
    double value = mpfr_get_d(acc, MPFR_RNDN);
    // each of the ~4 roundings per term is within 0.5 ulp of a quantity
    // no larger than the largest |term| ~ log d
    double scale = (double)terms * (log((double)d) + 2.0) + 2.0;
    *budget_out = (4.0 * (double)terms + 8.0) * ldexp(scale, 1 - (int)prec);
    mpfr_clears(pi_over_d, ang, term, acc, root, (mpfr_ptr) nullptr);
    return value;
}

}  // namespace

double L1_exact(const Int& D) {
    if (D <= 1 || !is_fundamental_discriminant(D))
        throw std::invalid_argument("L1_exact: D must be a fundamental discriminant > 1");
    if (!mpz_fits_slong_p(D.get_mpz_t()))
        throw std::invalid_argument("L1_exact: D too large for term-by-term summation");
    long d = mpz_get_si(D.get_mpz_t());

    mpfr_prec_t prec = g_precision_bits;
    for (int attempt = 0; attempt < 4; ++attempt, prec *= 2) {
        double budget = 0.0;
        double value = log_sin_sum(d, prec, &budget);
        if (budget < 1e-9) return value;
    }
    throw std::logic_error("L1_exact: error budget not met even at raised precision");
}

TruncatedL L1_truncated(const Int& D, double tol) {
    if (tol <= 0) throw std::invalid_argument("L1_truncated: tol must be positive");
    if (D <= 1 || !is_fundamental_discriminant(D))
        throw std::invalid_argument("L1_truncated: D must be a fundamental discriminant > 1");
    if (!mpz_fits_slong_p(D.get_mpz_t()))
        throw std::invalid_argument("L1_truncated: D too large");
    long d = mpz_get_si(D.get_mpz_t());

    // |sum_{n>M} chi(n)/n| <= 2 sqrt(D) log D / (M+1) by Abel summation
    // against the Polya-Vinogradov bound on the partial character sums.
    long double pv = 2.0L * sqrtl((long double)d) * logl((long double)d);
    const long m_cap = 200000000;
    long M = (long)(pv / tol) + 1;
    if (M > m_cap) M = m_cap;
    double bound = (double)(pv / (M + 1));

    std::vector<int8_t> chi;
    if (d <= 100000000) {
        chi.resize(d);
        for (long a = 0; a < d; ++a) chi[a] = (int8_t)arith::kronecker_ll(d, a);
    }

    double sum = 0.0, comp = 0.0;  // Kahan
    for (long n = 1; n <= M; ++n) {
        int c = chi.empty() ? arith::kronecker_ll(d, n) : chi[n % d];
        if (c == 0) continue;
        double term = (c > 0 ? 1.0 : -1.0) / (double)n;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return {sum, bound};
}

double regulator(const FundamentalUnit& eps) {
    Real val, root;
    mpfr_set_z(root.x, eps.D.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(root.x, root.x, MPFR_RNDN);
    Real vv;
    mpfr_set_z(vv.x, eps.v.get_mpz_t(), MPFR_RNDN);
    mpfr_mul(root.x, root.x, vv.x, MPFR_RNDN);
    mpfr_set_z(val.x, eps.u.get_mpz_t(), MPFR_RNDN);
    mpfr_add(val.x, val.x, root.x, MPFR_RNDN);
    mpfr_div_2ui(val.x, val.x, 1, MPFR_RNDN);
    mpfr_log(val.x, val.x, MPFR_RNDN);
    return mpfr_get_d(val.x, MPFR_RNDN);
}

long analytic_h(const Int& D) {
    double L1 = L1_exact(D);
    FundamentalUnit eps = cfrac::fundamental_unit(D);
    double hv = sqrt(mpz_get_d(D.get_mpz_t())) * L1 / (2.0 * regulator(eps));
    long h = lround(hv);
    if (fabs(hv - (double)h) >= 0.25)
        throw std::logic_error("analytic_h: value not close to an integer");
    if (h < 1) throw std::logic_error("analytic_h: nonpositive class number");
    return h;
}

void validate(const FieldInvariants& inv) {
    if (inv.radicand < 2 || is_square(inv.radicand))
        throw std::logic_error("field invariants: bad radicand");
    if (inv.m < 2 || !mpz_divisible_p(inv.radicand.get_mpz_t(), inv.m.get_mpz_t()) ||
        !is_square(Int(inv.radicand / inv.m)) || !arith::is_squarefree(inv.m))
        throw std::logic_error("field invariants: m is not the squarefree part");
    Int expect_d = mpz_fdiv_ui(inv.m.get_mpz_t(), 4) == 1 ? inv.m : Int(4 * inv.m);
    if (inv.D != expect_d) throw std::logic_error("field invariants: D does not match m");
    if (inv.unit.D != inv.D || inv.unit.u < 1 || inv.unit.v < 1 ||
        (inv.unit.norm != 1 && inv.unit.norm != -1) ||
        inv.unit.u * inv.unit.u - inv.D * inv.unit.v * inv.unit.v != 4 * inv.unit.norm)
        throw std::logic_error("field invariants: unit does not satisfy its equation");
    if (inv.h < 1 || inv.h_plus < 1) throw std::logic_error("field invariants: h < 1");
    if (inv.unit.norm == -1 ? inv.h != inv.h_plus : 2 * inv.h != inv.h_plus)
        throw std::logic_error("field invariants: h vs h+ vs unit norm mismatch");
    if (!(inv.L1 > 0)) throw std::logic_error("field invariants: L1 not positive");
}

FieldInvariants class_number(const Int& N) {
    FieldInvariants inv;
    inv.radicand = N;
    inv.D = fundamental_discriminant(N);
    inv.m = mpz_fdiv_ui(inv.D.get_mpz_t(), 4) == 0 ? Int(inv.D / 4) : inv.D;
    inv.unit = cfrac::fundamental_unit(inv.D);
    inv.h_plus = narrow_class_number(inv.D);
    if (inv.unit.norm == -1) {
        inv.h = inv.h_plus;
    } else {
        if (inv.h_plus % 2 != 0)
            throw std::logic_error("class_number: odd h+ with norm +1 unit");
        inv.h = inv.h_plus / 2;
    }
    if (inv.D <= kL1ExactCap) {
        inv.L1 = L1_exact(inv.D);
    } else {
        inv.L1 = L1_truncated(inv.D, 1e-6).value;
    }
    validate(inv);
    return inv;
}

}  // namespace quadseq::classgroup
