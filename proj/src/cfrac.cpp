#include "quadseq/cfrac.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace quadseq::cfrac {

using arith::is_square;
using arith::isqrt;

QuadSurd::QuadSurd(Int p, Int q, Int n) : P(std::move(p)), Q(std::move(q)), N(std::move(n)) {
    if (Q == 0) throw std::invalid_argument("QuadSurd: Q must be nonzero");
    if (N <= 0 || is_square(N)) throw std::invalid_argument("QuadSurd: N must be positive and non-square");
    if (!mpz_divisible_p(Int(N - P * P).get_mpz_t(), Q.get_mpz_t())) {
        Int a = abs(Q);
        P *= a;
        N *= a * a;
        Q *= a;
    }
}

QuadSurd QuadSurd::sqrt_of(const Int& n) { return QuadSurd(0, 1, n); }

SurdWalker::SurdWalker(const QuadSurd& s) : P(s.P), Q(s.Q), N(s.N), root(isqrt(s.N)) {}

Int SurdWalker::next() {
    Int a;
    if (Q > 0) {
        mpz_fdiv_q(a.get_mpz_t(), Int(P + root).get_mpz_t(), Q.get_mpz_t());
    } else {
        mpz_fdiv_q(a.get_mpz_t(), Int(P + root + 1).get_mpz_t(), Q.get_mpz_t());
    }
    Int p2 = a * Q - P;
    Int q2 = N - p2 * p2;
    if (!mpz_divisible_p(q2.get_mpz_t(), Q.get_mpz_t()))
        throw std::logic_error("SurdWalker: divisibility invariant broken");
    q2 /= Q;
    P = p2;
    Q = q2;
    return a;
}

Int CFExpansion::quotient(size_t t) const {
    if (t < head.size()) return head[t];
    return period[(t - head.size()) % period.size()];
}

CFExpansion cf_expand(const QuadSurd& s) {
    SurdWalker w(s);
    std::map<std::pair<Int, Int>, size_t> seen;
    std::vector<Int> quotients;
    while (true) {
        auto state = std::make_pair(w.P, w.Q);
        auto [it, fresh] = seen.emplace(state, quotients.size());
        if (!fresh) {
            CFExpansion e;
            e.radicand = s.N;
            e.head.assign(quotients.begin(), quotients.begin() + it->second);
            e.period.assign(quotients.begin() + it->second, quotients.end());
            return e;
        }
        quotients.push_back(w.next());
    }
}

std::pair<Int, Int> convergent(const CFExpansion& e, size_t t) {
    Int h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // h_{-2}, h_{-1}, k_{-2}, k_{-1}
    for (size_t i = 0; i <= t; ++i) {
        Int a = e.quotient(i);
        Int h2 = a * h1 + h0;
        Int k2 = a * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    return {h1, k1};
}

PellPair pell_min(const Int& N) {
    if (N < 2 || is_square(N)) throw std::invalid_argument("pell_min: N must be >= 2 and non-square");
    CFExpansion e = cf_expand(QuadSurd::sqrt_of(N));
    size_t ell = e.period.size();
    auto [p, q] = convergent(e, ell - 1);
    Int check = p * p - N * q * q;
    PellPair out;
    if (ell % 2 == 0) {
        if (check != 1) throw std::logic_error("pell_min: even period did not give +1");
        out.plus = {p, q, +1};
    } else {
        if (check != -1) throw std::logic_error("pell_min: odd period did not give -1");
        out.minus = PellSolution{p, q, -1};
        out.plus = {p * p + N * q * q, 2 * p * q, +1};
    }
    return out;
}

bool is_fundamental_discriminant(const Int& D) {
    if (D == 0 || D == 1) return false;
    Int r = ((D % 4) + 4) % 4;
    if (r == 1) return arith::is_squarefree(abs(D));
    if (r != 0) return false;
    Int m = D / 4;
    Int rm = ((m % 4) + 4) % 4;
    if (rm != 2 && rm != 3) return false;
    return arith::is_squarefree(abs(m));
}

long double FundamentalUnit::log_value() const {
    long double ul = mpz_get_d(u.get_mpz_t());
    long double vl = mpz_get_d(v.get_mpz_t());
    long double dl = mpz_get_d(D.get_mpz_t());
    return logl((ul + vl * sqrtl(dl)) / 2.0L);
}

std::pair<Int, Int> unit_power(const FundamentalUnit& eps, unsigned e) {
    if (e == 0) throw std::invalid_argument("unit_power: exponent must be >= 1");
    Int u = eps.u, v = eps.v;
    for (unsigned i = 1; i < e; ++i) {
        Int tu = eps.u * u + eps.D * eps.v * v;
        Int tv = eps.u * v + eps.v * u;
        if (mpz_odd_p(tu.get_mpz_t()) || mpz_odd_p(tv.get_mpz_t()))
            throw std::logic_error("unit_power: half-coordinate recurrence left an odd value");
        u = tu / 2;
        v = tv / 2;
    }
    return {u, v};
}

FundamentalUnit fundamental_unit(const Int& D) {
    if (D < 5 || !is_fundamental_discriminant(D))
        throw std::invalid_argument("fundamental_unit: D must be a fundamental discriminant >= 5");
    Int m = (D % 4 == 1) ? D : D / 4;
    PellPair pp = pell_min(m);
    const PellSolution& eta = pp.minus ? *pp.minus : pp.plus;
    if (m % 4 != 1) return {2 * eta.x, eta.y, D, eta.norm};

    // The unit group of Z[sqrt m] has index 1 or 3 in the maximal order's.
    // A cube root (u + v sqrt m)/2 of eta = x0 + y0 sqrt m must satisfy
    // u^3 - 3su = 2*x0 with s = norm(eta), and v^2 = (u^2 - 4s)/m.
    long s = eta.norm;
    Int target = 2 * eta.x;
    Int lo = 1, hi;
    mpz_root(hi.get_mpz_t(), target.get_mpz_t(), 3);
    hi += 2;
    while (lo < hi) {  // g(u) = u^3 - 3su is strictly increasing on u >= 1
        Int mid = (lo + hi) / 2;
        Int g = mid * mid * mid - 3 * s * mid;
        if (g < target)
            lo = mid + 1;
        else
            hi = mid;
    }
    Int u = lo;
    if (u * u * u - 3 * s * u == target) {
        Int vv = u * u - 4 * s;
        if (mpz_divisible_p(vv.get_mpz_t(), m.get_mpz_t())) {
            vv /= m;
            if (is_square(vv)) {
                Int v = isqrt(vv);
                if (v >= 1 && (u - v) % 2 == 0) {
                    FundamentalUnit cand{u, v, D, int(s)};
                    auto [u3, v3] = unit_power(cand, 3);
                    if (u3 == 2 * eta.x && v3 == 2 * eta.y) return cand;
                    throw std::logic_error("fundamental_unit: cube-root candidate failed verification");
                }
            }
        }
    }
    return {2 * eta.x, 2 * eta.y, D, eta.norm};
}

bool verify_schinzel_pattern(const Int& A, const Int& n) {
    if (A < 2) throw std::invalid_argument("verify_schinzel_pattern: A must be >= 2 (2A-2 vanishes otherwise)");
    if (n < 1) throw std::invalid_argument("verify_schinzel_pattern: n must be >= 1");
    Int N = A * A * n * n - n;
    CFExpansion e = cf_expand(QuadSurd::sqrt_of(N));
    if (e.head.size() != 1 || e.head[0] != A * n - 1) return false;
    const Int block[4] = {1, 2 * A - 2, 1, 2 * A * n - 2};
    size_t ell = e.period.size();
    if (ell == 0 || 4 % ell != 0) return false;
    for (size_t t = 0; t < 4; ++t)
        if (e.period[t % ell] != block[t]) return false;
    return true;
}

}  // namespace quadseq::cfrac
