#include "quadseq/arith.hpp"

#include <stdexcept>

namespace quadseq::arith {

namespace {

void trim(std::vector<Int>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<Int> c) : coeffs(std::move(c)) {
    trim(coeffs);
}

IntPolynomial IntPolynomial::constant(const Int& c) {
    return IntPolynomial(std::vector<Int>{c});
}

IntPolynomial IntPolynomial::x_power(int e) {
    std::vector<Int> c(e + 1, Int(0));
    c[e] = 1;
    return IntPolynomial(std::move(c));
}

int IntPolynomial::degree() const { return int(coeffs.size()) - 1; }

const Int& IntPolynomial::leading() const {
    if (coeffs.empty()) throw std::invalid_argument("leading: zero polynomial");
    return coeffs.back();
}

Int IntPolynomial::operator()(const Int& x) const {
    Int r = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
    return r;
}

IntPolynomial IntPolynomial::derivative() const {
    if (coeffs.size() <= 1) return IntPolynomial();
    std::vector<Int> c(coeffs.size() - 1);
    for (size_t i = 1; i < coeffs.size(); ++i) c[i - 1] = coeffs[i] * long(i);
    return IntPolynomial(std::move(c));
}

Int IntPolynomial::content() const {
    Int g = 0;
    for (const Int& c : coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
    if (is_zero()) return IntPolynomial();
    Int g = content();
    if (leading() < 0) g = -g;
    std::vector<Int> c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i] / g;
    return IntPolynomial(std::move(c));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
    return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return IntPolynomial();
    std::vector<Int> c(a.coeffs.size() + b.coeffs.size() - 1, Int(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    return IntPolynomial(std::move(c));
}

Int fixed_divisor(const IntPolynomial& f) {
    if (f.is_zero()) throw std::invalid_argument("fixed_divisor: zero polynomial");
    Int g = 0;
    for (int j = 0; j <= f.degree(); ++j) {
        Int v = f(Int(j));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

namespace {

// Pseudo-remainder: repeatedly scale by lc(b) so division stays integral.
// Callers normalize to primitive parts, so the exact scaling power is moot.
IntPolynomial pseudo_rem(IntPolynomial r, const IntPolynomial& b) {
    const int db = b.degree();
    const Int& lb = b.leading();
    while (!r.is_zero() && r.degree() >= db) {
        int shift = r.degree() - db;
        Int lr = r.leading();
        std::vector<Int> c(r.coeffs.size(), Int(0));
        for (size_t i = 0; i < r.coeffs.size(); ++i) c[i] = r.coeffs[i] * lb;
        for (size_t i = 0; i < b.coeffs.size(); ++i) c[i + shift] -= lr * b.coeffs[i];
        r = IntPolynomial(std::move(c));
    }
    return r;
}

}  // namespace

bool poly_gcd_squarefree(const IntPolynomial& f) {
    if (f.is_zero()) throw std::invalid_argument("poly_gcd_squarefree: zero polynomial");
    if (f.degree() == 0) return true;
    IntPolynomial a = f.primitive_part();
    IntPolynomial b = f.derivative().primitive_part();
    while (!b.is_zero()) {
        IntPolynomial r = pseudo_rem(a, b).primitive_part();
        a = b;
        b = r;
    }
    return a.degree() == 0;
}

}  // namespace quadseq::arith
