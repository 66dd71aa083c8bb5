#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quadseq/classgroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace quadseq::classgroup;
using quadseq::arith::Int;
using quadseq::arith::is_square;
using quadseq::cfrac::fundamental_unit;
using quadseq::cfrac::is_fundamental_discriminant;

namespace {

bool valid_form_disc(long D) {
    return D > 0 && (D % 4 == 0 || D % 4 == 1) && !is_square(Int(D));
}

// Oracle: the reduction inequalities evaluated in floating point. Safe for
// small D, where sqrt(D) is far from any integer or half-integer involved.
bool reduced_float(long a, long b, long D) {
    double r = sqrt((double)D);
    return b > 0 && b < r && r - b < 2 * labs(a) && 2 * labs(a) < r + b;
}

// Oracle: every reduced form by scanning the full (a, b) rectangle.
std::vector<QuadForm> reduced_forms_scan(long D) {
    std::vector<QuadForm> out;
    long s = (long)sqrt((double)D) + 2;
    for (long b = 1; b <= s; ++b)
        for (long a = -s - 1; a <= s + 1; ++a) {
            if (a == 0) continue;
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            QuadForm f{a, b, num / (4 * a)};
            if (f.discriminant() == D && reduced_float(a, b, D)) out.push_back(f);
        }
    std::sort(out.begin(), out.end());
    return out;
}

long count_cycles(std::vector<QuadForm> forms) {
    std::map<QuadForm, size_t> index;
    for (size_t i = 0; i < forms.size(); ++i) index[forms[i]] = i;
    std::vector<bool> seen(forms.size(), false);
    long cycles = 0;
    for (size_t i = 0; i < forms.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        QuadForm g = forms[i];
        while (true) {
            auto it = index.find(g);
            REQUIRE(it != index.end());
            if (seen[it->second]) break;
            seen[it->second] = true;
            g = rho(g);
        }
    }
    return cycles;
}

}  // namespace

TEST_CASE("fundamental_discriminant") {
    CHECK(fundamental_discriminant(Int(33)) == 33);
    CHECK(fundamental_discriminant(Int(34)) == 136);
    CHECK(fundamental_discriminant(Int(50)) == 8);
    CHECK(fundamental_discriminant(Int(2)) == 8);
    CHECK(fundamental_discriminant(Int(5)) == 5);
    CHECK(fundamental_discriminant(Int(12)) == 12);
    CHECK_THROWS_AS(fundamental_discriminant(Int(49)), std::invalid_argument);
    CHECK_THROWS_AS(fundamental_discriminant(Int(1)), std::invalid_argument);
    for (long n = 2; n <= 2000; ++n) {
        if (is_square(Int(n))) continue;
        Int D = fundamental_discriminant(Int(n));
        CHECK(is_fundamental_discriminant(D));
        Int m = quadseq::arith::squarefree_part(Int(n));
        CHECK(D == (m % 4 == 1 ? m : Int(4 * m)));
        CHECK(D >= m);
    }
}

TEST_CASE("reduced_forms examples") {
    auto f5 = reduced_forms(Int(5));
    REQUIRE(f5.size() == 2);
    CHECK(f5[0] == QuadForm{-1, 1, 1});
    CHECK(f5[1] == QuadForm{1, 1, -1});

    auto f8 = reduced_forms(Int(8));
    REQUIRE(f8.size() == 2);
    CHECK(f8[0] == QuadForm{-1, 2, 1});
    CHECK(f8[1] == QuadForm{1, 2, -1});

    // eight forms; the two rho cycles are checked in the cycle tests
    auto f40 = reduced_forms(Int(40));
    CHECK(f40.size() == 8);
    for (const auto& f : f40) {
        CHECK(f.discriminant() == 40);
        CHECK(is_reduced(f));
    }

    CHECK_THROWS_AS(reduced_forms(Int(7)), std::invalid_argument);   // 3 mod 4
    CHECK_THROWS_AS(reduced_forms(Int(16)), std::invalid_argument);  // square
    CHECK_THROWS_AS(reduced_forms(Int(-4)), std::invalid_argument);
}

TEST_CASE("reduced_forms matches the rectangle-scan oracle") {
    for (long D = 5; D <= 1500; ++D) {
        if (!valid_form_disc(D)) continue;
        auto got = reduced_forms(Int(D));
        auto want = reduced_forms_scan(D);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
        for (const auto& f : got) CHECK(is_reduced(f));
    }
}

TEST_CASE("is_reduced agrees with the inequality oracle") {
    for (long D : {5L, 8L, 12L, 13L, 40L, 136L, 573L, 1596L}) {
        for (long a = -40; a <= 40; ++a)
            for (long b = -5; b <= 45; ++b) {
                if (a == 0) continue;
                long num = b * b - D;
                if (num % (4 * a) != 0) continue;
                QuadForm f{a, b, num / (4 * a)};
                CHECK(is_reduced(f) == reduced_float(a, b, D));
            }
    }
    CHECK(!is_reduced(QuadForm{1, 1, 1}));  // negative discriminant
    CHECK(!is_reduced(QuadForm{2, 5, 1}));  // D = 17 but b^2 > D
    CHECK(is_reduced(QuadForm{1, 3, -1}));  // D = 13
}

TEST_CASE("rho closure and bijection") {
    for (long D = 5; D <= 10000; ++D) {
        if (!valid_form_disc(D)) continue;
        auto forms = reduced_forms(Int(D));
        REQUIRE(!forms.empty());
        std::set<QuadForm> all(forms.begin(), forms.end());
        std::set<QuadForm> images;
        for (const auto& f : forms) {
            QuadForm g = rho(f);
            CHECK(g.discriminant() == D);
            CHECK(is_reduced(g));
            CHECK(all.count(g) == 1);
            images.insert(g);
        }
        CHECK(images.size() == forms.size());
    }
}

TEST_CASE("narrow_class_number examples and shuffle stability") {
    CHECK(narrow_class_number(Int(5)) == 1);
    CHECK(narrow_class_number(Int(8)) == 1);
    CHECK(narrow_class_number(Int(12)) == 2);
    CHECK(narrow_class_number(Int(40)) == 2);
    CHECK(narrow_class_number(Int(136)) == 4);  // h = 2 and the unit has norm +1

    std::mt19937_64 rng(11);
    for (long D : {40L, 60L, 105L, 136L, 316L, 573L, 1596L, 4360L}) {
        long want = narrow_class_number(Int(D));
        auto forms = reduced_forms(Int(D));
        for (int round = 0; round < 3; ++round) {
            std::shuffle(forms.begin(), forms.end(), rng);
            CHECK(count_cycles(forms) == want);
        }
    }
}

TEST_CASE("class_number examples") {
    auto f33 = class_number(Int(33));
    CHECK(f33.D == 33);
    CHECK(f33.m == 33);
    CHECK(f33.h_plus == 2);
    CHECK(f33.h == 1);
    CHECK(f33.unit.norm == 1);
    CHECK(f33.unit.u == 46);  // 23 + 4 sqrt 33
    CHECK(f33.unit.v == 8);

    auto f10 = class_number(Int(10));
    CHECK(f10.D == 40);
    CHECK(f10.h == 2);
    CHECK(f10.unit.norm == -1);  // 3 + sqrt 10

    auto f2 = class_number(Int(2));
    CHECK(f2.D == 8);
    CHECK(f2.h == 1);

    // the radicand need not be squarefree
    auto f50 = class_number(Int(50));
    CHECK(f50.D == 8);
    CHECK(f50.h == 1);

    CHECK_THROWS_AS(class_number(Int(36)), std::invalid_argument);
}

TEST_CASE("parity law: norm +1 forces even h+") {
    for (long D = 5; D <= 10000; ++D) {
        if (!is_fundamental_discriminant(Int(D))) continue;
        auto eps = fundamental_unit(Int(D));
        long hp = narrow_class_number(Int(D));
        if (eps.norm == 1) {
            CHECK(hp % 2 == 0);
        }
        CHECK(hp >= 1);
    }
}

TEST_CASE("L1_exact examples") {
    // Dirichlet: L(1) = 2 h log eps / sqrt D with known h = 1 units
    CHECK(L1_exact(Int(5)) == doctest::Approx(2 * log((1 + sqrt(5.0)) / 2) / sqrt(5.0)).epsilon(1e-12));
    CHECK(L1_exact(Int(8)) == doctest::Approx(2 * log(1 + sqrt(2.0)) / sqrt(8.0)).epsilon(1e-12));
    CHECK(L1_exact(Int(13)) == doctest::Approx(2 * log((3 + sqrt(13.0)) / 2) / sqrt(13.0)).epsilon(1e-12));
    CHECK_THROWS_AS(L1_exact(Int(20)), std::invalid_argument);
    CHECK_THROWS_AS(L1_exact(Int(1)), std::invalid_argument);
    for (long D = 5; D <= 3000; ++D) {
        if (!is_fundamental_discriminant(Int(D))) continue;
        CHECK(L1_exact(Int(D)) > 0);
    }
}

TEST_CASE("L1_truncated stays within its bound of L1_exact") {
    auto t5 = L1_truncated(Int(5), 1e-6);
    CHECK(t5.error_bound <= 1e-6);
    CHECK(fabs(t5.value - L1_exact(Int(5))) <= 2e-6);
    auto t8 = L1_truncated(Int(8), 1e-6);
    CHECK(fabs(t8.value - L1_exact(Int(8))) <= 2e-6);
    CHECK_THROWS_AS(L1_truncated(Int(5), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(L1_truncated(Int(5), -1.0), std::invalid_argument);

    for (long D = 5; D <= 500; ++D) {
        if (!is_fundamental_discriminant(Int(D))) continue;
        auto t = L1_truncated(Int(D), 1e-4);
        CHECK(t.error_bound <= 1e-4);
        CHECK(fabs(t.value - L1_exact(Int(D))) <= 2e-4);
    }
}

TEST_CASE("analytic_h matches the form-cycle count") {
    CHECK(analytic_h(Int(5)) == 1);
    CHECK(analytic_h(Int(40)) == 2);
    CHECK(analytic_h(Int(33)) == 1);
    for (long D = 5; D <= 2000; ++D) {
        if (!is_fundamental_discriminant(Int(D))) continue;
        auto eps = fundamental_unit(Int(D));
        long hp = narrow_class_number(Int(D));
        long h = eps.norm == -1 ? hp : hp / 2;
        CHECK(analytic_h(Int(D)) == h);
    }
}

TEST_CASE("precision control") {
    CHECK(precision_bits() == 128);
    set_precision_bits(64);
    CHECK(L1_exact(Int(5)) == doctest::Approx(0.43040894096400404).epsilon(1e-10));
    set_precision_bits(256);
    CHECK(L1_exact(Int(5)) == doctest::Approx(0.43040894096400404).epsilon(1e-13));
    set_precision_bits(128);
    CHECK_THROWS_AS(set_precision_bits(8), std::invalid_argument);
    CHECK_THROWS_AS(set_precision_bits(1u << 21), std::invalid_argument);
}

TEST_CASE("regulator") {
    CHECK(regulator(fundamental_unit(Int(5))) ==
          doctest::Approx(log((1 + sqrt(5.0)) / 2)).epsilon(1e-12));
    CHECK(regulator(fundamental_unit(Int(8))) ==
          doctest::Approx(log(1 + sqrt(2.0))).epsilon(1e-12));
    CHECK(regulator(fundamental_unit(Int(33))) ==
          doctest::Approx(log(23 + 4 * sqrt(33.0))).epsilon(1e-12));
}

TEST_CASE("validate flags broken invariants") {
    auto good = class_number(Int(33));
    CHECK_NOTHROW(validate(good));
    auto bad = good;
    bad.h = 2;
    CHECK_THROWS_AS(validate(bad), std::logic_error);
    bad = good;
    bad.m = 3;
    CHECK_THROWS_AS(validate(bad), std::logic_error);
    bad = good;
    bad.unit.u += 1;
    CHECK_THROWS_AS(validate(bad), std::logic_error);
    bad = good;
    bad.L1 = -1.0;
    CHECK_THROWS_AS(validate(bad), std::logic_error);
}
