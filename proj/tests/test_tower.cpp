#include <catch2/catch_amalgamated.hpp>

#include "kgal/linalg.hpp"
#include "kgal/tower.hpp"

using namespace kgal;

namespace {
// deterministic tiny rng for sampled property checks
struct Lcg {
    unsigned long long s = 0x2545F4914F6CDD1DULL;
    long next(long bound) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<long>((s >> 33) % static_cast<unsigned long long>(bound));
    }
};

Scalar random_scalar(const FieldTower& t, Lcg& rng) {
    Scalar s = t.zero();
    for (auto& c : s.c) c = mpq_class(rng.next(7) - 3);
    s.c = t.ref().red_c(std::move(s.c));
    return s;
}
} // namespace

TEST_CASE("rational linear algebra") {
    PrimeFieldOps q{0};
    // rank 2 matrix with known kernel
    MatrixOf<PrimeFieldOps> m = {
        {1, 2, 3, 4},
        {2, 4, 6, 8},
        {1, 1, 1, 1}};
    CHECK(rank_of(q, m, 4) == 2);
    auto kb = kernel_basis(q, m, 4);
    REQUIRE(kb.size() == 2); // rank + kernel dim = cols
    for (const auto& v : kb) {
        for (const auto& row : m) {
            mpq_class s = 0;
            for (size_t j = 0; j < 4; ++j) s += row[j] * v[j];
            CHECK(s == 0);
        }
    }

    // exact fractions: invert a 4x4 Hilbert-style matrix
    MatrixOf<PrimeFieldOps> h(4, std::vector<mpq_class>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h[i][j] = mpq_class(1, i + j + 1);
    auto hi = matrix_inverse(q, h);
    REQUIRE(hi.has_value());
    auto prod = mat_mul(q, h, *hi);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(prod[i][j] == (i == j ? 1 : 0));

    // solve on an underdetermined consistent system
    auto sol = solve_linear(q, MatrixOf<PrimeFieldOps>{{1, 1, 0}, {0, 0, 1}},
                            std::vector<mpq_class>{3, 5}, 3);
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] + (*sol)[1] == 3);
    CHECK((*sol)[2] == 5);
    // inconsistent system
    CHECK_FALSE(solve_linear(q, MatrixOf<PrimeFieldOps>{{1, 1}, {2, 2}},
                             std::vector<mpq_class>{1, 3}, 2)
                    .has_value());
}

TEST_CASE("cyclotomic tower of order nine") {
    FieldTower t = cyclotomic_tower(9, {1, 4, 7});
    CHECK(t.degree() == 6);
    CHECK(t.k_degree_over_prime() == 2);
    CHECK(t.K_over_k() == 3);
    CHECK(t.root_order() == 18);
    CHECK(t.characteristic() == 0);
    CHECK(t.galois_group().n == 3);

    // designated automorphism exponents on zeta = -q
    CHECK(t.zeta_exponent_of_aut(0) == 1);
    CHECK(t.zeta_exponent_of_aut(1) == 13);
    CHECK(t.zeta_exponent_of_aut(2) == 7);

    // the fixed-field basis over Q is {1, q^3} and q^3 is a cube root of 1
    Scalar q3 = t.generator() * t.generator() * t.generator();
    REQUIRE(t.ref().k_basis_prime.size() == 2);
    CHECK(t.ref().eq_c(t.ref().k_basis_prime[1], q3.c));
    Scalar cube = q3 * q3 * q3;
    CHECK(cube == t.one());
    CHECK(t.in_k(q3));
    CHECK_FALSE(t.in_k(t.generator()));
    // zeta^12 = q^3
    CHECK(t.root_of_unity(12) == q3);

    // each tower automorphism fixes k pointwise and is multiplicative
    Lcg rng;
    for (int g = 0; g < t.galois_group().n; ++g) {
        CHECK(t.apply_aut(g, q3) == q3);
        for (int rep = 0; rep < 5; ++rep) {
            Scalar a = random_scalar(t, rng), b = random_scalar(t, rng);
            CHECK(t.apply_aut(g, a * b) == t.apply_aut(g, a) * t.apply_aut(g, b));
            CHECK(t.apply_aut(g, a + b) == t.apply_aut(g, a) + t.apply_aut(g, b));
        }
    }
    // automorphism composition matches the Galois group table
    for (int g = 0; g < 3; ++g)
        for (int h = 0; h < 3; ++h) {
            Scalar a = random_scalar(t, rng);
            CHECK(t.apply_aut(g, t.apply_aut(h, a)) ==
                  t.apply_aut(t.galois_group().mul(g, h), a));
        }
}

TEST_CASE("express in k basis round trip") {
    FieldTower t = cyclotomic_tower(9, {1, 4, 7});
    auto beta = t.k_basis();
    REQUIRE(beta.size() == 3);
    CHECK(beta[0] == t.one());
    Lcg rng;
    for (int rep = 0; rep < 50; ++rep) {
        Scalar a = random_scalar(t, rng);
        auto coeffs = t.express_in_k_basis(a);
        REQUIRE(coeffs.size() == 3);
        Scalar back = t.zero();
        for (size_t i = 0; i < 3; ++i) {
            CHECK(t.in_k(coeffs[i]));
            back = back + coeffs[i] * beta[i];
        }
        CHECK(back == a);
    }
}

TEST_CASE("scalar field axioms sampled") {
    FieldTower t = cyclotomic_tower(9, {1, 4, 7});
    Lcg rng;
    for (int rep = 0; rep < 20; ++rep) {
        Scalar a = random_scalar(t, rng), b = random_scalar(t, rng), c = random_scalar(t, rng);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        if (!is_zero(a)) {
            CHECK(a * inverse(a) == t.one());
            if (!is_zero(b)) CHECK((b / a) * a == b);
        }
    }
}

TEST_CASE("root of unity exponents") {
    FieldTower t = cyclotomic_tower(9, {1, 4, 7});
    for (long e = 0; e < 18; ++e) {
        auto back = t.exponent_of(t.root_of_unity(e));
        REQUIRE(back.has_value());
        CHECK(*back == e);
    }
    Scalar notroot = t.generator() + t.one();
    CHECK_FALSE(t.exponent_of(notroot).has_value());
    // negative exponents wrap
    CHECK(t.root_of_unity(-6) == t.root_of_unity(12));
}

TEST_CASE("small cyclotomic towers") {
    FieldTower t3 = cyclotomic_tower(3, {1, 2});
    CHECK(t3.degree() == 2);
    CHECK(t3.k_degree_over_prime() == 1);
    CHECK(t3.K_over_k() == 2);
    CHECK(t3.root_order() == 6);
    CHECK(t3.zeta_exponent_of_aut(1) == 5);
    // zeta^4 = primitive cube root q
    CHECK(t3.root_of_unity(4) == t3.generator());

    FieldTower t1 = cyclotomic_tower(1, {1});
    CHECK(t1.degree() == 1);
    CHECK(t1.root_order() == 2);
    CHECK(t1.root_of_unity(1) == t1.from_int(-1));
    CHECK(t1.galois_group().n == 1);

    FieldTower t4 = cyclotomic_tower(4, {1});
    CHECK(t4.degree() == 2);
    CHECK(t4.root_order() == 4);
    CHECK(t4.K_over_k() == 1); // K = k = Q(i)
    Scalar i = t4.zeta();
    CHECK(i * i == t4.from_int(-1));

    FieldTower t5 = cyclotomic_tower(5, {1, 2, 3, 4});
    CHECK(t5.degree() == 4);
    CHECK(t5.k_degree_over_prime() == 1); // k = Q
    CHECK(t5.root_order() == 10);
}

TEST_CASE("finite towers") {
    FieldTower f4 = finite_tower(2, 2, 1);
    CHECK(f4.degree() == 2);
    CHECK(f4.characteristic() == 2);
    CHECK(f4.root_order() == 3);
    CHECK(f4.galois_group().n == 2);
    CHECK(f4.zeta_exponent_of_aut(1) == 2);
    // frobenius fixes exactly F_2
    Scalar x = f4.generator();
    CHECK_FALSE(f4.in_k(x));
    CHECK(f4.in_k(f4.one()));
    CHECK(f4.apply_aut(1, x) == x * x);
    // x^3 = 1
    CHECK(x * x * x == f4.one());

    FieldTower f25 = finite_tower(5, 2, 2);
    CHECK(f25.root_order() == 24);
    CHECK(f25.galois_group().n == 1);
    CHECK(f25.K_over_k() == 1);
    // zeta really has multiplicative order 24
    Scalar z = f25.zeta();
    Scalar acc = f25.one();
    for (int e = 1; e <= 24; ++e) {
        acc = acc * z;
        if (e < 24) CHECK_FALSE(acc == f25.one());
    }
    CHECK(acc == f25.one());

    FieldTower f2 = finite_tower(2, 1, 1);
    CHECK(f2.root_order() == 1);
    CHECK(f2.one() == f2.zeta());
}

TEST_CASE("tower validation") {
    CHECK_THROWS_AS(cyclotomic_tower(9, {1, 2}), invalid_input);     // not closed
    CHECK_THROWS_AS(cyclotomic_tower(9, {4, 7}), invalid_input);     // missing 1
    CHECK_THROWS_AS(cyclotomic_tower(9, {1, 3}), invalid_input);     // 3 not a unit
    CHECK_THROWS_AS(finite_tower(4, 2, 1), invalid_input);           // 4 not prime
    CHECK_THROWS_AS(finite_tower(2, 4, 3), invalid_input);           // 3 does not divide 4
    CHECK(cyclotomic_tower(9, {1, 4, 7}).same_tower(cyclotomic_tower(9, {1, 4, 7})));
    CHECK_FALSE(cyclotomic_tower(9, {1, 4, 7}).same_tower(cyclotomic_tower(9, {1})));
}

TEST_CASE("scalar elimination over an extension field") {
    FieldTower t = cyclotomic_tower(3, {1, 2});
    ScalarFieldOps ops = t.ops();
    Scalar w = t.generator(); // primitive cube root
    // 2x2 matrix [[1, w],[w, w^2]] is singular
    MatrixOf<ScalarFieldOps> m = {{t.one(), w}, {w, w * w}};
    CHECK(rank_of(ops, m, 2) == 1);
    auto kb = kernel_basis(ops, m, 2);
    REQUIRE(kb.size() == 1);
    CHECK(kb[0][0] + w * kb[0][1] == t.zero());
    // nonsingular variant
    MatrixOf<ScalarFieldOps> m2 = {{t.one(), w}, {w, t.one()}};
    CHECK(rank_of(ops, m2, 2) == 2);
}
