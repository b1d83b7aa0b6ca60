#include <array>
#include <set>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "kgal/datum.hpp"

using namespace kgal;

namespace {

FiniteGroup make_s3() {
    std::vector<std::array<int, 3>> perms = {
        {0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
    auto compose = [](const std::array<int, 3>& f, const std::array<int, 3>& g) {
        return std::array<int, 3>{f[g[0]], f[g[1]], f[g[2]]};
    };
    auto index_of = [&](const std::array<int, 3>& p) {
        for (size_t i = 0; i < perms.size(); ++i)
            if (perms[i] == p) return static_cast<int>(i);
        return -1;
    };
    std::vector<int> t(36);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            t[a * 6 + b] = index_of(compose(perms[a], perms[b]));
    return group_from_table(6, t);
}

// The quaternion-like datum on the Klein four group whose object is the
// 2x2 matrix algebra over the rationals.
GaloisDatum make_m2_datum() {
    GaloisDatum d;
    d.K = cyclotomic_tower(1, {1});
    d.G = direct_product(cyclic_group(2), cyclic_group(2));
    d.S = {0, 1, 2, 3};
    d.N = {0, 1, 2, 3};
    d.gal_of = {0, 0, 0, 0};
    d.sigma = zero_cochain(2, 4, 2);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) d.sigma.ref(x, y) = (x % 2) * (y / 2) % 2;
    d.gamma.assign(16, 0);
    for (int s = 0; s < 4; ++s)
        for (int x = 0; x < 4; ++x)
            d.gamma[s * 4 + x] = ((s % 2) * (x / 2) + (s / 2) * (x % 2)) % 2;
    return d;
}

// Gaussian rationals with complex conjugation over Q, as a datum with
// trivial N and S of order two.
GaloisDatum make_gaussian_datum() {
    GaloisDatum d;
    d.K = cyclotomic_tower(4, {1, 3});
    d.G = cyclic_group(2);
    d.S = {0, 1};
    d.N = {0};
    d.gal_of = {0, 1};
    d.sigma = zero_cochain(2, 1, 4);
    d.gamma = {0, 0};
    return d;
}

// The cyclic cubic tower inside the ninth cyclotomic field, with the
// alternating group of degree three acting as its Galois group, induced
// up to the full symmetric group.
GaloisDatum make_cubic_datum() {
    GaloisDatum d;
    d.K = cyclotomic_tower(9, {1, 4, 7});
    d.G = make_s3();
    d.S = {0, 4, 5};
    d.N = {0};
    d.gal_of = {0, 1, 2};
    d.sigma = zero_cochain(2, 1, 18);
    d.gamma = {0, 0, 0};
    return d;
}

// The rank-three elementary abelian family: S = G = Z_3^3, N the first
// two coordinates, the cyclic cubic tower, sigma the standard pairing.
// gamma is left empty for the solver.
GaloisDatum make_rank3_partial() {
    GaloisDatum d;
    d.K = cyclotomic_tower(9, {1, 4, 7});
    FiniteGroup z3 = cyclic_group(3);
    d.G = direct_product(direct_product(z3, z3), z3);
    d.S.resize(27);
    for (int i = 0; i < 27; ++i) d.S[i] = i;
    for (int i = 0; i < 27; ++i)
        if (i % 3 == 0) d.N.push_back(i);
    d.gal_of.resize(27);
    for (int s = 0; s < 27; ++s) d.gal_of[s] = s % 3;
    d.sigma = zero_cochain(2, 9, 18);
    for (int x = 0; x < 9; ++x)
        for (int y = 0; y < 9; ++y) {
            int x1 = x / 3, x2 = x % 3, y1 = y / 3, y2 = y % 3;
            d.sigma.ref(x, y) = zdetail::pos(12 * (x2 * y1 - x1 * y2), 18);
        }
    return d;
}

bool item_ok(const ValidationReport& r, const std::string& name) {
    for (const auto& it : r.items)
        if (it.check == name) return it.ok;
    FAIL("missing validation item " << name);
    return false;
}

}  // namespace

TEST_CASE("matrix algebra datum validates and builds a Galois object") {
    GaloisDatum d = make_m2_datum();
    ValidationReport rep = validate_datum(d);
    for (const auto& it : rep.items) {
        INFO(it.check << ": " << it.detail);
        CHECK(it.ok);
    }
    REQUIRE(rep.ok);

    EquivariantAlgebra A = build_object(d);
    CHECK(A.dim == 4);
    CHECK(algebra_ok(A));
    GaloisReport g = verify_galois(A);
    CHECK(g.verdict);

    FastReport f = verify_simple_fast(d);
    CHECK(f.center_ok);
    CHECK(f.theta_block_bijective);
    CHECK(f.verdict == g.verdict);
}

TEST_CASE("trivial datum produces the dual group algebra") {
    for (int n : {2, 4}) {
        FiniteGroup G = cyclic_group(n);
        GaloisDatum d = trivial_datum(cyclotomic_tower(1, {1}), G);
        REQUIRE(validate_datum(d).ok);
        EquivariantAlgebra A = build_object(d);
        EquivariantAlgebra D = dual_group_algebra(d.K, G);
        REQUIRE(A.dim == D.dim);
        for (int i = 0; i < A.dim * A.dim; ++i)
            CHECK(adetail::vec_eq(A.mult_vec(A.basis_vec(i / A.dim), A.basis_vec(i % A.dim)),
                                  D.mult_vec(D.basis_vec(i / A.dim), D.basis_vec(i % A.dim))));
        CHECK(verify_galois(A).verdict);
        CHECK(verify_simple_fast(d).verdict);
    }
}

TEST_CASE("Gaussian datum validates; fast and full verdicts agree") {
    GaloisDatum d = make_gaussian_datum();
    REQUIRE(validate_datum(d).ok);
    EquivariantAlgebra A = build_object(d);
    CHECK(A.dim == 2);
    GaloisReport g = verify_galois(A);
    CHECK(g.verdict);
    CHECK(verify_simple_fast(d).verdict == g.verdict);
}

TEST_CASE("cubic datum over the symmetric group validates and builds") {
    GaloisDatum d = make_cubic_datum();
    ValidationReport rep = validate_datum(d);
    for (const auto& it : rep.items) {
        INFO(it.check << ": " << it.detail);
        CHECK(it.ok);
    }
    REQUIRE(rep.ok);
    EquivariantAlgebra A = build_object(d);
    CHECK(A.dim == 6);
    CHECK(algebra_ok(A));
    GaloisReport g = verify_galois(A);
    CHECK(g.verdict);
    CHECK(verify_simple_fast(d).verdict);
}

TEST_CASE("validation pinpoints each failing condition") {
    SECTION("S not a subgroup") {
        GaloisDatum d = trivial_datum(cyclotomic_tower(1, {1}), cyclic_group(4));
        d.S = {0, 1};
        d.gal_of = {0, 0};
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "subgroup-S"));
    }
    SECTION("N not normal in S") {
        GaloisDatum d;
        d.K = cyclotomic_tower(1, {1});
        d.G = make_s3();
        d.S = {0, 1, 2, 3, 4, 5};
        d.N = {0, 1};  // a transposition generates a non-normal subgroup
        d.gal_of.assign(6, 0);
        d.sigma = zero_cochain(2, 2, 2);
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "N-normal-in-S"));
    }
    SECTION("characteristic divides the order of N") {
        GaloisDatum d;
        d.K = finite_tower(2, 1, 1);
        d.G = cyclic_group(2);
        d.S = {0, 1};
        d.N = {0, 1};
        d.gal_of = {0, 0};
        d.sigma = zero_cochain(2, 2, 1);
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "characteristic"));
    }
    SECTION("tower degree mismatch") {
        GaloisDatum d;
        d.K = cyclotomic_tower(1, {1});
        d.G = cyclic_group(2);
        d.S = {0, 1};
        d.N = {0};
        d.gal_of = {0, 0};
        d.sigma = zero_cochain(2, 1, 2);
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "tower-degree"));
    }
    SECTION("labelling with wrong kernel") {
        GaloisDatum d = make_gaussian_datum();
        d.gal_of = {0, 0};
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "galois-labelling"));
    }
    SECTION("sigma fails the cocycle identity") {
        GaloisDatum d = make_m2_datum();
        d.sigma = zero_cochain(2, 4, 2);
        d.sigma.ref(1, 1) = 1;
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "cocycle-identity"));
    }
    SECTION("degenerate sigma") {
        GaloisDatum d = make_m2_datum();
        d.sigma = zero_cochain(2, 4, 2);
        d.gamma.assign(16, 0);
        ValidationReport r = validate_structure(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "cocycle-nondegenerate"));
    }
    SECTION("gamma not restricting to the inner values") {
        GaloisDatum d = make_m2_datum();
        for (int s = 0; s < 4; ++s)
            for (int x = 0; x < 4; ++x) d.gamma[s * 4 + x] = (s % 2) * (x / 2) % 2;
        ValidationReport r = validate_datum(d);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(item_ok(r, "gamma-inner-on-N"));
        CHECK(item_ok(r, "gamma-twists-cocycle"));
        CHECK(item_ok(r, "gamma-composes"));
    }
    SECTION("build_object rejects an invalid datum") {
        GaloisDatum d = make_m2_datum();
        d.gamma.assign(16, 0);
        CHECK_THROWS_AS(build_object(d), invalid_input);
    }
}

TEST_CASE("gamma solver recovers the unique table when S equals N") {
    GaloisDatum d = make_m2_datum();
    std::vector<long> frozen = d.gamma;
    d.gamma.clear();
    auto sols = solve_gamma(d);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == frozen);
}

TEST_CASE("gamma solver on trivial N returns the zero table") {
    GaloisDatum d = make_gaussian_datum();
    d.gamma.clear();
    auto sols = solve_gamma(d);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == std::vector<long>({0, 0}));
}

TEST_CASE("rank-three family has exactly nine gamma tables") {
    GaloisDatum d = make_rank3_partial();
    auto sols = solve_gamma(d);
    REQUIRE(sols.size() == 9);

    // Every solution validates as a full datum and passes the fast check.
    std::set<std::vector<long>> distinct;
    for (const auto& table : sols) {
        GaloisDatum full = d;
        full.gamma = table;
        REQUIRE(validate_datum(full).ok);
        CHECK(verify_simple_fast(full).verdict);
        distinct.insert(table);
    }
    CHECK(distinct.size() == 9);

    // The solutions differ exactly in the pairing of the last coordinate
    // against N: gamma(e3, e1) and gamma(e3, e2) range over all of mu_3.
    std::set<std::pair<long, long>> pairings;
    for (const auto& table : sols) {
        // S-local index of e3 is 1 (third coordinate least significant);
        // N-local indices of e1, e2 are 3 and 1.
        pairings.insert({table[1 * 9 + 3], table[1 * 9 + 1]});
    }
    CHECK(pairings.size() == 9);
    for (const auto& [a, b] : pairings) {
        CHECK(a % 6 == 0);
        CHECK(b % 6 == 0);
    }
}

TEST_CASE("rank-three gamma tables are pairwise inequivalent") {
    GaloisDatum d = make_rank3_partial();
    auto sols = solve_gamma(d);
    REQUIRE(sols.size() == 9);
    std::vector<GaloisDatum> data;
    for (const auto& table : sols) {
        GaloisDatum full = d;
        full.gamma = table;
        data.push_back(full);
    }
    for (size_t i = 0; i < data.size(); ++i)
        for (size_t j = 0; j < data.size(); ++j) {
            auto w = are_equivalent(data[i], data[j]);
            if (i == j)
                CHECK(w.has_value());
            else
                CHECK_FALSE(w.has_value());
        }
}

TEST_CASE("antisymmetric twist over a disjoint Galois action has no gamma") {
    // S = Z_3^2 x Z_2 with the order-two Galois group of the third
    // cyclotomic tower acting through the last coordinate.  The twisting
    // condition forces a coboundary to equal a nonzero antisymmetric
    // form, which is impossible, so the solver returns nothing.
    GaloisDatum d;
    d.K = cyclotomic_tower(3, {1, 2});
    FiniteGroup z3 = cyclic_group(3);
    d.G = direct_product(direct_product(z3, z3), cyclic_group(2));
    d.S.resize(18);
    for (int i = 0; i < 18; ++i) d.S[i] = i;
    for (int i = 0; i < 18; ++i)
        if (i % 2 == 0) d.N.push_back(i);
    d.gal_of.resize(18);
    for (int s = 0; s < 18; ++s) d.gal_of[s] = s % 2;
    d.sigma = zero_cochain(2, 9, 6);
    for (int x = 0; x < 9; ++x)
        for (int y = 0; y < 9; ++y) {
            int x1 = x / 3, x2 = x % 3, y1 = y / 3, y2 = y % 3;
            d.sigma.ref(x, y) = zdetail::pos(4 * (x2 * y1 - x1 * y2), 6);
        }
    REQUIRE(validate_structure(d).ok);
    auto sols = solve_gamma(d);
    CHECK(sols.empty());
}

TEST_CASE("equivalence finds a conjugating witness across the labelling flip") {
    GaloisDatum d1 = make_cubic_datum();
    // Transport by a transposition: the alternating group is preserved but
    // the labelling is inverted.
    GaloisDatum d2 = conjugate_datum(d1, 1);
    REQUIRE(validate_datum(d2).ok);
    CHECK(d2.S == d1.S);
    CHECK(d2.gal_of != d1.gal_of);

    auto w = are_equivalent(d1, d2);
    REQUIRE(w.has_value());
    // The identity cannot conjugate the two labellings into each other.
    CHECK(d1.G.mul(w->g, w->g) != w->g);  // not the identity element

    // Reflexivity.
    CHECK(are_equivalent(d1, d1).has_value());
}

TEST_CASE("equivalence on full-group data matches cohomology classes") {
    // With S = N = G the object is the twisted group algebra itself and
    // two data are equivalent exactly when the cocycles are cohomologous.
    FieldTower K = cyclotomic_tower(1, {1});
    FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
    auto reps = cohomology_transversal(v4, 2);

    auto datum_for = [&](const Cochain& s) {
        GaloisDatum d;
        d.K = K;
        d.G = v4;
        d.S = {0, 1, 2, 3};
        d.N = {0, 1, 2, 3};
        d.gal_of.assign(4, 0);
        d.sigma = s;
        DatumFrame f = datum_frame(d);
        d.gamma.assign(16, 0);
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
                d.gamma[x * 4 + y] = ddetail::inner_gamma(f, s, x, y);
        return d;
    };

    std::vector<Cochain> nondeg;
    for (const auto& s : reps)
        if (is_nondegenerate(v4, s)) nondeg.push_back(s);
    REQUIRE(nondeg.size() == 4);

    for (size_t i = 0; i < nondeg.size(); ++i)
        for (size_t j = 0; j < nondeg.size(); ++j) {
            auto w = are_equivalent(datum_for(nondeg[i]), datum_for(nondeg[j]));
            CHECK(w.has_value() == (i == j));
        }

    // Twisting a representative by a coboundary stays equivalent.
    Cochain eta = zero_cochain(1, 4, 2);
    eta.v[1] = 1;
    eta.v[3] = 1;
    Cochain shifted = cochain_add(nondeg[0], group_delta(v4, eta));
    REQUIRE(is_two_cocycle(v4, shifted));
    CHECK(are_equivalent(datum_for(nondeg[0]), datum_for(shifted)).has_value());
}

TEST_CASE("translation to a conjugate datum is an explicit isomorphism") {
    GaloisDatum d = make_cubic_datum();
    for (int g = 0; g < 6; ++g) CHECK(translation_intertwines(d, g));
    CHECK(translation_intertwines(make_m2_datum(), 1));
    CHECK(translation_intertwines(make_gaussian_datum(), 1));
}

TEST_CASE("equivalence witnesses give explicit block isomorphisms") {
    GaloisDatum d1 = make_cubic_datum();
    GaloisDatum d2 = conjugate_datum(d1, 1);
    auto w = are_equivalent(d1, d2);
    REQUIRE(w.has_value());
    CHECK(witness_intertwines(d1, d2, *w));

    auto wr = are_equivalent(d1, d1);
    REQUIRE(wr.has_value());
    CHECK(witness_intertwines(d1, d1, *wr));
}

TEST_CASE("equivalence is transitive across coboundary shifts") {
    FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
    auto datum_for = [&](const Cochain& s) {
        GaloisDatum d;
        d.K = cyclotomic_tower(1, {1});
        d.G = v4;
        d.S = {0, 1, 2, 3};
        d.N = {0, 1, 2, 3};
        d.gal_of.assign(4, 0);
        d.sigma = s;
        DatumFrame f = datum_frame(d);
        d.gamma.assign(16, 0);
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
                d.gamma[x * 4 + y] = ddetail::inner_gamma(f, s, x, y);
        return d;
    };

    Cochain base = zero_cochain(2, 4, 2);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) base.ref(x, y) = (x % 2) * (y / 2) % 2;
    Cochain c1 = zero_cochain(1, 4, 2);
    c1.v = {0, 1, 0, 0};
    Cochain c2 = zero_cochain(1, 4, 2);
    c2.v = {0, 0, 1, 1};
    std::vector<GaloisDatum> ds = {
        datum_for(base), datum_for(cochain_add(base, group_delta(v4, c1))),
        datum_for(cochain_add(base, group_delta(v4, c2)))};

    for (const auto& a : ds) REQUIRE(validate_datum(a).ok);
    // All ordered pairs are equivalent and every witness really intertwines.
    for (const auto& a : ds)
        for (const auto& b : ds) {
            auto w = are_equivalent(a, b);
            REQUIRE(w.has_value());
            CHECK(witness_intertwines(a, b, *w));
        }
}
