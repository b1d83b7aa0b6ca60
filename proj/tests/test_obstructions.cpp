#include <algorithm>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "kgal/obstructions.hpp"

using namespace kgal;

namespace {

// The rank-three elementary abelian family without its gamma table:
// S = G = Z_3^3, N the first two coordinates, the cyclic cubic tower,
// sigma the standard pairing.
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

// S = Z_3^2 x Z_2 over the third cyclotomic tower, with the antisymmetric
// pairing as sigma.  The slice equations are unsolvable off N.
GaloisDatum make_antisym_partial() {
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
    return d;
}

// S = G = Z_2^3 over the Gaussian tower, N the even part, sigma the
// half-pairing with values in the squares.
GaloisDatum make_e8_partial() {
    GaloisDatum d;
    d.K = cyclotomic_tower(4, {1, 3});
    FiniteGroup z2 = cyclic_group(2);
    d.G = direct_product(direct_product(z2, z2), z2);
    d.S = {0, 1, 2, 3, 4, 5, 6, 7};
    d.N = {0, 2, 4, 6};
    d.gal_of = {0, 1, 0, 1, 0, 1, 0, 1};
    d.sigma = zero_cochain(2, 4, 4);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            d.sigma.ref(x, y) = 2 * ((x % 2) * (y / 2)) % 4;
    return d;
}

// The Klein four group datum of the rational 2x2 matrix algebra, without
// its gamma table.
GaloisDatum make_m2_partial() {
    GaloisDatum d;
    d.K = cyclotomic_tower(1, {1});
    d.G = direct_product(cyclic_group(2), cyclic_group(2));
    d.S = {0, 1, 2, 3};
    d.N = {0, 1, 2, 3};
    d.gal_of = {0, 0, 0, 0};
    d.sigma = zero_cochain(2, 4, 2);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) d.sigma.ref(x, y) = (x % 2) * (y / 2) % 2;
    return d;
}

// Gaussian rationals with trivial N.
GaloisDatum make_gaussian_partial() {
    GaloisDatum d;
    d.K = cyclotomic_tower(4, {1, 3});
    d.G = cyclic_group(2);
    d.S = {0, 1};
    d.N = {0};
    d.gal_of = {0, 1};
    d.sigma = zero_cochain(2, 1, 4);
    return d;
}

}  // namespace

TEST_CASE("rank-three family passes both obstructions with a working witness") {
    GaloisDatum d = make_rank3_partial();
    ObstructionReport rep = obstruction_report(d);

    CHECK(rep.first.vanishes);
    CHECK(rep.first.bad.empty());
    REQUIRE(rep.first.family.size() == 27);

    // Every slice actually solves its slice equation.
    DatumFrame f = datum_frame(d);
    for (int g = 0; g < 27; ++g) {
        Cochain delta = group_delta(f.NV.group, rep.first.family[g]);
        CHECK(delta.v == odetail::slice_target(d, f, g).v);
    }

    REQUIRE(rep.second_defined);
    CHECK(rep.second.vanishes);
    CHECK(rep.second.vanishes_aligned);
    CHECK(rep.completable);

    // The aligned witness is a genuine table and the solver knows it.
    REQUIRE(rep.second.witness_gamma.has_value());
    GaloisDatum full = d;
    full.gamma = *rep.second.witness_gamma;
    CHECK(validate_datum(full).ok);
    auto sols = solve_gamma(d);
    REQUIRE(sols.size() == 9);
    CHECK(std::find(sols.begin(), sols.end(), *rep.second.witness_gamma) !=
          sols.end());
}

TEST_CASE("antisymmetric twist fails the first obstruction off N") {
    GaloisDatum d = make_antisym_partial();
    FirstObstruction first = first_obstruction(d);
    CHECK_FALSE(first.vanishes);
    CHECK(first.family.empty());
    // Exactly the elements acting through the nontrivial automorphism.
    std::vector<int> odd;
    for (int s = 1; s < 18; s += 2) odd.push_back(s);
    CHECK(first.bad == odd);

    ObstructionReport rep = obstruction_report(d);
    CHECK_FALSE(rep.completable);
    CHECK_FALSE(rep.second_defined);
    CHECK(solve_gamma(d).empty());
}

TEST_CASE("squares family passes and the witness is one of the solutions") {
    GaloisDatum d = make_e8_partial();
    ObstructionReport rep = obstruction_report(d);
    CHECK(rep.first.vanishes);
    REQUIRE(rep.second_defined);
    CHECK(rep.second.vanishes);
    CHECK(rep.second.vanishes_aligned);
    CHECK(rep.completable);

    auto sols = solve_gamma(d);
    REQUIRE(sols.size() == 4);
    REQUIRE(rep.second.witness_gamma.has_value());
    CHECK(std::find(sols.begin(), sols.end(), *rep.second.witness_gamma) !=
          sols.end());
}

TEST_CASE("full translation part pins every slice to the inner values") {
    GaloisDatum d = make_m2_partial();
    ObstructionReport rep = obstruction_report(d);
    CHECK(rep.completable);
    REQUIRE(rep.second.witness_gamma.has_value());

    // With S = N there is nothing free and the witness is the inner table.
    std::vector<long> inner(16, 0);
    for (int s = 0; s < 4; ++s)
        for (int x = 0; x < 4; ++x)
            inner[s * 4 + x] = ((s % 2) * (x / 2) + (s / 2) * (x % 2)) % 2;
    CHECK(*rep.second.witness_gamma == inner);
}

TEST_CASE("trivial translation part leaves nothing to obstruct") {
    GaloisDatum d = make_gaussian_partial();
    ObstructionReport rep = obstruction_report(d);
    CHECK(rep.first.vanishes);
    CHECK(rep.second.vanishes);
    CHECK(rep.second.vanishes_aligned);
    CHECK(rep.completable);
    REQUIRE(rep.second.witness_gamma.has_value());
    CHECK(*rep.second.witness_gamma == std::vector<long>{0, 0});
}

TEST_CASE("second obstruction does not depend on the choice of slices") {
    GaloisDatum d = make_rank3_partial();
    FirstObstruction first = first_obstruction(d);
    REQUIRE(first.vanishes);

    // Shift some slices by characters of N; the slice equations still hold.
    GammaFamily fam = first.family;
    for (int x = 0; x < 9; ++x) {
        fam[1].v[x] = zdetail::pos(fam[1].v[x] + 6 * (x / 3), 18);
        fam[2].v[x] = zdetail::pos(fam[2].v[x] + 12 * (x % 3), 18);
        fam[5].v[x] = zdetail::pos(fam[5].v[x] + 6 * (x / 3) + 6 * (x % 3), 18);
    }
    DatumFrame f = datum_frame(d);
    for (int g : {1, 2, 5}) {
        Cochain delta = group_delta(f.NV.group, fam[g]);
        CHECK(delta.v == odetail::slice_target(d, f, g).v);
    }

    SecondObstruction free_run = second_obstruction_for(d, fam, false);
    CHECK(free_run.vanishes);
    SecondObstruction aligned = second_obstruction_for(d, fam, true);
    CHECK(aligned.vanishes_aligned);
    REQUIRE(aligned.witness_gamma.has_value());
    GaloisDatum full = d;
    full.gamma = *aligned.witness_gamma;
    CHECK(validate_datum(full).ok);
}

TEST_CASE("obstruction report rejects a broken structure") {
    GaloisDatum d = make_gaussian_partial();
    d.gal_of = {0, 0};  // not a labelling with kernel N
    CHECK_THROWS_AS(first_obstruction(d), invalid_input);
    CHECK_THROWS_AS(obstruction_report(d), invalid_input);
}

namespace {

struct Lcg {
    unsigned long long s;
    explicit Lcg(unsigned long long seed) : s(seed) {}
    unsigned long long next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s >> 33;
    }
    long below(long m) { return (long)(next() % (unsigned long long)m); }
};

bool all_zero(const std::vector<long>& v) {
    for (long e : v)
        if (e != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("the two-sided differentials compose to zero") {
    // Exhaustive over every family of normalized maps on the Klein frame.
    GaloisDatum m2 = make_m2_partial();
    for (int bits = 0; bits < (1 << 12); ++bits) {
        GammaFamily fam;
        for (int g = 0; g < 4; ++g) {
            Cochain c = zero_cochain(1, 4, 2);
            for (int x = 1; x < 4; ++x) c.v[x] = (bits >> (g * 3 + x - 1)) & 1;
            fam.push_back(c);
        }
        if (!all_zero(hochschild_d2(m2, hochschild_d1(m2, fam)))) {
            CAPTURE(bits);
            FAIL("composition of the differentials is nonzero");
        }
    }

    // Random families on the nine-element frame in characteristic two,
    // where the designated roots of unity have order three.
    GaloisDatum fr;
    fr.K = finite_tower(2, 2, 1);
    fr.G = direct_product(cyclic_group(3), cyclic_group(3));
    fr.S = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    fr.N = fr.S;
    fr.gal_of.assign(9, 0);
    fr.sigma = zero_cochain(2, 9, 3);
    Lcg rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        GammaFamily fam;
        for (int g = 0; g < 9; ++g) {
            Cochain c = zero_cochain(1, 9, 3);
            for (int x = 1; x < 9; ++x) c.v[x] = rng.below(3);
            fam.push_back(c);
        }
        if (!all_zero(hochschild_d2(fr, hochschild_d1(fr, fam)))) {
            CAPTURE(trial);
            FAIL("composition of the differentials is nonzero");
        }
    }
    SUCCEED("both frames compose to zero");
}
