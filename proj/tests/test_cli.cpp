#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "kgal/json_io.hpp"

// Drives the installed command-line binary through temp files: exit
// codes, report shapes, hand-written inputs in other root conventions,
// and byte determinism across runs and worker counts.

using namespace kgal;
namespace fs = std::filesystem;

namespace {

std::string bin_path() {
    if (const char* env = std::getenv("KGAL_BIN")) return env;
    return "../tools/kgal";
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "kgal-cli-tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string file(const std::string& name, const Json& content) {
    fs::path p = work_dir() / name;
    jio::write_file(p.string(), jio::dump(content));
    return p.string();
}

std::string out_path(const std::string& name) {
    return (work_dir() / name).string();
}

int run(const std::string& args) {
    std::string cmd = bin_path() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

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

GaloisDatum make_trivial_v4_datum() {
    GaloisDatum d;
    d.K = cyclotomic_tower(1, {1});
    d.G = direct_product(cyclic_group(2), cyclic_group(2));
    d.S = {0};
    d.N = {0};
    d.gal_of = {0};
    d.sigma = zero_cochain(2, 1, 2);
    d.gamma = {0};
    return d;
}

// The rank-three elementary abelian sweep inputs, written the way the
// tables appear on paper: exponents of a cube root of unity.
Json rank3_group_json() {
    FiniteGroup z3 = cyclic_group(3);
    return jio::group_to_json(direct_product(direct_product(z3, z3), z3));
}

Json pairing_mod3_json() {
    Json rows = Json::array();
    for (int x = 0; x < 9; ++x) {
        Json row = Json::array();
        for (int y = 0; y < 9; ++y)
            row.push_back(zdetail::pos((x % 3) * (y / 3) - (x / 3) * (y % 3), 3));
        rows.push_back(std::move(row));
    }
    return Json{{"m", 3}, {"table", rows}};
}

Json rank3_partial_json() {
    Json out;
    out["group"] = rank3_group_json();
    Json S = Json::array(), N = Json::array(), iso = Json::array();
    for (int i = 0; i < 27; ++i) {
        S.push_back(i);
        iso.push_back(i % 3);
        if (i % 3 == 0) N.push_back(i);
    }
    out["S"] = std::move(S);
    out["N"] = std::move(N);
    out["iso"] = std::move(iso);
    out["tower"] = Json{{"type", "cyclotomic"}, {"m", 9}, {"H", {1, 4, 7}}};
    out["sigma"] = pairing_mod3_json();
    return out;
}

std::string slurp(const std::string& path) { return jio::read_file(path); }

}  // namespace

TEST_CASE("the pipeline runs a datum from validation to recovery") {
    std::string datum = file("m2.json", jio::datum_to_json(make_m2_datum()));

    CHECK(run("validate " + datum) == 0);

    std::string obj = out_path("m2-obj.json");
    CHECK(run("build " + datum + " -o " + obj) == 0);

    std::string ver = out_path("m2-ver.json");
    CHECK(run("verify --object " + obj + " -o " + ver) == 0);
    Json rep = jio::load_json_file(ver);
    CHECK(rep["report"]["theta_bijective"].get<bool>());
    CHECK(rep["report"]["verdict"].get<bool>());
    CHECK(rep["version"].get<std::string>() == std::string(version_string));
    CHECK(rep["inputs"].size() == 1);

    std::string rec = out_path("m2-rec.json");
    CHECK(run("recover " + obj + " -o " + rec) == 0);
    Json recovered = jio::load_json_file(rec);
    REQUIRE(recovered.contains("units"));
    CHECK(recovered["units"].size() == 4);

    CHECK(run("equiv " + datum + " " + rec) == 0);
}

TEST_CASE("verdict failures exit one and still write their report") {
    Json broken = jio::datum_to_json(make_m2_datum());
    broken["gamma"]["table"][1][1] = 1 - broken["gamma"]["table"][1][1].get<long>();
    std::string bad = file("m2-broken.json", broken);
    std::string rep = out_path("broken-report.json");
    CHECK(run("validate " + bad + " -o " + rep) == 1);
    Json r = jio::load_json_file(rep);
    CHECK_FALSE(r["validation"]["ok"].get<bool>());

    std::string d1 = file("m2-eq.json", jio::datum_to_json(make_m2_datum()));
    std::string d2 =
        file("trivial-eq.json", jio::datum_to_json(make_trivial_v4_datum()));
    std::string eq = out_path("eq-report.json");
    CHECK(run("equiv " + d1 + " " + d2 + " -o " + eq) == 1);
    Json er = jio::load_json_file(eq);
    CHECK_FALSE(er["equivalent"].get<bool>());
    CHECK(er["witness"].get<std::string>() == "none");
}

TEST_CASE("operational failures exit two") {
    fs::path mangled = work_dir() / "mangled.json";
    jio::write_file(mangled.string(), "{\"group\": \n");
    std::string rep = out_path("mangled-report.json");
    CHECK(run("validate " + mangled.string() + " -o " + rep) == 2);
    Json r = jio::load_json_file(rep);
    CHECK(r.contains("error"));

    CHECK(run("validate " + out_path("does-not-exist.json")) == 2);
    std::string datum = file("m2-two.json", jio::datum_to_json(make_m2_datum()));
    CHECK(run("verify") == 2);
    CHECK(run("nonsense-command " + datum) == 2);

    // An object without its field presentation cannot be read back.
    Json obj = jio::load_json_file(out_path("m2-obj.json"));
    obj.erase("field_embedding");
    std::string strip = file("m2-stripped.json", obj);
    CHECK(run("recover " + strip) == 2);
}

TEST_CASE("paper-convention inputs drive the gamma solver and obstructions") {
    std::string partial = file("r3-partial.json", rank3_partial_json());

    std::string sg = out_path("r3-tables.json");
    CHECK(run("solve-gamma " + partial + " -o " + sg) == 0);
    Json tables = jio::load_json_file(sg);
    CHECK(tables["count"].get<long>() == 9);
    REQUIRE(tables["tables"].size() == 9);

    // Every returned table completes the partial datum to a valid one.
    GaloisDatum d = jio::datum_from_json(rank3_partial_json(), true);
    for (const auto& t : tables["tables"]) {
        GaloisDatum full = d;
        full.gamma = jio::gamma_from_json(t, d.K, 27, 9);
        CHECK(validate_datum(full).ok);
    }

    std::string obs = out_path("r3-obstructions.json");
    CHECK(run("obstructions " + partial + " -o " + obs) == 0);
    Json orep = jio::load_json_file(obs);
    CHECK(orep["completable"].get<bool>());
    CHECK(orep["second"]["coboundary"].get<bool>());

    // A gamma-free datum that is genuinely obstructed exits one and
    // certifies each failing slice.
    Json blocked;
    {
        GaloisDatum a;
        a.K = cyclotomic_tower(3, {1, 2});
        FiniteGroup z3 = cyclic_group(3);
        a.G = direct_product(direct_product(z3, z3), cyclic_group(2));
        a.S.resize(18);
        for (int i = 0; i < 18; ++i) a.S[i] = i;
        for (int i = 0; i < 18; ++i)
            if (i % 2 == 0) a.N.push_back(i);
        a.gal_of.resize(18);
        for (int s = 0; s < 18; ++s) a.gal_of[s] = s % 2;
        a.sigma = zero_cochain(2, 9, 6);
        for (int x = 0; x < 9; ++x)
            for (int y = 0; y < 9; ++y) {
                int x1 = x / 3, x2 = x % 3, y1 = y / 3, y2 = y % 3;
                a.sigma.ref(x, y) = zdetail::pos(4 * (x2 * y1 - x1 * y2), 6);
            }
        blocked = jio::datum_to_json(a);
        blocked.erase("gamma");
    }
    std::string bl = file("blocked.json", blocked);
    std::string blrep = out_path("blocked-report.json");
    CHECK(run("obstructions " + bl + " -o " + blrep) == 1);
    Json br = jio::load_json_file(blrep);
    CHECK_FALSE(br["completable"].get<bool>());
    int unsolvable = 0;
    for (const auto& rec : br["first"])
        if (!rec["solvable"].get<bool>()) {
            ++unsolvable;
            CHECK(rec["certificate"]["bad_row"].get<long>() >= 0);
        }
    CHECK(unsolvable == 9);
    CHECK(run("solve-gamma " + bl) == 1);
}

TEST_CASE("classification reports are byte-identical across worker counts") {
    std::string group =
        file("v4-group.json",
             jio::group_to_json(direct_product(cyclic_group(2), cyclic_group(2))));
    std::string catalog = file(
        "catalog-q.json",
        Json::array({Json{{"type", "cyclotomic"}, {"m", 1}, {"H", {1}}}}));

    std::string r1 = out_path("cls-j1.json");
    std::string r4 = out_path("cls-j4.json");
    CHECK(run("classify " + group + " " + catalog + " -j 1 -o " + r1) == 0);
    CHECK(run("classify " + group + " " + catalog + " -j 4 -o " + r4) == 0);
    CHECK(slurp(r1) == slurp(r4));

    Json rep = jio::load_json_file(r1);
    CHECK(rep["data"].size() == 5);
    CHECK(rep["representatives"].size() == 5);
    for (const auto& rec : rep["data"]) CHECK(rec["stamp"].get<bool>());
}

TEST_CASE("the restricted sweep separates the two quotient identifications") {
    std::string group = file("z27-group.json", rank3_group_json());
    std::string catalog = file(
        "catalog-q9.json",
        Json::array({Json{{"type", "cyclotomic"}, {"m", 9}, {"H", {1, 4, 7}}}}));
    Json S = Json::array(), N = Json::array();
    for (int i = 0; i < 27; ++i) {
        S.push_back(i);
        if (i % 3 == 0) N.push_back(i);
    }
    std::string fix_s = file("fix-s.json", Json{{"elements", S}});
    std::string fix_n = file("fix-n.json", Json{{"elements", N}});
    std::string sigma = file("sigma-pairing.json", pairing_mod3_json());

    std::string out = out_path("restricted.json");
    CHECK(run("classify " + group + " " + catalog + " --fix-S " + fix_s +
              " --fix-N " + fix_n + " --sigma " + sigma + " -j 4 -o " + out) ==
          0);
    Json rep = jio::load_json_file(out);
    CHECK(rep["data"].size() == 18);
    CHECK(rep["representatives"].size() == 18);
    int first_identification = 0;
    for (const auto& rec : rep["data"]) {
        CHECK(rec["stamp"].get<bool>());
        if (rec["indices"]["iso"].get<int>() == 0) ++first_identification;
    }
    CHECK(first_identification == 9);
}
