#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "kgal/classify.hpp"
#include "kgal/json_io.hpp"

// File-based front end.  Every command reads JSON inputs, writes one JSON
// report (to -o, or standard output), and exits 0 when its verdict holds,
// 1 when it fails, 2 on an input or usage error.  Reports embed the tool
// version and a hash of each input, and serialization is deterministic,
// so reruns on equal inputs give byte-identical output.

using namespace kgal;

namespace {

struct Io {
    std::string out_path;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, bytes

    Json load(const std::string& path) {
        std::string text = jio::read_file(path);
        Json j = jio::parse_json(text, path);
        inputs.emplace_back(path, std::move(text));
        return j;
    }

    Json envelope(const std::string& command) const {
        return jio::report_envelope(command, inputs);
    }

    void emit(Json report) const {
        std::string text = jio::dump(report);
        if (out_path.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            jio::write_file(out_path, text);
        }
    }
};

// Merge the envelope into a report under sorted-key serialization.
Json wrap(const Io& io, const std::string& command, Json body) {
    Json out = io.envelope(command);
    for (auto& [k, v] : body.items()) out[k] = std::move(v);
    return out;
}

int cmd_validate(Io& io, const std::string& datum_path) {
    GaloisDatum d = jio::datum_from_json(io.load(datum_path));
    ValidationReport rep = validate_datum(d);
    io.emit(wrap(io, "validate",
                 Json{{"validation", jio::validation_report_to_json(rep)}}));
    return rep.ok ? 0 : 1;
}

int cmd_build(Io& io, const std::string& datum_path, bool simple) {
    GaloisDatum d = jio::datum_from_json(io.load(datum_path));
    ValidationReport rep = validate_datum(d);
    if (!rep.ok) {
        io.emit(wrap(io, "build",
                     Json{{"validation", jio::validation_report_to_json(rep)}}));
        return 1;
    }
    EquivariantAlgebra A = simple ? build_simple(d) : build_object(d);
    Json body = jio::algebra_to_json(A);
    body["provenance"] = io.envelope("build");
    io.emit(std::move(body));
    return 0;
}

int cmd_verify(Io& io, const std::string& datum_path,
               const std::string& object_path, bool emit_matrices) {
    EquivariantAlgebra A;
    if (!object_path.empty()) {
        A = jio::algebra_from_json(io.load(object_path));
    } else {
        GaloisDatum d = jio::datum_from_json(io.load(datum_path));
        ValidationReport rep = validate_datum(d);
        if (!rep.ok) {
            io.emit(wrap(io, "verify",
                         Json{{"validation",
                               jio::validation_report_to_json(rep)}}));
            return 1;
        }
        A = build_object(d);
    }
    GaloisReport rep = verify_galois(A);
    Json body{{"report", jio::galois_report_to_json(rep)}};
    if (emit_matrices) {
        body["theta"] = jio::matrix_to_json(A.K, theta_matrix(A));
        body["can"] = jio::matrix_to_json(A.K, canonical_map_matrix(A));
    }
    io.emit(wrap(io, "verify", std::move(body)));
    return rep.verdict ? 0 : 1;
}

int cmd_recover(Io& io, const std::string& object_path) {
    EquivariantAlgebra A = jio::algebra_from_json(io.load(object_path));
    RecoveredDatum r = recover_datum_full(A);
    Json body = jio::recovered_to_json(r);
    body["provenance"] = io.envelope("recover");
    io.emit(std::move(body));
    return 0;
}

int cmd_solve_gamma(Io& io, const std::string& datum_path,
                    unsigned long long max_tables) {
    GaloisDatum d = jio::datum_from_json(io.load(datum_path), true);
    std::vector<std::vector<long>> tables = solve_gamma(d, max_tables);
    const int nS = (int)d.S.size(), nN = (int)d.N.size();
    Json list = Json::array();
    for (const auto& t : tables)
        list.push_back(jio::gamma_to_json(t, nS, nN, d.K.root_order()));
    io.emit(wrap(io, "solve-gamma",
                 Json{{"count", (long)tables.size()}, {"tables", list}}));
    return tables.empty() ? 1 : 0;
}

int cmd_obstructions(Io& io, const std::string& datum_path) {
    GaloisDatum d = jio::datum_from_json(io.load(datum_path), true);
    ObstructionReport rep = obstruction_report(d);
    io.emit(wrap(io, "obstructions", jio::obstruction_report_to_json(d, rep)));
    return rep.completable ? 0 : 1;
}

int cmd_equiv(Io& io, const std::string& path1, const std::string& path2) {
    GaloisDatum d1 = jio::datum_from_json(io.load(path1));
    GaloisDatum d2 = jio::datum_from_json(io.load(path2));
    std::optional<EquivalenceWitness> w = are_equivalent(d1, d2);
    Json body;
    if (w.has_value()) {
        if (!witness_intertwines(d1, d2, *w))
            throw kgal_error("equivalence witness fails the intertwiner check");
        body["equivalent"] = true;
        body["witness"] =
            Json{{"g", w->g}, {"omega", w->omega}, {"eta", w->eta}};
    } else {
        body["equivalent"] = false;
        body["witness"] = "none";
    }
    io.emit(wrap(io, "equiv", std::move(body)));
    return w.has_value() ? 0 : 1;
}

int cmd_classify(Io& io, const std::string& group_path,
                 const std::string& catalog_path, ClassifyBounds bounds,
                 const std::string& fix_s_path, const std::string& fix_n_path,
                 const std::string& sigma_path) {
    FiniteGroup G = jio::group_from_json(io.load(group_path));
    Json cat = io.load(catalog_path);
    const Json& towers_json =
        cat.is_object() ? jio::member(cat, "towers", "catalog") : cat;
    if (!towers_json.is_array() || towers_json.empty())
        throw invalid_input("catalog: expected a nonempty array of towers");
    std::vector<FieldTower> catalog;
    for (const auto& t : towers_json)
        catalog.push_back(jio::tower_from_json(t));
    if (!fix_s_path.empty())
        bounds.fix_S = jio::subgroup_from_json(io.load(fix_s_path), "fixed S");
    if (!fix_n_path.empty())
        bounds.fix_N = jio::subgroup_from_json(io.load(fix_n_path), "fixed N");
    if (!sigma_path.empty()) {
        if (catalog.size() != 1)
            throw invalid_input(
                "a fixed cocycle needs a single-tower catalog to pin its "
                "modulus");
        bounds.fix_sigma =
            jio::cocycle_from_json(io.load(sigma_path), catalog[0]);
    }
    ClassifyResult res = classify(G, catalog, bounds);
    io.emit(wrap(io, "classify", jio::classify_to_json(res)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exact constructions, verification, and classification of twisted "
        "group-valued function algebras"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("kgal ") + version_string);

    std::string datum_path, object_path, path2, out_path;
    std::string group_path, catalog_path, fix_s_path, fix_n_path, sigma_path;
    bool simple = false, emit_matrices = false;
    unsigned long long max_tables = 1u << 20;
    ClassifyBounds bounds;

    CLI::App* validate =
        app.add_subcommand("validate", "check a construction datum");
    validate->add_option("datum", datum_path, "datum file")->required();
    validate->add_option("-o,--output", out_path, "report path");

    CLI::App* build =
        app.add_subcommand("build", "build the object of a datum");
    build->add_option("datum", datum_path, "datum file")->required();
    build->add_option("-o,--output", out_path, "object path");
    build->add_flag("--simple", simple,
                    "emit the distinguished block instead of the full "
                    "induced object");

    CLI::App* verify =
        app.add_subcommand("verify", "verify the Galois property");
    verify->add_option("datum", datum_path, "datum file (built first)");
    verify->add_option("--object", object_path, "built object file");
    verify->add_option("-o,--output", out_path, "report path");
    verify->add_flag("--emit-matrices", emit_matrices,
                     "include the structure map matrices in the report");

    CLI::App* recover =
        app.add_subcommand("recover", "read the datum back off a built object");
    recover->add_option("object", object_path, "built object file")->required();
    recover->add_option("-o,--output", out_path, "recovered datum path");

    CLI::App* solve =
        app.add_subcommand("solve-gamma", "enumerate completing gamma tables");
    solve->add_option("datum", datum_path, "partial datum file")->required();
    solve->add_option("-o,--output", out_path, "report path");
    solve->add_option("--max-tables", max_tables, "solution count bound");

    CLI::App* obstructions = app.add_subcommand(
        "obstructions", "compute the completion obstructions");
    obstructions->add_option("datum", datum_path, "partial datum file")
        ->required();
    obstructions->add_option("-o,--output", out_path, "report path");

    CLI::App* equiv =
        app.add_subcommand("equiv", "decide equivalence of two data");
    equiv->add_option("first", datum_path, "datum file")->required();
    equiv->add_option("second", path2, "datum file")->required();
    equiv->add_option("-o,--output", out_path, "report path");

    CLI::App* classify_cmd = app.add_subcommand(
        "classify", "sweep all data of a group over a tower catalog");
    classify_cmd->add_option("group", group_path, "group file")->required();
    classify_cmd->add_option("catalog", catalog_path, "tower catalog file")
        ->required();
    classify_cmd->add_option("-o,--output", out_path, "report path");
    classify_cmd->add_option("-j,--jobs", bounds.jobs, "worker threads");
    classify_cmd->add_option("--fix-S", fix_s_path, "restrict to one S");
    classify_cmd->add_option("--fix-N", fix_n_path, "restrict to one N");
    classify_cmd->add_option("--sigma", sigma_path, "restrict to one cocycle");
    classify_cmd->add_option("--max-group", bounds.max_group,
                             "ambient group order bound");
    classify_cmd->add_option("--max-root", bounds.max_root_order,
                             "root-of-unity order bound");
    classify_cmd->add_option("--max-classes", bounds.max_classes,
                             "cohomology transversal bound");
    classify_cmd->add_option("--max-tables", bounds.max_tables,
                             "gamma solution bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Io io;
    io.out_path = out_path;
    std::string command;
    try {
        if (app.got_subcommand(validate)) {
            command = "validate";
            return cmd_validate(io, datum_path);
        }
        if (app.got_subcommand(build)) {
            command = "build";
            return cmd_build(io, datum_path, simple);
        }
        if (app.got_subcommand(verify)) {
            command = "verify";
            if (datum_path.empty() == object_path.empty())
                throw invalid_input(
                    "verify needs exactly one of a datum file or --object");
            return cmd_verify(io, datum_path, object_path, emit_matrices);
        }
        if (app.got_subcommand(recover)) {
            command = "recover";
            return cmd_recover(io, object_path);
        }
        if (app.got_subcommand(solve)) {
            command = "solve-gamma";
            return cmd_solve_gamma(io, datum_path, max_tables);
        }
        if (app.got_subcommand(obstructions)) {
            command = "obstructions";
            return cmd_obstructions(io, datum_path);
        }
        if (app.got_subcommand(equiv)) {
            command = "equiv";
            return cmd_equiv(io, datum_path, path2);
        }
        if (app.got_subcommand(classify_cmd)) {
            command = "classify";
            return cmd_classify(io, group_path, catalog_path, bounds,
                                fix_s_path, fix_n_path, sigma_path);
        }
        throw invalid_input("no command selected");
    } catch (const kgal_error& e) {
        std::fprintf(stderr, "kgal: %s\n", e.what());
        try {
            io.emit(wrap(io, command, Json{{"error", e.what()}}));
        } catch (const kgal_error&) {
            // the report path itself is unusable; the message above stands
        }
        return 2;
    }
}
