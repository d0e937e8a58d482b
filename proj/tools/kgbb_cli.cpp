// kgbb: command-line front end for spec validation, CSV import, export,
// questions and the HTTP service.

#include "kgbb/backends.hpp"
#include "kgbb/error.hpp"
#include "kgbb/import.hpp"
#include "kgbb/json.hpp"
#include "kgbb/query.hpp"
#include "kgbb/service.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace kgbb;
namespace fs = std::filesystem;

namespace {

struct Options {
    bool json = false;
    std::string spec;
    std::string store;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::not_found, "cannot read file", p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::shared_ptr<const Specification> load(const Options& o) {
    if (o.spec.empty()) throw Error(ErrorCode::invalid_argument, "--spec (or KGBB_SPEC) is required");
    return std::make_shared<const Specification>(load_spec_file(o.spec));
}

Store open_store(const Options& o) {
    if (o.store.empty() || !fs::exists(fs::path(o.store) / "manifest.json")) return {};
    return load_store(ExportFormat::tables, o.store);
}

int fail(const Options& o, const Error& e) {
    if (o.json)
        std::cout << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"detail", e.detail()}}.dump()
                  << "\n";
    else
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << (e.detail().empty() ? "" : " [" + e.detail() + "]")
                  << "\n";
    return 2;
}

int validate_cmd(const Options& o, const std::string& file) {
    const auto diags = check_spec_text(slurp(file));
    if (o.json) {
        std::cout << diagnostics_to_json(diags).dump(2) << "\n";
    } else {
        for (const auto& d : diags) std::cout << d.code << ": " << d.message << " [" << d.subject << "]\n";
        if (diags.empty()) std::cout << "ok\n";
    }
    return diags.empty() ? 0 : 1;
}

// Instance whose class declares the template, unless given explicitly.
Upri instance_for_template(const Specification& spec, const Upri& tmpl) {
    for (const auto& [inst, cls] : spec.graph.kgbb_instances)
        if (const auto* c = spec.statement_class_of_instance(inst))
            for (const auto& t : c->import_templates)
                if (t.upri == tmpl) return inst;
    throw Error(ErrorCode::not_found, "no KGBB instance declares the import template", tmpl.value);
}

int import_cmd(const Options& o, const std::string& csv, const std::string& tmpl_id, std::string kgbb_id,
               const std::string& user) {
    auto spec = load(o);
    const Upri tmpl_upri(tmpl_id);
    const Upri inst = kgbb_id.empty() ? instance_for_template(*spec, tmpl_upri) : Upri(kgbb_id);
    const auto& tmpl = find_import_template(*spec, inst, tmpl_upri);
    Engine engine(spec, open_store(o));
    Provenance prov;
    prov.creator = Upri(user);
    auto result = apply_import_template(*spec, inst, csv_rows(slurp(csv)), tmpl, prov);

    json report = json::array();
    std::map<std::size_t, std::vector<RowDiagnostic>> problems;
    for (const auto& d : result.diagnostics) problems[d.row].push_back(d);
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < result.accepted_rows.size(); ++i) {
        const auto row = result.accepted_rows[i];
        try {
            const auto id = engine.create_unit(result.requests[i]);
            report.push_back({{"row", row}, {"status", "accepted"}, {"unit", id.value}});
            ++accepted;
        } catch (const Error& e) {
            problems[row].push_back({row, "", std::string(to_string(e.code())) + ": " + e.what()});
        }
    }
    for (const auto& [row, ds] : problems)
        for (const auto& d : ds)
            report.push_back({{"row", row}, {"status", "rejected"}, {"column", d.column}, {"message", d.message}});
    if (!o.store.empty()) save_store(*engine.snapshot(), ExportFormat::tables, o.store);

    if (o.json) {
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& r : report) {
            std::cout << "row " << r["row"].get<std::size_t>() << ": " << r["status"].get<std::string>();
            if (r.contains("unit")) std::cout << " " << r["unit"].get<std::string>();
            if (r.contains("message"))
                std::cout << " " << (r["column"].get<std::string>().empty() ? "" : r["column"].get<std::string>() + ": ")
                          << r["message"].get<std::string>();
            std::cout << "\n";
        }
        std::cout << accepted << " accepted, " << problems.size() << " rejected\n";
    }
    return problems.empty() ? 0 : 1;
}

int export_cmd(const Options& o, const std::string& format, const std::string& out) {
    const auto fmt = export_format_from_string(format);
    if (!fmt) throw Error(ErrorCode::invalid_argument, "unknown export format", format);
    const auto store = open_store(o);
    if (out.empty() || out == "-") {
        if (*fmt == ExportFormat::tables) throw Error(ErrorCode::invalid_argument, "tables export needs --out <dir>");
        std::cout << (*fmt == ExportFormat::trig ? export_trig(store) : export_pg_json(store));
    } else {
        save_store(store, *fmt, out);
    }
    return 0;
}

// A question file holds one question, or {"op": "and"|"or", "questions": [...]}.
std::set<Upri> run_question(const Specification& spec, const Store& store, const json& j, std::optional<AnswerMode>& mode) {
    if (j.contains("op")) {
        const auto op = j["op"].get<std::string>();
        if (op != "and" && op != "or") throw Error(ErrorCode::invalid_argument, "op must be 'and' or 'or'", op);
        std::optional<std::set<Upri>> acc;
        for (const auto& q : j.at("questions")) {
            std::optional<AnswerMode> ignored;
            auto r = run_question(spec, store, q, ignored);
            if (!acc) {
                acc = std::move(r);
                continue;
            }
            std::set<Upri> next;
            if (op == "and") std::set_intersection(acc->begin(), acc->end(), r.begin(), r.end(), std::inserter(next, next.end()));
            else std::set_union(acc->begin(), acc->end(), r.begin(), r.end(), std::inserter(next, next.end()));
            acc = std::move(next);
        }
        mode = AnswerMode::list;
        return acc.value_or(std::set<Upri>{});
    }
    const auto q = question_from_json(j);
    validate_question(spec, q);
    const auto r = execute_question(spec, store, q);
    mode = r.mode;
    return {r.units.begin(), r.units.end()};
}

int query_cmd(const Options& o, const std::string& file) {
    auto spec = load(o);
    const auto store = open_store(o);
    auto j = json::parse(slurp(file), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::parse_error, "question file is not valid JSON", file);
    std::optional<AnswerMode> mode;
    const auto units = run_question(*spec, store, j, mode);
    if (mode == AnswerMode::boolean) {
        std::cout << (o.json ? json(!units.empty()).dump() : std::string(units.empty() ? "false" : "true")) << "\n";
    } else if (o.json) {
        json a = json::array();
        for (const auto& u : units) a.push_back(u.value);
        std::cout << a.dump(2) << "\n";
    } else {
        for (const auto& u : units) std::cout << u.value << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KGBB knowledge-graph engine"};
    app.require_subcommand(1);
    Options o;
    if (const char* s = std::getenv("KGBB_SPEC")) o.spec = s;
    if (const char* s = std::getenv("KGBB_STORE")) o.store = s;
    app.add_flag("--json", o.json, "Machine-readable JSON output");
    app.add_option("--spec", o.spec, "Specification YAML file");
    app.add_option("--store", o.store, "Store directory (tables bundle)");

    std::string file;
    auto* validate = app.add_subcommand("validate-spec", "Check a specification and print diagnostics");
    validate->add_option("file", file, "Specification YAML")->required();

    std::string csv, tmpl, kgbb, user = "urn:kgbb:user:cli";
    auto* import = app.add_subcommand("import", "Import CSV rows through an import template");
    import->add_option("csv", csv, "CSV file")->required();
    import->add_option("--template", tmpl, "Import template IRI")->required();
    import->add_option("--kgbb", kgbb, "Statement KGBB instance (default: the one declaring the template)");
    import->add_option("--user", user, "Creator IRI");

    std::string format = "trig", out;
    auto* exp = app.add_subcommand("export", "Export the store");
    exp->add_option("--format", format, "trig | pg-json | tables")->check(CLI::IsMember({"trig", "pg-json", "tables"}));
    exp->add_option("--out", out, "Output file (directory for tables); stdout when omitted");

    std::string question;
    auto* query = app.add_subcommand("query", "Run a question file against the store");
    query->add_option("--question", question, "Question JSON file")->required();

    int port = 8080;
    if (const char* s = std::getenv("KGBB_PORT")) port = std::atoi(s);
    std::string host = "127.0.0.1";
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--port", port, "Port");
    serve_cmd->add_option("--host", host, "Bind address");

    // Subcommand-local spellings of the shared options.
    for (auto* sub : {import, exp, query, serve_cmd}) {
        sub->add_option("--spec", o.spec, "Specification YAML file");
        sub->add_option("--store", o.store, "Store directory (tables bundle)");
        sub->add_flag("--json", o.json, "Machine-readable JSON output");
    }
    validate->add_flag("--json", o.json, "Machine-readable JSON output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return validate_cmd(o, file);
        if (*import) return import_cmd(o, csv, tmpl, kgbb, user);
        if (*exp) return export_cmd(o, format, out);
        if (*query) return query_cmd(o, question);
        if (*serve_cmd) {
            ServiceConfig c;
            c.spec = o.spec;
            if (!o.store.empty()) c.store = fs::path(o.store);
            c.host = host;
            c.port = port;
            return serve(c, std::cerr);
        }
    } catch (const Error& e) {
        return fail(o, e);
    } catch (const std::exception& e) {
        return fail(o, Error(ErrorCode::invalid_argument, e.what()));
    }
    return 0;
}
