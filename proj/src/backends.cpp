#include "kgbb/backends.hpp"

#include "kgbb/error.hpp"

#include <fstream>
#include <sstream>

namespace kgbb {

std::string_view to_string(ExportFormat f) {
    switch (f) {
    case ExportFormat::trig: return "trig";
    case ExportFormat::pg_json: return "pg-json";
    case ExportFormat::tables: return "tables";
    }
    return "trig";
}

std::optional<ExportFormat> export_format_from_string(std::string_view text) {
    for (auto f : {ExportFormat::trig, ExportFormat::pg_json, ExportFormat::tables})
        if (to_string(f) == text) return f;
    return std::nullopt;
}

void save_store(const Store& store, ExportFormat format, const std::filesystem::path& out) {
    if (format == ExportFormat::tables) {
        write_table_bundle(export_tables(store), out);
        return;
    }
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    std::ofstream f(out, std::ios::binary);
    f << (format == ExportFormat::trig ? export_trig(store) : export_pg_json(store));
    if (!f) throw Error(ErrorCode::invalid_argument, "cannot write store", out.string());
}

Store load_store(ExportFormat format, const std::filesystem::path& in) {
    if (format == ExportFormat::tables) return import_tables(read_table_bundle(in));
    std::ifstream f(in, std::ios::binary);
    if (!f) throw Error(ErrorCode::not_found, "cannot read store", in.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return format == ExportFormat::trig ? import_trig(ss.str()) : import_pg_json(ss.str());
}

std::string_view to_string(MembershipKind k) {
    switch (k) {
    case MembershipKind::statement: return "statement";
    case MembershipKind::compound: return "compound";
    case MembershipKind::list: return "list";
    case MembershipKind::version: return "version";
    case MembershipKind::dataset: return "dataset";
    }
    return "statement";
}

std::optional<MembershipKind> membership_kind_from_string(std::string_view text) {
    for (auto k : {MembershipKind::statement, MembershipKind::compound, MembershipKind::list, MembershipKind::version,
                   MembershipKind::dataset})
        if (to_string(k) == text) return k;
    return std::nullopt;
}

std::string generate_membership_query(const Upri& unit, MembershipKind kind, QueryLanguage language) {
    if (language == QueryLanguage::cypher) {
        std::string_view prop;
        switch (kind) {
        case MembershipKind::statement: prop = "statementUnitURI"; break;
        case MembershipKind::compound: prop = "compoundUnitURI"; break;
        case MembershipKind::list: prop = "listUnitURI"; break;
        case MembershipKind::version: prop = "versionID"; break;
        case MembershipKind::dataset: prop = "datasetUnitID"; break;
        }
        return "MATCH (n {current_version:\"true\"}) WHERE (\"" + unit.value + "\" IN n." + std::string(prop) +
               ") RETURN n";
    }
    const std::string u = "<" + unit.value + ">";
    const std::string k = "<" + std::string(vocab::base);
    const std::string current = "?p " + k + "currentVersion> \"true\"^^<http://www.w3.org/2001/XMLSchema#boolean> . ?p ?q ?o";
    switch (kind) {
    case MembershipKind::statement:
        return "SELECT ?p ?q ?o WHERE {\n  GRAPH " + u + " { " + current + " }\n}";
    case MembershipKind::compound:
    case MembershipKind::list:
        // Relies on the default graph being the union of the named graphs.
        return "SELECT ?p ?q ?o WHERE {\n  " + u + " " + k + "hasAssociatedSemanticUnit>+ ?g .\n  GRAPH ?g { " + current +
               " }\n}";
    case MembershipKind::version:
        return "SELECT ?p ?q ?o WHERE {\n  GRAPH ?g { ?p " + k + "versionID> " + u + " . " + current + " }\n}";
    case MembershipKind::dataset:
        return "SELECT ?p ?q ?o WHERE {\n  GRAPH ?g { ?p " + k + "datasetUnitID> " + u + " . " + current + " }\n}";
    }
    return {};
}

} // namespace kgbb
