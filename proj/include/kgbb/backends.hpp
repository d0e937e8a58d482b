#pragma once
// Persistence codecs: named-graph RDF (TriG), a labeled property graph
// (PG-JSON) and a relational bundle of CSV tables. All three round-trip a
// Store exactly.

#include "kgbb/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace kgbb {

enum class ExportFormat { trig, pg_json, tables };

std::string_view to_string(ExportFormat f);
std::optional<ExportFormat> export_format_from_string(std::string_view text);

// ---- TriG -------------------------------------------------------------------
// One named graph per statement unit (its data graph), one metadata graph
// per unit, plus resource and version graphs.

std::string meta_graph_name(const Upri& unit);
inline constexpr std::string_view resources_graph = "urn:kgbb:resources";
inline constexpr std::string_view versions_graph = "urn:kgbb:versions";

std::string export_trig(const Store& store);
// Reads the subset of TriG written by export_trig (prefixed names allowed).
Store import_trig(std::string_view text);

// ---- property graph ---------------------------------------------------------

struct PgNode {
    std::string id;
    std::vector<std::string> labels;
    nlohmann::json properties = nlohmann::json::object();
};

struct PgRelationship {
    std::string id;
    std::string type;
    std::string start;
    std::string end;
    nlohmann::json properties = nlohmann::json::object();
};

struct PgDocument {
    std::vector<PgNode> nodes;
    std::vector<PgRelationship> relationships;
};

// Position-instance nodes and data relationships carry membership lists
// (statementUnitURI, compoundUnitURI, listUnitURI, versionID, datasetUnitID)
// and current_version "true"/"false".
PgDocument export_pg(const Store& store);
Store import_pg(const PgDocument& doc);

nlohmann::json pg_to_json(const PgDocument& doc);
PgDocument pg_from_json(const nlohmann::json& j);
std::string export_pg_json(const Store& store);
Store import_pg_json(std::string_view text);

// Minimal Cypher evaluator over a PG document, enough for membership queries:
//   MATCH (n {key:"value", ...}) [WHERE ("x" IN n.prop) [AND ...]] RETURN n
// Returns matching node ids in document order.
std::vector<std::string> run_cypher(const PgDocument& doc, std::string_view query);

// ---- relational tables ------------------------------------------------------

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    friend bool operator==(const Table&, const Table&) = default;
};

// `manifest` lists every table with its file name and role; tables are
// keyed by table name.
struct TableBundle {
    nlohmann::json manifest;
    std::map<std::string, Table> tables;
};

TableBundle export_tables(const Store& store);
// Throws SchemaMismatch naming the table when a listed table or column is missing.
Store import_tables(const TableBundle& bundle);

void write_table_bundle(const TableBundle& bundle, const std::filesystem::path& dir);
TableBundle read_table_bundle(const std::filesystem::path& dir);

// ---- dispatch ---------------------------------------------------------------

// Writes `out` as a file (trig, pg-json) or a directory (tables).
void save_store(const Store& store, ExportFormat format, const std::filesystem::path& out);
Store load_store(ExportFormat format, const std::filesystem::path& in);

// ---- membership queries -----------------------------------------------------

enum class MembershipKind { statement, compound, list, version, dataset };
enum class QueryLanguage { cypher, sparql };

std::string_view to_string(MembershipKind k);
std::optional<MembershipKind> membership_kind_from_string(std::string_view text);

// Query returning the current data of everything belonging to `unit`.
std::string generate_membership_query(const Upri& unit, MembershipKind kind, QueryLanguage language);

} // namespace kgbb
