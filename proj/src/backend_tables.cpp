#include "kgbb/backends.hpp"

#include "kgbb/error.hpp"
#include "kgbb/import.hpp"
#include "records.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace kgbb {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::string_view manifest_file = "manifest.json";

std::string encode_cell(const std::string& field, const std::vector<std::string>& values) {
    const auto info = records::field_info(field);
    if (!info.multi) return values.empty() ? std::string() : values.front();
    if (values.empty()) return {};
    if (info.type == records::FieldType::iri) {
        std::string out;
        for (const auto& v : values) out += (out.empty() ? "" : " ") + v;
        return out;
    }
    return json(values).dump();
}

std::vector<std::string> decode_cell(const std::string& field, const std::string& cell, const std::string& table) {
    if (cell.empty()) return {};
    const auto info = records::field_info(field);
    if (!info.multi) return {cell};
    if (info.type == records::FieldType::iri) {
        std::vector<std::string> out;
        std::istringstream in(cell);
        for (std::string v; in >> v;) out.push_back(v);
        return out;
    }
    auto j = json::parse(cell, nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw Error(ErrorCode::schema_mismatch, "expected a JSON array cell", table + ":" + field);
    return j.get<std::vector<std::string>>();
}

std::vector<std::string> with_key(std::string key, const std::vector<std::string>& fields) {
    std::vector<std::string> out{std::move(key)};
    out.insert(out.end(), fields.begin(), fields.end());
    return out;
}

std::vector<std::string> object_fields() {
    std::vector<std::string> out;
    for (const auto& f : records::position_fields())
        if (f != "positionClass") out.push_back(f);
    return out;
}

std::vector<std::string> record_row(const std::string& key, const records::Record& r, const std::vector<std::string>& fields) {
    std::vector<std::string> row{key};
    for (const auto& f : fields) {
        auto it = r.find(f);
        row.push_back(it == r.end() ? std::string() : encode_cell(f, it->second));
    }
    return row;
}

const Table& table_named(const TableBundle& b, const std::string& name) {
    auto it = b.tables.find(name);
    if (it == b.tables.end()) throw Error(ErrorCode::schema_mismatch, "missing table", name);
    return it->second;
}

// Column name -> index, checking that every expected column is present.
std::map<std::string, std::size_t> column_index(const Table& t, const std::string& name,
                                                const std::vector<std::string>& expected) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < t.columns.size(); ++i) idx[t.columns[i]] = i;
    for (const auto& c : expected)
        if (!idx.count(c)) throw Error(ErrorCode::schema_mismatch, "missing column '" + c + "'", name);
    return idx;
}

std::string cell(const std::vector<std::string>& row, std::size_t i) { return i < row.size() ? row[i] : std::string(); }

records::Record row_record(const Table& t, const std::string& name, const std::vector<std::string>& row,
                           const std::map<std::string, std::size_t>& idx, const std::vector<std::string>& fields) {
    records::Record r;
    for (const auto& f : fields) {
        auto vs = decode_cell(f, cell(row, idx.at(f)), name);
        if (!vs.empty()) r[f] = std::move(vs);
    }
    (void)t;
    return r;
}

} // namespace

TableBundle export_tables(const Store& store) {
    TableBundle b;
    json entries = json::array();
    auto add = [&](const std::string& name, const std::string& file, const std::string& role, Table t, json extra = {}) {
        json e = {{"name", name}, {"file", file}, {"role", role}};
        if (extra.is_object()) e.update(extra);
        entries.push_back(e);
        b.tables.emplace(name, std::move(t));
    };

    Table units{with_key("id", records::unit_fields()), {}};
    for (const auto& [id, u] : store.units) units.rows.push_back(record_row(id.value, records::unit_record(u), records::unit_fields()));
    add("units", "units.csv", "units", std::move(units));

    Table resources{with_key("id", records::resource_fields()), {}};
    for (const auto& [id, r] : store.resources)
        resources.rows.push_back(record_row(id.value, records::resource_record(r), records::resource_fields()));
    add("resources", "resources.csv", "resources", std::move(resources));

    Table versions{with_key("id", records::version_fields()), {}};
    for (const auto& [id, v] : store.versions)
        versions.rows.push_back(record_row(id.value, records::version_record(v), records::version_fields()));
    add("versions", "versions.csv", "versions", std::move(versions));

    const auto obj_fields = object_fields();
    std::map<Upri, Table> subject_tables, object_tables;
    for (const auto& [id, u] : store.units) {
        const auto* s = std::get_if<StatementUnit>(&u);
        if (!s) continue;
        auto& st = subject_tables[s->meta.kgbb_uri];
        if (st.columns.empty()) st.columns = {"unit", "subject", "position", "role"};
        for (const auto& p : s->positions) {
            st.rows.push_back({id.value, s->meta.subject ? s->subject().value : "", p.upri.value, std::string(records::role_name(p.role))});
            auto& ot = object_tables[p.position_class];
            if (ot.columns.empty()) {
                ot.columns = with_key("position", obj_fields);
                ot.columns.insert(ot.columns.begin() + 1, "unit");
            }
            auto row = record_row(p.upri.value, records::position_record(p), obj_fields);
            row.insert(row.begin() + 1, id.value);
            ot.rows.push_back(std::move(row));
        }
    }
    std::size_t n = 0;
    for (auto& [kgbb, t] : subject_tables)
        add("subject:" + kgbb.value, "subject_" + std::to_string(n++) + ".csv", "subject", std::move(t), {{"kgbb", kgbb.value}});
    n = 0;
    for (auto& [pc, t] : object_tables)
        add("object:" + pc.value, "object_" + std::to_string(n++) + ".csv", "object", std::move(t), {{"positionClass", pc.value}});

    b.manifest = {{"format", "kgbb-tables"}, {"version", 1}, {"tables", entries}};
    return b;
}

Store import_tables(const TableBundle& b) {
    if (!b.manifest.is_object() || !b.manifest.contains("tables") || !b.manifest["tables"].is_array())
        throw Error(ErrorCode::schema_mismatch, "manifest lists no tables", std::string(manifest_file));
    Store store;

    const auto& units = table_named(b, "units");
    const auto unit_cols = with_key("id", records::unit_fields());
    const auto ui = column_index(units, "units", unit_cols);
    for (const auto& row : units.rows) {
        const Upri id(cell(row, ui.at("id")));
        store.units.emplace(id, records::unit_from_record(id, row_record(units, "units", row, ui, records::unit_fields())));
    }
    const auto& resources = table_named(b, "resources");
    const auto ri = column_index(resources, "resources", with_key("id", records::resource_fields()));
    for (const auto& row : resources.rows) {
        const Upri id(cell(row, ri.at("id")));
        store.resources.emplace(id, records::resource_from_record(id, row_record(resources, "resources", row, ri, records::resource_fields())));
    }
    const auto& versions = table_named(b, "versions");
    const auto vi = column_index(versions, "versions", with_key("id", records::version_fields()));
    for (const auto& row : versions.rows) {
        const Upri id(cell(row, vi.at("id")));
        store.versions.emplace(id, records::version_from_record(id, row_record(versions, "versions", row, vi, records::version_fields())));
    }

    struct Slot {
        Upri unit;
        PositionRole role;
    };
    std::map<std::string, Slot> slots;
    const auto obj_fields = object_fields();
    for (const auto& e : b.manifest["tables"]) {
        const auto name = e.value("name", "");
        if (e.value("role", "") != "subject") continue;
        const auto& t = table_named(b, name);
        const auto idx = column_index(t, name, {"unit", "subject", "position", "role"});
        for (const auto& row : t.rows)
            slots[cell(row, idx.at("position"))] = {Upri(cell(row, idx.at("unit"))), records::role_from_name(cell(row, idx.at("role")))};
    }
    for (const auto& e : b.manifest["tables"]) {
        const auto name = e.value("name", "");
        if (e.value("role", "") != "object") continue;
        const auto& t = table_named(b, name);
        auto expected = with_key("position", obj_fields);
        expected.push_back("unit");
        const auto idx = column_index(t, name, expected);
        for (const auto& row : t.rows) {
            const auto pid = cell(row, idx.at("position"));
            auto slot = slots.find(pid);
            if (slot == slots.end()) throw Error(ErrorCode::schema_mismatch, "position missing from subject tables", pid);
            auto rec = row_record(t, name, row, idx, obj_fields);
            rec["positionClass"] = {e.value("positionClass", "")};
            auto it = store.units.find(slot->second.unit);
            auto* s = it == store.units.end() ? nullptr : std::get_if<StatementUnit>(&it->second);
            if (!s) throw Error(ErrorCode::schema_mismatch, "position owned by a missing statement unit", pid);
            s->positions.push_back(records::position_from_record(Upri(pid), rec, slot->second.role));
            slots.erase(slot);
        }
    }
    if (!slots.empty()) throw Error(ErrorCode::schema_mismatch, "position missing from object tables", slots.begin()->first);
    for (auto& [_, u] : store.units)
        if (auto* s = std::get_if<StatementUnit>(&u)) std::sort(s->positions.begin(), s->positions.end(), position_order);
    return store;
}

void write_table_bundle(const TableBundle& b, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& e : b.manifest.at("tables")) {
        const auto& t = table_named(b, e.at("name").get<std::string>());
        std::vector<std::vector<std::string>> rows{t.columns};
        rows.insert(rows.end(), t.rows.begin(), t.rows.end());
        std::ofstream out(dir / e.at("file").get<std::string>(), std::ios::binary);
        out << write_csv(rows);
        if (!out) throw Error(ErrorCode::invalid_argument, "cannot write table", (dir / e.at("file").get<std::string>()).string());
    }
    std::ofstream out(dir / manifest_file);
    out << b.manifest.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write manifest", dir.string());
}

TableBundle read_table_bundle(const fs::path& dir) {
    auto slurp = [](const fs::path& p) -> std::optional<std::string> {
        std::ifstream in(p, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    TableBundle b;
    auto manifest = slurp(dir / manifest_file);
    if (!manifest) throw Error(ErrorCode::schema_mismatch, "missing manifest", std::string(manifest_file));
    b.manifest = json::parse(*manifest, nullptr, false);
    if (b.manifest.is_discarded() || !b.manifest.contains("tables") || !b.manifest["tables"].is_array())
        throw Error(ErrorCode::schema_mismatch, "malformed manifest", std::string(manifest_file));
    for (const auto& e : b.manifest["tables"]) {
        const auto name = e.value("name", "");
        auto text = slurp(dir / e.value("file", ""));
        if (!text) continue;  // reported by import_tables
        auto rows = parse_csv(*text);
        Table t;
        if (!rows.empty()) {
            t.columns = rows.front();
            t.rows.assign(rows.begin() + 1, rows.end());
        }
        b.tables.emplace(name, std::move(t));
    }
    return b;
}

} // namespace kgbb
