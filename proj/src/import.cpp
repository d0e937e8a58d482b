#include "kgbb/import.hpp"

#include "kgbb/error.hpp"

#include <algorithm>
#include <regex>

namespace kgbb {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        out.push_back(std::move(record));
        record.clear();
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
            } else {
                field += c;
            }
            ++i;
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = true;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            ++i;
            end_record();
        } else if (c == '\n') {
            end_record();
        } else {
            field += c;
            field_started = true;
        }
        ++i;
    }
    if (quoted) throw Error(ErrorCode::parse_error, "unterminated quoted CSV field");
    if (field_started || !field.empty() || !record.empty()) end_record();
    return out;
}

std::string write_csv(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            const auto& v = r[i];
            if (v.find_first_of(",\"\r\n") == std::string::npos && !(r.size() == 1 && v.empty())) {
                out += v;
                continue;
            }
            out += '"';
            for (char c : v) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        }
        out += "\r\n";
    }
    return out;
}

std::vector<Row> csv_rows(std::string_view text) {
    auto records = parse_csv(text);
    std::vector<Row> out;
    if (records.empty()) return out;
    const auto& header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != header.size())
            throw Error(ErrorCode::parse_error,
                        "CSV record " + std::to_string(r) + " has " + std::to_string(records[r].size()) + " fields, expected " +
                            std::to_string(header.size()));
        Row row;
        for (std::size_t c = 0; c < header.size(); ++c) row[header[c]] = records[r][c];
        out.push_back(std::move(row));
    }
    return out;
}

const ImportTemplate& find_import_template(const Specification& spec, const Upri& kgbb_instance, const Upri& tmpl) {
    const auto* cls = spec.statement_class_of_instance(kgbb_instance);
    if (!cls) throw Error(ErrorCode::unknown_instance, "not a statement KGBB instance", kgbb_instance.value);
    for (const auto& t : cls->import_templates)
        if (t.upri == tmpl) return t;
    throw Error(ErrorCode::not_found, "no such import template for this KGBB", tmpl.value);
}

namespace {

bool looks_like_iri(const std::string& v) {
    static const std::regex iri(R"(^[A-Za-z][A-Za-z0-9+.-]*:[^\s<>"]+$)");
    return std::regex_match(v, iri);
}

struct Target {
    bool subject = false;
    const ObjectPositionClass* position = nullptr;
};

Target resolve_target(const StatementKgbbClass& cls, const std::string& target) {
    if (target == "subject") return {true, nullptr};
    if (const auto* p = cls.position(Upri(target))) return {false, p};
    if (const auto* p = cls.position_by_label(target)) return {false, p};
    throw Error(ErrorCode::unknown_target, "import template maps to an unknown position", target);
}

InputValue cell_value(const Target& t, const std::string& value, const std::optional<ResourceKind>& kind,
                      const std::optional<Upri>& resource_class) {
    if (t.position && t.position->object_type == ObjectType::literal) {
        const auto dt = t.position->literal->datatype;
        if (!literal_is_valid(value, dt))
            throw Error(ErrorCode::constraint_violation,
                        "'" + value + "' is not a valid " + std::string(to_string(dt)));
        return Literal{value, dt};
    }
    if (!kind) return ResourceRef::existing(Upri(value));
    if (looks_like_iri(value)) return ResourceRef::make(*kind, resource_class, {}, Upri(value));
    return ResourceRef::make(*kind, resource_class, value);
}

} // namespace

ImportResult apply_import_template(const Specification& spec, const Upri& kgbb_instance, const std::vector<Row>& rows,
                                   const ImportTemplate& tmpl, Provenance provenance) {
    const auto* cls = spec.statement_class_of_instance(kgbb_instance);
    if (!cls) throw Error(ErrorCode::unknown_instance, "not a statement KGBB instance", kgbb_instance.value);
    if (!provenance.imported_from) provenance.imported_from = tmpl.upri;

    std::vector<std::pair<Target, const ImportColumn*>> columns;
    std::vector<std::pair<Target, const ImportConstant*>> constants;
    bool subject_mapped = false;
    std::set<Upri> mapped;
    for (const auto& c : tmpl.columns) {
        auto t = resolve_target(*cls, c.target);
        subject_mapped = subject_mapped || t.subject;
        if (t.position) mapped.insert(t.position->upri);
        columns.emplace_back(t, &c);
    }
    for (const auto& c : tmpl.constants) {
        auto t = resolve_target(*cls, c.target);
        subject_mapped = subject_mapped || t.subject;
        if (t.position) mapped.insert(t.position->upri);
        constants.emplace_back(t, &c);
    }
    if (!subject_mapped) throw Error(ErrorCode::unmapped_required_position, "import template does not map the subject", tmpl.upri.value);
    for (const auto& p : cls->positions)
        if (p.required && !mapped.count(p.upri))
            throw Error(ErrorCode::unmapped_required_position, "import template does not map " + p.thematic_label, p.upri.value);

    ImportResult out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        CreateRequest req;
        req.kgbb_instance = kgbb_instance;
        req.provenance = provenance;
        bool ok = true;
        auto assign = [&](const Target& t, InputValue v) {
            if (t.subject) req.subject = std::get<ResourceRef>(v);
            else req.inputs[t.position->upri] = std::move(v);
        };
        for (const auto& [t, col] : columns) {
            auto cell = row.find(col->column);
            const bool required = t.subject || t.position->required;
            if (cell == row.end() || cell->second.empty()) {
                if (required) {
                    out.diagnostics.push_back({r, col->column, "missing value for a required position"});
                    ok = false;
                }
                continue;
            }
            if (t.subject && t.position == nullptr && !col->kind && !looks_like_iri(cell->second)) {
                out.diagnostics.push_back({r, col->column, "subject cells must be IRIs unless the column declares a kind"});
                ok = false;
                continue;
            }
            try {
                assign(t, cell_value(t, cell->second, col->kind, col->resource_class));
            } catch (const Error& e) {
                out.diagnostics.push_back({r, col->column, e.what()});
                ok = false;
            }
        }
        for (const auto& [t, k] : constants) {
            try {
                assign(t, cell_value(t, k->value, std::nullopt, std::nullopt));
            } catch (const Error& e) {
                out.diagnostics.push_back({r, k->target, e.what()});
                ok = false;
            }
        }
        if (!ok) continue;
        out.requests.push_back(std::move(req));
        out.accepted_rows.push_back(r);
    }
    return out;
}

} // namespace kgbb
