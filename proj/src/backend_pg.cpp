#include "kgbb/backends.hpp"

#include "kgbb/error.hpp"
#include "records.hpp"

#include <algorithm>
#include <deque>
#include <regex>

namespace kgbb {

namespace {

using nlohmann::json;

const std::set<std::string>& derived_props() {
    static const std::set<std::string> s = {"statementUnitURI", "compoundUnitURI", "listUnitURI", "current_version", "role"};
    return s;
}

json record_props(const records::Record& r) {
    json p = json::object();
    for (const auto& [field, values] : r) {
        if (records::field_info(field).multi) p[field] = values;
        else if (!values.empty()) p[field] = values.front();
    }
    return p;
}

records::Record props_record(const json& props, const std::string& node) {
    records::Record r;
    if (!props.is_object()) throw Error(ErrorCode::schema_mismatch, "properties must be an object", node);
    for (const auto& [k, v] : props.items()) {
        if (derived_props().count(k)) continue;
        if (v.is_string()) r[k].push_back(v.get<std::string>());
        else if (v.is_array())
            for (const auto& x : v) r[k].push_back(x.get<std::string>());
        else throw Error(ErrorCode::schema_mismatch, "property values must be strings", node + "." + k);
    }
    return r;
}

// Statement unit -> compounds that contain it, directly or through nested compounds.
std::map<Upri, std::set<Upri>> containing_compounds(const Store& store) {
    std::map<Upri, std::set<Upri>> parents;
    for (const auto& [id, u] : store.units)
        if (const auto* c = std::get_if<CompoundUnit>(&u))
            for (const auto& m : c->has_associated_semantic_unit) parents[m].insert(id);
    std::map<Upri, std::set<Upri>> out;
    for (const auto& [id, u] : store.units) {
        if (!std::holds_alternative<StatementUnit>(u)) continue;
        std::set<Upri> seen;
        std::deque<Upri> todo{id};
        while (!todo.empty()) {
            auto cur = todo.front();
            todo.pop_front();
            auto it = parents.find(cur);
            if (it == parents.end()) continue;
            for (const auto& p : it->second)
                if (seen.insert(p).second) todo.push_back(p);
        }
        out[id] = std::move(seen);
    }
    return out;
}

json iri_array(const std::set<Upri>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(x.value);
    return a;
}

} // namespace

PgDocument export_pg(const Store& store) {
    PgDocument doc;
    std::set<std::string> known;
    const auto containers = containing_compounds(store);

    for (const auto& [id, u] : store.units) {
        doc.nodes.push_back({id.value, {"SemanticUnit", std::string(unit_kind_name(u))}, record_props(records::unit_record(u))});
        known.insert(id.value);
    }
    for (const auto& [id, r] : store.resources) {
        doc.nodes.push_back({id.value, {"Resource"}, record_props(records::resource_record(r))});
        known.insert(id.value);
    }
    for (const auto& [id, v] : store.versions) {
        doc.nodes.push_back({id.value, {"Version"}, record_props(records::version_record(v))});
        known.insert(id.value);
    }

    std::set<std::string> external;
    for (const auto& [id, u] : store.units) {
        const auto* s = std::get_if<StatementUnit>(&u);
        if (!s) continue;
        std::set<Upri> compounds, lists;
        for (const auto& c : containers.at(id)) {
            compounds.insert(c);
            if (const auto* cu = store.compound(c); cu && cu->kind == CompoundKind::list) lists.insert(c);
        }
        std::size_t n = 0;
        for (const auto& p : s->positions) {
            json membership = {{"statementUnitURI", json::array({id.value})},
                               {"compoundUnitURI", iri_array(compounds)},
                               {"listUnitURI", iri_array(lists)},
                               {"versionID", iri_array(p.version_ids)},
                               {"datasetUnitID", iri_array(p.dataset_unit_ids)},
                               {"current_version", p.current_version ? "true" : "false"}};
            json props = record_props(records::position_record(p));
            props.update(membership);
            props["role"] = std::string(records::role_name(p.role));
            doc.nodes.push_back({p.upri.value, {"ObjectPositionInstance"}, props});
            known.insert(p.upri.value);

            const auto link = p.role == PositionRole::required ? "requiredObjectPosition" : "optionalObjectPosition";
            doc.relationships.push_back({id.value + "#r" + std::to_string(n++), link, s->subject().value, p.upri.value, membership});
            if (!known.count(s->subject().value)) external.insert(s->subject().value);
            if (const auto* r = std::get_if<Upri>(&p.input)) {
                doc.relationships.push_back({id.value + "#r" + std::to_string(n++), "resourceURI", p.upri.value, r->value, membership});
                if (!known.count(r->value)) external.insert(r->value);
            }
        }
    }
    for (const auto& e : external)
        if (!known.count(e)) doc.nodes.push_back({e, {"External"}, json::object()});
    return doc;
}

Store import_pg(const PgDocument& doc) {
    Store store;
    struct Pending {
        Upri owner;
        ObjectPositionInstance position;
    };
    std::vector<Pending> positions;
    for (const auto& n : doc.nodes) {
        const auto has = [&](std::string_view l) { return std::find(n.labels.begin(), n.labels.end(), l) != n.labels.end(); };
        const Upri id(n.id);
        if (has("SemanticUnit")) {
            store.units.emplace(id, records::unit_from_record(id, props_record(n.properties, n.id)));
        } else if (has("Resource")) {
            store.resources.emplace(id, records::resource_from_record(id, props_record(n.properties, n.id)));
        } else if (has("Version")) {
            store.versions.emplace(id, records::version_from_record(id, props_record(n.properties, n.id)));
        } else if (has("ObjectPositionInstance")) {
            const auto& owners = n.properties.value("statementUnitURI", json::array());
            if (!owners.is_array() || owners.size() != 1)
                throw Error(ErrorCode::schema_mismatch, "position node needs exactly one statementUnitURI", n.id);
            const auto role = records::role_from_name(n.properties.value("role", ""));
            positions.push_back({Upri(owners[0].get<std::string>()),
                                 records::position_from_record(id, props_record(n.properties, n.id), role)});
        }
    }
    for (auto& p : positions) {
        auto it = store.units.find(p.owner);
        auto* s = it == store.units.end() ? nullptr : std::get_if<StatementUnit>(&it->second);
        if (!s) throw Error(ErrorCode::schema_mismatch, "position owned by a missing statement unit", p.position.upri.value);
        s->positions.push_back(std::move(p.position));
    }
    for (auto& [_, u] : store.units)
        if (auto* s = std::get_if<StatementUnit>(&u)) std::sort(s->positions.begin(), s->positions.end(), position_order);
    return store;
}

json pg_to_json(const PgDocument& doc) {
    json nodes = json::array(), rels = json::array();
    for (const auto& n : doc.nodes) nodes.push_back({{"id", n.id}, {"labels", n.labels}, {"properties", n.properties}});
    for (const auto& r : doc.relationships)
        rels.push_back({{"id", r.id}, {"type", r.type}, {"start", r.start}, {"end", r.end}, {"properties", r.properties}});
    return {{"nodes", nodes}, {"relationships", rels}};
}

PgDocument pg_from_json(const json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array())
        throw Error(ErrorCode::schema_mismatch, "PG document needs a nodes array", "nodes");
    PgDocument doc;
    try {
        for (const auto& n : j["nodes"])
            doc.nodes.push_back({n.at("id").get<std::string>(), n.value("labels", std::vector<std::string>{}),
                                 n.value("properties", json::object())});
        for (const auto& r : j.value("relationships", json::array()))
            doc.relationships.push_back({r.at("id").get<std::string>(), r.at("type").get<std::string>(),
                                         r.at("start").get<std::string>(), r.at("end").get<std::string>(),
                                         r.value("properties", json::object())});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::schema_mismatch, "malformed PG document", e.what());
    }
    return doc;
}

std::string export_pg_json(const Store& store) { return pg_to_json(export_pg(store)).dump(2) + "\n"; }

Store import_pg_json(std::string_view text) {
    auto j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::parse_error, "PG-JSON is not valid JSON");
    return import_pg(pg_from_json(j));
}

std::vector<std::string> run_cypher(const PgDocument& doc, std::string_view query) {
    static const std::regex shape(
        R"(^\s*MATCH\s*\(\s*(\w+)\s*(?:\{([^}]*)\})?\s*\)\s*(?:WHERE\s+(.*?))?\s*RETURN\s+(\w+)\s*;?\s*$)",
        std::regex::icase);
    static const std::regex prop(R"re(\s*(\w+)\s*:\s*"([^"]*)"\s*)re");
    static const std::regex in_cond(R"re(^\s*\(?\s*"([^"]*)"\s+IN\s+(\w+)\.(\w+)\s*\)?\s*$)re", std::regex::icase);
    static const std::regex eq_cond(R"re(^\s*\(?\s*(\w+)\.(\w+)\s*=\s*"([^"]*)"\s*\)?\s*$)re");

    const std::string q(query);
    std::smatch m;
    if (!std::regex_match(q, m, shape)) throw Error(ErrorCode::parse_error, "unsupported Cypher query", q);
    const std::string var = m[1].str();
    if (m[4].str() != var) throw Error(ErrorCode::parse_error, "RETURN must name the matched variable", q);

    std::vector<std::pair<std::string, std::string>> equals;
    const std::string props = m[2].str();
    for (std::sregex_iterator it(props.begin(), props.end(), prop), end; it != end; ++it)
        equals.emplace_back((*it)[1].str(), (*it)[2].str());

    struct Membership {
        std::string value, property;
    };
    std::vector<Membership> members;
    if (m[3].matched) {
        static const std::regex and_split(R"(\s+AND\s+)", std::regex::icase);
        const std::string where = m[3].str();
        for (std::sregex_token_iterator it(where.begin(), where.end(), and_split, -1), end; it != end; ++it) {
            const std::string cond = it->str();
            std::smatch c;
            if (std::regex_match(cond, c, in_cond) && c[2].str() == var) members.push_back({c[1].str(), c[3].str()});
            else if (std::regex_match(cond, c, eq_cond) && c[1].str() == var) equals.emplace_back(c[2].str(), c[3].str());
            else throw Error(ErrorCode::parse_error, "unsupported WHERE condition", cond);
        }
    }

    std::vector<std::string> out;
    for (const auto& n : doc.nodes) {
        bool ok = true;
        for (const auto& [k, v] : equals) {
            auto it = n.properties.find(k);
            ok = ok && it != n.properties.end() && it->is_string() && it->get<std::string>() == v;
        }
        for (const auto& mem : members) {
            auto it = n.properties.find(mem.property);
            ok = ok && it != n.properties.end() && it->is_array() &&
                 std::find(it->begin(), it->end(), json(mem.value)) != it->end();
        }
        if (ok) out.push_back(n.id);
    }
    return out;
}

} // namespace kgbb
