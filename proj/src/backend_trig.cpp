#include "kgbb/backends.hpp"

#include "kgbb/error.hpp"
#include "records.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kgbb {

namespace {

constexpr std::string_view xsd_ns = "http://www.w3.org/2001/XMLSchema#";
constexpr std::string_view rdf_ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view rdfs_ns = "http://www.w3.org/2000/01/rdf-schema#";
constexpr std::string_view meta_prefix = "urn:kgbb:meta:";

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

std::string iri_term(std::string_view iri) { return "<" + std::string(iri) + ">"; }

std::string literal_term(std::string_view value, std::string_view datatype_iri) {
    return "\"" + escape(value) + "\"^^" + iri_term(datatype_iri);
}

std::string object_term(const Object& o) {
    if (const auto* u = std::get_if<Upri>(&o)) return iri_term(u->value);
    const auto& l = std::get<Literal>(o);
    return literal_term(l.value, xsd_iri(l.datatype));
}

std::string field_term(const std::string& field, const std::string& value) {
    switch (records::field_info(field).type) {
    case records::FieldType::iri: return iri_term(value);
    case records::FieldType::time: return literal_term(value, std::string(xsd_ns) + "dateTime");
    case records::FieldType::boolean: return literal_term(value, std::string(xsd_ns) + "boolean");
    case records::FieldType::integer: return literal_term(value, std::string(xsd_ns) + "integer");
    case records::FieldType::text: break;
    }
    return literal_term(value, std::string(xsd_ns) + "string");
}

using Graphs = std::map<std::string, std::vector<std::string>>;

void add_record(Graphs& g, const std::string& graph, const Upri& subject, const records::Record& r) {
    auto& lines = g[graph];
    for (const auto& [field, values] : r)
        for (const auto& v : values)
            lines.push_back(iri_term(subject.value) + " " + iri_term(records::field_predicate(field).value) + " " +
                            field_term(field, v) + " .");
}

// ---- reader -----------------------------------------------------------------

struct Term {
    enum class Kind { iri, literal } kind = Kind::iri;
    std::string value;
    std::string datatype;  // literals
};

struct Quad {
    std::string graph;
    std::string subject;
    std::string predicate;
    Term object;
};

class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {
        prefixes_["kgbb"] = std::string(vocab::base);
        prefixes_["rdf"] = std::string(rdf_ns);
        prefixes_["rdfs"] = std::string(rdfs_ns);
        prefixes_["xsd"] = std::string(xsd_ns);
    }

    std::vector<Quad> read() {
        std::vector<Quad> out;
        for (skip(); i_ < s_.size(); skip()) {
            if (s_[i_] == '@' || starts_keyword("PREFIX")) {
                read_prefix();
                continue;
            }
            const auto graph = read_iri_like();
            skip();
            if (s_.substr(i_, 5) == "GRAPH") fail("GRAPH keyword is not supported");
            expect('{');
            for (skip(); i_ < s_.size() && s_[i_] != '}'; skip()) {
                Quad q;
                q.graph = graph;
                q.subject = read_iri_like();
                skip();
                q.predicate = read_predicate();
                skip();
                q.object = read_object();
                skip();
                if (i_ < s_.size() && s_[i_] == '.') ++i_;
                else if (i_ >= s_.size() || s_[i_] != '}') fail("expected '.'");
                out.push_back(std::move(q));
            }
            expect('}');
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) {
            if (s_[k] == '\n') ++line, col = 1;
            else ++col;
        }
        throw Error(ErrorCode::parse_error, "TriG: " + msg, std::to_string(line) + ":" + std::to_string(col));
    }

    void skip() {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            else if (s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else break;
        }
    }

    bool starts_keyword(std::string_view kw) const { return s_.substr(i_, kw.size()) == kw; }

    void expect(char c) {
        skip();
        if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }

    void read_prefix() {
        const bool sparql_style = s_[i_] != '@';
        i_ += sparql_style ? 6 : 7;
        skip();
        const auto colon = s_.find(':', i_);
        if (colon == std::string_view::npos) fail("malformed prefix");
        std::string name(s_.substr(i_, colon - i_));
        i_ = colon + 1;
        skip();
        prefixes_[name] = read_iri();
        if (!sparql_style) expect('.');
    }

    std::string read_iri() {
        if (i_ >= s_.size() || s_[i_] != '<') fail("expected IRI");
        const auto end = s_.find('>', i_);
        if (end == std::string_view::npos) fail("unterminated IRI");
        std::string v(s_.substr(i_ + 1, end - i_ - 1));
        i_ = end + 1;
        return v;
    }

    std::string read_iri_like() {
        if (i_ < s_.size() && s_[i_] == '<') return read_iri();
        const auto start = i_;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '{' && s_[i_] != '}')
            ++i_;
        auto tok = s_.substr(start, i_ - start);
        // A trailing '.' terminates the statement, it is not part of the name.
        if (!tok.empty() && tok.back() == '.') {
            tok.remove_suffix(1);
            --i_;
        }
        const auto colon = tok.find(':');
        if (colon == std::string_view::npos) fail("expected IRI or prefixed name");
        auto it = prefixes_.find(std::string(tok.substr(0, colon)));
        if (it == prefixes_.end()) fail("unknown prefix '" + std::string(tok.substr(0, colon)) + "'");
        return it->second + std::string(tok.substr(colon + 1));
    }

    std::string read_predicate() {
        if (i_ < s_.size() && s_[i_] == 'a' && i_ + 1 < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_ + 1]))) {
            ++i_;
            return std::string(vocab::rdf_type);
        }
        return read_iri_like();
    }

    Term read_object() {
        if (i_ >= s_.size()) fail("expected object");
        if (s_[i_] != '"') return {Term::Kind::iri, read_iri_like(), {}};
        ++i_;
        std::string v;
        for (;; ++i_) {
            if (i_ >= s_.size()) fail("unterminated literal");
            char c = s_[i_];
            if (c == '"') break;
            if (c == '\\') {
                if (++i_ >= s_.size()) fail("unterminated escape");
                switch (s_[i_]) {
                case 'n': v += '\n'; break;
                case 'r': v += '\r'; break;
                case 't': v += '\t'; break;
                case '"': v += '"'; break;
                case '\\': v += '\\'; break;
                default: fail("unknown escape");
                }
            } else {
                v += c;
            }
        }
        ++i_;
        Term t{Term::Kind::literal, std::move(v), std::string(xsd_ns) + "string"};
        if (s_.substr(i_, 2) == "^^") {
            i_ += 2;
            t.datatype = read_iri_like();
        } else if (i_ < s_.size() && s_[i_] == '@') {
            while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '.') ++i_;
        }
        return t;
    }

    std::string_view s_;
    std::size_t i_ = 0;
    std::map<std::string, std::string> prefixes_;
};

std::optional<LogicalProperty> logical_from_iri(const std::string& iri) {
    if (iri.rfind(vocab::base, 0) != 0) return std::nullopt;
    return logical_property_from_string(std::string_view(iri).substr(vocab::base.size()));
}

std::vector<ObjectPositionInstance> positions_from_graph(const std::string& unit, const std::vector<const Quad*>& quads) {
    const std::string required = vocab::term("requiredObjectPosition").value;
    const std::string optional = vocab::term("optionalObjectPosition").value;

    std::map<std::string, PositionRole> roles;
    std::map<std::string, records::Record> recs;
    for (const auto* q : quads) {
        if (q->predicate == required || q->predicate == optional) {
            if (q->object.kind != Term::Kind::iri) throw Error(ErrorCode::schema_mismatch, "position link to a literal", unit);
            roles[q->object.value] = q->predicate == required ? PositionRole::required : PositionRole::optional;
        }
    }
    for (const auto* q : quads) {
        if (!roles.count(q->subject)) continue;
        auto& r = recs[q->subject];
        if (q->predicate == vocab::rdf_type) {
            r["positionClass"].push_back(q->object.value);
        } else if (q->predicate == vocab::term("literal").value) {
            auto dt = datatype_from_xsd(q->object.datatype);
            if (!dt) throw Error(ErrorCode::schema_mismatch, "unsupported literal datatype", q->object.datatype);
            r["literal"].push_back(q->object.value);
            r["literalDatatype"].push_back(std::string(to_string(*dt)));
        } else if (q->predicate == vocab::term("logicalProperty").value) {
            auto lp = logical_from_iri(q->object.value);
            if (!lp) throw Error(ErrorCode::schema_mismatch, "unknown logical property", q->object.value);
            r["logicalProperty"].push_back(std::string(to_string(*lp)));
        } else {
            r[records::field_from_predicate(Upri(q->predicate))].push_back(q->object.value);
        }
    }
    std::vector<ObjectPositionInstance> out;
    for (const auto& [id, role] : roles) out.push_back(records::position_from_record(Upri(id), recs[id], role));
    std::sort(out.begin(), out.end(), position_order);
    return out;
}

} // namespace

std::string meta_graph_name(const Upri& unit) { return std::string(meta_prefix) + unit.value; }

std::string export_trig(const Store& store) {
    Graphs graphs;
    for (const auto& [id, u] : store.units) {
        add_record(graphs, meta_graph_name(id), id, records::unit_record(u));
        if (const auto* s = std::get_if<StatementUnit>(&u)) {
            auto& lines = graphs[id.value];
            for (const auto& t : data_graph(*s))
                lines.push_back(iri_term(t.subject.value) + " " + iri_term(t.predicate.value) + " " + object_term(t.object) + " .");
        }
    }
    for (const auto& [id, r] : store.resources) add_record(graphs, std::string(resources_graph), id, records::resource_record(r));
    for (const auto& [id, v] : store.versions) add_record(graphs, std::string(versions_graph), id, records::version_record(v));

    std::ostringstream out;
    out << "@prefix kgbb: <" << vocab::base << "> .\n"
        << "@prefix rdf: <" << rdf_ns << "> .\n"
        << "@prefix rdfs: <" << rdfs_ns << "> .\n"
        << "@prefix xsd: <" << xsd_ns << "> .\n";
    for (auto& [name, lines] : graphs) {
        std::sort(lines.begin(), lines.end());
        out << "\n" << iri_term(name) << " {\n";
        for (const auto& l : lines) out << "    " << l << "\n";
        out << "}\n";
    }
    return out.str();
}

Store import_trig(std::string_view text) {
    const auto quads = Reader(text).read();

    std::map<std::string, records::Record> unit_recs, resource_recs, version_recs;
    std::map<std::string, std::vector<const Quad*>> data_graphs;
    for (const auto& q : quads) {
        const auto field = records::field_from_predicate(Upri(q.predicate));
        if (q.graph.rfind(meta_prefix, 0) == 0) {
            if (q.subject != q.graph.substr(meta_prefix.size()))
                throw Error(ErrorCode::schema_mismatch, "metadata graph describes another unit", q.graph);
            unit_recs[q.subject][field].push_back(q.object.value);
        } else if (q.graph == resources_graph) {
            resource_recs[q.subject][field].push_back(q.object.value);
        } else if (q.graph == versions_graph) {
            version_recs[q.subject][field].push_back(q.object.value);
        } else {
            data_graphs[q.graph].push_back(&q);
        }
    }

    Store store;
    for (const auto& [id, r] : unit_recs) store.units.emplace(Upri(id), records::unit_from_record(Upri(id), r));
    for (const auto& [id, r] : resource_recs) store.resources.emplace(Upri(id), records::resource_from_record(Upri(id), r));
    for (const auto& [id, r] : version_recs) store.versions.emplace(Upri(id), records::version_from_record(Upri(id), r));
    for (const auto& [graph, qs] : data_graphs) {
        auto it = store.units.find(Upri(graph));
        auto* s = it == store.units.end() ? nullptr : std::get_if<StatementUnit>(&it->second);
        if (!s) throw Error(ErrorCode::schema_mismatch, "data graph without a statement unit", graph);
        s->positions = positions_from_graph(graph, qs);
    }
    return store;
}

} // namespace kgbb
