#include "records.hpp"

#include "kgbb/error.hpp"
#include "kgbb/json.hpp"

#include <algorithm>

namespace kgbb::records {

namespace {

using FT = FieldType;

const std::map<std::string, FieldInfo, std::less<>>& registry() {
    static const std::map<std::string, FieldInfo, std::less<>> r = {
        // unit metadata
        {"label", {FT::text, false}},
        {"types", {FT::iri, true}},
        {"unitKind", {FT::text, false}},
        {"hasSemanticUnitSubject", {FT::iri, false}},
        {"kgbbURI", {FT::iri, false}},
        {"creator", {FT::iri, false}},
        {"creationDate", {FT::time, false}},
        {"createdWithApplication", {FT::iri, false}},
        {"importedFrom", {FT::iri, false}},
        {"importDate", {FT::time, false}},
        {"curator", {FT::iri, false}},
        {"curationDate", {FT::time, false}},
        {"deletedBy", {FT::iri, false}},
        {"deletionDate", {FT::time, false}},
        {"dataProductionMetadata", {FT::iri, false}},
        {"versionID", {FT::iri, true}},
        {"datasetUnitID", {FT::iri, true}},
        {"editable", {FT::boolean, false}},
        // statements
        {"category", {FT::text, false}},
        {"negated", {FT::boolean, false}},
        {"objectDescribedBySemanticUnit", {FT::iri, true}},
        {"basedOnGraphPattern", {FT::iri, false}},
        {"constraintNode", {FT::text, true}},
        {"license", {FT::iri, false}},
        {"accessRestrictedTo", {FT::iri, false}},
        {"logicalFramework", {FT::iri, false}},
        {"confidenceLevel", {FT::iri, false}},
        {"validityStartDate", {FT::text, false}},
        {"validityEndDate", {FT::text, false}},
        {"references", {FT::iri, true}},
        // compounds
        {"compoundKind", {FT::text, false}},
        {"hasAssociatedSemanticUnit", {FT::iri, true}},
        {"hasLinkedSemanticUnit", {FT::iri, true}},
        {"ordering", {FT::text, true}},
        // questions
        {"basedOnStatementKGBB", {FT::iri, false}},
        {"subjectBinding", {FT::text, false}},
        {"binding", {FT::text, true}},
        {"questionExpression", {FT::text, false}},
        // position instances
        {"positionClass", {FT::iri, false}},
        {"inputTypeLabel", {FT::text, false}},
        {"resourceURI", {FT::iri, false}},
        {"literal", {FT::text, false}},
        {"literalDatatype", {FT::text, false}},
        {"logicalProperty", {FT::text, false}},
        {"currentVersion", {FT::boolean, false}},
        // resources and versions
        {"resourceKind", {FT::text, false}},
        {"classAffiliation", {FT::iri, false}},
        {"versionOf", {FT::iri, false}},
        {"previousVersion", {FT::iri, false}},
        {"contentID", {FT::text, false}},
    };
    return r;
}

void put(Record& r, const std::string& name, std::string v) { r[name].push_back(std::move(v)); }

void put(Record& r, const std::string& name, const std::optional<Upri>& v) {
    if (v) put(r, name, v->value);
}

void put(Record& r, const std::string& name, const std::optional<std::string>& v) {
    if (v) put(r, name, *v);
}

void put(Record& r, const std::string& name, const std::set<Upri>& xs) {
    auto& out = r[name];
    for (const auto& x : xs) out.push_back(x.value);
    if (out.empty()) r.erase(name);
}

void put(Record& r, const std::string& name, bool b) { put(r, name, std::string(b ? "true" : "false")); }

std::vector<std::string> all(const Record& r, const std::string& name) {
    auto it = r.find(name);
    return it == r.end() ? std::vector<std::string>{} : it->second;
}

Upri iri(const Record& r, const std::string& name) { return Upri(get1(r, name).value_or("")); }

std::optional<Upri> opt_iri(const Record& r, const std::string& name) {
    if (auto v = get1(r, name)) return Upri(*v);
    return std::nullopt;
}

std::set<Upri> iris(const Record& r, const std::string& name) {
    std::set<Upri> out;
    for (const auto& v : all(r, name)) out.insert(Upri(v));
    return out;
}

bool flag(const Record& r, const std::string& name, bool fallback) {
    auto v = get1(r, name);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    throw Error(ErrorCode::schema_mismatch, "expected a boolean", name + "=" + *v);
}

[[noreturn]] void bad_value(const std::string& field, const std::string& v) {
    throw Error(ErrorCode::schema_mismatch, "unrecognized field value", field + "=" + v);
}

Record meta_record(const SemanticUnitMeta& m) {
    Record r;
    put(r, "label", m.label);
    put(r, "types", m.types);
    put(r, "hasSemanticUnitSubject", m.subject);
    put(r, "kgbbURI", m.kgbb_uri.value);
    put(r, "creator", m.creator.value);
    put(r, "creationDate", m.creation_date);
    put(r, "createdWithApplication", m.created_with_application.value);
    put(r, "importedFrom", m.imported_from);
    put(r, "importDate", m.import_date);
    put(r, "curator", m.curator);
    put(r, "curationDate", m.curation_date);
    put(r, "deletedBy", m.deleted_by);
    put(r, "deletionDate", m.deletion_date);
    put(r, "dataProductionMetadata", m.data_production_metadata);
    put(r, "versionID", m.version_ids);
    put(r, "datasetUnitID", m.dataset_unit_ids);
    put(r, "editable", m.editable);
    return r;
}

SemanticUnitMeta meta_from_record(const Upri& id, const Record& r) {
    SemanticUnitMeta m;
    m.upri = id;
    m.label = get1(r, "label").value_or("");
    m.types = iris(r, "types");
    m.subject = opt_iri(r, "hasSemanticUnitSubject");
    m.kgbb_uri = iri(r, "kgbbURI");
    m.creator = iri(r, "creator");
    m.creation_date = get1(r, "creationDate").value_or("");
    m.created_with_application = iri(r, "createdWithApplication");
    m.imported_from = opt_iri(r, "importedFrom");
    m.import_date = get1(r, "importDate");
    m.curator = opt_iri(r, "curator");
    m.curation_date = get1(r, "curationDate");
    m.deleted_by = opt_iri(r, "deletedBy");
    m.deletion_date = get1(r, "deletionDate");
    m.data_production_metadata = opt_iri(r, "dataProductionMetadata");
    m.version_ids = iris(r, "versionID");
    m.dataset_unit_ids = iris(r, "datasetUnitID");
    m.editable = flag(r, "editable", true);
    return m;
}

} // namespace

FieldInfo field_info(std::string_view name) {
    auto it = registry().find(name);
    return it == registry().end() ? FieldInfo{} : it->second;
}

Upri field_predicate(std::string_view name) {
    if (name == "label") return Upri(std::string(vocab::rdfs_label));
    if (name == "types") return Upri(std::string(vocab::rdf_type));
    return vocab::term(name);
}

std::string field_from_predicate(const Upri& predicate) {
    if (predicate.value == vocab::rdfs_label) return "label";
    if (predicate.value == vocab::rdf_type) return "types";
    if (predicate.value.rfind(vocab::base, 0) == 0) return predicate.value.substr(vocab::base.size());
    return predicate.value;
}

const std::vector<std::string>& unit_fields() {
    static const std::vector<std::string> f = {
        "unitKind", "label", "types", "hasSemanticUnitSubject", "kgbbURI", "creator", "creationDate",
        "createdWithApplication", "importedFrom", "importDate", "curator", "curationDate", "deletedBy",
        "deletionDate", "dataProductionMetadata", "versionID", "datasetUnitID", "editable", "category", "negated",
        "objectDescribedBySemanticUnit", "basedOnGraphPattern", "constraintNode", "license", "accessRestrictedTo",
        "logicalFramework", "confidenceLevel", "validityStartDate", "validityEndDate", "references", "compoundKind",
        "hasAssociatedSemanticUnit", "hasLinkedSemanticUnit", "ordering", "basedOnStatementKGBB", "subjectBinding",
        "binding", "questionExpression"};
    return f;
}

const std::vector<std::string>& position_fields() {
    static const std::vector<std::string> f = {
        "positionClass", "inputTypeLabel", "resourceURI", "literal", "literalDatatype", "logicalProperty",
        "currentVersion", "creator", "creationDate", "createdWithApplication", "importedFrom", "versionID",
        "datasetUnitID"};
    return f;
}

const std::vector<std::string>& resource_fields() {
    static const std::vector<std::string> f = {"resourceKind", "label", "classAffiliation"};
    return f;
}

const std::vector<std::string>& version_fields() {
    static const std::vector<std::string> f = {"versionOf", "creationDate", "creator", "previousVersion", "contentID"};
    return f;
}

std::optional<std::string> get1(const Record& r, const std::string& name) {
    auto it = r.find(name);
    if (it == r.end() || it->second.empty()) return std::nullopt;
    return it->second.front();
}

Record unit_record(const SemanticUnit& u) {
    Record r = meta_record(meta_of(u));
    put(r, "unitKind", std::string(unit_kind_name(u)));
    if (const auto* s = std::get_if<StatementUnit>(&u)) {
        put(r, "category", std::string(to_string(s->category)));
        put(r, "negated", s->negated);
        put(r, "objectDescribedBySemanticUnit", s->object_described_by_semantic_unit);
        put(r, "basedOnGraphPattern", s->based_on_graph_pattern.value);
        for (const auto& c : s->constraint_nodes)
            put(r, "constraintNode",
                json{{"id", c.upri.value}, {"position", c.applies_to_object_position.value}, {"constraint", c.has_constraint}}
                    .dump());
        put(r, "license", s->license.value);
        put(r, "accessRestrictedTo", s->access_restricted_to);
        put(r, "logicalFramework", s->logical_framework.value);
        put(r, "confidenceLevel", s->confidence_level);
        put(r, "validityStartDate", s->validity_start_date);
        put(r, "validityEndDate", s->validity_end_date);
        put(r, "references", s->references);
    } else if (const auto* c = std::get_if<CompoundUnit>(&u)) {
        put(r, "compoundKind", std::string(to_string(c->kind)));
        put(r, "hasAssociatedSemanticUnit", c->has_associated_semantic_unit);
        put(r, "hasLinkedSemanticUnit", c->has_linked_semantic_unit);
        for (const auto& [m, i] : c->ordering) put(r, "ordering", std::to_string(i) + "|" + m.value);
    } else if (const auto* q = std::get_if<QuestionUnit>(&u)) {
        put(r, "basedOnStatementKGBB", q->based_on_statement_kgbb.value);
        if (q->subject_binding) put(r, "subjectBinding", binding_to_json(*q->subject_binding).dump());
        for (const auto& [pc, b] : q->bindings)
            put(r, "binding", json{{"position", pc.value}, {"binding", binding_to_json(b)}}.dump());
    } else if (const auto* cq = std::get_if<CompoundQuestionUnit>(&u)) {
        put(r, "questionExpression", to_string(cq->expression));
    }
    return r;
}

SemanticUnit unit_from_record(const Upri& id, const Record& r) {
    const auto kind = get1(r, "unitKind").value_or("");
    auto meta = meta_from_record(id, r);
    if (kind == "statement") {
        StatementUnit s;
        s.meta = std::move(meta);
        const auto cat = get1(r, "category").value_or("");
        auto c = category_from_string(cat);
        if (!c) bad_value("category", cat);
        s.category = *c;
        s.negated = flag(r, "negated", false);
        s.object_described_by_semantic_unit = iris(r, "objectDescribedBySemanticUnit");
        s.based_on_graph_pattern = iri(r, "basedOnGraphPattern");
        for (const auto& text : all(r, "constraintNode")) {
            auto j = json::parse(text, nullptr, false);
            if (j.is_discarded() || !j.is_object()) bad_value("constraintNode", text);
            s.constraint_nodes.insert({Upri(j.value("id", "")), j.value("constraint", ""), Upri(j.value("position", ""))});
        }
        s.license = iri(r, "license");
        s.access_restricted_to = opt_iri(r, "accessRestrictedTo");
        s.logical_framework = iri(r, "logicalFramework");
        s.confidence_level = opt_iri(r, "confidenceLevel");
        s.validity_start_date = get1(r, "validityStartDate");
        s.validity_end_date = get1(r, "validityEndDate");
        s.references = iris(r, "references");
        return s;
    }
    if (kind == "compound") {
        CompoundUnit c;
        c.meta = std::move(meta);
        const auto ck = get1(r, "compoundKind").value_or("");
        auto k = compound_kind_from_string(ck);
        if (!k) bad_value("compoundKind", ck);
        c.kind = *k;
        c.has_associated_semantic_unit = iris(r, "hasAssociatedSemanticUnit");
        c.has_linked_semantic_unit = iris(r, "hasLinkedSemanticUnit");
        for (const auto& text : all(r, "ordering")) {
            const auto bar = text.find('|');
            if (bar == std::string::npos) bad_value("ordering", text);
            try {
                c.ordering[Upri(text.substr(bar + 1))] = std::stoul(text.substr(0, bar));
            } catch (const std::logic_error&) {
                bad_value("ordering", text);
            }
        }
        return c;
    }
    if (kind == "question") {
        QuestionUnit q;
        q.meta = std::move(meta);
        q.based_on_statement_kgbb = iri(r, "basedOnStatementKGBB");
        if (auto sb = get1(r, "subjectBinding")) q.subject_binding = binding_from_json(json::parse(*sb));
        for (const auto& text : all(r, "binding")) {
            auto j = json::parse(text, nullptr, false);
            if (j.is_discarded() || !j.contains("position") || !j.contains("binding")) bad_value("binding", text);
            q.bindings[Upri(j["position"].get<std::string>())] = binding_from_json(j["binding"]);
        }
        return q;
    }
    if (kind == "compound-question") {
        CompoundQuestionUnit cq;
        cq.meta = std::move(meta);
        cq.expression = parse_question_expr(get1(r, "questionExpression").value_or(""));
        return cq;
    }
    bad_value("unitKind", kind);
}

std::string_view role_name(PositionRole role) { return role == PositionRole::required ? "required" : "optional"; }

PositionRole role_from_name(std::string_view name) {
    if (name == "required") return PositionRole::required;
    if (name == "optional") return PositionRole::optional;
    bad_value("role", std::string(name));
}

Record position_record(const ObjectPositionInstance& p) {
    Record r;
    put(r, "positionClass", p.position_class.value);
    put(r, "inputTypeLabel", p.input_type_label);
    if (const auto* u = std::get_if<Upri>(&p.input)) {
        put(r, "resourceURI", u->value);
    } else {
        const auto& l = std::get<Literal>(p.input);
        put(r, "literal", l.value);
        put(r, "literalDatatype", std::string(to_string(l.datatype)));
    }
    if (p.logical_property) put(r, "logicalProperty", std::string(to_string(*p.logical_property)));
    put(r, "currentVersion", p.current_version);
    put(r, "creator", p.creator.value);
    put(r, "creationDate", p.creation_date);
    put(r, "createdWithApplication", p.created_with_application.value);
    put(r, "importedFrom", p.imported_from);
    put(r, "versionID", p.version_ids);
    put(r, "datasetUnitID", p.dataset_unit_ids);
    return r;
}

ObjectPositionInstance position_from_record(const Upri& id, const Record& r, PositionRole role) {
    ObjectPositionInstance p;
    p.upri = id;
    p.role = role;
    p.position_class = iri(r, "positionClass");
    p.input_type_label = get1(r, "inputTypeLabel").value_or("");
    if (auto dt = get1(r, "literalDatatype")) {
        auto d = datatype_from_string(*dt);
        if (!d) bad_value("literalDatatype", *dt);
        p.input = Literal{get1(r, "literal").value_or(""), *d};
    } else {
        p.input = iri(r, "resourceURI");
    }
    if (auto lp = get1(r, "logicalProperty")) {
        auto v = logical_property_from_string(*lp);
        if (!v) bad_value("logicalProperty", *lp);
        p.logical_property = v;
    }
    p.current_version = flag(r, "currentVersion", true);
    p.creator = iri(r, "creator");
    p.creation_date = get1(r, "creationDate").value_or("");
    p.created_with_application = iri(r, "createdWithApplication");
    p.imported_from = opt_iri(r, "importedFrom");
    p.version_ids = iris(r, "versionID");
    p.dataset_unit_ids = iris(r, "datasetUnitID");
    return p;
}

Record resource_record(const Resource& res) {
    Record r;
    put(r, "resourceKind", std::string(to_string(res.kind)));
    put(r, "label", res.label);
    put(r, "classAffiliation", res.class_affiliation);
    return r;
}

Resource resource_from_record(const Upri& id, const Record& r) {
    Resource res;
    res.upri = id;
    const auto k = get1(r, "resourceKind").value_or("");
    auto kind = resource_kind_from_string(k);
    if (!kind) bad_value("resourceKind", k);
    res.kind = *kind;
    res.label = get1(r, "label").value_or("");
    res.class_affiliation = opt_iri(r, "classAffiliation");
    return res;
}

Record version_record(const VersionNode& v) {
    Record r;
    put(r, "versionOf", v.of_unit.value);
    put(r, "creationDate", v.creation_date);
    put(r, "creator", v.creator.value);
    put(r, "previousVersion", v.previous_version);
    put(r, "contentID", v.content_id);
    return r;
}

VersionNode version_from_record(const Upri& id, const Record& r) {
    VersionNode v;
    v.upri = id;
    v.of_unit = iri(r, "versionOf");
    v.creation_date = get1(r, "creationDate").value_or("");
    v.creator = iri(r, "creator");
    v.previous_version = opt_iri(r, "previousVersion");
    v.content_id = get1(r, "contentID");
    return v;
}

} // namespace kgbb::records
