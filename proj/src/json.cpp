#include "kgbb/json.hpp"

#include "kgbb/error.hpp"

namespace kgbb {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& detail = {}) {
    throw Error(ErrorCode::invalid_argument, what, detail);
}

std::string get_str(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) bad(std::string("expected string field '") + key + "'");
    return j[key].get<std::string>();
}

template <class T>
json iri_list(const T& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(x.value);
    return a;
}

void put_opt(json& j, const char* key, const std::optional<Upri>& v) {
    if (v) j[key] = v->value;
}

void put_opt(json& j, const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
}

} // namespace

json binding_to_json(const Binding& b) {
    if (const auto* n = std::get_if<NamedIndividualBinding>(&b)) return {{"named", n->resource.value}};
    if (const auto* w = std::get_if<WildcardBinding>(&b))
        return {{"wildcard", std::string(to_string(w->kind))}, {"class", w->class_upri.value}};
    const auto& l = std::get<LiteralSpec>(b);
    json j{{"datatype", std::string(to_string(l.datatype))}};
    if (l.equals) j["equals"] = *l.equals;
    if (l.min) j["min"] = *l.min;
    if (l.max) j["max"] = *l.max;
    if (l.year) j["year"] = *l.year;
    if (l.pattern) j["pattern"] = *l.pattern;
    return j;
}

Binding binding_from_json(const json& j) {
    if (!j.is_object()) bad("binding must be an object");
    if (j.contains("named")) return NamedIndividualBinding{Upri(get_str(j, "named"))};
    if (j.contains("wildcard")) {
        auto k = wildcard_kind_from_string(get_str(j, "wildcard"));
        if (!k) bad("unknown wildcard kind", get_str(j, "wildcard"));
        return WildcardBinding{*k, Upri(get_str(j, "class"))};
    }
    if (j.contains("datatype")) {
        LiteralSpec l;
        auto dt = datatype_from_string(get_str(j, "datatype"));
        if (!dt) bad("unknown datatype", get_str(j, "datatype"));
        l.datatype = *dt;
        if (j.contains("equals")) l.equals = get_str(j, "equals");
        if (j.contains("min")) l.min = j["min"].get<double>();
        if (j.contains("max")) l.max = j["max"].get<double>();
        if (j.contains("year")) l.year = j["year"].get<int>();
        if (j.contains("pattern")) l.pattern = get_str(j, "pattern");
        return l;
    }
    bad("binding needs 'named', 'wildcard' or 'datatype'");
}

json question_to_json(const QuestionUnit& q) {
    json j{{"kgbb", q.based_on_statement_kgbb.value}};
    if (q.subject_binding) j["subject"] = binding_to_json(*q.subject_binding);
    json b = json::object();
    for (const auto& [pc, x] : q.bindings) b[pc.value] = binding_to_json(x);
    j["bindings"] = b;
    return j;
}

QuestionUnit question_from_json(const json& j) {
    if (!j.is_object()) bad("question must be an object");
    QuestionUnit q;
    q.based_on_statement_kgbb = Upri(get_str(j, "kgbb"));
    if (j.contains("subject") && !j["subject"].is_null()) q.subject_binding = binding_from_json(j["subject"]);
    if (j.contains("bindings")) {
        if (!j["bindings"].is_object()) bad("bindings must be an object");
        for (const auto& [k, v] : j["bindings"].items()) q.bindings[Upri(k)] = binding_from_json(v);
    }
    return q;
}

json object_to_json(const Object& o) {
    if (const auto* u = std::get_if<Upri>(&o)) return {{"resource", u->value}};
    const auto& l = std::get<Literal>(o);
    return {{"literal", l.value}, {"datatype", std::string(to_string(l.datatype))}};
}

json position_to_json(const ObjectPositionInstance& p) {
    json j{{"id", p.upri.value},
           {"positionClass", p.position_class.value},
           {"role", p.role == PositionRole::required ? "required" : "optional"},
           {"inputTypeLabel", p.input_type_label},
           {"input", object_to_json(p.input)},
           {"currentVersion", p.current_version},
           {"creator", p.creator.value},
           {"creationDate", p.creation_date},
           {"createdWithApplication", p.created_with_application.value},
           {"versionIDs", iri_list(p.version_ids)}};
    if (p.logical_property) j["logicalProperty"] = std::string(to_string(*p.logical_property));
    put_opt(j, "importedFrom", p.imported_from);
    return j;
}

json meta_to_json(const SemanticUnitMeta& m) {
    json j{{"id", m.upri.value},
           {"label", m.label},
           {"types", iri_list(m.types)},
           {"kgbb", m.kgbb_uri.value},
           {"creator", m.creator.value},
           {"creationDate", m.creation_date},
           {"createdWithApplication", m.created_with_application.value},
           {"versionIDs", iri_list(m.version_ids)},
           {"datasetUnitIDs", iri_list(m.dataset_unit_ids)},
           {"editable", m.editable}};
    put_opt(j, "subject", m.subject);
    put_opt(j, "importedFrom", m.imported_from);
    put_opt(j, "importDate", m.import_date);
    put_opt(j, "curator", m.curator);
    put_opt(j, "curationDate", m.curation_date);
    put_opt(j, "deletedBy", m.deleted_by);
    put_opt(j, "deletionDate", m.deletion_date);
    put_opt(j, "dataProductionMetadata", m.data_production_metadata);
    return j;
}

json unit_to_json(const SemanticUnit& u) {
    json j = meta_to_json(meta_of(u));
    j["unitKind"] = std::string(unit_kind_name(u));
    if (const auto* s = std::get_if<StatementUnit>(&u)) {
        j["category"] = std::string(to_string(s->category));
        j["negated"] = s->negated;
        j["license"] = s->license.value;
        j["logicalFramework"] = s->logical_framework.value;
        j["basedOnGraphPattern"] = s->based_on_graph_pattern.value;
        put_opt(j, "accessRestrictedTo", s->access_restricted_to);
        put_opt(j, "confidenceLevel", s->confidence_level);
        put_opt(j, "validityStartDate", s->validity_start_date);
        put_opt(j, "validityEndDate", s->validity_end_date);
        j["references"] = iri_list(s->references);
        j["objectDescribedBySemanticUnit"] = iri_list(s->object_described_by_semantic_unit);
        json cns = json::array();
        for (const auto& c : s->constraint_nodes)
            cns.push_back({{"id", c.upri.value}, {"constraint", c.has_constraint}, {"position", c.applies_to_object_position.value}});
        j["constraintNodes"] = cns;
        json ps = json::array();
        for (const auto& p : s->positions) ps.push_back(position_to_json(p));
        j["positions"] = ps;
    } else if (const auto* c = std::get_if<CompoundUnit>(&u)) {
        j["compoundKind"] = std::string(to_string(c->kind));
        j["associated"] = iri_list(c->has_associated_semantic_unit);
        j["linked"] = iri_list(c->has_linked_semantic_unit);
        json ord = json::object();
        for (const auto& [m, i] : c->ordering) ord[m.value] = i;
        j["ordering"] = ord;
    } else if (const auto* q = std::get_if<QuestionUnit>(&u)) {
        j["question"] = question_to_json(*q);
    } else if (const auto* cq = std::get_if<CompoundQuestionUnit>(&u)) {
        j["expression"] = to_string(cq->expression);
    }
    return j;
}

json resource_to_json(const Resource& r) {
    json j{{"id", r.upri.value}, {"kind", std::string(to_string(r.kind))}, {"label", r.label}};
    put_opt(j, "classAffiliation", r.class_affiliation);
    return j;
}

json version_to_json(const VersionNode& v) {
    json j{{"id", v.upri.value}, {"of", v.of_unit.value}, {"creationDate", v.creation_date}, {"creator", v.creator.value}};
    put_opt(j, "previousVersion", v.previous_version);
    return j;
}

ResourceRef resource_ref_from_json(const json& j) {
    if (j.is_string()) return ResourceRef::existing(Upri(j.get<std::string>()));
    if (!j.is_object()) bad("resource reference must be a string or an object");
    ResourceRef r;
    if (j.contains("resource")) r.upri = Upri(get_str(j, "resource"));
    if (j.contains("kind")) {
        auto k = resource_kind_from_string(get_str(j, "kind"));
        if (!k) bad("unknown resource kind", get_str(j, "kind"));
        r.kind = k;
    }
    if (j.contains("class")) r.class_affiliation = Upri(get_str(j, "class"));
    if (j.contains("label")) r.label = get_str(j, "label");
    if (r.upri.empty() && !r.kind) bad("resource reference needs 'resource' or 'kind'");
    return r;
}

InputValue input_from_json(const json& j) {
    if (j.is_object() && j.contains("literal")) {
        const auto& v = j["literal"];
        return Literal{v.is_string() ? v.get<std::string>() : v.dump(), Datatype::string};
    }
    return resource_ref_from_json(j);
}

CreateRequest create_request_from_json(const json& j, const Upri& creator) {
    if (!j.is_object()) bad("request must be an object");
    CreateRequest r;
    r.kgbb_instance = Upri(get_str(j, "kgbb"));
    if (j.contains("subject") && !j["subject"].is_null()) r.subject = resource_ref_from_json(j["subject"]);
    if (j.contains("inputs")) {
        if (!j["inputs"].is_object()) bad("inputs must be an object");
        for (const auto& [k, v] : j["inputs"].items()) r.inputs[Upri(k)] = input_from_json(v);
    }
    r.provenance.creator = creator;
    if (j.contains("importedFrom")) r.provenance.imported_from = Upri(get_str(j, "importedFrom"));
    if (j.contains("category")) {
        auto c = category_from_string(get_str(j, "category"));
        if (!c) bad("unknown category", get_str(j, "category"));
        r.category_choice = c;
    }
    if (j.contains("negated")) r.negated = j["negated"].get<bool>();
    if (j.contains("license")) r.license = Upri(get_str(j, "license"));
    if (j.contains("accessRestrictedTo")) r.access_restricted_to = Upri(get_str(j, "accessRestrictedTo"));
    if (j.contains("logicalFramework")) r.logical_framework = Upri(get_str(j, "logicalFramework"));
    if (j.contains("confidenceLevel")) r.confidence_level = Upri(get_str(j, "confidenceLevel"));
    if (j.contains("validityStartDate")) r.validity_start_date = get_str(j, "validityStartDate");
    if (j.contains("validityEndDate")) r.validity_end_date = get_str(j, "validityEndDate");
    if (j.contains("references"))
        for (const auto& x : j["references"]) r.references.insert(Upri(x.get<std::string>()));
    if (j.contains("cascade"))
        for (const auto& x : j["cascade"]) r.cascade_inputs.push_back(create_request_from_json(x, creator));
    return r;
}

json diagnostics_to_json(const std::vector<Diagnostic>& ds) {
    json a = json::array();
    for (const auto& d : ds) a.push_back({{"code", d.code}, {"message", d.message}, {"subject", d.subject}});
    return a;
}

json mind_map_to_json(const MindMap& m) {
    json nodes = json::array(), edges = json::array();
    for (const auto& n : m.nodes) nodes.push_back({{"id", n.id}, {"label", n.label}, {"role", n.role}});
    for (const auto& e : m.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"label", e.label}});
    return {{"nodes", nodes}, {"edges", edges}};
}

json display_to_json(const DisplayDocument& d) {
    json sections = json::array();
    for (const auto& s : d.sections)
        sections.push_back({{"kind", s.kind},
                            {"label", s.label},
                            {"units", iri_list(s.units)},
                            {"lines", s.lines},
                            {"placeholder", s.placeholder}});
    return {{"compound", d.compound.value}, {"template", d.display_template.value}, {"sections", sections}};
}

json access_output_to_json(const AccessOutput& a) {
    json fields = json::object();
    for (const auto& [k, v] : a.fields) fields[k] = v;
    return {{"format", std::string(to_string(a.format))}, {"text", a.text}, {"fields", fields},
            {"freshNodes", iri_list(a.fresh_nodes)}};
}

json history_to_json(const History& h) {
    json events = json::array();
    for (const auto& p : h.position_events) events.push_back(position_to_json(p));
    json versions = json::array();
    for (const auto& v : h.versions) versions.push_back(version_to_json(v));
    json j{{"unit", h.unit.value}, {"positionEvents", events}, {"versions", versions}};
    put_opt(j, "deletedBy", h.deleted_by);
    put_opt(j, "deletionDate", h.deletion_date);
    return j;
}

namespace {

json form_for(const Specification& spec, const Upri& inst, std::set<Upri>& open);

// Cascade requirements shown as nested forms; a target already being
// described higher up is listed without its form.
json nested_form(const Specification& spec, const Upri& target, std::uint32_t min, std::uint32_t max, const char* via,
                 std::set<Upri>& open) {
    json n{{"target", target.value}, {"via", via}, {"required", min >= 1}, {"minCount", min}, {"maxCount", max}};
    if (open.count(target)) n["recursive"] = true;
    else n["form"] = form_for(spec, target, open);
    return n;
}

json form_for(const Specification& spec, const Upri& inst, std::set<Upri>& open) {
    open.insert(inst);
    json out;
    if (const auto* c = spec.statement_class_of_instance(inst)) {
        json fields = json::array();
        fields.push_back({{"id", "subject"},
                          {"label", c->subject_label},
                          {"tooltip", ""},
                          {"required", true},
                          {"type", "resource"},
                          {"constraint", c->subject_constraint ? "instance of <" + c->subject_constraint->value + ">" : "any resource"}});
        for (const auto& p : c->positions)
            fields.push_back({{"id", p.upri.value},
                              {"label", p.thematic_label},
                              {"tooltip", p.description},
                              {"required", p.required},
                              {"type", std::string(to_string(p.object_type))},
                              {"constraint", describe_constraint(p)}});
        json nested = json::array();
        for (const auto* l : spec.links_from(inst))
            nested.push_back(nested_form(spec, l->target, l->min_count, l->max_count, "link", open));
        out = {{"kgbb", inst.value}, {"kind", "statement"}, {"label", c->label},
               {"template", c->dynamic_labels.count("default") ? c->dynamic_labels.at("default") : ""},
               {"fields", fields}, {"nested", nested}};
    } else if (const auto* c = spec.compound_class_of_instance(inst)) {
        json fields = json::array();
        if (c->kind != CompoundKind::dataset && c->kind != CompoundKind::list)
            fields.push_back({{"id", "subject"},
                              {"label", "SUBJECT"},
                              {"tooltip", ""},
                              {"required", true},
                              {"type", "resource"},
                              {"constraint", c->subject_constraint ? "instance of <" + c->subject_constraint->value + ">" : "any resource"}});
        json nested = json::array();
        for (const auto* a : spec.associations_from(inst))
            nested.push_back(nested_form(spec, a->target, a->min_count, a->max_count, "association", open));
        out = {{"kgbb", inst.value}, {"kind", "compound"}, {"label", c->label},
               {"compoundKind", std::string(to_string(c->kind))}, {"fields", fields}, {"nested", nested}};
    } else {
        throw Error(ErrorCode::unknown_instance, "not a KGBB instance", inst.value);
    }
    open.erase(inst);
    return out;
}

} // namespace

json form_descriptor(const Specification& spec, const Upri& kgbb_instance) {
    std::set<Upri> open;
    return form_for(spec, kgbb_instance, open);
}

json spec_summary(const Specification& spec) {
    json instances = json::array();
    for (const auto& [inst, cls] : spec.graph.kgbb_instances) {
        const auto* c = spec.find_class(cls);
        instances.push_back({{"id", inst.value},
                             {"class", cls.value},
                             {"kind", c && std::holds_alternative<CompoundKgbbClass>(*c) ? "compound" : "statement"}});
    }
    json assoc = json::array(), links = json::array(), refs = json::array();
    for (const auto& a : spec.graph.association_nodes)
        assoc.push_back({{"source", a.source.value}, {"target", a.target.value}, {"minCount", a.min_count},
                         {"maxCount", a.max_count}, {"carryOver", iri_list(a.carry_over_subject_range_constraint_to)}});
    for (const auto& l : spec.graph.link_nodes) {
        json n{{"linking", l.linking.value}, {"target", l.target.value}, {"minCount", l.min_count},
               {"maxCount", l.max_count}, {"useAsSubject", l.use_as_subject.value}};
        put_opt(n, "ifObject", l.if_object);
        links.push_back(n);
    }
    for (const auto& r : spec.graph.reference_nodes)
        refs.push_back({{"source", r.source.value}, {"target", r.target.value}, {"minCount", r.min_count},
                        {"maxCount", r.max_count}});
    return {{"application", spec.application.upri.value},
            {"label", spec.application.label},
            {"instances", instances},
            {"associations", assoc},
            {"links", links},
            {"references", refs},
            {"startingPoints", iri_list(spec.graph.data_entry_starting_points)}};
}

} // namespace kgbb
