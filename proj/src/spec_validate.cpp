// Inheritance resolution and specification-graph diagnostics.

#include "kgbb/error.hpp"
#include "kgbb/spec.hpp"

#include <algorithm>
#include <functional>

namespace kgbb {

namespace {

[[noreturn]] void widening(const std::string& what, const Upri& pos) {
    throw Error(ErrorCode::constraint_widening, what, pos.value);
}

// Throws unless `child` is at least as strict as `parent`.
void check_narrowing(const ObjectPositionClass& parent, const ObjectPositionClass& child, const Ontology& onto) {
    if (parent.object_type != child.object_type) widening("object type changed", child.upri);
    if (parent.required && !child.required) widening("required position made optional", child.upri);
    if (parent.object_type == ObjectType::resource) {
        if (parent.resource_class &&
            (!child.resource_class || !onto.is_subclass_of(*child.resource_class, *parent.resource_class)))
            widening("resource constraint is not a subclass of the inherited one", child.upri);
        return;
    }
    const auto& p = *parent.literal;
    if (!child.literal) widening("literal constraint dropped", child.upri);
    const auto& c = *child.literal;
    if (c.datatype != p.datatype) widening("datatype changed", child.upri);
    if (p.min && (!c.min || *c.min < *p.min)) widening("literal minimum relaxed", child.upri);
    if (p.max && (!c.max || *c.max > *p.max)) widening("literal maximum relaxed", child.upri);
    if (p.pattern && c.pattern != p.pattern) widening("literal pattern changed", child.upri);
}

void check_subject_narrowing(const std::optional<Upri>& parent, const std::optional<Upri>& child, const Upri& cls,
                             const Ontology& onto) {
    if (parent && child && !onto.is_subclass_of(*child, *parent))
        throw Error(ErrorCode::constraint_widening, "subject constraint is not a subclass of the inherited one", cls.value);
}

template <class T>
void merge_by_upri(std::vector<T>& inherited, const std::vector<T>& own) {
    for (const auto& x : own) {
        auto it = std::find_if(inherited.begin(), inherited.end(), [&](const T& y) { return y.upri == x.upri; });
        if (it == inherited.end()) inherited.push_back(x);
        else *it = x;
    }
}

StatementKgbbClass inherit(const StatementKgbbClass& parent, const StatementKgbbClass& own, const Ontology& onto) {
    StatementKgbbClass out = own;
    out.positions = parent.positions;
    for (const auto& p : own.positions) {
        auto it = std::find_if(out.positions.begin(), out.positions.end(), [&](const auto& x) { return x.upri == p.upri; });
        if (it == out.positions.end()) {
            out.positions.push_back(p);
            continue;
        }
        check_narrowing(*it, p, onto);
        auto merged = p;
        merged.logical_properties.insert(it->logical_properties.begin(), it->logical_properties.end());
        *it = merged;
    }
    check_subject_narrowing(parent.subject_constraint, own.subject_constraint, own.upri, onto);
    if (!out.subject_constraint) out.subject_constraint = parent.subject_constraint;
    if (out.subject_label.empty()) out.subject_label = parent.subject_label;
    if (out.predicate_label.empty()) out.predicate_label = parent.predicate_label;
    if (out.predicate_definition.empty()) out.predicate_definition = parent.predicate_definition;
    if (!out.predicate) out.predicate = parent.predicate;
    if (out.description.empty()) out.description = parent.description;
    out.lexical = out.lexical || parent.lexical;
    for (const auto& [k, v] : parent.dynamic_labels) out.dynamic_labels.emplace(k, v);
    if (out.mind_map.hub_label.empty()) out.mind_map.hub_label = parent.mind_map.hub_label;
    for (const auto& [k, v] : parent.mind_map.edge_labels) out.mind_map.edge_labels.emplace(k, v);
    if (own.question == QuestionStyle{}) out.question = parent.question;
    out.access_templates = parent.access_templates;
    merge_by_upri(out.access_templates, own.access_templates);
    out.import_templates = parent.import_templates;
    merge_by_upri(out.import_templates, own.import_templates);
    for (const auto& o : parent.use_with_ontology)
        if (std::find(out.use_with_ontology.begin(), out.use_with_ontology.end(), o) == out.use_with_ontology.end())
            out.use_with_ontology.push_back(o);
    return out;
}

CompoundKgbbClass inherit(const CompoundKgbbClass& parent, const CompoundKgbbClass& own, const Ontology& onto) {
    CompoundKgbbClass out = own;
    if (own.kind != parent.kind)
        throw Error(ErrorCode::invalid_argument, "compound kind differs from the parent class", own.upri.value);
    check_subject_narrowing(parent.subject_constraint, own.subject_constraint, own.upri, onto);
    if (!out.subject_constraint) out.subject_constraint = parent.subject_constraint;
    if (out.description.empty()) out.description = parent.description;
    out.display_templates = parent.display_templates;
    merge_by_upri(out.display_templates, own.display_templates);
    return out;
}

} // namespace

std::map<Upri, KgbbClass> resolve_inheritance(const std::map<Upri, KgbbClass>& declared, const Ontology& ontology) {
    std::map<Upri, KgbbClass> done;
    std::set<Upri> in_progress;

    std::function<const KgbbClass&(const Upri&)> resolve = [&](const Upri& id) -> const KgbbClass& {
        if (auto it = done.find(id); it != done.end()) return it->second;
        auto decl = declared.find(id);
        if (decl == declared.end()) throw Error(ErrorCode::dangling_reference, "parent class is not declared", id.value);
        if (!in_progress.insert(id).second) throw Error(ErrorCode::taxonomy_cycle, "cycle in class taxonomy", id.value);
        const auto& own = decl->second;
        KgbbClass effective = own;
        if (const auto& parent_id = class_parent(own)) {
            const auto& parent = resolve(*parent_id);
            if (parent.index() != own.index())
                throw Error(ErrorCode::invalid_argument, "class and parent differ in kind", id.value);
            if (const auto* s = std::get_if<StatementKgbbClass>(&own))
                effective = inherit(std::get<StatementKgbbClass>(parent), *s, ontology);
            else
                effective = inherit(std::get<CompoundKgbbClass>(parent), std::get<CompoundKgbbClass>(own), ontology);
        }
        in_progress.erase(id);
        return done.emplace(id, std::move(effective)).first->second;
    };

    for (const auto& [id, _] : declared) resolve(id);
    return done;
}

std::vector<Diagnostic> validate_spec(const Specification& spec) {
    std::vector<Diagnostic> out;
    auto is_functional_target = [&](const Upri& instance) {
        const auto* s = spec.statement_class_of_instance(instance);
        if (!s) return false;
        return std::any_of(s->positions.begin(), s->positions.end(), [](const ObjectPositionClass& p) {
            return p.logical_properties.count(LogicalProperty::functional) != 0;
        });
    };
    auto check_counts = [&](std::uint32_t min, std::uint32_t max, const Upri& target, const std::string& node) {
        if (max != 0 && min > max)
            out.push_back({"min-exceeds-max", "min_count " + std::to_string(min) + " exceeds max_count " + std::to_string(max),
                           node});
        if (is_functional_target(target) && max != 1)
            out.push_back({"functional-max-count",
                           "target KGBB has a functional predicate; max_count must be 1, found " + std::to_string(max),
                           node});
    };

    for (const auto& a : spec.graph.association_nodes) {
        const std::string node = "association " + a.source.value + " -> " + a.target.value;
        if (!spec.compound_class_of_instance(a.source))
            out.push_back({"association-source-not-compound", "association source must be a compound KGBB", node});
        check_counts(a.min_count, a.max_count, a.target, node);
    }
    for (const auto& l : spec.graph.link_nodes) {
        const std::string node = "link " + l.linking.value + " -> " + l.target.value;
        const auto* linking = spec.statement_class_of_instance(l.linking);
        if (!linking) {
            out.push_back({"link-linking-not-statement", "linking KGBB must be a statement KGBB", node});
        } else {
            const auto* pos = linking->position(l.use_as_subject);
            if (!pos || pos->object_type != ObjectType::resource)
                out.push_back({"link-subject-not-resource-position",
                               "use_as_subject must be a resource position of the linking KGBB", node});
        }
        check_counts(l.min_count, l.max_count, l.target, node);
    }
    for (const auto& r : spec.graph.reference_nodes) {
        const std::string node = "reference " + r.source.value + " -> " + r.target.value;
        if (!spec.statement_class_of_instance(r.target))
            out.push_back({"reference-target-not-statement", "reference target must be a statement KGBB", node});
        check_counts(r.min_count, r.max_count, r.target, node);
    }
    for (const auto& [id, kc] : spec.classes) {
        const auto* sc = std::get_if<StatementKgbbClass>(&kc);
        if (!sc) continue;
        for (const auto& t : sc->access_templates) {
            if (t.format == AccessFormat::owl || t.format == AccessFormat::rdf_owl) continue;
            for (const auto& p : sc->positions) {
                if (!p.required) continue;
                const bool mapped = std::any_of(t.mapping.begin(), t.mapping.end(),
                                                [&](const AccessMapping& m) { return m.source == p.upri.value; });
                if (!mapped)
                    out.push_back({"unmapped-required-position",
                                   "access template does not map required position " + p.thematic_label, t.upri.value});
            }
        }
    }
    return out;
}

std::vector<Diagnostic> check_spec_text(std::string_view yaml_text) {
    try {
        return validate_spec(load_spec(yaml_text));
    } catch (const Error& e) {
        std::string code;
        switch (e.code()) {
        case ErrorCode::parse_error: code = "parse-error"; break;
        case ErrorCode::dangling_reference: code = "dangling-reference"; break;
        case ErrorCode::taxonomy_cycle: code = "taxonomy-cycle"; break;
        case ErrorCode::constraint_widening: code = "constraint-widening"; break;
        case ErrorCode::duplicate_label: code = "duplicate-label"; break;
        default: code = "invalid-spec"; break;
        }
        return {{code, e.what(), e.detail()}};
    }
}

} // namespace kgbb
