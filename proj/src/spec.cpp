#include "kgbb/spec.hpp"

#include "kgbb/error.hpp"

#include <algorithm>
#include <sstream>

namespace kgbb {

// ---- ontology -------------------------------------------------------------

void Ontology::add(OntologyClass c) {
    auto key = c.upri;
    classes_[key] = std::move(c);
}

const OntologyClass* Ontology::find(const Upri& c) const {
    auto it = classes_.find(c);
    return it == classes_.end() ? nullptr : &it->second;
}

bool Ontology::is_subclass_of(const Upri& sub, const Upri& super) const {
    if (sub == super) return true;
    std::set<Upri> seen{sub};
    std::vector<Upri> todo{sub};
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        const auto* c = find(cur);
        if (!c) continue;
        for (const auto& p : c->parents) {
            if (p == super) return true;
            if (seen.insert(p).second) todo.push_back(p);
        }
    }
    return false;
}

std::string Ontology::label_of(const Upri& c) const {
    if (const auto* oc = find(c); oc && !oc->label.empty()) return oc->label;
    const auto& v = c.value;
    auto cut = v.find_last_of("/#:");
    return cut == std::string::npos ? v : v.substr(cut + 1);
}

// ---- enums ----------------------------------------------------------------

std::string_view to_string(ObjectType t) { return t == ObjectType::resource ? "resource" : "literal"; }

std::string_view to_string(AccessFormat f) {
    switch (f) {
    case AccessFormat::graph_pattern: return "graph-pattern";
    case AccessFormat::owl: return "owl";
    case AccessFormat::csv: return "csv";
    case AccessFormat::json: return "json";
    case AccessFormat::rdf_owl: return "rdf-owl";
    }
    return "graph-pattern";
}

std::optional<AccessFormat> access_format_from_string(std::string_view text) {
    for (auto f : {AccessFormat::graph_pattern, AccessFormat::owl, AccessFormat::csv, AccessFormat::json,
                   AccessFormat::rdf_owl})
        if (to_string(f) == text) return f;
    return std::nullopt;
}

std::string_view to_string(DisplaySectionKind k) {
    switch (k) {
    case DisplaySectionKind::headline: return "headline";
    case DisplaySectionKind::subject_header: return "subject-header";
    case DisplaySectionKind::association: return "association";
    case DisplaySectionKind::linked_items: return "linked-items";
    }
    return "headline";
}

namespace {

std::string number_text(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
}

} // namespace

std::string describe_constraint(const ObjectPositionClass& pos) {
    if (pos.object_type == ObjectType::resource)
        return pos.resource_class ? "instance of <" + pos.resource_class->value + ">" : "any resource";
    std::string out = "datatype " + std::string(to_string(pos.literal ? pos.literal->datatype : Datatype::string));
    if (pos.literal) {
        if (pos.literal->min) out += "; min " + number_text(*pos.literal->min);
        if (pos.literal->max) out += "; max " + number_text(*pos.literal->max);
        if (pos.literal->pattern) out += "; pattern " + *pos.literal->pattern;
    }
    return out;
}

const ObjectPositionClass* StatementKgbbClass::position(const Upri& pc) const {
    for (const auto& p : positions)
        if (p.upri == pc) return &p;
    return nullptr;
}

const ObjectPositionClass* StatementKgbbClass::position_by_label(std::string_view thematic_label) const {
    for (const auto& p : positions)
        if (p.thematic_label == thematic_label) return &p;
    return nullptr;
}

const Upri& class_upri(const KgbbClass& c) {
    return std::visit([](const auto& x) -> const Upri& { return x.upri; }, c);
}

const std::optional<Upri>& class_parent(const KgbbClass& c) {
    return std::visit([](const auto& x) -> const std::optional<Upri>& { return x.parent; }, c);
}

// ---- licenses -------------------------------------------------------------

void LicenseOrder::add(Upri more_restrictive, Upri less_restrictive) {
    pairs_.emplace_back(std::move(more_restrictive), std::move(less_restrictive));
}

bool LicenseOrder::more_restrictive_or_equal(const Upri& a, const Upri& b) const {
    if (a == b) return true;
    std::set<Upri> seen{a};
    std::vector<Upri> todo{a};
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        for (const auto& [m, l] : pairs_) {
            if (m != cur) continue;
            if (l == b) return true;
            if (seen.insert(l).second) todo.push_back(l);
        }
    }
    return false;
}

Upri LicenseOrder::most_restrictive(const std::set<Upri>& licenses) const {
    if (licenses.empty()) throw Error(ErrorCode::invalid_argument, "no licenses to rank");
    for (const auto& cand : licenses) {
        bool ok = std::all_of(licenses.begin(), licenses.end(),
                              [&](const Upri& other) { return more_restrictive_or_equal(cand, other); });
        if (ok) return cand;
    }
    std::string names;
    for (const auto& l : licenses) names += (names.empty() ? "" : ", ") + l.value;
    throw Error(ErrorCode::incomparable_licenses, "licenses cannot be ranked by the configured order", names);
}

// ---- built-in KGBBs -------------------------------------------------------

namespace builtin {

Upri type_identification() { return vocab::term("type-identification"); }
Upri some_instance_identification() { return vocab::term("some-instance-identification"); }
Upri every_instance_identification() { return vocab::term("every-instance-identification"); }
Upri cardinality_restriction() { return vocab::term("cardinality-restriction"); }
Upri identification_position() { return vocab::term("identification-class"); }
Upri cardinality_position() { return vocab::term("cardinality-value"); }

std::optional<Upri> identification_kgbb_for(ResourceKind kind) {
    switch (kind) {
    case ResourceKind::named_individual: return type_identification();
    case ResourceKind::some_instance: return some_instance_identification();
    case ResourceKind::every_instance: return every_instance_identification();
    default: return std::nullopt;
    }
}

bool is_identification(const Upri& kgbb) {
    return kgbb == type_identification() || kgbb == some_instance_identification() ||
           kgbb == every_instance_identification();
}

namespace {

StatementKgbbClass identification(Upri id, std::string label, std::string unit_class, std::string verb) {
    StatementKgbbClass c;
    c.upri = std::move(id);
    c.label = std::move(label);
    c.manages = vocab::term(unit_class);
    c.predicate_label = verb;
    c.subject_label = "SUBJECT";
    ObjectPositionClass pos;
    pos.upri = identification_position();
    pos.thematic_label = "CLASS";
    pos.description = "class the subject resource is affiliated with";
    pos.object_type = ObjectType::resource;
    pos.required = true;
    c.positions.push_back(pos);
    c.dynamic_labels["default"] = "{SUBJECT} " + verb + " {CLASS}";
    c.mind_map.hub_label = verb;
    c.mind_map.edge_labels[pos.upri] = verb;
    return c;
}

std::map<Upri, StatementKgbbClass> make_builtins() {
    std::map<Upri, StatementKgbbClass> out;
    for (auto c : {identification(type_identification(), "type identification", "TypeIdentificationUnit", "is a"),
                   identification(some_instance_identification(), "some-instance identification",
                                  "SomeInstanceIdentificationUnit", "is some instance of"),
                   identification(every_instance_identification(), "every-instance identification",
                                  "EveryInstanceIdentificationUnit", "is every instance of")})
        out.emplace(c.upri, c);

    StatementKgbbClass card;
    card.upri = cardinality_restriction();
    card.label = "cardinality restriction";
    card.manages = vocab::term("CardinalityRestrictionUnit");
    card.predicate_label = "has exactly";
    ObjectPositionClass n;
    n.upri = cardinality_position();
    n.thematic_label = "CARDINALITY";
    n.object_type = ObjectType::literal;
    n.required = true;
    n.literal = LiteralConstraint{Datatype::integer, 0.0, std::nullopt, std::nullopt};
    ObjectPositionClass cls;
    cls.upri = identification_position();
    cls.thematic_label = "CLASS";
    cls.object_type = ObjectType::resource;
    cls.required = true;
    card.positions = {n, cls};
    card.dynamic_labels["default"] = "{SUBJECT} has exactly {CARDINALITY} {CLASS}";
    card.mind_map.hub_label = "has exactly";
    out.emplace(card.upri, card);
    return out;
}

} // namespace

const std::map<Upri, StatementKgbbClass>& classes() {
    static const auto all = make_builtins();
    return all;
}

} // namespace builtin

// ---- specification lookups -----------------------------------------------

const KgbbClass* Specification::find_class(const Upri& c) const {
    auto it = classes.find(c);
    return it == classes.end() ? nullptr : &it->second;
}

const KgbbClass* Specification::class_of_instance(const Upri& instance) const {
    if (auto it = graph.kgbb_instances.find(instance); it != graph.kgbb_instances.end()) return find_class(it->second);
    // Built-ins are wrapped once and shared.
    static const std::map<Upri, KgbbClass> wrapped = [] {
        std::map<Upri, KgbbClass> m;
        for (const auto& [id, c] : builtin::classes()) m.emplace(id, c);
        return m;
    }();
    auto b = wrapped.find(instance);
    return b == wrapped.end() ? nullptr : &b->second;
}

const StatementKgbbClass* Specification::statement_class_of_instance(const Upri& instance) const {
    const auto* c = class_of_instance(instance);
    return c ? std::get_if<StatementKgbbClass>(c) : nullptr;
}

const CompoundKgbbClass* Specification::compound_class_of_instance(const Upri& instance) const {
    const auto* c = class_of_instance(instance);
    return c ? std::get_if<CompoundKgbbClass>(c) : nullptr;
}

bool Specification::has_instance(const Upri& instance) const { return class_of_instance(instance) != nullptr; }

std::vector<const AssociationNode*> Specification::associations_from(const Upri& source) const {
    std::vector<const AssociationNode*> out;
    for (const auto& n : graph.association_nodes)
        if (n.source == source) out.push_back(&n);
    return out;
}

std::vector<const LinkNode*> Specification::links_from(const Upri& linking) const {
    std::vector<const LinkNode*> out;
    for (const auto& n : graph.link_nodes)
        if (n.linking == linking) out.push_back(&n);
    return out;
}

std::vector<const ReferenceNode*> Specification::references_to(const Upri& target) const {
    std::vector<const ReferenceNode*> out;
    for (const auto& n : graph.reference_nodes)
        if (n.target == target) out.push_back(&n);
    return out;
}

} // namespace kgbb
