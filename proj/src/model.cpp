#include "kgbb/model.hpp"

#include "kgbb/error.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace kgbb {

bool is_valid_upri(std::string_view text) {
    if (text.empty()) return false;
    for (unsigned char c : text) {
        if (c <= 0x20) return false;
        switch (c) {
        case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
            return false;
        default:
            break;
        }
    }
    return true;
}

Upri vocab::term(std::string_view local) { return Upri(std::string(base) + std::string(local)); }

namespace {

template <std::size_t N>
std::optional<std::size_t> index_of(const std::array<std::string_view, N>& names, std::string_view text) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == text) return i;
    return std::nullopt;
}

constexpr std::array<std::string_view, 5> kResourceKinds = {"named-individual", "some-instance", "every-instance",
                                                            "class", "property"};
constexpr std::array<std::string_view, 5> kCategories = {"lexical", "assertional", "contingent", "prototypical",
                                                         "universal"};
constexpr std::array<std::string_view, 5> kCategoryClasses = {"LexicalStatementUnit", "AssertionalStatementUnit",
                                                              "ContingentStatementUnit", "PrototypicalStatementUnit",
                                                              "UniversalStatementUnit"};
constexpr std::array<std::string_view, 4> kLogical = {"transitive", "symmetric", "asymmetric", "functional"};
constexpr std::array<std::string_view, 9> kCompoundKinds = {"item",    "instance-item",       "class-item",
                                                            "item-group", "granularity-tree", "granular-item-group",
                                                            "context", "dataset",             "list"};
constexpr std::array<std::string_view, 9> kCompoundClasses = {
    "ItemUnit",  "InstanceItemUnit", "ClassItemUnit", "ItemGroupUnit", "GranularityTreeUnit", "GranularItemGroupUnit",
    "ContextUnit", "DatasetUnit",    "ListUnit"};
constexpr std::array<std::string_view, 3> kWildcards = {"some-instance", "every-instance", "class"};

} // namespace

std::string_view to_string(ResourceKind kind) { return kResourceKinds[static_cast<std::size_t>(kind)]; }
std::optional<ResourceKind> resource_kind_from_string(std::string_view text) {
    if (auto i = index_of(kResourceKinds, text)) return static_cast<ResourceKind>(*i);
    return std::nullopt;
}

std::string_view affiliation_relation(ResourceKind kind) {
    switch (kind) {
    case ResourceKind::named_individual: return "type";
    case ResourceKind::some_instance: return "someInstanceOf";
    case ResourceKind::every_instance: return "everyInstanceOf";
    case ResourceKind::class_: return "subClassOf";
    case ResourceKind::property: return "subPropertyOf";
    }
    return "type";
}

std::string_view to_string(Category c) { return kCategories[static_cast<std::size_t>(c)]; }
std::optional<Category> category_from_string(std::string_view text) {
    if (auto i = index_of(kCategories, text)) return static_cast<Category>(*i);
    return std::nullopt;
}
Upri category_class(Category c) { return vocab::term(kCategoryClasses[static_cast<std::size_t>(c)]); }

std::string_view to_string(LogicalProperty p) { return kLogical[static_cast<std::size_t>(p)]; }
std::optional<LogicalProperty> logical_property_from_string(std::string_view text) {
    if (auto i = index_of(kLogical, text)) return static_cast<LogicalProperty>(*i);
    return std::nullopt;
}

std::string_view to_string(CompoundKind k) { return kCompoundKinds[static_cast<std::size_t>(k)]; }
std::optional<CompoundKind> compound_kind_from_string(std::string_view text) {
    if (auto i = index_of(kCompoundKinds, text)) return static_cast<CompoundKind>(*i);
    return std::nullopt;
}
Upri compound_kind_class(CompoundKind k) { return vocab::term(kCompoundClasses[static_cast<std::size_t>(k)]); }

std::string_view to_string(WildcardKind k) { return kWildcards[static_cast<std::size_t>(k)]; }
std::optional<WildcardKind> wildcard_kind_from_string(std::string_view text) {
    if (auto i = index_of(kWildcards, text)) return static_cast<WildcardKind>(*i);
    return std::nullopt;
}

bool position_order(const ObjectPositionInstance& a, const ObjectPositionInstance& b) {
    return std::tie(a.creation_date, a.upri) < std::tie(b.creation_date, b.upri);
}

const ObjectPositionInstance* StatementUnit::current(const Upri& position_class) const {
    for (const auto& p : positions)
        if (p.current_version && p.position_class == position_class) return &p;
    return nullptr;
}

// ---- question expressions --------------------------------------------------

std::string to_string(const QuestionExpr& e) {
    if (e.op == QuestionExpr::Op::leaf) return "<" + e.question.value + ">";
    std::string out = e.op == QuestionExpr::Op::all_of ? "(and" : "(or";
    for (const auto& x : e.operands) out += " " + to_string(x);
    return out + ")";
}

namespace {

struct ExprParser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t')) ++pos;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::parse_error, "question expression: " + what, "offset " + std::to_string(pos));
    }
    QuestionExpr parse() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end");
        if (text[pos] == '<') {
            const auto end = text.find('>', pos);
            if (end == std::string_view::npos) fail("unterminated IRI");
            QuestionExpr e = QuestionExpr::leaf(Upri(std::string(text.substr(pos + 1, end - pos - 1))));
            pos = end + 1;
            return e;
        }
        if (text[pos] != '(') fail("expected '(' or '<'");
        ++pos;
        skip_ws();
        QuestionExpr e;
        if (text.substr(pos, 3) == "and") {
            e.op = QuestionExpr::Op::all_of;
            pos += 3;
        } else if (text.substr(pos, 2) == "or") {
            e.op = QuestionExpr::Op::any_of;
            pos += 2;
        } else {
            fail("expected 'and' or 'or'");
        }
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
                break;
            }
            e.operands.push_back(parse());
        }
        if (e.operands.empty()) fail("empty operator");
        return e;
    }
};

} // namespace

QuestionExpr parse_question_expr(std::string_view text) {
    ExprParser p{text};
    auto e = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

// ---- units and store -----------------------------------------------------

const SemanticUnitMeta& meta_of(const SemanticUnit& u) {
    return std::visit([](const auto& x) -> const SemanticUnitMeta& { return x.meta; }, u);
}
SemanticUnitMeta& meta_of(SemanticUnit& u) {
    return std::visit([](auto& x) -> SemanticUnitMeta& { return x.meta; }, u);
}

std::string_view unit_kind_name(const SemanticUnit& u) {
    switch (u.index()) {
    case 0: return "statement";
    case 1: return "compound";
    case 2: return "question";
    default: return "compound-question";
    }
}

const SemanticUnit* Store::find(const Upri& u) const {
    auto it = units.find(u);
    return it == units.end() ? nullptr : &it->second;
}
const StatementUnit* Store::statement(const Upri& u) const {
    const auto* x = find(u);
    return x ? std::get_if<StatementUnit>(x) : nullptr;
}
const CompoundUnit* Store::compound(const Upri& u) const {
    const auto* x = find(u);
    return x ? std::get_if<CompoundUnit>(x) : nullptr;
}
const Resource* Store::resource(const Upri& u) const {
    auto it = resources.find(u);
    return it == resources.end() ? nullptr : &it->second;
}

Category classify_category(ResourceKind subject_kind, std::optional<Category> user_choice) {
    switch (subject_kind) {
    case ResourceKind::named_individual:
        return Category::assertional;
    case ResourceKind::class_:
    case ResourceKind::every_instance:
        return Category::universal;
    case ResourceKind::some_instance:
        if (!user_choice || (*user_choice != Category::contingent && *user_choice != Category::prototypical))
            throw Error(ErrorCode::choice_required,
                        "a some-instance subject requires choosing contingent or prototypical");
        return *user_choice;
    case ResourceKind::property:
        break;
    }
    throw Error(ErrorCode::invalid_argument, "a property resource cannot be a statement subject");
}

std::set<ResourceKind> allowed_object_resource_kinds(Category category) {
    switch (category) {
    case Category::assertional:
        return {ResourceKind::named_individual};
    case Category::universal:
        return {ResourceKind::some_instance, ResourceKind::class_};
    case Category::contingent:
    case Category::prototypical:
        return {ResourceKind::some_instance};
    case Category::lexical:
        break;
    }
    throw Error(ErrorCode::not_applicable, "lexical statements take literal objects only");
}

namespace {

Literal boolean_literal(bool b) { return Literal{b ? "true" : "false", Datatype::boolean}; }
Literal string_literal(std::string s) { return Literal{std::move(s), Datatype::string}; }
Literal time_literal(std::string s) { return Literal{std::move(s), Datatype::date_time}; }

std::optional<Upri> identification_relation(const Upri& kgbb_uri) {
    if (kgbb_uri == vocab::term("type-identification")) return Upri(std::string(vocab::rdf_type));
    if (kgbb_uri == vocab::term("some-instance-identification")) return vocab::term("someInstanceOf");
    if (kgbb_uri == vocab::term("every-instance-identification")) return vocab::term("everyInstanceOf");
    return std::nullopt;
}

} // namespace

std::vector<Triple> data_graph(const StatementUnit& unit) {
    static const Upri required = vocab::term("requiredObjectPosition");
    static const Upri optional = vocab::term("optionalObjectPosition");
    static const Upri type(std::string(vocab::rdf_type));
    static const Upri input_label = vocab::term("inputTypeLabel");
    static const Upri resource_uri = vocab::term("resourceURI");
    static const Upri literal = vocab::term("literal");
    static const Upri logical = vocab::term("logicalProperty");
    static const Upri current = vocab::term("currentVersion");
    static const Upri creator = vocab::term("creator");
    static const Upri created = vocab::term("creationDate");
    static const Upri application = vocab::term("createdWithApplication");
    static const Upri imported = vocab::term("importedFrom");
    static const Upri version = vocab::term("versionID");
    static const Upri dataset = vocab::term("datasetUnitID");

    std::vector<Triple> out;
    const Upri& s = unit.subject();
    for (const auto& p : unit.positions) {
        out.push_back({s, p.role == PositionRole::required ? required : optional, p.upri});
        out.push_back({p.upri, type, p.position_class});
        out.push_back({p.upri, input_label, string_literal(p.input_type_label)});
        if (const auto* r = std::get_if<Upri>(&p.input))
            out.push_back({p.upri, resource_uri, *r});
        else
            out.push_back({p.upri, literal, std::get<Literal>(p.input)});
        if (p.logical_property) out.push_back({p.upri, logical, vocab::term(to_string(*p.logical_property))});
        out.push_back({p.upri, current, boolean_literal(p.current_version)});
        out.push_back({p.upri, creator, p.creator});
        out.push_back({p.upri, created, time_literal(p.creation_date)});
        out.push_back({p.upri, application, p.created_with_application});
        if (p.imported_from) out.push_back({p.upri, imported, *p.imported_from});
        for (const auto& v : p.version_ids) out.push_back({p.upri, version, v});
        for (const auto& d : p.dataset_unit_ids) out.push_back({p.upri, dataset, d});
    }
    if (auto rel = identification_relation(unit.meta.kgbb_uri)) {
        for (const auto& p : unit.positions)
            if (p.current_version && p.is_resource()) out.push_back({s, *rel, std::get<Upri>(p.input)});
    }
    return out;
}

std::vector<OwnedTriple> data_graph_layer(const Store& store) {
    std::vector<OwnedTriple> out;
    for (const auto& [id, unit] : store.units) {
        if (const auto* s = std::get_if<StatementUnit>(&unit))
            for (auto& t : data_graph(*s)) out.push_back({std::move(t), id});
    }
    return out;
}

std::vector<Upri> version_chain(const Store& store, const Upri& unit) {
    std::set<Upri> mine;
    std::set<Upri> superseded;
    for (const auto& [id, v] : store.versions) {
        if (v.of_unit != unit) continue;
        mine.insert(id);
        if (v.previous_version) superseded.insert(*v.previous_version);
    }
    std::vector<Upri> chain;
    for (const auto& id : mine) {
        if (superseded.count(id)) continue;
        std::set<Upri> seen;
        for (std::optional<Upri> cur = id; cur && !seen.count(*cur);) {
            seen.insert(*cur);
            chain.push_back(*cur);
            auto it = store.versions.find(*cur);
            cur = it == store.versions.end() ? std::nullopt : it->second.previous_version;
        }
        break;
    }
    return chain;
}

std::vector<std::string> check_invariants(const Store& store) {
    std::vector<std::string> issues;

    std::map<Triple, std::size_t> owners;
    for (const auto& ot : data_graph_layer(store)) ++owners[ot.triple];
    for (const auto& [t, n] : owners)
        if (n != 1) issues.push_back("triple owned by " + std::to_string(n) + " statement units: <" + t.subject.value + ">");

    for (const auto& [id, unit] : store.units) {
        const auto& meta = meta_of(unit);
        if (meta.upri != id) issues.push_back("unit key mismatch " + id.value);
        if (meta.deleted_by.has_value() != meta.deletion_date.has_value())
            issues.push_back("deleted_by/deletion_date mismatch on " + id.value);
        if (const auto* c = std::get_if<CompoundUnit>(&unit)) {
            for (const auto& m : c->has_associated_semantic_unit)
                if (!store.find(m)) issues.push_back("dangling associated unit " + m.value);
            for (const auto& m : c->has_linked_semantic_unit)
                if (!store.find(m)) issues.push_back("dangling linked unit " + m.value);
            continue;
        }
        const auto* s = std::get_if<StatementUnit>(&unit);
        if (!s) continue;
        if (!meta.subject) {
            issues.push_back("statement without subject " + id.value);
            continue;
        }
        std::map<Upri, int> current;
        for (const auto& p : s->positions)
            if (p.current_version) ++current[p.position_class];
        for (const auto& [pc, n] : current)
            if (n > 1) issues.push_back("position " + pc.value + " has " + std::to_string(n) + " current instances in " + id.value);
        if (!std::is_sorted(s->positions.begin(), s->positions.end(), position_order))
            issues.push_back("positions out of creation order in " + id.value);
        if (s->validity_start_date && s->validity_end_date && *s->validity_start_date > *s->validity_end_date)
            issues.push_back("validity period reversed in " + id.value);
        if (const auto* r = store.resource(s->subject()); r && s->category != Category::lexical) {
            bool ok = false;
            switch (s->category) {
            case Category::assertional: ok = r->kind == ResourceKind::named_individual; break;
            case Category::universal: ok = r->kind == ResourceKind::class_ || r->kind == ResourceKind::every_instance; break;
            case Category::contingent:
            case Category::prototypical: ok = r->kind == ResourceKind::some_instance; break;
            case Category::lexical: ok = true; break;
            }
            if (!ok) issues.push_back("category/subject mismatch in " + id.value);
        }
    }

    for (const auto& [id, v] : store.versions) {
        if (!store.find(v.of_unit)) issues.push_back("version of unknown unit " + id.value);
        std::set<Upri> seen;
        for (std::optional<Upri> cur = id; cur;) {
            if (!seen.insert(*cur).second) {
                issues.push_back("cyclic version chain at " + id.value);
                break;
            }
            auto it = store.versions.find(*cur);
            cur = it == store.versions.end() ? std::nullopt : it->second.previous_version;
        }
    }
    return issues;
}

} // namespace kgbb
