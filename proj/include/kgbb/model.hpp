#pragma once
// Semantic-unit data model: resources, triples, the semantic-units graph
// layer (unit metadata) and the data graph layer (object-position
// instances owned by statement units).

#include "kgbb/literal.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kgbb {

// Unique Persistent and Resolvable Identifier. Opaque text.
struct Upri {
    std::string value;

    Upri() = default;
    explicit Upri(std::string v) : value(std::move(v)) {}

    bool empty() const noexcept { return value.empty(); }
    const std::string& str() const noexcept { return value; }

    friend bool operator==(const Upri&, const Upri&) = default;
    friend auto operator<=>(const Upri&, const Upri&) = default;
};

// Non-empty and free of characters that cannot appear inside `<...>` in TriG.
bool is_valid_upri(std::string_view text);

struct UpriHash {
    std::size_t operator()(const Upri& u) const noexcept { return std::hash<std::string>{}(u.value); }
};

// RFC 3339 UTC text, e.g. 2024-01-02T03:04:05.000006Z. Fixed width, so
// lexicographic order is chronological order.
using Timestamp = std::string;

// Engine vocabulary. Terms live under the `kgbb:` base IRI.
namespace vocab {
inline constexpr std::string_view base = "https://w3id.org/kgbb/";
Upri term(std::string_view local);
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdfs_label = "http://www.w3.org/2000/01/rdf-schema#label";
} // namespace vocab

enum class ResourceKind { named_individual, some_instance, every_instance, class_, property };

std::string_view to_string(ResourceKind kind);
std::optional<ResourceKind> resource_kind_from_string(std::string_view text);

// Relation that records a resource's class affiliation; derivable from kind alone.
std::string_view affiliation_relation(ResourceKind kind);

struct Resource {
    Upri upri;
    ResourceKind kind = ResourceKind::named_individual;
    std::optional<Upri> class_affiliation;
    std::string label;

    friend bool operator==(const Resource&, const Resource&) = default;
};

using Object = std::variant<Upri, Literal>;

struct Triple {
    Upri subject;
    Upri predicate;
    Object object;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class Category { lexical, assertional, contingent, prototypical, universal };

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view text);
Upri category_class(Category c);

enum class LogicalProperty { transitive, symmetric, asymmetric, functional };

std::string_view to_string(LogicalProperty p);
std::optional<LogicalProperty> logical_property_from_string(std::string_view text);

// Slots 1-9 of the general semantic-units graph storage model.
struct SemanticUnitMeta {
    Upri upri;
    std::string label;
    std::set<Upri> types;
    std::optional<Upri> subject;
    Upri kgbb_uri;
    Upri creator;
    Timestamp creation_date;
    Upri created_with_application;
    std::optional<Upri> imported_from;
    std::optional<Timestamp> import_date;
    std::optional<Upri> curator;
    std::optional<Timestamp> curation_date;
    std::optional<Upri> deleted_by;
    std::optional<Timestamp> deletion_date;
    std::optional<Upri> data_production_metadata;
    std::set<Upri> version_ids;
    std::set<Upri> dataset_unit_ids;
    bool editable = true;

    bool deleted() const noexcept { return deleted_by.has_value(); }

    friend bool operator==(const SemanticUnitMeta&, const SemanticUnitMeta&) = default;
};

struct ConstraintNode {
    Upri upri;
    std::string has_constraint;
    Upri applies_to_object_position;

    friend bool operator==(const ConstraintNode&, const ConstraintNode&) = default;
    friend auto operator<=>(const ConstraintNode&, const ConstraintNode&) = default;
};

enum class PositionRole { required, optional };

// One input event for one object position of one statement unit.
struct ObjectPositionInstance {
    Upri upri;
    Upri position_class;
    PositionRole role = PositionRole::required;
    std::string input_type_label;
    Object input;
    std::optional<LogicalProperty> logical_property;
    bool current_version = true;
    Upri creator;
    Timestamp creation_date;
    Upri created_with_application;
    std::optional<Upri> imported_from;
    std::set<Upri> version_ids;
    std::set<Upri> dataset_unit_ids;

    bool is_resource() const noexcept { return std::holds_alternative<Upri>(input); }

    friend bool operator==(const ObjectPositionInstance&, const ObjectPositionInstance&) = default;
};

// Canonical order of position instances inside a unit: creation order.
bool position_order(const ObjectPositionInstance& a, const ObjectPositionInstance& b);

struct StatementUnit {
    SemanticUnitMeta meta;
    Category category = Category::assertional;
    bool negated = false;
    std::set<Upri> object_described_by_semantic_unit;
    Upri based_on_graph_pattern;
    std::set<ConstraintNode> constraint_nodes;
    Upri license;
    std::optional<Upri> access_restricted_to;
    Upri logical_framework;
    std::optional<Upri> confidence_level;
    std::optional<Timestamp> validity_start_date;
    std::optional<Timestamp> validity_end_date;
    std::set<Upri> references;
    std::vector<ObjectPositionInstance> positions;

    const Upri& subject() const { return *meta.subject; }

    // Current instance for a position class, if the position was ever supplied.
    const ObjectPositionInstance* current(const Upri& position_class) const;

    friend bool operator==(const StatementUnit&, const StatementUnit&) = default;
};

enum class CompoundKind {
    item,
    instance_item,
    class_item,
    item_group,
    granularity_tree,
    granular_item_group,
    context,
    dataset,
    list,
};

std::string_view to_string(CompoundKind k);
std::optional<CompoundKind> compound_kind_from_string(std::string_view text);
Upri compound_kind_class(CompoundKind k);

struct CompoundUnit {
    SemanticUnitMeta meta;
    CompoundKind kind = CompoundKind::item;
    std::set<Upri> has_associated_semantic_unit;
    std::set<Upri> has_linked_semantic_unit;
    // Member -> position; only dataset and list compounds are ordered.
    std::map<Upri, std::size_t> ordering;

    friend bool operator==(const CompoundUnit&, const CompoundUnit&) = default;
};

struct NamedIndividualBinding {
    Upri resource;
    friend bool operator==(const NamedIndividualBinding&, const NamedIndividualBinding&) = default;
};

enum class WildcardKind { some_instance, every_instance, class_ };

std::string_view to_string(WildcardKind k);
std::optional<WildcardKind> wildcard_kind_from_string(std::string_view text);

struct WildcardBinding {
    WildcardKind kind = WildcardKind::some_instance;
    Upri class_upri;
    friend bool operator==(const WildcardBinding&, const WildcardBinding&) = default;
};

// Datatype specification with optional (under)specified value.
struct LiteralSpec {
    Datatype datatype = Datatype::string;
    std::optional<std::string> equals;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<int> year;
    std::optional<std::string> pattern;

    bool fully_specified() const noexcept {
        return equals.has_value() && !min && !max && !year && !pattern;
    }
    friend bool operator==(const LiteralSpec&, const LiteralSpec&) = default;
};

using Binding = std::variant<NamedIndividualBinding, WildcardBinding, LiteralSpec>;

struct QuestionUnit {
    SemanticUnitMeta meta;
    Upri based_on_statement_kgbb;
    std::optional<Binding> subject_binding;
    std::map<Upri, Binding> bindings;

    friend bool operator==(const QuestionUnit&, const QuestionUnit&) = default;
};

struct QuestionExpr {
    enum class Op { leaf, all_of, any_of };
    Op op = Op::leaf;
    Upri question;
    std::vector<QuestionExpr> operands;

    static QuestionExpr leaf(Upri q) { return {Op::leaf, std::move(q), {}}; }
    static QuestionExpr all_of(std::vector<QuestionExpr> xs) { return {Op::all_of, {}, std::move(xs)}; }
    static QuestionExpr any_of(std::vector<QuestionExpr> xs) { return {Op::any_of, {}, std::move(xs)}; }

    friend bool operator==(const QuestionExpr&, const QuestionExpr&) = default;
};

// `(and <q1> (or <q2> <q3>))`
std::string to_string(const QuestionExpr& e);
QuestionExpr parse_question_expr(std::string_view text);

struct CompoundQuestionUnit {
    SemanticUnitMeta meta;
    QuestionExpr expression;

    friend bool operator==(const CompoundQuestionUnit&, const CompoundQuestionUnit&) = default;
};

using SemanticUnit = std::variant<StatementUnit, CompoundUnit, QuestionUnit, CompoundQuestionUnit>;

const SemanticUnitMeta& meta_of(const SemanticUnit& u);
SemanticUnitMeta& meta_of(SemanticUnit& u);
std::string_view unit_kind_name(const SemanticUnit& u);

struct VersionNode {
    Upri upri;
    Upri of_unit;
    Timestamp creation_date;
    Upri creator;
    std::optional<Upri> previous_version;
    // Reserved for a content identifier; never populated by the engine.
    std::optional<std::string> content_id;

    friend bool operator==(const VersionNode&, const VersionNode&) = default;
};

struct Store {
    std::map<Upri, SemanticUnit> units;
    std::map<Upri, VersionNode> versions;
    std::map<Upri, Resource> resources;

    const SemanticUnit* find(const Upri& u) const;
    const StatementUnit* statement(const Upri& u) const;
    const CompoundUnit* compound(const Upri& u) const;
    const Resource* resource(const Upri& u) const;

    friend bool operator==(const Store&, const Store&) = default;
};

// ---- operations -----------------------------------------------------------

// named-individual -> assertional; class | every-instance -> universal;
// some-instance -> the caller's choice (contingent or prototypical).
Category classify_category(ResourceKind subject_kind, std::optional<Category> user_choice = std::nullopt);

// Resource kinds a statement of `category` accepts in resource object positions.
std::set<ResourceKind> allowed_object_resource_kinds(Category category);

// The unit's data graph: subject-related and object-related triples of every
// position instance. Identification units also carry the direct affiliation
// triple (subject, type|someInstanceOf|everyInstanceOf, class).
std::vector<Triple> data_graph(const StatementUnit& unit);

struct OwnedTriple {
    Triple triple;
    Upri owner;
};

// Union of all statement-unit data graphs, each triple tagged with its owner.
std::vector<OwnedTriple> data_graph_layer(const Store& store);

// The versions of `unit`, newest first along the previousVersion chain.
std::vector<Upri> version_chain(const Store& store, const Upri& unit);

// Store-wide invariant check; returns human-readable violations (empty = ok).
std::vector<std::string> check_invariants(const Store& store);

} // namespace kgbb
