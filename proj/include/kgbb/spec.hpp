#pragma once
// KGBB class taxonomy and the specification graph that wires KGBB instances
// together, plus the editor wizard and OWL access-template derivation.

#include "kgbb/model.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace kgbb {

// Class tree used for subsumption checks. Unknown classes are only
// subsumed by themselves.
struct OntologyClass {
    Upri upri;
    std::string label;
    std::vector<Upri> parents;

    friend bool operator==(const OntologyClass&, const OntologyClass&) = default;
};

class Ontology {
public:
    void add(OntologyClass c);
    bool contains(const Upri& c) const { return classes_.count(c) != 0; }
    const OntologyClass* find(const Upri& c) const;
    // Reflexive, transitive.
    bool is_subclass_of(const Upri& sub, const Upri& super) const;
    // Label if declared, otherwise the IRI's local name.
    std::string label_of(const Upri& c) const;
    const std::map<Upri, OntologyClass>& classes() const { return classes_; }

    friend bool operator==(const Ontology&, const Ontology&) = default;

private:
    std::map<Upri, OntologyClass> classes_;
};

enum class ObjectType { resource, literal };

std::string_view to_string(ObjectType t);

struct LiteralConstraint {
    Datatype datatype = Datatype::string;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<std::string> pattern;

    friend bool operator==(const LiteralConstraint&, const LiteralConstraint&) = default;
};

struct ObjectPositionClass {
    Upri upri;
    std::string thematic_label;
    std::string description;
    ObjectType object_type = ObjectType::resource;
    bool required = false;
    // Resource branch; unset means any class.
    std::optional<Upri> resource_class;
    // Literal branch.
    std::optional<LiteralConstraint> literal;
    std::set<LogicalProperty> logical_properties;
    // Explicit OWL property name; derived from the label sentence when empty.
    std::string owl_property;

    friend bool operator==(const ObjectPositionClass&, const ObjectPositionClass&) = default;
};

// Text form of a position constraint, as recorded on ConstraintNodes and
// shown in form descriptors.
std::string describe_constraint(const ObjectPositionClass& pos);

struct MindMapTemplate {
    std::string hub_label;
    // position class -> edge label
    std::map<Upri, std::string> edge_labels;

    friend bool operator==(const MindMapTemplate&, const MindMapTemplate&) = default;
};

enum class AccessFormat { graph_pattern, owl, csv, json, rdf_owl };

std::string_view to_string(AccessFormat f);
std::optional<AccessFormat> access_format_from_string(std::string_view text);

// `source` is "subject" or a position class IRI; `variable` is the pattern
// node the value lands on.
struct AccessMapping {
    std::string source;
    std::string variable;

    friend bool operator==(const AccessMapping&, const AccessMapping&) = default;
};

struct FreshNodeRule {
    std::string variable;
    Upri target_class;

    friend bool operator==(const FreshNodeRule&, const FreshNodeRule&) = default;
};

// Edge of a target graph pattern; endpoints are variables.
struct PatternEdge {
    std::string from;
    Upri predicate;
    std::string to;

    friend bool operator==(const PatternEdge&, const PatternEdge&) = default;
};

struct OwlProperty {
    std::string name;
    bool object_property = true;
    bool required = false;
    Upri position;
    std::optional<Upri> domain;
    // Class IRI for object properties, datatype name for data properties.
    std::string range;
    std::set<LogicalProperty> axioms;

    friend bool operator==(const OwlProperty&, const OwlProperty&) = default;
};

struct AccessTemplate {
    Upri upri;
    std::optional<Upri> family;
    AccessFormat format = AccessFormat::graph_pattern;
    std::vector<AccessMapping> mapping;
    std::vector<FreshNodeRule> fresh_nodes;
    std::vector<PatternEdge> pattern;
    std::optional<Upri> logical_framework;
    std::vector<Upri> references;
    std::vector<Upri> curators;
    std::vector<OwlProperty> owl_properties;

    friend bool operator==(const AccessTemplate&, const AccessTemplate&) = default;
};

struct ImportColumn {
    std::string column;
    // "subject" or a position class IRI
    std::string target;
    // For resource targets: how to treat the cell value.
    std::optional<ResourceKind> kind;
    std::optional<Upri> resource_class;

    friend bool operator==(const ImportColumn&, const ImportColumn&) = default;
};

struct ImportConstant {
    std::string target;
    std::string value;

    friend bool operator==(const ImportConstant&, const ImportConstant&) = default;
};

struct ImportTemplate {
    Upri upri;
    std::vector<ImportColumn> columns;
    std::vector<ImportConstant> constants;

    friend bool operator==(const ImportTemplate&, const ImportTemplate&) = default;
};

struct QuestionStyle {
    std::string auxiliary = "Did";
    // Use the assertional category label instead of the default template.
    bool use_category_label = false;

    friend bool operator==(const QuestionStyle&, const QuestionStyle&) = default;
};

struct StatementKgbbClass {
    Upri upri;
    std::string label;
    std::string description;
    std::optional<Upri> parent;
    Upri manages;
    std::string predicate_label;
    std::string predicate_definition;
    std::optional<Upri> predicate;
    std::string subject_label = "SUBJECT";
    std::optional<Upri> subject_constraint;
    bool lexical = false;
    std::vector<ObjectPositionClass> positions;
    // "default", a category name, or "negated-<category>" -> template
    std::map<std::string, std::string> dynamic_labels;
    MindMapTemplate mind_map;
    QuestionStyle question;
    std::vector<std::string> examples;
    std::vector<AccessTemplate> access_templates;
    std::vector<ImportTemplate> import_templates;
    std::vector<Upri> use_with_ontology;

    const ObjectPositionClass* position(const Upri& pc) const;
    const ObjectPositionClass* position_by_label(std::string_view thematic_label) const;
    // Storage-model IRI recorded as based_on_graph_pattern.
    Upri storage_model() const { return Upri(upri.value + "#storage-model"); }

    friend bool operator==(const StatementKgbbClass&, const StatementKgbbClass&) = default;
};

enum class DisplaySectionKind { headline, subject_header, association, linked_items };

std::string_view to_string(DisplaySectionKind k);

struct DisplaySection {
    DisplaySectionKind kind = DisplaySectionKind::headline;
    std::string label;
    // Association target instance (association sections) or link target
    // instance (linked-item sections).
    std::optional<Upri> target;
    std::string placeholder;

    friend bool operator==(const DisplaySection&, const DisplaySection&) = default;
};

struct CompoundDisplayTemplate {
    Upri upri;
    std::vector<DisplaySection> sections;

    friend bool operator==(const CompoundDisplayTemplate&, const CompoundDisplayTemplate&) = default;
};

struct CompoundKgbbClass {
    Upri upri;
    std::string label;
    std::string description;
    std::optional<Upri> parent;
    CompoundKind kind = CompoundKind::item;
    std::optional<Upri> subject_constraint;
    std::vector<CompoundDisplayTemplate> display_templates;

    friend bool operator==(const CompoundKgbbClass&, const CompoundKgbbClass&) = default;
};

using KgbbClass = std::variant<StatementKgbbClass, CompoundKgbbClass>;

const Upri& class_upri(const KgbbClass& c);
const std::optional<Upri>& class_parent(const KgbbClass& c);

struct AssociationNode {
    Upri source;
    Upri target;
    std::uint32_t min_count = 0;
    std::uint32_t max_count = 0;  // 0 = unlimited
    std::vector<Upri> carry_over_subject_range_constraint_to;

    friend bool operator==(const AssociationNode&, const AssociationNode&) = default;
};

struct LinkNode {
    Upri linking;
    Upri target;
    std::uint32_t min_count = 0;
    std::uint32_t max_count = 0;
    Upri use_as_subject;
    std::optional<Upri> if_object;

    friend bool operator==(const LinkNode&, const LinkNode&) = default;
};

struct ReferenceNode {
    Upri source;
    Upri target;
    std::uint32_t min_count = 0;
    std::uint32_t max_count = 0;

    friend bool operator==(const ReferenceNode&, const ReferenceNode&) = default;
};

struct SpecificationGraph {
    Upri application_upri;
    std::map<Upri, Upri> kgbb_instances;  // instance -> class
    std::vector<AssociationNode> association_nodes;
    std::vector<LinkNode> link_nodes;
    std::vector<ReferenceNode> reference_nodes;
    std::vector<Upri> data_entry_starting_points;

    friend bool operator==(const SpecificationGraph&, const SpecificationGraph&) = default;
};

struct Application {
    Upri upri;
    std::string label;
    Upri default_license;
    Upri default_logical_framework;

    friend bool operator==(const Application&, const Application&) = default;
};

// Configured partial order over licenses; `a` more restrictive than `b`.
class LicenseOrder {
public:
    void add(Upri more_restrictive, Upri less_restrictive);
    bool more_restrictive_or_equal(const Upri& a, const Upri& b) const;
    // Throws IncomparableLicenses when no single most-restrictive license exists.
    Upri most_restrictive(const std::set<Upri>& licenses) const;
    const std::vector<std::pair<Upri, Upri>>& pairs() const { return pairs_; }

    friend bool operator==(const LicenseOrder&, const LicenseOrder&) = default;

private:
    std::vector<std::pair<Upri, Upri>> pairs_;
};

// Built-in identification KGBBs. They live outside the user taxonomy; their
// class and instance IRIs coincide.
namespace builtin {
Upri type_identification();
Upri some_instance_identification();
Upri every_instance_identification();
Upri cardinality_restriction();
// Single position holding the class the subject is affiliated with.
Upri identification_position();
Upri cardinality_position();
std::optional<Upri> identification_kgbb_for(ResourceKind kind);
bool is_identification(const Upri& kgbb);
const std::map<Upri, StatementKgbbClass>& classes();
} // namespace builtin

struct Specification {
    Application application;
    Ontology ontology;
    LicenseOrder licenses;
    // Effective (inheritance-resolved) user classes.
    std::map<Upri, KgbbClass> classes;
    SpecificationGraph graph;

    const KgbbClass* find_class(const Upri& c) const;
    // Resolves an instance IRI (user or built-in) to its class.
    const KgbbClass* class_of_instance(const Upri& instance) const;
    const StatementKgbbClass* statement_class_of_instance(const Upri& instance) const;
    const CompoundKgbbClass* compound_class_of_instance(const Upri& instance) const;
    bool has_instance(const Upri& instance) const;

    std::vector<const AssociationNode*> associations_from(const Upri& source) const;
    std::vector<const LinkNode*> links_from(const Upri& linking) const;
    std::vector<const ReferenceNode*> references_to(const Upri& target) const;

    friend bool operator==(const Specification&, const Specification&) = default;
};

Specification load_spec(std::string_view yaml_text);
Specification load_spec_file(const std::filesystem::path& path);

// Effective classes: parent positions first, child positions appended or
// narrowing an inherited position with the same IRI.
std::map<Upri, KgbbClass> resolve_inheritance(const std::map<Upri, KgbbClass>& declared, const Ontology& ontology);

struct Diagnostic {
    std::string code;
    std::string message;
    std::string subject;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> validate_spec(const Specification& spec);

// Load + validate; load failures become a single diagnostic whose code
// names the error (dangling-reference, taxonomy-cycle, ...).
std::vector<Diagnostic> check_spec_text(std::string_view yaml_text);

// Per-category template text, synthesized from the class when not authored.
std::string category_label_template(const StatementKgbbClass& c, Category category, bool negated = false);
void synthesize_category_labels(StatementKgbbClass& c);

AccessTemplate derive_owl_access_template(const StatementKgbbClass& c);

struct WizardPosition {
    ObjectType type = ObjectType::resource;
    std::optional<Upri> resource_class;
    std::optional<LiteralConstraint> literal;
};

struct WizardAnswers {
    std::string id_prefix;                                   // namespace for minted IRIs
    std::string predicate;                                   // Q1
    std::string description;                                 // Q2
    std::vector<std::string> examples;                       // Q3
    std::size_t position_count = 0;                          // Q4
    std::string subject_label = "SUBJECT";                   // Q5, subject
    std::optional<Upri> subject_class;                       // Q8, subject
    std::vector<std::string> position_labels;                // Q5
    std::set<std::string> required;                          // Q6
    std::map<std::string, std::string> position_descriptions;  // Q7
    std::map<std::string, WizardPosition> position_types;      // Q8
    std::map<std::string, std::set<LogicalProperty>> logical_properties;  // Q9
    std::string label_sentence;                              // Q10
};

StatementKgbbClass create_statement_kgbb_from_wizard(const WizardAnswers& answers);

// Spec document holding just `classes` (and nothing else).
std::string classes_to_yaml(const std::vector<KgbbClass>& classes);

} // namespace kgbb
