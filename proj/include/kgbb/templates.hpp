#pragma once
// Display templates (dynamic labels, category labels, mind maps, compound
// display documents), access templates and import templates.

#include "kgbb/model.hpp"
#include "kgbb/spec.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgbb {

// Fills `tmpl` from `values` (thematic label -> text). An unbound optional
// placeholder is dropped along with the connective text that precedes it;
// the predicate phrase after the subject placeholder is never dropped.
// Unbound labels listed in `required` raise MissingRequiredBinding.
std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values,
                          const std::string& subject_label, const std::string& predicate_label,
                          const std::set<std::string>& required);

// Text shown for a resource: its own label, else the class label for
// some/every-instance resources, else the IRI local name.
std::string resource_label(const Specification& spec, const Store& store, const Upri& resource);

// Thematic label -> rendered value for the unit's current (or listed) positions.
std::map<std::string, std::string> label_values(const Specification& spec, const Store& store, const StatementUnit& unit);

std::string render_dynamic_label(const Specification& spec, const Store& store, const StatementUnit& unit);
std::string render_dynamic_label(const Specification& spec, const Store& store, const StatementUnit& unit,
                                 std::string_view tmpl);
std::string render_category_label(const Specification& spec, const Store& store, const StatementUnit& unit);

// "a apple" -> "an apple"
std::string fix_indefinite_articles(std::string s);

struct MindMapNode {
    std::string id;
    std::string label;
    std::string role;  // hub | subject | object

    friend bool operator==(const MindMapNode&, const MindMapNode&) = default;
};

struct MindMapEdge {
    std::string from;
    std::string to;
    std::string label;

    friend bool operator==(const MindMapEdge&, const MindMapEdge&) = default;
};

struct MindMap {
    std::vector<MindMapNode> nodes;
    std::vector<MindMapEdge> edges;
};

MindMap render_mind_map(const Specification& spec, const Store& store, const Upri& unit);

struct DisplayBlock {
    std::string kind;  // headline | subject-header | association | linked-items
    std::string label;
    std::vector<Upri> units;
    std::vector<std::string> lines;
    bool placeholder = false;
};

struct DisplayDocument {
    Upri compound;
    Upri display_template;
    std::vector<DisplayBlock> sections;
};

// Without a template id the class's first display template is used.
DisplayDocument render_compound_display(const Specification& spec, const Store& store, const Upri& compound,
                                        std::optional<Upri> display_template = std::nullopt);

struct AccessOutput {
    AccessFormat format = AccessFormat::graph_pattern;
    std::vector<Triple> triples;
    // Variable -> value text for csv/json formats.
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<Upri> fresh_nodes;
    std::string text;
};

// Finds an access template of the unit's class by IRI, or by family tag.
const AccessTemplate* find_access_template(const StatementKgbbClass& cls, const Upri& id_or_family);

AccessOutput apply_access_template(const Specification& spec, const Store& store, const StatementUnit& unit,
                                   const AccessTemplate& tmpl, const std::function<Upri()>& mint);

} // namespace kgbb
