// Category-variant labels, OWL access-template derivation and the
// ten-question KGBB wizard.

#include "kgbb/error.hpp"
#include "kgbb/spec.hpp"
#include "kgbb/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace kgbb {

namespace {

using text::TemplatePiece;

// Drops a trailing determiner (and its space) from literal text.
std::string strip_trailing_determiner(const std::string& s) {
    auto words = text::split_words(s);
    if (words.empty() || !text::is_determiner(words.back())) return s;
    auto cut = s.rfind(words.back());
    return s.substr(0, cut);
}

std::size_t subject_index(const std::vector<TemplatePiece>& pieces, const std::string& subject_label) {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].placeholder && pieces[i].value == subject_label) return i;
    return pieces.size();
}

// Puts `det` directly before the placeholder at index i.
void set_determiner(std::vector<TemplatePiece>& pieces, std::size_t i, const std::string& det) {
    if (i > 0 && !pieces[i - 1].placeholder) {
        auto& lit = pieces[i - 1].value;
        lit = strip_trailing_determiner(lit);
        if (!lit.empty() && lit.back() != ' ') lit += ' ';
        lit += det + " ";
    } else {
        pieces.insert(pieces.begin() + static_cast<long>(i), TemplatePiece{false, det + " "});
    }
}

bool is_resource_placeholder(const StatementKgbbClass& c, const std::string& label) {
    const auto* p = c.position_by_label(label);
    return p && p->object_type == ObjectType::resource;
}

std::string synthesize(const StatementKgbbClass& c, Category category) {
    const auto def = c.dynamic_labels.count("default") ? c.dynamic_labels.at("default") : std::string();
    auto pieces = text::parse_label_template(def);

    std::string subject_det;
    std::string object_det = "some";
    std::string modal;
    switch (category) {
    case Category::assertional: subject_det = "This"; object_det = "this"; break;
    case Category::contingent: subject_det = "A"; modal = "can"; break;
    case Category::prototypical: subject_det = "A"; modal = "typically"; break;
    case Category::universal: subject_det = "Every"; modal = "necessarily"; break;
    case Category::lexical: return def;
    }

    // Object determiners first so subject insertion does not shift indices we still need.
    for (std::size_t i = pieces.size(); i-- > 0;)
        if (pieces[i].placeholder && pieces[i].value != c.subject_label && is_resource_placeholder(c, pieces[i].value))
            set_determiner(pieces, i, object_det);

    const auto si = subject_index(pieces, c.subject_label);
    if (si == pieces.size()) return text::join_template(pieces);

    if (!modal.empty() && si + 1 < pieces.size() && !pieces[si + 1].placeholder) {
        auto& lit = pieces[si + 1].value;
        const auto words = text::split_words(lit);
        if (!words.empty()) {
            const auto verb_at = lit.find(words.front());
            const auto verb = category == Category::contingent ? text::base_form(words.front()) : words.front();
            lit = lit.substr(0, verb_at) + modal + " " + verb + lit.substr(verb_at + words.front().size());
        }
    }
    set_determiner(pieces, si, subject_det);
    auto out = text::join_template(pieces);
    // A leading determiner starts the sentence.
    auto first = out.find_first_not_of(' ');
    if (first != std::string::npos && out[first] != '{') out[first] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[first])));
    return out;
}

std::string negated_fallback(const StatementKgbbClass& c) {
    const auto def = c.dynamic_labels.count("default") ? c.dynamic_labels.at("default") : std::string();
    return "It is not the case that " + def;
}

} // namespace

std::string category_label_template(const StatementKgbbClass& c, Category category, bool negated) {
    const std::string key = (negated ? "negated-" : "") + std::string(to_string(category));
    if (auto it = c.dynamic_labels.find(key); it != c.dynamic_labels.end()) return it->second;
    if (negated) {
        if (auto it = c.dynamic_labels.find("negated"); it != c.dynamic_labels.end()) return it->second;
        return negated_fallback(c);
    }
    if (category == Category::lexical) return c.dynamic_labels.count("default") ? c.dynamic_labels.at("default") : "";
    return synthesize(c, category);
}

void synthesize_category_labels(StatementKgbbClass& c) {
    if (c.lexical) return;
    for (auto cat : {Category::assertional, Category::contingent, Category::prototypical, Category::universal}) {
        const std::string key(to_string(cat));
        if (!c.dynamic_labels.count(key)) c.dynamic_labels[key] = synthesize(c, cat);
    }
}

// ---- OWL derivation -------------------------------------------------------

namespace {

std::vector<std::string> content_words(const std::string& s) {
    std::vector<std::string> out;
    for (auto& w : text::split_words(s))
        if (!text::is_determiner(w)) out.push_back(w);
    return out;
}

std::string derived_property_name(const StatementKgbbClass& c, const ObjectPositionClass& pos) {
    if (!pos.owl_property.empty()) return pos.owl_property;
    const auto def = c.dynamic_labels.count("default") ? c.dynamic_labels.at("default") : std::string();
    const auto pieces = text::parse_label_template(def);
    const auto si = subject_index(pieces, c.subject_label);

    auto verb_words = text::split_words(c.predicate_label);
    std::string verb = verb_words.empty() ? std::string() : verb_words.front();
    if (si + 1 < pieces.size() && !pieces[si + 1].placeholder) {
        auto w = content_words(pieces[si + 1].value);
        if (!w.empty()) verb = w.front();
    }

    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!pieces[i].placeholder || pieces[i].value != pos.thematic_label) continue;
        if (i > 0 && !pieces[i - 1].placeholder) {
            auto w = content_words(pieces[i - 1].value);
            if (i - 1 == si + 1 && si < pieces.size()) {
                // Directly after the subject: the whole phrase names the property.
                if (!w.empty()) return text::camel_case(w);
            } else if (!w.empty()) {
                return text::camel_case({verb, w.front()});
            }
        }
        break;
    }
    std::string label;
    for (char ch : pos.thematic_label) label += ch == '_' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return text::camel_case({verb}) + text::pascal_case(label);
}

} // namespace

AccessTemplate derive_owl_access_template(const StatementKgbbClass& c) {
    AccessTemplate t;
    t.upri = Upri(c.upri.value + "#owl-access-template");
    t.format = AccessFormat::owl;
    t.mapping.push_back({"subject", "subject"});
    for (const auto& pos : c.positions) {
        OwlProperty p;
        p.name = derived_property_name(c, pos);
        p.object_property = pos.object_type == ObjectType::resource;
        p.required = pos.required;
        p.position = pos.upri;
        p.domain = c.subject_constraint;
        if (p.object_property) p.range = pos.resource_class ? pos.resource_class->value : "http://www.w3.org/2002/07/owl#Thing";
        else p.range = std::string(to_string(pos.literal ? pos.literal->datatype : Datatype::string));
        p.axioms = pos.logical_properties;
        t.mapping.push_back({pos.upri.value, p.name});
        t.owl_properties.push_back(std::move(p));
    }
    return t;
}

// ---- wizard ---------------------------------------------------------------

namespace {

[[noreturn]] void wizard_fail(const std::string& what, const std::string& detail = {}) {
    throw Error(ErrorCode::wizard_error, what, detail);
}

std::string label_words(const std::string& label) {
    std::string out;
    for (char ch : label) out += ch == '_' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

// Wraps bare upper-case thematic labels in braces; rejects unknown ones.
std::string to_template(const std::string& sentence, const std::set<std::string>& labels) {
    static const std::regex token(R"(\{([^}]*)\}|\b[A-Z][A-Z0-9_]*[A-Z0-9_]\b)");
    std::string out;
    std::size_t last = 0;
    for (auto it = std::sregex_iterator(sentence.begin(), sentence.end(), token); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const std::string name = m[1].matched ? m[1].str() : m[0].str();
        if (!labels.count(name)) wizard_fail("label sentence uses a thematic label that was not declared", name);
        out += sentence.substr(last, static_cast<std::size_t>(m.position(0)) - last);
        out += "{" + name + "}";
        last = static_cast<std::size_t>(m.position(0) + m.length(0));
    }
    out += sentence.substr(last);
    return out;
}

} // namespace

StatementKgbbClass create_statement_kgbb_from_wizard(const WizardAnswers& a) {
    if (text::trim(a.predicate).empty()) wizard_fail("the predicate (question 1) is empty");
    if (a.position_labels.size() != a.position_count)
        wizard_fail("number of thematic labels differs from the declared position count",
                    std::to_string(a.position_labels.size()) + " vs " + std::to_string(a.position_count));
    if (a.position_count == 0) wizard_fail("a statement needs at least one object position");

    std::set<std::string> labels{a.subject_label};
    for (const auto& l : a.position_labels)
        if (!labels.insert(l).second) throw Error(ErrorCode::duplicate_label, "duplicate thematic label", l);
    for (const auto& r : a.required)
        if (!std::count(a.position_labels.begin(), a.position_labels.end(), r))
            wizard_fail("required position is not among the thematic labels", r);

    const auto tmpl = to_template(a.label_sentence, labels);
    const auto used = text::placeholders(tmpl);
    for (const auto& l : labels)
        if (!std::count(used.begin(), used.end(), l)) wizard_fail("thematic label missing from the label sentence", l);

    const std::string pred_slug = text::slug(std::regex_replace(a.predicate, std::regex("-"), " "));
    StatementKgbbClass c;
    c.upri = Upri(a.id_prefix + pred_slug + "-statement-kgbb");
    c.label = a.predicate + " statement";
    c.description = a.description;
    c.manages = Upri(a.id_prefix + text::pascal_case(std::regex_replace(a.predicate, std::regex("-"), " ")) + "StatementUnit");
    c.predicate_label = a.predicate;
    c.predicate_definition = a.description;
    c.subject_label = a.subject_label;
    c.subject_constraint = a.subject_class;
    c.examples = a.examples;

    for (const auto& l : a.position_labels) {
        auto type_it = a.position_types.find(l);
        if (type_it == a.position_types.end()) wizard_fail("no type given for position", l);
        const auto& wt = type_it->second;
        ObjectPositionClass p;
        p.upri = Upri(a.id_prefix + pred_slug + "-" + text::slug(label_words(l)));
        p.thematic_label = l;
        if (auto d = a.position_descriptions.find(l); d != a.position_descriptions.end()) p.description = d->second;
        p.object_type = wt.type;
        p.required = a.required.count(l) != 0;
        if (wt.type == ObjectType::resource) {
            p.resource_class = wt.resource_class;
        } else {
            if (!wt.literal) wizard_fail("literal position needs a datatype", l);
            p.literal = wt.literal;
        }
        if (auto lp = a.logical_properties.find(l); lp != a.logical_properties.end()) p.logical_properties = lp->second;
        c.positions.push_back(p);
    }
    c.dynamic_labels["default"] = tmpl;

    // Mind map: predicate hub, spokes labeled with the connective before each placeholder.
    c.mind_map.hub_label = a.predicate;
    const auto pieces = text::parse_label_template(tmpl);
    const auto si = subject_index(pieces, c.subject_label);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!pieces[i].placeholder || pieces[i].value == c.subject_label) continue;
        const auto* pos = c.position_by_label(pieces[i].value);
        std::string edge;
        if (i > 0 && !pieces[i - 1].placeholder) {
            auto w = content_words(pieces[i - 1].value);
            if (i - 1 == si + 1 && !w.empty()) w.erase(w.begin());
            for (const auto& x : w) edge += (edge.empty() ? "" : " ") + x;
        }
        c.mind_map.edge_labels[pos->upri] = edge.empty() ? label_words(pos->thematic_label) : edge;
    }

    synthesize_category_labels(c);
    c.access_templates.push_back(derive_owl_access_template(c));
    return c;
}

} // namespace kgbb
