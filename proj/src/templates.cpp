#include "kgbb/templates.hpp"

#include "kgbb/error.hpp"
#include "kgbb/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace kgbb {

namespace {

using text::TemplatePiece;

std::string local_name(const std::string& iri) {
    const auto cut = iri.find_last_of("#/:");
    return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

// Length of the predicate phrase at the start of a connective.
std::size_t anchor_length(const std::string& lit, const std::string& predicate_label) {
    const auto start = lit.find_first_not_of(' ');
    if (start == std::string::npos) return lit.size();
    if (!predicate_label.empty() && lit.compare(start, predicate_label.size(), predicate_label) == 0) {
        const auto end = start + predicate_label.size();
        if (end == lit.size() || lit[end] == ' ') return end;
    }
    const auto end = lit.find(' ', start);
    return end == std::string::npos ? lit.size() : end;
}

} // namespace

std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values,
                          const std::string& subject_label, const std::string& predicate_label,
                          const std::set<std::string>& required) {
    auto pieces = text::parse_label_template(tmpl);
    std::size_t si = pieces.size();
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].placeholder && pieces[i].value == subject_label) {
            si = i;
            break;
        }

    std::vector<bool> drop(pieces.size(), false);
    std::vector<std::string> keep_text(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!pieces[i].placeholder) continue;
        if (values.count(pieces[i].value)) continue;
        if (required.count(pieces[i].value) || i == si)
            throw Error(ErrorCode::missing_required_binding, "no value for {" + pieces[i].value + "}", pieces[i].value);
        drop[i] = true;
        if (i > 0 && !pieces[i - 1].placeholder) {
            drop[i - 1] = true;
            if (si != pieces.size() && i - 1 == si + 1)
                keep_text[i - 1] = pieces[i - 1].value.substr(0, anchor_length(pieces[i - 1].value, predicate_label));
        }
    }

    std::string out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (drop[i]) {
            out += keep_text[i];
            if (!keep_text[i].empty()) out += ' ';
            continue;
        }
        out += pieces[i].placeholder ? values.at(pieces[i].value) : pieces[i].value;
    }
    auto s = text::collapse_spaces(out);
    // A connective dropped before trailing punctuation leaves " ." behind.
    for (const char* p : {" .", " ,", " ?"}) {
        for (auto pos = s.find(p); pos != std::string::npos; pos = s.find(p)) s.erase(pos, 1);
    }
    return s;
}

std::string resource_label(const Specification& spec, const Store& store, const Upri& upri) {
    if (const auto* r = store.resource(upri)) {
        if (!r->label.empty()) return r->label;
        if (r->kind == ResourceKind::class_) return spec.ontology.label_of(upri);
        if ((r->kind == ResourceKind::some_instance || r->kind == ResourceKind::every_instance) && r->class_affiliation) {
            if (const auto* c = store.resource(*r->class_affiliation); c && !c->label.empty()) return c->label;
            return spec.ontology.label_of(*r->class_affiliation);
        }
    }
    if (const auto* u = store.find(upri); u && !meta_of(*u).label.empty()) return meta_of(*u).label;
    if (spec.ontology.contains(upri)) return spec.ontology.label_of(upri);
    return local_name(upri.value);
}

std::map<std::string, std::string> label_values(const Specification& spec, const Store& store, const StatementUnit& unit) {
    std::map<std::string, std::string> out;
    const auto* cls = spec.statement_class_of_instance(unit.meta.kgbb_uri);
    if (!cls) throw Error(ErrorCode::unknown_instance, "unit's KGBB is not in the specification", unit.meta.kgbb_uri.value);
    if (unit.meta.subject) out[cls->subject_label] = resource_label(spec, store, *unit.meta.subject);
    for (const auto& p : unit.positions) {
        if (!p.current_version) continue;
        const auto* pos = cls->position(p.position_class);
        const std::string label = pos ? pos->thematic_label : p.input_type_label;
        if (const auto* r = std::get_if<Upri>(&p.input)) out[label] = resource_label(spec, store, *r);
        else out[label] = std::get<Literal>(p.input).value;
    }
    return out;
}

namespace {

std::set<std::string> required_labels(const StatementKgbbClass& cls) {
    std::set<std::string> out{cls.subject_label};
    for (const auto& p : cls.positions)
        if (p.required) out.insert(p.thematic_label);
    return out;
}

const StatementKgbbClass& class_of(const Specification& spec, const StatementUnit& unit) {
    const auto* cls = spec.statement_class_of_instance(unit.meta.kgbb_uri);
    if (!cls) throw Error(ErrorCode::unknown_instance, "unit's KGBB is not in the specification", unit.meta.kgbb_uri.value);
    return *cls;
}

} // namespace

std::string render_dynamic_label(const Specification& spec, const Store& store, const StatementUnit& unit,
                                 std::string_view tmpl) {
    const auto& cls = class_of(spec, unit);
    return text::upper_first(
        fill_template(tmpl, label_values(spec, store, unit), cls.subject_label, cls.predicate_label, required_labels(cls)));
}

std::string render_dynamic_label(const Specification& spec, const Store& store, const StatementUnit& unit) {
    const auto& cls = class_of(spec, unit);
    std::string tmpl;
    if (unit.negated) tmpl = category_label_template(cls, unit.category, true);
    else if (auto it = cls.dynamic_labels.find("default"); it != cls.dynamic_labels.end()) tmpl = it->second;
    return render_dynamic_label(spec, store, unit, tmpl);
}

std::string render_category_label(const Specification& spec, const Store& store, const StatementUnit& unit) {
    const auto& cls = class_of(spec, unit);
    return fix_indefinite_articles(render_dynamic_label(spec, store, unit, category_label_template(cls, unit.category, unit.negated)));
}

std::string fix_indefinite_articles(std::string s) {
    auto words = text::split_words(s);
    if (words.size() < 2) return s;
    bool changed = false;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        auto& w = words[i];
        const bool vowel = text::starts_with_vowel_sound(words[i + 1]);
        if ((w == "a" || w == "A") && vowel) {
            w += "n";
            changed = true;
        } else if ((w == "an" || w == "An") && !vowel) {
            w.pop_back();
            changed = true;
        }
    }
    if (!changed) return s;
    std::string out;
    for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
    return out;
}

namespace {

void statement_mind_map(const Specification& spec, const Store& store, const StatementUnit& unit, MindMap& m) {
    const auto& cls = class_of(spec, unit);
    const auto hub_label = cls.mind_map.hub_label.empty() ? cls.predicate_label : cls.mind_map.hub_label;
    auto add_node = [&](MindMapNode n) {
        if (std::find_if(m.nodes.begin(), m.nodes.end(), [&](const auto& x) { return x.id == n.id; }) == m.nodes.end())
            m.nodes.push_back(std::move(n));
    };
    auto object_node = [&](const ObjectPositionInstance& p) {
        if (const auto* r = std::get_if<Upri>(&p.input)) return MindMapNode{r->value, resource_label(spec, store, *r), "object"};
        return MindMapNode{p.upri.value, std::get<Literal>(p.input).value, "object"};
    };
    add_node({unit.subject().value, resource_label(spec, store, unit.subject()), "subject"});

    std::vector<std::pair<const ObjectPositionClass*, const ObjectPositionInstance*>> bound;
    for (const auto& pos : cls.positions)
        if (const auto* p = unit.current(pos.upri)) bound.emplace_back(&pos, p);

    // A binary statement needs no hub: subject and object joined by the predicate.
    if (cls.positions.size() == 1 && bound.size() == 1) {
        auto obj = object_node(*bound.front().second);
        m.edges.push_back({unit.subject().value, obj.id, hub_label});
        add_node(std::move(obj));
        return;
    }
    const std::string hub = unit.meta.upri.value + "#hub";
    add_node({hub, hub_label, "hub"});
    m.edges.push_back({unit.subject().value, hub, cls.subject_label});
    for (const auto& [pos, p] : bound) {
        auto obj = object_node(*p);
        auto edge = cls.mind_map.edge_labels.find(pos->upri);
        m.edges.push_back({hub, obj.id, edge == cls.mind_map.edge_labels.end() ? pos->thematic_label : edge->second});
        add_node(std::move(obj));
    }
}

} // namespace

MindMap render_mind_map(const Specification& spec, const Store& store, const Upri& upri) {
    const auto* u = store.find(upri);
    if (!u) throw Error(ErrorCode::not_found, "no such unit", upri.value);
    MindMap m;
    if (const auto* s = std::get_if<StatementUnit>(u)) {
        statement_mind_map(spec, store, *s, m);
        return m;
    }
    const auto* c = std::get_if<CompoundUnit>(u);
    if (!c) throw Error(ErrorCode::not_applicable, "question units have no mind map", upri.value);
    std::set<Upri> seen;
    std::vector<Upri> todo(c->has_associated_semantic_unit.rbegin(), c->has_associated_semantic_unit.rend());
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        if (!seen.insert(cur).second) continue;
        const auto* mu = store.find(cur);
        if (!mu || meta_of(*mu).deleted()) continue;
        if (const auto* s = std::get_if<StatementUnit>(mu)) statement_mind_map(spec, store, *s, m);
        else if (const auto* cc = std::get_if<CompoundUnit>(mu))
            for (auto it = cc->has_associated_semantic_unit.rbegin(); it != cc->has_associated_semantic_unit.rend(); ++it)
                todo.push_back(*it);
    }
    return m;
}

namespace {

std::string unit_line(const Specification& spec, const Store& store, const Upri& u) {
    const auto* su = store.find(u);
    if (!su) return u.value;
    if (const auto* s = std::get_if<StatementUnit>(su)) {
        try {
            return render_dynamic_label(spec, store, *s);
        } catch (const Error&) {
            return s->meta.label;
        }
    }
    return meta_of(*su).label;
}

std::vector<Upri> ordered_members(const Store& store, const CompoundUnit& c, const std::set<Upri>& members,
                                  const std::optional<Upri>& target) {
    std::vector<Upri> out;
    for (const auto& m : members) {
        const auto* u = store.find(m);
        if (!u || meta_of(*u).deleted()) continue;
        if (target && meta_of(*u).kgbb_uri != *target) continue;
        out.push_back(m);
    }
    std::stable_sort(out.begin(), out.end(), [&](const Upri& a, const Upri& b) {
        auto ia = c.ordering.find(a), ib = c.ordering.find(b);
        if (ia != c.ordering.end() && ib != c.ordering.end()) return ia->second < ib->second;
        return meta_of(*store.find(a)).creation_date < meta_of(*store.find(b)).creation_date;
    });
    return out;
}

} // namespace

DisplayDocument render_compound_display(const Specification& spec, const Store& store, const Upri& compound,
                                        std::optional<Upri> display_template) {
    const auto* c = store.compound(compound);
    if (!c) throw Error(ErrorCode::not_found, "no such compound unit", compound.value);
    const auto* cls = spec.compound_class_of_instance(c->meta.kgbb_uri);
    if (!cls) throw Error(ErrorCode::unknown_instance, "unit's KGBB is not in the specification", c->meta.kgbb_uri.value);

    CompoundDisplayTemplate tmpl;
    if (display_template) {
        auto it = std::find_if(cls->display_templates.begin(), cls->display_templates.end(),
                               [&](const auto& t) { return t.upri == *display_template; });
        if (it == cls->display_templates.end())
            throw Error(ErrorCode::not_found, "no such display template", display_template->value);
        tmpl = *it;
    } else if (!cls->display_templates.empty()) {
        tmpl = cls->display_templates.front();
    } else {
        tmpl.upri = Upri(cls->upri.value + "#default-display");
        tmpl.sections.push_back({DisplaySectionKind::headline, cls->label, std::nullopt, {}});
        if (c->meta.subject) tmpl.sections.push_back({DisplaySectionKind::subject_header, "subject", std::nullopt, {}});
        for (const auto* a : spec.associations_from(c->meta.kgbb_uri))
            tmpl.sections.push_back({DisplaySectionKind::association, a->target.value, a->target, "nothing recorded yet"});
        tmpl.sections.push_back({DisplaySectionKind::linked_items, "linked items", std::nullopt, {}});
    }

    for (const auto& s : tmpl.sections) {
        if (!s.target) continue;
        bool known = false;
        if (s.kind == DisplaySectionKind::association) {
            for (const auto* a : spec.associations_from(c->meta.kgbb_uri)) known = known || a->target == *s.target;
        } else {
            known = spec.has_instance(*s.target);
        }
        if (!known)
            throw Error(ErrorCode::unknown_target, "display section names a KGBB the compound is not connected to",
                        s.target->value);
    }

    DisplayDocument doc;
    doc.compound = compound;
    doc.display_template = tmpl.upri;
    for (const auto& s : tmpl.sections) {
        DisplayBlock b;
        b.kind = std::string(to_string(s.kind));
        b.label = s.label;
        switch (s.kind) {
        case DisplaySectionKind::headline:
            b.lines.push_back(c->meta.label);
            break;
        case DisplaySectionKind::subject_header:
            if (c->meta.subject) b.lines.push_back(resource_label(spec, store, *c->meta.subject));
            break;
        case DisplaySectionKind::association:
            b.units = ordered_members(store, *c, c->has_associated_semantic_unit, s.target);
            break;
        case DisplaySectionKind::linked_items:
            b.units = ordered_members(store, *c, c->has_linked_semantic_unit, s.target);
            break;
        }
        for (const auto& u : b.units) b.lines.push_back(unit_line(spec, store, u));
        if ((s.kind == DisplaySectionKind::association || s.kind == DisplaySectionKind::linked_items) && b.units.empty() &&
            !s.placeholder.empty()) {
            b.placeholder = true;
            b.lines.push_back(s.placeholder);
        }
        doc.sections.push_back(std::move(b));
    }
    return doc;
}

const AccessTemplate* find_access_template(const StatementKgbbClass& cls, const Upri& id_or_family) {
    for (const auto& t : cls.access_templates)
        if (t.upri == id_or_family || (t.family && *t.family == id_or_family)) return &t;
    return nullptr;
}

namespace {

std::string object_text(const Object& o) {
    if (const auto* u = std::get_if<Upri>(&o)) return u->value;
    return std::get<Literal>(o).value;
}

std::string csv_cell(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

AccessOutput apply_access_template(const Specification& spec, const Store& store, const StatementUnit& unit,
                                   const AccessTemplate& tmpl, const std::function<Upri()>& mint) {
    AccessOutput out;
    out.format = tmpl.format;
    const auto& cls = class_of(spec, unit);
    (void)store;
    if (tmpl.format != AccessFormat::owl) {
        for (const auto& pos : cls.positions) {
            if (!pos.required) continue;
            const bool mapped = std::any_of(tmpl.mapping.begin(), tmpl.mapping.end(),
                                            [&](const AccessMapping& m) { return m.source == pos.upri.value; });
            if (!mapped)
                throw Error(ErrorCode::unmapped_required_position,
                            "access template does not map required position " + pos.thematic_label, pos.upri.value);
        }
    }

    std::map<std::string, Object> vars;
    for (const auto& m : tmpl.mapping) {
        if (m.source == "subject") {
            vars[m.variable] = unit.subject();
        } else if (const auto* p = unit.current(Upri(m.source))) {
            vars[m.variable] = p->input;
        }
    }

    switch (tmpl.format) {
    case AccessFormat::graph_pattern:
    case AccessFormat::rdf_owl: {
        static const Upri type(std::string(vocab::rdf_type));
        for (const auto& f : tmpl.fresh_nodes) {
            const Upri node = mint();
            vars[f.variable] = node;
            out.fresh_nodes.push_back(node);
            out.triples.push_back({node, type, f.target_class});
        }
        for (const auto& e : tmpl.pattern) {
            auto from = vars.find(e.from);
            auto to = vars.find(e.to);
            if (from == vars.end() || to == vars.end()) continue;
            const auto* s = std::get_if<Upri>(&from->second);
            if (!s) continue;
            out.triples.push_back({*s, e.predicate, to->second});
        }
        std::ostringstream os;
        for (const auto& t : out.triples) {
            os << '<' << t.subject.value << "> <" << t.predicate.value << "> ";
            if (const auto* u = std::get_if<Upri>(&t.object)) os << '<' << u->value << '>';
            else os << nlohmann::json(std::get<Literal>(t.object).value).dump();
            os << " .\n";
        }
        out.text = os.str();
        break;
    }
    case AccessFormat::owl: {
        std::ostringstream os;
        for (const auto& p : tmpl.owl_properties) {
            const auto* inst = unit.current(p.position);
            if (!inst) continue;
            const Upri prop(std::string(vocab::base) + "property/" + p.name);
            out.triples.push_back({unit.subject(), prop, inst->input});
            os << (p.object_property ? "ObjectPropertyAssertion(" : "DataPropertyAssertion(") << p.name << ' '
               << unit.subject().value << ' ' << object_text(inst->input) << ")\n";
        }
        out.text = os.str();
        break;
    }
    case AccessFormat::csv:
    case AccessFormat::json: {
        for (const auto& m : tmpl.mapping) {
            auto it = vars.find(m.variable);
            out.fields.emplace_back(m.variable, it == vars.end() ? std::string() : object_text(it->second));
        }
        if (tmpl.format == AccessFormat::csv) {
            std::string header, row;
            for (std::size_t i = 0; i < out.fields.size(); ++i) {
                header += (i ? "," : "") + csv_cell(out.fields[i].first);
                row += (i ? "," : "") + csv_cell(out.fields[i].second);
            }
            out.text = header + "\n" + row + "\n";
        } else {
            nlohmann::ordered_json j = nlohmann::ordered_json::object();
            for (const auto& [k, v] : out.fields) j[k] = v;
            out.text = j.dump();
        }
        break;
    }
    }
    return out;
}

} // namespace kgbb
