// YAML reading and writing of specification documents.

#include "kgbb/error.hpp"
#include "kgbb/spec.hpp"
#include "kgbb/text.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace kgbb {

namespace {

std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    if (m.line < 0) return {};
    return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1);
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
    throw Error(ErrorCode::parse_error, what, where(n));
}

void check_keys(const YAML::Node& n, std::initializer_list<std::string_view> allowed, std::string_view ctx) {
    if (!n.IsMap()) fail(n, std::string(ctx) + " must be a mapping");
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) fail(kv.first, "unknown key '" + key + "' in " + std::string(ctx));
    }
}

std::string str(const YAML::Node& n, std::string_view what) {
    if (!n.IsScalar()) fail(n, std::string(what) + " must be a scalar");
    return n.Scalar();
}

std::string req_str(const YAML::Node& parent, const char* key, std::string_view ctx) {
    const auto n = parent[key];
    if (!n) fail(parent, std::string(ctx) + " is missing '" + key + "'");
    return str(n, key);
}

std::string opt_str(const YAML::Node& parent, const char* key, std::string dflt = {}) {
    const auto n = parent[key];
    if (!n || n.IsNull()) return dflt;
    return str(n, key);
}

std::optional<Upri> opt_upri(const YAML::Node& parent, const char* key) {
    const auto n = parent[key];
    if (!n || n.IsNull()) return std::nullopt;
    return Upri(str(n, key));
}

bool opt_bool(const YAML::Node& parent, const char* key, bool dflt) {
    const auto n = parent[key];
    if (!n || n.IsNull()) return dflt;
    bool out = dflt;
    if (!YAML::convert<bool>::decode(n, out)) fail(n, std::string(key) + " must be a boolean");
    return out;
}

std::optional<double> opt_number(const YAML::Node& parent, const char* key) {
    const auto n = parent[key];
    if (!n || n.IsNull()) return std::nullopt;
    double out = 0;
    if (!YAML::convert<double>::decode(n, out)) fail(n, std::string(key) + " must be a number");
    return out;
}

std::uint32_t count(const YAML::Node& parent, const char* key) {
    const auto n = parent[key];
    if (!n || n.IsNull()) return 0;
    long long v = -1;
    if (!YAML::convert<long long>::decode(n, v) || v < 0) fail(n, std::string(key) + " must be a non-negative integer");
    return static_cast<std::uint32_t>(v);
}

template <class F>
void each(const YAML::Node& parent, const char* key, F&& f) {
    const auto n = parent[key];
    if (!n || n.IsNull()) return;
    if (!n.IsSequence()) fail(n, std::string(key) + " must be a list");
    for (const auto& item : n) f(item);
}

std::vector<Upri> upri_list(const YAML::Node& parent, const char* key) {
    std::vector<Upri> out;
    each(parent, key, [&](const YAML::Node& x) { out.emplace_back(str(x, key)); });
    return out;
}

std::vector<std::string> string_list(const YAML::Node& parent, const char* key) {
    std::vector<std::string> out;
    each(parent, key, [&](const YAML::Node& x) { out.push_back(str(x, key)); });
    return out;
}

ObjectPositionClass read_position(const YAML::Node& n) {
    check_keys(n, {"id", "label", "description", "type", "required", "constraint", "logical_properties", "owl_property"},
               "position");
    ObjectPositionClass p;
    p.upri = Upri(req_str(n, "id", "position"));
    p.thematic_label = req_str(n, "label", "position");
    p.description = opt_str(n, "description");
    const auto type = opt_str(n, "type", "resource");
    if (type == "resource") p.object_type = ObjectType::resource;
    else if (type == "literal") p.object_type = ObjectType::literal;
    else fail(n["type"], "position type must be 'resource' or 'literal'");
    p.required = opt_bool(n, "required", false);
    p.owl_property = opt_str(n, "owl_property");

    const auto c = n["constraint"];
    if (p.object_type == ObjectType::resource) {
        if (c && !c.IsNull()) {
            check_keys(c, {"class"}, "resource constraint");
            p.resource_class = opt_upri(c, "class");
        }
    } else {
        if (!c || c.IsNull()) fail(n, "literal position '" + p.thematic_label + "' needs a datatype constraint");
        check_keys(c, {"datatype", "min", "max", "pattern"}, "literal constraint");
        LiteralConstraint lc;
        const auto dt = req_str(c, "datatype", "literal constraint");
        const auto parsed = datatype_from_string(dt);
        if (!parsed) fail(c["datatype"], "unknown datatype '" + dt + "'");
        lc.datatype = *parsed;
        lc.min = opt_number(c, "min");
        lc.max = opt_number(c, "max");
        if (c["pattern"]) lc.pattern = str(c["pattern"], "pattern");
        p.literal = lc;
    }
    each(n, "logical_properties", [&](const YAML::Node& x) {
        const auto lp = logical_property_from_string(str(x, "logical property"));
        if (!lp) fail(x, "unknown logical property '" + x.Scalar() + "'");
        p.logical_properties.insert(*lp);
    });
    return p;
}

AccessTemplate read_access_template(const YAML::Node& n) {
    check_keys(n, {"id", "family", "format", "mapping", "fresh_nodes", "pattern", "logical_framework", "references",
                   "curators", "owl_properties"},
               "access template");
    AccessTemplate t;
    t.upri = Upri(req_str(n, "id", "access template"));
    t.family = opt_upri(n, "family");
    const auto fmt = opt_str(n, "format", "graph-pattern");
    const auto f = access_format_from_string(fmt);
    if (!f) fail(n["format"], "unknown access format '" + fmt + "'");
    t.format = *f;
    each(n, "mapping", [&](const YAML::Node& m) {
        check_keys(m, {"source", "variable"}, "mapping");
        t.mapping.push_back({req_str(m, "source", "mapping"), req_str(m, "variable", "mapping")});
    });
    each(n, "fresh_nodes", [&](const YAML::Node& m) {
        check_keys(m, {"variable", "class"}, "fresh node rule");
        t.fresh_nodes.push_back({req_str(m, "variable", "fresh node rule"), Upri(req_str(m, "class", "fresh node rule"))});
    });
    each(n, "pattern", [&](const YAML::Node& m) {
        check_keys(m, {"from", "predicate", "to"}, "pattern edge");
        t.pattern.push_back({req_str(m, "from", "pattern edge"), Upri(req_str(m, "predicate", "pattern edge")),
                             req_str(m, "to", "pattern edge")});
    });
    t.logical_framework = opt_upri(n, "logical_framework");
    t.references = upri_list(n, "references");
    t.curators = upri_list(n, "curators");
    each(n, "owl_properties", [&](const YAML::Node& m) {
        check_keys(m, {"name", "kind", "required", "position", "domain", "range", "axioms"}, "owl property");
        OwlProperty p;
        p.name = req_str(m, "name", "owl property");
        p.object_property = opt_str(m, "kind", "object") == "object";
        p.required = opt_bool(m, "required", false);
        p.position = Upri(req_str(m, "position", "owl property"));
        p.domain = opt_upri(m, "domain");
        p.range = opt_str(m, "range");
        each(m, "axioms", [&](const YAML::Node& x) {
            const auto lp = logical_property_from_string(str(x, "axiom"));
            if (!lp) fail(x, "unknown axiom '" + x.Scalar() + "'");
            p.axioms.insert(*lp);
        });
        t.owl_properties.push_back(p);
    });
    return t;
}

ImportTemplate read_import_template(const YAML::Node& n) {
    check_keys(n, {"id", "columns", "constants"}, "import template");
    ImportTemplate t;
    t.upri = Upri(req_str(n, "id", "import template"));
    each(n, "columns", [&](const YAML::Node& m) {
        check_keys(m, {"column", "target", "kind", "class"}, "import column");
        ImportColumn c;
        c.column = req_str(m, "column", "import column");
        c.target = req_str(m, "target", "import column");
        if (m["kind"]) {
            const auto k = resource_kind_from_string(str(m["kind"], "kind"));
            if (!k) fail(m["kind"], "unknown resource kind");
            c.kind = k;
        }
        c.resource_class = opt_upri(m, "class");
        t.columns.push_back(c);
    });
    each(n, "constants", [&](const YAML::Node& m) {
        check_keys(m, {"target", "value"}, "import constant");
        t.constants.push_back({req_str(m, "target", "import constant"), req_str(m, "value", "import constant")});
    });
    return t;
}

StatementKgbbClass read_statement_class(const YAML::Node& n) {
    check_keys(n, {"id", "kind", "parent", "label", "description", "manages", "predicate_label", "predicate_definition",
                   "predicate", "subject_label", "subject_constraint", "lexical", "positions", "dynamic_labels",
                   "mind_map", "question", "examples", "access_templates", "import_templates", "use_with_ontology"},
               "statement class");
    StatementKgbbClass c;
    c.upri = Upri(req_str(n, "id", "class"));
    c.parent = opt_upri(n, "parent");
    c.label = opt_str(n, "label");
    c.description = opt_str(n, "description");
    if (auto m = opt_upri(n, "manages")) c.manages = *m;
    c.predicate_label = opt_str(n, "predicate_label");
    c.predicate_definition = opt_str(n, "predicate_definition");
    c.predicate = opt_upri(n, "predicate");
    c.subject_label = opt_str(n, "subject_label");
    c.subject_constraint = opt_upri(n, "subject_constraint");
    c.lexical = opt_bool(n, "lexical", false);
    each(n, "positions", [&](const YAML::Node& p) { c.positions.push_back(read_position(p)); });
    if (const auto dl = n["dynamic_labels"]; dl && !dl.IsNull()) {
        if (!dl.IsMap()) fail(dl, "dynamic_labels must be a mapping");
        for (const auto& kv : dl) {
            const auto key = kv.first.as<std::string>();
            std::string_view k = key;
            if (k.substr(0, 8) == "negated-") k.remove_prefix(8);
            if (key != "default" && key != "negated" && !category_from_string(k)) fail(kv.first, "unknown dynamic label key '" + key + "'");
            c.dynamic_labels[key] = str(kv.second, "dynamic label");
        }
    }
    if (const auto mm = n["mind_map"]; mm && !mm.IsNull()) {
        check_keys(mm, {"hub", "edges"}, "mind_map");
        c.mind_map.hub_label = opt_str(mm, "hub");
        if (const auto e = mm["edges"]; e && !e.IsNull()) {
            if (!e.IsMap()) fail(e, "mind_map.edges must be a mapping");
            for (const auto& kv : e) c.mind_map.edge_labels[Upri(kv.first.as<std::string>())] = str(kv.second, "edge label");
        }
    }
    if (const auto q = n["question"]; q && !q.IsNull()) {
        check_keys(q, {"auxiliary", "use_category_label"}, "question");
        c.question.auxiliary = opt_str(q, "auxiliary", "Did");
        c.question.use_category_label = opt_bool(q, "use_category_label", false);
    }
    c.examples = string_list(n, "examples");
    each(n, "access_templates", [&](const YAML::Node& t) { c.access_templates.push_back(read_access_template(t)); });
    each(n, "import_templates", [&](const YAML::Node& t) { c.import_templates.push_back(read_import_template(t)); });
    c.use_with_ontology = upri_list(n, "use_with_ontology");
    return c;
}

CompoundKgbbClass read_compound_class(const YAML::Node& n) {
    check_keys(n, {"id", "kind", "parent", "label", "description", "compound_kind", "subject_constraint",
                   "display_templates"},
               "compound class");
    CompoundKgbbClass c;
    c.upri = Upri(req_str(n, "id", "class"));
    c.parent = opt_upri(n, "parent");
    c.label = opt_str(n, "label");
    c.description = opt_str(n, "description");
    const auto kind = opt_str(n, "compound_kind", "item");
    const auto k = compound_kind_from_string(kind);
    if (!k) fail(n["compound_kind"], "unknown compound kind '" + kind + "'");
    c.kind = *k;
    c.subject_constraint = opt_upri(n, "subject_constraint");
    each(n, "display_templates", [&](const YAML::Node& t) {
        check_keys(t, {"id", "sections"}, "display template");
        CompoundDisplayTemplate dt;
        dt.upri = Upri(req_str(t, "id", "display template"));
        each(t, "sections", [&](const YAML::Node& s) {
            check_keys(s, {"kind", "label", "target", "placeholder"}, "display section");
            DisplaySection sec;
            const auto sk = opt_str(s, "kind", "headline");
            bool found = false;
            for (auto cand : {DisplaySectionKind::headline, DisplaySectionKind::subject_header,
                              DisplaySectionKind::association, DisplaySectionKind::linked_items})
                if (to_string(cand) == sk) {
                    sec.kind = cand;
                    found = true;
                }
            if (!found) fail(s["kind"], "unknown display section kind '" + sk + "'");
            sec.label = opt_str(s, "label");
            sec.target = opt_upri(s, "target");
            sec.placeholder = opt_str(s, "placeholder");
            dt.sections.push_back(sec);
        });
        c.display_templates.push_back(dt);
    });
    return c;
}

[[noreturn]] void dangling(const std::string& what, const std::string& detail) {
    throw Error(ErrorCode::dangling_reference, what, detail);
}

// Defaults and consistency checks applied to every effective statement class.
void finish_statement_class(StatementKgbbClass& c) {
    if (c.manages.empty()) c.manages = Upri(c.upri.value + "#unit-class");
    if (c.subject_label.empty()) c.subject_label = "SUBJECT";
    if (c.positions.empty()) throw Error(ErrorCode::invalid_argument, "statement class has no positions", c.upri.value);
    std::set<std::string> labels{c.subject_label};
    std::set<Upri> ids;
    for (const auto& p : c.positions) {
        if (!labels.insert(p.thematic_label).second)
            throw Error(ErrorCode::duplicate_label, "duplicate thematic label '" + p.thematic_label + "'", c.upri.value);
        if (!ids.insert(p.upri).second)
            throw Error(ErrorCode::duplicate_label, "duplicate position id", p.upri.value);
        if (c.lexical && p.object_type != ObjectType::literal)
            throw Error(ErrorCode::invalid_argument, "lexical classes take literal positions only", p.upri.value);
    }
    if (!c.dynamic_labels.count("default")) {
        std::string t = "{" + c.subject_label + "}";
        if (!c.predicate_label.empty()) t += " " + c.predicate_label;
        for (const auto& p : c.positions) t += " {" + p.thematic_label + "}";
        c.dynamic_labels["default"] = t;
    }
    for (const auto& [key, tmpl] : c.dynamic_labels) {
        std::vector<std::string> names;
        try {
            names = text::placeholders(tmpl);
        } catch (const Error& e) {
            throw Error(ErrorCode::parse_error, e.what(), c.upri.value + " " + key);
        }
        for (const auto& name : names)
            if (!labels.count(name))
                dangling("label template uses unknown thematic label '" + name + "'", c.upri.value + " " + key);
    }
    if (c.mind_map.hub_label.empty()) c.mind_map.hub_label = c.predicate_label;
    for (const auto& [pc, _] : c.mind_map.edge_labels)
        if (!c.position(pc)) dangling("mind map edge for unknown position", pc.value);
    for (const auto& p : c.positions)
        if (!c.mind_map.edge_labels.count(p.upri)) {
            std::string lower;
            for (char ch : p.thematic_label) lower += ch == '_' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            c.mind_map.edge_labels[p.upri] = lower;
        }
    for (const auto& t : c.import_templates) {
        for (const auto& col : t.columns)
            if (col.target != "subject" && !c.position(Upri(col.target)))
                dangling("import column targets unknown position", col.target);
        for (const auto& k : t.constants)
            if (k.target != "subject" && !c.position(Upri(k.target)))
                dangling("import constant targets unknown position", k.target);
    }
    synthesize_category_labels(c);
}

} // namespace

Specification load_spec(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorCode::parse_error, e.msg,
                    "line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1));
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    try {
        check_keys(root, {"application", "licenses", "ontology", "classes", "instances", "associations", "links",
                          "references", "starting_points"},
                   "specification");
        Specification spec;

        if (const auto app = root["application"]; app && !app.IsNull()) {
            check_keys(app, {"id", "label", "default_license", "default_logical_framework"}, "application");
            spec.application.upri = Upri(req_str(app, "id", "application"));
            spec.application.label = opt_str(app, "label");
            spec.application.default_license = Upri(opt_str(app, "default_license", "https://creativecommons.org/licenses/by/4.0/"));
            spec.application.default_logical_framework = Upri(opt_str(app, "default_logical_framework", vocab::term("RDF").value));
        } else {
            spec.application.upri = vocab::term("default-application");
            spec.application.default_license = Upri("https://creativecommons.org/licenses/by/4.0/");
            spec.application.default_logical_framework = vocab::term("RDF");
        }
        spec.graph.application_upri = spec.application.upri;

        if (const auto lic = root["licenses"]; lic && !lic.IsNull()) {
            check_keys(lic, {"more_restrictive_than"}, "licenses");
            each(lic, "more_restrictive_than", [&](const YAML::Node& pair) {
                if (!pair.IsSequence() || pair.size() != 2) fail(pair, "license order entries are [more, less] pairs");
                spec.licenses.add(Upri(str(pair[0], "license")), Upri(str(pair[1], "license")));
            });
        }

        each(root, "ontology", [&](const YAML::Node& n) {
            check_keys(n, {"id", "label", "parent", "parents"}, "ontology class");
            OntologyClass oc;
            oc.upri = Upri(req_str(n, "id", "ontology class"));
            oc.label = opt_str(n, "label");
            if (auto p = opt_upri(n, "parent")) oc.parents.push_back(*p);
            for (auto& p : upri_list(n, "parents")) oc.parents.push_back(p);
            spec.ontology.add(oc);
        });

        std::map<Upri, KgbbClass> declared;
        each(root, "classes", [&](const YAML::Node& n) {
            if (!n.IsMap()) fail(n, "class entries must be mappings");
            const auto kind = opt_str(n, "kind", "statement");
            KgbbClass c;
            if (kind == "statement") c = read_statement_class(n);
            else if (kind == "compound") c = read_compound_class(n);
            else fail(n["kind"], "class kind must be 'statement' or 'compound'");
            const auto id = class_upri(c);
            if (declared.count(id) || builtin::classes().count(id))
                throw Error(ErrorCode::duplicate_label, "class declared twice", id.value);
            declared.emplace(id, std::move(c));
        });

        each(root, "instances", [&](const YAML::Node& n) {
            check_keys(n, {"id", "class"}, "instance");
            const Upri id(req_str(n, "id", "instance"));
            const Upri cls(req_str(n, "class", "instance"));
            if (spec.graph.kgbb_instances.count(id)) throw Error(ErrorCode::duplicate_label, "instance declared twice", id.value);
            spec.graph.kgbb_instances[id] = cls;
        });
        each(root, "associations", [&](const YAML::Node& n) {
            check_keys(n, {"source", "target", "min_count", "max_count", "carry_over_subject_range_constraint_to"},
                       "association");
            AssociationNode a;
            a.source = Upri(req_str(n, "source", "association"));
            a.target = Upri(req_str(n, "target", "association"));
            a.min_count = count(n, "min_count");
            a.max_count = count(n, "max_count");
            a.carry_over_subject_range_constraint_to = upri_list(n, "carry_over_subject_range_constraint_to");
            spec.graph.association_nodes.push_back(a);
        });
        each(root, "links", [&](const YAML::Node& n) {
            check_keys(n, {"linking", "target", "min_count", "max_count", "use_as_subject", "if_object"}, "link");
            LinkNode l;
            l.linking = Upri(req_str(n, "linking", "link"));
            l.target = Upri(req_str(n, "target", "link"));
            l.min_count = count(n, "min_count");
            l.max_count = count(n, "max_count");
            l.use_as_subject = Upri(req_str(n, "use_as_subject", "link"));
            l.if_object = opt_upri(n, "if_object");
            spec.graph.link_nodes.push_back(l);
        });
        each(root, "references", [&](const YAML::Node& n) {
            check_keys(n, {"source", "target", "min_count", "max_count"}, "reference");
            ReferenceNode r;
            r.source = Upri(req_str(n, "source", "reference"));
            r.target = Upri(req_str(n, "target", "reference"));
            r.min_count = count(n, "min_count");
            r.max_count = count(n, "max_count");
            spec.graph.reference_nodes.push_back(r);
        });
        spec.graph.data_entry_starting_points = upri_list(root, "starting_points");

        for (const auto& [id, c] : declared)
            if (const auto& p = class_parent(c); p && !declared.count(*p))
                dangling("parent class is not declared", id.value + " -> " + p->value);

        spec.classes = resolve_inheritance(declared, spec.ontology);
        for (auto& [id, c] : spec.classes)
            if (auto* s = std::get_if<StatementKgbbClass>(&c)) finish_statement_class(*s);

        for (const auto& [inst, cls] : spec.graph.kgbb_instances) {
            if (!spec.classes.count(cls)) dangling("instance of undeclared KGBB class", inst.value + " -> " + cls.value);
        }
        auto need_instance = [&](const Upri& i, const std::string& role) {
            if (!spec.has_instance(i)) dangling(role + " names an undeclared KGBB instance", i.value);
        };
        for (const auto& a : spec.graph.association_nodes) {
            need_instance(a.source, "association source");
            need_instance(a.target, "association target");
            const auto* target = spec.statement_class_of_instance(a.target);
            for (const auto& pc : a.carry_over_subject_range_constraint_to)
                if (!target || !target->position(pc)) dangling("carry-over names a position the target lacks", pc.value);
        }
        for (const auto& l : spec.graph.link_nodes) {
            need_instance(l.linking, "link linking KGBB");
            need_instance(l.target, "link target");
            if (const auto* s = spec.statement_class_of_instance(l.linking); s && !s->position(l.use_as_subject))
                dangling("use_as_subject names a position the linking KGBB lacks", l.use_as_subject.value);
        }
        for (const auto& r : spec.graph.reference_nodes) {
            need_instance(r.source, "reference source");
            need_instance(r.target, "reference target");
        }
        for (const auto& sp : spec.graph.data_entry_starting_points) need_instance(sp, "starting point");
        return spec;
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::parse_error, e.msg,
                    "line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1));
    }
}

Specification load_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::not_found, "cannot open spec file", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str());
}

// ---- writing --------------------------------------------------------------

namespace {

void emit_number(YAML::Emitter& out, double d) {
    if (d == static_cast<double>(static_cast<long long>(d))) out << static_cast<long long>(d);
    else out << YAML::Precision(17) << d;
}

void emit_position(YAML::Emitter& out, const ObjectPositionClass& p) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << p.upri.value;
    out << YAML::Key << "label" << YAML::Value << p.thematic_label;
    if (!p.description.empty()) out << YAML::Key << "description" << YAML::Value << p.description;
    out << YAML::Key << "type" << YAML::Value << std::string(to_string(p.object_type));
    out << YAML::Key << "required" << YAML::Value << p.required;
    if (p.object_type == ObjectType::resource && p.resource_class) {
        out << YAML::Key << "constraint" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "class" << YAML::Value << p.resource_class->value << YAML::EndMap;
    } else if (p.literal) {
        out << YAML::Key << "constraint" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "datatype" << YAML::Value << std::string(to_string(p.literal->datatype));
        if (p.literal->min) {
            out << YAML::Key << "min" << YAML::Value;
            emit_number(out, *p.literal->min);
        }
        if (p.literal->max) {
            out << YAML::Key << "max" << YAML::Value;
            emit_number(out, *p.literal->max);
        }
        if (p.literal->pattern) out << YAML::Key << "pattern" << YAML::Value << YAML::DoubleQuoted << *p.literal->pattern;
        out << YAML::EndMap;
    }
    if (!p.logical_properties.empty()) {
        out << YAML::Key << "logical_properties" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto lp : p.logical_properties) out << std::string(to_string(lp));
        out << YAML::EndSeq;
    }
    if (!p.owl_property.empty()) out << YAML::Key << "owl_property" << YAML::Value << p.owl_property;
    out << YAML::EndMap;
}

void emit_upris(YAML::Emitter& out, const char* key, const std::vector<Upri>& xs) {
    if (xs.empty()) return;
    out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& x : xs) out << x.value;
    out << YAML::EndSeq;
}

void emit_access_template(YAML::Emitter& out, const AccessTemplate& t) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << t.upri.value;
    if (t.family) out << YAML::Key << "family" << YAML::Value << t.family->value;
    out << YAML::Key << "format" << YAML::Value << std::string(to_string(t.format));
    if (!t.mapping.empty()) {
        out << YAML::Key << "mapping" << YAML::Value << YAML::BeginSeq;
        for (const auto& m : t.mapping)
            out << YAML::BeginMap << YAML::Key << "source" << YAML::Value << m.source << YAML::Key << "variable"
                << YAML::Value << m.variable << YAML::EndMap;
        out << YAML::EndSeq;
    }
    if (!t.fresh_nodes.empty()) {
        out << YAML::Key << "fresh_nodes" << YAML::Value << YAML::BeginSeq;
        for (const auto& f : t.fresh_nodes)
            out << YAML::BeginMap << YAML::Key << "variable" << YAML::Value << f.variable << YAML::Key << "class"
                << YAML::Value << f.target_class.value << YAML::EndMap;
        out << YAML::EndSeq;
    }
    if (!t.pattern.empty()) {
        out << YAML::Key << "pattern" << YAML::Value << YAML::BeginSeq;
        for (const auto& e : t.pattern)
            out << YAML::BeginMap << YAML::Key << "from" << YAML::Value << e.from << YAML::Key << "predicate"
                << YAML::Value << e.predicate.value << YAML::Key << "to" << YAML::Value << e.to << YAML::EndMap;
        out << YAML::EndSeq;
    }
    if (t.logical_framework) out << YAML::Key << "logical_framework" << YAML::Value << t.logical_framework->value;
    emit_upris(out, "references", t.references);
    emit_upris(out, "curators", t.curators);
    if (!t.owl_properties.empty()) {
        out << YAML::Key << "owl_properties" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : t.owl_properties) {
            out << YAML::BeginMap;
            out << YAML::Key << "name" << YAML::Value << p.name;
            out << YAML::Key << "kind" << YAML::Value << (p.object_property ? "object" : "data");
            out << YAML::Key << "required" << YAML::Value << p.required;
            out << YAML::Key << "position" << YAML::Value << p.position.value;
            if (p.domain) out << YAML::Key << "domain" << YAML::Value << p.domain->value;
            out << YAML::Key << "range" << YAML::Value << p.range;
            if (!p.axioms.empty()) {
                out << YAML::Key << "axioms" << YAML::Value << YAML::Flow << YAML::BeginSeq;
                for (auto a : p.axioms) out << std::string(to_string(a));
                out << YAML::EndSeq;
            }
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
}

void emit_import_template(YAML::Emitter& out, const ImportTemplate& t) {
    out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << t.upri.value;
    if (!t.columns.empty()) {
        out << YAML::Key << "columns" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : t.columns) {
            out << YAML::BeginMap << YAML::Key << "column" << YAML::Value << c.column << YAML::Key << "target"
                << YAML::Value << c.target;
            if (c.kind) out << YAML::Key << "kind" << YAML::Value << std::string(to_string(*c.kind));
            if (c.resource_class) out << YAML::Key << "class" << YAML::Value << c.resource_class->value;
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    if (!t.constants.empty()) {
        out << YAML::Key << "constants" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : t.constants)
            out << YAML::BeginMap << YAML::Key << "target" << YAML::Value << c.target << YAML::Key << "value"
                << YAML::Value << c.value << YAML::EndMap;
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
}

void emit_statement(YAML::Emitter& out, const StatementKgbbClass& c) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << c.upri.value;
    out << YAML::Key << "kind" << YAML::Value << "statement";
    if (c.parent) out << YAML::Key << "parent" << YAML::Value << c.parent->value;
    out << YAML::Key << "label" << YAML::Value << c.label;
    if (!c.description.empty()) out << YAML::Key << "description" << YAML::Value << c.description;
    out << YAML::Key << "manages" << YAML::Value << c.manages.value;
    out << YAML::Key << "predicate_label" << YAML::Value << c.predicate_label;
    if (!c.predicate_definition.empty()) out << YAML::Key << "predicate_definition" << YAML::Value << c.predicate_definition;
    if (c.predicate) out << YAML::Key << "predicate" << YAML::Value << c.predicate->value;
    out << YAML::Key << "subject_label" << YAML::Value << c.subject_label;
    if (c.subject_constraint) out << YAML::Key << "subject_constraint" << YAML::Value << c.subject_constraint->value;
    if (c.lexical) out << YAML::Key << "lexical" << YAML::Value << true;
    out << YAML::Key << "positions" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : c.positions) emit_position(out, p);
    out << YAML::EndSeq;
    out << YAML::Key << "dynamic_labels" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : c.dynamic_labels) out << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
    out << YAML::EndMap;
    out << YAML::Key << "mind_map" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "hub" << YAML::Value << c.mind_map.hub_label;
    out << YAML::Key << "edges" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : c.mind_map.edge_labels) out << YAML::Key << k.value << YAML::Value << v;
    out << YAML::EndMap << YAML::EndMap;
    out << YAML::Key << "question" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "auxiliary" << YAML::Value << c.question.auxiliary;
    out << YAML::Key << "use_category_label" << YAML::Value << c.question.use_category_label;
    out << YAML::EndMap;
    if (!c.examples.empty()) {
        out << YAML::Key << "examples" << YAML::Value << YAML::BeginSeq;
        for (const auto& e : c.examples) out << YAML::DoubleQuoted << e;
        out << YAML::EndSeq;
    }
    if (!c.access_templates.empty()) {
        out << YAML::Key << "access_templates" << YAML::Value << YAML::BeginSeq;
        for (const auto& t : c.access_templates) emit_access_template(out, t);
        out << YAML::EndSeq;
    }
    if (!c.import_templates.empty()) {
        out << YAML::Key << "import_templates" << YAML::Value << YAML::BeginSeq;
        for (const auto& t : c.import_templates) emit_import_template(out, t);
        out << YAML::EndSeq;
    }
    emit_upris(out, "use_with_ontology", c.use_with_ontology);
    out << YAML::EndMap;
}

void emit_compound(YAML::Emitter& out, const CompoundKgbbClass& c) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << c.upri.value;
    out << YAML::Key << "kind" << YAML::Value << "compound";
    if (c.parent) out << YAML::Key << "parent" << YAML::Value << c.parent->value;
    out << YAML::Key << "label" << YAML::Value << c.label;
    if (!c.description.empty()) out << YAML::Key << "description" << YAML::Value << c.description;
    out << YAML::Key << "compound_kind" << YAML::Value << std::string(to_string(c.kind));
    if (c.subject_constraint) out << YAML::Key << "subject_constraint" << YAML::Value << c.subject_constraint->value;
    if (!c.display_templates.empty()) {
        out << YAML::Key << "display_templates" << YAML::Value << YAML::BeginSeq;
        for (const auto& t : c.display_templates) {
            out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << t.upri.value;
            out << YAML::Key << "sections" << YAML::Value << YAML::BeginSeq;
            for (const auto& s : t.sections) {
                out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << std::string(to_string(s.kind));
                if (!s.label.empty()) out << YAML::Key << "label" << YAML::Value << s.label;
                if (s.target) out << YAML::Key << "target" << YAML::Value << s.target->value;
                if (!s.placeholder.empty()) out << YAML::Key << "placeholder" << YAML::Value << s.placeholder;
                out << YAML::EndMap;
            }
            out << YAML::EndSeq << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
}

} // namespace

std::string classes_to_yaml(const std::vector<KgbbClass>& classes) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : classes) {
        if (const auto* s = std::get_if<StatementKgbbClass>(&c)) emit_statement(out, *s);
        else emit_compound(out, std::get<CompoundKgbbClass>(c));
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace kgbb
