#include "kgbb/query.hpp"

#include "kgbb/error.hpp"
#include "kgbb/templates.hpp"
#include "kgbb/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace kgbb {

std::string_view to_string(AnswerMode m) { return m == AnswerMode::boolean ? "boolean" : "list"; }

namespace {

const StatementKgbbClass& question_class(const Specification& spec, const QuestionUnit& q) {
    const auto* cls = spec.statement_class_of_instance(q.based_on_statement_kgbb);
    if (!cls) throw Error(ErrorCode::unknown_instance, "question must be based on a statement KGBB",
                          q.based_on_statement_kgbb.value);
    return *cls;
}

bool is_resource_binding(const Binding& b) { return !std::holds_alternative<LiteralSpec>(b); }

bool fully_specified(const Binding& b) {
    if (std::holds_alternative<NamedIndividualBinding>(b)) return true;
    if (const auto* l = std::get_if<LiteralSpec>(&b)) return l->fully_specified();
    return false;
}

bool resource_matches(const Specification& spec, const Store& store, const Upri& value, const Binding& b) {
    if (const auto* n = std::get_if<NamedIndividualBinding>(&b)) return value == n->resource;
    const auto* w = std::get_if<WildcardBinding>(&b);
    if (!w) return false;
    std::optional<Upri> cls;
    if (const auto* r = store.resource(value)) {
        cls = r->kind == ResourceKind::class_ ? std::optional<Upri>(r->upri) : r->class_affiliation;
        if (w->kind == WildcardKind::class_ && r->kind != ResourceKind::class_) return false;
    } else if (spec.ontology.contains(value)) {
        cls = value;
    }
    return cls && spec.ontology.is_subclass_of(*cls, w->class_upri);
}

bool literal_matches(const Literal& value, const LiteralSpec& spec) {
    if (!datatypes_compatible(value.datatype, spec.datatype)) return false;
    if (spec.equals && value.value != *spec.equals) return false;
    if (spec.min || spec.max) {
        auto n = literal_numeric(value);
        if (!n) return false;
        if (spec.min && *n < *spec.min) return false;
        if (spec.max && *n > *spec.max) return false;
    }
    if (spec.year) {
        auto y = literal_year(value);
        if (!y || *y != *spec.year) return false;
    }
    if (spec.pattern && !std::regex_match(value.value, std::regex(*spec.pattern))) return false;
    return true;
}

} // namespace

void validate_question(const Specification& spec, const QuestionUnit& q) {
    const auto& cls = question_class(spec, q);
    if (q.subject_binding && !is_resource_binding(*q.subject_binding))
        throw Error(ErrorCode::binding_type_mismatch, "the subject binding must be a resource", cls.subject_label);
    for (const auto& [pc, b] : q.bindings) {
        const auto* pos = cls.position(pc);
        if (!pos) throw Error(ErrorCode::invalid_argument, "binding names an unknown position", pc.value);
        const bool wants_resource = pos->object_type == ObjectType::resource;
        if (wants_resource != is_resource_binding(b))
            throw Error(ErrorCode::binding_type_mismatch,
                        pos->thematic_label + (wants_resource ? " takes a resource binding" : " takes a literal binding"),
                        pc.value);
        if (const auto* l = std::get_if<LiteralSpec>(&b); l && pos->literal &&
                                                          !datatypes_compatible(l->datatype, pos->literal->datatype))
            throw Error(ErrorCode::binding_type_mismatch,
                        pos->thematic_label + " holds " + std::string(to_string(pos->literal->datatype)) + " values",
                        pc.value);
    }
}

AnswerMode answer_mode(const QuestionUnit& q) {
    if (!q.subject_binding || !fully_specified(*q.subject_binding)) return AnswerMode::list;
    for (const auto& [_, b] : q.bindings)
        if (!fully_specified(b)) return AnswerMode::list;
    return AnswerMode::boolean;
}

BuiltQuestion build_question(const Specification& spec, const Upri& kgbb, std::optional<Binding> subject_binding,
                             std::map<Upri, Binding> bindings) {
    BuiltQuestion out;
    out.question.based_on_statement_kgbb = kgbb;
    out.question.subject_binding = std::move(subject_binding);
    out.question.bindings = std::move(bindings);
    validate_question(spec, out.question);
    out.mode = answer_mode(out.question);
    return out;
}

bool statement_matches(const Specification& spec, const Store& store, const StatementUnit& unit, const QuestionUnit& q) {
    if (unit.meta.deleted() || unit.meta.kgbb_uri != q.based_on_statement_kgbb) return false;
    if (q.subject_binding && !resource_matches(spec, store, unit.subject(), *q.subject_binding)) return false;
    for (const auto& [pc, b] : q.bindings) {
        const auto* p = unit.current(pc);
        if (!p) return false;
        if (const auto* l = std::get_if<LiteralSpec>(&b)) {
            const auto* v = std::get_if<Literal>(&p->input);
            if (!v || !literal_matches(*v, *l)) return false;
        } else {
            const auto* v = std::get_if<Upri>(&p->input);
            if (!v || !resource_matches(spec, store, *v, b)) return false;
        }
    }
    return true;
}

QuestionResult execute_question(const Specification& spec, const Store& store, const QuestionUnit& q) {
    QuestionResult r;
    r.mode = answer_mode(q);
    for (const auto& [id, u] : store.units)
        if (const auto* s = std::get_if<StatementUnit>(&u); s && statement_matches(spec, store, *s, q)) r.units.push_back(id);
    return r;  // map order is already sorted by IRI
}

std::set<Upri> execute_compound(const Specification& spec, const Store& store, const QuestionExpr& expr) {
    if (expr.op == QuestionExpr::Op::leaf) {
        const auto* u = store.find(expr.question);
        const auto* q = u ? std::get_if<QuestionUnit>(u) : nullptr;
        if (!q) throw Error(ErrorCode::not_found, "no such question unit", expr.question.value);
        auto r = execute_question(spec, store, *q);
        return {r.units.begin(), r.units.end()};
    }
    if (expr.operands.empty()) throw Error(ErrorCode::invalid_argument, "empty AND/OR node");
    auto acc = execute_compound(spec, store, expr.operands.front());
    for (std::size_t i = 1; i < expr.operands.size(); ++i) {
        auto next = execute_compound(spec, store, expr.operands[i]);
        std::set<Upri> out;
        if (expr.op == QuestionExpr::Op::all_of)
            std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(), std::inserter(out, out.end()));
        else
            std::set_union(acc.begin(), acc.end(), next.begin(), next.end(), std::inserter(out, out.end()));
        acc = std::move(out);
    }
    return acc;
}

std::set<Upri> execute_compound(const Specification& spec, const Store& store, const CompoundQuestionUnit& cq) {
    return execute_compound(spec, store, cq.expression);
}

namespace {

std::string class_text(const Specification& spec, const Store& store, const Upri& cls) {
    return resource_label(spec, store, cls);
}

std::string binding_text(const Specification& spec, const Store& store, const Binding& b) {
    if (const auto* n = std::get_if<NamedIndividualBinding>(&b)) return resource_label(spec, store, n->resource);
    if (const auto* w = std::get_if<WildcardBinding>(&b)) {
        const auto label = class_text(spec, store, w->class_upri);
        switch (w->kind) {
        case WildcardKind::some_instance: return "some" + text::pascal_case(label);
        case WildcardKind::every_instance: return "every" + text::pascal_case(label);
        case WildcardKind::class_: return label;
        }
    }
    const auto& l = std::get<LiteralSpec>(b);
    if (l.equals) return *l.equals;
    std::string name = text::upper_first(std::string(to_string(l.datatype)));
    std::vector<std::string> parts;
    if (l.year) parts.push_back("year" + std::to_string(*l.year));
    auto num = [](double d) {
        std::string s = std::to_string(d);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    if (l.min) parts.push_back("min" + num(*l.min));
    if (l.max) parts.push_back("max" + num(*l.max));
    if (l.pattern) parts.push_back("pattern " + *l.pattern);
    std::string out = name + "[";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out + "]";
}

} // namespace

std::string render_question_label(const Specification& spec, const Store& store, const QuestionUnit& q) {
    const auto& cls = question_class(spec, q);
    std::string tmpl;
    if (cls.question.use_category_label) tmpl = category_label_template(cls, Category::assertional);
    else if (auto it = cls.dynamic_labels.find("default"); it != cls.dynamic_labels.end()) tmpl = it->second;

    auto pieces = text::parse_label_template(tmpl);
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (!pieces[i].placeholder || pieces[i].value != cls.subject_label || pieces[i + 1].placeholder) continue;
        auto& lit = pieces[i + 1].value;
        const auto words = text::split_words(lit);
        if (!words.empty()) {
            const auto at = lit.find(words.front());
            lit = lit.substr(0, at) + text::base_form(words.front()) + lit.substr(at + words.front().size());
        }
        break;
    }

    std::map<std::string, std::string> values;
    values[cls.subject_label] = q.subject_binding ? binding_text(spec, store, *q.subject_binding) : cls.subject_label;
    for (const auto& pos : cls.positions) {
        auto it = q.bindings.find(pos.upri);
        if (it != q.bindings.end()) values[pos.thematic_label] = binding_text(spec, store, it->second);
        else if (pos.required) values[pos.thematic_label] = pos.thematic_label;
    }
    auto body = fill_template(text::join_template(pieces), values, cls.subject_label, cls.predicate_label, {});
    if (!pieces.empty() && !pieces.front().placeholder) body = text::lower_first(body);
    return cls.question.auxiliary + " " + body + "?";
}

} // namespace kgbb
