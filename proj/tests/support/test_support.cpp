#include "test_support.hpp"

#include "kgbb/error.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#ifndef KGBB_DATA_DIR
#error "KGBB_DATA_DIR must point at the data directory"
#endif

namespace kgbb::testing {

namespace {

const std::vector<std::string> kNames = {"Anna", "Ben", "Chloe", "Dan", "Eve", "Finn", "Gia", "Hugo", "Ida", "Jon",
                                         "Kai", "Lea", "Max", "Nia", "Otto", "Pia", "Quinn", "Rosa", "Sam", "Tara"};
const std::vector<std::string> kCities = {"Berlin", "Rome", "Paris", "Vienna", "Lisbon", "Oslo", "Prague", "Madrid"};
const std::vector<std::string> kMonths = {"January", "February", "March",     "April",   "May",      "June",
                                          "July",    "August",   "September", "October", "November", "December"};

template <class T>
const T& pick(const std::vector<T>& xs, std::mt19937_64& rng) {
    return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

int roll(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string ordinal(int d) {
    const char* suffix = "th";
    if (d % 100 < 11 || d % 100 > 13) {
        if (d % 10 == 1) suffix = "st";
        else if (d % 10 == 2) suffix = "nd";
        else if (d % 10 == 3) suffix = "rd";
    }
    return std::to_string(d) + suffix;
}

std::string random_date(std::mt19937_64& rng) {
    const int y = roll(rng, 2018, 2021), m = roll(rng, 1, 12), d = roll(rng, 1, 28);
    char buf[32];
    switch (roll(rng, 0, 2)) {
    case 0:
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
        return buf;
    case 1:
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00:00Z", y, m, d, roll(rng, 0, 23));
        return buf;
    default: return ordinal(d) + " of " + kMonths[m - 1] + " " + std::to_string(y);
    }
}

// Named individuals in the store affiliated with a subclass of `cls`.
std::vector<Upri> named_of(const Specification& spec, const Store& store, const Upri& cls) {
    std::vector<Upri> out;
    for (const auto& [id, r] : store.resources)
        if (r.kind == ResourceKind::named_individual && r.class_affiliation &&
            spec.ontology.is_subclass_of(*r.class_affiliation, cls))
            out.push_back(id);
    return out;
}

ResourceRef named_ref(const Specification& spec, const Store& store, std::mt19937_64& rng, const Upri& cls,
                      const std::vector<std::string>& labels, double reuse = 0.7) {
    auto pool = named_of(spec, store, cls);
    if (!pool.empty() && coin(rng, reuse)) return ResourceRef::existing(pick(pool, rng));
    return ResourceRef::make(ResourceKind::named_individual, cls, pick(labels, rng) + " " + std::to_string(roll(rng, 1, 999)));
}

std::vector<Upri> live_units(const Store& store, const std::function<bool(const SemanticUnit&)>& pred) {
    std::vector<Upri> out;
    for (const auto& [id, u] : store.units)
        if (!meta_of(u).deleted() && pred(u)) out.push_back(id);
    return out;
}

CreateRequest base_request(const Upri& kgbb, std::mt19937_64& rng) {
    CreateRequest r;
    r.kgbb_instance = kgbb;
    r.provenance.creator = user(pick(std::vector<std::string>{"alice", "bob", "carol"}, rng));
    return r;
}

CreateRequest travel(const Specification& spec, const Store& store, std::mt19937_64& rng) {
    auto r = base_request(demo("travel"), rng);
    r.subject = named_ref(spec, store, rng, obo("NCBITaxon_9606"), kNames);
    r.inputs[demo("travel-destination")] = named_ref(spec, store, rng, obo("ENVO_00000856"), kCities);
    if (coin(rng)) r.inputs[demo("travel-departure")] = named_ref(spec, store, rng, obo("ENVO_00000856"), kCities);
    if (coin(rng)) r.inputs[demo("travel-transportation")] = named_ref(spec, store, rng, demo("Train"), {"train"}, 0.9);
    if (coin(rng, 0.7)) r.inputs[demo("travel-date")] = Literal{random_date(rng), Datatype::date_time};
    r.negated = coin(rng, 0.1);
    return r;
}

const std::vector<std::string> kParts = {"UBERON_0000033", "UBERON_0000970", "UBERON_0000964", "UBERON_0000972",
                                         "UBERON_0002398", "UBERON_0001463"};

CreateRequest has_part(const Specification& spec, const Store& store, std::mt19937_64& rng, bool with_subject) {
    auto r = base_request(demo("has-part"), rng);
    const auto part_cls = obo(pick(kParts, rng));
    if (with_subject) r.subject = named_ref(spec, store, rng, obo("NCBITaxon_1"), {"organism"}, 0.5);
    r.inputs[demo("has-part-part")] =
        ResourceRef::make(ResourceKind::named_individual, part_cls, spec.ontology.label_of(part_cls) + " " + std::to_string(roll(rng, 1, 999)));
    return r;
}

CreateRequest general_has_part(std::mt19937_64& rng) {
    auto r = base_request(demo("has-part"), rng);
    const auto part_cls = obo(pick(kParts, rng));
    switch (roll(rng, 0, 2)) {
    case 0:
        r.subject = ResourceRef::make(ResourceKind::some_instance, obo("NCBITaxon_1"), "");
        r.category_choice = coin(rng) ? Category::contingent : Category::prototypical;
        r.inputs[demo("has-part-part")] = ResourceRef::make(ResourceKind::some_instance, part_cls, "");
        break;
    case 1:
        r.subject = ResourceRef::make(ResourceKind::every_instance, obo("NCBITaxon_1"), "");
        r.inputs[demo("has-part-part")] = ResourceRef::make(ResourceKind::some_instance, part_cls, "");
        break;
    default:
        r.subject = ResourceRef::existing(obo("NCBITaxon_1"));
        r.inputs[demo("has-part-part")] = ResourceRef::existing(part_cls);
        break;
    }
    return r;
}

CreateRequest quality_request(std::mt19937_64& rng) {
    auto q = base_request(demo("quality"), rng);
    const bool weight = coin(rng, 0.7);
    q.inputs[demo("quality-quality")] = ResourceRef::make(ResourceKind::named_individual,
                                                          obo(weight ? "PATO_0000128" : "PATO_0000117"),
                                                          std::string(weight ? "weight " : "size ") + std::to_string(roll(rng, 1, 999)));
    return q;
}

CreateRequest weight_request(const Specification& spec, const Store& store, std::mt19937_64& rng) {
    auto w = base_request(demo("weight-measurement"), rng);
    const double v = roll(rng, 1, 5000) / 10.0;
    auto num = [](double x) {
        std::ostringstream ss;
        ss << x;
        return ss.str();
    };
    w.inputs[demo("weight-value")] = Literal{num(v), Datatype::float_};
    w.inputs[demo("weight-lower")] = Literal{num(v * 0.9), Datatype::float_};
    w.inputs[demo("weight-upper")] = Literal{num(v * 1.1), Datatype::float_};
    auto units = named_of(spec, store, obo("UO_0000000"));
    w.inputs[demo("weight-unit")] = units.empty() || coin(rng, 0.2)
                                        ? ResourceRef::make(ResourceKind::named_individual, obo(coin(rng) ? "UO_0000009" : "UO_0000021"),
                                                            coin(rng) ? "kilogram" : "gram")
                                        : ResourceRef::existing(pick(units, rng));
    return w;
}

bool is_statement_of(const SemanticUnit& u, const Upri& kgbb) {
    const auto* s = std::get_if<StatementUnit>(&u);
    return s && s->meta.kgbb_uri == kgbb;
}

bool is_compound_of(const SemanticUnit& u, const Upri& kgbb) {
    const auto* c = std::get_if<CompoundUnit>(&u);
    return c && c->meta.kgbb_uri == kgbb;
}

void one_op(Engine& e, std::mt19937_64& rng) {
    const auto& spec = e.spec();
    const auto snap = e.snapshot();
    const auto& store = *snap;
    switch (roll(rng, 0, 13)) {
    case 0:
    case 1:
    case 2: e.create_unit(travel(spec, store, rng)); return;
    case 3: {
        auto item = base_request(demo("material-entity-item"), rng);
        item.subject = named_ref(spec, store, rng, obo("NCBITaxon_1"), {"organism"}, 0.3);
        const auto id = e.create_unit(item);
        if (coin(rng)) e.add_associated_unit(id, has_part(spec, *e.snapshot(), rng, false));
        return;
    }
    case 4: {
        auto items = live_units(store, [](const SemanticUnit& u) { return is_compound_of(u, demo("material-entity-item")); });
        if (items.empty()) return;
        e.add_associated_unit(pick(items, rng), has_part(spec, store, rng, false));
        return;
    }
    case 5: e.create_unit(general_has_part(rng)); return;
    case 6: {
        auto m = base_request(demo("measurement"), rng);
        m.subject = named_ref(spec, store, rng, obo("BFO_0000040"), {"sample"}, 0.3);
        m.cascade_inputs.push_back(quality_request(rng));
        e.create_unit(m);
        return;
    }
    case 7: {
        auto qs = live_units(store, [](const SemanticUnit& u) { return is_statement_of(u, demo("quality")); });
        if (qs.empty()) return;
        e.create_linked_unit(pick(qs, rng), weight_request(spec, store, rng));
        return;
    }
    case 8: {
        auto ts = live_units(store, [](const SemanticUnit& u) { return is_statement_of(u, demo("travel")); });
        if (ts.empty()) return;
        const auto id = pick(ts, rng);
        Provenance p;
        p.creator = user("editor");
        if (coin(rng)) e.update_object_position(id, demo("travel-destination"), named_ref(spec, store, rng, obo("ENVO_00000856"), kCities), p);
        else e.update_object_position(id, demo("travel-date"), Literal{random_date(rng), Datatype::date_time}, p);
        return;
    }
    case 9: {
        auto all = live_units(store, [](const SemanticUnit& u) {
            return std::holds_alternative<StatementUnit>(u) || std::holds_alternative<CompoundUnit>(u);
        });
        if (all.empty()) return;
        e.create_version(pick(all, rng), user("curator"));
        return;
    }
    case 10: {
        auto all = live_units(store, [](const SemanticUnit& u) {
            return std::holds_alternative<StatementUnit>(u) || std::holds_alternative<CompoundUnit>(u);
        });
        if (all.empty()) return;
        e.soft_delete(pick(all, rng), user("curator"), coin(rng, 0.3));
        return;
    }
    case 11: {
        Provenance p;
        p.creator = user();
        e.add_question(random_question(store, rng), p);
        return;
    }
    case 12: {
        std::vector<Upri> qs;
        for (const auto& [id, u] : store.units)
            if (std::holds_alternative<QuestionUnit>(u)) qs.push_back(id);
        if (qs.size() < 2) return;
        CompoundQuestionUnit cq;
        cq.expression = coin(rng) ? QuestionExpr::all_of({QuestionExpr::leaf(pick(qs, rng)), QuestionExpr::leaf(pick(qs, rng))})
                                  : QuestionExpr::any_of({QuestionExpr::leaf(pick(qs, rng)), QuestionExpr::leaf(pick(qs, rng))});
        Provenance p;
        p.creator = user();
        e.add_compound_question(cq, p);
        return;
    }
    default: {
        const bool dataset = coin(rng);
        auto c = base_request(demo(dataset ? "dataset" : "person-item"), rng);
        if (!dataset) c.subject = named_ref(spec, store, rng, obo("NCBITaxon_9606"), kNames);
        const auto id = e.create_unit(c);
        const auto after = e.snapshot();
        auto t = travel(spec, *after, rng);
        if (!dataset) t.subject = ResourceRef::existing(*after->compound(id)->meta.subject);
        e.add_associated_unit(id, t);
        return;
    }
    }
}

bool resource_oracle(const Specification& spec, const Store& store, const Upri& value, const Binding& b) {
    if (const auto* n = std::get_if<NamedIndividualBinding>(&b)) return n->resource == value;
    const auto& w = std::get<WildcardBinding>(b);
    std::optional<Upri> cls;
    auto it = store.resources.find(value);
    if (it != store.resources.end()) {
        if (w.kind == WildcardKind::class_ && it->second.kind != ResourceKind::class_) return false;
        cls = it->second.kind == ResourceKind::class_ ? std::optional<Upri>(value) : it->second.class_affiliation;
    } else if (spec.ontology.find(value)) {
        cls = value;
    }
    return cls && class_closure(spec, *cls).count(w.class_upri);
}

bool literal_oracle(const Literal& v, const LiteralSpec& s) {
    auto temporal = [](Datatype d) { return d == Datatype::date || d == Datatype::date_time; };
    if (!(v.datatype == s.datatype || (temporal(v.datatype) && temporal(s.datatype)))) return false;
    if (s.equals && v.value != *s.equals) return false;
    if (s.min || s.max) {
        if (v.datatype != Datatype::float_ && v.datatype != Datatype::integer) return false;
        const double x = std::stod(v.value);
        if (s.min && x < *s.min) return false;
        if (s.max && x > *s.max) return false;
    }
    if (s.year) {
        if (!temporal(v.datatype)) return false;
        auto y = oracle_year(v.value);
        if (!y || *y != *s.year) return false;
    }
    if (s.pattern && !std::regex_match(v.value, std::regex(*s.pattern))) return false;
    return true;
}

} // namespace

std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(KGBB_DATA_DIR) / rel; }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::shared_ptr<const Specification> demo_spec() {
    static const auto s = std::make_shared<const Specification>(load_spec_file(data_path("specs/demo.yaml")));
    return s;
}

std::shared_ptr<const Specification> loop_spec() {
    static const auto s = std::make_shared<const Specification>(load_spec_file(data_path("specs/partonomy_loop.yaml")));
    return s;
}

EngineOptions deterministic_options(std::uint64_t seed) {
    EngineOptions o;
    auto tick = std::make_shared<std::int64_t>(1704067200LL * 1000000);  // 2024-01-01T00:00:00Z
    o.clock = [tick] {
        *tick += 1000;
        return format_timestamp(*tick);
    };
    o.seed = seed;
    return o;
}

Upri demo(const std::string& local) { return Upri("https://example.org/demo/" + local); }
Upri obo(const std::string& local) { return Upri("http://purl.obolibrary.org/obo/" + local); }
Upri user(const std::string& name) { return Upri("https://example.org/users/" + name); }

CreateRequest golden_travel_request() {
    CreateRequest r;
    r.kgbb_instance = demo("travel");
    r.subject = ResourceRef::make(ResourceKind::named_individual, obo("NCBITaxon_9606"), "Anna");
    r.inputs[demo("travel-transportation")] = ResourceRef::make(ResourceKind::named_individual, demo("Train"), "train");
    r.inputs[demo("travel-departure")] = ResourceRef::make(ResourceKind::named_individual, obo("ENVO_00000856"), "Berlin");
    r.inputs[demo("travel-destination")] = ResourceRef::make(ResourceKind::named_individual, obo("ENVO_00000856"), "Rome");
    r.inputs[demo("travel-date")] = Literal{"5th of August 2019", Datatype::date_time};
    r.provenance.creator = user();
    return r;
}

OpStats random_ops(Engine& e, std::mt19937_64& rng, std::size_t n) {
    OpStats s;
    for (std::size_t i = 0; i < n; ++i) {
        ++s.attempted;
        try {
            one_op(e, rng);
            ++s.succeeded;
        } catch (const Error&) {
        }
    }
    return s;
}

void grow_travel_store(Engine& e, std::mt19937_64& rng, std::size_t units) {
    for (std::size_t guard = 0; e.snapshot()->units.size() < units && guard < units * 4; ++guard) {
        try {
            const auto snap = e.snapshot();
            if (coin(rng, 0.85)) e.create_unit(travel(e.spec(), *snap, rng));
            else one_op(e, rng);
        } catch (const Error&) {
        }
    }
}

QuestionUnit random_question(const Store& store, std::mt19937_64& rng) {
    const auto& spec = *demo_spec();
    QuestionUnit q;
    auto wildcard = [&](const std::vector<std::string>& classes) -> Binding {
        const auto kind = pick(std::vector<WildcardKind>{WildcardKind::some_instance, WildcardKind::some_instance,
                                                         WildcardKind::every_instance, WildcardKind::class_},
                               rng);
        return WildcardBinding{kind, Upri(pick(classes, rng))};
    };
    auto named = [&](const Upri& cls) -> std::optional<Binding> {
        auto pool = named_of(spec, store, cls);
        if (pool.empty()) return std::nullopt;
        return NamedIndividualBinding{pick(pool, rng)};
    };
    const std::vector<std::string> places = {obo("ENVO_00000856").value, obo("BFO_0000029").value, obo("BFO_0000040").value};
    const int which = roll(rng, 0, 9);
    if (which < 6) {
        q.based_on_statement_kgbb = demo("travel");
        switch (roll(rng, 0, 3)) {
        case 0: break;
        case 1:
            if (auto b = named(obo("NCBITaxon_9606"))) q.subject_binding = *b;
            break;
        case 2: q.subject_binding = wildcard({obo("NCBITaxon_9606").value, obo("NCBITaxon_1").value, obo("UBERON_0000033").value}); break;
        default:
            if (auto b = named(obo("NCBITaxon_9606"))) q.subject_binding = *b;
            break;
        }
        for (const auto& pc : {demo("travel-destination"), demo("travel-departure")}) {
            if (!coin(rng, 0.4)) continue;
            if (coin(rng)) {
                if (auto b = named(obo("ENVO_00000856"))) q.bindings[pc] = *b;
            } else {
                q.bindings[pc] = wildcard(places);
            }
        }
        if (coin(rng, 0.3)) {
            if (coin(rng)) {
                if (auto b = named(demo("Train"))) q.bindings[demo("travel-transportation")] = *b;
            } else {
                q.bindings[demo("travel-transportation")] = wildcard({demo("Transportation").value, demo("Train").value});
            }
        }
        if (coin(rng, 0.4)) {
            LiteralSpec l;
            l.datatype = coin(rng, 0.8) ? Datatype::date_time : Datatype::date;
            switch (roll(rng, 0, 2)) {
            case 0: {
                std::vector<std::string> dates;
                for (const auto& [_, u] : store.units)
                    if (const auto* s = std::get_if<StatementUnit>(&u))
                        if (const auto* p = s->current(demo("travel-date")))
                            dates.push_back(std::get<Literal>(p->input).value);
                l.equals = dates.empty() ? random_date(rng) : pick(dates, rng);
                break;
            }
            case 1: l.year = roll(rng, 2017, 2022); break;
            default: l.pattern = ".*" + pick(kMonths, rng) + ".*"; break;
            }
            q.bindings[demo("travel-date")] = l;
        }
    } else if (which < 8) {
        q.based_on_statement_kgbb = demo("has-part");
        if (coin(rng, 0.4)) q.subject_binding = wildcard({obo("NCBITaxon_1").value, obo("BFO_0000040").value});
        else if (coin(rng, 0.3)) {
            if (auto b = named(obo("NCBITaxon_1"))) q.subject_binding = *b;
        }
        if (coin(rng, 0.7)) {
            std::vector<std::string> parts;
            for (const auto& p : kParts) parts.push_back(obo(p).value);
            parts.push_back(obo("BFO_0000040").value);
            q.bindings[demo("has-part-part")] = wildcard(parts);
        }
    } else {
        q.based_on_statement_kgbb = demo("weight-measurement");
        if (coin(rng, 0.6)) {
            LiteralSpec l;
            l.datatype = Datatype::float_;
            l.min = roll(rng, 0, 300);
            if (coin(rng)) l.max = *l.min + roll(rng, 10, 300);
            q.bindings[demo("weight-value")] = l;
        }
        if (coin(rng, 0.4)) q.bindings[demo("weight-unit")] = wildcard({obo("UO_0000000").value, obo("UO_0000009").value});
    }
    return q;
}

std::set<Upri> class_closure(const Specification& spec, const Upri& cls) {
    std::set<Upri> out{cls};
    std::vector<Upri> todo{cls};
    while (!todo.empty()) {
        const auto cur = todo.back();
        todo.pop_back();
        if (const auto* c = spec.ontology.find(cur))
            for (const auto& p : c->parents)
                if (out.insert(p).second) todo.push_back(p);
    }
    return out;
}

std::vector<Upri> oracle_answer(const Specification& spec, const Store& store, const QuestionUnit& q) {
    std::vector<Upri> out;
    for (const auto& [id, u] : store.units) {
        const auto* s = std::get_if<StatementUnit>(&u);
        if (!s || s->meta.deleted_by || s->meta.kgbb_uri != q.based_on_statement_kgbb) continue;
        if (q.subject_binding && !resource_oracle(spec, store, *s->meta.subject, *q.subject_binding)) continue;
        bool ok = true;
        for (const auto& [pc, b] : q.bindings) {
            const ObjectPositionInstance* cur = nullptr;
            for (const auto& p : s->positions)
                if (p.current_version && p.position_class == pc) cur = &p;
            if (!cur) {
                ok = false;
                break;
            }
            if (const auto* l = std::get_if<LiteralSpec>(&b)) {
                const auto* v = std::get_if<Literal>(&cur->input);
                ok = v && literal_oracle(*v, *l);
            } else {
                const auto* v = std::get_if<Upri>(&cur->input);
                ok = v && resource_oracle(spec, store, *v, b);
            }
            if (!ok) break;
        }
        if (ok) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool oracle_boolean(const QuestionUnit& q) {
    auto bound = [](const Binding& b) {
        if (std::holds_alternative<NamedIndividualBinding>(b)) return true;
        const auto* l = std::get_if<LiteralSpec>(&b);
        return l && l->equals && !l->min && !l->max && !l->year && !l->pattern;
    };
    if (!q.subject_binding || !bound(*q.subject_binding)) return false;
    return std::all_of(q.bindings.begin(), q.bindings.end(), [&](const auto& kv) { return bound(kv.second); });
}

std::optional<int> oracle_year(const std::string& value) {
    static const std::regex iso(R"(^(\d{4})-\d{2}-\d{2}.*$)");
    static const std::regex longform(R"(^\d{1,2}(st|nd|rd|th) of [A-Z][a-z]+ (\d{4})$)");
    std::smatch m;
    if (std::regex_match(value, m, iso)) return std::stoi(m[1].str());
    if (std::regex_match(value, m, longform)) return std::stoi(m[2].str());
    return std::nullopt;
}

} // namespace kgbb::testing
