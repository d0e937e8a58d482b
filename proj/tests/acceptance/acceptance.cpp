// Acceptance suite: one PASS/FAIL line per criterion, with its wall-clock
// limit. Exit status is nonzero when any criterion fails.

#include "kgbb/backends.hpp"
#include "kgbb/error.hpp"
#include "kgbb/json.hpp"
#include "kgbb/query.hpp"
#include "kgbb/templates.hpp"
#include "test_support.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

using namespace kgbb;
using namespace kgbb::testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
};

std::shared_ptr<Engine> fresh_engine(std::shared_ptr<const Specification> spec, std::uint64_t seed) {
    return std::make_shared<Engine>(std::move(spec), Store{}, deterministic_options(seed));
}

// ---- 1 --------------------------------------------------------------------

Outcome golden_label() {
    Outcome o;
    auto e = fresh_engine(demo_spec(), 1);
    const auto id = e->create_unit(golden_travel_request());
    const auto store = e->snapshot();
    const std::string want = "Anna travels by train from Berlin to Rome on the 5th of August 2019";
    const auto got = render_dynamic_label(e->spec(), *store, *store->statement(id));
    o.require(got == want, "rendered '" + got + "'");
    o.require(store->statement(id)->meta.label == want, "stored label '" + store->statement(id)->meta.label + "'");
    return o;
}

// ---- 2 --------------------------------------------------------------------

Outcome golden_query() {
    Outcome o;
    auto e = fresh_engine(demo_spec(), 2);
    const auto id = e->create_unit(golden_travel_request());
    Provenance p;
    p.creator = user();
    e->update_object_position(id, demo("travel-destination"),
                              ResourceRef::make(ResourceKind::named_individual, obo("ENVO_00000856"), "Paris"), p);
    e->create_unit(golden_travel_request());
    const auto store = e->snapshot();

    const auto q = generate_membership_query(id, MembershipKind::statement, QueryLanguage::cypher);
    const std::string want = "MATCH (n {current_version:\"true\"}) WHERE (\"" + id.value + "\" IN n.statementUnitURI) RETURN n";
    o.require(q == want, "query text '" + q + "'");

    // Evaluated against the property-graph export, the query returns exactly
    // the unit's current position nodes.
    std::set<std::string> expected;
    for (const auto& pos : store->statement(id)->positions)
        if (pos.current_version) expected.insert(pos.upri.value);
    const auto hits = run_cypher(export_pg(*store), q);
    o.require(std::set<std::string>(hits.begin(), hits.end()) == expected,
              "cypher returned " + std::to_string(hits.size()) + " nodes, expected " + std::to_string(expected.size()));
    o.require(hits.size() == expected.size(), "duplicate nodes in cypher result");
    return o;
}

// ---- 3 --------------------------------------------------------------------

std::string strip_markup(std::string s) {
    s = std::regex_replace(s, std::regex(R"(\{([A-Z_]+)\})"), "$1");
    return std::regex_replace(s, std::regex(R"(\*)"), "");
}

Outcome category_labels() {
    Outcome o;
    const auto& spec = *demo_spec();
    const auto* cls = spec.statement_class_of_instance(demo("has-part"));
    const std::vector<std::pair<Category, std::string>> expected = {
        {Category::assertional, "This *SUBJECT* has part this *PART*"},
        {Category::contingent, "A *SUBJECT* can have part some *PART*"},
        {Category::prototypical, "A *SUBJECT* typically has part some *PART*"},
        {Category::universal, "Every *SUBJECT* necessarily has part some *PART*"},
    };
    for (const auto& [cat, text] : expected) {
        const auto got = category_label_template(*cls, cat);
        o.require(strip_markup(got) == strip_markup(text), std::string(to_string(cat)) + ": '" + got + "'");
    }

    // Rendered on stored units, placeholders take the resource labels.
    auto e = fresh_engine(demo_spec(), 3);
    auto make = [&](ResourceKind sk, ResourceKind ok_kind, std::optional<Category> choice) {
        CreateRequest r;
        r.kgbb_instance = demo("has-part");
        r.provenance.creator = user();
        r.category_choice = choice;
        r.subject = ResourceRef::make(sk, obo("NCBITaxon_1"), sk == ResourceKind::named_individual ? "organism" : "");
        r.inputs[demo("has-part-part")] = ResourceRef::make(ok_kind, obo("UBERON_0000033"), ok_kind == ResourceKind::named_individual ? "head" : "");
        return e->create_unit(r);
    };
    const std::vector<std::pair<Upri, std::string>> rendered = {
        {make(ResourceKind::named_individual, ResourceKind::named_individual, std::nullopt), "This organism has part this head"},
        {make(ResourceKind::some_instance, ResourceKind::some_instance, Category::contingent), "An organism can have part some head"},
        {make(ResourceKind::some_instance, ResourceKind::some_instance, Category::prototypical),
         "An organism typically has part some head"},
        {make(ResourceKind::every_instance, ResourceKind::some_instance, std::nullopt), "Every organism necessarily has part some head"},
    };
    const auto store = e->snapshot();
    for (const auto& [id, want] : rendered) {
        const auto got = render_category_label(spec, *store, *store->statement(id));
        o.require(got == want, "rendered '" + got + "', expected '" + want + "'");
    }
    return o;
}

// ---- 4 --------------------------------------------------------------------

Outcome round_trip() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / "kgbb_acceptance_tables";
    std::size_t max_units = 0, kinds_seen = 0;
    std::set<std::string> kinds;
    for (std::uint64_t i = 0; i < 100 && o.ok; ++i) {
        auto e = fresh_engine(demo_spec(), 1000 + i);
        std::mt19937_64 rng(1000 + i);
        const std::size_t target = 20 + (i * 173) % 170;
        for (std::size_t guard = 0; e->snapshot()->units.size() < target && guard < 4 * target; ++guard) random_ops(*e, rng, 1);
        const auto store = e->snapshot();
        max_units = std::max(max_units, store->units.size());
        for (const auto& [_, u] : store->units) kinds.insert(std::string(unit_kind_name(u)));
        const std::string tag = "store " + std::to_string(i) + ": ";
        o.require(store->units.size() <= 200, tag + "too many units");

        o.require(import_trig(export_trig(*store)) == *store, tag + "trig round trip differs");
        o.require(import_pg_json(export_pg_json(*store)) == *store, tag + "pg-json round trip differs");
        o.require(import_tables(export_tables(*store)) == *store, tag + "tables round trip differs");
        if (i % 10 == 0) {
            std::filesystem::remove_all(dir);
            save_store(*store, ExportFormat::tables, dir);
            o.require(load_store(ExportFormat::tables, dir) == *store, tag + "tables directory round trip differs");
        }
    }
    std::filesystem::remove_all(dir);
    kinds_seen = kinds.size();
    o.require(kinds_seen == 4, "only " + std::to_string(kinds_seen) + " unit kinds generated");
    if (o.ok) o.detail = "largest store " + std::to_string(max_units) + " units";
    return o;
}

// ---- 5 --------------------------------------------------------------------

// Independent of check_invariants: recount owners of every data triple and
// current instances per (unit, position class).
std::string partition_violation(const Store& store) {
    std::map<Triple, int> owners;
    for (const auto& [id, u] : store.units) {
        const auto* s = std::get_if<StatementUnit>(&u);
        if (!s) continue;
        std::set<Triple> mine;
        for (const auto& t : data_graph(*s)) mine.insert(t);
        for (const auto& t : mine) ++owners[t];
        std::map<Upri, int> current;
        for (const auto& p : s->positions)
            if (p.current_version) ++current[p.position_class];
        for (const auto& [pc, n] : current)
            if (n > 1) return id.value + " has " + std::to_string(n) + " current instances of " + pc.value;
    }
    for (const auto& [t, n] : owners)
        if (n != 1) return "triple with subject " + t.subject.value + " owned by " + std::to_string(n) + " units";
    return {};
}

Outcome partition_fuzz() {
    Outcome o;
    std::size_t total_ok = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 10 && o.ok; ++seed) {
        auto e = fresh_engine(demo_spec(), 5000 + seed);
        std::mt19937_64 rng(5000 + seed);
        for (int op = 0; op < 500 && o.ok; ++op) {
            auto s = random_ops(*e, rng, 1);
            total += s.attempted;
            total_ok += s.succeeded;
            // Every step of the first sequence is checked; the rest at the end.
            if (seed == 0 || op == 499) {
                const auto store = e->snapshot();
                const auto issues = check_invariants(*store);
                o.require(issues.empty(), "seed " + std::to_string(seed) + " op " + std::to_string(op) + ": " +
                                              (issues.empty() ? "" : issues.front()));
                const auto v = partition_violation(*store);
                o.require(v.empty(), "seed " + std::to_string(seed) + " op " + std::to_string(op) + ": " + v);
            }
        }
    }
    o.require(total_ok * 2 > total, "fewer than half of the random operations succeeded");
    if (o.ok) o.detail = std::to_string(total_ok) + "/" + std::to_string(total) + " ops applied";
    return o;
}

// ---- 6 --------------------------------------------------------------------

std::string view_text(const UnitView& v) {
    json j = unit_to_json(v.unit);
    json g = json::array();
    for (const auto& t : v.data_graph) g.push_back({t.subject.value, t.predicate.value, object_to_json(t.object)});
    j["dataGraph"] = g;
    return j.dump();
}

Outcome versioning_replay() {
    Outcome o;
    auto e = fresh_engine(demo_spec(), 6);
    const auto& spec = e->spec();
    Provenance p;
    p.creator = user("editor");
    const auto id = e->create_unit(golden_travel_request());
    const auto v1 = e->create_version(id, user("curator"));
    const auto snap1 = view_text(e->read_unit(id, v1));
    e->update_object_position(id, demo("travel-destination"),
                              ResourceRef::make(ResourceKind::named_individual, obo("ENVO_00000856"), "Paris"), p);
    const auto v2 = e->create_version(id, user("curator"));
    const auto snap2 = view_text(e->read_unit(id, v2));
    e->update_object_position(id, demo("travel-date"), Literal{"2020-02-02", Datatype::date_time}, p);
    e->soft_delete(id, user("curator"));

    const auto store = e->snapshot();
    o.require(view_text(read_unit(spec, *store, id, v1, true)) == snap1, "view at v1 changed");
    o.require(view_text(read_unit(spec, *store, id, v2, true)) == snap2, "view at v2 changed");
    o.require(snap1 != snap2, "v1 and v2 views are identical");
    const auto at1 = read_unit(spec, *store, id, v1, true);
    const auto at2 = read_unit(spec, *store, id, v2, true);
    o.require(std::get<StatementUnit>(at1.unit).meta.label == "Anna travels by train from Berlin to Rome on the 5th of August 2019",
              "v1 label '" + std::get<StatementUnit>(at1.unit).meta.label + "'");
    o.require(std::get<StatementUnit>(at2.unit).meta.label == "Anna travels by train from Berlin to Paris on the 5th of August 2019",
              "v2 label '" + std::get<StatementUnit>(at2.unit).meta.label + "'");
    o.require(store->versions.at(v2).previous_version == v1, "v2.previous_version is not v1");
    o.require(!store->versions.at(v1).previous_version, "v1 has a predecessor");

    const auto& meta = std::get<StatementUnit>(store->units.at(id)).meta;
    o.require(meta.deleted_by == user("curator") && meta.deletion_date.has_value(), "deletion stamps missing");
    const auto live = read_unit(spec, *store, id, std::nullopt, true);
    o.require(std::get<StatementUnit>(live.unit).meta.creator == user(), "creator not readable after delete");
    o.require(meta.version_ids == std::set<Upri>{v1, v2}, "version ids lost after delete");
    bool hidden = false;
    try {
        read_unit(spec, *store, id);
    } catch (const Error& err) {
        hidden = err.code() == ErrorCode::not_found;
    }
    o.require(hidden, "deleted unit still visible to default reads");
    const auto h = history(*store, id);
    o.require(h.position_events.size() == 6 && h.versions.size() == 2 && h.deleted_by == user("curator"),
              "history has " + std::to_string(h.position_events.size()) + " events");
    return o;
}

// ---- 7 --------------------------------------------------------------------

std::set<Upri> tree_oracle(const QuestionExpr& e, const std::map<Upri, std::set<Upri>>& answers) {
    if (e.op == QuestionExpr::Op::leaf) return answers.at(e.question);
    std::set<Upri> acc = tree_oracle(e.operands.front(), answers);
    for (std::size_t i = 1; i < e.operands.size(); ++i) {
        const auto next = tree_oracle(e.operands[i], answers);
        std::set<Upri> out;
        for (const auto& u : e.op == QuestionExpr::Op::all_of ? acc : next)
            if (e.op == QuestionExpr::Op::all_of ? next.count(u) != 0 : true) out.insert(u);
        if (e.op == QuestionExpr::Op::any_of) out.insert(acc.begin(), acc.end());
        acc = std::move(out);
    }
    return acc;
}

QuestionExpr random_tree(const std::vector<Upri>& leaves, std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    if (depth == 0 || std::bernoulli_distribution(0.3)(rng)) return QuestionExpr::leaf(leaves[pick(rng)]);
    std::vector<QuestionExpr> ops;
    const int n = std::uniform_int_distribution<int>(2, 3)(rng);
    for (int i = 0; i < n; ++i) ops.push_back(random_tree(leaves, rng, depth - 1));
    return std::bernoulli_distribution(0.5)(rng) ? QuestionExpr::all_of(std::move(ops)) : QuestionExpr::any_of(std::move(ops));
}

Outcome query_oracle() {
    Outcome o;
    auto e = fresh_engine(demo_spec(), 7);
    std::mt19937_64 rng(7);
    grow_travel_store(*e, rng, 1000);
    const auto store = e->snapshot();
    const auto& spec = e->spec();
    o.require(store->units.size() >= 1000, "store has only " + std::to_string(store->units.size()) + " units");

    std::size_t boolean = 0, nonempty = 0, wildcard = 0, literal = 0, asked = 0;
    for (int attempts = 0; asked < 200 && attempts < 2000 && o.ok; ++attempts) {
        auto q = random_question(*store, rng);
        try {
            validate_question(spec, q);
        } catch (const Error&) {
            continue;
        }
        ++asked;
        const auto got = execute_question(spec, *store, q);
        const auto want = oracle_answer(spec, *store, q);
        const bool want_bool = oracle_boolean(q);
        o.require(got.units == want, "question " + std::to_string(asked) + ": " + question_to_json(q).dump() + " gave " +
                                         std::to_string(got.units.size()) + " units, oracle " + std::to_string(want.size()));
        o.require((got.mode == AnswerMode::boolean) == want_bool, "question " + std::to_string(asked) + ": answer mode");
        boolean += want_bool;
        nonempty += !want.empty();
        bool has_w = false, has_l = false;
        auto note = [&](const Binding& b) {
            has_w |= std::holds_alternative<WildcardBinding>(b);
            has_l |= std::holds_alternative<LiteralSpec>(b);
        };
        if (q.subject_binding) note(*q.subject_binding);
        for (const auto& [_, b] : q.bindings) note(b);
        wildcard += has_w;
        literal += has_l;
    }
    o.require(asked == 200, "only " + std::to_string(asked) + " valid questions generated");
    o.require(boolean > 0 && wildcard > 0 && literal > 0 && nonempty > 20, "question mix is degenerate");

    // Stored questions combined into AND/OR trees.
    std::vector<Upri> leaves;
    std::map<Upri, std::set<Upri>> answers;
    Provenance p;
    p.creator = user();
    while (leaves.size() < 30) {
        auto q = random_question(*e->snapshot(), rng);
        try {
            validate_question(spec, q);
        } catch (const Error&) {
            continue;
        }
        const auto id = e->add_question(q, p);
        leaves.push_back(id);
    }
    const auto with_questions = e->snapshot();
    for (const auto& id : leaves) {
        const auto want = oracle_answer(spec, *with_questions, std::get<QuestionUnit>(with_questions->units.at(id)));
        answers[id] = {want.begin(), want.end()};
    }
    for (int i = 0; i < 100 && o.ok; ++i) {
        const auto tree = random_tree(leaves, rng, 3);
        o.require(execute_compound(spec, *with_questions, tree) == tree_oracle(tree, answers), "tree " + to_string(tree));
    }
    if (o.ok)
        o.detail = std::to_string(boolean) + " boolean, " + std::to_string(wildcard) + " wildcard, " + std::to_string(literal) +
                   " literal, " + std::to_string(nonempty) + " non-empty";
    return o;
}

// ---- 8 --------------------------------------------------------------------

Outcome spec_validation() {
    Outcome o;
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(data_path("specs/broken"))) {
        const auto text = read_file(entry.path());
        std::smatch m;
        const bool tagged = std::regex_search(text, m, std::regex(R"(^# expect: ([a-z-]+))"));
        o.require(tagged, entry.path().filename().string() + " has no expected code");
        if (!tagged) continue;
        const auto code = m[1].str();
        const auto diags = check_spec_text(text);
        const bool hit = std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
        o.require(hit, entry.path().filename().string() + " did not report " + code);
        ++n;
    }
    o.require(n == 12, std::to_string(n) + " broken specs found");
    const auto demo_diags = check_spec_text(read_file(data_path("specs/demo.yaml")));
    o.require(demo_diags.empty(), "demo spec: " + (demo_diags.empty() ? "" : demo_diags.front().code));
    return o;
}

// ---- 9 --------------------------------------------------------------------

Outcome owl_derivation() {
    Outcome o;
    const auto& spec = *demo_spec();
    const auto fixture = json::parse(read_file(data_path("fixtures/travel_owl.json")));
    const auto* cls = spec.statement_class_of_instance(Upri(fixture["kgbb"].get<std::string>()));
    const auto tmpl = derive_owl_access_template(*cls);
    o.require(tmpl.format == AccessFormat::owl, "format is not owl");
    o.require(tmpl.owl_properties.size() == fixture["properties"].size(),
              std::to_string(tmpl.owl_properties.size()) + " properties derived");
    for (const auto& want : fixture["properties"]) {
        const auto name = want["name"].get<std::string>();
        auto it = std::find_if(tmpl.owl_properties.begin(), tmpl.owl_properties.end(),
                               [&](const OwlProperty& p) { return p.name == name; });
        o.require(it != tmpl.owl_properties.end(), "missing " + name);
        if (it == tmpl.owl_properties.end()) continue;
        o.require(it->object_property == (want["kind"] == "object"), name + ": property kind");
        o.require(it->required == (want["superProperty"] == "requiredObjectPosition"), name + ": required flag");
        o.require(it->domain == Upri(want["domain"].get<std::string>()), name + ": domain");
        o.require(it->range == want["range"].get<std::string>(), name + ": range " + it->range);
        o.require(cls->subject_label == want["domainLabel"].get<std::string>(), name + ": domain label " + cls->subject_label);
        const auto* pos = cls->position(it->position);
        o.require(pos && pos->thematic_label.find(want["rangeLabel"].get<std::string>()) != std::string::npos,
                  name + ": range label");
    }
    return o;
}

// ---- 10 -------------------------------------------------------------------

Outcome partonomy_loop() {
    Outcome o;
    auto spec = loop_spec();
    auto e = fresh_engine(spec, 10);
    const Upri lp("https://example.org/loop/");
    auto loop = [&](const std::string& l) { return Upri(lp.value + l); };

    CreateRequest item;
    item.kgbb_instance = loop("material-entity-item");
    item.provenance.creator = user();
    item.subject = ResourceRef::make(ResourceKind::named_individual, obo("NCBITaxon_1"), "organism X", Upri("https://example.org/loop/X"));
    const auto x_item = e->create_unit(item);

    auto has_part = [&](const std::string& iri, const Upri& cls, const std::string& label) {
        CreateRequest r;
        r.kgbb_instance = loop("has-part");
        r.provenance.creator = user();
        r.inputs[loop("has-part-part")] = ResourceRef::make(ResourceKind::named_individual, cls, label, Upri(iri));
        return r;
    };
    const auto s1 = e->add_associated_unit(x_item, has_part("https://example.org/loop/Y", obo("UBERON_0000033"), "head Y"));
    auto store = e->snapshot();

    std::optional<Upri> y_item;
    for (const auto& [id, u] : store->units)
        if (const auto* c = std::get_if<CompoundUnit>(&u); c && c->meta.subject == Upri("https://example.org/loop/Y")) y_item = id;
    o.require(y_item.has_value(), "no item unit was created for head Y");
    if (!y_item) return o;
    o.require(store->compound(x_item)->has_linked_semantic_unit.count(*y_item) == 1, "head item is not linked from the organism item");
    o.require(store->compound(*y_item)->meta.kgbb_uri == loop("material-entity-item"), "head item has the wrong KGBB");

    const auto s2 = e->add_associated_unit(*y_item, has_part("https://example.org/loop/Z", obo("UBERON_0000970"), "eye Z"));
    store = e->snapshot();
    std::optional<Upri> z_item;
    for (const auto& [id, u] : store->units)
        if (const auto* c = std::get_if<CompoundUnit>(&u); c && c->meta.subject == Upri("https://example.org/loop/Z")) z_item = id;
    o.require(z_item && store->compound(*y_item)->has_linked_semantic_unit.count(*z_item) == 1, "eye item missing or unlinked");

    for (const auto& seed : {Upri("https://example.org/loop/X"), s2, Upri("https://example.org/loop/Z")}) {
        const auto tree = derive_compounds(*spec, *store, seed, CompoundKind::granularity_tree);
        o.require(tree.kind == CompoundKind::granularity_tree, "wrong compound kind");
        o.require(tree.root == Upri("https://example.org/loop/X"), "tree from " + seed.value + " not rooted at organism X");
        o.require(tree.members == std::set<Upri>{s1, s2}, "tree from " + seed.value + " has " + std::to_string(tree.members.size()) + " members");
    }
    o.require(check_invariants(*store).empty(), "store invariants violated");
    return o;
}

// ---- 11 -------------------------------------------------------------------

Outcome cascade_atomicity() {
    Outcome o;
    auto e = fresh_engine(demo_spec(), 11);
    std::mt19937_64 rng(11);
    random_ops(*e, rng, 60);
    const auto before = export_trig(*e->snapshot());

    auto measurement = [] {
        CreateRequest m;
        m.kgbb_instance = demo("measurement");
        m.provenance.creator = user();
        m.subject = ResourceRef::make(ResourceKind::named_individual, obo("BFO_0000040"), "sample 1");
        return m;
    };
    auto quality = [](const Upri& cls) {
        CreateRequest q;
        q.kgbb_instance = demo("quality");
        q.provenance.creator = user();
        q.inputs[demo("quality-quality")] = ResourceRef::make(ResourceKind::named_individual, cls, "q");
        return q;
    };

    // Nested input of the wrong class: kilogram is not a quality.
    auto bad = measurement();
    bad.cascade_inputs.push_back(quality(obo("UO_0000009")));
    ErrorCode code = ErrorCode::invalid_argument;
    bool threw = false;
    try {
        e->create_unit(bad);
    } catch (const Error& err) {
        threw = true;
        code = err.code();
    }
    o.require(threw && code == ErrorCode::constraint_violation, "bad nested input was not rejected as a constraint violation");
    o.require(export_trig(*e->snapshot()) == before, "store changed after failed cascade");

    // Nested requirement not supplied at all.
    threw = false;
    try {
        e->create_unit(measurement());
    } catch (const Error& err) {
        threw = err.code() == ErrorCode::cascade_underflow;
    }
    o.require(threw, "missing nested input was not rejected as cascade underflow");
    o.require(export_trig(*e->snapshot()) == before, "store changed after cascade underflow");

    auto good = measurement();
    good.cascade_inputs.push_back(quality(obo("PATO_0000128")));
    e->create_unit(good);
    o.require(export_trig(*e->snapshot()) != before, "valid cascade did not write");
    return o;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "golden dynamic label", 1, golden_label},
        {2, "cypher membership query", 1, golden_query},
        {3, "has-part category labels", 1, category_labels},
        {4, "codec round trips (100 stores x 3 codecs)", 60, round_trip},
        {5, "partition invariant fuzz (500 ops)", 30, partition_fuzz},
        {6, "versioning replay", 1, versioning_replay},
        {7, "question oracle (200 questions, 1000 units)", 60, query_oracle},
        {8, "broken spec corpus", 5, spec_validation},
        {9, "OWL access template for travel", 1, owl_derivation},
        {10, "partonomy loop granularity tree", 1, partonomy_loop},
        {11, "cascade atomicity", 1, cascade_atomicity},
    };
    // Spec loading is shared by most criteria; keep it out of the timings.
    demo_spec();
    loop_spec();

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& ex) {
            out.ok = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.ok && secs > c.limit_s) {
            out.ok = false;
            out.detail = "time limit exceeded";
        }
        failed += !out.ok;
        std::ostringstream line;
        line << (out.ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << std::fixed << std::setprecision(3) << secs
             << " s, limit " << std::setprecision(0) << c.limit_s << " s)";
        if (!out.detail.empty()) line << ": " << out.detail;
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << (criteria.size() - failed) << "/" << criteria.size() << std::endl;
    return failed ? 1 : 0;
}
