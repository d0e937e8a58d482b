#include "kgbb/error.hpp"
#include "kgbb/engine.hpp"
#include "kgbb/templates.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace kgbb;
using namespace kgbb::testing;

namespace {

Engine make_engine(std::uint64_t seed = 1) { return Engine(demo_spec(), {}, deterministic_options(seed)); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::invalid_argument;
}

Provenance prov(const std::string& who = "alice") {
    Provenance p;
    p.creator = user(who);
    return p;
}

CreateRequest person_item(const std::string& name) {
    CreateRequest r;
    r.kgbb_instance = demo("person-item");
    r.provenance = prov();
    r.subject = ResourceRef::make(ResourceKind::named_individual, obo("NCBITaxon_9606"), name);
    return r;
}

} // namespace

TEST(Engine, CreatesStatementWithProvenanceAndLabel) {
    auto e = make_engine();
    const auto id = e.create_unit(golden_travel_request());
    const auto store = e.snapshot();
    const auto* s = store->statement(id);
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->meta.label, "Anna travels by train from Berlin to Rome on the 5th of August 2019");
    EXPECT_EQ(s->category, Category::assertional);
    EXPECT_EQ(s->meta.creator, user());
    EXPECT_EQ(s->positions.size(), 4u);
    EXPECT_EQ(s->meta.kgbb_uri, demo("travel"));
    EXPECT_FALSE(s->meta.creation_date.empty());
    const auto* anna = store->resource(s->subject());
    ASSERT_NE(anna, nullptr);
    EXPECT_EQ(anna->label, "Anna");
    EXPECT_EQ(anna->class_affiliation, obo("NCBITaxon_9606"));
    EXPECT_TRUE(check_invariants(*store).empty());
}

TEST(Engine, NewResourcesGetIdentificationUnits) {
    auto e = make_engine();
    const auto id = e.create_unit(golden_travel_request());
    const auto store = e.snapshot();
    const auto anna = store->statement(id)->subject();
    bool found = false;
    for (const auto& [_, u] : store->units)
        if (const auto* s = std::get_if<StatementUnit>(&u); s && s->meta.kgbb_uri == builtin::type_identification() && s->subject() == anna)
            found = true;
    EXPECT_TRUE(found);
}

TEST(Engine, RejectsInvalidInput) {
    auto e = make_engine();
    auto missing = golden_travel_request();
    missing.inputs.erase(demo("travel-destination"));
    EXPECT_EQ(code_of([&] { e.create_unit(missing); }), ErrorCode::missing_required_position);

    auto wrong_class = golden_travel_request();
    wrong_class.inputs[demo("travel-destination")] = ResourceRef::make(ResourceKind::named_individual, demo("Train"), "ICE");
    EXPECT_EQ(code_of([&] { e.create_unit(wrong_class); }), ErrorCode::constraint_violation);

    auto bad_date = golden_travel_request();
    bad_date.inputs[demo("travel-date")] = Literal{"sometime", Datatype::date_time};
    EXPECT_EQ(code_of([&] { e.create_unit(bad_date); }), ErrorCode::constraint_violation);

    auto mixed = golden_travel_request();
    mixed.inputs[demo("travel-destination")] = ResourceRef::make(ResourceKind::some_instance, obo("ENVO_00000856"), "");
    EXPECT_EQ(code_of([&] { e.create_unit(mixed); }), ErrorCode::category_object_mismatch);

    auto no_choice = golden_travel_request();
    no_choice.subject = ResourceRef::make(ResourceKind::some_instance, obo("NCBITaxon_9606"), "");
    EXPECT_EQ(code_of([&] { e.create_unit(no_choice); }), ErrorCode::choice_required);

    auto unknown = golden_travel_request();
    unknown.kgbb_instance = demo("nope");
    EXPECT_EQ(code_of([&] { e.create_unit(unknown); }), ErrorCode::unknown_instance);

    auto no_creator = golden_travel_request();
    no_creator.provenance.creator = Upri();
    EXPECT_EQ(code_of([&] { e.create_unit(no_creator); }), ErrorCode::invalid_argument);

    EXPECT_TRUE(e.snapshot()->units.empty());
}

TEST(Engine, UpdateKeepsHistoryAndRelabels) {
    auto e = make_engine();
    const auto id = e.create_unit(golden_travel_request());
    e.update_object_position(id, demo("travel-destination"),
                             ResourceRef::make(ResourceKind::named_individual, obo("ENVO_00000856"), "Paris"), prov("bob"));
    const auto store = e.snapshot();
    const auto* s = store->statement(id);
    EXPECT_EQ(s->positions.size(), 5u);
    EXPECT_EQ(s->meta.label, "Anna travels by train from Berlin to Paris on the 5th of August 2019");
    std::size_t current = 0;
    for (const auto& p : s->positions)
        if (p.position_class == demo("travel-destination") && p.current_version) ++current;
    EXPECT_EQ(current, 1u);
    EXPECT_EQ(s->current(demo("travel-destination"))->creator, user("bob"));
    const auto h = history(*store, id);
    EXPECT_EQ(h.position_events.size(), 5u);
    EXPECT_TRUE(std::is_sorted(h.position_events.begin(), h.position_events.end(), position_order));
}

TEST(Engine, LockedAndDeletedUnitsRefuseEdits) {
    auto e = make_engine();
    auto locked = golden_travel_request();
    locked.editable = false;
    const auto a = e.create_unit(locked);
    const Literal d{"2020-01-01", Datatype::date_time};
    EXPECT_EQ(code_of([&] { e.update_object_position(a, demo("travel-date"), d, prov()); }), ErrorCode::unit_locked);

    const auto b = e.create_unit(golden_travel_request());
    e.soft_delete(b, user());
    EXPECT_EQ(code_of([&] { e.update_object_position(b, demo("travel-date"), d, prov()); }), ErrorCode::already_deleted);
    EXPECT_EQ(code_of([&] { e.soft_delete(b, user()); }), ErrorCode::already_deleted);
    EXPECT_EQ(code_of([&] { e.read_unit(b); }), ErrorCode::not_found);
    EXPECT_TRUE(e.read_unit(b, std::nullopt, true).data_graph.size() > 0);
}

TEST(Engine, SoftDeleteCascadesThroughCompounds) {
    auto e = make_engine();
    const auto item = e.create_unit(person_item("Anna"));
    const auto anna = *e.snapshot()->compound(item)->meta.subject;
    auto t = golden_travel_request();
    t.subject = ResourceRef::existing(anna);
    const auto s1 = e.add_associated_unit(item, t);
    const auto item2 = e.create_unit(person_item("Ben"));
    const auto ben = *e.snapshot()->compound(item2)->meta.subject;
    t.subject = ResourceRef::existing(ben);
    const auto s2 = e.add_associated_unit(item2, t);

    e.soft_delete(item, user());
    e.soft_delete(item2, user(), true);
    const auto store = e.snapshot();
    EXPECT_FALSE(store->statement(s1)->meta.deleted());
    EXPECT_TRUE(store->statement(s2)->meta.deleted());
    EXPECT_TRUE(store->compound(item2)->meta.deleted());
}

TEST(Engine, AssociationCountsAndCascades) {
    auto e = make_engine();
    CreateRequest m;
    m.kgbb_instance = demo("measurement");
    m.provenance = prov();
    m.subject = ResourceRef::make(ResourceKind::named_individual, obo("BFO_0000040"), "sample");
    EXPECT_EQ(code_of([&] { e.create_unit(m); }), ErrorCode::cascade_underflow);

    CreateRequest q;
    q.kgbb_instance = demo("quality");
    q.provenance = prov();
    q.inputs[demo("quality-quality")] = ResourceRef::make(ResourceKind::named_individual, obo("PATO_0000128"), "w1");
    m.cascade_inputs.push_back(q);
    const auto id = e.create_unit(m);
    const auto store = e.snapshot();
    ASSERT_EQ(store->compound(id)->has_associated_semantic_unit.size(), 1u);
    const auto member = *store->compound(id)->has_associated_semantic_unit.begin();
    EXPECT_EQ(store->statement(member)->subject(), *store->compound(id)->meta.subject);

    EXPECT_EQ(code_of([&] { e.add_associated_unit(id, q); }), ErrorCode::max_count_exceeded);
    auto t = golden_travel_request();
    EXPECT_EQ(code_of([&] { e.add_associated_unit(id, t); }), ErrorCode::invalid_argument);
}

TEST(Engine, LinksFollowObjectConditions) {
    auto e = make_engine();
    CreateRequest m;
    m.kgbb_instance = demo("measurement");
    m.provenance = prov();
    m.subject = ResourceRef::make(ResourceKind::named_individual, obo("BFO_0000040"), "sample");
    CreateRequest q;
    q.kgbb_instance = demo("quality");
    q.provenance = prov();
    q.inputs[demo("quality-quality")] = ResourceRef::make(ResourceKind::named_individual, obo("PATO_0000117"), "size 1");
    m.cascade_inputs.push_back(q);
    const auto id = e.create_unit(m);
    const auto quality = *e.snapshot()->compound(id)->has_associated_semantic_unit.begin();
    EXPECT_TRUE(available_links(e.spec(), *e.snapshot(), quality).empty());

    CreateRequest w;
    w.kgbb_instance = demo("weight-measurement");
    w.provenance = prov();
    w.inputs[demo("weight-value")] = Literal{"3.2", Datatype::float_};
    w.inputs[demo("weight-lower")] = Literal{"3.0", Datatype::float_};
    w.inputs[demo("weight-upper")] = Literal{"3.4", Datatype::float_};
    w.inputs[demo("weight-unit")] = ResourceRef::make(ResourceKind::named_individual, obo("UO_0000009"), "kilogram");
    EXPECT_EQ(code_of([&] { e.create_linked_unit(quality, w); }), ErrorCode::not_applicable);

    m.cascade_inputs[0].inputs[demo("quality-quality")] = ResourceRef::make(ResourceKind::named_individual, obo("PATO_0000128"), "weight 1");
    const auto id2 = e.create_unit(m);
    const auto weight_quality = *e.snapshot()->compound(id2)->has_associated_semantic_unit.begin();
    ASSERT_EQ(available_links(e.spec(), *e.snapshot(), weight_quality).size(), 1u);
    const auto wm = e.create_linked_unit(weight_quality, w);
    const auto store = e.snapshot();
    const auto weight = std::get<Upri>(store->statement(weight_quality)->current(demo("quality-quality"))->input);
    EXPECT_EQ(store->statement(wm)->subject(), weight);
    EXPECT_EQ(store->statement(wm)->meta.label, "Weight (95% conf. interval): 3.2 (3.0-3.4) kilogram");

    auto negative = w;
    negative.inputs[demo("weight-value")] = Literal{"-1", Datatype::float_};
    EXPECT_EQ(code_of([&] { e.create_linked_unit(weight_quality, negative); }), ErrorCode::constraint_violation);
}

TEST(Engine, GeneralStatementsUseWildcardResources) {
    auto e = make_engine();
    CreateRequest r;
    r.kgbb_instance = demo("has-part");
    r.provenance = prov();
    r.subject = ResourceRef::make(ResourceKind::every_instance, obo("NCBITaxon_1"), "");
    r.inputs[demo("has-part-part")] = ResourceRef::make(ResourceKind::some_instance, obo("UBERON_0000033"), "");
    const auto id = e.create_unit(r);
    const auto store = e.snapshot();
    EXPECT_EQ(store->statement(id)->category, Category::universal);
    EXPECT_EQ(render_category_label(e.spec(), *store, *store->statement(id)), "Every organism necessarily has part some head");
}

TEST(Engine, DerivesItemsAndContexts) {
    auto e = make_engine();
    const auto a = e.create_unit(golden_travel_request());
    const auto anna = e.snapshot()->statement(a)->subject();
    auto t = golden_travel_request();
    t.subject = ResourceRef::existing(anna);
    t.inputs[demo("travel-destination")] = ResourceRef::make(ResourceKind::named_individual, obo("ENVO_00000856"), "Oslo");
    const auto b = e.create_unit(t);
    const auto store = e.snapshot();
    const auto item = derive_compounds(e.spec(), *store, anna, CompoundKind::item);
    EXPECT_EQ(item.root, anna);
    EXPECT_TRUE(item.members.count(a) && item.members.count(b));
    const auto ctx = derive_compounds(e.spec(), *store, a, CompoundKind::context);
    EXPECT_TRUE(ctx.members.count(a) && ctx.members.count(b));
    EXPECT_EQ(code_of([&] { derive_compounds(e.spec(), *store, a, CompoundKind::dataset); }), ErrorCode::not_applicable);
    EXPECT_EQ(code_of([&] { derive_compounds(e.spec(), *store, Upri("urn:nothing"), CompoundKind::item); }), ErrorCode::not_found);
}

TEST(Engine, DynamicMetadataAggregatesMembers) {
    auto e = make_engine();
    const auto item = e.create_unit(person_item("Anna"));
    const auto anna = *e.snapshot()->compound(item)->meta.subject;
    auto t = golden_travel_request();
    t.subject = ResourceRef::existing(anna);
    t.provenance = prov("bob");
    e.add_associated_unit(item, t);
    const auto md = aggregate_dynamic_metadata(e.spec(), *e.snapshot(), item);
    EXPECT_TRUE(md.contributors.count(user("alice")));
    EXPECT_TRUE(md.contributors.count(user("bob")));
    EXPECT_FALSE(md.last_updated.empty());
}

TEST(Engine, FailedMutationsPublishNothing) {
    auto e = make_engine();
    e.create_unit(golden_travel_request());
    const auto before = e.snapshot();
    auto bad = golden_travel_request();
    bad.inputs[demo("travel-date")] = Literal{"never", Datatype::date_time};
    EXPECT_THROW(e.create_unit(bad), Error);
    EXPECT_EQ(e.snapshot(), before);
}

TEST(Engine, SnapshotsAreImmutable) {
    auto e = make_engine();
    const auto id = e.create_unit(golden_travel_request());
    const auto before = e.snapshot();
    const auto copy = *before;
    e.soft_delete(id, user());
    EXPECT_EQ(*before, copy);
    EXPECT_NE(*e.snapshot(), copy);
}

TEST(Engine, SeededRunsAreReproducible) {
    auto a = make_engine(42), b = make_engine(42);
    std::mt19937_64 ra(9), rb(9);
    random_ops(a, ra, 150);
    random_ops(b, rb, 150);
    EXPECT_EQ(*a.snapshot(), *b.snapshot());
    EXPECT_TRUE(check_invariants(*a.snapshot()).empty());
}

TEST(Engine, ConcurrentWritersKeepInvariants) {
    Engine e(demo_spec());
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&e, t] {
            std::mt19937_64 rng(100 + t);
            random_ops(e, rng, 60);
        });
    for (auto& t : threads) t.join();
    EXPECT_TRUE(check_invariants(*e.snapshot()).empty());
}

TEST(Engine, VersionChainLinksPredecessors) {
    auto e = make_engine();
    const auto id = e.create_unit(golden_travel_request());
    const auto v1 = e.create_version(id, user());
    const auto v2 = e.create_version(id, user());
    const auto store = e.snapshot();
    EXPECT_EQ(store->versions.at(v2).previous_version, v1);
    EXPECT_EQ(version_chain(*store, id), (std::vector<Upri>{v2, v1}));
    EXPECT_EQ(code_of([&] { e.read_unit(id, Upri("urn:not-a-version")); }), ErrorCode::unknown_version);
}

TEST(Engine, CompoundVersionsCoverMembers) {
    auto e = make_engine();
    const auto item = e.create_unit(person_item("Anna"));
    auto t = golden_travel_request();
    t.subject = ResourceRef::existing(*e.snapshot()->compound(item)->meta.subject);
    const auto s = e.add_associated_unit(item, t);
    const auto v = e.create_version(item, user());
    e.add_associated_unit(item, t);
    const auto view = e.read_unit(item, v);
    EXPECT_EQ(std::get<CompoundUnit>(view.unit).has_associated_semantic_unit, std::set<Upri>{s});
    EXPECT_FALSE(view.data_graph.empty());
}
