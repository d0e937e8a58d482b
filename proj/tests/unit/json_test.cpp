#include "kgbb/error.hpp"
#include "kgbb/json.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace kgbb;
using namespace kgbb::testing;

TEST(Json, BindingsRoundTrip) {
    const std::vector<Binding> bindings = {
        NamedIndividualBinding{Upri("urn:anna")},
        WildcardBinding{WildcardKind::some_instance, obo("NCBITaxon_9606")},
        WildcardBinding{WildcardKind::class_, obo("ENVO_00000856")},
        LiteralSpec{Datatype::date_time, {}, {}, {}, 2019, {}},
        LiteralSpec{Datatype::float_, {}, 1.5, 3.0, {}, {}},
    };
    for (const auto& b : bindings) EXPECT_EQ(binding_from_json(binding_to_json(b)), b) << binding_to_json(b).dump();
    EXPECT_THROW(binding_from_json(json{{"wildcard", "sometimes"}, {"class", "urn:c"}}), Error);
}

TEST(Json, QuestionFixturesParseAndValidate) {
    const auto spec = demo_spec();
    std::size_t n = 0;
    for (const auto& e : std::filesystem::directory_iterator(data_path("questions"))) {
        const auto j = json::parse(read_file(e.path()));
        if (j.contains("op")) continue;
        const auto q = question_from_json(j);
        EXPECT_NO_THROW(validate_question(*spec, q)) << e.path();
        EXPECT_EQ(question_from_json(question_to_json(q)), q) << e.path();
        ++n;
    }
    EXPECT_GE(n, 3u);
}

TEST(Json, CreateRequestFromJson) {
    const json body = {
        {"kgbb", demo("travel").value},
        {"subject", {{"kind", "named-individual"}, {"class", obo("NCBITaxon_9606").value}, {"label", "Anna"}}},
        {"inputs",
         {{demo("travel-destination").value,
           {{"kind", "named-individual"}, {"class", obo("ENVO_00000856").value}, {"label", "Rome"}}},
          {demo("travel-date").value, {{"literal", "5th of August 2019"}}}}},
        {"category", "contingent"},
    };
    const auto r = create_request_from_json(body, user());
    EXPECT_EQ(r.kgbb_instance, demo("travel"));
    EXPECT_EQ(r.provenance.creator, user());
    EXPECT_EQ(r.inputs.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<Literal>(r.inputs.at(demo("travel-date"))));
    ASSERT_TRUE(r.category_choice);

    Engine engine(demo_spec(), {}, deterministic_options(8));
    const auto id = engine.create_unit(r);
    EXPECT_EQ(engine.snapshot()->statement(id)->meta.label, "Anna travels to Rome on the 5th of August 2019");

    auto bad = body;
    bad["kgbb"] = demo("unknown").value;
    EXPECT_THROW(
        {
            try {
                engine.create_unit(create_request_from_json(bad, user()));
            } catch (const Error& e) {
                EXPECT_EQ(e.code(), ErrorCode::unknown_instance);
                throw;
            }
        },
        Error);
    EXPECT_THROW(create_request_from_json(json{{"inputs", json::object()}}, user()), Error);
}

TEST(Json, TravelFormDescriptor) {
    const auto form = form_descriptor(*demo_spec(), demo("travel"));
    EXPECT_EQ(form["kind"], "statement");
    const auto& fields = form["fields"];
    ASSERT_EQ(fields.size(), 5u);
    EXPECT_EQ(fields[0]["id"], "subject");
    EXPECT_EQ(fields[0]["label"], "PERSON");
    std::vector<std::string> required;
    for (const auto& f : fields)
        if (f["required"].get<bool>()) required.push_back(f["label"].get<std::string>());
    EXPECT_EQ(required, (std::vector<std::string>{"PERSON", "DESTINATION_LOCATION"}));
}

TEST(Json, CompoundFormNestsCascades) {
    const auto form = form_descriptor(*demo_spec(), demo("measurement"));
    EXPECT_EQ(form["kind"], "compound");
    ASSERT_FALSE(form["nested"].empty());
    const auto& q = form["nested"][0];
    EXPECT_EQ(q["target"], demo("quality").value);
    EXPECT_TRUE(q["required"].get<bool>());
    EXPECT_TRUE(q.contains("form"));
}

TEST(Json, SpecSummaryListsInstances) {
    const auto s = spec_summary(*demo_spec());
    EXPECT_GE(s["instances"].size(), 9u);
    EXPECT_FALSE(s["associations"].empty());
    EXPECT_FALSE(s["links"].empty());
}
