#include "kgbb/error.hpp"
#include "kgbb/spec.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace kgbb;
using namespace kgbb::testing;

namespace {

const char* kMinimal = R"(
application: {id: https://example.org/t/app, label: t, default_license: https://example.org/t/license}
ontology:
  - {id: https://example.org/t/Thing, label: thing}
classes:
  - id: https://example.org/t/rel
    label: rel statement
    predicate_label: relates to
    positions:
      - {id: https://example.org/t/other, label: OTHER, required: true, constraint: {class: https://example.org/t/Thing}}
      - {id: https://example.org/t/other2, label: OTHER, constraint: {class: https://example.org/t/Thing}}
    dynamic_labels:
      default: "{SUBJECT} relates to {OTHER}"
instances:
  - {id: https://example.org/t/rel-i, class: https://example.org/t/rel}
starting_points: [https://example.org/t/rel-i]
)";

std::string expected_code(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::string first;
    std::getline(in, first);
    const std::string tag = "# expect: ";
    return first.rfind(tag, 0) == 0 ? first.substr(tag.size()) : "";
}

} // namespace

TEST(Spec, DemoLoadsClean) {
    const auto& spec = *demo_spec();
    EXPECT_TRUE(validate_spec(spec).empty());
    EXPECT_EQ(spec.graph.kgbb_instances.size(), 9u);
    ASSERT_NE(spec.statement_class_of_instance(demo("travel")), nullptr);
    EXPECT_EQ(spec.statement_class_of_instance(demo("travel"))->positions.size(), 4u);
    EXPECT_NE(spec.compound_class_of_instance(demo("dataset")), nullptr);
    EXPECT_EQ(spec.compound_class_of_instance(demo("travel")), nullptr);
    EXPECT_TRUE(spec.ontology.is_subclass_of(obo("NCBITaxon_9606"), obo("BFO_0000040")));
    EXPECT_FALSE(spec.ontology.is_subclass_of(obo("BFO_0000040"), obo("NCBITaxon_9606")));
    EXPECT_EQ(spec.associations_from(demo("material-entity-item")).size(), 2u);
    EXPECT_EQ(spec.links_from(demo("has-part")).size(), 1u);
}

TEST(Spec, BuiltinIdentificationKgbbsResolve) {
    const auto& spec = *demo_spec();
    for (auto k : {ResourceKind::named_individual, ResourceKind::some_instance, ResourceKind::every_instance}) {
        auto inst = builtin::identification_kgbb_for(k);
        ASSERT_TRUE(inst.has_value());
        EXPECT_TRUE(builtin::is_identification(*inst));
        EXPECT_NE(spec.statement_class_of_instance(*inst), nullptr);
    }
}

TEST(Spec, BrokenCorpusReportsDesignatedCodes) {
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(data_path("specs/broken"))) {
        const auto code = expected_code(entry.path());
        ASSERT_FALSE(code.empty()) << entry.path();
        const auto diags = check_spec_text(read_file(entry.path()));
        const bool found = std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
        EXPECT_TRUE(found) << entry.path().filename() << " expected " << code;
        ++n;
    }
    EXPECT_EQ(n, 12u);
}

TEST(Spec, ParseErrorIsADiagnostic) {
    const auto diags = check_spec_text("classes: [unterminated");
    ASSERT_EQ(diags.size(), 1u);
    EXPECT_EQ(diags[0].code, "parse-error");
    EXPECT_THROW(load_spec("classes: [unterminated"), Error);
}

TEST(Spec, DuplicateThematicLabel) {
    const auto diags = check_spec_text(kMinimal);
    ASSERT_EQ(diags.size(), 1u);
    EXPECT_EQ(diags[0].code, "duplicate-label");
    try {
        load_spec(kMinimal);
        FAIL() << "expected duplicate_label";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::duplicate_label);
    }
}

TEST(Spec, LicenseOrder) {
    LicenseOrder o;
    o.add(Upri("urn:l:nc"), Upri("urn:l:by"));
    o.add(Upri("urn:l:by"), Upri("urn:l:cc0"));
    EXPECT_TRUE(o.more_restrictive_or_equal(Upri("urn:l:nc"), Upri("urn:l:cc0")));
    EXPECT_FALSE(o.more_restrictive_or_equal(Upri("urn:l:cc0"), Upri("urn:l:nc")));
    EXPECT_EQ(o.most_restrictive({Upri("urn:l:by"), Upri("urn:l:nc"), Upri("urn:l:cc0")}), Upri("urn:l:nc"));
    o.add(Upri("urn:l:sa"), Upri("urn:l:cc0"));
    EXPECT_THROW(o.most_restrictive({Upri("urn:l:nc"), Upri("urn:l:sa")}), Error);
}

TEST(Spec, WizardBuildsAStatementClass) {
    WizardAnswers a;
    a.id_prefix = "https://example.org/w/";
    a.predicate = "lives in";
    a.description = "residence";
    a.position_count = 1;
    a.subject_label = "PERSON";
    a.subject_class = obo("NCBITaxon_9606");
    a.position_labels = {"PLACE"};
    a.required = {"PLACE"};
    a.position_types["PLACE"] = WizardPosition{ObjectType::resource, obo("BFO_0000029"), std::nullopt};
    a.label_sentence = "PERSON lives in PLACE";
    const auto c = create_statement_kgbb_from_wizard(a);
    EXPECT_EQ(c.upri, Upri("https://example.org/w/lives-in-statement-kgbb"));
    EXPECT_EQ(c.dynamic_labels.at("default"), "{PERSON} lives in {PLACE}");
    ASSERT_EQ(c.positions.size(), 1u);
    EXPECT_TRUE(c.positions[0].required);
    EXPECT_EQ(c.mind_map.hub_label, "lives in");
    EXPECT_FALSE(c.access_templates.empty());

    auto bad = a;
    bad.label_sentence = "PERSON lives in TOWN";
    EXPECT_THROW(create_statement_kgbb_from_wizard(bad), Error);
    bad = a;
    bad.position_labels = {"PERSON"};
    EXPECT_THROW(create_statement_kgbb_from_wizard(bad), Error);
}

TEST(Spec, WizardClassRoundTripsThroughYaml) {
    WizardAnswers a;
    a.id_prefix = "https://example.org/w/";
    a.predicate = "weighs";
    a.position_count = 1;
    a.position_labels = {"VALUE"};
    a.required = {"VALUE"};
    a.position_types["VALUE"] = WizardPosition{ObjectType::literal, std::nullopt, LiteralConstraint{Datatype::float_, 0.0, {}, {}}};
    a.label_sentence = "SUBJECT weighs VALUE";
    const auto c = create_statement_kgbb_from_wizard(a);
    const auto yaml = classes_to_yaml({c});
    const std::string doc = "application: {id: https://example.org/w/app, label: w, default_license: https://example.org/w/l}\n" + yaml +
                            "instances:\n  - {id: https://example.org/w/weighs, class: " + c.upri.value + "}\n"
                            "starting_points: [https://example.org/w/weighs]\n";
    const auto spec = load_spec(doc);
    const auto* back = spec.statement_class_of_instance(Upri("https://example.org/w/weighs"));
    ASSERT_NE(back, nullptr);
    EXPECT_EQ(back->positions, c.positions);
    EXPECT_EQ(back->dynamic_labels.at("default"), c.dynamic_labels.at("default"));
}

TEST(Spec, InheritanceAppendsChildPositions) {
    const auto spec = load_spec(R"yaml(
application: {id: https://example.org/t/app, label: t, default_license: https://example.org/t/license}
ontology:
  - {id: https://example.org/t/Thing, label: thing}
  - {id: https://example.org/t/Part, label: part, parent: https://example.org/t/Thing}
classes:
  - id: https://example.org/t/base
    label: base statement
    predicate_label: has part
    positions:
      - {id: https://example.org/t/part, label: PART, required: true, constraint: {class: https://example.org/t/Thing}}
    dynamic_labels: {default: "{SUBJECT} has part {PART}"}
  - id: https://example.org/t/child
    label: child statement
    parent: https://example.org/t/base
    positions:
      - {id: https://example.org/t/part, label: PART, required: true, constraint: {class: https://example.org/t/Part}}
      - {id: https://example.org/t/note, label: NOTE, type: literal, constraint: {datatype: string}}
    dynamic_labels: {default: "{SUBJECT} has part {PART} ({NOTE})"}
instances:
  - {id: https://example.org/t/child-i, class: https://example.org/t/child}
starting_points: [https://example.org/t/child-i]
)yaml");
    EXPECT_TRUE(validate_spec(spec).empty());
    const auto* c = spec.statement_class_of_instance(Upri("https://example.org/t/child-i"));
    ASSERT_NE(c, nullptr);
    ASSERT_EQ(c->positions.size(), 2u);
    EXPECT_EQ(c->positions[0].upri, Upri("https://example.org/t/part"));
    EXPECT_EQ(c->positions[0].resource_class, Upri("https://example.org/t/Part"));
    EXPECT_EQ(c->positions[1].thematic_label, "NOTE");
}
