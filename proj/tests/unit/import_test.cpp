#include "kgbb/error.hpp"
#include "kgbb/import.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace kgbb;
using namespace kgbb::testing;

TEST(Csv, QuotedFieldsAndEmbeddedNewlines) {
    const auto rows = parse_csv("a,b,c\r\n\"x, y\",\"say \"\"hi\"\"\",\"two\nlines\"\r\n,,\n");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1], (std::vector<std::string>{"x, y", "say \"hi\"", "two\nlines"}));
    EXPECT_EQ(rows[2], (std::vector<std::string>{"", "", ""}));
}

TEST(Csv, WriteThenParseIsIdentity) {
    const std::vector<std::vector<std::string>> rows = {{"id", "text"}, {"1", "plain"}, {"2", "a,\"b\"\nc"}, {"3", ""}};
    EXPECT_EQ(parse_csv(write_csv(rows)), rows);
}

TEST(Csv, RowsAreKeyedByHeader) {
    const auto rows = csv_rows("person,to\nAnna,Rome\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].at("to"), "Rome");
}

TEST(Import, TravelCsvAcceptsGoodRowsAndReportsBadOnes) {
    const auto spec = demo_spec();
    const auto rows = csv_rows(read_file(data_path("csv/travel.csv")));
    ASSERT_EQ(rows.size(), 5u);
    const auto& tmpl = find_import_template(*spec, demo("travel"), demo("travel-csv"));
    Provenance p;
    p.creator = user();
    const auto result = apply_import_template(*spec, demo("travel"), rows, tmpl, p);
    EXPECT_EQ(result.accepted_rows, (std::vector<std::size_t>{0, 1, 2}));
    ASSERT_EQ(result.requests.size(), 3u);
    std::set<std::size_t> bad;
    for (const auto& d : result.diagnostics) bad.insert(d.row);
    EXPECT_EQ(bad, (std::set<std::size_t>{3, 4}));
    for (const auto& r : result.requests) EXPECT_EQ(r.provenance.imported_from, demo("travel-csv"));

    Engine engine(spec, {}, deterministic_options(1));
    for (const auto& r : result.requests) engine.create_unit(r);
    EXPECT_TRUE(check_invariants(*engine.snapshot()).empty());
}

TEST(Import, UnknownTemplateIsRejected) {
    EXPECT_THROW(find_import_template(*demo_spec(), demo("travel"), demo("nope")), Error);
}
