#include <doctest.h>

#include <random>

#include "rdfmat/errors.hpp"
#include "rdfmat/source.hpp"
#include "test_util.hpp"

using namespace rdfmat;

namespace {

std::vector<Record> drain(RecordStream& s) {
    std::vector<Record> out;
    while (auto r = s.next()) out.push_back(std::move(*r));
    return out;
}

// independent row writer: quotes every field, doubles embedded quotes
std::string csv_quote_all(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += '"';
            for (char c : row[i]) {
                if (c == '"') out += "\"\"";
                else out += c;
            }
            out += '"';
        }
        out += "\r\n";
    }
    return out;
}

} // namespace

TEST_CASE("csv header maps rows to attribute bindings") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("a.csv"), "enst,omixcore\nE1,0.665\nE2,0.5\n");
    auto stream = open_csv(dir.file("a.csv"));
    auto rows = drain(*stream);
    REQUIRE(rows.size() == 2);
    CHECK(*rows[0].find("enst") == "E1");
    CHECK(*rows[0].find("omixcore") == "0.665");
    CHECK(rows[0].ordinal() == 0);
    CHECK(*rows[1].find("enst") == "E2");
    CHECK(*rows[1].find("omixcore") == "0.5");
    CHECK(rows[1].ordinal() == 1);
    CHECK(rows[0].find("nope") == nullptr);
}

TEST_CASE("header-only csv yields an empty stream") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("a.csv"), "enst,omixcore\n");
    auto stream = open_csv(dir.file("a.csv"));
    CHECK_FALSE(stream->next().has_value());
}

TEST_CASE("csv quoting: embedded commas, quotes and newlines") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("a.csv"),
                         "a,b\n"
                         "\"x,y\",plain\n"
                         "\"he said \"\"hi\"\"\",\"line1\nline2\"\n"
                         "trailing,\"\"\n");
    auto rows = drain(*open_csv(dir.file("a.csv")));
    REQUIRE(rows.size() == 3);
    CHECK(*rows[0].find("a") == "x,y");
    CHECK(*rows[1].find("a") == "he said \"hi\"");
    CHECK(*rows[1].find("b") == "line1\nline2");
    CHECK(*rows[2].find("b") == "");
}

TEST_CASE("csv error paths") {
    testutil::TempDir dir;
    CHECK_THROWS_AS(open_csv(dir.file("missing.csv")), SourceError);

    testutil::write_file(dir.file("short.csv"), "a,b\n1\n");
    CHECK_THROWS_WITH_AS(drain(*open_csv(dir.file("short.csv"))),
                         doctest::Contains("has 1 fields"), SourceError);

    testutil::write_file(dir.file("extra.csv"), "a,b\n1,2,3\n");
    CHECK_THROWS_AS(drain(*open_csv(dir.file("extra.csv"))), SourceError);

    testutil::write_file(dir.file("dupheader.csv"), "a,a\n1,2\n");
    CHECK_THROWS_WITH_AS(open_csv(dir.file("dupheader.csv")),
                         doctest::Contains("duplicate attribute"), SourceError);

    testutil::write_file(dir.file("emptyname.csv"), "a,\n1,2\n");
    CHECK_THROWS_AS(open_csv(dir.file("emptyname.csv")), SourceError);

    testutil::write_file(dir.file("afterquote.csv"), "a,b\n\"x\"y,2\n");
    CHECK_THROWS_WITH_AS(drain(*open_csv(dir.file("afterquote.csv"))),
                         doctest::Contains("after closing quote"), SourceError);

    testutil::write_file(dir.file("unterminated.csv"), "a,b\n\"x,2\n");
    CHECK_THROWS_WITH_AS(drain(*open_csv(dir.file("unterminated.csv"))),
                         doctest::Contains("unterminated"), SourceError);

    testutil::write_file(dir.file("midquote.csv"), "a,b\nx\"y\",2\n");
    CHECK_THROWS_AS(drain(*open_csv(dir.file("midquote.csv"))), SourceError);
}

TEST_CASE("round trip through an independent quote-everything writer") {
    std::mt19937 gen(3);
    auto rand_string = [&](size_t max_len) {
        static const std::string alpha = "ab\"\n\r,xyz 09";
        std::string s;
        size_t len = gen() % max_len;
        for (size_t i = 0; i < len; ++i) s += alpha[gen() % alpha.size()];
        return s;
    };

    testutil::TempDir dir;
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"c1", "c2", "c3"}); // header
        size_t n = 1 + gen() % 20;
        for (size_t i = 0; i < n; ++i) {
            // quoted-empty fields decode as empty strings; keep them valid
            rows.push_back({rand_string(8), rand_string(8), rand_string(8)});
        }
        testutil::write_file(dir.file("t.csv"), csv_quote_all(rows));
        auto parsed = drain(*open_csv(dir.file("t.csv")));
        REQUIRE(parsed.size() == n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(parsed[i].values() == rows[i + 1]);
        }
    }
}

TEST_CASE("record count equals data line count for simple files") {
    testutil::TempDir dir;
    std::string content = "a,b\n";
    for (int i = 0; i < 500; ++i) {
        content += "x" + std::to_string(i) + ",y\n";
    }
    testutil::write_file(dir.file("c.csv"), content);
    CHECK(drain(*open_csv(dir.file("c.csv"))).size() == 500);
}

TEST_CASE("project_attributes returns values in requested order") {
    auto rec = testutil::make_record({{"a", "1"}, {"b", "2"}, {"enst", "E1"}});
    auto one = project_attributes(rec, {"enst"});
    REQUIRE(one.has_value());
    CHECK(*one == std::vector<std::string>{"E1"});

    CHECK_FALSE(project_attributes(rec, {"missing"}).has_value());

    auto two = project_attributes(rec, {"b", "a"});
    REQUIRE(two.has_value());
    CHECK(*two == std::vector<std::string>{"2", "1"});

    auto empty_value = testutil::make_record({{"a", ""}});
    CHECK_FALSE(project_attributes(empty_value, {"a"}).has_value());
}

TEST_CASE("json iterator selects array elements as records") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("d.json"), R"({"rows":[{"a":1}]})");
    auto rows = drain(*open_json(dir.file("d.json"), "$.rows[*]"));
    REQUIRE(rows.size() == 1);
    CHECK(*rows[0].find("a") == "1");
}

TEST_CASE("json records flatten nested objects and keep numeric lexemes") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("d.json"),
                         R"({"meta":{"skip":true},"data":{"rows":[
                              {"a":0.665,"nest":{"deep":{"x":"v"}},"flag":true,
                               "none":null,"list":[1,2],"s":"téxt"},
                              {"a":-12e3}
                            ]}})");
    auto rows = drain(*open_json(dir.file("d.json"), "$.data.rows[*]"));
    REQUIRE(rows.size() == 2);
    CHECK(*rows[0].find("a") == "0.665");
    CHECK(*rows[0].find("nest.deep.x") == "v");
    CHECK(*rows[0].find("flag") == "true");
    CHECK(rows[0].find("none") == nullptr);  // null binds nothing
    CHECK(rows[0].find("list") == nullptr);  // arrays are not bound
    CHECK(*rows[0].find("s") == "t\xc3\xa9xt");
    CHECK(*rows[1].find("a") == "-12e3");
}

TEST_CASE("json error paths") {
    testutil::TempDir dir;
    CHECK_THROWS_AS(open_json(dir.file("missing.json"), "$.rows[*]"), SourceError);

    testutil::write_file(dir.file("notarray.json"), R"({"rows":{"a":1}})");
    CHECK_THROWS_WITH_AS(open_json(dir.file("notarray.json"), "$.rows[*]"),
                         doctest::Contains("does not select an array"), SourceError);

    testutil::write_file(dir.file("nostep.json"), R"({"other":[]})");
    CHECK_THROWS_WITH_AS(open_json(dir.file("nostep.json"), "$.rows[*]"),
                         doctest::Contains("not found"), SourceError);

    testutil::write_file(dir.file("scalar.json"), R"({"rows":[1,2]})");
    CHECK_THROWS_WITH_AS(drain(*open_json(dir.file("scalar.json"), "$.rows[*]")),
                         doctest::Contains("not an object"), SourceError);

    testutil::write_file(dir.file("dup.json"), R"({"rows":[{"a":1,"a":2}]})");
    CHECK_THROWS_WITH_AS(drain(*open_json(dir.file("dup.json"), "$.rows[*]")),
                         doctest::Contains("duplicate attribute"), SourceError);

    testutil::write_file(dir.file("mid.json"), R"({"rows":[{"a":1}]})");
    CHECK_THROWS_AS(open_json(dir.file("mid.json"), "$.rows[*].a"), SourceError);

    testutil::write_file(dir.file("empty.json"), R"({"rows":[]})");
    CHECK(drain(*open_json(dir.file("empty.json"), "$.rows[*]")).empty());

    // an iterator without the [*] suffix selects the same array
    testutil::write_file(dir.file("plain.json"), R"({"rows":[{"a":1}]})");
    CHECK(drain(*open_json(dir.file("plain.json"), "$.rows")).size() == 1);
}

TEST_CASE("open_source resolves relative paths against the mapping directory") {
    testutil::TempDir dir;
    std::filesystem::create_directories(dir.file("sub"));
    testutil::write_file(dir.file("sub/a.csv"), "x\n1\n");
    LogicalSource ls;
    ls.source_path = "sub/a.csv";
    ls.formulation = ReferenceFormulation::Csv;
    CHECK(drain(*open_source(ls, dir.path())).size() == 1);

    LogicalSource abs = ls;
    abs.source_path = dir.file("sub/a.csv").string();
    CHECK(drain(*open_source(abs, "/nonexistent")).size() == 1);
}

TEST_CASE("streaming a large file keeps per-record memory bounded") {
    testutil::TempDir dir;
    {
        std::ofstream out(dir.file("big.csv"), std::ios::binary);
        out << "id,key,v1\n";
        for (uint64_t i = 0; i < 1000000; ++i) {
            out << 'R' << i << ",K" << (i % 50000) << ",v" << (i % 997) << '\n';
        }
    }
    auto stream = open_csv(dir.file("big.csv"));
    uint64_t count = 0;
    while (auto rec = stream->next()) {
        ++count;
    }
    CHECK(count == 1000000);
    // the largest single buffered record stays tiny relative to the ~27MB file
    CHECK(stream->peak_record_bytes() < 1024);
}
