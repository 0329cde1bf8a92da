#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "rdfmat/errors.hpp"
#include "rdfmat/ntriples.hpp"
#include "rdfmat/tables.hpp"
#include "rdfmat/writer.hpp"

using namespace rdfmat;

TEST_CASE("serialize_ntriples renders the canonical line") {
    TermValue score{false, "0.665", ""};
    std::string line = serialize_ntriples("http://iasis.eu/Q8WU90_ENST00000415827",
                                          "http://project-iasis.eu/vocab/interactionScore", score);
    CHECK(line == "<http://iasis.eu/Q8WU90_ENST00000415827> "
                  "<http://project-iasis.eu/vocab/interactionScore> \"0.665\" .\n");
}

TEST_CASE("literal escapes cover quotes, backslashes and controls") {
    CHECK(render_literal("he said \"hi\"") == "\"he said \\\"hi\\\"\"");
    CHECK(render_literal("a\\b") == "\"a\\\\b\"");
    CHECK(render_literal("line1\nline2") == "\"line1\\nline2\"");
    CHECK(render_literal("tab\there") == "\"tab\\there\"");
    CHECK(render_literal("cr\rhere") == "\"cr\\rhere\"");
    CHECK(render_literal("bell\x07") == "\"bell\\u0007\"");
    CHECK(render_literal("0.5", "http://www.w3.org/2001/XMLSchema#decimal") ==
          "\"0.5\"^^<http://www.w3.org/2001/XMLSchema#decimal>");
}

TEST_CASE("IRIs reject characters that cannot be escaped") {
    CHECK(render_iri("http://x/ok") == "<http://x/ok>");
    CHECK_THROWS_AS(render_iri("http://x/a b"), SerializeError);
    CHECK_THROWS_AS(render_iri("http://x/a>b"), SerializeError);
    CHECK_THROWS_AS(render_iri(std::string("http://x/a\x01") + "b"), SerializeError);
    CHECK_THROWS_AS(render_iri("http://x/a\\b"), SerializeError);
    CHECK_THROWS_AS(render_iri("http://x/{tpl}"), SerializeError);
}

TEST_CASE("escaped literals parse back to the original value") {
    std::mt19937 gen(29);
    static const std::string alpha = "ab\"\\\n\r\tz 0\x01\x1f\xc3\xa9";
    for (int iter = 0; iter < 500; ++iter) {
        std::string value;
        size_t len = gen() % 16;
        for (size_t i = 0; i < len; ++i) value += alpha[gen() % alpha.size()];
        bool with_datatype = gen() % 3 == 0;
        TermValue term{false, value, with_datatype ? "http://x/dt" : ""};
        std::string line = serialize_ntriples("http://x/s", "http://x/p", term);
        REQUIRE(line.back() == '\n');
        auto parsed = oracle::parse_ntriples_line(line.substr(0, line.size() - 1));
        REQUIRE(parsed.has_value());
        CHECK(parsed->subject == "http://x/s");
        CHECK(parsed->predicate == "http://x/p");
        CHECK_FALSE(parsed->object_is_iri);
        CHECK(parsed->object == value);
        CHECK(parsed->object_datatype == (with_datatype ? "http://x/dt" : ""));
    }
}

TEST_CASE("emit_incremental appends exactly the entries newer than the cursor") {
    PredicateTupleTable ptt("http://x/p");
    CostCounters c;
    ptt.check_insert("<http://x/s1>", "\"1\"", c);
    ptt.check_insert("<http://x/s2>", "\"2\"", c);
    ptt.check_insert("<http://x/s3>", "\"3\"", c);

    EmissionCursor cursor{1}; // first entry already emitted
    std::ostringstream sink;
    uint64_t appended = emit_incremental(ptt, cursor, sink, &c);
    CHECK(appended == 2);
    CHECK(cursor.last_emitted == 3);
    CHECK(c.kg_emissions == 2);
    std::string out = sink.str();
    CHECK(out.find("<http://x/s2> <http://x/p> \"2\" .") != std::string::npos);
    CHECK(out.find("<http://x/s1>") == std::string::npos);

    // idempotent on an unchanged table
    CHECK(emit_incremental(ptt, cursor, sink, &c) == 0);
    CHECK(cursor.last_emitted == 3);
}

namespace {

// stream buffer that starts failing after a byte budget
struct FlakyBuf final : std::streambuf {
    explicit FlakyBuf(size_t budget) : budget_(budget) {}
    int overflow(int c) override {
        if (written_ >= budget_) return traits_type::eof();
        ++written_;
        return c;
    }
    std::streamsize xsputn(const char* s, std::streamsize n) override {
        (void)s;
        std::streamsize can = std::min<std::streamsize>(n, budget_ - written_);
        written_ += can;
        return can;
    }
    size_t budget_;
    size_t written_ = 0;
};

} // namespace

TEST_CASE("an I/O failure leaves the cursor unadvanced") {
    PredicateTupleTable ptt("http://x/p");
    CostCounters c;
    for (int i = 0; i < 10; ++i) {
        ptt.check_insert("<http://x/s" + std::to_string(i) + ">", "\"o\"", c);
    }
    FlakyBuf buf(16); // not enough for ten lines
    std::ostream bad(&buf);
    EmissionCursor cursor;
    CHECK_THROWS_AS(emit_incremental(ptt, cursor, bad, &c), IoError);
    CHECK(cursor.last_emitted == 0);

    // retry against a working sink emits the full batch
    std::ostringstream good;
    CHECK(emit_incremental(ptt, cursor, good, nullptr) == 10);
    CHECK(cursor.last_emitted == 10);
}

TEST_CASE("interleaved inserts and emissions never repeat or drop a line") {
    std::mt19937 gen(31);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<std::unique_ptr<PredicateTupleTable>> ptts;
        size_t k = 2 + gen() % 3;
        for (size_t i = 0; i < k; ++i) {
            ptts.push_back(
                std::make_unique<PredicateTupleTable>("http://x/p" + std::to_string(i)));
        }
        std::ostringstream sink;
        CostCounters c;
        IncrementalWriter writer(sink, &c);

        size_t ops = 5 + gen() % 60;
        for (size_t op = 0; op < ops; ++op) {
            auto& ptt = *ptts[gen() % k];
            if (gen() % 3 != 0) {
                std::string s = "<http://x/s" + std::to_string(gen() % 8) + ">";
                std::string o = "\"" + std::to_string(gen() % 4) + "\"";
                ptt.check_insert(s, o, c);
            } else {
                writer.drain(ptt);
            }
        }
        for (auto& ptt : ptts) writer.drain(*ptt); // final drain
        writer.flush();

        std::vector<std::string> lines;
        std::istringstream in(sink.str());
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);

        std::set<std::string> unique_lines(lines.begin(), lines.end());
        CHECK(unique_lines.size() == lines.size()); // no repeats

        std::set<std::string> expected;
        size_t total_entries = 0;
        for (auto& ptt : ptts) {
            total_entries += ptt->size();
            std::string pred = render_iri(ptt->predicate());
            for (const auto& e : ptt->log()) {
                std::string l = ntriples_line(e.subject, pred, e.object);
                expected.insert(l.substr(0, l.size() - 1)); // strip newline
            }
        }
        CHECK(lines.size() == total_entries);
        CHECK(unique_lines == expected);
        CHECK(c.kg_emissions == total_entries);

        // every emitted line parses under the grammar
        for (const auto& l : lines) {
            CHECK(oracle::parse_ntriples_line(l).has_value());
        }
    }
}

TEST_CASE("incremental writer writes files exactly once across drains") {
    PredicateTupleTable ptt("http://x/p");
    CostCounters c;
    std::ostringstream sink;
    IncrementalWriter writer(sink, &c);
    ptt.check_insert("<http://x/a>", "\"1\"", c);
    writer.drain(ptt);
    ptt.check_insert("<http://x/b>", "\"2\"", c);
    ptt.check_insert("<http://x/a>", "\"1\"", c); // duplicate, not logged
    writer.drain(ptt);
    writer.drain(ptt);
    CHECK(writer.lines_written() == 2);
    CHECK(c.kg_emissions == 2);
}
