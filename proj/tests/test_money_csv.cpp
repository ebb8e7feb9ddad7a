#include <doctest.h>

#include <sstream>

#include "ecomplex/csv.hpp"
#include "ecomplex/money.hpp"

using namespace ecomplex;

TEST_CASE("money parses plain decimals exactly") {
    CHECK(Money::parse("120")->raw() == 1'200'000);
    CHECK(Money::parse("0")->raw() == 0);
    CHECK(Money::parse("1.5")->raw() == 15'000);
    CHECK(Money::parse("0.0001")->raw() == 1);
    CHECK(Money::parse("-3.25")->raw() == -32'500);
    CHECK(Money::parse("1.5e9")->raw() == 15'000'000'000'000LL);
    CHECK(Money::parse("2E3")->raw() == 20'000'000);
    CHECK(Money::parse("1e-4")->raw() == 1);
}

TEST_CASE("money flags sub-grain precision as inexact") {
    bool exact = true;
    auto m = Money::parse("0.00005", &exact);
    REQUIRE(m.has_value());
    CHECK(!exact);
    CHECK(m->raw() == 1); // ties round away from zero

    exact = false;
    CHECK(Money::parse("12.34", &exact).has_value());
    CHECK(exact);
}

TEST_CASE("money rejects garbage and overflow") {
    CHECK(!Money::parse("").has_value());
    CHECK(!Money::parse("abc").has_value());
    CHECK(!Money::parse("1.2.3").has_value());
    CHECK(!Money::parse("12,5").has_value());
    CHECK(!Money::parse("1e30").has_value()); // past int64 capacity
    CHECK(Money::parse("  5 ")->raw() == 50'000); // surrounding space is fine
}

TEST_CASE("money renders shortest exact decimals") {
    CHECK(Money::from_dollars(5000).str() == "5000");
    CHECK(Money::parse("1.5")->str() == "1.5");
    CHECK(Money::from_raw(1).str() == "0.0001");
    CHECK(Money::from_raw(-15'000).str() == "-1.5");
    CHECK(Money::from_raw(0).str() == "0");
}

TEST_CASE("money round-trips through str/parse") {
    for (std::int64_t raw : {0LL, 1LL, -1LL, 12'345LL, 10'000LL, 99'999'999'999LL}) {
        auto m = Money::from_raw(raw);
        auto back = Money::parse(m.str());
        REQUIRE(back.has_value());
        CHECK(back->raw() == raw);
    }
}

TEST_CASE("money arithmetic is exact int64") {
    Money a = Money::from_dollars(1'000'000'000);
    Money b = Money::parse("0.0001").value();
    CHECK((a + b).raw() == a.raw() + 1);
    CHECK((a - a).is_zero());
    CHECK(Money::from_dollars(-1).is_negative());
    CHECK(Money::from_dollars(2) > Money::from_dollars(1));
}

static std::vector<std::vector<std::string>> read_all(const std::string &text) {
    std::istringstream in(text);
    CsvReader r(in);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> f;
    while (r.next_row(f))
        rows.push_back(f);
    return rows;
}

TEST_CASE("csv reader handles quoting and comments") {
    auto rows = read_all("a,b,c\n# comment line\n\"x,y\",\"he said \"\"hi\"\"\",3\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(rows[1] == std::vector<std::string>{"x,y", "he said \"hi\"", "3"});
}

TEST_CASE("csv reader handles crlf and embedded newlines") {
    auto rows = read_all("a,b\r\n\"line1\nline2\",2\r\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "line1\nline2");
    CHECK(rows[1][1] == "2");
}

TEST_CASE("csv reader yields blank rows and reports line numbers") {
    std::istringstream in("a,b\n\nc,d\n");
    CsvReader r(in);
    std::vector<std::string> f;
    REQUIRE(r.next_row(f));
    CHECK(r.line_number() == 1);
    REQUIRE(r.next_row(f)); // blank line comes through; loaders skip it
    CHECK(f == std::vector<std::string>{""});
    REQUIRE(r.next_row(f));
    CHECK(f[0] == "c");
    CHECK(r.line_number() == 3);
    CHECK(!r.next_row(f));
}

TEST_CASE("csv join quotes only when needed") {
    CHECK(csv_join({"a", "b"}) == "a,b");
    CHECK(csv_join({"a,b", "c\"d"}) == "\"a,b\",\"c\"\"d\"");
    CHECK(csv_join({"", "x"}) == ",x");
}

TEST_CASE("format_double round-trips and is deterministic") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-0.0001) == "-1e-04"); // to_chars shortest form
    double v = 0.1 + 0.2;
    CHECK(std::stod(format_double(v)) == v);
}
