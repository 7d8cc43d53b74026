#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trl/csv.hpp"
#include "trl/error.hpp"
#include "trl/generator.hpp"
#include "trl/ingest.hpp"

#include <algorithm>
#include <random>

using namespace trl;

TEST_CASE("wide table: minimal well-formed input")
{
    auto t = parse_wide_table("id,2001,2002\na,3.0,1.5\n");
    CHECK(t.item_count() == 1);
    CHECK(t.time_count() == 2);
    CHECK(t.time_labels() == std::vector<std::string>{"2001", "2002"});
    CHECK(t.value(0, 0) == 3.0);
    CHECK(t.value(0, 1) == 1.5);
    CHECK(validate_table(t).absent_count == 0);
}

TEST_CASE("wide table: NA and empty cells are absent")
{
    auto t = parse_wide_table("id,2001,2002,2003\na,3.0,NA,\n");
    CHECK(t.value(0, 0) == 3.0);
    CHECK_FALSE(t.value(0, 1).has_value());
    CHECK_FALSE(t.value(0, 2).has_value());
}

TEST_CASE("wide table: CRLF, quoting, BOM and tab separator")
{
    auto t = parse_wide_table("\xEF\xBB\xBFid,\"y,1\",y2\r\n\"Korea, Rep.\",1,2\r\n\"say \"\"hi\"\"\",3,4\r\n");
    CHECK(t.items() == std::vector<std::string>{"Korea, Rep.", "say \"hi\""});
    CHECK(t.time_labels()[0] == "y,1");

    auto tab = parse_wide_table("id\tt1\tt2\nx\t1\t2\n", '\t');
    CHECK(tab.value(0, 1) == 2.0);
}

TEST_CASE("wide table: 191 GDP-like rows over 16 years")
{
    std::string text = "id";
    for (int y = 1985; y <= 2000; ++y)
        text += "," + std::to_string(y);
    text += "\n";
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gdp(105.0, 63692.0);
    for (int c = 0; c < 191; ++c) {
        text += "country" + std::to_string(c);
        for (int y = 0; y < 16; ++y)
            text += "," + std::to_string(gdp(rng));
        text += "\n";
    }
    auto t = parse_wide_table(text);
    CHECK(t.item_count() == 191);
    CHECK(t.time_count() == 16);
}

TEST_CASE("wide table errors")
{
    SUBCASE("row length names the row")
    {
        try {
            parse_wide_table("id,a,b\nx,1,2\ny,1\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("row 3") != std::string::npos);
        }
    }
    SUBCASE("duplicate id")
    {
        CHECK_THROWS_AS(parse_wide_table("id,a,b\nx,1,2\nx,3,4\n"), ParseError);
    }
    SUBCASE("non-numeric cell gives coordinates")
    {
        try {
            parse_wide_table("id,a,b\nx,1,abc\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("row 2, column 3") != std::string::npos);
        }
    }
    SUBCASE("non-finite literal")
    {
        CHECK_THROWS_AS(parse_wide_table("id,a,b\nx,inf,1\n"), ParseError);
        CHECK_THROWS_AS(parse_wide_table("id,a,b\nx,nan,1\n"), ParseError);
    }
    SUBCASE("fewer than two time points")
    {
        CHECK_THROWS_AS(parse_wide_table("id,a\nx,1\n"), ParseError);
    }
    SUBCASE("no data rows")
    {
        CHECK_THROWS_AS(parse_wide_table("id,a,b\n"), ParseError);
        CHECK_THROWS_AS(parse_wide_table(""), ParseError);
    }
    SUBCASE("unterminated quote")
    {
        CHECK_THROWS_AS(parse_wide_table("id,a,b\n\"x,1,2\n"), ParseError);
    }
}

TEST_CASE("column pairs: union of ids, missing means absent")
{
    auto t = parse_column_pairs("t1,t1,t2,t2\na,5,b,4\nb,3,,\n");
    REQUIRE(t.items() == std::vector<std::string>{"a", "b"});
    CHECK(t.value(0, 0) == 5.0);
    CHECK_FALSE(t.value(0, 1).has_value());
    CHECK(t.value(1, 0) == 3.0);
    CHECK(t.value(1, 1) == 4.0);
}

TEST_CASE("column pairs: ragged rows and empty second header cell")
{
    auto t = parse_column_pairs("t1,,t2,\nz,1,y,2\ny,3\n");
    CHECK(t.items() == std::vector<std::string>{"y", "z"});
    CHECK(t.time_labels() == std::vector<std::string>{"t1", "t2"});
    CHECK_FALSE(t.value(1, 1).has_value());
}

TEST_CASE("column pairs errors")
{
    CHECK_THROWS_AS(parse_column_pairs("t1,t1,t2\na,1,b\n"), ParseError);
    // one time point only: the table needs two
    CHECK_THROWS_AS(parse_column_pairs("t1,t1\na,5\n"), Error);
    try {
        parse_column_pairs("t1,t1,t2,t2\na,1,a,2\na,3,b,4\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
    try {
        parse_column_pairs("t1,t1,t2,t2\na,1,b,x\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 2, column 4") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_column_pairs("t1,t1,t2,t2\n,1,b,2\n"), ParseError);
    CHECK_THROWS_AS(parse_column_pairs("t1,t1,t2,t3\na,1,b,2\n"), ParseError);
}

TEST_CASE("validate_table")
{
    auto t = parse_wide_table("id,a,b\nx,1,NA\ny,2,3\n");
    auto r = validate_table(t);
    CHECK(r.item_count == 2);
    CHECK(r.time_point_count == 2);
    CHECK(r.absent_count == 1);
    CHECK(r.duplicate_warnings.empty());

    auto dup = validate_table(parse_wide_table("id,a,b\nx,1,2\ny,1,2\n"));
    REQUIRE(dup.duplicate_warnings.size() == 1);
    CHECK(dup.duplicate_warnings[0].find("'y'") != std::string::npos);

    auto big = validate_table(generate_random_table({5000, 10, 3}));
    CHECK(big.item_count == 5000);
    CHECK(big.time_point_count == 10);
    CHECK(big.absent_count == 0);
}

namespace {

TimeTable random_table(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> items(1, 12), times(2, 6), kind(0, 5);
    std::normal_distribution<double> value(0.0, 1e3);
    const char* awkward[] = {"plain", "with,comma", "quote\"d", "NA-ish", "  spaced", "line\nbreak"};
    int p = items(rng), n = times(rng);
    std::vector<std::string> ids, labels;
    for (int i = 0; i < p; ++i)
        ids.push_back(std::string(awkward[i % 6]) + std::to_string(i));
    for (int t = 0; t < n; ++t)
        labels.push_back("t" + std::to_string(t));
    std::vector<TimeTable::Cell> cells;
    for (int k = 0; k < p * n; ++k)
        cells.push_back(kind(rng) == 0 ? TimeTable::Cell{} : TimeTable::Cell{value(rng)});
    return TimeTable(ids, labels, cells);
}

std::string to_pairs(const TimeTable& t, std::mt19937_64& rng)
{
    // Each time point lists its present and explicitly-NA items in shuffled order.
    std::vector<std::vector<std::pair<std::string, std::string>>> cols(t.time_count());
    for (std::size_t c = 0; c < t.time_count(); ++c) {
        for (std::size_t i = 0; i < t.item_count(); ++i) {
            auto v = t.value(i, c);
            if (v)
                cols[c].emplace_back(t.items()[i], csv::format_real(*v));
            else if (rng() % 2)
                cols[c].emplace_back(t.items()[i], "NA");
        }
        std::shuffle(cols[c].begin(), cols[c].end(), rng);
    }
    std::string out;
    for (std::size_t c = 0; c < t.time_count(); ++c)
        out += (c ? "," : "") + t.time_labels()[c] + "," + t.time_labels()[c];
    out += "\n";
    std::size_t rows = 0;
    for (const auto& c : cols)
        rows = std::max(rows, c.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c)
                out += ",";
            if (r < cols[c].size())
                out += csv::quote(cols[c][r].first) + "," + cols[c][r].second;
            else
                out += ",";
        }
        out += "\n";
    }
    return out;
}

} // namespace

TEST_CASE("property: wide serialization round-trips")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_table(rng);
        CHECK(parse_wide_table(write_wide_table(t)) == t);
        CHECK(parse_wide_table(write_wide_table(t, '\t'), '\t') == t);
    }
}

TEST_CASE("property: paired and wide layouts agree after sorting items")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_table(rng);
        // an item absent everywhere may vanish from the paired layout
        bool all_listed = true;
        for (std::size_t i = 0; i < t.item_count(); ++i) {
            auto r = t.row(i);
            all_listed &= std::any_of(r.begin(), r.end(), [](const auto& c) { return c.has_value(); });
        }
        if (!all_listed)
            continue;
        auto pairs = parse_column_pairs(to_pairs(t, rng));
        CHECK(pairs == parse_wide_table(write_wide_table(t)).sorted_by_item());
    }
}
