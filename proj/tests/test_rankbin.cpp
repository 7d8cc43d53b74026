#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trl/error.hpp"
#include "trl/rankbin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace trl;

namespace oracle {

// Boundaries by closed form per couple: start + k*step for k = 1..ceil((U - start) / step).
std::vector<int> boundaries(const std::vector<Couple>& couples)
{
    std::vector<int> out;
    int start = 0;
    for (const auto& c : couples) {
        int count = (c.upper_limit - start + c.step - 1) / c.step;
        for (int k = 1; k <= count; ++k)
            out.push_back(start + k * c.step);
        start = out.back();
    }
    return out;
}

std::size_t bin_of_rank(const std::vector<int>& b, int rank)
{
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] >= rank)
            return i;
    }
    throw std::out_of_range("rank beyond scheme");
}

int competition_rank(const std::vector<double>& v, std::size_t i)
{
    return 1 + static_cast<int>(std::count_if(v.begin(), v.end(), [&](double x) { return x > v[i]; }));
}

} // namespace oracle

const std::vector<Couple> gdp = {{20, 1}, {100, 5}, {191, 10}};

TEST_CASE("GDP scheme reproduces the 46 top-K dimensions")
{
    BinningScheme s(gdp);
    std::vector<std::string> expected;
    for (int k = 1; k <= 20; ++k)
        expected.push_back("top-" + std::to_string(k));
    for (int k = 25; k <= 100; k += 5)
        expected.push_back("top-" + std::to_string(k));
    for (int k = 110; k <= 200; k += 10)
        expected.push_back("top-" + std::to_string(k));
    CHECK(s.bin_count() == 46);
    CHECK(s.labels() == expected);
    CHECK(s.labels().back() == "top-200");
    CHECK(s.boundaries() == oracle::boundaries(gdp));
}

TEST_CASE("small schemes")
{
    CHECK(BinningScheme({{3, 1}}).boundaries() == std::vector<int>{1, 2, 3});
    CHECK(BinningScheme({{10, 4}}).boundaries() == std::vector<int>{4, 8, 12});
    CHECK(oracle::boundaries({{10, 4}}) == std::vector<int>{4, 8, 12});
    CHECK(BinningScheme::identity(5).boundaries() == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("scheme preconditions")
{
    CHECK_THROWS_AS(BinningScheme({}), InvalidArgument);
    CHECK_THROWS_AS(BinningScheme({{20, 0}}), InvalidArgument);
    CHECK_THROWS_AS(BinningScheme({{0, 1}}), InvalidArgument);
    CHECK_THROWS_AS(BinningScheme({{20, 1}, {20, 5}}), InvalidArgument);
    CHECK_THROWS_AS(BinningScheme({{20, 1}, {10, 5}}), InvalidArgument);
    CHECK_THROWS_AS(BinningScheme({{10, 4}, {11, 1}}), InvalidArgument); // 12 already covers 11
}

TEST_CASE("couples parsing")
{
    auto s = BinningScheme::parse("(20,1),(100,5),(191,10)");
    CHECK(s.couples() == gdp);
    CHECK(BinningScheme::parse(" ( 20 , 1 ) , (100,5)").bin_count() == 36);
    CHECK(BinningScheme::parse(s.to_string()) == s);
    for (const char* bad : {"", "(20,)", "(20,1", "20,1", "(20,1)(100,5)", "(20,1),", "(a,1)", "(20,1) x"})
        CHECK_THROWS_AS(BinningScheme::parse(bad), ParseError);
}

TEST_CASE("bin_of_rank on the GDP scheme")
{
    BinningScheme s(gdp);
    CHECK(s.label(bin_of_rank(s, 122)) == "top-130");
    CHECK(s.label(bin_of_rank(s, 1)) == "top-1");
    CHECK(s.label(bin_of_rank(s, 20)) == "top-20");
    CHECK(s.label(bin_of_rank(s, 21)) == "top-25");
    CHECK(s.label(bin_of_rank(s, 200)) == "top-200");
    CHECK_THROWS_AS(bin_of_rank(s, 201), SchemeCoverageError);
    CHECK_THROWS_AS(bin_of_rank(s, 0), InvalidArgument);
}

TEST_CASE("property: bin_of_rank equals the linear scan and is monotone")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> ncouples(1, 5), step(1, 30), gap(1, 200);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Couple> couples;
        int upper = 0;
        int bound = 0;
        int k = ncouples(rng);
        for (int c = 0; c < k; ++c) {
            upper = std::max(upper, bound) + gap(rng);
            int st = step(rng);
            couples.push_back({upper, st});
            bound = oracle::boundaries(couples).back();
        }
        BinningScheme s(couples);
        REQUIRE(s.boundaries() == oracle::boundaries(couples));
        std::size_t prev = 0;
        for (int r = 1; r <= s.last_boundary(); ++r) {
            auto b = bin_of_rank(s, r);
            CHECK(b == oracle::bin_of_rank(s.boundaries(), r));
            CHECK(b >= prev);
            prev = b;
        }
    }
}

TEST_CASE("rank_column uses competition ranking")
{
    std::vector<std::pair<std::string, double>> v = {{"a", 9}, {"b", 7}, {"c", 7}, {"d", 3}};
    auto r = rank_column(v, "t");
    CHECK(r.ranks == std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 2}, {"c", 2}, {"d", 4}});

    std::vector<std::pair<std::string, double>> one = {{"a", 5.0}};
    CHECK(rank_column(one).ranks[0].second == 1);

    std::vector<std::pair<std::string, double>> flat = {{"a", 2}, {"b", 2}, {"c", 2}};
    for (const auto& [id, rank] : rank_column(flat).ranks)
        CHECK(rank == 1);

    std::vector<std::pair<std::string, double>> dup = {{"a", 1}, {"a", 2}};
    CHECK_THROWS_AS(rank_column(dup), InvalidArgument);
    std::vector<std::pair<std::string, double>> nan = {{"a", NAN}};
    CHECK_THROWS_AS(rank_column(nan), InvalidArgument);
}

TEST_CASE("property: competition ranks match 1 + count strictly greater")
{
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> len(1, 40), val(0, 9);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(len(rng)));
        for (auto& x : v)
            x = val(rng); // many ties
        auto r = competition_ranks(v);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(r[i] == oracle::competition_rank(v, i));
    }
}

TEST_CASE("build_binned_map examples")
{
    TimeTable t({"a", "b"}, {"t1", "t2"}, {5.0, 1.0, 2.0, 3.0});
    auto m = build_binned_map(t, BinningScheme({{2, 1}}), NullMode::keep_nulls);
    CHECK(m.level(0, 0) == 0u);
    CHECK(m.level(0, 1) == 1u);
    CHECK(m.level(1, 0) == 1u);
    CHECK(m.level(1, 1) == 0u);

    auto p = item_profile(m, "a");
    CHECK(p.levels == std::vector<std::optional<int>>{0, 1});
    CHECK(p.mean_level == doctest::Approx(0.5));
    CHECK_THROWS_AS(item_profile(m, "zz"), NotFoundError);
}

TEST_CASE("absent cells stay absent and do not take a rank")
{
    TimeTable t({"a", "b", "c"}, {"t1", "t2"}, {9.0, std::nullopt, 5.0, 4.0, 1.0, 2.0});
    auto m = build_binned_map(t, BinningScheme::identity(3), NullMode::keep_nulls);
    CHECK_FALSE(m.level(0, 1).has_value());
    CHECK(m.level(1, 1) == 0u); // best of the two present items
    CHECK(m.level(2, 1) == 1u);

    auto p = item_profile(m, "a");
    CHECK(p.present_count() == 1);
}

TEST_CASE("item absent everywhere has no mean level")
{
    TimeTable t({"a", "b"}, {"t1", "t2"}, {std::nullopt, std::nullopt, 1.0, 2.0});
    auto p = item_profile(build_binned_map(t, BinningScheme::identity(2), NullMode::keep_nulls), "a");
    CHECK(p.present_count() == 0);
    CHECK_FALSE(p.mean_level.has_value());
}

TEST_CASE("constant table gives constant level sequences")
{
    TimeTable t({"a", "b"}, {"t1", "t2", "t3"}, {4.0, 4.0, 4.0, 4.0, 4.0, 4.0});
    auto p = item_profile(build_binned_map(t, BinningScheme::identity(2), NullMode::keep_nulls), "b");
    CHECK(p.levels == std::vector<std::optional<int>>{0, 0, 0});
}

TEST_CASE("drop_last_bin removes last-bin cells")
{
    TimeTable t({"a", "b", "c", "d"}, {"t1", "t2"}, {4.0, 1.0, 3.0, 2.0, 2.0, 3.0, 1.0, 4.0});
    BinningScheme s({{4, 2}}); // bins top-2, top-4
    auto keep = build_binned_map(t, s, NullMode::keep_nulls);
    auto drop = build_binned_map(t, s, NullMode::drop_last_bin);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t c = 0; c < 2; ++c) {
            if (keep.level(i, c) == 1u)
                CHECK_FALSE(drop.level(i, c).has_value());
            else
                CHECK(drop.level(i, c) == keep.level(i, c));
        }
    }
}

TEST_CASE("scheme must cover the column population")
{
    TimeTable t({"a", "b", "c"}, {"t1", "t2"}, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    CHECK_THROWS_AS(build_binned_map(t, BinningScheme({{2, 1}}), NullMode::keep_nulls), SchemeCoverageError);
    // absent cells shrink the population
    TimeTable sparse({"a", "b", "c"}, {"t1", "t2"}, {1.0, 2.0, std::nullopt, 4.0, 5.0, std::nullopt});
    CHECK_NOTHROW(build_binned_map(sparse, BinningScheme({{2, 1}}), NullMode::keep_nulls));
}

namespace {

TimeTable random_table(std::mt19937_64& rng, bool ties, bool gaps)
{
    std::uniform_int_distribution<int> items(2, 60), times(2, 8), small(0, 6), hole(0, 7);
    std::uniform_real_distribution<double> real(-3.0, 3.0);
    int p = items(rng), n = times(rng);
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    for (int i = 0; i < p; ++i)
        ids.push_back("i" + std::to_string(i));
    for (int c = 0; c < n; ++c)
        labels.push_back("t" + std::to_string(c));
    std::vector<TimeTable::Cell> cells;
    for (int k = 0; k < p * n; ++k) {
        if (gaps && hole(rng) == 0)
            cells.emplace_back();
        else
            cells.emplace_back(ties ? static_cast<double>(small(rng)) : real(rng));
    }
    return TimeTable(ids, labels, cells);
}

BinningScheme random_scheme(std::mt19937_64& rng, int cover)
{
    std::uniform_int_distribution<int> step(1, 4);
    int first = std::max(1, cover / 3);
    return BinningScheme({{first, 1}, {cover + 1, step(rng)}});
}

} // namespace

TEST_CASE("property: build_binned_map matches a brute-force rank-then-bin oracle")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_table(rng, trial % 2 == 0, trial % 3 == 0);
        auto s = random_scheme(rng, static_cast<int>(t.item_count()));
        auto mode = trial % 4 == 0 ? NullMode::drop_last_bin : NullMode::keep_nulls;
        auto m = build_binned_map(t, s, mode);
        for (std::size_t c = 0; c < t.time_count(); ++c) {
            std::vector<double> present;
            std::vector<std::size_t> who;
            for (std::size_t i = 0; i < t.item_count(); ++i) {
                if (auto v = t.value(i, c)) {
                    present.push_back(*v);
                    who.push_back(i);
                }
            }
            for (std::size_t i = 0; i < t.item_count(); ++i) {
                auto it = std::find(who.begin(), who.end(), i);
                if (it == who.end()) {
                    CHECK_FALSE(m.level(i, c).has_value());
                    continue;
                }
                auto k = static_cast<std::size_t>(it - who.begin());
                auto bin = oracle::bin_of_rank(s.boundaries(), oracle::competition_rank(present, k));
                if (mode == NullMode::drop_last_bin && bin + 1 == s.bin_count())
                    CHECK_FALSE(m.level(i, c).has_value());
                else
                    CHECK(m.level(i, c) == bin);
            }
        }
    }
}

TEST_CASE("property: per-column order consistency and monotone invariance")
{
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        auto t = random_table(rng, trial % 2 == 0, true);
        auto s = random_scheme(rng, static_cast<int>(t.item_count()));
        auto m = build_binned_map(t, s, NullMode::keep_nulls);
        for (std::size_t c = 0; c < t.time_count(); ++c) {
            for (std::size_t i = 0; i < t.item_count(); ++i) {
                for (std::size_t j = 0; j < t.item_count(); ++j) {
                    auto vi = t.value(i, c), vj = t.value(j, c);
                    if (vi && vj && *vi >= *vj)
                        CHECK(*m.level(i, c) <= *m.level(j, c));
                }
            }
        }
        std::vector<TimeTable::Cell> shifted;
        for (std::size_t i = 0; i < t.item_count(); ++i) {
            for (const auto& cell : t.row(i))
                shifted.push_back(cell ? TimeTable::Cell{std::exp(*cell) * 3.0 + 7.0} : std::nullopt);
        }
        TimeTable u(t.items(), t.time_labels(), shifted);
        CHECK(build_binned_map(u, s, NullMode::keep_nulls) == m);
    }
}

TEST_CASE("property: permuting time points permutes map columns")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_table(rng, false, true);
        auto s = random_scheme(rng, static_cast<int>(t.item_count()));
        std::vector<std::size_t> perm(t.time_count());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::string> labels;
        for (auto c : perm)
            labels.push_back(t.time_labels()[c]);
        std::vector<TimeTable::Cell> cells;
        for (std::size_t i = 0; i < t.item_count(); ++i) {
            for (auto c : perm)
                cells.push_back(t.value(i, c));
        }
        TimeTable u(t.items(), labels, cells);
        auto a = build_binned_map(t, s, NullMode::keep_nulls);
        auto b = build_binned_map(u, s, NullMode::keep_nulls);
        for (std::size_t i = 0; i < t.item_count(); ++i) {
            for (std::size_t k = 0; k < perm.size(); ++k)
                CHECK(b.level(i, k) == a.level(i, perm[k]));
        }
    }
}

TEST_CASE("property: identity scheme without ties is a bijection onto 0..p-1")
{
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_table(rng, false, false);
        auto p = static_cast<int>(t.item_count());
        auto m = build_binned_map(t, BinningScheme::identity(p), NullMode::keep_nulls);
        for (std::size_t c = 0; c < t.time_count(); ++c) {
            std::vector<std::size_t> seen;
            for (std::size_t i = 0; i < t.item_count(); ++i)
                seen.push_back(*m.level(i, c));
            std::sort(seen.begin(), seen.end());
            for (std::size_t k = 0; k < seen.size(); ++k)
                CHECK(seen[k] == k);
        }
    }
}

TEST_CASE("map CSV round-trips")
{
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 40; ++trial) {
        auto t = random_table(rng, trial % 2 == 0, true);
        auto s = random_scheme(rng, static_cast<int>(t.item_count()));
        auto mode = trial % 2 ? NullMode::drop_last_bin : NullMode::keep_nulls;
        auto m = build_binned_map(t, s, mode);
        auto text = write_map_csv(m);
        CHECK(text.starts_with("# couples: " + s.to_string() + "\n"));
        CHECK(looks_like_map_csv(text));
        CHECK(parse_map_csv(text) == m);
    }
    CHECK_THROWS_AS(parse_map_csv("# couples: (2,1)\nid,a,b\nx,top-1,top-3\n"), ParseError);
    CHECK_THROWS_AS(parse_map_csv("id,a,b\nx,top-1,top-2\n"), ParseError);
}

TEST_CASE("suggest_scheme")
{
    CHECK(suggest_scheme(191).couples() == gdp);
    CHECK(suggest_scheme(5000).to_string() == "(20,1),(100,5),(1000,25),(5000,100)");
    CHECK(suggest_scheme(7) == BinningScheme::identity(7));
    for (int p : {1, 20, 21, 99, 100, 101, 999, 1000, 1001, 12345})
        CHECK(suggest_scheme(p).last_boundary() >= p);
}
