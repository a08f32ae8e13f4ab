#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "najulia/io.hpp"

using namespace najulia;

TEST_CASE("param spec json round trip") {
    const auto hd = ParamSpec::hd_max(128);
    const auto hd2 = param_spec_from_json(param_spec_to_json(hd));
    CHECK(hd2.kind() == SpecKind::HdMaxFormula);
    CHECK_FALSE(hd2.declared_bounded());
    CHECK(hd2.horizon_default() == 128);

    const auto cs = ParamSpec::constant({5.0, -1.5}, 3);
    const auto cs2 = param_spec_from_json(param_spec_to_json(cs));
    CHECK(cs2.kind() == SpecKind::ConstantFormula);
    CHECK(cs2.declared_bounded());
    CHECK(cs2.param(7).c == Complex(5.0, -1.5));
    CHECK(cs2.param(7).m == 3);

    const auto ex = ParamSpec::explicit_list({{{5.0, 0.5}, 2}, {{6.0, 0.0}, 4}}, true);
    const auto ex2 = param_spec_from_json(param_spec_to_json(ex));
    CHECK(ex2.kind() == SpecKind::ExplicitList);
    CHECK(ex2.max_k() == 2);
    CHECK(ex2.param(2).m == 4);
    CHECK(ex2.declared_bounded());
}

TEST_CASE("param spec json parsing errors") {
    CHECK_THROWS_AS(param_spec_from_json(json::parse(R"({"kind": "mystery"})")), ConfigParseError);
    CHECK_THROWS_AS(param_spec_from_json(json::parse(R"({"kind": "constant", "c": [1], "m": 2})")),
                    ConfigParseError);
    CHECK_THROWS_AS(param_spec_from_json(json::parse(R"({"kind": "constant", "m": 2})")),
                    ConfigParseError);
    CHECK_THROWS_AS(param_spec_from_json(json::parse(R"({"kind": "explicit", "list": [[1, 0, 2.5]]})")),
                    ConfigParseError);
    CHECK_THROWS_AS(param_spec_from_json(json::parse(R"([1, 2, 3])")), ConfigParseError);
}

TEST_CASE("word json and labels") {
    Word w{{3, 0, 7}};
    CHECK(to_json(w).dump() == "[3,0,7]");
    CHECK(word_label(w) == "3-0-7");
    CHECK(word_label(Word{}) == "");
}

TEST_CASE("report json shapes") {
    const auto spec = ParamSpec::hd_max();
    const auto vj = to_json(validate(spec, 3));
    CHECK(vj["all_strong"].get<bool>());
    CHECK(vj["rows"].size() == 3);

    const auto dj = to_json(bowen_estimate(spec, 16));
    CHECK(dj["K"].get<std::int64_t>() == 16);
    CHECK(dj["trend"].size() == 5); // k = 1, 2, 4, 8, 16
}

TEST_CASE("trend includes K exactly once when K is a power of two") {
    const auto rep = bowen_estimate(ParamSpec::hd_max(), 16);
    int seen = 0;
    for (const auto& t : rep.trend)
        if (t.k == 16)
            ++seen;
    CHECK(seen == 1);
}

TEST_CASE("csv writers emit stable headers") {
    const auto spec = ParamSpec::constant({5.0, 0.0}, 2);
    write_thinness_csv(thinness_table(spec, 3), "io_thin.csv");
    std::ifstream in("io_thin.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,modulus,diam_bound,count");
    std::getline(in, line);
    CHECK(line.rfind("1,", 0) == 0);
    in.close();
    std::remove("io_thin.csv");

    const auto pts = limit_points(spec, 1);
    write_limit_points_csv(spec, 1, pts, "io_pts.csv");
    std::ifstream in2("io_pts.csv");
    std::getline(in2, line);
    CHECK(line == "word,re,im,radius_bound");
    std::getline(in2, line);
    CHECK(line.rfind("0,", 0) == 0);
    in2.close();
    std::remove("io_pts.csv");
}
