#include <doctest.h>

#include <fstream>

#include "kroner/errors.hpp"
#include "kroner/json_io.hpp"
#include "kroner/probes.hpp"
#include "oracles.hpp"

using namespace kroner;
using nlohmann::json;
using oracle::mat;
using oracle::P;

TEST_CASE("rationals") {
    CHECK(parse_rat("3") == Rat(3));
    CHECK(parse_rat("-2/5") == Rat(-2, 5));
    CHECK(parse_rat("0.25") == Rat(1, 4));
    CHECK(parse_rat("-1.5") == Rat(-3, 2));
    CHECK(parse_rat("4/8") == Rat(1, 2));
    CHECK(parse_rat("010") == Rat(10));
    CHECK(parse_rat("0.0625") == Rat(1, 16));
    for (const char* bad : {"", "1/0", "abc", "1//2", "0.2.5"}) CHECK_THROWS_AS(parse_rat(bad), ParseError);
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("polynomial strings") {
    const Poly p = parse_poly(3, "x2^2 - 3/2*x1*x3 + 4");
    CHECK(p.coefficient(Exponent{0, 2, 0}) == Rat(1));
    CHECK(p.coefficient(Exponent{1, 0, 1}) == Rat(-3, 2));
    CHECK(p.coefficient(Exponent{0, 0, 0}) == Rat(4));
    CHECK(parse_poly(2, "0").is_zero());
    CHECK(parse_poly(2, "-x1") == Rat(-1) * P("x1", 2));
    CHECK_THROWS_AS(parse_poly(2, "x3"), ParseError);
    CHECK_THROWS_AS(parse_poly(3, "x1 +"), ParseError);
    CHECK_THROWS_AS(parse_poly(3, "x1^"), ParseError);
}

TEST_CASE("property: polynomial and field round trips") {
    SplitMix64 rng(90);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + trial % 2;
        const Poly p = random_poly(dim, 4, rng);
        CHECK(poly_from_json(dim, poly_to_json(p)) == p);
        CHECK(parse_poly(dim, p.to_string()) == p);
        const TensorField s = random_symmetric_field(dim, 3, rng);
        CHECK(symmetric_field_from_json(field_to_json(s)) == s);
        const TensorField v = random_vector_field(dim, 3, rng);
        CHECK(field_from_json(json::parse(field_to_json(v).dump())) == v);
    }
}

TEST_CASE("field JSON") {
    const json j = json::parse(R"({"dim":3,"shape":"matrix","entries":{"1,2":"x2","2,1":"x2"}})");
    CHECK(symmetric_field_from_json(j) == mat({"0", "x2", "0", "x2", "0", "0", "0", "0", "0"}, 3, true));
    const json skew = json::parse(R"({"dim":3,"shape":"matrix","entries":{"1,2":"x2","2,1":"x3"}})");
    CHECK_NOTHROW(field_from_json(skew));
    try {
        (void)symmetric_field_from_json(skew);
        FAIL("expected SymmetryError");
    } catch (const SymmetryError& e) {
        CHECK(std::string(e.what()).find("entry 1,2") != std::string::npos);
    }
    CHECK_THROWS_AS(symmetric_field_from_json(json::parse(R"({"dim":3,"shape":"vector","entries":{"1":"x1"}})")),
                    ShapeError);
    CHECK_THROWS_AS(field_from_json(json::parse(R"({"dim":4,"shape":"matrix","entries":{}})")), ParseError);
    CHECK_THROWS_AS(field_from_json(json::parse(R"({"dim":3,"shape":"matrix","entries":{"4,1":"1"}})")), ParseError);
    CHECK_THROWS_AS(field_from_json(json::parse(R"({"dim":3,"shape":"matrix","entries":{"1,1":"x9"}})")), ParseError);
    CHECK_THROWS_AS(field_from_json(json::parse(R"({"shape":"matrix"})")), ParseError);
}

TEST_CASE("path JSON and files") {
    const PathSpec p = path_from_json(json::parse(R"({"vertices":[[0,0,0],[1,0,0],[1,2,3]]})"));
    CHECK(p.vertices().size() == 3);
    CHECK(path_from_json(path_to_json(p)).vertices() == p.vertices());
    CHECK_THROWS_AS(path_from_json(json::parse(R"({"vertices":[[0,0,0]]})")), PathError);
    CHECK_THROWS_AS(path_from_json(json::parse(R"({"vertices":[[0,0,0],["a",0,0]]})")), ParseError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/strain.json"), ParseError);
    const std::string tmp = "test_json_io_malformed.json";
    std::ofstream(tmp) << "{\"dim\": 3,";
    CHECK_THROWS_AS(read_json_file(tmp), ParseError);
    std::remove(tmp.c_str());
}
