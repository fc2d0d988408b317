#include "doctest.h"

#include <cstdlib>
#include <string>

#include "sweep/scenario.hpp"

using sweep::ErrorKind;

namespace {

template <class F>
sweep::Error error_of(F&& f) {
    try {
        f();
    } catch (const sweep::Error& e) {
        return e;
    }
    FAIL("no error thrown");
    return sweep::Error(ErrorKind::InvalidArgument, "");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("builtins are listed with descriptions") {
    const auto all = sweep::list_builtins();
    CHECK(all.size() >= 6);
    for (const char* name : {"static_ball", "sweep_halfspace", "shrinking_ball_inner_cert", "moving_obstacle",
                             "polytope_rotation", "jump_expansion"}) {
        CHECK(sweep::is_builtin(name));
    }
    for (const auto& [name, desc] : all) {
        CHECK_FALSE(desc.empty());
        if (name == "jump_expansion") CHECK(desc.find("excess-continuous") != std::string::npos);
    }
}

TEST_CASE("sweep_halfspace fixture") {
    const auto s = sweep::parse_scenario(sweep::builtin_text("sweep_halfspace"));
    CHECK(s.dim == 2);
    CHECK(s.horizon == 2.0);
    const auto* tr = std::get_if<sweep::TranslateFamily>(&s.family.kind());
    REQUIRE(tr != nullptr);
    CHECK(tr->base.tag() == "halfspace");
}

TEST_CASE("every builtin round-trips through serialization") {
    for (const auto& [name, desc] : sweep::list_builtins()) {
        INFO(name);
        const auto s = sweep::load_scenario(name);
        const std::string text = sweep::serialize_scenario(s);
        const auto back = sweep::parse_scenario(text);
        CHECK(back == s);
        CHECK(sweep::serialize_scenario(back) == text);
    }
}

TEST_CASE("schema errors") {
    const std::string ok = sweep::builtin_text("static_ball");
    const auto outside = error_of([&] { (void)sweep::parse_scenario(replace(ok, "[0.5, 0]", "[1.5, 0]")); });
    CHECK(outside.kind() == ErrorKind::InfeasibleInitialPoint);
    CHECK(std::string(outside.what()).find("defect") != std::string::npos);

    const auto radius = error_of([&] { (void)sweep::parse_scenario(replace(ok, "\"radius\": 1", "\"radius\": 0")); });
    CHECK(radius.kind() == ErrorKind::SchemaError);
    CHECK(std::string(radius.what()).find("radius") != std::string::npos);

    const auto tag = error_of([&] { (void)sweep::parse_scenario(replace(ok, "\"type\": \"ball\"", "\"type\": \"blob\"")); });
    CHECK(tag.kind() == ErrorKind::UnknownShapeTag);

    const auto syntax = error_of([&] { (void)sweep::parse_scenario(replace(ok, "\"dim\": 2,", "\"dim\": 2")); });
    CHECK(syntax.kind() == ErrorKind::SchemaError);
    CHECK(std::string(syntax.what()).find("line 5") != std::string::npos);

    const auto dim = error_of([&] { (void)sweep::parse_scenario(replace(ok, "[0.5, 0]", "[0.5, 0, 0]")); });
    CHECK(dim.kind() == ErrorKind::SchemaError);
    CHECK(std::string(dim.what()).find("/y0") != std::string::npos);

    const auto missing = error_of([&] { (void)sweep::parse_scenario(replace(ok, "\"ball_bound\": {\"w\": [0, 0], \"rho\": 0.6},", "")); });
    CHECK(missing.kind() == ErrorKind::SchemaError);
    CHECK(std::string(missing.what()).find("ball_bound") != std::string::npos);

    const auto ratio = error_of([&] { (void)sweep::parse_scenario(replace(ok, "\"ratio\": 0.5", "\"ratio\": 1.5")); });
    CHECK(ratio.kind() == ErrorKind::SchemaError);
}

TEST_CASE("unknown names and missing files") {
    CHECK(error_of([] { (void)sweep::builtin_text("nope"); }).kind() == ErrorKind::InvalidArgument);
    CHECK(error_of([] { (void)sweep::load_scenario("/nonexistent/file.json"); }).kind() == ErrorKind::IoError);
}

TEST_CASE("SWEEP_SEED overrides the scenario seed") {
    const auto s = sweep::load_scenario("moving_obstacle");
    ::unsetenv("SWEEP_SEED");
    CHECK(sweep::effective_seed(s) == s.seed);
    ::setenv("SWEEP_SEED", "12345", 1);
    CHECK(sweep::effective_seed(s) == 12345);
    ::setenv("SWEEP_SEED", "abc", 1);
    CHECK_THROWS_AS(sweep::effective_seed(s), sweep::Error);
    ::unsetenv("SWEEP_SEED");
}
