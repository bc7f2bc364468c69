// test_params_io.cpp — key=value configs and json round trips
#include "uscav/errors.hpp"
#include "uscav/params_io.hpp"

#include <doctest.h>

using namespace uscav;

TEST_CASE("key value parsing with comments") {
    const auto e = parse_key_value("# header\ncoupling_g = 0.5\n\n gamma=0.25 # trailing\n");
    REQUIRE(e.size() == 2);
    CHECK(e[0].key == "coupling_g");
    CHECK(e[1].value == "0.25");
    CHECK(e[1].line == 4);
    const SystemParams p = apply_config(e);
    CHECK(p.coupling_g == 0.5);
    CHECK(p.gamma == 0.25);
}

TEST_CASE("config errors carry the line number") {
    try {
        apply_config(parse_key_value("gamma = 0.1\nnot_a_key = 3\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }
    try {
        apply_config(parse_key_value("n_modes = 0\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 1);
        CHECK(e.field() == "n_modes");
    }
    CHECK_THROWS_AS(parse_key_value("gamma = 1\ngamma = 2\n"), ConfigError);
    CHECK_THROWS_AS(apply_config(parse_key_value("gamma = abc\n")), ConfigError);
    CHECK_NOTHROW(apply_config(parse_key_value("cutoff = 8\n"), {}, {"cutoff"}));
}

TEST_CASE("text and json round trips") {
    SystemParams p;
    p.coupling_g = 0.123456789012345;
    p.gauge = Gauge::Length;
    p.n_modes = 17;
    const SystemParams q = apply_config(parse_key_value(to_config_text(p)));
    CHECK(q.coupling_g == p.coupling_g);
    CHECK(q.gauge == Gauge::Length);
    CHECK(q.n_modes == 17);
    const SystemParams r = params_from_json(to_json(p));
    CHECK(r.lambda0 == p.lambda0);
    CHECK(r.gauge == p.gauge);
}
