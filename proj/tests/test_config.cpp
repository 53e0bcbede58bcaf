#include <sstream>

#include "aoinet/configfile.hpp"
#include "doctest.h"

using namespace aoinet;

namespace {

const char* kSimText = R"(# comment
[meta]
seed = 42

[sim]
access = polling
policy = maf
horizon_s = 3.5

[sources]
n = 6
traffic = periodic
rate_hz = 250
size_bytes = 200
p_pattern = 0.9,0.3
)";

}  // namespace

TEST_CASE("experiment files parse into sim configs") {
    const ExperimentFile exp = parse_experiment(kSimText, "test.cfg");
    REQUIRE(exp.kind == ExperimentFile::Kind::Sim);
    CHECK(exp.sim.seed == 42);
    CHECK(exp.sim.policy == Policy::MaxAgeFirst);
    CHECK(exp.sim.horizon.seconds() == doctest::Approx(3.5));
    REQUIRE(exp.sim.sources.size() == 6);
    CHECK(exp.sim.sources[0].channel_p == 0.9);
    CHECK(exp.sim.sources[1].channel_p == 0.3);
    CHECK(exp.sim.sources[2].channel_p == 0.9);
    CHECK(exp.sim.sources[3].traffic.rate_hz == 250);
    CHECK(exp.sim.sources[0].traffic.kind == sim::TrafficSpec::Kind::Periodic);
}

TEST_CASE("parse-render round trip is the identity") {
    const ExperimentFile exp = parse_experiment(kSimText, "test.cfg");
    const std::string rendered = render_experiment(exp);
    const ExperimentFile again = parse_experiment(rendered, "rendered.cfg");
    CHECK(render_experiment(again) == rendered);
    CHECK(again.sim.config_hash() == exp.sim.config_hash());
    CHECK(again.sim.seed == exp.sim.seed);
    CHECK(again.sim.sources.size() == exp.sim.sources.size());
}

TEST_CASE("config hash is stable across key reordering") {
    const char* reordered = R"(
[sources]
p_pattern = 0.9,0.3
size_bytes = 200
rate_hz = 250
traffic = periodic
n = 6

[sim]
horizon_s = 3.5
policy = maf
access = polling

[meta]
seed = 9
)";
    const ExperimentFile a = parse_experiment(kSimText, "a.cfg");
    const ExperimentFile b = parse_experiment(reordered, "b.cfg");
    CHECK(a.sim.config_hash() == b.sim.config_hash());  // seed excluded by design
}

TEST_CASE("unknown keys and sections are rejected with locations") {
    CHECK_THROWS_WITH_AS(parse_experiment("[sim]\nbogus_key = 1\n", "x.cfg"),
                         doctest::Contains("x.cfg:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment("[warp]\nspeed = 9\n", "x.cfg"),
                         doctest::Contains("unknown section"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment("[sim]\naccess = teleport\n", "x.cfg"),
                         doctest::Contains("polling|random"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment("[sim]\nhorizon_s = soon\n", "x.cfg"),
                         doctest::Contains("number"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment("key = 1\n", "x.cfg"),
                         doctest::Contains("outside any"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment("[sim]\naccess = polling\naccess = random\n", "x.cfg"),
                         doctest::Contains("duplicate"), ConfigError);
}

TEST_CASE("harness configs parse and round trip") {
    const char* text = R"(
[meta]
seed = 5

[harness]
role = source
peer = 127.0.0.1:4000
source_id = 3
profiles = gps,camera
duration_s = 30
timeout_ms = 250
)";
    const ExperimentFile exp = parse_experiment(text, "h.cfg");
    REQUIRE(exp.kind == ExperimentFile::Kind::Harness);
    CHECK(exp.harness.role == harness::Role::Source);
    CHECK(exp.harness.source_id == 3);
    REQUIRE(exp.harness.profiles.size() == 2);
    CHECK(exp.harness.profiles[1] == "camera");

    const std::string rendered = render_experiment(exp);
    const ExperimentFile again = parse_experiment(rendered, "h2.cfg");
    CHECK(render_experiment(again) == rendered);

    SUBCASE("bad profile names are caught") {
        CHECK_THROWS_WITH_AS(
            parse_experiment("[harness]\nrole = source\nprofiles = sonar\n", "h.cfg"),
            doctest::Contains("sonar"), ConfigError);
    }
}

TEST_CASE("sensor profiles carry the advertised rates and sizes") {
    const auto gps = harness::profile_by_name("gps");
    REQUIRE(gps);
    CHECK(gps->size_bytes == 50);
    CHECK(gps->rate_hz == 1.0);
    const auto imu = harness::profile_by_name("imu");
    REQUIRE(imu);
    CHECK(imu->size_bytes == 20);
    CHECK(imu->rate_hz == 100.0);
    const auto cam = harness::profile_by_name("camera");
    REQUIRE(cam);
    CHECK(cam->size_bytes == 19000);
    CHECK(cam->rate_hz == 2.0);
    CHECK(!harness::profile_by_name("lidar"));
}
