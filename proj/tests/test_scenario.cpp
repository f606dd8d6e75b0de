#include "doctest.h"

#include <string>

#include "sixpp/scenario.hpp"

using namespace sixpp;

TEST_SUITE("scenario") {

TEST_CASE("parsing applies sections, comments and defaults") {
    const char* text =
        "# smoke scenario\n"
        "[run]\n"
        "mode = baseline\n"
        "seed = 9\n"
        "\n"
        "[topology]\n"
        "kind = grid\n"
        "rows = 3  # lattice height\n"
        "cols = 4\n"
        "prr = 0.85\n"
        "\n"
        "[ct]\n"
        "phy = LE_CODED_500K\n"
        "n_h = 6\n";
    ScenarioConfig cfg = parse_scenario(text);
    CHECK(cfg.mode == MacMode::BASELINE_6TISCH_MINIMAL);
    CHECK(cfg.seed == 9);
    CHECK(cfg.topology.kind == TopologySpec::Kind::GRID);
    CHECK(cfg.topology.rows == 3);
    CHECK(cfg.topology.cols == 4);
    CHECK(cfg.topology.prr == doctest::Approx(0.85));
    CHECK(cfg.timing.phy == PhyMode::LE_CODED_500K);
    CHECK(cfg.n_h == 6);
    // Untouched keys keep their defaults.
    CHECK(cfg.run_duration_us == 60'000'000);
    CHECK(cfg.n_tx == 2);
    CHECK(cfg.mac.eb_period_us == 4'000'000);
    CHECK(cfg.hopping.ct_channels == std::vector<unsigned>{37, 38, 39});
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            parse_scenario(text);
        } catch (const ScenarioError& e) {
            return e.line();
        }
        return 0u;
    };
    CHECK(line_of("[run\n") == 1);
    CHECK(line_of("[]\n") == 1);
    CHECK(line_of("[run]\nnonsense\n") == 2);
    CHECK(line_of("seed = 1\n") == 1);         // key before any section
    CHECK(line_of("[run]\n = 5\n") == 2);      // empty key
    CHECK(line_of("[run]\n\n[nope]\nx = 1\n") == 4);
    CHECK(line_of("[run]\nseed = banana\n") == 2);

    CHECK_THROWS_WITH_AS(parse_scenario("[run]\nseed = banana\n"),
                         "line 2: expected an unsigned integer, got 'banana'", ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("[run]\nwat = 1\n"),
                         "line 2: unknown key 'wat' in [run]", ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("[gibberish]\nx = 1\n"),
                         "line 2: unknown section [gibberish]", ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("[run]\nmode = fancy\n"),
                         "line 2: unknown mode 'fancy' (sixpp or baseline)", ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("[ct]\nphy = LE_4M\n"), "line 2: unknown PHY 'LE_4M'",
                         ScenarioError);
    CHECK_THROWS_WITH_AS(parse_scenario("[run]\nseed = -3\n"),
                         "line 2: expected an unsigned integer, got '-3'", ScenarioError);
}

TEST_CASE("serialization round trips and is a fixed point") {
    ScenarioConfig cfg;
    cfg.seed = 77;
    cfg.mode = MacMode::BASELINE_6TISCH_MINIMAL;
    cfg.topology.kind = TopologySpec::Kind::RGG;
    cfg.topology.n = 21;
    cfg.topology.radius = 0.45;
    cfg.topology.prr = 0.95;
    cfg.jammer.enabled = true;
    cfg.jammer.active_windows = {{1'000'000, 2'000'000}, {5'000'000, 9'000'000}};
    cfg.app.enabled = true;
    cfg.drift_mode = DriftMode::ALTERNATE;

    const std::string text = serialize_scenario(cfg);
    ScenarioConfig back = parse_scenario(text);
    CHECK(serialize_scenario(back) == text);
    CHECK(back.seed == 77);
    CHECK(back.topology.kind == TopologySpec::Kind::RGG);
    CHECK(back.topology.radius == doctest::Approx(0.45));
    CHECK(back.jammer.active_windows.size() == 2);
    CHECK(back.jammer.active_windows[1].second == 9'000'000);
    CHECK(back.drift_mode == DriftMode::ALTERNATE);
    CHECK(scenario_hash(back) == scenario_hash(cfg));
}

TEST_CASE("overrides use dotted keys") {
    ScenarioConfig cfg;
    apply_override(cfg, "run.mode", "baseline");
    apply_override(cfg, "ct.n_h", "12");
    apply_override(cfg, "hopping.ct_channels", "37, 38, 39, 40");
    CHECK(cfg.mode == MacMode::BASELINE_6TISCH_MINIMAL);
    CHECK(cfg.n_h == 12);
    CHECK(cfg.hopping.ct_channels.size() == 4);
    CHECK_THROWS_AS(apply_override(cfg, "nodot", "1"), ScenarioError);
    CHECK_THROWS_AS(apply_override(cfg, "run.", "1"), ScenarioError);
    CHECK_THROWS_AS(apply_override(cfg, "run.nope", "1"), ScenarioError);

    const std::uint64_t h0 = scenario_hash(cfg);
    apply_override(cfg, "run.seed", "555");
    CHECK(scenario_hash(cfg) != h0);
}

TEST_CASE("validation accepts the defaults and rejects broken shapes") {
    ScenarioConfig cfg;
    cfg.topology.n = 8;
    CHECK_NOTHROW(validate_scenario(cfg));

    auto rejects = [](void (*mutate)(ScenarioConfig&), const char* what) {
        ScenarioConfig bad;
        bad.topology.n = 8;
        mutate(bad);
        CHECK_THROWS_WITH_AS(validate_scenario(bad), what, ScenarioError);
    };
    rejects([](ScenarioConfig& c) { c.run_duration_us = 0; }, "duration_us must be positive");
    rejects([](ScenarioConfig& c) { c.topology.prr = 0.0; }, "topology prr must be in (0, 1]");
    rejects([](ScenarioConfig& c) { c.n_tx = 0; }, "n_tx must be positive");
    rejects([](ScenarioConfig& c) { c.hopping.ct_channels.clear(); },
            "ct_channels must not be empty");
    rejects([](ScenarioConfig& c) { c.jammer.jam_loss = 1.5; }, "jam_loss must be in [0, 1]");
    rejects([](ScenarioConfig& c) { c.jammer.active_windows = {{5, 5}}; },
            "jammer window start must precede its end");
    rejects([](ScenarioConfig& c) { c.mac.eb_jitter_frac = 0.6; },
            "eb_jitter_frac must be in [0, 0.5]");
    rejects([](ScenarioConfig& c) { c.mac.backoff_exponent_min = 5; c.mac.backoff_exponent_max = 4; },
            "backoff exponents must satisfy 1 <= min <= max <= 16");
    rejects([](ScenarioConfig& c) { c.rpl.dao_retx_cap_us = 1; },
            "dao_retx_cap_us must be >= dao_retx_us");
    rejects([](ScenarioConfig& c) { c.drift_ppm_max = 500; }, "drift ppm_max must be <= 200");

    // The flood window must leave shared slots behind.
    ScenarioConfig tight;
    tight.topology.n = 8;
    tight.total_slots = 2;
    tight.n_h = 16;  // window needs 2 of the 2 slots
    CHECK_THROWS_WITH_AS(validate_scenario(tight),
                         "flood window leaves no shared slots in the slotframe", ScenarioError);

    // Window rotation must cycle through every ct channel.
    ScenarioConfig rot;
    rot.topology.n = 8;
    rot.floods_per_frame = 3;  // gcd(3, 3 channels) != 1
    CHECK_THROWS_WITH_AS(validate_scenario(rot),
                         "floods_per_frame must be coprime with the ct channel count",
                         ScenarioError);

    // Disconnected topologies are caught before any run starts.
    ScenarioConfig torn;
    torn.topology.kind = TopologySpec::Kind::RGG;
    torn.topology.n = 30;
    torn.topology.radius = 0.05;
    CHECK_THROWS_AS(validate_scenario(torn), ScenarioError);
}

TEST_CASE("layout derivation per mode") {
    ScenarioConfig cfg;
    cfg.topology.n = 8;
    cfg.n_h = 16;  // 18 micro-slots of 320 us, 2 floods: 11520 us
    SlotframeLayout flood = cfg.layout_for(MacMode::SIXPP);
    CHECK(flood.total_slots == 101);
    CHECK(flood.ct_reserved_slots == 2);
    CHECK(flood.shared_slots == 99);
    SlotframeLayout base = cfg.layout_for(MacMode::BASELINE_6TISCH_MINIMAL);
    CHECK(base.total_slots == 1);
    CHECK(base.ct_reserved_slots == 0);
    CHECK(base.shared_slots == 1);
    CHECK(cfg.ct_window().t_slot_us == 320);
    CHECK(cfg.ct_window().micro_slots_per_flood() == 18);
}

TEST_CASE("capture model and jammer windows") {
    CaptureModel capture;
    capture.gamma_small = 0.95;
    capture.gamma_large = 0.8;
    CHECK(capture.gamma(0) == doctest::Approx(1.0));
    CHECK(capture.gamma(1) == doctest::Approx(1.0));
    CHECK(capture.gamma(2) == doctest::Approx(0.95));
    CHECK(capture.gamma(3) == doctest::Approx(0.95));
    CHECK(capture.gamma(4) == doctest::Approx(0.8));

    JammerConfig jam;
    jam.enabled = true;
    jam.channels = {22, 39};
    jam.jam_loss = 1.0;
    CHECK(jam.active_on(22, 0));
    CHECK_FALSE(jam.active_on(23, 0));
    CHECK(jam.factor(22, 0) == doctest::Approx(0.0));
    CHECK(jam.factor(23, 0) == doctest::Approx(1.0));

    jam.active_windows = {{1000, 2000}};
    CHECK(jam.active_on(22, 1500));
    CHECK_FALSE(jam.active_on(22, 2500));
    jam.jam_loss = 0.75;
    CHECK(jam.factor(22, 1500) == doctest::Approx(0.25));

    jam.enabled = false;
    CHECK_FALSE(jam.active_on(22, 1500));
    CHECK(jam.factor(22, 1500) == doctest::Approx(1.0));
}

TEST_CASE("drift assignment modes") {
    Rng rng(5);
    ScenarioConfig cfg;
    cfg.drift_ppm_max = 40;

    cfg.drift_mode = DriftMode::NONE;
    CHECK(cfg.drift_for(3, rng) == 0);

    cfg.drift_mode = DriftMode::ALTERNATE;
    CHECK(cfg.drift_for(0, rng) == 40);
    CHECK(cfg.drift_for(1, rng) == -40);
    CHECK(cfg.drift_for(2, rng) == 40);

    cfg.drift_mode = DriftMode::UNIFORM;
    bool varied = false;
    std::int32_t first = cfg.drift_for(0, rng);
    for (NodeId v = 0; v < 32; ++v) {
        std::int32_t d = cfg.drift_for(v, rng);
        CHECK(d >= -40);
        CHECK(d <= 40);
        CHECK(d == cfg.drift_for(v, rng));  // stable per node
        if (d != first)
            varied = true;
    }
    CHECK(varied);
}

}  // TEST_SUITE
