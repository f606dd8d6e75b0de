#include "doctest.h"

#include <string>

#include "sixpp/tschmac.hpp"

using namespace sixpp;

TEST_SUITE("tschmac") {

TEST_CASE("local clock is an affine map of true time") {
    ClockModel fast{40, 0};
    CHECK(fast.local_of_true(0) == 0);
    CHECK(fast.local_of_true(1'000'000) == 1'000'040);
    CHECK(fast.local_of_true(25'000) == 25'001);

    ClockModel slow{-40, 0};
    CHECK(slow.local_of_true(1'000'000) == 999'960);

    ClockModel shifted{0, 12'345};
    CHECK(shifted.local_of_true(1'000) == 13'345);
}

TEST_CASE("true_of_local inverts to the floor preimage") {
    const std::int32_t drifts[] = {-200, -40, -1, 0, 1, 40, 200};
    const std::int64_t offsets[] = {-12'345, 0, 98'765};
    const SimTime times[] = {0, 1, 999'999, 1'000'000, 123'456'789};
    for (std::int32_t drift : drifts) {
        for (std::int64_t offset : offsets) {
            ClockModel clock{drift, offset};
            for (SimTime t : times) {
                const std::int64_t local = clock.local_of_true(t);
                const std::int64_t back = clock.true_of_local(local);
                CHECK(back >= std::int64_t(t));
                CHECK(clock.local_of_true(SimTime(back)) <= local);
                CHECK(clock.local_of_true(SimTime(back) + 1) > local);
            }
        }
    }
}

TEST_CASE("predicted boundaries follow the drifting clock") {
    ClockModel ideal{0, 0};
    SyncAnchor anchor{50'000, 5};
    CHECK(predicted_boundary_true(ideal, anchor, 8, 10'000) == 80'000);
    CHECK(predicted_boundary_true(ideal, anchor, 5, 10'000) == 50'000);
    CHECK(sync_error_us(ideal, anchor, 8, 10'000, 80'000) == 0);
    CHECK(sync_error_us(ideal, anchor, 8, 10'000, 79'990) == 10);

    // A clock running 100 ppm fast fires the boundary one slotframe later
    // about 100 us early in true time.
    ClockModel fast{100, 0};
    SyncAnchor zero{0, 0};
    CHECK(predicted_boundary_true(fast, zero, 100, 10'000) == 999'901);
    CHECK(sync_error_us(fast, zero, 100, 10'000, 1'000'000) == -99);
}

TEST_CASE("backoff doubles its window up to the cap") {
    MacParams params;
    params.backoff_exponent_min = 1;
    params.backoff_exponent_max = 3;
    Rng rng(7);
    TschNodeState state;
    reset_backoff(state, params);
    CHECK(state.backoff_exponent == 1);
    CHECK(state.backoff_counter == 0);

    apply_backoff(state, params, rng, 4);
    CHECK(state.backoff_counter < 2);  // drawn before the exponent grows
    CHECK(state.backoff_exponent == 2);
    apply_backoff(state, params, rng, 4);
    CHECK(state.backoff_counter < 4);
    CHECK(state.backoff_exponent == 3);
    apply_backoff(state, params, rng, 4);
    CHECK(state.backoff_counter < 8);
    CHECK(state.backoff_exponent == 3);  // capped
    CHECK(state.backoff_draws == 3);

    // Same seed and draw index reproduce the same counters.
    TschNodeState again;
    reset_backoff(again, params);
    Rng rng2(7);
    apply_backoff(again, params, rng2, 4);
    TschNodeState first;
    reset_backoff(first, params);
    apply_backoff(first, params, Rng(7), 4);
    CHECK(again.backoff_counter == first.backoff_counter);

    reset_backoff(state, params);
    CHECK(state.backoff_exponent == 1);
    CHECK(state.backoff_counter == 0);
    CHECK(state.backoff_draws == 3);  // draw history survives the reset
}

TEST_CASE("mode names") {
    CHECK(std::string(mac_mode_name(MacMode::SIXPP)) == "sixpp");
    CHECK(std::string(mac_mode_name(MacMode::BASELINE_6TISCH_MINIMAL)) == "baseline");
}

}  // TEST_SUITE
