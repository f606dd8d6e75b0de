#include "doctest.h"

#include "sixpp/metrics.hpp"

using namespace sixpp;

TEST_SUITE("metrics") {

TEST_CASE("latency aggregation") {
    CHECK(aggregate({}).empty());

    LatencySummary one = aggregate({4200});
    CHECK(one.count == 1);
    CHECK(one.mean_us == doctest::Approx(4200.0));
    CHECK(one.median_us == doctest::Approx(4200.0));
    CHECK(one.p95_us == doctest::Approx(4200.0));

    // An outlier moves the mean but not the median.
    LatencySummary odd = aggregate({100'000, 1000, 3000, 2000, 4000});
    CHECK(odd.count == 5);
    CHECK(odd.mean_us == doctest::Approx(22'000.0));
    CHECK(odd.median_us == doctest::Approx(3000.0));
    CHECK(odd.p95_us == doctest::Approx(100'000.0));

    LatencySummary even = aggregate({3000, 1000});
    CHECK(even.median_us == doctest::Approx(2000.0));

    // Nearest-rank p95: 19th of 20 values.
    std::vector<std::uint64_t> ramp;
    for (std::uint64_t v = 20; v >= 1; --v)
        ramp.push_back(v * 100);
    LatencySummary p = aggregate(ramp);
    CHECK(p.p95_us == doctest::Approx(1900.0));
}

TEST_CASE("first association and first dao delta stick") {
    MetricsRecord rec;
    rec.resize(3);
    CHECK(rec.assoc_latencies().empty());
    rec.record_assoc(1, 500);
    rec.record_assoc(1, 900);  // reassociation keeps the first latency
    rec.record_assoc(2, 700);
    CHECK(rec.assoc_latency_us[1] == 500);
    CHECK_FALSE(rec.assoc_latency_us[0].has_value());
    CHECK(rec.assoc_latencies() == std::vector<std::uint64_t>{500, 700});

    rec.record_dao_delta(2, 1200);
    rec.record_dao_delta(2, 3400);
    CHECK(rec.dao_deltas() == std::vector<std::uint64_t>{1200});
}

TEST_CASE("delivery bookkeeping and reliability") {
    MetricsRecord rec;
    rec.resize(4);
    CHECK(rec.reliability_pct() == doctest::Approx(100.0));  // nothing expected

    rec.expect_delivery(1, 0);
    rec.expect_delivery(2, 0);
    rec.expect_delivery(2, 3);
    rec.expect_delivery(3, 0);
    CHECK(rec.expected_count() == 4);

    CHECK_FALSE(rec.record_delivery(9, 0, 100));  // never expected
    CHECK(rec.record_delivery(1, 0, 2500));
    CHECK_FALSE(rec.record_delivery(1, 0, 9999));  // duplicate keeps the first
    CHECK(rec.record_delivery(2, 3, 4500));
    CHECK(rec.record_delivery(2, 0, 3500));

    CHECK(rec.delivered_count() == 3);
    CHECK(rec.reliability_pct() == doctest::Approx(75.0));
    auto lats = rec.delivered_latencies();
    CHECK(aggregate(lats).count == 3);
    CHECK(aggregate(lats).median_us == doctest::Approx(3500.0));
}

}  // TEST_SUITE
