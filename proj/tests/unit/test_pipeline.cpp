#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "qnnbench/pipeline.hpp"
#include "support/helpers.hpp"

using namespace qnn::pipeline;
using testutil::TempDir;
using testutil::write_file;

#ifndef QNNBENCH_TEST_DATA_DIR
#error "QNNBENCH_TEST_DATA_DIR must point at the committed fixtures"
#endif

namespace {

const std::string kTiny = std::string(QNNBENCH_TEST_DATA_DIR) + "/tiny_archive";
const std::string kRtf = std::string(QNNBENCH_TEST_DATA_DIR) + "/rtf_fixture";

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("rms fixtures") {
    CHECK(rms(std::vector<double>{1.0, -1.0, 1.0, -1.0}) == doctest::Approx(1.0));
    CHECK(rms(std::vector<double>{3.0, 4.0}) == doctest::Approx(std::sqrt(12.5)));
    CHECK(rms(std::vector<double>{0.0, 0.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(rms(std::vector<double>{}), qnn::contract_error);
}

TEST_CASE("snapshot archive loads sorted with uniform channels") {
    auto a = load_snapshots(kTiny);
    REQUIRE(a.snapshots.size() == 3);
    CHECK(a.channel_count == 4);
    CHECK(a.timestamps[0] == "2003.10.22.12.06.24");
    CHECK(a.timestamps[2] == "2003.10.22.12.26.24");
    CHECK(std::is_sorted(a.timestamps.begin(), a.timestamps.end()));
    REQUIRE(a.snapshots[0].size() == 8);
    CHECK(a.snapshots[0][1][0] == 4.0);
    CHECK(a.snapshots[1][7][1] == 6.0);
}

TEST_CASE("rms feature table matches hand-computed values") {
    auto t = rms_features(load_snapshots(kTiny));
    REQUIRE(t.rows.size() == 3);
    REQUIRE(t.rows[0].size() == 4);
    CHECK(t.rows[0][0] == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
    CHECK(t.rows[0][1] == doctest::Approx(1.0));
    CHECK(t.rows[0][2] == doctest::Approx(1.0));
    CHECK(t.rows[0][3] == doctest::Approx(0.0));
    CHECK(t.rows[1][0] == doctest::Approx(2.0));
    CHECK(t.rows[1][1] == doctest::Approx(std::sqrt(4.5)).epsilon(1e-12));
    CHECK(t.rows[1][2] == doctest::Approx(5.0));
    CHECK(t.rows[1][3] == doctest::Approx(std::sqrt(25.5)).epsilon(1e-12));
    CHECK(t.rows[2][2] == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));

    // the streaming loader agrees with the in-memory one
    auto s = rms_features_from_dir(kTiny);
    CHECK(s.rows == t.rows);
    CHECK(s.timestamps == t.timestamps);
}

TEST_CASE("malformed archives are rejected with location info") {
    TempDir dir("badarch");
    SUBCASE("bad filename") {
        write_file(dir.path() / "notatimestamp.txt", "1 2\n");
        CHECK_THROWS_AS(load_snapshots(dir.path().string()), qnn::format_error);
    }
    SUBCASE("ragged rows") {
        write_file(dir.path() / "2004.01.01.00.00.00", "1\t2\t3\n4\t5\n");
        try {
            load_snapshots(dir.path().string());
            FAIL("expected format_error");
        } catch (const qnn::format_error& e) {
            const std::string msg = e.what();
            CHECK(msg.find(":2") != std::string::npos);  // offending line
        }
    }
    SUBCASE("non-numeric cell") {
        write_file(dir.path() / "2004.01.01.00.00.00", "1\t2\n3\tx\n");
        CHECK_THROWS_AS(load_snapshots(dir.path().string()), qnn::format_error);
    }
    SUBCASE("channel count changes between files") {
        write_file(dir.path() / "2004.01.01.00.00.00", "1\t2\n");
        write_file(dir.path() / "2004.01.01.00.00.01", "1\t2\t3\n");
        CHECK_THROWS_AS(load_snapshots(dir.path().string()), qnn::format_error);
    }
    SUBCASE("empty file") {
        write_file(dir.path() / "2004.01.01.00.00.00", "");
        CHECK_THROWS_AS(load_snapshots(dir.path().string()), qnn::format_error);
    }
    SUBCASE("missing directory") {
        CHECK_THROWS_AS(load_snapshots((dir.path() / "nope").string()), qnn::format_error);
    }
}

TEST_CASE("blank lines are tolerated") {
    TempDir dir("blank");
    write_file(dir.path() / "2004.01.01.00.00.00", "1\t2\n\n3\t4\n");
    auto a = load_snapshots(dir.path().string());
    CHECK(a.snapshots[0].size() == 2);
}

TEST_CASE("mahalanobis distance against a hand-inverted covariance") {
    const std::vector<std::vector<double>> ref{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
    // mean (1,1), covariance (4/3) I; D((4,1)) = sqrt(9 * 3/4)
    auto m = fit_mahalanobis(ref);
    CHECK(m.distance(std::vector<double>{4.0, 1.0}) ==
          doctest::Approx(std::sqrt(6.75)).epsilon(1e-12));
    CHECK(m.distance(std::vector<double>{1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(mahalanobis(std::vector<double>{4.0, 1.0}, ref) ==
          doctest::Approx(std::sqrt(6.75)).epsilon(1e-12));
    CHECK_THROWS_AS(m.distance(std::vector<double>{1.0}), qnn::contract_error);
}

TEST_CASE("degenerate covariance: ridge rescue, then honest failure") {
    // one constant column: ridge makes deviations along it register as huge
    const std::vector<std::vector<double>> semi{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}};
    auto m = fit_mahalanobis(semi);
    const double d = m.distance(std::vector<double>{2.0, 5.0});
    CHECK(std::isfinite(d));
    CHECK(d > 1000.0);

    const std::vector<std::vector<double>> flat(5, std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(fit_mahalanobis(flat), qnn::degeneracy_error);

    const std::vector<std::vector<double>> few{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(fit_mahalanobis(few), qnn::contract_error);
}

TEST_CASE("threshold labels (control chart fixture)") {
    const std::vector<double> vals{1.0, 1.0, 1.0, 1.0, 10.0};
    auto t = label_by_threshold(vals, 4, 3.0);
    CHECK(t.threshold == doctest::Approx(1.0));
    CHECK(t.labels == std::vector<int>{0, 0, 0, 0, 1});

    // window of 1: zero spread, threshold is the first value
    auto one = label_by_threshold(std::vector<double>{2.0, 1.0, 3.0}, 1, 3.0);
    CHECK(one.threshold == doctest::Approx(2.0));
    CHECK(one.labels == std::vector<int>{0, 0, 1});

    CHECK_THROWS_AS(label_by_threshold(vals, 0, 3.0), qnn::contract_error);
    CHECK_THROWS_AS(label_by_threshold(vals, 5, 3.0), qnn::contract_error);
}

TEST_CASE("stratified split rounds per class and partitions") {
    std::vector<int> labels(100, 0);
    for (int i = 0; i < 30; ++i) labels[static_cast<std::size_t>(i)] = 1;
    auto [train, test] = stratified_split(labels, 0.2, 7);
    CHECK(train.size() == 80);
    CHECK(test.size() == 20);
    std::size_t test_pos = 0;
    for (auto i : test) test_pos += labels[i] == 1;
    CHECK(test_pos == 6);  // round(30 * 0.2)

    CHECK(std::is_sorted(train.begin(), train.end()));
    CHECK(std::is_sorted(test.begin(), test.end()));
    std::set<std::size_t> all(train.begin(), train.end());
    all.insert(test.begin(), test.end());
    CHECK(all.size() == 100);

    auto [train2, test2] = stratified_split(labels, 0.2, 7);
    CHECK(train == train2);
    CHECK(test == test2);
    auto [train3, test3] = stratified_split(labels, 0.2, 8);
    CHECK(test != test3);

    CHECK_THROWS_AS(stratified_split(labels, 0.0, 1), qnn::contract_error);
    CHECK_THROWS_AS(stratified_split(labels, 1.0, 1), qnn::contract_error);
    std::vector<int> lone{0, 0, 0, 1};
    CHECK_THROWS_AS(stratified_split(lone, 0.5, 1), qnn::contract_error);
    std::vector<int> bad{0, 2, 1};
    CHECK_THROWS_AS(stratified_split(bad, 0.5, 1), qnn::contract_error);
}

TEST_CASE("smote interpolates between neighbours") {
    const std::vector<std::vector<double>> two{{0.0, 0.0}, {1.0, 2.0}};
    auto synth = smote(two, 1, 6, 19);
    REQUIRE(synth.size() == 4);
    for (const auto& row : synth) {
        REQUIRE(row.size() == 2);
        // on the segment: row = u * (1, 2)
        CHECK(row[0] >= 0.0);
        CHECK(row[0] <= 1.0);
        CHECK(row[1] == doctest::Approx(2.0 * row[0]).epsilon(1e-12));
    }

    // bounding box containment in higher dimensions
    const std::vector<std::vector<double>> cloud{
        {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    auto s2 = smote(cloud, 3, 12, 4);
    CHECK(s2.size() == 7);
    for (const auto& row : s2)
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

    CHECK(smote(two, 1, 6, 19) == synth);  // seeded
    CHECK(smote(two, 1, 2, 19).empty());   // already at target
    CHECK(smote(two, 1, 1, 19).empty());
    CHECK_THROWS_AS(smote(two, 2, 6, 19), qnn::contract_error);   // k > n-1
    CHECK_THROWS_AS(smote({{1.0}}, 1, 3, 19), qnn::contract_error);
}

TEST_CASE("sliding windows") {
    std::vector<double> series(12);
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = static_cast<double>(i);
    auto w = sliding_window(series, 4, 4);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == std::vector<double>{0, 1, 2, 3});
    CHECK(w[2] == std::vector<double>{8, 9, 10, 11});

    auto o = sliding_window(series, 4, 2);
    CHECK(o.size() == 5);  // (12-4)/2 + 1
    CHECK(o[1] == std::vector<double>{2, 3, 4, 5});

    CHECK(sliding_window(std::vector<double>{1.0, 2.0}, 3, 1).empty());
    CHECK_THROWS_AS(sliding_window(series, 0, 1), qnn::contract_error);

    // the NASA set-2 geometry: 479101 samples, window 10, stride 5
    std::vector<double> big(479101, 0.0);
    CHECK(sliding_window(big, 10, 5).size() == 95819);
}

TEST_CASE("gaussian smoothing: kernel, edges, invariants") {
    // impulse response at the center is the normalized peak weight
    std::vector<double> impulse(11, 0.0);
    impulse[5] = 1.0;
    auto sm = gaussian_smooth(impulse, 1.0);
    REQUIRE(sm.size() == 11);
    const double ksum =
        1.0 + 2.0 * (std::exp(-0.5) + std::exp(-2.0) + std::exp(-4.5) + std::exp(-8.0));
    CHECK(sm[5] == doctest::Approx(1.0 / ksum).epsilon(1e-12));
    CHECK(sm[4] == doctest::Approx(std::exp(-0.5) / ksum).epsilon(1e-12));

    // impulse at the boundary: the reflected tap doubles the first weight
    std::vector<double> edge(11, 0.0);
    edge[0] = 1.0;
    auto se = gaussian_smooth(edge, 1.0);
    CHECK(se[0] == doctest::Approx((1.0 + std::exp(-0.5)) / ksum).epsilon(1e-12));

    // constants pass through exactly
    std::vector<double> flat(20, 3.25);
    for (double v : gaussian_smooth(flat, 2.0))
        CHECK(v == doctest::Approx(3.25).epsilon(1e-14));

    CHECK_THROWS_AS(gaussian_smooth(flat, 0.0), qnn::contract_error);
    CHECK(gaussian_smooth(std::vector<double>{}, 1.0).empty());
}

TEST_CASE("run-to-failure preparation end to end on the bundled archive") {
    PrepOptions opt;
    opt.ref_window = 15;
    opt.sigma_mult = 3.0;
    opt.test_fraction = 0.2;
    opt.seed = 11;
    auto prep = prepare_run_to_failure(kRtf, opt);

    REQUIRE(prep.features.rows.size() == 20);
    REQUIRE(prep.features.rows[0].size() == 4);
    REQUIRE(prep.features.md.size() == 20);
    // the amplitude ramp starts at snapshot 15
    std::vector<int> expected(20, 0);
    for (int i = 15; i < 20; ++i) expected[static_cast<std::size_t>(i)] = 1;
    CHECK(prep.features.labels == expected);
    CHECK(prep.threshold > 0.0);
    for (double m : prep.features.md) CHECK(std::isfinite(m));

    // split: 15 healthy -> 3 test, 5 faulty -> 1 test; SMOTE tops the
    // training minority (4) up to the majority (12)
    CHECK(prep.test.targets.size() == 4);
    CHECK(prep.smote_added == 8);
    CHECK(prep.train.targets.size() == 24);
    double pos = 0;
    for (double y : prep.train.targets) pos += y;
    CHECK(pos == 12.0);

    // scaling fitted on train: train coordinates live in [-1, 1] and hit it
    double lo = 1e300, hi = -1e300;
    for (const auto& row : prep.train.inputs)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            CHECK(v >= -1.0 - 1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(1.0));
    REQUIRE(prep.scaler.size() == 4);

    // deterministic rerun
    auto again = prepare_run_to_failure(kRtf, opt);
    CHECK(again.train.inputs == prep.train.inputs);
    CHECK(again.test.inputs == prep.test.inputs);
}

}  // TEST_SUITE
