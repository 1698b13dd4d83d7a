#include <doctest.h>

#include <vector>

#include "qnnbench/encodings.hpp"

using namespace qnn::enc;

TEST_SUITE("encodings") {

TEST_CASE("family names round-trip") {
    for (auto f : {Family::hamming, Family::binary, Family::exponential, Family::ternary,
                   Family::turnpike, Family::golomb})
        CHECK(parse_family(family_name(f)) == f);
    CHECK_THROWS_AS(parse_family("fibonacci"), qnn::config_error);
}

TEST_CASE("block width follows the divisibility rule") {
    CHECK(make_family(Family::turnpike, 6).block_width == 3);
    CHECK(make_family(Family::turnpike, 3).block_width == 3);
    CHECK(make_family(Family::golomb, 4).block_width == 2);
    CHECK(make_family(Family::golomb, 2).block_width == 2);
    CHECK(make_family(Family::golomb, 12).block_width == 3);
    CHECK_THROWS_AS(make_family(Family::golomb, 5), qnn::architecture_error);
    CHECK_THROWS_AS(make_family(Family::turnpike, 7), qnn::architecture_error);
    CHECK_THROWS_AS(make_family(Family::turnpike, 1), qnn::architecture_error);
    // single-qubit families take any width
    for (int r = 1; r <= 7; ++r) CHECK(make_family(Family::hamming, r).block_width == 1);
}

TEST_CASE("sub-generator eigenvalues") {
    auto ham = make_family(Family::hamming, 3);
    CHECK(ham.eigenvalues.num == std::vector<long long>{-1, 1});
    CHECK(ham.eigenvalues.den == 2);

    auto tp2 = make_family(Family::turnpike, 2);
    CHECK(tp2.eigenvalues.num == std::vector<long long>{0, 1, 4, 6});
    CHECK(tp2.eigenvalues.den == 1);
    auto go2 = make_family(Family::golomb, 2);
    CHECK(go2.eigenvalues.num == std::vector<long long>{0, 1, 4, 6});

    auto tp3 = make_family(Family::turnpike, 3);
    CHECK(tp3.eigenvalues.num == std::vector<long long>{0, 8, 15, 17, 20, 21, 31, 39});
    auto go3 = make_family(Family::golomb, 3);
    CHECK(go3.eigenvalues.num == std::vector<long long>{0, 1, 4, 9, 15, 22, 32, 34});
}

TEST_CASE("ruler properties of the fixed marks") {
    CHECK(is_golomb_ruler({0, 1, 4, 6}));
    CHECK(is_golomb_ruler({0, 1, 4, 9, 15, 22, 32, 34}));
    CHECK_FALSE(is_golomb_ruler({0, 1, 2}));
    // 8-0 and 39-31 repeat, so the 8-mark turnpike set is not a Golomb ruler
    CHECK_FALSE(is_golomb_ruler({0, 8, 15, 17, 20, 21, 31, 39}));

    CHECK(turnpike_K(make_family(Family::turnpike, 2).eigenvalues) == 6);
    CHECK(turnpike_K(make_family(Family::turnpike, 3).eigenvalues) == 24);
}

TEST_CASE("schedule bases") {
    CHECK(schedule_base(make_family(Family::hamming, 2)) == 1);
    CHECK(schedule_base(make_family(Family::binary, 2)) == 2);
    CHECK(schedule_base(make_family(Family::exponential, 2)) == 2);
    CHECK(schedule_base(make_family(Family::ternary, 2)) == 3);
    CHECK(schedule_base(make_family(Family::turnpike, 2)) == 13);   // 2*6 + 1
    CHECK(schedule_base(make_family(Family::turnpike, 3)) == 49);   // 2*24 + 1
    CHECK(schedule_base(make_family(Family::golomb, 2)) == 13);     // 2*6 + 1
    CHECK(schedule_base(make_family(Family::golomb, 3)) == 69);     // 2*34 + 1
}

TEST_CASE("schedule grid: base^((l-1) + L(r-1))") {
    auto sch = schedule(make_family(Family::binary, 2), 2, 2);
    CHECK(sch.blocks == 2);
    CHECK(sch.layers == 2);
    CHECK(sch(1, 1) == 1);
    CHECK(sch(1, 2) == 2);
    CHECK(sch(2, 1) == 4);
    CHECK(sch(2, 2) == 8);

    auto tern = schedule(make_family(Family::ternary, 1), 1, 3);
    CHECK(tern(1, 1) == 1);
    CHECK(tern(1, 2) == 3);
    CHECK(tern(1, 3) == 9);

    auto ham = schedule(make_family(Family::hamming, 3), 3, 2);
    for (int r = 1; r <= 3; ++r)
        for (int l = 1; l <= 2; ++l) CHECK(ham(r, l) == 1);

    // two-qubit blocks index the grid by block, not by qubit
    auto gol = schedule(make_family(Family::golomb, 4), 4, 1);
    CHECK(gol.blocks == 2);
    CHECK(gol(1, 1) == 1);
    CHECK(gol(2, 1) == 13);

    auto tp3 = schedule(make_family(Family::turnpike, 3), 3, 2);
    CHECK(tp3(1, 1) == 1);
    CHECK(tp3(1, 2) == 49);
}

TEST_CASE("exponential tweaks only the last entry, and only above area 1") {
    auto sch = schedule(make_family(Family::exponential, 2), 2, 2);
    CHECK(sch(1, 1) == 1);
    CHECK(sch(1, 2) == 2);
    CHECK(sch(2, 1) == 4);
    CHECK(sch(2, 2) == 9);  // 2^(4-1) + 1 replaces 8

    auto one = schedule(make_family(Family::exponential, 1), 1, 1);
    CHECK(one(1, 1) == 1);

    auto col = schedule(make_family(Family::exponential, 1), 1, 3);
    CHECK(col(1, 1) == 1);
    CHECK(col(1, 2) == 2);
    CHECK(col(1, 3) == 5);  // 2^2 + 1
}

TEST_CASE("schedule overflow reports capacity") {
    CHECK_THROWS_AS(schedule(make_family(Family::binary, 64), 64, 1), qnn::capacity_error);
    CHECK_NOTHROW(schedule(make_family(Family::binary, 63), 63, 1));
}

TEST_CASE("data layer shapes") {
    using qnn::sim::GateOp;
    auto ham = make_family(Family::hamming, 2);
    auto gates = data_layer(ham, 2, 1, 1, 0);
    REQUIRE(gates.size() == 2);
    CHECK(gates[0].kind == GateOp::Kind::diagonal);
    CHECK(gates[0].qubits == std::vector<int>{0});
    CHECK(gates[0].phase_coeffs == std::vector<double>{-0.5, 0.5});
    CHECK(gates[1].qubits == std::vector<int>{1});
    CHECK(gates[1].phase_coeffs == std::vector<double>{-0.5, 0.5});
    CHECK(gates[0].data_slot == 0);

    auto bin = make_family(Family::binary, 2);
    auto bg = data_layer(bin, 2, 1, 1, 3);
    CHECK(bg[0].phase_coeffs == std::vector<double>{-0.5, 0.5});
    CHECK(bg[1].phase_coeffs == std::vector<double>{-1.0, 1.0});
    CHECK(bg[1].data_slot == 3);

    auto gol = make_family(Family::golomb, 2);
    auto gg = data_layer(gol, 2, 1, 1, 0);
    REQUIRE(gg.size() == 1);
    CHECK(gg[0].qubits == std::vector<int>{0, 1});
    CHECK(gg[0].phase_coeffs == std::vector<double>{0.0, 1.0, 4.0, 6.0});

    // layer 2 of a turnpike q=2 register scales the marks by 13^(l-1)
    auto tp = make_family(Family::turnpike, 2);
    auto tg = data_layer(tp, 2, 2, 2, 0);
    CHECK(tg[0].phase_coeffs == std::vector<double>{0.0, 13.0, 52.0, 78.0});
    CHECK_THROWS_AS(data_layer(tp, 2, 2, 3, 0), qnn::contract_error);
}

}  // TEST_SUITE
