// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/codebook.hpp"
#include "silent_tracker/channel.hpp"

#include <doctest.h>

#include <cmath>

using namespace silent_tracker;

TEST_SUITE("codebook") {

TEST_CASE("uniform codebooks tile the azimuth circle") {
    Codebook b20 = make_codebook(20.0);
    REQUIRE(b20.size() == 18);
    for (int i = 0; i < 18; ++i) {
        CHECK(b20.beams[i].id == i);
        CHECK(b20.beams[i].boresight_deg == doctest::Approx(20.0 * i));
    }

    CHECK(make_codebook(60.0).size() == 6);

    Codebook omni = make_omni_codebook();
    REQUIRE(omni.size() == 1);
    CHECK(omni.beams[0].peak_gain_dbi == 0.0);
    CHECK(omni.beams[0].omni);
}

TEST_CASE("peak gain follows energy conservation over the circle") {
    for (double bw : {5.625, 10.0, 20.0, 60.0, 120.0, 360.0}) {
        Codebook book = make_codebook(bw);
        for (const Beam& b : book.beams)
            CHECK(std::fabs(b.peak_gain_dbi - 10.0 * std::log10(360.0 / b.theta_3db_deg)) <
                  1e-9);
    }
}

TEST_CASE("invalid beamwidths are rejected") {
    CHECK_THROWS_AS(make_codebook(0.0), std::domain_error);
    CHECK_THROWS_AS(make_codebook(-20.0), std::domain_error);
    CHECK_THROWS_AS(make_codebook(400.0), std::domain_error);
}

TEST_CASE("adjacency wraps and degenerates for omni") {
    Codebook b20 = make_codebook(20.0);
    CHECK(adjacent(b20, 0) == std::pair<int, int>{17, 1});
    Codebook b60 = make_codebook(60.0);
    CHECK(adjacent(b60, 3) == std::pair<int, int>{2, 4});
    Codebook omni = make_omni_codebook();
    CHECK(adjacent(omni, 0) == std::pair<int, int>{0, 0});
    CHECK_THROWS_AS(adjacent(b20, -1), std::domain_error);
    CHECK_THROWS_AS(adjacent(b20, 18), std::domain_error);
}

TEST_CASE("adjacency is symmetric") {
    for (double bw : {20.0, 60.0, 90.0}) {
        Codebook book = make_codebook(bw);
        for (int id = 0; id < book.size(); ++id) {
            auto [l, r] = adjacent(book, id);
            auto [ll, lr] = adjacent(book, l);
            auto [rl, rr] = adjacent(book, r);
            CHECK((ll == id || lr == id));
            CHECK((rl == id || rr == id));
        }
    }
}

TEST_CASE("best beam oracle hits boresights and breaks ties low") {
    Codebook b20 = make_codebook(20.0);
    CHECK(best_beam_oracle(b20, 0.0) == 0);
    // 10 degrees sits exactly between beams 0 and 1; the lower id wins
    CHECK(best_beam_oracle(b20, 10.0) == 0);
    Codebook b60 = make_codebook(60.0);
    // offset 10 to beam 0 beats offset 50 to beam 5
    CHECK(best_beam_oracle(b60, 350.0) == 0);
    CHECK_THROWS_AS(best_beam_oracle(b20, std::nan("")), std::domain_error);
}

TEST_CASE("oracle coverage: the chosen beam is within half a beamwidth") {
    for (double bw : {20.0, 60.0, 45.0}) {
        Codebook book = make_codebook(bw);
        for (int i = 0; i < 3600; ++i) {
            double dir = i * 0.1;
            const Beam& b = book.beams[best_beam_oracle(book, dir)];
            CHECK(angular_distance_deg(b.boresight_deg, dir) <=
                  book.beamwidth_deg / 2.0 + 1e-9);
        }
    }
}

TEST_CASE("rotating the query by one spacing increments the oracle") {
    Codebook book = make_codebook(20.0);
    for (int i = 0; i < 360; ++i) {
        double dir = i * 1.0 + 3.7; // off the tie points
        int a = best_beam_oracle(book, dir);
        int b = best_beam_oracle(book, dir + book.beamwidth_deg);
        CHECK(b == (a + 1) % book.size());
    }
}

} // TEST_SUITE
