// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/mobility.hpp"

#include <doctest.h>

#include <cmath>

using namespace silent_tracker;

TEST_SUITE("mobility") {

TEST_CASE("walk displaces linearly along its bearing") {
    MobilityModel m = MobilityModel::walk(make_pose(1.0, 2.0, 35.0), 0.0);
    Pose p = pose_at(m, 10.0);
    CHECK(p.x_m == doctest::Approx(1.0 + 14.0).epsilon(1e-12));
    CHECK(p.y_m == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.heading_deg == 35.0); // heading frozen while walking
}

TEST_CASE("rotation wraps back to the start heading after a full turn") {
    MobilityModel m = MobilityModel::rotation(make_pose(5.0, -3.0, 77.0));
    Pose p = pose_at(m, 3.0); // 120 deg/s * 3 s = 360 degrees
    CHECK(p.heading_deg == doctest::Approx(77.0).epsilon(1e-9));
    CHECK(p.x_m == 5.0);
    CHECK(p.y_m == -3.0);
}

TEST_CASE("vehicular default speed is 20 mph") {
    MobilityModel m = MobilityModel::vehicular(make_pose(0.0, 0.0, 0.0), 90.0);
    Pose p = pose_at(m, 1.0);
    CHECK(std::hypot(p.x_m, p.y_m) == doctest::Approx(8.9408).epsilon(1e-12));
}

TEST_CASE("time zero reproduces the start pose") {
    Pose start = make_pose(4.0, 5.0, 123.0);
    for (const MobilityModel& m :
         {MobilityModel::static_at(start), MobilityModel::walk(start, 10.0),
          MobilityModel::vehicular(start, 10.0), MobilityModel::rotation(start)}) {
        Pose p = pose_at(m, 0.0);
        CHECK(p.x_m == start.x_m);
        CHECK(p.y_m == start.y_m);
        CHECK(p.heading_deg == start.heading_deg);
    }
}

TEST_CASE("negative time is a domain error") {
    MobilityModel m = MobilityModel::walk(make_pose(0, 0, 0), 0.0);
    CHECK_THROWS_AS(pose_at(m, -0.001), std::domain_error);
}

TEST_CASE("trajectories are continuous in t") {
    for (const MobilityModel& m :
         {MobilityModel::walk(make_pose(0, 0, 0), 42.0),
          MobilityModel::vehicular(make_pose(0, 0, 0), 200.0),
          MobilityModel::rotation(make_pose(0, 0, 10.0))}) {
        for (double t = 0.0; t < 2.0; t += 0.137) {
            Pose a = pose_at(m, t);
            Pose b = pose_at(m, t + 1e-7);
            CHECK(std::hypot(b.x_m - a.x_m, b.y_m - a.y_m) < 1e-5);
            double dh = std::fabs(b.heading_deg - a.heading_deg);
            CHECK(std::min(dh, 360.0 - dh) < 1e-4);
        }
    }
}

TEST_CASE("rotation fixes position, translation fixes heading") {
    Pose start = make_pose(1.0, 1.0, 0.0);
    MobilityModel rot = MobilityModel::rotation(start);
    MobilityModel walk = MobilityModel::walk(start, 90.0);
    for (double t : {0.1, 0.5, 2.0, 7.3}) {
        CHECK(pose_at(rot, t).x_m == start.x_m);
        CHECK(pose_at(rot, t).y_m == start.y_m);
        CHECK(pose_at(walk, t).heading_deg == start.heading_deg);
    }
}

} // TEST_SUITE
