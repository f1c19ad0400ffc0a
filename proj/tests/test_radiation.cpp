// SPDX-License-Identifier: Apache-2.0
//
// hybridbeam - adaptive beamforming workbench for hybrid cylindrical/circular
// antenna arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hybridbeam/radiation.hpp"
#include "hybridbeam/rng.hpp"

using namespace hybridbeam;
using cd = std::complex<double>;

namespace {

ArrayGeometry ring_geometry(int n, double radius_wavelengths, PatternKind kind = PatternKind::isotropic) {
    ArrayConfig cfg;
    cfg.n_per_ring = n;
    cfg.n_cylinders = 0;
    cfg.radial_spacing = radius_wavelengths;
    cfg.pattern.kind = kind;
    return build_geometry(cfg);
}

// Single element placed by hand (bypasses the ring construction).
ArrayGeometry element_at(double x, double y, double z, double lambda = 1.0) {
    ArrayGeometry g;
    g.wavelength = lambda;
    g.elements.push_back({Eigen::Vector3d(x, y, z), 1, 0});
    g.excitations = Eigen::VectorXcd::Ones(1);
    return g;
}

Direction random_direction(SplitMix64& rng) {
    return Direction{kPi * rng.next_double(), 2.0 * kPi * rng.next_double()};
}

} // namespace

TEST_CASE("direction canonicalization") {
    Direction d = Direction{deg2rad(200.0), deg2rad(10.0)}.canonicalized();
    CHECK(d.theta == doctest::Approx(deg2rad(160.0)));
    CHECK(d.phi == doctest::Approx(deg2rad(190.0)));
    d = Direction::from_degrees(90.0, -60.0);
    CHECK(d.phi == doctest::Approx(deg2rad(300.0)));
    CHECK(d.theta == doctest::Approx(kPi / 2.0));
}

TEST_CASE("element gain patterns") {
    ElementPattern iso{PatternKind::isotropic, 60.0};
    ElementPattern dip{PatternKind::dipole, 60.0};
    ElementPattern bow{PatternKind::bowtie, 60.0};
    ElementPattern bow_wide{PatternKind::bowtie, 120.0};

    SplitMix64 rng(1);
    for (int i = 0; i < 20; ++i)
        CHECK(element_gain(iso, random_direction(rng)) == 1.0);

    CHECK(element_gain(dip, {kPi / 2.0, 0.3}) == doctest::Approx(1.0));
    // numerical evaluation of cos((pi/2) cos t)/sin t at t = pi/4
    CHECK(element_gain(dip, {kPi / 4.0, 0.0}) == doctest::Approx(0.6280).epsilon(2e-4));
    CHECK(element_gain(dip, {kPi / 4.0, 0.0}) == doctest::Approx(0.627933223298).epsilon(1e-10));
    CHECK(element_gain(dip, {0.0, 0.0}) == 0.0);
    CHECK(element_gain(dip, {kPi, 0.0}) == 0.0);

    // default 60 degree flare coincides with the dipole
    for (int i = 0; i < 20; ++i) {
        Direction d = random_direction(rng);
        CHECK(element_gain(bow, d) == doctest::Approx(element_gain(dip, d)).epsilon(1e-12));
    }
    // wider flare broadens the beam: gain off broadside increases
    CHECK(element_gain(bow_wide, {kPi / 4.0, 0.0}) > element_gain(dip, {kPi / 4.0, 0.0}));
    CHECK(element_gain(bow_wide, {kPi / 4.0, 0.0}) ==
          doctest::Approx(std::sqrt(0.627933223298)).epsilon(1e-10));
}

TEST_CASE("phase shift basics") {
    ArrayGeometry origin = element_at(0.0, 0.0, 0.0);
    SplitMix64 rng(2);
    for (int i = 0; i < 20; ++i)
        CHECK(phase_shift(origin, 0, random_direction(rng)) == 0.0);

    ArrayGeometry half = element_at(0.5, 0.0, 0.0); // lambda/2 along x
    CHECK(phase_shift(half, 0, {kPi / 2.0, 0.0}) == doctest::Approx(kPi).epsilon(1e-12));

    CHECK_THROWS_AS(phase_shift(half, 1, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("phase shift matches the trig-identity expansion for ring elements") {
    // For an element at (r cos a_n, r sin a_n, h) the dot product reduces to
    // (2 pi / lambda) (r sin(theta) cos(phi - a_n) + h cos(theta)).
    SplitMix64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        double r = 0.2 + 2.0 * rng.next_double();
        double a_n = 2.0 * kPi * rng.next_double();
        double h = rng.next_double();
        double lambda = 0.3 + rng.next_double();
        ArrayGeometry g = element_at(r * std::cos(a_n), r * std::sin(a_n), h, lambda);
        Direction d = random_direction(rng);
        double expected =
            2.0 * kPi / lambda * (r * std::sin(d.theta) * std::cos(d.phi - a_n) + h * std::cos(d.theta));
        CHECK(phase_shift(g, 0, d) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("steering vector") {
    ArrayGeometry single = element_at(0.0, 0.0, 0.0);
    SplitMix64 rng(4);
    for (int i = 0; i < 10; ++i) {
        SteeringVector sv = steering_vector(single, random_direction(rng));
        REQUIRE(sv.entries.size() == 1);
        CHECK(sv.entries[0].real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(sv.entries[0].imag() == doctest::Approx(0.0).epsilon(1e-15));
    }

    // broadside onto a common-z ring: equal phases, equal entries
    ArrayGeometry ring = ring_geometry(4, 0.5);
    SteeringVector sv = steering_vector(ring, {0.0, 0.0});
    for (int i = 1; i < 4; ++i) {
        CHECK(sv.entries[i].real() == doctest::Approx(sv.entries[0].real()).epsilon(1e-12));
        CHECK(sv.entries[i].imag() == doctest::Approx(sv.entries[0].imag()).epsilon(1e-12));
    }

    // per-element brute force of g/N exp(-j K.r) on a 20-element ring
    ArrayGeometry big = ring_geometry(20, 1.0);
    Direction d = Direction::from_degrees(45.0, 45.0);
    SteeringVector sv20 = steering_vector(big, d);
    const double k0 = 2.0 * kPi / big.wavelength;
    for (int n = 0; n < 20; ++n) {
        const Eigen::Vector3d& r = big.elements[n].position;
        double ph = k0 * (std::sin(d.theta) * std::cos(d.phi) * r.x() +
                          std::sin(d.theta) * std::sin(d.phi) * r.y() + std::cos(d.theta) * r.z());
        cd expected = 1.0 / 20.0 * std::exp(cd(0.0, -ph));
        CHECK(std::abs(sv20.entries[n] - expected) < 1e-14);
    }

    // entry magnitude is g/N
    ArrayGeometry dip = ring_geometry(8, 0.7, PatternKind::dipole);
    Direction slant = Direction::from_degrees(70.0, 10.0);
    SteeringVector svd = steering_vector(dip, slant);
    for (int n = 0; n < 8; ++n)
        CHECK(std::abs(svd.entries[n]) ==
              doctest::Approx(element_gain(dip.pattern, slant) / 8.0).epsilon(1e-12));
}

TEST_CASE("array factor") {
    ArrayGeometry ring = ring_geometry(16, 1.0);
    Direction steer = Direction::from_degrees(60.0, 120.0);

    // phase-matched excitations peak at N
    Eigen::VectorXcd exc = steered_excitations(ring, steer);
    CHECK(std::abs(array_factor(ring, exc, steer)) == doctest::Approx(16.0).epsilon(1e-12));

    // single element: |AF| = 1 everywhere
    ArrayGeometry single = element_at(0.2, -0.1, 0.4);
    SplitMix64 rng(5);
    for (int i = 0; i < 10; ++i)
        CHECK(std::abs(array_factor(single, Eigen::VectorXcd::Ones(1), random_direction(rng))) ==
              doctest::Approx(1.0).epsilon(1e-14));

    // brute-force sum on a 4-element ring with random excitations
    ArrayGeometry small = ring_geometry(4, 0.6);
    Eigen::VectorXcd w(4);
    for (int i = 0; i < 4; ++i)
        w[i] = cd(rng.next_gaussian(), rng.next_gaussian());
    Direction d = random_direction(rng);
    cd expected = 0.0;
    for (int n = 0; n < 4; ++n)
        expected += w[n] * std::exp(cd(0.0, phase_shift(small, n, d)));
    CHECK(std::abs(array_factor(small, w, d) - expected) < 1e-13);

    // length mismatch rejected
    CHECK_THROWS_AS(array_factor(small, Eigen::VectorXcd::Ones(3), d), std::invalid_argument);
}

TEST_CASE("array factor triangle inequality with equality at the steer direction") {
    ArrayGeometry g = ring_geometry(12, 0.9);
    Direction steer = Direction::from_degrees(75.0, 30.0);
    Eigen::VectorXcd exc = steered_excitations(g, steer);
    const double total = exc.cwiseAbs().sum();
    SplitMix64 rng(6);
    for (int i = 0; i < 200; ++i)
        CHECK(std::abs(array_factor(g, exc, random_direction(rng))) <= total + 1e-9);
    CHECK(std::abs(array_factor(g, exc, steer)) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("steering vector and array factor agree") {
    // for unit excitations and an isotropic ring, AF = conj(N * sum of entries)
    ArrayGeometry g = ring_geometry(10, 0.8);
    SplitMix64 rng(7);
    for (int i = 0; i < 20; ++i) {
        Direction d = random_direction(rng);
        cd af = array_factor(g, Eigen::VectorXcd::Ones(10), d);
        cd sum = steering_vector(g, d).entries.sum();
        CHECK(std::abs(af - std::conj(10.0 * sum)) < 1e-12);
    }
}

TEST_CASE("directivity of elementary radiators") {
    // single isotropic element: 0 dBi
    ArrayGeometry single = element_at(0.0, 0.0, 0.0);
    CHECK(directivity_dbi(single, Eigen::VectorXcd::Ones(1), {kPi / 2.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(0.01));

    // two isotropic elements lambda/2 apart, in phase, broadside: 3.01 dB
    ArrayGeometry pair;
    pair.wavelength = 1.0;
    pair.elements.push_back({Eigen::Vector3d(0.0, 0.0, -0.25), 1, 0});
    pair.elements.push_back({Eigen::Vector3d(0.0, 0.0, 0.25), 1, 0});
    pair.excitations = Eigen::VectorXcd::Ones(2);
    const double d2 = directivity_dbi(pair, pair.excitations, {kPi / 2.0, 0.0});
    CHECK(d2 == doctest::Approx(3.0103).epsilon(0.05 / 3.0103));
    // independent high-resolution quadrature agrees with the closed form 2.0
    const double d2_fine =
        directivity_dbi(pair, pair.excitations, {kPi / 2.0, 0.0}, deg2rad(0.1));
    CHECK(std::pow(10.0, d2_fine / 10.0) == doctest::Approx(2.0).epsilon(1e-4));

    CHECK_THROWS_AS(directivity_dbi(pair, Eigen::VectorXcd::Zero(2), {kPi / 2.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("directivity at the pattern maximum is at least 0 dBi") {
    ArrayGeometry g = ring_geometry(6, 0.6);
    Direction steer = Direction::from_degrees(50.0, 75.0);
    Eigen::VectorXcd exc = steered_excitations(g, steer);
    // grid search for the global pattern maximum
    double best = -1.0;
    Direction best_dir;
    for (int it = 0; it <= 36; ++it)
        for (int ip = 0; ip < 72; ++ip) {
            Direction d{kPi * it / 36.0, 2.0 * kPi * ip / 72.0};
            double a = std::abs(array_factor(g, exc, d));
            if (a > best) {
                best = a;
                best_dir = d;
            }
        }
    CHECK(directivity_dbi(g, exc, best_dir) >= -0.01);
}

TEST_CASE("hybrid array quadrature convergence and steered directivity") {
    ArrayGeometry g = build_geometry(ArrayConfig{});
    Direction steer = Direction::from_degrees(45.0, 45.0);
    Eigen::VectorXcd exc = steered_excitations(g, steer);
    const double coarse = directivity_dbi(g, exc, steer, deg2rad(2.0));
    const double fine = directivity_dbi(g, exc, steer, deg2rad(1.0));
    CHECK(std::abs(coarse - fine) < 0.05);
    CHECK(fine > 12.0); // well above a single element
}

TEST_CASE("hybrid array scan directivity stays nearly constant") {
    ArrayGeometry g = build_geometry(ArrayConfig{});
    auto scan =
        directivity_scan(g, g.excitations, SweepAxis::theta, 45.0, 10.0, 90.0, 20.0, deg2rad(2.0));
    double lo = scan.front().directivity_dbi, hi = lo;
    for (const ScanPoint& p : scan) {
        lo = std::min(lo, p.directivity_dbi);
        hi = std::max(hi, p.directivity_dbi);
    }
    CHECK(hi - lo < 2.0);
}

TEST_CASE("directivity scan") {
    // flat for a single isotropic element
    ArrayGeometry single = element_at(0.0, 0.0, 0.0);
    auto flat = directivity_scan(single, Eigen::VectorXcd::Ones(1), SweepAxis::theta, 45.0, 0.0,
                                 90.0, 15.0, deg2rad(1.0));
    REQUIRE(flat.size() == 7);
    CHECK(flat[1].angle_deg == 15.0);
    for (const ScanPoint& p : flat)
        CHECK(p.directivity_dbi == doctest::Approx(0.0).epsilon(0.01));

    // phi sweep of an N-fold symmetric ring is periodic with period 360/N
    ArrayGeometry ring = ring_geometry(4, 0.5);
    auto scan =
        directivity_scan(ring, ring.excitations, SweepAxis::phi, 90.0, 0.0, 90.0, 30.0,
                         deg2rad(1.0));
    REQUIRE(scan.size() == 4);
    CHECK(scan.front().directivity_dbi == doctest::Approx(scan.back().directivity_dbi).epsilon(1e-3));

    CHECK_THROWS_AS(
        directivity_scan(ring, ring.excitations, SweepAxis::phi, 0.0, 1.0, 0.0, 5.0, deg2rad(1.0)),
        std::invalid_argument);

    std::string csv = scan_csv(scan);
    CHECK(csv.rfind("angle_deg,directivity_dbi\n", 0) == 0);
}

TEST_CASE("kronecker steering composition") {
    Eigen::VectorXcd a(2), b(2);
    a << cd(1, 0), cd(0, 1);
    b << cd(2, 0), cd(0, -1);
    Eigen::VectorXcd k = kronecker_steering({a, b});
    REQUIRE(k.size() == 4);
    CHECK(std::abs(k[0] - cd(2, 0)) < 1e-15);
    CHECK(std::abs(k[1] - cd(0, -1)) < 1e-15);
    CHECK(std::abs(k[2] - cd(0, 2)) < 1e-15);
    CHECK(std::abs(k[3] - cd(1, 0)) < 1e-15);
    CHECK_THROWS_AS(kronecker_steering({}), std::invalid_argument);
}
