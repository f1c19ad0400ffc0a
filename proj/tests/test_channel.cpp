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
#include <limits>
#include <sstream>

#include "hybridbeam/channel.hpp"

using namespace hybridbeam;
using cd = std::complex<double>;

namespace {

ArrayGeometry ring_geometry(int n, double radius_wavelengths) {
    ArrayConfig cfg;
    cfg.n_per_ring = n;
    cfg.n_cylinders = 0;
    cfg.radial_spacing = radius_wavelengths;
    return build_geometry(cfg);
}

ArrayGeometry single_element_at_origin() {
    ArrayGeometry g;
    g.wavelength = 1.0;
    g.elements.push_back({Eigen::Vector3d::Zero(), 1, 0});
    g.excitations = Eigen::VectorXcd::Ones(1);
    return g;
}

Eigen::VectorXcd tone(int n, double freq = 0.1) {
    Eigen::VectorXcd w(n);
    for (int k = 0; k < n; ++k)
        w[k] = std::exp(cd(0.0, 2.0 * kPi * freq * k));
    return w;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("collect_plane_wave basics") {
    ArrayGeometry origin = single_element_at_origin();
    Eigen::VectorXcd w = tone(32);
    SnapshotMatrix x = collect_plane_wave(origin, {{w, Direction::from_degrees(37.0, 12.0)}});
    REQUIRE(x.rows() == 1);
    REQUIRE(x.cols() == 32);
    for (int k = 0; k < 32; ++k)
        CHECK(std::abs(x(0, k) - w[k]) < 1e-14);

    // broadside (theta = 0) onto a common-z ring: all rows identical
    ArrayGeometry ring = ring_geometry(6, 0.5);
    SnapshotMatrix xb = collect_plane_wave(ring, {{w, Direction{0.0, 0.0}}});
    for (int n = 1; n < 6; ++n)
        for (int k = 0; k < 32; ++k)
            CHECK(std::abs(xb(n, k) - xb(0, k)) < 1e-12);
}

TEST_CASE("collect_plane_wave superposition against brute force") {
    ArrayGeometry ring = ring_geometry(4, 0.7);
    Eigen::VectorXcd w1 = tone(16, 0.05);
    Eigen::VectorXcd w2 = 0.6 * tone(16, 0.21);
    Direction d1 = Direction::from_degrees(80.0, 30.0);
    Direction d2 = Direction::from_degrees(65.0, 200.0);
    SnapshotMatrix x = collect_plane_wave(ring, {{w1, d1}, {w2, d2}});

    for (int n = 0; n < 4; ++n)
        for (int k = 0; k < 16; ++k) {
            cd expected = w1[k] * std::exp(cd(0.0, -phase_shift(ring, n, d1))) +
                          w2[k] * std::exp(cd(0.0, -phase_shift(ring, n, d2)));
            CHECK(std::abs(x(n, k) - expected) < 1e-13);
        }

    Eigen::VectorXcd short_wave = tone(8);
    CHECK_THROWS_AS(collect_plane_wave(ring, {{w1, d1}, {short_wave, d2}}),
                    std::invalid_argument);
}

TEST_CASE("add_awgn") {
    SnapshotMatrix x = SnapshotMatrix::Random(4, 50);

    SUBCASE("infinite SNR is the identity") {
        SnapshotMatrix y = add_awgn(x, kInf, 7);
        CHECK((y - x).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("fixed seed is deterministic") {
        SnapshotMatrix y1 = add_awgn(x, 10.0, 42);
        SnapshotMatrix y2 = add_awgn(x, 10.0, 42);
        CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);
        SnapshotMatrix y3 = add_awgn(x, 10.0, 43);
        CHECK((y3 - y1).cwiseAbs().maxCoeff() > 0.0);
    }

    SUBCASE("zero input: measured noise power matches sigma^2 within 5%") {
        SnapshotMatrix zeros = SnapshotMatrix::Zero(1, 100000);
        const double snr = 7.0;
        const double sigma2 = awgn_noise_power(zeros, snr); // unit reference power
        CHECK(sigma2 == doctest::Approx(std::pow(10.0, -0.7)).epsilon(1e-12));
        SnapshotMatrix y = add_awgn(zeros, snr, 11);
        const double measured = y.squaredNorm() / static_cast<double>(y.size());
        CHECK(measured == doctest::Approx(sigma2).epsilon(0.05));
    }

    SUBCASE("noise power scales with the measured signal power") {
        SnapshotMatrix big = 3.0 * SnapshotMatrix::Ones(2, 40000);
        const double snr = 10.0;
        const double sigma2 = awgn_noise_power(big, snr);
        CHECK(sigma2 == doctest::Approx(9.0 * 0.1).epsilon(1e-12));
        SnapshotMatrix y = add_awgn(big, snr, 3);
        const double measured = (y - big).squaredNorm() / static_cast<double>(big.size());
        CHECK(measured == doctest::Approx(sigma2).epsilon(0.05));
    }

    SUBCASE("empty input rejected") {
        SnapshotMatrix empty(0, 0);
        CHECK_THROWS_AS(add_awgn(empty, 10.0, 1), std::invalid_argument);
    }
}

TEST_CASE("correlation_matrix") {
    Eigen::MatrixXcd id = correlation_matrix(CorrelationSpec::equal(0.0), 3);
    CHECK((id - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXcd half = correlation_matrix(CorrelationSpec::equal(0.5), 2);
    CHECK(half(0, 1).real() == 0.5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(half);
    CHECK(es.eigenvalues()[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(es.eigenvalues()[1] == doctest::Approx(1.5).epsilon(1e-12));

    Eigen::MatrixXcd uneq = correlation_matrix(CorrelationSpec::unequal({0.9, 0.1}), 2);
    CHECK(uneq(0, 1).real() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(uneq(1, 0).real() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(uneq(0, 0).real() == 1.0);

    CHECK_THROWS_AS(CorrelationSpec::equal(1.0), std::invalid_argument);
    CHECK_THROWS_AS(CorrelationSpec::equal(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(correlation_matrix(CorrelationSpec::unequal({0.5, 0.5}), 3),
                    std::invalid_argument);
}

TEST_CASE("equal correlation eigenvalues follow the closed form") {
    for (int n : {2, 5, 9}) {
        for (double rho : {0.1, 0.45, 0.8}) {
            Eigen::MatrixXcd r = correlation_matrix(CorrelationSpec::equal(rho), n);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
            CHECK(es.eigenvalues()[n - 1] == doctest::Approx(1.0 + (n - 1) * rho).epsilon(1e-10));
            for (int i = 0; i < n - 1; ++i)
                CHECK(es.eigenvalues()[i] == doctest::Approx(1.0 - rho).epsilon(1e-10));
        }
    }
}

TEST_CASE("apply_fading identity for a static pure LoS channel") {
    ChannelModel m;
    m.condition = ChannelCondition::LoS_equal;
    m.path_delays_s = {0.0};
    m.path_gains_db = {0.0};
    m.max_doppler_hz = 0.0;
    m.rician_k = kInf;

    ArrayGeometry ring = ring_geometry(3, 0.5);
    SnapshotMatrix x = collect_plane_wave(ring, {{tone(24), Direction::from_degrees(90.0, 10.0)}});
    SnapshotMatrix y = apply_fading(x, m, 5);
    CHECK((y - x).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("apply_fading shape, determinism and delay validation") {
    ChannelModel m = ChannelModel::preset("nlos-equal", 3);
    SnapshotMatrix x = SnapshotMatrix::Random(3, 40);

    SnapshotMatrix y1 = apply_fading(x, m, 9);
    SnapshotMatrix y2 = apply_fading(x, m, 9);
    CHECK(y1.rows() == 3);
    CHECK(y1.cols() == 40);
    CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);
    SnapshotMatrix y3 = apply_fading(x, m, 10);
    CHECK((y3 - y1).cwiseAbs().maxCoeff() > 0.0);

    // Table-3 delays span 3700 samples at 1 GHz; 40 snapshots are too short
    ChannelModel long_delays = ChannelModel::preset("nlos-unequal", 3);
    CHECK_THROWS_AS(apply_fading(x, long_delays, 1), std::invalid_argument);
}

TEST_CASE("fading tap power converges to the configured gain across realizations") {
    // single tap at -3 dB, measured at t=0 over independent seeds
    ChannelModel m;
    m.condition = ChannelCondition::NLoS_equal;
    m.path_delays_s = {0.0};
    m.path_gains_db = {-3.0};
    m.rician_k = 0.0;
    m.correlation = CorrelationSpec::equal(0.0);

    SnapshotMatrix ones = SnapshotMatrix::Ones(1, 1);
    double acc = 0.0;
    const int n_draws = 20000;
    for (int r = 0; r < n_draws; ++r)
        acc += apply_fading(ones, m, static_cast<std::uint64_t>(r)).squaredNorm();
    const double mean_db = 10.0 * std::log10(acc / n_draws);
    CHECK(mean_db == doctest::Approx(-3.0).epsilon(0.3 / 3.0));
}

TEST_CASE("rician split weights the LoS and diffuse parts") {
    // K = 10 on the first tap: E|g|^2 stays 1, mean is eta
    ChannelModel m;
    m.condition = ChannelCondition::LoS_equal;
    m.path_delays_s = {0.0};
    m.path_gains_db = {0.0};
    m.rician_k = 10.0;
    m.correlation = CorrelationSpec::equal(0.0);
    CHECK(m.eta() == doctest::Approx(std::sqrt(10.0 / 11.0)).epsilon(1e-12));
    CHECK(m.gamma_coeff() == doctest::Approx(std::sqrt(1.0 / 11.0)).epsilon(1e-12));

    SnapshotMatrix ones = SnapshotMatrix::Ones(1, 1);
    cd mean = 0.0;
    double power = 0.0;
    const int n_draws = 20000;
    for (int r = 0; r < n_draws; ++r) {
        cd v = apply_fading(ones, m, static_cast<std::uint64_t>(r))(0, 0);
        mean += v;
        power += std::norm(v);
    }
    mean /= static_cast<double>(n_draws);
    power /= static_cast<double>(n_draws);
    CHECK(std::abs(mean) == doctest::Approx(m.eta()).epsilon(0.02));
    CHECK(power == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("channel presets") {
    ChannelModel t3 = ChannelModel::preset("nlos-unequal", 4);
    CHECK(t3.path_delays_s.size() == 6);
    CHECK(t3.path_gains_db[5] == -23.9);
    CHECK(t3.max_doppler_hz == 50.0);
    CHECK(t3.sample_rate_hz == 1e9);
    CHECK(t3.correlation.kind == CorrelationSpec::Kind::unequal);
    CHECK(t3.correlation.rho_per_element.size() == 4);
    t3.validate();

    ChannelModel t4 = ChannelModel::preset("nlos-equal", 4);
    CHECK(t4.path_delays_s == std::vector<double>{0, 0, 0, 0, 0, 0});
    CHECK(t4.path_gains_db == std::vector<double>{1, 1, 1, 1, 1, 1});
    CHECK(t4.eta() == 0.0);
    t4.validate();

    ChannelModel los = ChannelModel::preset("los-equal", 4);
    CHECK(los.condition == ChannelCondition::LoS_equal);
    CHECK(los.rician_k == 10.0);
    los.validate();

    CHECK_THROWS_AS(ChannelModel::preset("bogus", 4), std::invalid_argument);
}

TEST_CASE("sample_covariance") {
    SUBCASE("single snapshot is the outer product") {
        SnapshotMatrix x(2, 1);
        x(0, 0) = cd(1.0, 2.0);
        x(1, 0) = cd(-0.5, 0.25);
        Eigen::MatrixXcd r = sample_covariance(x, 1);
        CHECK(std::abs(r(0, 0) - cd(5.0, 0.0)) < 1e-15);
        CHECK(std::abs(r(0, 1) - x(0, 0) * std::conj(x(1, 0))) < 1e-15);
        CHECK(std::abs(r(1, 0) - std::conj(r(0, 1))) == 0.0);
    }

    SUBCASE("two identical columns match the single-column result") {
        SnapshotMatrix x(3, 2);
        x.col(0) = Eigen::VectorXcd::Random(3);
        x.col(1) = x.col(0);
        Eigen::MatrixXcd r1 = sample_covariance(x, 1);
        Eigen::MatrixXcd r2 = sample_covariance(x, 2);
        CHECK((r1 - r2).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("white noise converges to the identity") {
        SplitMix64 rng(77);
        SnapshotMatrix x(4, 10000);
        for (int k = 0; k < 10000; ++k)
            for (int n = 0; n < 4; ++n)
                x(n, k) = rng.next_cgaussian();
        Eigen::MatrixXcd r = sample_covariance(x, 10000);
        const double err = (r - Eigen::MatrixXcd::Identity(4, 4)).norm() /
                           Eigen::MatrixXcd::Identity(4, 4).norm();
        CHECK(err < 0.05);
    }

    SUBCASE("exactly Hermitian and PSD") {
        SnapshotMatrix x = SnapshotMatrix::Random(5, 20);
        Eigen::MatrixXcd r = sample_covariance(x, 20);
        CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
    }

    SUBCASE("window validation") {
        SnapshotMatrix x = SnapshotMatrix::Random(2, 5);
        CHECK_THROWS_AS(sample_covariance(x, 0), std::invalid_argument);
        CHECK_THROWS_AS(sample_covariance(x, 6), std::invalid_argument);
    }

    SUBCASE("windowing uses the trailing columns") {
        SnapshotMatrix x(1, 3);
        x(0, 0) = cd(100.0, 0.0);
        x(0, 1) = cd(1.0, 0.0);
        x(0, 2) = cd(3.0, 0.0);
        Eigen::MatrixXcd r = sample_covariance(x, 2);
        CHECK(r(0, 0).real() == doctest::Approx(5.0).epsilon(1e-14));
    }
}

TEST_CASE("covariance estimation error shrinks with the window") {
    // light version of the convergence criterion: median over 5 seeds
    const int n = 4;
    std::vector<double> med_err;
    for (int m : {100, 1000}) {
        std::vector<double> errs;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            SplitMix64 rng(seed * 131 + 7);
            SnapshotMatrix x(n, m);
            for (int k = 0; k < m; ++k)
                for (int e = 0; e < n; ++e)
                    x(e, k) = rng.next_cgaussian();
            errs.push_back((sample_covariance(x, m) - Eigen::MatrixXcd::Identity(n, n)).norm());
        }
        std::sort(errs.begin(), errs.end());
        med_err.push_back(errs[2]);
    }
    CHECK(med_err[1] < med_err[0]);
}

TEST_CASE("channel model validation") {
    ChannelModel m = ChannelModel::preset("nlos-unequal", 2);
    m.validate();

    ChannelModel bad = m;
    bad.path_delays_s = {100e-9, 0.0, 800e-9, 1200e-9, 2300e-9, 3700e-9};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument); // first delay not 0

    bad = m;
    bad.path_delays_s = {0.0, 800e-9, 200e-9, 1200e-9, 2300e-9, 3700e-9};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument); // not nondecreasing

    bad = m;
    bad.path_gains_db.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument); // length mismatch

    bad = m;
    bad.max_doppler_hz = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = m;
    bad.sample_rate_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = m;
    bad.rician_k = -2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("unequal correlation matrices are positive semidefinite") {
    SplitMix64 rng(55);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + static_cast<int>(rng.next_u64() % 10);
        std::vector<double> rho(static_cast<std::size_t>(n));
        for (double& r : rho)
            r = 0.99 * rng.next_double();
        Eigen::MatrixXcd m = correlation_matrix(CorrelationSpec::unequal(rho), n);
        CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("snapshot CSV round trip") {
    SnapshotMatrix x = SnapshotMatrix::Random(3, 4);
    std::string csv = snapshots_csv(x);
    CHECK(csv.rfind("snapshot,element,re,im\n", 0) == 0);
    std::istringstream in(csv);
    SnapshotMatrix y = snapshots_from_csv(in);
    REQUIRE(y.rows() == 3);
    REQUIRE(y.cols() == 4);
    CHECK((y - x).cwiseAbs().maxCoeff() == 0.0);

    std::istringstream bad("nope\n");
    CHECK_THROWS_AS(snapshots_from_csv(bad), std::invalid_argument);

    std::istringstream short_row("snapshot,element,re,im\n0,0,1.5\n");
    CHECK_THROWS_WITH_AS(snapshots_from_csv(short_row), doctest::Contains("line 2"),
                         std::invalid_argument);

    std::istringstream no_rows("snapshot,element,re,im\n");
    CHECK_THROWS_AS(snapshots_from_csv(no_rows), std::invalid_argument);
}
