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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hybridbeam/radiation.hpp"
#include "hybridbeam/rng.hpp"

namespace hybridbeam {

// rows = elements, cols = time snapshots
using SnapshotMatrix = Eigen::MatrixXcd;

// Spatial correlation across elements: either a single coefficient shared by
// every pair, or a per-element loading with entry (i,j) = sqrt(rho_i*rho_j).
struct CorrelationSpec {
    enum class Kind { equal, unequal };
    Kind kind = Kind::equal;
    double rho = 0.0;
    std::vector<double> rho_per_element;

    static CorrelationSpec equal(double rho);
    static CorrelationSpec unequal(std::vector<double> rho);
    void validate(int n_elements = -1) const;
};

enum class ChannelCondition { LoS_equal, NLoS_unequal, NLoS_equal };

std::string to_string(ChannelCondition condition);

// Tapped-delay-line fading preset. The Rician LoS/diffuse split applies to
// the first tap under the LoS condition: eta = sqrt(K/(K+1)),
// gamma = sqrt(1/(K+1)); NLoS conditions are pure Rayleigh (eta = 0).
struct ChannelModel {
    ChannelCondition condition = ChannelCondition::LoS_equal;
    double sample_rate_hz = 1e9;
    std::vector<double> path_delays_s = {0.0};
    std::vector<double> path_gains_db = {0.0};
    double max_doppler_hz = 50.0;
    double rician_k = 10.0; // linear power ratio
    CorrelationSpec correlation = CorrelationSpec::equal(0.5);

    void validate() const;
    double eta() const;
    double gamma_coeff() const;

    // Built-ins: "los-equal", "nlos-unequal", "nlos-equal". The preset takes
    // the element count so the unequal loading can be sized.
    static ChannelModel preset(const std::string& name, int n_elements);
};

struct SourceSignal {
    Eigen::VectorXcd waveform;
    Direction direction;
};

// Narrowband plane-wave superposition: row n, column k is
// sum_l s_l(k) * exp(-j K_l . r_n) * g_n(direction_l).
SnapshotMatrix collect_plane_wave(const ArrayGeometry& g,
                                  const std::vector<SourceSignal>& sources);

// Noise power used by add_awgn for a given input: the reference signal power
// is the mean squared magnitude over all entries, falling back to 1 for an
// all-zero input so the generator can act as a pure noise source.
double awgn_noise_power(const SnapshotMatrix& x, double snr_db);

// Adds circular complex Gaussian noise at the given SNR; an infinite SNR
// returns the input unchanged. Deterministic under a fixed seed.
SnapshotMatrix add_awgn(const SnapshotMatrix& x, double snr_db, std::uint64_t seed);

// Jakes-style sum-of-sinusoids complex fading process with unit average
// power. Oscillator angles and phases are drawn once from the seed.
class SumOfSinusoids {
  public:
    SumOfSinusoids(double max_doppler_hz, std::uint64_t seed, int n_oscillators = 8);
    std::complex<double> at(double t_seconds) const;
    // Samples at t0 + k*dt for k = 0..count-1 via per-oscillator phase
    // rotation (one rotation per sample instead of a sincos pair).
    Eigen::VectorXcd sample_grid(double t0, double dt, Eigen::Index count) const;

  private:
    std::vector<double> omega_; // rad/s
    std::vector<double> phase_;
    double amplitude_;
};

// Per-element tapped-delay-line fading. Tap average powers follow
// path_gains_db, tap gains evolve by sum-of-sinusoids Doppler processes, and
// the diffuse component is spatially colored by the correlation square root.
// Deterministic under a fixed seed with per-element/per-tap derived streams.
SnapshotMatrix apply_fading(const SnapshotMatrix& x, const ChannelModel& model,
                            std::uint64_t seed);

Eigen::MatrixXcd correlation_matrix(const CorrelationSpec& spec, int n);

// Hermitian PSD square root via eigendecomposition (negatives clamped).
Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& m);

// R_hat = (1/M) * sum of x_k x_k^H over the last `window` columns.
// Hermitian by construction.
Eigen::MatrixXcd sample_covariance(const SnapshotMatrix& x, int window);
Eigen::MatrixXcd sample_covariance(const SnapshotMatrix& x);

// CSV with header: snapshot,element,re,im
std::string snapshots_csv(const SnapshotMatrix& x);
SnapshotMatrix snapshots_from_csv(std::istream& in);

} // namespace hybridbeam
