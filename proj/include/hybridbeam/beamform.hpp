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
#include <string>
#include <vector>

#include "hybridbeam/channel.hpp"

namespace hybridbeam {

struct BeamformWeights {
    Eigen::VectorXcd weights;
    Direction steer;
    double alpha = 0.0; // normalization 1/(a^H R^-1 a)
};

double default_diagonal_loading(const Eigen::MatrixXcd& covariance);

// w = alpha * (R + loading I)^-1 a(direction), alpha = 1/(a^H (R+loading I)^-1 a),
// so the distortionless constraint w^H a = 1 holds to solver precision.
// A singular covariance with zero loading is reported with a hint to load.
BeamformWeights mvdr_weights(const Eigen::MatrixXcd& covariance, const ArrayGeometry& geometry,
                             const Direction& direction, double diagonal_loading);
BeamformWeights mvdr_weights(const Eigen::MatrixXcd& covariance, const ArrayGeometry& geometry,
                             const Direction& direction);

// Distortionless matched filter w = a/||a||^2, the non-adaptive baseline.
BeamformWeights matched_filter_weights(const ArrayGeometry& geometry, const Direction& direction);

struct PointSource {
    double power = 1.0; // linear
    Direction direction;
};

// SINR = P_s |w^H a_s|^2 / (sum_i P_i |w^H a_i|^2 + sigma^2 ||w||^2), in dB.
double output_sinr_db(const BeamformWeights& weights, const PointSource& source,
                      const std::vector<PointSource>& interferers, double noise_power,
                      const ArrayGeometry& geometry);

// Uplink of one base station with M antennas serving N terminals.
struct UplinkScenario {
    double rho = 1.0;                               // average uplink power
    std::vector<double> link_gains;                 // beta_n per terminal
    std::vector<Eigen::VectorXcd> channel_vectors;  // y_n per terminal, length M

    int terminal_count() const { return static_cast<int>(channel_vectors.size()); }
    void validate() const;
};

// SINR_n = rho beta_n ||y_n||^4 / (||y_n||^2 + rho sum_{k != n} beta_k |y_n^H y_k|^2), dB.
double uplink_sinr_db(const UplinkScenario& scenario, int terminal);

// y = eta q_los + gamma R^(1/2) q_nlos, with eta^2 + gamma^2 = 1.
Eigen::VectorXcd rician_channel_vector(const Eigen::VectorXcd& q_los,
                                       const Eigen::VectorXcd& q_nlos,
                                       const Eigen::MatrixXcd& correlation_root, double eta,
                                       double gamma_coeff);

struct SinrEntry {
    std::string condition;
    std::string element_pattern;
    double sinr_db = 0.0;
};

struct SinrReport {
    std::vector<SinrEntry> entries;
};

// CSV with header: condition,element_pattern,sinr_db
std::string sinr_report_csv(const SinrReport& report);

// CSV with header: index,re,im
std::string weights_csv(const BeamformWeights& weights);

// Full pipeline per (condition, element pattern): plane-wave collection of a
// desired tone plus one interferer, fading, AWGN, sample covariance, MVDR
// adaptation, then the ideal-model output SINR. Deterministic per seed.
SinrReport sinr_table(const ArrayGeometry& geometry_bowtie, const ArrayGeometry& geometry_dipole,
                      const std::vector<ChannelModel>& conditions, std::uint64_t seed);

// eta_e = P_rad / (P_rad + P_sw + P_back)
double antenna_efficiency(double p_rad, double p_sw, double p_back);

} // namespace hybridbeam
