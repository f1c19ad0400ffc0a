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
#include <optional>
#include <string>
#include <vector>

#include "hybridbeam/channel.hpp"
#include "hybridbeam/lssvm.hpp"

namespace hybridbeam {

// Angular sectors partitioning an azimuth field of view at fixed elevation.
struct SectorScheme {
    int n_sectors = 3;
    double fov_min_deg = -90.0;
    double fov_max_deg = 90.0;
    double elevation_theta_deg = 90.0; // polar angle of the scan plane

    void validate() const;
    double sector_width_deg() const { return (fov_max_deg - fov_min_deg) / n_sectors; }
    // 1-based sector of an azimuth angle; angles at the upper edge fall into
    // the last sector.
    int sector_of(double azimuth_deg) const;
    std::pair<double, double> sector_bounds_deg(int sector) const;
};

struct DoaSpectrum {
    std::vector<Direction> grid;
    Eigen::VectorXd power; // linear, >= 0
};

// CSV with header: theta_deg,phi_deg,power_db (power floored at -300 dB)
std::string spectrum_csv(const DoaSpectrum& spectrum);

// Classifier features of a covariance matrix: the trace-normalized upper
// triangle enumerated by super-diagonal offset (re/im interleaved), then the
// diagonal, truncated or zero-padded to `dim`.
Eigen::VectorXd covariance_features(const Eigen::MatrixXcd& covariance, int dim = 56);

// Simulates one labeled sample per draw: a unit sinusoid from a uniformly
// drawn in-sector azimuth, through the plane-wave collector, the optional
// fading channel and AWGN, then featurized from the sample covariance.
LabeledDataset generate_dataset(const ArrayGeometry& geometry, const SectorScheme& scheme,
                                int n_samples_per_sector, double snr_db,
                                const std::optional<ChannelModel>& channel, std::uint64_t seed,
                                int n_snapshots = 64, int feature_dim = 56);

// Conventional beamformer power h^H R_hat h over the grid.
DoaSpectrum spectrum(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                     const std::vector<Direction>& grid);
DoaSpectrum spectrum_from_covariance(const Eigen::MatrixXcd& covariance,
                                     const ArrayGeometry& geometry,
                                     const std::vector<Direction>& grid);

// Azimuth grid across [start, stop] degrees at the scheme's elevation.
std::vector<Direction> azimuth_grid(const SectorScheme& scheme, double start_deg,
                                    double stop_deg, double step_deg);

struct DoaEstimate {
    int sector = 0;
    double refined_angle_deg = 0.0;
    DoaSpectrum spectrum;
};

// Classifies the covariance features into a sector, then refines the
// estimate to the spectrum peak inside that sector.
DoaEstimate estimate_doa(const LsSvmModel& model, const SnapshotMatrix& snapshots,
                         const ArrayGeometry& geometry, const SectorScheme& scheme,
                         double grid_step_deg = 1.0);

} // namespace hybridbeam
