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

#include "hybridbeam/doa.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/textio.hpp"

namespace hybridbeam {

void SectorScheme::validate() const {
    if (n_sectors < 2)
        throw std::invalid_argument("scheme needs at least 2 sectors");
    if (!(fov_max_deg > fov_min_deg))
        throw std::invalid_argument("field of view must be a nonempty interval");
    if (!(elevation_theta_deg > 0.0 && elevation_theta_deg < 180.0))
        throw std::invalid_argument("scan elevation must avoid the poles");
}

int SectorScheme::sector_of(double azimuth_deg) const {
    if (azimuth_deg < fov_min_deg || azimuth_deg > fov_max_deg)
        throw std::invalid_argument("azimuth outside the field of view");
    int s = 1 + static_cast<int>((azimuth_deg - fov_min_deg) / sector_width_deg());
    return std::min(s, n_sectors);
}

std::pair<double, double> SectorScheme::sector_bounds_deg(int sector) const {
    if (sector < 1 || sector > n_sectors)
        throw std::invalid_argument("sector index out of range");
    const double w = sector_width_deg();
    return {fov_min_deg + (sector - 1) * w, fov_min_deg + sector * w};
}

std::string spectrum_csv(const DoaSpectrum& spectrum) {
    std::ostringstream out;
    out << "theta_deg,phi_deg,power_db\n";
    for (std::size_t i = 0; i < spectrum.grid.size(); ++i) {
        const Direction& d = spectrum.grid[i];
        const double p = spectrum.power[static_cast<Eigen::Index>(i)];
        const double p_db = p > 0.0 ? std::max(10.0 * std::log10(p), -300.0) : -300.0;
        out << format_double(rad2deg(d.theta)) << ',' << format_double(rad2deg(d.phi)) << ','
            << format_double(p_db) << '\n';
    }
    return out.str();
}

Eigen::VectorXd covariance_features(const Eigen::MatrixXcd& covariance, int dim) {
    if (covariance.rows() != covariance.cols() || covariance.rows() < 1)
        throw std::invalid_argument("covariance must be square and nonempty");
    if (dim < 1)
        throw std::invalid_argument("feature dimension must be positive");
    const Eigen::Index n = covariance.rows();
    const double tr = covariance.trace().real();

    Eigen::VectorXd f = Eigen::VectorXd::Zero(dim);
    if (!(std::abs(tr) > 0.0))
        return f; // zero covariance maps to the zero feature vector

    Eigen::Index w = 0;
    auto push = [&](double v) {
        if (w < dim)
            f[w++] = v;
    };
    for (Eigen::Index offset = 1; offset < n && w < dim; ++offset)
        for (Eigen::Index i = 0; i + offset < n && w < dim; ++i) {
            const std::complex<double> v = covariance(i, i + offset) / tr;
            push(v.real());
            push(v.imag());
        }
    for (Eigen::Index i = 0; i < n && w < dim; ++i)
        push(covariance(i, i).real() / tr);
    return f;
}

LabeledDataset generate_dataset(const ArrayGeometry& geometry, const SectorScheme& scheme,
                                int n_samples_per_sector, double snr_db,
                                const std::optional<ChannelModel>& channel, std::uint64_t seed,
                                int n_snapshots, int feature_dim) {
    scheme.validate();
    if (n_samples_per_sector < 1)
        throw std::invalid_argument("need at least one sample per sector");
    if (n_snapshots < 1)
        throw std::invalid_argument("need at least one snapshot");

    const double tone_freq = 0.05; // cycles per snapshot
    LabeledDataset data;
    data.n_classes = scheme.n_sectors;
    data.features.resize(static_cast<Eigen::Index>(scheme.n_sectors) * n_samples_per_sector,
                         feature_dim);
    data.labels.reserve(data.features.rows());

    Eigen::Index row = 0;
    for (int s = 1; s <= scheme.n_sectors; ++s) {
        const auto [lo, hi] = scheme.sector_bounds_deg(s);
        for (int i = 0; i < n_samples_per_sector; ++i, ++row) {
            const std::uint64_t sample_id = static_cast<std::uint64_t>(row);
            SplitMix64 rng(derive_seed(seed, sample_id, 0));
            const double az = lo + (hi - lo) * rng.next_double();
            const double phase0 = 2.0 * kPi * rng.next_double();

            Eigen::VectorXcd tone(n_snapshots);
            for (int k = 0; k < n_snapshots; ++k) {
                const double a = 2.0 * kPi * tone_freq * k + phase0;
                tone[k] = {std::cos(a), std::sin(a)};
            }
            SnapshotMatrix x = collect_plane_wave(
                geometry, {{tone, Direction::from_degrees(scheme.elevation_theta_deg, az)}});
            if (channel)
                x = apply_fading(x, *channel, derive_seed(seed, sample_id, 1));
            x = add_awgn(x, snr_db, derive_seed(seed, sample_id, 2));

            data.features.row(row) =
                covariance_features(sample_covariance(x), feature_dim).transpose();
            data.labels.push_back(s);
        }
    }
    return data;
}

DoaSpectrum spectrum_from_covariance(const Eigen::MatrixXcd& covariance,
                                     const ArrayGeometry& geometry,
                                     const std::vector<Direction>& grid) {
    if (grid.empty())
        throw std::invalid_argument("spectrum grid is empty");
    if (covariance.rows() != geometry.size())
        throw std::invalid_argument("covariance size does not match the geometry");

    DoaSpectrum out;
    out.grid = grid;
    out.power.resize(static_cast<Eigen::Index>(grid.size()));
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Eigen::VectorXcd h = steering_vector(geometry, grid[i]).entries;
        const double p = (h.adjoint() * covariance * h).value().real();
        if (p < -1e-10 * scale)
            throw std::runtime_error("beamformer power is negative beyond tolerance");
        out.power[static_cast<Eigen::Index>(i)] = std::max(p, 0.0);
    }
    return out;
}

DoaSpectrum spectrum(const SnapshotMatrix& snapshots, const ArrayGeometry& geometry,
                     const std::vector<Direction>& grid) {
    if (snapshots.size() == 0)
        throw std::invalid_argument("empty snapshot matrix");
    return spectrum_from_covariance(sample_covariance(snapshots), geometry, grid);
}

std::vector<Direction> azimuth_grid(const SectorScheme& scheme, double start_deg, double stop_deg,
                                    double step_deg) {
    if (!(step_deg > 0.0) || stop_deg < start_deg)
        throw std::invalid_argument("empty azimuth grid");
    std::vector<Direction> grid;
    const int n = static_cast<int>(std::floor((stop_deg - start_deg) / step_deg + 1e-9));
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        grid.push_back(
            Direction::from_degrees(scheme.elevation_theta_deg, start_deg + i * step_deg));
    return grid;
}

DoaEstimate estimate_doa(const LsSvmModel& model, const SnapshotMatrix& snapshots,
                         const ArrayGeometry& geometry, const SectorScheme& scheme,
                         double grid_step_deg) {
    scheme.validate();
    if (snapshots.rows() != geometry.size())
        throw std::invalid_argument("snapshot rows do not match the geometry");
    if (model.n_classes != scheme.n_sectors)
        throw std::invalid_argument("model class count does not match the sector scheme");

    const Eigen::MatrixXcd cov = sample_covariance(snapshots);
    const Eigen::VectorXd features = covariance_features(cov, model.feature_dim());

    DoaEstimate est;
    est.sector = predict(model, features);
    const auto [lo, hi] = scheme.sector_bounds_deg(est.sector);
    est.spectrum =
        spectrum_from_covariance(cov, geometry, azimuth_grid(scheme, lo, hi, grid_step_deg));

    Eigen::Index peak = 0;
    est.spectrum.power.maxCoeff(&peak);
    est.refined_angle_deg = lo + static_cast<double>(peak) * grid_step_deg;
    return est;
}

} // namespace hybridbeam
