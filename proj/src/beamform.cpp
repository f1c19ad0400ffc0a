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

#include "hybridbeam/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/textio.hpp"

namespace hybridbeam {

namespace {

void require_hermitian(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("covariance must be square and nonempty");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("covariance must be Hermitian");
}

} // namespace

double default_diagonal_loading(const Eigen::MatrixXcd& covariance) {
    return 1e-6 * covariance.trace().real() / static_cast<double>(covariance.rows());
}

BeamformWeights mvdr_weights(const Eigen::MatrixXcd& covariance, const ArrayGeometry& geometry,
                             const Direction& direction, double diagonal_loading) {
    require_hermitian(covariance);
    if (covariance.rows() != geometry.size())
        throw std::invalid_argument("covariance size does not match the geometry");
    if (!(diagonal_loading >= 0.0))
        throw std::invalid_argument("diagonal loading must be >= 0");

    Eigen::MatrixXcd r = covariance;
    r.diagonal().array() += diagonal_loading;

    const Eigen::VectorXcd a = steering_phasors(geometry, direction);
    Eigen::LLT<Eigen::MatrixXcd> llt(r);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(
            "covariance is singular or indefinite; add diagonal loading to invert it");

    const Eigen::VectorXcd w_tilde = llt.solve(a);
    const std::complex<double> d = a.dot(w_tilde); // a^H R^-1 a, real for Hermitian R
    if (!(std::abs(d) > 0.0))
        throw std::runtime_error("steering vector lies in the covariance null space");

    BeamformWeights out;
    out.steer = direction;
    out.alpha = 1.0 / d.real();
    out.weights = w_tilde / std::conj(d);
    return out;
}

BeamformWeights mvdr_weights(const Eigen::MatrixXcd& covariance, const ArrayGeometry& geometry,
                             const Direction& direction) {
    return mvdr_weights(covariance, geometry, direction, default_diagonal_loading(covariance));
}

BeamformWeights matched_filter_weights(const ArrayGeometry& geometry, const Direction& direction) {
    const Eigen::VectorXcd a = steering_phasors(geometry, direction);
    BeamformWeights out;
    out.steer = direction;
    out.alpha = 1.0 / a.squaredNorm();
    out.weights = a * out.alpha;
    return out;
}

double output_sinr_db(const BeamformWeights& weights, const PointSource& source,
                      const std::vector<PointSource>& interferers, double noise_power,
                      const ArrayGeometry& geometry) {
    if (weights.weights.size() != geometry.size())
        throw std::invalid_argument("weights do not match the geometry");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("noise power must be positive");
    if (source.power < 0.0)
        throw std::invalid_argument("source power must be >= 0");

    auto response = [&](const Direction& d) {
        return std::norm(weights.weights.dot(steering_phasors(geometry, d)));
    };
    const double sig = source.power * response(source.direction);
    double denom = noise_power * weights.weights.squaredNorm();
    for (const PointSource& i : interferers) {
        if (i.power < 0.0)
            throw std::invalid_argument("interferer power must be >= 0");
        denom += i.power * response(i.direction);
    }
    return 10.0 * std::log10(sig / denom);
}

void UplinkScenario::validate() const {
    if (!(rho > 0.0))
        throw std::invalid_argument("uplink power rho must be positive");
    if (channel_vectors.empty() || link_gains.size() != channel_vectors.size())
        throw std::invalid_argument("link gains and channel vectors must match and be nonempty");
    const Eigen::Index m = channel_vectors.front().size();
    for (const auto& y : channel_vectors)
        if (y.size() != m)
            throw std::invalid_argument("channel vectors must share one length");
    for (double b : link_gains)
        if (!(b > 0.0))
            throw std::invalid_argument("link gains must be positive");
}

double uplink_sinr_db(const UplinkScenario& scenario, int terminal) {
    scenario.validate();
    if (terminal < 0 || terminal >= scenario.terminal_count())
        throw std::invalid_argument("terminal index out of range");
    const Eigen::VectorXcd& y = scenario.channel_vectors[static_cast<std::size_t>(terminal)];
    const double norm2 = y.squaredNorm();
    if (!(norm2 > 0.0))
        throw std::invalid_argument("terminal channel vector is zero");

    double interference = 0.0;
    for (int k = 0; k < scenario.terminal_count(); ++k) {
        if (k == terminal)
            continue;
        interference += scenario.link_gains[static_cast<std::size_t>(k)] *
                        std::norm(y.dot(scenario.channel_vectors[static_cast<std::size_t>(k)]));
    }
    const double sinr = scenario.rho * scenario.link_gains[static_cast<std::size_t>(terminal)] *
                        norm2 * norm2 / (norm2 + scenario.rho * interference);
    return 10.0 * std::log10(sinr);
}

Eigen::VectorXcd rician_channel_vector(const Eigen::VectorXcd& q_los,
                                       const Eigen::VectorXcd& q_nlos,
                                       const Eigen::MatrixXcd& correlation_root, double eta,
                                       double gamma_coeff) {
    if (q_los.size() != q_nlos.size())
        throw std::invalid_argument("LoS and NLoS components must have equal length");
    if (correlation_root.rows() != q_nlos.size() || correlation_root.cols() != q_nlos.size())
        throw std::invalid_argument("correlation root does not match the vector length");
    if (std::abs(eta * eta + gamma_coeff * gamma_coeff - 1.0) > 1e-9)
        throw std::invalid_argument("eta^2 + gamma^2 must equal 1");
    return eta * q_los + gamma_coeff * (correlation_root * q_nlos);
}

std::string sinr_report_csv(const SinrReport& report) {
    std::ostringstream out;
    out << "condition,element_pattern,sinr_db\n";
    for (const SinrEntry& e : report.entries)
        out << e.condition << ',' << e.element_pattern << ',' << format_double(e.sinr_db) << '\n';
    return out.str();
}

std::string weights_csv(const BeamformWeights& weights) {
    std::ostringstream out;
    out << "index,re,im\n";
    for (Eigen::Index i = 0; i < weights.weights.size(); ++i)
        out << i << ',' << format_double(weights.weights[i].real()) << ','
            << format_double(weights.weights[i].imag()) << '\n';
    return out.str();
}

namespace {

// Fixed evaluation scenario for the condition/pattern table. Both signals
// are tones (the simulated data model), the desired one well below the
// interferer so the adapted weights are driven by the interference-plus-
// noise structure. The tone frequencies sit on the tap-delay grid of the
// built-in profiles, which keeps the interference rank one per realization
// and makes the conditions differ through their correlation structure.
struct TableScenario {
    Direction source_dir = Direction::from_degrees(45.0, 45.0);
    Direction interferer_dir = Direction::from_degrees(45.0, 105.0);
    double source_power = 0.05;
    double interferer_power = 100.0;
    double snr_db = 20.0;
    int covariance_window = 512;
    double source_freq = 0.05;
    double interferer_freq = 0.1;
    int n_draws = 24;
};

double table_cell_sinr_once(const ArrayGeometry& geometry, const ChannelModel& condition,
                            const TableScenario& sc, std::uint64_t seed) {
    // training support grows with the adaptive degrees of freedom
    const Eigen::Index window =
        std::max<Eigen::Index>(sc.covariance_window, 8 * geometry.size());
    // enough snapshots to flush the longest tap delay before the window
    Eigen::Index max_delay = 0;
    for (double delay : condition.path_delays_s)
        max_delay = std::max(max_delay, static_cast<Eigen::Index>(
                                            std::llround(delay * condition.sample_rate_hz)));
    const Eigen::Index n_snapshots = max_delay + window;

    SplitMix64 rng(derive_seed(seed, 0));
    Eigen::VectorXcd tone(n_snapshots), interf(n_snapshots);
    const double phase_s = 2.0 * kPi * rng.next_double();
    const double phase_i = 2.0 * kPi * rng.next_double();
    for (Eigen::Index k = 0; k < n_snapshots; ++k) {
        const double a = 2.0 * kPi * sc.source_freq * static_cast<double>(k) + phase_s;
        const double b = 2.0 * kPi * sc.interferer_freq * static_cast<double>(k) + phase_i;
        tone[k] = std::complex<double>(std::cos(a), std::sin(a)) * std::sqrt(sc.source_power);
        interf[k] =
            std::complex<double>(std::cos(b), std::sin(b)) * std::sqrt(sc.interferer_power);
    }

    SnapshotMatrix x = collect_plane_wave(
        geometry, {{tone, sc.source_dir}, {interf, sc.interferer_dir}});
    x = apply_fading(x, condition, derive_seed(seed, 1));
    const double noise_power = awgn_noise_power(x, sc.snr_db);
    x = add_awgn(x, sc.snr_db, derive_seed(seed, 2));

    const Eigen::MatrixXcd cov = sample_covariance(x, static_cast<int>(window));
    const BeamformWeights w = mvdr_weights(cov, geometry, sc.source_dir);
    return output_sinr_db(w, {sc.source_power, sc.source_dir},
                          {{sc.interferer_power, sc.interferer_dir}}, noise_power, geometry);
}

// Median over independent fading draws; single draws of a slow fading
// process scatter by several dB.
double table_cell_sinr(const ArrayGeometry& geometry, const ChannelModel& condition,
                       const TableScenario& sc, std::uint64_t seed) {
    std::vector<double> draws;
    draws.reserve(static_cast<std::size_t>(sc.n_draws));
    for (int d = 0; d < sc.n_draws; ++d)
        draws.push_back(table_cell_sinr_once(geometry, condition, sc,
                                             derive_seed(seed, static_cast<std::uint64_t>(d), 3)));
    std::sort(draws.begin(), draws.end());
    const std::size_t mid = draws.size() / 2;
    return draws.size() % 2 ? draws[mid] : 0.5 * (draws[mid - 1] + draws[mid]);
}

} // namespace

SinrReport sinr_table(const ArrayGeometry& geometry_bowtie, const ArrayGeometry& geometry_dipole,
                      const std::vector<ChannelModel>& conditions, std::uint64_t seed) {
    if (geometry_bowtie.size() != geometry_dipole.size())
        throw std::invalid_argument("the two geometries must share one configuration");
    for (int i = 0; i < geometry_bowtie.size(); ++i)
        if ((geometry_bowtie.elements[static_cast<std::size_t>(i)].position -
             geometry_dipole.elements[static_cast<std::size_t>(i)].position)
                .norm() > 1e-12)
            throw std::invalid_argument("the two geometries must share element positions");
    if (conditions.empty())
        throw std::invalid_argument("no channel conditions given");

    const TableScenario sc;
    SinrReport report;
    std::uint64_t cell = 0;
    for (const ChannelModel& raw_condition : conditions) {
        // Normalize the delay profile to unit total power so the cells
        // compare channel structure rather than total channel gain.
        ChannelModel condition = raw_condition;
        double total = 0.0;
        for (double g : condition.path_gains_db)
            total += std::pow(10.0, g / 10.0);
        const double norm_db = 10.0 * std::log10(total);
        for (double& g : condition.path_gains_db)
            g -= norm_db;

        // Identical cell seed per condition so the element pattern is the
        // only difference between the two rows.
        const std::uint64_t cell_seed = derive_seed(seed, cell++);
        report.entries.push_back({to_string(condition.condition), "bowtie",
                                  table_cell_sinr(geometry_bowtie, condition, sc, cell_seed)});
        report.entries.push_back({to_string(condition.condition), "dipole",
                                  table_cell_sinr(geometry_dipole, condition, sc, cell_seed)});
    }
    return report;
}

double antenna_efficiency(double p_rad, double p_sw, double p_back) {
    if (p_rad < 0.0 || p_sw < 0.0 || p_back < 0.0)
        throw std::invalid_argument("powers must be >= 0");
    const double total = p_rad + p_sw + p_back;
    if (!(total > 0.0))
        throw std::invalid_argument("at least one power must be positive");
    return p_rad / total;
}

} // namespace hybridbeam
