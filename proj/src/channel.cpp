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

#include "hybridbeam/channel.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/textio.hpp"

namespace hybridbeam {

namespace {
const std::complex<double> kJ(0.0, 1.0);
} // namespace

CorrelationSpec CorrelationSpec::equal(double rho) {
    CorrelationSpec s;
    s.kind = Kind::equal;
    s.rho = rho;
    s.validate();
    return s;
}

CorrelationSpec CorrelationSpec::unequal(std::vector<double> rho) {
    CorrelationSpec s;
    s.kind = Kind::unequal;
    s.rho_per_element = std::move(rho);
    s.validate();
    return s;
}

void CorrelationSpec::validate(int n_elements) const {
    auto check = [](double r) {
        if (!(r >= 0.0 && r < 1.0))
            throw std::invalid_argument("correlation coefficients must lie in [0, 1)");
    };
    if (kind == Kind::equal) {
        check(rho);
    } else {
        if (rho_per_element.empty())
            throw std::invalid_argument("unequal correlation needs per-element coefficients");
        for (double r : rho_per_element)
            check(r);
        if (n_elements >= 0 && static_cast<int>(rho_per_element.size()) != n_elements)
            throw std::invalid_argument("unequal correlation list does not match element count");
    }
}

std::string to_string(ChannelCondition condition) {
    switch (condition) {
    case ChannelCondition::LoS_equal:
        return "los-equal";
    case ChannelCondition::NLoS_unequal:
        return "nlos-unequal";
    case ChannelCondition::NLoS_equal:
        return "nlos-equal";
    }
    return "?";
}

void ChannelModel::validate() const {
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("sample_rate must be positive");
    if (path_delays_s.empty() || path_delays_s.size() != path_gains_db.size())
        throw std::invalid_argument("path_delays and path_gains must have equal nonzero length");
    if (path_delays_s.front() != 0.0)
        throw std::invalid_argument("first path delay must be 0");
    for (std::size_t i = 1; i < path_delays_s.size(); ++i)
        if (path_delays_s[i] < path_delays_s[i - 1])
            throw std::invalid_argument("path delays must be nondecreasing");
    if (!(max_doppler_hz >= 0.0))
        throw std::invalid_argument("max_doppler must be >= 0");
    if (std::isnan(rician_k) || rician_k < 0.0)
        throw std::invalid_argument("rician_k must be >= 0");
    correlation.validate();
}

double ChannelModel::eta() const {
    if (condition != ChannelCondition::LoS_equal)
        return 0.0;
    if (std::isinf(rician_k))
        return 1.0;
    return std::sqrt(rician_k / (rician_k + 1.0));
}

double ChannelModel::gamma_coeff() const {
    if (condition != ChannelCondition::LoS_equal)
        return 1.0;
    if (std::isinf(rician_k))
        return 0.0;
    return std::sqrt(1.0 / (rician_k + 1.0));
}

ChannelModel ChannelModel::preset(const std::string& name, int n_elements) {
    if (n_elements < 1)
        throw std::invalid_argument("preset needs a positive element count");
    ChannelModel m;
    if (name == "los-equal") {
        m.condition = ChannelCondition::LoS_equal;
        m.path_delays_s = {0.0};
        m.path_gains_db = {0.0};
        m.rician_k = 10.0;
        m.correlation = CorrelationSpec::equal(0.7);
    } else if (name == "nlos-unequal") {
        m.condition = ChannelCondition::NLoS_unequal;
        m.path_delays_s = {0.0, 200e-9, 800e-9, 1200e-9, 2300e-9, 3700e-9};
        m.path_gains_db = {0.0, -0.9, -4.9, -8.0, -7.8, -23.9};
        m.rician_k = 0.0;
        // Element terminals observe a spread of correlations; the weak end
        // decorrelates the array and makes this the harshest condition.
        std::vector<double> rho(static_cast<std::size_t>(n_elements));
        for (int i = 0; i < n_elements; ++i)
            rho[static_cast<std::size_t>(i)] =
                n_elements == 1 ? 0.25 : 0.05 + 0.4 * i / (n_elements - 1.0);
        m.correlation = CorrelationSpec::unequal(std::move(rho));
    } else if (name == "nlos-equal") {
        m.condition = ChannelCondition::NLoS_equal;
        m.path_delays_s = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        m.path_gains_db = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        m.rician_k = 0.0;
        m.correlation = CorrelationSpec::equal(0.7);
    } else {
        throw std::invalid_argument("unknown channel preset '" + name +
                                    "' (expected los-equal, nlos-unequal or nlos-equal)");
    }
    m.sample_rate_hz = 1e9;
    m.max_doppler_hz = 50.0;
    return m;
}

SnapshotMatrix collect_plane_wave(const ArrayGeometry& g,
                                  const std::vector<SourceSignal>& sources) {
    if (sources.empty())
        throw std::invalid_argument("no sources given");
    const Eigen::Index n_snapshots = sources.front().waveform.size();
    for (const SourceSignal& s : sources)
        if (s.waveform.size() != n_snapshots)
            throw std::invalid_argument("source waveforms must have equal length");

    SnapshotMatrix out = SnapshotMatrix::Zero(g.size(), n_snapshots);
    for (const SourceSignal& s : sources) {
        Eigen::VectorXcd a = steering_phasors(g, s.direction);
        out.noalias() += a * s.waveform.transpose();
    }
    return out;
}

double awgn_noise_power(const SnapshotMatrix& x, double snr_db) {
    if (x.size() == 0)
        throw std::invalid_argument("empty snapshot matrix");
    double p_sig = x.squaredNorm() / static_cast<double>(x.size());
    if (p_sig == 0.0)
        p_sig = 1.0;
    return p_sig * std::pow(10.0, -snr_db / 10.0);
}

SnapshotMatrix add_awgn(const SnapshotMatrix& x, double snr_db, std::uint64_t seed) {
    if (x.size() == 0)
        throw std::invalid_argument("empty snapshot matrix");
    if (std::isinf(snr_db) && snr_db > 0.0)
        return x;
    const double sigma = std::sqrt(awgn_noise_power(x, snr_db));
    SplitMix64 rng(seed);
    SnapshotMatrix out = x;
    for (Eigen::Index c = 0; c < out.cols(); ++c)
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            out(r, c) += sigma * rng.next_cgaussian();
    return out;
}

SumOfSinusoids::SumOfSinusoids(double max_doppler_hz, std::uint64_t seed, int n_oscillators) {
    if (n_oscillators < 1)
        throw std::invalid_argument("need at least one oscillator");
    SplitMix64 rng(seed);
    omega_.resize(static_cast<std::size_t>(n_oscillators));
    phase_.resize(static_cast<std::size_t>(n_oscillators));
    for (int i = 0; i < n_oscillators; ++i) {
        // Jakes spectrum: Doppler shift f_d * cos(alpha) with uniform alpha
        double alpha = 2.0 * kPi * rng.next_double();
        omega_[static_cast<std::size_t>(i)] = 2.0 * kPi * max_doppler_hz * std::cos(alpha);
        phase_[static_cast<std::size_t>(i)] = 2.0 * kPi * rng.next_double();
    }
    amplitude_ = 1.0 / std::sqrt(static_cast<double>(n_oscillators));
}

std::complex<double> SumOfSinusoids::at(double t_seconds) const {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        double a = omega_[i] * t_seconds + phase_[i];
        acc += std::complex<double>(std::cos(a), std::sin(a));
    }
    return amplitude_ * acc;
}

Eigen::VectorXcd SumOfSinusoids::sample_grid(double t0, double dt, Eigen::Index count) const {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(count);
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        const double a0 = omega_[i] * t0 + phase_[i];
        std::complex<double> cur(std::cos(a0), std::sin(a0));
        const double step = omega_[i] * dt;
        const std::complex<double> rot(std::cos(step), std::sin(step));
        for (Eigen::Index k = 0; k < count; ++k) {
            acc[k] += cur;
            cur *= rot;
        }
    }
    return amplitude_ * acc;
}

SnapshotMatrix apply_fading(const SnapshotMatrix& x, const ChannelModel& model,
                            std::uint64_t seed) {
    model.validate();
    if (x.size() == 0)
        throw std::invalid_argument("empty snapshot matrix");
    const int n = static_cast<int>(x.rows());
    const Eigen::Index n_snapshots = x.cols();
    const std::size_t n_taps = model.path_delays_s.size();

    std::vector<Eigen::Index> delay_samples(n_taps);
    for (std::size_t i = 0; i < n_taps; ++i) {
        delay_samples[i] =
            static_cast<Eigen::Index>(std::llround(model.path_delays_s[i] * model.sample_rate_hz));
        if (delay_samples[i] >= n_snapshots)
            throw std::invalid_argument("path delay exceeds the snapshot duration");
    }

    std::vector<double> tap_amp(n_taps);
    for (std::size_t i = 0; i < n_taps; ++i)
        tap_amp[i] = std::pow(10.0, model.path_gains_db[i] / 20.0);

    const double eta = model.eta();
    const double gamma = model.gamma_coeff();
    const double dt = 1.0 / model.sample_rate_hz;

    Eigen::MatrixXcd corr_sqrt;
    if (gamma > 0.0) {
        CorrelationSpec spec = model.correlation;
        spec.validate(n);
        corr_sqrt = matrix_sqrt_psd(correlation_matrix(spec, n));
    }

    SnapshotMatrix out = SnapshotMatrix::Zero(n, n_snapshots);
    Eigen::MatrixXcd gains(n, n_snapshots);
    for (std::size_t tap = 0; tap < n_taps; ++tap) {
        if (gamma > 0.0) {
            // per-element diffuse processes, spatially colored tap by tap
            for (int e = 0; e < n; ++e) {
                SumOfSinusoids proc(model.max_doppler_hz,
                                    derive_seed(seed, static_cast<std::uint64_t>(e),
                                                static_cast<std::uint64_t>(tap)));
                gains.row(e) = proc.sample_grid(0.0, dt, n_snapshots).transpose();
            }
            if (corr_sqrt.size() > 0)
                gains = corr_sqrt * gains;
            gains *= gamma;
        } else {
            gains.setZero();
        }
        if (tap == 0 && eta > 0.0)
            gains.array() += eta;

        const Eigen::Index d = delay_samples[tap];
        const Eigen::Index span = n_snapshots - d;
        out.rightCols(span).array() +=
            tap_amp[tap] * gains.rightCols(span).array() * x.leftCols(span).array();
    }
    return out;
}

Eigen::MatrixXcd correlation_matrix(const CorrelationSpec& spec, int n) {
    if (n < 1)
        throw std::invalid_argument("correlation matrix needs n >= 1");
    spec.validate(spec.kind == CorrelationSpec::Kind::unequal ? n : -1);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (spec.kind == CorrelationSpec::Kind::equal)
                r(i, j) = spec.rho;
            else
                r(i, j) = std::sqrt(spec.rho_per_element[static_cast<std::size_t>(i)] *
                                    spec.rho_per_element[static_cast<std::size_t>(j)]);
        }
    return r;
}

Eigen::MatrixXcd matrix_sqrt_psd(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("matrix square root needs a square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd sample_covariance(const SnapshotMatrix& x, int window) {
    if (window < 1 || window > x.cols())
        throw std::invalid_argument("covariance window out of range");
    const Eigen::Index n = x.rows();
    const auto block = x.rightCols(window);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
    r.selfadjointView<Eigen::Lower>().rankUpdate(block, 1.0 / window);
    Eigen::MatrixXcd full = r.selfadjointView<Eigen::Lower>();
    return full;
}

Eigen::MatrixXcd sample_covariance(const SnapshotMatrix& x) {
    return sample_covariance(x, static_cast<int>(x.cols()));
}

std::string snapshots_csv(const SnapshotMatrix& x) {
    std::ostringstream out;
    out << "snapshot,element,re,im\n";
    for (Eigen::Index k = 0; k < x.cols(); ++k)
        for (Eigen::Index e = 0; e < x.rows(); ++e)
            out << k << ',' << e << ',' << format_double(x(e, k).real()) << ','
                << format_double(x(e, k).imag()) << '\n';
    return out.str();
}

SnapshotMatrix snapshots_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "snapshot,element,re,im")
        throw std::invalid_argument("snapshot CSV: missing 'snapshot,element,re,im' header");
    struct Entry {
        Eigen::Index k, e;
        std::complex<double> v;
    };
    std::vector<Entry> entries;
    Eigen::Index max_k = -1, max_e = -1;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        auto parts = split(line, ',');
        if (parts.size() != 4)
            throw std::invalid_argument("snapshot CSV line " + std::to_string(line_no) +
                                        ": expected 4 fields");
        const std::string where = "snapshot CSV line " + std::to_string(line_no);
        Entry ent;
        ent.k = parse_int(parts[0], where);
        ent.e = parse_int(parts[1], where);
        ent.v = {parse_double(parts[2], where), parse_double(parts[3], where)};
        if (ent.k < 0 || ent.e < 0)
            throw std::invalid_argument(where + ": negative index");
        max_k = std::max(max_k, ent.k);
        max_e = std::max(max_e, ent.e);
        entries.push_back(ent);
    }
    if (entries.empty())
        throw std::invalid_argument("snapshot CSV has no data rows");
    SnapshotMatrix x = SnapshotMatrix::Zero(max_e + 1, max_k + 1);
    for (const Entry& ent : entries)
        x(ent.e, ent.k) = ent.v;
    return x;
}

} // namespace hybridbeam
