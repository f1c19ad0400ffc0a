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

#include "hybridbeam/radiation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/textio.hpp"

namespace hybridbeam {

namespace {
const std::complex<double> kJ(0.0, 1.0);
} // namespace

Direction Direction::canonicalized() const {
    double t = std::fmod(theta, 2.0 * kPi);
    double p = phi;
    if (t < 0.0)
        t += 2.0 * kPi;
    if (t > kPi) { // reflect through the pole
        t = 2.0 * kPi - t;
        p += kPi;
    }
    p = std::fmod(p, 2.0 * kPi);
    if (p < 0.0)
        p += 2.0 * kPi;
    return {t, p};
}

double element_gain(const ElementPattern& pattern, const Direction& direction) {
    if (pattern.kind == PatternKind::isotropic)
        return 1.0;
    const Direction d = direction.canonicalized();
    double s = std::sin(d.theta);
    if (s < 1e-12)
        return 0.0; // pole limit of the dipole family
    double dipole = std::cos(0.5 * kPi * std::cos(d.theta)) / s;
    if (pattern.kind == PatternKind::dipole)
        return dipole;
    // Bowtie surrogate: dipole pattern widened by the 60deg/flare exponent.
    double p = 60.0 / pattern.flare_deg;
    return std::pow(dipole, p);
}

double phase_shift(const ArrayGeometry& g, int element_index, const Direction& d) {
    if (element_index < 0 || element_index >= g.size())
        throw std::invalid_argument("element index out of range");
    const Eigen::Vector3d& r = g.elements[static_cast<std::size_t>(element_index)].position;
    double st = std::sin(d.theta);
    Eigen::Vector3d k(st * std::cos(d.phi), st * std::sin(d.phi), std::cos(d.theta));
    return 2.0 * kPi / g.wavelength * k.dot(r);
}

SteeringVector steering_vector(const ArrayGeometry& g, const Direction& d) {
    if (g.size() == 0)
        throw std::invalid_argument("steering vector of an empty geometry");
    const int n = g.size();
    SteeringVector sv;
    sv.direction = d;
    sv.entries.resize(n);
    const double gain = element_gain(g.pattern, d);
    for (int i = 0; i < n; ++i)
        sv.entries[i] = gain / n * std::exp(-kJ * phase_shift(g, i, d));
    return sv;
}

Eigen::VectorXcd steering_phasors(const ArrayGeometry& g, const Direction& d) {
    if (g.size() == 0)
        throw std::invalid_argument("steering phasors of an empty geometry");
    Eigen::VectorXcd a(g.size());
    const double gain = element_gain(g.pattern, d);
    for (int i = 0; i < g.size(); ++i)
        a[i] = gain * std::exp(-kJ * phase_shift(g, i, d));
    return a;
}

Eigen::VectorXcd steered_excitations(const ArrayGeometry& g, const Direction& d) {
    return steered_excitations(g, d, Eigen::VectorXcd::Ones(g.size()));
}

Eigen::VectorXcd steered_excitations(const ArrayGeometry& g, const Direction& d,
                                     const Eigen::VectorXcd& magnitudes_from) {
    if (magnitudes_from.size() != g.size())
        throw std::invalid_argument("excitation length does not match element count");
    Eigen::VectorXcd e(g.size());
    for (int i = 0; i < g.size(); ++i)
        e[i] = std::abs(magnitudes_from[i]) * std::exp(-kJ * phase_shift(g, i, d));
    return e;
}

std::complex<double> array_factor(const ArrayGeometry& g, const Eigen::VectorXcd& excitations,
                                  const Direction& d) {
    if (excitations.size() != g.size())
        throw std::invalid_argument("excitation length does not match element count");
    std::complex<double> af = 0.0;
    for (int i = 0; i < g.size(); ++i)
        af += excitations[i] * std::exp(kJ * phase_shift(g, i, d));
    return af;
}

namespace {

// Trapezoidal quadrature of |AF|^2 sin(theta) over the sphere. Phases are
// expanded per theta row as A_n cos(phi) + B_n sin(phi) + C_n to avoid
// recomputing the element dot products.
double pattern_integral(const ArrayGeometry& g, const Eigen::VectorXcd& exc, double step) {
    const int n_theta = static_cast<int>(std::lround(kPi / step));
    const int n_phi = static_cast<int>(std::lround(2.0 * kPi / step));
    if (n_theta < 1 || n_phi < 1 || std::abs(n_theta * step - kPi) > 1e-9)
        throw std::invalid_argument("grid step must divide pi");

    const int n = g.size();
    const double k0 = 2.0 * kPi / g.wavelength;
    double integral = 0.0;
    for (int it = 0; it <= n_theta; ++it) {
        const double theta = it * step;
        const double st = std::sin(theta);
        const double ct = std::cos(theta);
        const double w_theta = (it == 0 || it == n_theta) ? 0.5 : 1.0;
        double row = 0.0;
        for (int ip = 0; ip <= n_phi; ++ip) {
            const double phi = ip * step;
            const double w_phi = (ip == 0 || ip == n_phi) ? 0.5 : 1.0;
            const double kx = st * std::cos(phi);
            const double ky = st * std::sin(phi);
            std::complex<double> af = 0.0;
            for (int e = 0; e < n; ++e) {
                const Eigen::Vector3d& r = g.elements[static_cast<std::size_t>(e)].position;
                const double ph = k0 * (kx * r.x() + ky * r.y() + ct * r.z());
                af += exc[e] * std::complex<double>(std::cos(ph), std::sin(ph));
            }
            row += w_phi * std::norm(af);
        }
        integral += w_theta * row * st;
    }
    return integral * step * step;
}

} // namespace

double directivity_dbi(const ArrayGeometry& g, const Eigen::VectorXcd& excitations,
                       const Direction& steer, double grid_step_rad) {
    if (excitations.size() != g.size())
        throw std::invalid_argument("excitation length does not match element count");
    if (excitations.cwiseAbs().maxCoeff() <= 0.0)
        throw std::invalid_argument("all-zero excitations have no radiated power");
    const double num = 4.0 * kPi * std::norm(array_factor(g, excitations, steer));
    const double den = pattern_integral(g, excitations, grid_step_rad);
    return 10.0 * std::log10(num / den);
}

std::vector<ScanPoint> directivity_scan(const ArrayGeometry& g,
                                        const Eigen::VectorXcd& excitations, SweepAxis axis,
                                        double fixed_angle_deg, double start_deg, double stop_deg,
                                        double step_deg, double quad_step_rad) {
    if (!(step_deg > 0.0) || stop_deg < start_deg)
        throw std::invalid_argument("empty sweep range");
    std::vector<ScanPoint> scan;
    const int n_steps = static_cast<int>(std::lround((stop_deg - start_deg) / step_deg));
    for (int i = 0; i <= n_steps; ++i) {
        const double angle_deg = start_deg + i * step_deg;
        Direction d = (axis == SweepAxis::theta)
                          ? Direction::from_degrees(angle_deg, fixed_angle_deg)
                          : Direction::from_degrees(fixed_angle_deg, angle_deg);
        Eigen::VectorXcd exc = steered_excitations(g, d, excitations);
        scan.push_back({angle_deg, directivity_dbi(g, exc, d, quad_step_rad)});
    }
    return scan;
}

std::string scan_csv(const std::vector<ScanPoint>& scan) {
    std::ostringstream out;
    out << "angle_deg,directivity_dbi\n";
    for (const ScanPoint& p : scan)
        out << format_double(p.angle_deg) << ',' << format_double(p.directivity_dbi) << '\n';
    return out.str();
}

Eigen::VectorXcd kronecker_steering(const std::vector<Eigen::VectorXcd>& parts) {
    if (parts.empty())
        throw std::invalid_argument("kronecker_steering needs at least one part");
    Eigen::VectorXcd acc = parts.front();
    for (std::size_t p = 1; p < parts.size(); ++p) {
        const Eigen::VectorXcd& next = parts[p];
        Eigen::VectorXcd out(acc.size() * next.size());
        for (Eigen::Index i = 0; i < acc.size(); ++i)
            out.segment(i * next.size(), next.size()) = acc[i] * next;
        acc.swap(out);
    }
    return acc;
}

} // namespace hybridbeam
