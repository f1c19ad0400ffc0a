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

#include "hybridbeam/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/textio.hpp"

namespace hybridbeam {

PatternKind pattern_kind_from_string(const std::string& name) {
    if (name == "isotropic")
        return PatternKind::isotropic;
    if (name == "dipole")
        return PatternKind::dipole;
    if (name == "bowtie")
        return PatternKind::bowtie;
    throw std::invalid_argument("unknown element pattern '" + name +
                                "' (expected isotropic, dipole or bowtie)");
}

std::string to_string(PatternKind kind) {
    switch (kind) {
    case PatternKind::isotropic:
        return "isotropic";
    case PatternKind::dipole:
        return "dipole";
    case PatternKind::bowtie:
        return "bowtie";
    }
    return "?";
}

void ArrayConfig::validate() const {
    if (n_per_ring < 1)
        throw std::invalid_argument("n_per_ring must be >= 1");
    if (rings_per_cylinder < 1)
        throw std::invalid_argument("rings_per_cylinder must be >= 1");
    if (n_cylinders < 0)
        throw std::invalid_argument("n_cylinders must be >= 0");
    if (!(vertical_spacing > 0.0))
        throw std::invalid_argument("vertical_spacing must be positive");
    if (!(radial_spacing > 0.0))
        throw std::invalid_argument("radial_spacing must be positive");
    if (!(carrier_frequency_hz > 0.0))
        throw std::invalid_argument("carrier_frequency must be positive");
    if (pattern.kind == PatternKind::bowtie && !(pattern.flare_deg > 0.0))
        throw std::invalid_argument("bowtie flare angle must be positive");
    if (radius_policy == RadiusPolicy::explicit_radii) {
        if (static_cast<int>(explicit_radii.size()) != total_rings())
            throw std::invalid_argument(
                "explicit radius list has " + std::to_string(explicit_radii.size()) +
                " entries but the array has " + std::to_string(total_rings()) + " rings");
        for (double r : explicit_radii)
            if (!(r > 0.0) || !std::isfinite(r))
                throw std::invalid_argument("explicit radii must be positive and finite");
    }
    if (element_count() < 1)
        throw std::invalid_argument("configuration yields an empty array");
}

double wavelength(double frequency_hz) {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw std::invalid_argument("frequency must be positive");
    return kSpeedOfLight / frequency_hz;
}

ArrayGeometry build_geometry(const ArrayConfig& config) {
    config.validate();

    ArrayGeometry g;
    g.pattern = config.pattern;
    g.wavelength = wavelength(config.carrier_frequency_hz);
    g.elements.reserve(static_cast<std::size_t>(config.element_count()));

    const double lambda = g.wavelength;
    int ring_ordinal = 0; // position in the explicit radius list

    auto add_ring = [&](int cylinder, int ring, double z) {
        double radius;
        if (config.radius_policy == RadiusPolicy::explicit_radii)
            radius = config.explicit_radii[static_cast<std::size_t>(ring_ordinal)] * lambda;
        else
            radius = (cylinder == 0 ? 1 : cylinder) * config.radial_spacing * lambda;
        ++ring_ordinal;
        for (int n = 1; n <= config.n_per_ring; ++n) {
            double az = 2.0 * kPi * (n - 1) / config.n_per_ring;
            g.elements.push_back(
                {Eigen::Vector3d(radius * std::cos(az), radius * std::sin(az), z), ring, cylinder});
        }
    };

    add_ring(0, 1, 0.0); // base circular array
    for (int c = 1; c <= config.n_cylinders; ++c)
        for (int m = 1; m <= config.rings_per_cylinder; ++m)
            add_ring(c, m, (m - 1) * config.vertical_spacing * lambda);

    g.excitations = Eigen::VectorXcd::Ones(g.size());
    return g;
}

std::string geometry_csv(const ArrayGeometry& geometry) {
    std::ostringstream out;
    out << "index,x_m,y_m,z_m,ring,cylinder\n";
    for (int i = 0; i < geometry.size(); ++i) {
        const Element& e = geometry.elements[static_cast<std::size_t>(i)];
        out << i << ',' << format_double(e.position.x()) << ',' << format_double(e.position.y())
            << ',' << format_double(e.position.z()) << ',' << e.ring << ',' << e.cylinder << '\n';
    }
    return out.str();
}

} // namespace hybridbeam
