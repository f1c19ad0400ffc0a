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

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hybridbeam {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

enum class PatternKind { isotropic, dipole, bowtie };

// Analytic element gain model. The bowtie is a dipole pattern raised to the
// exponent 60deg/flare, so wider flares give broader beams; at the default
// 60deg flare it coincides with the half-wave dipole.
struct ElementPattern {
    PatternKind kind = PatternKind::isotropic;
    double flare_deg = 60.0;
};

PatternKind pattern_kind_from_string(const std::string& name);
std::string to_string(PatternKind kind);

enum class RadiusPolicy { arc_spacing, explicit_radii };

// Build parameters for the hybrid array: n_cylinders stacked-ring cylinders
// plus one base ring, all concentric about the z axis.
struct ArrayConfig {
    int n_per_ring = 20;           // elements per circular ring
    int rings_per_cylinder = 2;    // rings stacked in each cylinder
    int n_cylinders = 3;           // cylinders above the base ring
    double vertical_spacing = 0.5; // ring-to-ring height step, wavelengths
    double radial_spacing = 0.5;   // cylinder-to-cylinder radius step, wavelengths
    double carrier_frequency_hz = 10e9;
    ElementPattern pattern;
    RadiusPolicy radius_policy = RadiusPolicy::arc_spacing;
    // One radius per physical ring (wavelengths), base ring first, then the
    // rings of cylinder 1, 2, ... in stacking order.
    std::vector<double> explicit_radii;

    int total_rings() const { return n_cylinders * rings_per_cylinder + 1; }
    int element_count() const { return n_per_ring * total_rings(); }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct Element {
    Eigen::Vector3d position; // meters
    int ring;                 // 1-based ring index within its cylinder
    int cylinder;             // 0 = base ring, 1..M = cylinders
};

// Immutable element layout plus per-element complex excitations. Safe to
// share across threads after construction.
struct ArrayGeometry {
    std::vector<Element> elements;
    ElementPattern pattern;
    double wavelength = 0.0;      // meters
    Eigen::VectorXcd excitations; // default uniform 1 + 0j

    int size() const { return static_cast<int>(elements.size()); }
};

// lambda = c0 / f
double wavelength(double frequency_hz);

// Elements are ordered cylinder-major (base ring first), ring-major,
// azimuth-minor. Ring m of a cylinder sits at z = (m-1)*d_v*lambda; cylinder
// c has radius c*d_r*lambda and the base ring d_r*lambda. Element n of a ring
// sits at azimuth 2*pi*(n-1)/N.
ArrayGeometry build_geometry(const ArrayConfig& config);

// CSV with header: index,x_m,y_m,z_m,ring,cylinder
std::string geometry_csv(const ArrayGeometry& geometry);

} // namespace hybridbeam
