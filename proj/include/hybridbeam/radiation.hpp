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

#include <complex>
#include <string>
#include <vector>

#include "hybridbeam/geometry.hpp"

namespace hybridbeam {

// Standard spherical convention: theta is the polar angle from +z in [0, pi],
// phi the azimuth from +x in [0, 2*pi).
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    static Direction from_degrees(double theta_deg, double phi_deg) {
        return Direction{deg2rad(theta_deg), deg2rad(phi_deg)}.canonicalized();
    }
    Direction canonicalized() const;
};

struct SteeringVector {
    Eigen::VectorXcd entries;
    Direction direction;
};

// Element gain toward a direction; >= 0, with the dipole/bowtie pole limit 0.
double element_gain(const ElementPattern& pattern, const Direction& direction);

// Plane-wave phase K.r_n in radians:
// (2*pi/lambda) * (sin(theta)cos(phi) x + sin(theta)sin(phi) y + cos(theta) z)
double phase_shift(const ArrayGeometry& g, int element_index, const Direction& d);

// Entry n = g_n(dir)/N * exp(-j K.r_n). For the hybrid array this is the
// concatenation of the sub-array vectors in element order.
SteeringVector steering_vector(const ArrayGeometry& g, const Direction& d);

// Un-normalized steering phasors a_n = g_n(dir) * exp(-j K.r_n); the vector
// the MVDR distortionless constraint is written against.
Eigen::VectorXcd steering_phasors(const ArrayGeometry& g, const Direction& d);

// Unit-magnitude excitations that phase-align the array factor toward d,
// optionally keeping the magnitudes of an existing excitation vector.
Eigen::VectorXcd steered_excitations(const ArrayGeometry& g, const Direction& d);
Eigen::VectorXcd steered_excitations(const ArrayGeometry& g, const Direction& d,
                                     const Eigen::VectorXcd& magnitudes_from);

// AF(theta, phi) = sum_n I_n exp(+j K.r_n)
std::complex<double> array_factor(const ArrayGeometry& g, const Eigen::VectorXcd& excitations,
                                  const Direction& d);

// D0 = 4*pi*|AF(d0)|^2 / integral(|AF|^2 sin(theta) dtheta dphi), evaluated
// with trapezoidal quadrature at grid_step_rad, returned in dBi.
double directivity_dbi(const ArrayGeometry& g, const Eigen::VectorXcd& excitations,
                       const Direction& steer, double grid_step_rad = deg2rad(1.0));

enum class SweepAxis { theta, phi };

struct ScanPoint {
    double angle_deg;
    double directivity_dbi;
};

// Re-steers the excitation phases to each sweep direction (magnitudes kept)
// and evaluates the directivity there. Sweep angles are taken in degrees,
// matching the emitted CSV.
std::vector<ScanPoint> directivity_scan(const ArrayGeometry& g,
                                        const Eigen::VectorXcd& excitations, SweepAxis axis,
                                        double fixed_angle_deg, double start_deg, double stop_deg,
                                        double step_deg, double quad_step_rad = deg2rad(1.0));

// CSV with header: angle_deg,directivity_dbi
std::string scan_csv(const std::vector<ScanPoint>& scan);

// Kronecker composition of sub-array steering vectors, for factorized
// processing experiments. Dimension is the product of the part lengths.
Eigen::VectorXcd kronecker_steering(const std::vector<Eigen::VectorXcd>& parts);

} // namespace hybridbeam
