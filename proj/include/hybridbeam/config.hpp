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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridbeam/channel.hpp"
#include "hybridbeam/doa.hpp"

namespace hybridbeam {

// Plain `key = value` text, one pair per line, '#' comments. Keys are dotted
// section names, e.g. geometry.n_per_ring. Errors carry the line number.
class KeyValueConfig {
  public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig parse_file(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::vector<double> get_doubles(const std::string& key,
                                    const std::vector<double>& fallback) const;

    // Throws for keys that were never read (typo protection).
    void reject_unknown_keys() const;

  private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    std::map<std::string, Entry> entries_;
};

// Assembled run settings for the CLI with documented defaults.
struct RunConfig {
    ArrayConfig geometry;

    std::string channel_preset = "none"; // none | los-equal | nlos-unequal | nlos-equal
    double channel_rician_k = 10.0;
    double channel_rho = 0.5;

    double svm_gamma = 10.0;
    std::vector<double> gamma_grid = {1.0, 10.0, 100.0};
    std::vector<double> sigma_grid; // empty: derived from the median pairwise distance
    int kfold = 5;
    double train_fraction = 0.75;

    SectorScheme scheme;
    double doa_snr_db = 10.0;
    int samples_per_sector = 67;
    int n_snapshots = 64;
    int feature_dim = 56;
    double grid_step_deg = 1.0;

    std::string sweep_axis = "both"; // theta | phi | both
    double sweep_fixed_deg = 45.0;
    double sweep_start_deg = 0.0;
    double sweep_stop_deg = 90.0;
    double sweep_step_deg = 5.0;
    double quadrature_step_deg = 1.0;

    std::uint64_t seed = 1;

    // Channel preset instance for this geometry; nullopt when "none".
    std::optional<ChannelModel> channel(int n_elements) const;

    static RunConfig from_kv(const KeyValueConfig& kv);
    static RunConfig from_file(const std::string& path);
};

} // namespace hybridbeam
