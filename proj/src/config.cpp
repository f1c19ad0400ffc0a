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

#include "hybridbeam/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/textio.hpp"

namespace hybridbeam {

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::string stripped = trim(line);
        if (stripped.empty())
            continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");
        if (cfg.entries_.count(key))
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": duplicate key '" + key + "'");
        cfg.entries_[key] = Entry{value, line_no, false};
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse(in);
}

bool KeyValueConfig::has(const std::string& key) const {
    auto it = entries_.find(key);
    if (it != entries_.end())
        it->second.used = true;
    return it != entries_.end();
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    it->second.used = true;
    return it->second.value;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    it->second.used = true;
    return parse_double(it->second.value, "config line " + std::to_string(it->second.line) +
                                              " (" + key + ")");
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    it->second.used = true;
    return parse_int(it->second.value, "config line " + std::to_string(it->second.line) + " (" +
                                           key + ")");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    it->second.used = true;
    std::vector<double> out;
    for (const std::string& part : split(it->second.value, ','))
        out.push_back(parse_double(trim(part), "config line " + std::to_string(it->second.line) +
                                                   " (" + key + ")"));
    return out;
}

void KeyValueConfig::reject_unknown_keys() const {
    for (const auto& [key, entry] : entries_)
        if (!entry.used)
            throw std::invalid_argument("config line " + std::to_string(entry.line) +
                                        ": unknown key '" + key + "'");
}

std::optional<ChannelModel> RunConfig::channel(int n_elements) const {
    if (channel_preset == "none")
        return std::nullopt;
    ChannelModel m = ChannelModel::preset(channel_preset, n_elements);
    if (m.condition == ChannelCondition::LoS_equal)
        m.rician_k = channel_rician_k;
    if (m.correlation.kind == CorrelationSpec::Kind::equal)
        m.correlation = CorrelationSpec::equal(channel_rho);
    return m;
}

RunConfig RunConfig::from_kv(const KeyValueConfig& kv) {
    RunConfig c;
    c.geometry.n_per_ring = static_cast<int>(kv.get_int("geometry.n_per_ring", 20));
    c.geometry.rings_per_cylinder =
        static_cast<int>(kv.get_int("geometry.rings_per_cylinder", 2));
    c.geometry.n_cylinders = static_cast<int>(kv.get_int("geometry.n_cylinders", 3));
    c.geometry.vertical_spacing = kv.get_double("geometry.vertical_spacing", 0.5);
    c.geometry.radial_spacing = kv.get_double("geometry.radial_spacing", 0.5);
    c.geometry.carrier_frequency_hz = kv.get_double("geometry.carrier_frequency_hz", 10e9);
    c.geometry.pattern.kind =
        pattern_kind_from_string(kv.get_string("geometry.element_pattern", "isotropic"));
    c.geometry.pattern.flare_deg = kv.get_double("geometry.bowtie_flare_deg", 60.0);
    if (kv.has("geometry.ring_radii")) {
        c.geometry.radius_policy = RadiusPolicy::explicit_radii;
        c.geometry.explicit_radii = kv.get_doubles("geometry.ring_radii", {});
    }

    c.channel_preset = kv.get_string("channel.preset", "none");
    c.channel_rician_k = kv.get_double("channel.rician_k", 10.0);
    c.channel_rho = kv.get_double("channel.correlation_rho", 0.7);

    c.svm_gamma = kv.get_double("lssvm.gamma", 10.0);
    // default grid brackets the configured regularizer by a decade each way
    c.gamma_grid = kv.get_doubles(
        "lssvm.gamma_grid", {0.1 * c.svm_gamma, c.svm_gamma, 10.0 * c.svm_gamma});
    c.sigma_grid = kv.get_doubles("lssvm.sigma_grid", {});
    c.kfold = static_cast<int>(kv.get_int("lssvm.kfold", 5));
    c.train_fraction = kv.get_double("lssvm.train_fraction", 0.75);

    c.scheme.n_sectors = static_cast<int>(kv.get_int("doa.sectors", 3));
    c.scheme.fov_min_deg = kv.get_double("doa.fov_min_deg", -90.0);
    c.scheme.fov_max_deg = kv.get_double("doa.fov_max_deg", 90.0);
    c.scheme.elevation_theta_deg = kv.get_double("doa.elevation_theta_deg", 90.0);
    c.doa_snr_db = kv.get_double("doa.snr_db", 10.0);
    c.samples_per_sector = static_cast<int>(kv.get_int("doa.samples_per_sector", 67));
    c.n_snapshots = static_cast<int>(kv.get_int("doa.snapshots", 64));
    c.feature_dim = static_cast<int>(kv.get_int("doa.feature_dim", 56));
    c.grid_step_deg = kv.get_double("doa.grid_step_deg", 1.0);

    c.sweep_axis = kv.get_string("directivity.sweep", "both");
    c.sweep_fixed_deg = kv.get_double("directivity.fixed_deg", 45.0);
    c.sweep_start_deg = kv.get_double("directivity.start_deg", 0.0);
    c.sweep_stop_deg = kv.get_double("directivity.stop_deg", 90.0);
    c.sweep_step_deg = kv.get_double("directivity.step_deg", 5.0);
    c.quadrature_step_deg = kv.get_double("directivity.quadrature_step_deg", 1.0);

    c.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));

    kv.reject_unknown_keys();
    c.geometry.validate();
    c.scheme.validate();
    if (c.sweep_axis != "theta" && c.sweep_axis != "phi" && c.sweep_axis != "both")
        throw std::invalid_argument("directivity.sweep must be theta, phi or both");
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    return from_kv(KeyValueConfig::parse_file(path));
}

} // namespace hybridbeam
