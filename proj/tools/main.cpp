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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybridbeam/beamform.hpp"
#include "hybridbeam/config.hpp"
#include "hybridbeam/doa.hpp"
#include "hybridbeam/textio.hpp"

namespace hb = hybridbeam;
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
};

hb::RunConfig load_config(const GlobalOptions& opts) {
    hb::RunConfig cfg = opts.config_path.empty() ? hb::RunConfig{}
                                                 : hb::RunConfig::from_file(opts.config_path);
    if (opts.seed_override)
        cfg.seed = *opts.seed_override;
    return cfg;
}

fs::path out_path(const GlobalOptions& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return fs::path(opts.out_dir) / name;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

int cmd_geometry(const GlobalOptions& opts) {
    hb::RunConfig cfg = load_config(opts);
    hb::ArrayGeometry geometry = hb::build_geometry(cfg.geometry);
    fs::path path = out_path(opts, "geometry.csv");
    write_file(path, hb::geometry_csv(geometry));
    std::cout << "wrote " << path.string() << " (" << geometry.size() << " elements)\n";
    return kExitOk;
}

int cmd_doa_train(const GlobalOptions& opts) {
    hb::RunConfig cfg = load_config(opts);
    hb::ArrayGeometry geometry = hb::build_geometry(cfg.geometry);

    hb::LabeledDataset dataset = hb::generate_dataset(
        geometry, cfg.scheme, cfg.samples_per_sector, cfg.doa_snr_db,
        cfg.channel(geometry.size()), cfg.seed, cfg.n_snapshots, cfg.feature_dim);
    auto [train_set, test_set] = hb::split_dataset(dataset, cfg.train_fraction, cfg.seed);

    std::vector<double> sigma_grid =
        cfg.sigma_grid.empty() ? hb::default_sigma_grid(train_set.features) : cfg.sigma_grid;
    hb::CvResult cv =
        hb::kfold_cross_validate(train_set, cfg.kfold, cfg.gamma_grid, sigma_grid, cfg.seed);

    fs::path model_path = out_path(opts, "model.txt");
    {
        std::ofstream out(model_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write '" + model_path.string() + "'");
        hb::save_model(cv.model, out);
    }

    ordered_json report;
    report["gamma"] = cv.best_gamma;
    report["sigma"] = cv.best_sigma;
    report["fold_accuracies"] = cv.fold_accuracies;
    report["mean_cv_accuracy"] = cv.mean_accuracy;
    report["test_accuracy"] = hb::accuracy(cv.model, test_set);
    report["train_samples"] = train_set.size();
    report["test_samples"] = test_set.size();
    fs::path report_path = out_path(opts, "cv_report.json");
    write_file(report_path, report.dump(2) + "\n");

    std::cout << "wrote " << model_path.string() << " and " << report_path.string()
              << " (test accuracy " << report["test_accuracy"] << ")\n";
    return kExitOk;
}

int cmd_doa_estimate(const GlobalOptions& opts, const std::string& model_path,
                     const std::string& snapshots_path) {
    hb::RunConfig cfg = load_config(opts);
    hb::ArrayGeometry geometry = hb::build_geometry(cfg.geometry);

    std::ifstream model_in(model_path);
    if (!model_in)
        throw std::invalid_argument("cannot open model file '" + model_path + "'");
    hb::LsSvmModel model = hb::load_model(model_in);

    std::ifstream snap_in(snapshots_path);
    if (!snap_in)
        throw std::invalid_argument("cannot open snapshots file '" + snapshots_path + "'");
    hb::SnapshotMatrix snapshots = hb::snapshots_from_csv(snap_in);

    hb::DoaEstimate est =
        hb::estimate_doa(model, snapshots, geometry, cfg.scheme, cfg.grid_step_deg);

    ordered_json result;
    result["sector"] = est.sector;
    result["refined_angle_deg"] = est.refined_angle_deg;
    result["grid_points"] = est.spectrum.grid.size();
    fs::path json_path = out_path(opts, "estimate.json");
    write_file(json_path, result.dump(2) + "\n");
    fs::path spec_path = out_path(opts, "spectrum.csv");
    write_file(spec_path, hb::spectrum_csv(est.spectrum));

    std::cout << "sector " << est.sector << ", refined angle " << est.refined_angle_deg
              << " deg; wrote " << json_path.string() << " and " << spec_path.string() << "\n";
    return kExitOk;
}

int cmd_sinr(const GlobalOptions& opts) {
    hb::RunConfig cfg = load_config(opts);

    hb::ArrayConfig bowtie_cfg = cfg.geometry;
    bowtie_cfg.pattern.kind = hb::PatternKind::bowtie;
    hb::ArrayConfig dipole_cfg = cfg.geometry;
    dipole_cfg.pattern.kind = hb::PatternKind::dipole;
    hb::ArrayGeometry bowtie = hb::build_geometry(bowtie_cfg);
    hb::ArrayGeometry dipole = hb::build_geometry(dipole_cfg);

    std::vector<hb::ChannelModel> conditions = {
        hb::ChannelModel::preset("los-equal", bowtie.size()),
        hb::ChannelModel::preset("nlos-equal", bowtie.size()),
        hb::ChannelModel::preset("nlos-unequal", bowtie.size()),
    };
    hb::SinrReport report = hb::sinr_table(bowtie, dipole, conditions, cfg.seed);

    fs::path path = out_path(opts, "sinr.csv");
    write_file(path, hb::sinr_report_csv(report));
    std::cout << "wrote " << path.string() << "\n";

    auto cell = [&](const std::string& condition, const std::string& pattern) {
        for (const hb::SinrEntry& e : report.entries)
            if (e.condition == condition && e.element_pattern == pattern)
                return e.sinr_db;
        throw std::runtime_error("missing table cell " + condition + "/" + pattern);
    };
    int rc = kExitOk;
    for (const std::string pattern : {"bowtie", "dipole"}) {
        if (cell("los-equal", pattern) < cell("nlos-equal", pattern)) {
            std::cerr << "ordering violated: los-equal < nlos-equal for " << pattern << "\n";
            rc = kExitPropertyFailure;
        }
        if (cell("nlos-equal", pattern) < cell("nlos-unequal", pattern)) {
            std::cerr << "ordering violated: nlos-equal < nlos-unequal for " << pattern << "\n";
            rc = kExitPropertyFailure;
        }
    }
    for (const std::string condition : {"los-equal", "nlos-equal", "nlos-unequal"}) {
        if (cell(condition, "bowtie") < cell(condition, "dipole")) {
            std::cerr << "ordering violated: bowtie < dipole for " << condition << "\n";
            rc = kExitPropertyFailure;
        }
    }
    return rc;
}

int cmd_directivity(const GlobalOptions& opts) {
    hb::RunConfig cfg = load_config(opts);
    hb::ArrayGeometry geometry = hb::build_geometry(cfg.geometry);

    auto run_sweep = [&](hb::SweepAxis axis, const std::string& name) {
        auto scan = hb::directivity_scan(geometry, geometry.excitations, axis,
                                         cfg.sweep_fixed_deg, cfg.sweep_start_deg,
                                         cfg.sweep_stop_deg, cfg.sweep_step_deg,
                                         hb::deg2rad(cfg.quadrature_step_deg));
        fs::path path = out_path(opts, name);
        write_file(path, hb::scan_csv(scan));
        std::cout << "wrote " << path.string() << "\n";
    };
    if (cfg.sweep_axis == "theta" || cfg.sweep_axis == "both")
        run_sweep(hb::SweepAxis::theta, "directivity_theta.csv");
    if (cfg.sweep_axis == "phi" || cfg.sweep_axis == "both")
        run_sweep(hb::SweepAxis::phi, "directivity_phi.csv");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid cylindrical/circular array beamforming workbench"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    std::uint64_t seed_value = 0;
    app.add_option("--config", opts.config_path, "run configuration file (key = value lines)");
    app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed_value, "override the config seed");

    auto* geometry = app.add_subcommand("geometry", "write the element table CSV");
    auto* doa_train = app.add_subcommand("doa-train", "generate a dataset, cross-validate and "
                                                      "write the classifier model");
    auto* doa_estimate =
        app.add_subcommand("doa-estimate", "classify snapshots and refine the arrival angle");
    std::string model_path, snapshots_path;
    doa_estimate->add_option("--model", model_path, "trained model file")->required();
    doa_estimate->add_option("--snapshots", snapshots_path, "snapshot CSV file")->required();
    auto* sinr = app.add_subcommand("sinr", "condition-by-pattern SINR table");
    auto* directivity = app.add_subcommand("directivity", "steered directivity scans");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    if (*seed_opt)
        opts.seed_override = seed_value;

    try {
        if (*geometry)
            return cmd_geometry(opts);
        if (*doa_train)
            return cmd_doa_train(opts);
        if (*doa_estimate)
            return cmd_doa_estimate(opts, model_path, snapshots_path);
        if (*sinr)
            return cmd_sinr(opts);
        if (*directivity)
            return cmd_directivity(opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPropertyFailure;
    }
    return kExitUsage;
}
