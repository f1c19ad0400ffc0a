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
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hybridbeam {

struct KernelSpec {
    enum class Kind { rbf, linear };
    Kind kind = Kind::rbf;
    double sigma = 1.0; // rbf width

    static KernelSpec rbf(double sigma);
    static KernelSpec linear();
    void validate() const;
};

// Feature rows with integer labels in 1..n_classes.
struct LabeledDataset {
    Eigen::MatrixXd features; // n x d
    std::vector<int> labels;  // length n
    int n_classes = 0;

    int size() const { return static_cast<int>(features.rows()); }
    int dim() const { return static_cast<int>(features.cols()); }
    void validate() const;
};

// One-vs-rest least-squares SVM. Each class is trained against +/-1 targets
// by solving the KKT linear system
//   [ 0   1^T         ] [ b ]   [ 0 ]
//   [ 1   Omega + I/g ] [ a ] = [ y ]
// with Omega the kernel Gram matrix.
struct LsSvmModel {
    Eigen::MatrixXd alphas; // n x G Lagrange multipliers
    Eigen::VectorXd biases; // G
    double gamma = 10.0;
    KernelSpec kernel;
    Eigen::MatrixXd training_features; // retained copy, n x d
    int n_classes = 0;

    int feature_dim() const { return static_cast<int>(training_features.cols()); }
};

double kernel(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Gram matrix, symmetrized so Omega == Omega^T exactly.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& x);

// Row i has 1 at column labels[i], 0 elsewhere.
Eigen::MatrixXd encode_labels(const std::vector<int>& labels, int n_classes);

// Trains by one Cholesky factorization of Omega + I/gamma shared across the
// classes. gamma may be +inf (no regularization); a singular kernel system is
// then reported instead of silently regularized. The KKT residual and the
// sum-of-multipliers condition are verified before the model is returned.
LsSvmModel train(const LabeledDataset& data, double gamma, const KernelSpec& kernel);

// Numerically stable softmax (max subtraction).
Eigen::VectorXd softmax(const Eigen::VectorXd& scores);

// Raw class scores s_j = sum_i a_ij k(x_i, x) + b_j.
Eigen::VectorXd raw_scores(const LsSvmModel& model, const Eigen::VectorXd& x);

// Softmax of the raw scores.
Eigen::VectorXd scores(const LsSvmModel& model, const Eigen::VectorXd& x);

// Argmax of scores(); ties break toward the lowest class index. Labels are
// 1-based.
int predict(const LsSvmModel& model, const Eigen::VectorXd& x);

double accuracy(const LsSvmModel& model, const LabeledDataset& data);

// Seeded stratified split; each class keeps its proportion within one sample.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& data,
                                                        double train_fraction,
                                                        std::uint64_t seed);

struct CvResult {
    LsSvmModel model; // retrained on the full dataset
    double best_gamma = 0.0;
    double best_sigma = 0.0;
    std::vector<double> fold_accuracies; // winning pair, one per fold
    double mean_accuracy = 0.0;
};

// Stratified k-fold grid search over (gamma, sigma) rbf pairs. Ties prefer
// the smaller gamma, then the smaller sigma.
CvResult kfold_cross_validate(const LabeledDataset& data, int k,
                              const std::vector<double>& gamma_grid,
                              const std::vector<double>& sigma_grid, std::uint64_t seed);

// Default rbf width grid: {0.25, 0.5, 1, 2, 4} * median pairwise distance.
double median_pairwise_distance(const Eigen::MatrixXd& features);
std::vector<double> default_sigma_grid(const Eigen::MatrixXd& features);

// Versioned text serialization (labeled CSV blocks).
void save_model(const LsSvmModel& model, std::ostream& out);
LsSvmModel load_model(std::istream& in);

// CSV with header label,f1,...,fd
std::string dataset_csv(const LabeledDataset& data);
LabeledDataset dataset_from_csv(std::istream& in);

} // namespace hybridbeam
