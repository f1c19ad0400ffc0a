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

#include "hybridbeam/lssvm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hybridbeam/rng.hpp"
#include "hybridbeam/textio.hpp"

namespace hybridbeam {

KernelSpec KernelSpec::rbf(double sigma) {
    KernelSpec s;
    s.kind = Kind::rbf;
    s.sigma = sigma;
    s.validate();
    return s;
}

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.kind = Kind::linear;
    return s;
}

void KernelSpec::validate() const {
    if (kind == Kind::rbf && !(sigma > 0.0))
        throw std::invalid_argument("rbf sigma must be positive");
}

void LabeledDataset::validate() const {
    if (n_classes < 1)
        throw std::invalid_argument("dataset needs at least one class");
    if (static_cast<int>(labels.size()) != size())
        throw std::invalid_argument("label count does not match feature rows");
    if (size() < n_classes)
        throw std::invalid_argument("fewer samples than classes");
    for (int y : labels)
        if (y < 1 || y > n_classes)
            throw std::invalid_argument("label out of range 1..n_classes");
    if (!features.allFinite())
        throw std::invalid_argument("features must be finite");
}

double kernel(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("kernel arguments must have equal dimension");
    spec.validate();
    if (spec.kind == KernelSpec::Kind::linear)
        return x.dot(y);
    return std::exp(-(x - y).squaredNorm() / (2.0 * spec.sigma * spec.sigma));
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& x) {
    spec.validate();
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd k(n, n);
    if (spec.kind == KernelSpec::Kind::linear) {
        k.noalias() = x * x.transpose();
    } else {
        Eigen::VectorXd sq = x.rowwise().squaredNorm();
        k.noalias() = -2.0 * x * x.transpose();
        k.colwise() += sq;
        k.rowwise() += sq.transpose();
        k = (-k / (2.0 * spec.sigma * spec.sigma)).array().exp();
    }
    // exact symmetry
    Eigen::MatrixXd kt = k.transpose();
    k = 0.5 * (k + kt);
    return k;
}

Eigen::MatrixXd encode_labels(const std::vector<int>& labels, int n_classes) {
    if (n_classes < 1)
        throw std::invalid_argument("n_classes must be >= 1");
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 1 || labels[i] > n_classes)
            throw std::invalid_argument("label out of range 1..n_classes");
        y(static_cast<Eigen::Index>(i), labels[i] - 1) = 1.0;
    }
    return y;
}

LsSvmModel train(const LabeledDataset& data, double gamma, const KernelSpec& kernel_spec) {
    data.validate();
    kernel_spec.validate();
    if (std::isnan(gamma) || gamma <= 0.0)
        throw std::invalid_argument("gamma must be positive (use +inf for no regularization)");

    const Eigen::Index n = data.size();
    const int g = data.n_classes;

    Eigen::MatrixXd omega = kernel_matrix(kernel_spec, data.features);
    if (std::isfinite(gamma))
        omega.diagonal().array() += 1.0 / gamma;

    Eigen::LLT<Eigen::MatrixXd> llt(omega);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(
            "LS-SVM kernel system is singular (duplicated samples with gamma = inf?); "
            "use a finite gamma");

    // Block elimination of the saddle system: a = S^-1 (y - b 1), with the
    // bias fixed by the zero-sum condition 1^T a = 0.
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd v = llt.solve(ones);
    const double denom = ones.dot(v);
    if (!(std::abs(denom) > 1e-12 * n))
        throw std::runtime_error("LS-SVM bias system is singular");

    Eigen::MatrixXd targets = 2.0 * encode_labels(data.labels, g).array() - 1.0; // +/-1
    LsSvmModel model;
    model.alphas.resize(n, g);
    model.biases.resize(g);
    model.gamma = gamma;
    model.kernel = kernel_spec;
    model.training_features = data.features;
    model.n_classes = g;

    for (int j = 0; j < g; ++j) {
        Eigen::VectorXd y = targets.col(j);
        Eigen::VectorXd u = llt.solve(y);
        const double b = ones.dot(u) / denom;
        Eigen::VectorXd a = u - b * v;
        model.biases[j] = b;
        model.alphas.col(j) = a;

        // KKT residual of the full bordered system, relative to ||y||
        const double r_top = std::abs(ones.dot(a));
        const double r_rest = (omega * a + b * ones - y).norm();
        const double rel = std::sqrt(r_top * r_top + r_rest * r_rest) / y.norm();
        if (!(rel < 1e-8))
            throw std::runtime_error("LS-SVM KKT residual above tolerance: " + format_double(rel));
        if (!(r_top < 1e-8))
            throw std::runtime_error("LS-SVM multiplier sum above tolerance: " +
                                     format_double(r_top));
    }
    return model;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& s) {
    Eigen::VectorXd e = (s.array() - s.maxCoeff()).exp();
    return e / e.sum();
}

Eigen::VectorXd raw_scores(const LsSvmModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.training_features.cols())
        throw std::invalid_argument("input dimension does not match the trained model");
    const Eigen::Index n = model.training_features.rows();
    Eigen::VectorXd k(n);
    if (model.kernel.kind == KernelSpec::Kind::linear) {
        k.noalias() = model.training_features * x;
    } else {
        const double inv = 1.0 / (2.0 * model.kernel.sigma * model.kernel.sigma);
        k = (-(model.training_features.rowwise() - x.transpose()).rowwise().squaredNorm() * inv)
                .array()
                .exp();
    }
    return model.alphas.transpose() * k + model.biases;
}

Eigen::VectorXd scores(const LsSvmModel& model, const Eigen::VectorXd& x) {
    return softmax(raw_scores(model, x));
}

int predict(const LsSvmModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd s = scores(model, x);
    int best = 0;
    for (int j = 1; j < s.size(); ++j)
        if (s[j] > s[best])
            best = j;
    return best + 1;
}

double accuracy(const LsSvmModel& model, const LabeledDataset& data) {
    if (data.size() == 0)
        return 0.0;
    int hits = 0;
    for (int i = 0; i < data.size(); ++i)
        if (predict(model, data.features.row(i).transpose()) == data.labels[static_cast<std::size_t>(i)])
            ++hits;
    return static_cast<double>(hits) / data.size();
}

namespace {

std::vector<std::vector<int>> indices_by_class(const LabeledDataset& data) {
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(data.n_classes));
    for (int i = 0; i < data.size(); ++i)
        by_class[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)] - 1)].push_back(i);
    return by_class;
}

void seeded_shuffle(std::vector<int>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(v[i - 1], v[j]);
    }
}

LabeledDataset subset(const LabeledDataset& data, const std::vector<int>& rows) {
    LabeledDataset out;
    out.n_classes = data.n_classes;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = data.features.row(rows[i]);
        out.labels.push_back(data.labels[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

} // namespace

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& data,
                                                        double train_fraction,
                                                        std::uint64_t seed) {
    data.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0, 1)");

    auto by_class = indices_by_class(data);
    for (const auto& members : by_class)
        if (members.size() < 2)
            throw std::invalid_argument("every class needs at least 2 samples to split");

    // Largest-remainder apportionment: the overall train count is exact and
    // each class stays within one sample of its proportional share.
    const std::size_t n_classes = by_class.size();
    std::vector<std::size_t> take(n_classes);
    std::vector<std::pair<double, std::size_t>> remainders(n_classes);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        const double exact = train_fraction * static_cast<double>(by_class[c].size());
        take[c] = static_cast<std::size_t>(std::floor(exact));
        remainders[c] = {exact - static_cast<double>(take[c]), c};
        assigned += take[c];
    }
    auto total = static_cast<std::size_t>(std::llround(train_fraction * data.size()));
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t i = 0; i < n_classes && assigned < total; ++i, ++assigned)
        ++take[remainders[i].second];
    for (std::size_t c = 0; c < n_classes; ++c)
        take[c] = std::clamp(take[c], std::size_t{1}, by_class[c].size() - 1);

    SplitMix64 rng(seed);
    std::vector<int> train_rows, test_rows;
    for (std::size_t c = 0; c < n_classes; ++c) {
        auto& members = by_class[c];
        seeded_shuffle(members, rng);
        train_rows.insert(train_rows.end(), members.begin(), members.begin() + take[c]);
        test_rows.insert(test_rows.end(), members.begin() + take[c], members.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {subset(data, train_rows), subset(data, test_rows)};
}

double median_pairwise_distance(const Eigen::MatrixXd& features) {
    const Eigen::Index n = features.rows();
    if (n < 2)
        throw std::invalid_argument("median pairwise distance needs >= 2 rows");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            d.push_back((features.row(i) - features.row(j)).norm());
    auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    return *mid;
}

std::vector<double> default_sigma_grid(const Eigen::MatrixXd& features) {
    double med = median_pairwise_distance(features);
    if (!(med > 0.0))
        med = 1.0;
    return {0.25 * med, 0.5 * med, med, 2.0 * med, 4.0 * med};
}

CvResult kfold_cross_validate(const LabeledDataset& data, int k,
                              const std::vector<double>& gamma_grid,
                              const std::vector<double>& sigma_grid, std::uint64_t seed) {
    data.validate();
    if (k < 2)
        throw std::invalid_argument("k must be >= 2");
    if (gamma_grid.empty() || sigma_grid.empty())
        throw std::invalid_argument("hyperparameter grids must be nonempty");

    auto by_class = indices_by_class(data);
    for (const auto& members : by_class)
        if (static_cast<int>(members.size()) < k)
            throw std::invalid_argument("k exceeds the smallest class count");

    // Stratified folds: shuffle within each class, deal round-robin.
    SplitMix64 rng(seed);
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    for (auto& members : by_class) {
        seeded_shuffle(members, rng);
        for (std::size_t i = 0; i < members.size(); ++i)
            folds[i % static_cast<std::size_t>(k)].push_back(members[i]);
    }

    std::vector<double> gammas = gamma_grid, sigmas = sigma_grid;
    std::sort(gammas.begin(), gammas.end());
    std::sort(sigmas.begin(), sigmas.end());

    CvResult result;
    double best_mean = -1.0;
    for (double gamma : gammas)
        for (double sigma : sigmas) {
            std::vector<double> fold_acc;
            fold_acc.reserve(static_cast<std::size_t>(k));
            for (int f = 0; f < k; ++f) {
                std::vector<int> train_rows;
                for (int other = 0; other < k; ++other)
                    if (other != f)
                        train_rows.insert(train_rows.end(), folds[static_cast<std::size_t>(other)].begin(),
                                          folds[static_cast<std::size_t>(other)].end());
                std::sort(train_rows.begin(), train_rows.end());
                LsSvmModel m = train(subset(data, train_rows), gamma, KernelSpec::rbf(sigma));
                fold_acc.push_back(accuracy(m, subset(data, folds[static_cast<std::size_t>(f)])));
            }
            double mean = 0.0;
            for (double a : fold_acc)
                mean += a;
            mean /= k;
            // strict improvement keeps the smallest (gamma, sigma) on ties
            if (mean > best_mean) {
                best_mean = mean;
                result.best_gamma = gamma;
                result.best_sigma = sigma;
                result.fold_accuracies = fold_acc;
                result.mean_accuracy = mean;
            }
        }

    result.model = train(data, result.best_gamma, KernelSpec::rbf(result.best_sigma));
    return result;
}

void save_model(const LsSvmModel& model, std::ostream& out) {
    out << "hybridbeam-lssvm v1\n";
    out << "classes," << model.n_classes << '\n';
    out << "samples," << model.training_features.rows() << '\n';
    out << "features," << model.training_features.cols() << '\n';
    out << "kernel," << (model.kernel.kind == KernelSpec::Kind::rbf ? "rbf" : "linear") << '\n';
    out << "sigma," << format_double(model.kernel.sigma) << '\n';
    out << "gamma," << format_double(model.gamma) << '\n';
    out << "biases\n";
    for (int j = 0; j < model.n_classes; ++j)
        out << (j ? "," : "") << format_double(model.biases[j]);
    out << '\n' << "alphas\n";
    for (Eigen::Index i = 0; i < model.alphas.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.alphas.cols(); ++j)
            out << (j ? "," : "") << format_double(model.alphas(i, j));
        out << '\n';
    }
    out << "training_features\n";
    for (Eigen::Index i = 0; i < model.training_features.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.training_features.cols(); ++j)
            out << (j ? "," : "") << format_double(model.training_features(i, j));
        out << '\n';
    }
}

namespace {

std::string expect_line(std::istream& in, const std::string& what) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("model file: unexpected end of file reading " + what);
    return trim(line);
}

std::string expect_field(std::istream& in, const std::string& key) {
    auto parts = split(expect_line(in, key), ',');
    if (parts.size() != 2 || trim(parts[0]) != key)
        throw std::invalid_argument("model file: expected '" + key + ",<value>'");
    return trim(parts[1]);
}

} // namespace

LsSvmModel load_model(std::istream& in) {
    if (expect_line(in, "header") != "hybridbeam-lssvm v1")
        throw std::invalid_argument("model file: unsupported format or version");
    LsSvmModel m;
    m.n_classes = static_cast<int>(parse_int(expect_field(in, "classes"), "classes"));
    const auto n = parse_int(expect_field(in, "samples"), "samples");
    const auto d = parse_int(expect_field(in, "features"), "features");
    const std::string kind = expect_field(in, "kernel");
    const double sigma = parse_double(expect_field(in, "sigma"), "sigma");
    m.gamma = parse_double(expect_field(in, "gamma"), "gamma");
    if (m.n_classes < 1 || n < 1 || d < 1)
        throw std::invalid_argument("model file: invalid dimensions");
    m.kernel = kind == "rbf" ? KernelSpec::rbf(sigma) : KernelSpec::linear();

    if (expect_line(in, "biases") != "biases")
        throw std::invalid_argument("model file: expected 'biases' block");
    auto bias_parts = split(expect_line(in, "bias values"), ',');
    if (static_cast<int>(bias_parts.size()) != m.n_classes)
        throw std::invalid_argument("model file: bias count mismatch");
    m.biases.resize(m.n_classes);
    for (int j = 0; j < m.n_classes; ++j)
        m.biases[j] = parse_double(bias_parts[static_cast<std::size_t>(j)], "bias");

    auto read_block = [&](const std::string& name, Eigen::Index rows,
                          Eigen::Index cols) -> Eigen::MatrixXd {
        if (expect_line(in, name) != name)
            throw std::invalid_argument("model file: expected '" + name + "' block");
        Eigen::MatrixXd mat(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            auto parts = split(expect_line(in, name + " row"), ',');
            if (static_cast<Eigen::Index>(parts.size()) != cols)
                throw std::invalid_argument("model file: " + name + " column mismatch");
            for (Eigen::Index j = 0; j < cols; ++j)
                mat(i, j) = parse_double(parts[static_cast<std::size_t>(j)], name);
        }
        return mat;
    };
    m.alphas = read_block("alphas", n, m.n_classes);
    m.training_features = read_block("training_features", n, d);
    return m;
}

std::string dataset_csv(const LabeledDataset& data) {
    std::ostringstream out;
    out << "label";
    for (int j = 1; j <= data.dim(); ++j)
        out << ",f" << j;
    out << '\n';
    for (int i = 0; i < data.size(); ++i) {
        out << data.labels[static_cast<std::size_t>(i)];
        for (int j = 0; j < data.dim(); ++j)
            out << ',' << format_double(data.features(i, j));
        out << '\n';
    }
    return out.str();
}

LabeledDataset dataset_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("dataset CSV: empty file");
    auto header = split(trim(line), ',');
    if (header.size() < 2 || header[0] != "label")
        throw std::invalid_argument("dataset CSV: expected 'label,f1,...' header");
    const auto d = static_cast<Eigen::Index>(header.size() - 1);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        auto parts = split(line, ',');
        if (static_cast<Eigen::Index>(parts.size()) != d + 1)
            throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) +
                                        ": field count mismatch");
        const std::string where = "dataset CSV line " + std::to_string(line_no);
        labels.push_back(static_cast<int>(parse_int(parts[0], where)));
        std::vector<double> row(static_cast<std::size_t>(d));
        for (Eigen::Index j = 0; j < d; ++j)
            row[static_cast<std::size_t>(j)] = parse_double(parts[static_cast<std::size_t>(j + 1)], where);
        rows.push_back(std::move(row));
    }
    LabeledDataset data;
    data.labels = labels;
    data.n_classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
    data.features.resize(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            data.features(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    data.validate();
    return data;
}

} // namespace hybridbeam
